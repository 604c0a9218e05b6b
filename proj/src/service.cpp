#include "geoproof/service.hpp"

#include <algorithm>
#include <set>

#include "geoproof/errors.hpp"
#include "httplib.h"
#include "json.hpp"

namespace geoproof {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

std::vector<fs::path> files_with_extension(const fs::path& dir, std::string_view ext) {
  std::vector<fs::path> out;
  if (!fs::is_directory(dir)) return out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ext) out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

void send_json(httplib::Response& res, int status, const ordered_json& body) {
  res.status = status;
  res.set_content(body.dump(2) + "\n", "application/json");
}

void send_error(httplib::Response& res, int status, std::string_view code, std::string_view message,
                ordered_json detail = ordered_json::object()) {
  send_json(res, status,
            ordered_json{{"code", code}, {"message", message}, {"detail", std::move(detail)}});
}

int status_for(const Error& e) {
  if (dynamic_cast<const NothingMissing*>(&e)) return 409;
  if (dynamic_cast<const DomainError*>(&e)) return 422;
  return 400;
}

std::optional<ordered_json> parse_body(const httplib::Request& req, httplib::Response& res) {
  try {
    auto body = ordered_json::parse(req.body);
    if (!body.is_object()) {
      send_error(res, 400, "BadRequest", "request body must be a JSON object");
      return std::nullopt;
    }
    return body;
  } catch (const nlohmann::json::parse_error& e) {
    send_error(res, 400, "BadRequest", "request body is not valid JSON", {{"parser", e.what()}});
    return std::nullopt;
  }
}

std::optional<std::string> string_field(const ordered_json& body, const char* name,
                                        httplib::Response& res) {
  auto it = body.find(name);
  if (it == body.end() || !it->is_string()) {
    send_error(res, 400, "BadRequest", std::string("missing string field '") + name + "'");
    return std::nullopt;
  }
  return it->get<std::string>();
}

ordered_json best_proof_json(const Session& s) {
  if (s.context().forest.size() == 0) return nullptr;
  const BestProof b = s.best_proof();
  return {{"index", b.proof_index},
          {"completion", b.completion},
          {"checkedInProof", b.checked_in_proof},
          {"totalInProof", b.total_in_proof}};
}

ordered_json session_json(const std::string& id, const std::string& problem, const Session& s) {
  const auto& graph = s.context().graph;
  ordered_json checked = ordered_json::array();
  for (NodeId n : s.checked_nodes()) {
    checked.push_back({{"nodeId", n}, {"key", graph.node(n).fact->key()}});
  }
  const HintState& h = s.hint_state();
  return {{"schemaVersion", 1},
          {"sessionId", id},
          {"problemId", problem},
          {"checked", std::move(checked)},
          {"rejected", s.rejected()},
          {"bestProof", best_proof_json(s)},
          {"unlocked", s.redaction_view().unlocked},
          {"hintState",
           {{"targetNodeId", h.target ? ordered_json(*h.target) : ordered_json(nullptr)},
            {"hintsOnTarget", h.hints_on_target},
            {"targetsTried", h.targets_tried},
            {"referred", h.referred}}}};
}

}  // namespace

ServiceConfig parse_service_config(std::string_view text, const fs::path& base_dir) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("service config: ") + e.what());
  }
  if (!doc.is_object()) throw InputError("service config: expected a JSON object");

  ServiceConfig cfg;
  try {
    cfg.port = doc.value("port", cfg.port);
    cfg.host = doc.value("host", cfg.host);
    if (!doc.contains("corpusDir")) throw InputError("service config: corpusDir is required");
    cfg.corpus_dir = base_dir / doc.at("corpusDir").get<std::string>();
    if (doc.contains("logDir")) cfg.log_dir = base_dir / doc.at("logDir").get<std::string>();

    if (doc.contains("isles")) {
      const auto& isles = doc.at("isles");
      if (isles.contains("maxLevel")) cfg.isles.max_level = isles.at("maxLevel").get<int>();
      if (isles.contains("enabled")) {
        cfg.isles.enabled_isles = isles.at("enabled").get<std::set<std::string>>();
      }
      if (isles.contains("tiers")) {
        cfg.isles.enabled_tiers.clear();
        for (const auto& t : isles.at("tiers").get<std::vector<std::string>>()) {
          auto tier = parse_tier(t);
          if (!tier) throw InputError("service config: unknown tier '" + t + "'");
          cfg.isles.enabled_tiers.insert(*tier);
        }
      }
    }
    if (doc.contains("policy")) {
      const auto& p = doc.at("policy");
      cfg.policy.unlock_threshold = p.value("threshold", cfg.policy.unlock_threshold);
      cfg.policy.hints_per_target = p.value("hintsPerTarget", cfg.policy.hints_per_target);
      cfg.policy.max_targets = p.value("maxTargets", cfg.policy.max_targets);
      cfg.policy.precheck_hypotheses = p.value("precheckHypotheses", cfg.policy.precheck_hypotheses);
      cfg.forest_cap = p.value("forestCap", cfg.forest_cap);
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("service config: ") + e.what());
  }

  if (cfg.port < 1 || cfg.port > 65535) {
    throw InputError("service config: port " + std::to_string(cfg.port) + " outside [1, 65535]");
  }
  if (!fs::is_directory(cfg.corpus_dir)) {
    throw InputError("service config: corpus directory " + cfg.corpus_dir.string() + " does not exist");
  }
  if (cfg.policy.hints_per_target < 1 || cfg.policy.max_targets < 1) {
    throw InputError("service config: hintsPerTarget and maxTargets must be positive");
  }
  if (cfg.isles.enabled_tiers.empty()) throw InputError("service config: no tier enabled");
  return cfg;
}

ServiceConfig load_service_config(const fs::path& path) {
  return parse_service_config(read_file(path), path.parent_path());
}

Corpus load_corpus(const fs::path& dir, const PrepareOptions& options) {
  Corpus corpus;
  const auto packs = files_with_extension(dir / "packs", ".qr");
  if (packs.empty()) throw InputError("no rule packs under " + (dir / "packs").string());
  corpus.rules = load_rule_packs(packs);

  for (const auto& path : files_with_extension(dir / "problems", ".qp")) {
    Problem problem;
    try {
      problem = parse_problem(read_file(path), corpus.rules);
    } catch (const InputError& e) {
      throw InputError(path.string() + ": " + e.what());
    }
    const std::string id = problem.id;
    if (corpus.problems.count(id)) throw InputError(path.string() + ": duplicate problem id " + id);
    try {
      corpus.problems.emplace(id, prepare_problem(std::move(problem), corpus.rules, options));
    } catch (const DomainError& e) {
      throw DomainError(path.string() + ": " + e.what());
    }
  }
  return corpus;
}

Service::Service(ServiceConfig config)
    : config_(std::move(config)),
      corpus_(load_corpus(config_.corpus_dir, PrepareOptions{config_.isles, {}, config_.forest_cap})),
      server_(std::make_unique<httplib::Server>()) {
  if (config_.log_dir) fs::create_directories(*config_.log_dir);
  install_routes();
}

Service::~Service() { stop(); }

void Service::run() {
  if (!server_->listen(config_.host, config_.port)) {
    throw Error("cannot listen on " + config_.host + ":" + std::to_string(config_.port));
  }
}

int Service::start() {
  const int port = config_.port == 0 ? server_->bind_to_any_port(config_.host)
                                     : (server_->bind_to_port(config_.host, config_.port) ? config_.port : -1);
  if (port < 0) throw Error("cannot bind " + config_.host + ":" + std::to_string(config_.port));
  worker_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  return port;
}

void Service::stop() {
  if (server_) server_->stop();
  if (worker_.joinable()) worker_.join();
}

std::shared_ptr<Service::SessionSlot> Service::find_session(const std::string& id) {
  std::lock_guard lock(sessions_mutex_);
  auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

void Service::persist_log(const std::string& id, const Session& session) const {
  if (!config_.log_dir) return;
  write_file(*config_.log_dir / (id + ".qs"), session.export_log());
}

void Service::install_routes() {
  auto& srv = *server_;

  srv.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    try {
      std::rethrow_exception(ep);
    } catch (const Error& e) {
      send_error(res, status_for(e), e.code(), e.what());
    } catch (const std::exception& e) {
      send_error(res, 500, "InternalError", e.what());
    }
  });

  srv.Get("/problems", [this](const httplib::Request&, httplib::Response& res) {
    ordered_json list = ordered_json::array();
    for (const auto& [id, ctx] : corpus_.problems) {
      ordered_json figure = ordered_json::array();
      for (const auto& name : ctx->problem.student_figure) {
        figure.push_back({{"name", name}, {"kind", to_string(ctx->problem.objects.at(name).kind)}});
      }
      list.push_back({{"id", id},
                      {"statement", ctx->problem.statement()},
                      {"studentFigure", std::move(figure)},
                      {"proofCount", ctx->forest.total()}});
    }
    send_json(res, 200, {{"schemaVersion", 1}, {"problems", std::move(list)}});
  });

  srv.Get("/problems/:id/graph", [this](const httplib::Request& req, httplib::Response& res) {
    auto it = corpus_.problems.find(req.path_params.at("id"));
    if (it == corpus_.problems.end()) {
      return send_error(res, 404, "NotFound", "unknown problem", {{"problemId", req.path_params.at("id")}});
    }
    const std::string format = req.has_param("format") ? req.get_param_value("format") : "json";
    if (format == "dot") {
      res.set_content(export_dot(it->second->graph), "text/vnd.graphviz");
    } else if (format == "json") {
      res.set_content(export_json(it->second->graph), "application/json");
    } else {
      send_error(res, 400, "BadRequest", "format must be json or dot", {{"format", format}});
    }
  });

  srv.Post("/sessions", [this](const httplib::Request& req, httplib::Response& res) {
    auto body = parse_body(req, res);
    if (!body) return;
    auto problem_id = string_field(*body, "problemId", res);
    if (!problem_id) return;
    auto it = corpus_.problems.find(*problem_id);
    if (it == corpus_.problems.end()) {
      return send_error(res, 404, "NotFound", "unknown problem", {{"problemId", *problem_id}});
    }
    std::string id;
    std::shared_ptr<SessionSlot> slot;
    {
      std::lock_guard lock(sessions_mutex_);
      id = "sess-" + std::to_string(next_session_++);
      slot = std::make_shared<SessionSlot>(*problem_id, it->second, config_.policy);
      sessions_.emplace(id, slot);
    }
    std::lock_guard lock(slot->mutex);
    persist_log(id, slot->session);
    send_json(res, 201, session_json(id, slot->problem_id, slot->session));
  });

  // Looks up the session named in the path and runs `fn` under its lock.
  auto with_session = [this](const httplib::Request& req, httplib::Response& res, auto fn) {
    const std::string id = req.path_params.at("id");
    auto slot = find_session(id);
    if (!slot) return send_error(res, 404, "NotFound", "unknown session", {{"sessionId", id}});
    std::lock_guard lock(slot->mutex);
    fn(id, *slot);
  };

  srv.Get("/sessions/:id", [with_session](const httplib::Request& req, httplib::Response& res) {
    with_session(req, res, [&](const std::string& id, SessionSlot& slot) {
      send_json(res, 200, session_json(id, slot.problem_id, slot.session));
    });
  });

  srv.Post("/sessions/:id/statements", [this, with_session](const httplib::Request& req, httplib::Response& res) {
    with_session(req, res, [&](const std::string& id, SessionSlot& slot) {
      auto body = parse_body(req, res);
      if (!body) return;
      auto fact = string_field(*body, "fact", res);
      if (!fact) return;
      try {
        const SubmitResult r = slot.session.submit_statement(*fact);
        persist_log(id, slot.session);
        send_json(res, 200,
                  {{"result", to_string(r.outcome)},
                   {"nodeId", r.node ? ordered_json(*r.node) : ordered_json(nullptr)},
                   {"key", r.key},
                   {"bestProof", best_proof_json(slot.session)}});
      } catch (const MalformedStatement& e) {
        persist_log(id, slot.session);
        send_error(res, 400, e.code(), e.what(), {{"fact", *fact}});
      }
    });
  });

  srv.Get("/sessions/:id/redaction", [with_session](const httplib::Request& req, httplib::Response& res) {
    with_session(req, res, [&](const std::string&, SessionSlot& slot) {
      const RedactionView view = slot.session.redaction_view();
      ordered_json lines = ordered_json::array();
      for (const auto& l : view.lines) {
        lines.push_back({{"nodeId", l.node}, {"text", l.text ? ordered_json(*l.text) : ordered_json(nullptr)}});
      }
      send_json(res, 200,
                {{"unlocked", view.unlocked}, {"blanks", view.blanks()}, {"lines", std::move(lines)}});
    });
  });

  srv.Get("/sessions/:id/hint", [this, with_session](const httplib::Request& req, httplib::Response& res) {
    with_session(req, res, [&](const std::string& id, SessionSlot& slot) {
      try {
        const Hint h = slot.session.next_hint();
        persist_log(id, slot.session);
        const auto& graph = slot.session.context().graph;
        send_json(res, 200,
                  {{"kind", to_string(h.kind)},
                   {"message", h.message},
                   {"targetNodeId", h.target ? ordered_json(*h.target) : ordered_json(nullptr)},
                   {"targetKey", h.target ? ordered_json(graph.node(*h.target).fact->key()) : ordered_json(nullptr)}});
      } catch (const NothingMissing& e) {
        persist_log(id, slot.session);
        send_error(res, 409, e.code(), e.what());
      }
    });
  });

  srv.Get("/sessions/:id/log", [with_session](const httplib::Request& req, httplib::Response& res) {
    with_session(req, res, [&](const std::string&, SessionSlot& slot) {
      res.set_content(slot.session.export_log(), "text/plain");
    });
  });
}

}  // namespace geoproof
