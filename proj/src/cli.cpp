#include "geoproof/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <ostream>

#include "CLI11.hpp"
#include "geoproof/errors.hpp"
#include "geoproof/pipeline.hpp"
#include "geoproof/replay.hpp"
#include "geoproof/service.hpp"
#include "geoproof/tutor.hpp"

namespace geoproof {

namespace fs = std::filesystem;

namespace {

struct IsleFlags {
  std::vector<std::string> isles;
  std::vector<std::string> tiers;
  int max_level = 1 << 20;

  void attach(CLI::App* cmd) {
    cmd->add_option("--isles", isles, "Enabled isles (comma separated; default all)")->delimiter(',');
    cmd->add_option("--tiers", tiers, "Enabled tiers: coarse, fine, default")->delimiter(',');
    cmd->add_option("--max-level", max_level, "Highest rule level kept")->check(CLI::PositiveNumber);
  }

  IsleConfig config() const {
    IsleConfig cfg;
    cfg.max_level = max_level;
    if (!isles.empty()) cfg.enabled_isles = std::set<std::string>(isles.begin(), isles.end());
    if (!tiers.empty()) {
      cfg.enabled_tiers.clear();
      for (const auto& t : tiers) {
        auto tier = parse_tier(t);
        if (!tier) throw InputError("unknown tier '" + t + "'");
        cfg.enabled_tiers.insert(*tier);
      }
    }
    return cfg;
  }
};

struct Inputs {
  Problem problem;
  RuleBase rules;  // filtered
  std::vector<Warning> warnings;
};

Inputs load_inputs(const fs::path& problem_path, const std::vector<fs::path>& packs,
                   const IsleConfig& isles) {
  RuleBase base = load_rule_packs(packs);
  Inputs in;
  try {
    in.problem = parse_problem(read_file(problem_path), base);
  } catch (const InputError& e) {
    throw InputError(problem_path.string() + ": " + e.what());
  }
  in.rules = filter_rules(base, isles, &in.warnings);
  return in;
}

void print_warnings(const std::vector<Warning>& warnings, std::ostream& err) {
  for (const auto& w : warnings) err << "warning: " << w.message << "\n";
}

void require_conclusion(const DerivationRecord& record, const Problem& problem) {
  if (!record.find(problem.conclusion.key())) {
    throw ConclusionNotDerived("conclusion " + problem.conclusion.key() +
                               " is not derivable from the hypotheses of " + problem.id);
  }
}

std::string describe_proof(const HpdicGraph& g, const ProofTree& t) {
  std::string out;
  for (const auto& [s, inf] : t.chosen) {
    if (!out.empty()) out += "; ";
    out += g.node(s).fact->key() + " <= " + g.node(inf).rule;
  }
  return out;
}

}  // namespace

int cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Proof graphs and tutoring sessions for geometry problems", "geoproof"};
  app.require_subcommand(1);

  std::string problem_path;
  std::vector<std::string> packs;
  IsleFlags isles;

  auto add_inputs = [&](CLI::App* cmd) {
    cmd->add_option("problem", problem_path, "Problem file (.qp)")->required();
    cmd->add_option("packs", packs, "Rule packs (.qr)")->required();
    isles.attach(cmd);
  };

  auto* sat = app.add_subcommand("saturate", "Saturate a problem and report the derivation");
  add_inputs(sat);
  std::string dump_path;
  sat->add_option("--out", dump_path, "Write the derivation dump (JSON)");

  auto* graph_cmd = app.add_subcommand("graph", "Build the proof graph of a problem");
  add_inputs(graph_cmd);
  std::string dot_path;
  std::string json_path;
  graph_cmd->add_option("--dot", dot_path, "Write Graphviz DOT");
  graph_cmd->add_option("--json", json_path, "Write graph JSON");

  auto* proofs_cmd = app.add_subcommand("proofs", "Count or list the proofs of a problem");
  add_inputs(proofs_cmd);
  bool count_only = false;
  std::size_t list_n = 0;
  proofs_cmd->add_flag("--count", count_only, "Print the exact proof count");
  proofs_cmd->add_option("--list", list_n, "List the first N proofs");

  auto* replay_cmd = app.add_subcommand("replay", "Replay a session script against a problem");
  std::vector<std::string> replay_files;
  replay_cmd->add_option("files", replay_files, "<problem.qp> <pack.qr...> <session.qs>")
      ->required()
      ->expected(3, -1);
  isles.attach(replay_cmd);

  auto* serve_cmd = app.add_subcommand("serve", "Serve problems and sessions over HTTP");
  std::string config_path;
  serve_cmd->add_option("--config", config_path, "Service configuration (JSON)")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    if (*sat) {
      const fs::path qp = problem_path;
      Inputs in = load_inputs(qp, {packs.begin(), packs.end()}, isles.config());
      print_warnings(in.warnings, err);
      const DerivationRecord record = saturate(in.problem, in.rules);
      if (!dump_path.empty()) write_file(dump_path, dump_derivation(record));
      require_conclusion(record, in.problem);
      out << "derived " << in.problem.conclusion.key() << " in " << record.rounds << " rounds: "
          << record.facts().size() << " facts, " << record.justifications().size()
          << " justifications\n";
      return 0;
    }

    if (*graph_cmd || *proofs_cmd) {
      Inputs in = load_inputs(problem_path, {packs.begin(), packs.end()}, isles.config());
      print_warnings(in.warnings, err);
      const DerivationRecord record = saturate(in.problem, in.rules);
      require_conclusion(record, in.problem);
      const HpdicGraph g = build_graph(record, in.problem.conclusion);

      if (*graph_cmd) {
        if (!dot_path.empty()) write_file(dot_path, export_dot(g));
        if (!json_path.empty()) write_file(json_path, export_json(g));
        out << "graph " << in.problem.id << ": " << g.statement_count() << " statements, "
            << g.inference_count() << " inferences, " << g.edge_count() << " edges\n";
        return 0;
      }

      if (count_only || list_n == 0) out << count_proofs(g) << "\n";
      if (list_n > 0) {
        const Enumeration e = enumerate_proofs(g, list_n);
        for (std::size_t i = 0; i < e.proofs.size(); ++i) {
          out << "proof " << i << " (" << e.proofs[i].size() << " steps): " << describe_proof(g, e.proofs[i])
              << "\n";
        }
        if (e.truncated) out << "... more proofs not listed\n";
      }
      return 0;
    }

    if (*replay_cmd) {
      const fs::path qp = replay_files.front();
      const fs::path qs = replay_files.back();
      const std::vector<fs::path> pack_paths(replay_files.begin() + 1, replay_files.end() - 1);
      RuleBase base = load_rule_packs(pack_paths);
      Problem problem;
      try {
        problem = parse_problem(read_file(qp), base);
      } catch (const InputError& e) {
        throw InputError(qp.string() + ": " + e.what());
      }
      PrepareOptions options;
      options.isles = isles.config();
      auto ctx = prepare_problem(std::move(problem), base, options);
      print_warnings(ctx->warnings, err);
      Session session(ctx);
      ReplayReport report;
      const std::string script = read_file(qs);
      try {
        report = replay_script(session, script);
      } catch (const SyntaxError& e) {
        throw InputError(qs.string() + ":" + e.what());
      }
      out << report.transcript;
      return report.ok() ? 0 : 1;
    }

    if (*serve_cmd) {
      Service service(load_service_config(config_path));
      err << "serving " << service.corpus().problems.size() << " problems\n";
      service.run();
      return 0;
    }
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace geoproof
