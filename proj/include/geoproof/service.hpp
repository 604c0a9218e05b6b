#pragma once

// JSON-over-HTTP front end for problems, graphs and tutoring sessions.
//
//   GET  /problems
//   GET  /problems/{id}/graph?format=json|dot
//   POST /sessions                      {"problemId": "..."}
//   GET  /sessions/{id}
//   POST /sessions/{id}/statements      {"fact": "perp(l1,l2)"}
//   GET  /sessions/{id}/redaction
//   GET  /sessions/{id}/hint
//   GET  /sessions/{id}/log
//
// Errors are {"code", "message", "detail"} with a 4xx status.

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "geoproof/pipeline.hpp"
#include "geoproof/tutor.hpp"

namespace httplib {
class Server;
}

namespace geoproof {

struct ServiceConfig {
  int port = 8080;
  std::string host = "127.0.0.1";
  std::filesystem::path corpus_dir;
  IsleConfig isles;
  TutorPolicy policy;
  std::size_t forest_cap = kDefaultForestCap;
  // When set, each session's event log is rewritten there as <id>.qs after
  // every event.
  std::optional<std::filesystem::path> log_dir;
};

// Relative paths are resolved against `base_dir`. Throws InputError on a
// bad document, a port outside [1, 65535] or a missing corpus directory.
ServiceConfig parse_service_config(std::string_view json, const std::filesystem::path& base_dir);
ServiceConfig load_service_config(const std::filesystem::path& path);

// Packs (packs/*.qr, merged in file-name order) and problems
// (problems/*.qp) of a corpus directory, prepared once and shared.
struct Corpus {
  RuleBase rules;
  std::map<std::string, std::shared_ptr<const ProblemContext>> problems;
};

// Fails fast: any parse error or underivable conclusion throws.
Corpus load_corpus(const std::filesystem::path& dir, const PrepareOptions& options);

class Service {
 public:
  explicit Service(ServiceConfig config);  // loads the corpus
  ~Service();

  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  // Blocks until stop(). Throws Error when the port cannot be bound.
  void run();
  // Binds (port 0 picks a free one), serves on a background thread and
  // returns the bound port.
  int start();
  void stop();

  const Corpus& corpus() const { return corpus_; }

 private:
  struct SessionSlot {
    std::string problem_id;
    std::mutex mutex;
    Session session;

    SessionSlot(std::string problem, std::shared_ptr<const ProblemContext> ctx, TutorPolicy policy)
        : problem_id(std::move(problem)), session(std::move(ctx), policy) {}
  };

  void install_routes();
  std::shared_ptr<SessionSlot> find_session(const std::string& id);
  void persist_log(const std::string& id, const Session& session) const;

  ServiceConfig config_;
  Corpus corpus_;
  std::unique_ptr<httplib::Server> server_;
  std::thread worker_;

  std::mutex sessions_mutex_;
  std::map<std::string, std::shared_ptr<SessionSlot>> sessions_;
  std::size_t next_session_ = 1;
};

}  // namespace geoproof
