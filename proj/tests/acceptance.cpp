// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Limits and tolerances are fixed here.
#include <chrono>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "geoproof/cli.hpp"
#include "geoproof/engine.hpp"
#include "geoproof/graph.hpp"
#include "geoproof/pipeline.hpp"
#include "geoproof/proofs.hpp"
#include "geoproof/tutor.hpp"
#include "support/corpus.hpp"
#include "support/graphs.hpp"
#include "support/oracles.hpp"
#include "support/properties.hpp"

using namespace geoproof;
namespace fs = std::filesystem;

namespace {

constexpr double kRectangleLimitSeconds = 1.0;
constexpr double kLayeredLimitSeconds = 10.0;
constexpr int kRandomInstances = 150;
constexpr unsigned kSeed = 20240611;
constexpr double kEps = 1e-9;

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Outcome rectangle_pipeline() {
  const RuleBase base = testing_corpus::pack("quadrilaterals");
  const Problem p = testing_corpus::problem("rectangle", base);
  const auto t0 = std::chrono::steady_clock::now();
  const DerivationRecord record = saturate(p, base);
  const HpdicGraph g = build_graph(record, p.conclusion);
  const ProofCount count = count_proofs(g);
  const double elapsed = seconds_since(t0);
  const std::size_t expected = oracle::all_proofs(g).size();
  Outcome o;
  o.pass = record.find(p.conclusion.key()).has_value() && count == expected && elapsed < kRectangleLimitSeconds;
  o.detail = fmt("%llu proofs, oracle %zu, %.1f ms (limit %.0f ms)", static_cast<unsigned long long>(count),
                 expected, elapsed * 1e3, kRectangleLimitSeconds * 1e3);
  return o;
}

Outcome deductive_isles() {
  const RuleBase base = testing_corpus::pack("isles");
  auto graph_for = [&](std::set<Tier> tiers) {
    IsleConfig cfg;
    cfg.enabled_tiers = std::move(tiers);
    const RuleBase rules = filter_rules(base, cfg);
    const Problem p = testing_corpus::problem("bisector", rules);
    return build_graph(saturate(p, rules), p.conclusion);
  };
  Outcome o;
  std::ostringstream d;

  const HpdicGraph coarse = graph_for({Tier::Coarse});
  const auto ec = enumerate_proofs(coarse);
  const bool coarse_ok = ec.proofs.size() == 1 && ec.proofs[0].size() == 1;
  d << "coarse " << ec.proofs.size() << " proof(s)";
  if (!ec.proofs.empty()) d << " of size " << ec.proofs[0].size();

  const HpdicGraph fine = graph_for({Tier::Fine});
  const auto ef = enumerate_proofs(fine);
  bool fine_ok = ef.proofs.size() == 1 && ef.proofs[0].size() == 4;
  if (fine_ok) {
    bool x = false;
    bool y = false;
    for (NodeId s : ef.proofs[0].statements()) {
      const Fact& f = *fine.node(s).fact;
      if (f.predicate() == "onBisector" && f.args().at(0) == "X") x = true;
      if (f.predicate() == "onBisector" && f.args().at(0) == "Y") y = true;
    }
    fine_ok = x && y;
  }
  d << "; fine " << ef.proofs.size() << " proof(s)";
  if (!ef.proofs.empty()) d << " of size " << ef.proofs[0].size();

  const HpdicGraph both = graph_for({Tier::Coarse, Tier::Fine});
  const auto eb = enumerate_proofs(both);
  const std::size_t parents = both.in(both.conclusion()).size();
  const bool both_ok = eb.proofs.size() == 2 && count_proofs(both) == 2 && parents == 2;
  d << "; both " << eb.proofs.size() << " proofs, conclusion has " << parents << " parents";

  o.pass = coarse_ok && fine_ok && both_ok;
  o.detail = d.str();
  return o;
}

Outcome layered_count() {
  const int k = 6;
  const int L = 9;
  ProofCount closed = 1;
  for (int i = 0; i < L; ++i) closed *= k;
  const HpdicGraph g = graphs::layered(k, L);
  const auto t0 = std::chrono::steady_clock::now();
  const ProofCount count = count_proofs(g);
  const double elapsed = seconds_since(t0);
  Outcome o;
  o.pass = count == closed && closed == 10077696 && elapsed < kLayeredLimitSeconds;
  o.detail = fmt("k=%d L=%d: %llu proofs, closed form %llu, %.3f s (limit %.0f s)", k, L,
                 static_cast<unsigned long long>(count), static_cast<unsigned long long>(closed), elapsed,
                 kLayeredLimitSeconds);
  return o;
}

Outcome property_suite() {
  const auto res = properties::run_suite(kRandomInstances, kSeed);
  Outcome o;
  o.pass = res.failures.empty() && res.instances >= 100 && res.graphs >= 100;
  o.detail = fmt("%d engine instances, %d graphs, %zu violations", res.instances, res.graphs, res.failures.size());
  for (std::size_t i = 0; i < res.failures.size() && i < 5; ++i) o.detail += "\n    " + res.failures[i];
  return o;
}

Outcome tutor_gates() {
  const RuleBase base = testing_corpus::pack("isles");
  PrepareOptions options;
  options.isles.enabled_tiers = {Tier::Fine};
  auto ctx = prepare_problem(testing_corpus::problem("bisector", base), base, options);
  const TutorPolicy policy;
  Outcome o;
  std::ostringstream d;

  Session s(ctx, policy);
  const std::vector<std::string> steps{"onBisector(X,sAB)", "onBisector(Y,sAB)", "uniqueLine(lXY,X,Y)",
                                       "perpBisector(lXY,sAB)"};
  const double expected[] = {0.25, 0.5, 0.75, 1.0};
  const bool locked[] = {true, false, false, false};
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const auto r = s.submit_statement(steps[i]);
    const double c = s.best_proof().completion;
    const auto view = s.redaction_view();
    if (r.outcome != SubmitOutcome::Matched || std::abs(c - expected[i]) > kEps || view.unlocked == locked[i]) {
      o.pass = false;
    }
    d << (i ? ", " : "") << c << (view.unlocked ? " open" : " locked");
  }
  const auto final_view = s.redaction_view();
  if (final_view.blanks() != 0) o.pass = false;
  d << "; " << final_view.blanks() << " blanks";

  Session h(ctx, policy);
  const int budget = policy.hints_per_target * policy.max_targets;
  int first_referral = 0;
  for (int call = 1; call <= budget + 2; ++call) {
    if (h.next_hint().kind == HintKind::TeacherReferral && first_referral == 0) first_referral = call;
  }
  if (first_referral != budget + 1) o.pass = false;
  d << "; referral on request " << first_referral << " after " << budget << " hints";
  o.detail = d.str();
  return o;
}

std::string problem_for_fixture(const fs::path& fixture) {
  const std::string stem = fixture.stem().string();
  std::string best;
  for (const auto& name : testing_corpus::problem_names()) {
    if (stem.rfind(name + "_", 0) == 0 && name.size() > best.size()) best = name;
  }
  return best;
}

Outcome replay_fixtures() {
  std::vector<fs::path> fixtures;
  for (const auto& e : fs::directory_iterator(testing_corpus::dir() / "sessions")) {
    if (e.path().extension() == ".qs") fixtures.push_back(e.path());
  }
  std::sort(fixtures.begin(), fixtures.end());
  Outcome o;
  int stable = 0;
  for (const auto& f : fixtures) {
    const std::string problem = problem_for_fixture(f);
    if (problem.empty()) {
      o.pass = false;
      o.detail += "\n    no problem for " + f.filename().string();
      continue;
    }
    const std::vector<std::string> args{"replay", testing_corpus::problem_path(problem).string(),
                                        testing_corpus::pack_path(testing_corpus::pack_for(problem)).string(),
                                        f.string()};
    std::ostringstream out1, err1, out2, err2;
    const int c1 = cli_run(args, out1, err1);
    const int c2 = cli_run(args, out2, err2);
    if (c1 == 0 && c2 == 0 && out1.str() == out2.str()) {
      ++stable;
    } else {
      o.pass = false;
      o.detail += "\n    " + f.filename().string() + ": exit " + std::to_string(c1) + "/" + std::to_string(c2);
    }
  }
  if (fixtures.empty()) o.pass = false;
  o.detail = fmt("%d of %zu fixtures pass and replay byte-identically", stable, fixtures.size()) + o.detail;
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> checks{
      {"rectangle pipeline", rectangle_pipeline},
      {"deductive isles", deductive_isles},
      {"layered counting", layered_count},
      {"engine properties", property_suite},
      {"tutor gates", tutor_gates},
      {"replay determinism", replay_fixtures},
  };
  int failed = 0;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    Outcome o;
    try {
      o = checks[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%zu %-20s %s  %s\n", i + 1, checks[i].first.c_str(), o.pass ? "PASS" : "FAIL", o.detail.c_str());
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(checks.size()) - failed, checks.size());
  return failed == 0 ? 0 : 1;
}
