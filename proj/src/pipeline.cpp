#include "geoproof/pipeline.hpp"

#include <fstream>
#include <sstream>

#include "geoproof/errors.hpp"

namespace geoproof {

std::shared_ptr<const ProblemContext> prepare_problem(Problem problem, const RuleBase& base,
                                                      const PrepareOptions& options) {
  std::vector<Warning> warnings;
  RuleBase rules = filter_rules(base, options.isles, &warnings);
  DerivationRecord record = saturate(problem, rules, options.saturation);
  HpdicGraph graph = build_graph(record, problem.conclusion);
  ProofForest forest = to_forest(graph, options.forest_cap);
  for (const auto& w : forest.warnings()) warnings.push_back(w);
  return std::make_shared<const ProblemContext>(ProblemContext{
      std::move(problem), std::move(rules), std::move(record), std::move(graph), std::move(forest),
      std::move(warnings)});
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << text;
}

RuleBase load_rule_packs(std::span<const std::filesystem::path> paths) {
  RuleBase base;
  for (const auto& p : paths) {
    try {
      base = base.merged_with(parse_rules(read_file(p)));
    } catch (const InputError& e) {
      throw InputError(p.string() + ": " + e.what());
    }
  }
  return base;
}

}  // namespace geoproof
