#pragma once

// Problem preparation: filter rules, saturate, build the graph and forest.
// The result is immutable and shared by every session on the problem.

#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "geoproof/dsl.hpp"
#include "geoproof/engine.hpp"
#include "geoproof/graph.hpp"
#include "geoproof/proofs.hpp"

namespace geoproof {

struct PrepareOptions {
  IsleConfig isles;
  SaturationOptions saturation;
  std::size_t forest_cap = kDefaultForestCap;
};

struct ProblemContext {
  Problem problem;
  RuleBase rules;  // after isle filtering
  DerivationRecord record;
  HpdicGraph graph;
  ProofForest forest;
  std::vector<Warning> warnings;
};

// Throws ConclusionNotDerived / LimitExceeded.
std::shared_ptr<const ProblemContext> prepare_problem(Problem problem, const RuleBase& base,
                                                      const PrepareOptions& options = {});

std::string read_file(const std::filesystem::path& path);  // InputError when unreadable
void write_file(const std::filesystem::path& path, std::string_view text);

// Parses and merges rule packs in the given order.
RuleBase load_rule_packs(std::span<const std::filesystem::path> paths);

}  // namespace geoproof
