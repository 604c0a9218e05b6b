#include <random>

#include "doctest.h"
#include "support/properties.hpp"

namespace {

void check_empty(const properties::Failures& f) {
  for (const auto& msg : f) CAPTURE(msg);
  CHECK_MESSAGE(f.empty(), (f.empty() ? "" : f.front()));
}

}  // namespace

TEST_CASE("engine properties on the corpus") {
  std::mt19937 rng(7);
  for (const auto& inst : properties::corpus_instances()) {
    CAPTURE(inst.name);
    check_empty(properties::idempotence(inst));
    check_empty(properties::rule_monotonicity(inst, rng));
    check_empty(properties::hypothesis_monotonicity(inst));
    check_empty(properties::order_independence(inst, rng));
    check_empty(properties::termination_bound(inst));
    check_empty(properties::group_laws(inst.base, inst.name));
  }
}

TEST_CASE("engine properties on random instances") {
  std::mt19937 rng(31337);
  for (const auto& inst : properties::random_instances(rng, 120)) {
    CAPTURE(inst.name);
    check_empty(properties::idempotence(inst));
    check_empty(properties::rule_monotonicity(inst, rng));
    check_empty(properties::hypothesis_monotonicity(inst));
    check_empty(properties::order_independence(inst, rng));
    check_empty(properties::soundness(inst));
    check_empty(properties::termination_bound(inst));
    check_empty(properties::group_laws(inst.base, inst.name));
  }
}
