#pragma once

// Forward-chaining saturation with full justification tracking.

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "geoproof/dsl.hpp"
#include "geoproof/model.hpp"

namespace geoproof {

using FactId = std::size_t;
using Binding = std::map<std::string, std::string>;

// Indexed set of canonical facts. Ids are dense and follow insertion order.
class FactStore {
 public:
  FactStore() = default;

  // Returns the id and whether the fact was new.
  std::pair<FactId, bool> insert(const Fact& fact);
  std::optional<FactId> find(std::string_view key) const;
  bool contains(std::string_view key) const { return find(key).has_value(); }

  const Fact& fact(FactId id) const { return facts_[id]; }
  const std::vector<Fact>& facts() const { return facts_; }
  std::size_t size() const { return facts_.size(); }
  std::span<const FactId> with_predicate(std::string_view predicate) const;

 private:
  std::vector<Fact> facts_;
  std::unordered_map<std::string, FactId> by_key_;
  std::map<std::string, std::vector<FactId>, std::less<>> by_predicate_;
};

// Every binding of the premise variables under which each instantiated
// premise is (up to predicate symmetry) a member of the store. Constants
// in patterns must match object names exactly.
std::vector<Binding> match_premises(std::span<const Pattern> premises, const FactStore& store,
                                    const RuleBase& base);

// One rule instance over a store; `derived` need not be in the store yet.
struct Candidate {
  std::string rule;
  std::vector<FactId> premises;  // premise-pattern order
  Fact derived;
  Binding binding;
};

// One candidate per distinct (premise multiset, derived) pair; among
// bindings that collapse to the same pair the smallest binding is kept.
// Candidates whose derived fact is one of their own premises are dropped.
std::vector<Candidate> apply_rule(const Rule& rule, const FactStore& store, const RuleBase& base);

struct Justification {
  std::string rule;
  std::vector<FactId> premises;  // premise-pattern order
  FactId derived = 0;
  Binding binding;
  std::string hint;  // rendered from the rule's template
};

// Saturated fact set with every justification found.
class DerivationRecord {
 public:
  // Inserting an existing fact as a hypothesis marks it as one.
  FactId add_fact(const Fact& fact, bool hypothesis = false);
  // False when the justification duplicates a recorded one (same rule,
  // premise multiset and derived fact) or is self-justifying.
  bool add_justification(Justification j);

  const FactStore& store() const { return store_; }
  const std::vector<Fact>& facts() const { return store_.facts(); }
  const Fact& fact(FactId id) const { return store_.fact(id); }
  std::optional<FactId> find(std::string_view key) const { return store_.find(key); }
  bool is_hypothesis(FactId id) const { return hypothesis_[id]; }
  std::vector<FactId> hypotheses() const;
  const std::vector<Justification>& justifications() const { return justifications_; }

  int rounds = 0;

 private:
  using DedupKey = std::tuple<std::string, std::vector<FactId>, FactId>;

  FactStore store_;
  std::vector<bool> hypothesis_;
  std::vector<Justification> justifications_;
  std::map<DedupKey, std::size_t> dedup_;
};

std::string render_hint(std::string_view hint_template, const Binding& binding);

struct SaturationLimits {
  int max_rounds = 64;
  std::size_t max_facts = 200000;
};

enum class Strategy { SemiNaive, Naive };

struct SaturationOptions {
  SaturationLimits limits;
  Strategy strategy = Strategy::SemiNaive;
  // Extra full round after the fixpoint to collect alternative justifications.
  bool harvest_round = true;
};

// Iterates R <- rules(S), N <- R - S, S <- S + N until N is empty. The
// record is returned whether or not the conclusion was reached.
// Throws LimitExceeded.
DerivationRecord saturate(const Problem& problem, const RuleBase& base,
                          const SaturationOptions& options = {});

// Same loop over an explicit initial fact set.
DerivationRecord saturate_facts(std::span<const Fact> given, const RuleBase& base,
                                const SaturationOptions& options = {});

// Canonical JSON dump: facts and justifications sorted by key.
std::string dump_derivation(const DerivationRecord& record, int indent = 2);

}  // namespace geoproof
