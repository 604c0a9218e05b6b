#pragma once

// Proofs as subgraphs of an HPDIC graph: starting from the conclusion, every
// statement used picks exactly one inference parent, recursively down to the
// hypotheses, and no statement may depend on itself. Two proofs are the same
// exactly when they make the same (statement, parent) choices.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "geoproof/dsl.hpp"
#include "geoproof/graph.hpp"

namespace geoproof {

using ProofCount = std::uint64_t;

struct ProofTree {
  NodeId root = 0;
  // (statement, chosen inference) in the order the choices were made: a
  // preorder walk from the conclusion, premises in id order.
  std::vector<std::pair<NodeId, NodeId>> chosen;
  std::vector<NodeId> leaves;  // hypotheses used, sorted

  std::size_t size() const { return chosen.size(); }
  std::optional<NodeId> parent_of(NodeId statement) const;
  // Derived statements and leaves, sorted.
  std::vector<NodeId> statements() const;
  // Derived statements ordered so that every premise precedes its use.
  std::vector<NodeId> topological(const HpdicGraph& graph) const;
  // Rule ids in choice order.
  std::vector<std::string> rule_sequence(const HpdicGraph& graph) const;

  friend bool operator==(const ProofTree&, const ProofTree&) = default;
};

struct Enumeration {
  std::vector<ProofTree> proofs;
  bool truncated = false;  // more proofs exist beyond the cap
};

inline constexpr std::size_t kNoCap = std::numeric_limits<std::size_t>::max();

// Depth-first, inference parents tried in id order, so proofs come out
// sorted by their choice sequence. Stops after `cap` proofs.
Enumeration enumerate_proofs(const HpdicGraph& graph, std::size_t cap = kNoCap);

// Exact number of proofs. Regions where every inference's premises depend
// on disjoint choices and no cycle exists are counted by a memoized
// sum-of-products; the rest is enumerated, collapsing independent
// sub-regions into their counts. Throws CountOverflow past 2^64 - 1.
ProofCount count_proofs(const HpdicGraph& graph);

class ProofForest {
 public:
  ProofForest() = default;
  ProofForest(const HpdicGraph& graph, std::vector<ProofTree> trees, ProofCount total);

  const std::vector<ProofTree>& trees() const { return trees_; }
  std::size_t size() const { return trees_.size(); }
  const ProofTree& tree(std::size_t i) const { return trees_[i]; }
  ProofCount total() const { return total_; }
  bool truncated() const { return total_ > trees_.size(); }
  const std::vector<Warning>& warnings() const { return warnings_; }

  // Statement or inference node membership, O(1).
  bool contains(std::size_t tree, NodeId node) const { return membership_[tree].test(node); }

 private:
  std::vector<ProofTree> trees_;
  std::vector<boost::dynamic_bitset<>> membership_;
  ProofCount total_ = 0;
  std::vector<Warning> warnings_;
};

inline constexpr std::size_t kDefaultForestCap = 10000;

// First `cap` proofs in enumeration order plus the exact total; a
// CapExceeded warning is attached when the total is larger.
ProofForest to_forest(const HpdicGraph& graph, std::size_t cap = kDefaultForestCap);

}  // namespace geoproof
