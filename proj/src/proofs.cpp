#include "geoproof/proofs.hpp"

#include <algorithm>
#include <functional>

#include "geoproof/errors.hpp"

namespace geoproof {

std::optional<NodeId> ProofTree::parent_of(NodeId statement) const {
  for (const auto& [s, inf] : chosen) {
    if (s == statement) return inf;
  }
  return std::nullopt;
}

std::vector<NodeId> ProofTree::statements() const {
  std::vector<NodeId> out = leaves;
  for (const auto& c : chosen) out.push_back(c.first);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<NodeId> ProofTree::topological(const HpdicGraph& graph) const {
  std::vector<NodeId> out;
  std::vector<NodeId> visited;
  std::function<void(NodeId)> visit = [&](NodeId s) {
    if (std::find(visited.begin(), visited.end(), s) != visited.end()) return;
    visited.push_back(s);
    auto inf = parent_of(s);
    if (!inf) return;
    for (NodeId p : graph.in(*inf)) visit(p);
    out.push_back(s);
  };
  visit(root);
  return out;
}

std::vector<std::string> ProofTree::rule_sequence(const HpdicGraph& graph) const {
  std::vector<std::string> out;
  for (const auto& c : chosen) out.push_back(graph.node(c.second).rule);
  return out;
}

namespace {

constexpr NodeId kUnassigned = static_cast<NodeId>(-1);

bool is_hypothesis(const HpdicGraph& g, NodeId s) { return g.node(s).cls == NodeClass::Hypothesis; }

// Shared state of a depth-first walk over parent choices.
class ChoiceWalk {
 public:
  explicit ChoiceWalk(const HpdicGraph& g) : g_(g), chosen_(g.size(), kUnassigned) {}

  bool assigned(NodeId s) const { return chosen_[s] != kUnassigned; }

  // Whether `target` is reachable from `from` along current choices.
  bool reaches(NodeId from, NodeId target) const {
    std::vector<NodeId> stack{from};
    std::vector<bool> seen(g_.size(), false);
    while (!stack.empty()) {
      const NodeId s = stack.back();
      stack.pop_back();
      if (s == target) return true;
      if (seen[s] || !assigned(s)) continue;
      seen[s] = true;
      for (NodeId p : g_.in(chosen_[s])) stack.push_back(p);
    }
    return false;
  }

  // Choosing `inf` for `s` closes a cycle iff an already decided premise
  // leads back to s.
  bool closes_cycle(NodeId s, NodeId inf) const {
    for (NodeId p : g_.in(inf)) {
      if (p == s) return true;
      if (assigned(p) && reaches(p, s)) return true;
    }
    return false;
  }

  void assign(NodeId s, NodeId inf) {
    chosen_[s] = inf;
    order_.emplace_back(s, inf);
  }
  void unassign(NodeId s) {
    chosen_[s] = kUnassigned;
    order_.pop_back();
  }

  // Drops decided statements and hypotheses from the top of the stack.
  void settle(std::vector<NodeId>& stack) const {
    while (!stack.empty() && (assigned(stack.back()) || is_hypothesis(g_, stack.back()))) stack.pop_back();
  }

  // Next stack after choosing `inf`: premises pushed so the smallest id is
  // visited first.
  std::vector<NodeId> expand(const std::vector<NodeId>& stack, NodeId inf) const {
    std::vector<NodeId> next = stack;
    const auto premises = g_.in(inf);
    for (auto it = premises.rbegin(); it != premises.rend(); ++it) next.push_back(*it);
    return next;
  }

  const std::vector<std::pair<NodeId, NodeId>>& order() const { return order_; }
  NodeId choice(NodeId s) const { return chosen_[s]; }

 protected:
  const HpdicGraph& g_;
  std::vector<NodeId> chosen_;
  std::vector<std::pair<NodeId, NodeId>> order_;
};

class Enumerator : public ChoiceWalk {
 public:
  Enumerator(const HpdicGraph& g, std::size_t cap) : ChoiceWalk(g), cap_(cap) {}

  Enumeration run() {
    dfs({g_.conclusion()});
    return std::move(result_);
  }

 private:
  // Returns false once enumeration must stop.
  bool dfs(std::vector<NodeId> stack) {
    settle(stack);
    if (stack.empty()) return emit();
    const NodeId s = stack.back();
    stack.pop_back();
    for (NodeId inf : g_.in(s)) {
      if (closes_cycle(s, inf)) continue;
      assign(s, inf);
      const bool go_on = dfs(expand(stack, inf));
      unassign(s);
      if (!go_on) return false;
    }
    return true;
  }

  bool emit() {
    if (result_.proofs.size() == cap_) {
      result_.truncated = true;
      return false;
    }
    ProofTree t;
    t.root = g_.conclusion();
    t.chosen = order();
    for (const auto& [s, inf] : t.chosen) {
      for (NodeId p : g_.in(inf)) {
        if (is_hypothesis(g_, p)) t.leaves.push_back(p);
      }
    }
    std::sort(t.leaves.begin(), t.leaves.end());
    t.leaves.erase(std::unique(t.leaves.begin(), t.leaves.end()), t.leaves.end());
    result_.proofs.push_back(std::move(t));
    return true;
  }

  std::size_t cap_;
  Enumeration result_;
};

ProofCount checked_mul(ProofCount a, ProofCount b) {
  ProofCount r;
  if (__builtin_mul_overflow(a, b, &r)) throw CountOverflow("proof count exceeds 64 bits");
  return r;
}

ProofCount checked_add(ProofCount a, ProofCount b) {
  ProofCount r;
  if (__builtin_add_overflow(a, b, &r)) throw CountOverflow("proof count exceeds 64 bits");
  return r;
}

using Bits = boost::dynamic_bitset<>;

class Counter : public ChoiceWalk {
 public:
  explicit Counter(const HpdicGraph& g)
      : ChoiceWalk(g),
        reach_(g.size()),
        choices_(g.size()),
        treelike_(g.size(), -1),
        memo_(g.size()),
        done_(g.size(), 0) {
    Bits choice_mask(g.size());
    for (NodeId s = 0; s < g.statement_count(); ++s) {
      if (g.in(s).size() >= 2) choice_mask.set(s);
    }
    for (NodeId s = 0; s < g.statement_count(); ++s) {
      reach_[s] = reachable(s);
      choices_[s] = reach_[s] & choice_mask;
    }
    assigned_.resize(g.size());
  }

  ProofCount run() {
    const NodeId root = g_.conclusion();
    if (treelike(root)) return tree_count(root);
    return dfs({root});
  }

 private:
  // Non-hypothesis statements reachable from s through any parent, s included.
  Bits reachable(NodeId s) const {
    Bits seen(g_.size());
    if (is_hypothesis(g_, s)) return seen;
    std::vector<NodeId> stack{s};
    seen.set(s);
    while (!stack.empty()) {
      const NodeId t = stack.back();
      stack.pop_back();
      for (NodeId inf : g_.in(t)) {
        for (NodeId p : g_.in(inf)) {
          if (!is_hypothesis(g_, p) && !seen.test(p)) {
            seen.set(p);
            stack.push_back(p);
          }
        }
      }
    }
    return seen;
  }

  // No cycle below s, and under every inference the premises depend on
  // disjoint sets of choice points; then sum-of-products is exact.
  bool treelike(NodeId s) {
    if (is_hypothesis(g_, s)) return true;
    if (treelike_[s] >= 0) return treelike_[s] == 1;
    bool ok = true;
    for (NodeId inf : g_.in(s)) {
      std::vector<NodeId> premises;
      for (NodeId p : g_.in(inf)) {
        if (is_hypothesis(g_, p)) continue;
        if (reach_[p].test(s)) ok = false;
        premises.push_back(p);
      }
      for (std::size_t a = 0; ok && a < premises.size(); ++a) {
        for (std::size_t b = a + 1; ok && b < premises.size(); ++b) {
          if (choices_[premises[a]].intersects(choices_[premises[b]])) ok = false;
        }
      }
      if (!ok) break;
      for (NodeId p : premises) {
        if (!treelike(p)) {
          ok = false;
          break;
        }
      }
      if (!ok) break;
    }
    treelike_[s] = ok ? 1 : 0;
    return ok;
  }

  ProofCount tree_count(NodeId s) {
    if (is_hypothesis(g_, s)) return 1;
    if (memo_[s]) return *memo_[s];
    ProofCount total = 0;
    for (NodeId inf : g_.in(s)) {
      ProofCount product = 1;
      for (NodeId p : g_.in(inf)) {
        product = checked_mul(product, tree_count(p));
        if (product == 0) break;
      }
      total = checked_add(total, product);
    }
    memo_[s] = total;
    return total;
  }

  // s can be counted on its own: nothing decided so far lies below it and no
  // other pending statement shares a choice point with it.
  bool independent(NodeId s, const std::vector<NodeId>& rest) const {
    if (reach_[s].intersects(assigned_)) return false;
    for (NodeId y : rest) {
      if (y == s || is_hypothesis(g_, y) || assigned(y) || done_[y] != 0) continue;
      if (choices_[s].intersects(choices_[y])) return false;
    }
    return true;
  }

  void skip_settled(std::vector<NodeId>& stack) const {
    while (!stack.empty()) {
      const NodeId t = stack.back();
      if (assigned(t) || is_hypothesis(g_, t) || done_[t] != 0) {
        stack.pop_back();
      } else {
        break;
      }
    }
  }

  ProofCount dfs(std::vector<NodeId> stack) {
    skip_settled(stack);
    if (stack.empty()) return 1;
    const NodeId s = stack.back();
    stack.pop_back();

    if (treelike(s) && independent(s, stack)) {
      const ProofCount here = tree_count(s);
      if (here == 0) return 0;
      ++done_[s];
      const ProofCount rest = dfs(stack);
      --done_[s];
      return checked_mul(here, rest);
    }

    ProofCount total = 0;
    for (NodeId inf : g_.in(s)) {
      if (closes_cycle(s, inf)) continue;
      assign(s, inf);
      assigned_.set(s);
      total = checked_add(total, dfs(expand(stack, inf)));
      assigned_.reset(s);
      unassign(s);
    }
    return total;
  }

  std::vector<Bits> reach_;
  std::vector<Bits> choices_;
  std::vector<int> treelike_;
  std::vector<std::optional<ProofCount>> memo_;
  std::vector<int> done_;
  Bits assigned_;
};

}  // namespace

Enumeration enumerate_proofs(const HpdicGraph& graph, std::size_t cap) {
  return Enumerator(graph, cap).run();
}

ProofCount count_proofs(const HpdicGraph& graph) { return Counter(graph).run(); }

ProofForest::ProofForest(const HpdicGraph& graph, std::vector<ProofTree> trees, ProofCount total)
    : trees_(std::move(trees)), total_(total) {
  membership_.reserve(trees_.size());
  for (const auto& t : trees_) {
    boost::dynamic_bitset<> bits(graph.size());
    bits.set(t.root);
    for (const auto& [s, inf] : t.chosen) {
      bits.set(s);
      bits.set(inf);
    }
    for (NodeId l : t.leaves) bits.set(l);
    membership_.push_back(std::move(bits));
  }
  if (truncated()) {
    warnings_.push_back({Warning::Kind::CapExceeded,
                         "forest holds " + std::to_string(trees_.size()) + " of " +
                             std::to_string(total_) + " proofs"});
  }
}

ProofForest to_forest(const HpdicGraph& graph, std::size_t cap) {
  Enumeration e = enumerate_proofs(graph, cap);
  const ProofCount total = count_proofs(graph);
  return ProofForest(graph, std::move(e.proofs), total);
}

}  // namespace geoproof
