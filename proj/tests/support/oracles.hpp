#pragma once

// Slow, obviously-correct reference implementations used to check the
// library. Nothing here calls into the engine, graph builder or counter.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "geoproof/dsl.hpp"
#include "geoproof/graph.hpp"

namespace oracle {

using geoproof::ObjectKind;
using geoproof::PredicateDecl;
using geoproof::RuleBase;
using geoproof::SymmetryGenerator;

using Perm = std::vector<int>;  // image[i] = args[perm[i]]

inline Perm compose(const Perm& a, const Perm& b) {
  // apply b, then a
  Perm r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = b[a[i]];
  return r;
}

inline Perm generator_perm(const SymmetryGenerator& g, std::size_t n) {
  Perm p(n);
  std::iota(p.begin(), p.end(), 0);
  if (g.kind == SymmetryGenerator::Kind::Swap) {
    std::swap(p[g.positions[0] - 1], p[g.positions[1] - 1]);
  } else if (g.kind == SymmetryGenerator::Kind::Cycle) {
    // argument at positions[k] moves to positions[k+1]
    const auto& c = g.positions;
    for (std::size_t k = 0; k < c.size(); ++k) p[c[(k + 1) % c.size()] - 1] = c[k] - 1;
  }
  return p;
}

// Closure by repeated composition until nothing new appears.
inline std::set<Perm> group_of(const PredicateDecl& d) {
  const std::size_t n = d.arity();
  std::set<Perm> gens;
  for (const auto& g : d.generators()) {
    if (g.kind == SymmetryGenerator::Kind::Full) {
      Perm p(n);
      std::iota(p.begin(), p.end(), 0);
      do gens.insert(p);
      while (std::next_permutation(p.begin(), p.end()));
    } else {
      gens.insert(generator_perm(g, n));
    }
  }
  Perm id(n);
  std::iota(id.begin(), id.end(), 0);
  std::set<Perm> group{id};
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<Perm> current(group.begin(), group.end());
    for (const auto& a : current) {
      for (const auto& g : gens) {
        if (group.insert(compose(a, g)).second) grew = true;
      }
    }
  }
  return group;
}

inline std::string render(const std::string& pred, const std::vector<std::string>& args) {
  std::string s = pred + "(";
  for (std::size_t i = 0; i < args.size(); ++i) s += (i ? "," : "") + args[i];
  return s + ")";
}

inline std::string canonical_key(const PredicateDecl& d, const std::vector<std::string>& args) {
  std::string best;
  for (const auto& p : group_of(d)) {
    std::vector<std::string> img(args.size());
    for (std::size_t i = 0; i < args.size(); ++i) img[i] = args[p[i]];
    std::string r = render(d.name(), img);
    if (best.empty() || r < best) best = r;
  }
  return best;
}

struct GroundFact {
  std::string pred;
  std::vector<std::string> args;
};

// (rule, sorted premise keys, derived key)
using JustKey = std::tuple<std::string, std::vector<std::string>, std::string>;

struct Saturation {
  std::set<std::string> facts;
  std::set<JustKey> justifications;
};

// Naive fixpoint by trying every assignment of objects to rule variables.
inline Saturation saturate(const std::vector<GroundFact>& given, const RuleBase& base) {
  std::map<std::string, ObjectKind> kind_of;
  Saturation out;
  for (const auto& f : given) {
    const auto& d = base.predicate(f.pred);
    for (std::size_t i = 0; i < f.args.size(); ++i) kind_of.emplace(f.args[i], d.arg_kinds()[i]);
    out.facts.insert(canonical_key(d, f.args));
  }

  bool grew = true;
  while (grew) {
    grew = false;
    const std::set<std::string> snapshot = out.facts;
    for (const auto& rule : base.rules()) {
      std::vector<std::string> vars;
      std::map<std::string, ObjectKind> var_kind;
      for (const auto& p : rule.premises) {
        const auto& d = base.predicate(p.predicate);
        for (std::size_t i = 0; i < p.args.size(); ++i) {
          if (!p.args[i].is_variable) continue;
          if (var_kind.emplace(p.args[i].name, d.arg_kinds()[i]).second) vars.push_back(p.args[i].name);
        }
      }
      std::vector<std::vector<std::string>> choices;
      for (const auto& v : vars) {
        std::vector<std::string> c;
        for (const auto& [obj, k] : kind_of) {
          if (k == var_kind[v]) c.push_back(obj);
        }
        choices.push_back(std::move(c));
      }
      if (std::any_of(choices.begin(), choices.end(), [](const auto& c) { return c.empty(); })) continue;

      std::vector<std::size_t> idx(vars.size(), 0);
      while (true) {
        std::map<std::string, std::string> b;
        for (std::size_t i = 0; i < vars.size(); ++i) b[vars[i]] = choices[i][idx[i]];
        auto ground = [&](const geoproof::Pattern& p) {
          std::vector<std::string> a;
          for (const auto& t : p.args) a.push_back(t.is_variable ? b[t.name] : t.name);
          return canonical_key(base.predicate(p.predicate), a);
        };
        std::vector<std::string> prem;
        bool ok = true;
        for (const auto& p : rule.premises) {
          prem.push_back(ground(p));
          if (!snapshot.count(prem.back())) ok = false;
        }
        if (ok) {
          const std::string derived = ground(rule.conclusion);
          if (std::find(prem.begin(), prem.end(), derived) == prem.end()) {
            std::sort(prem.begin(), prem.end());
            out.justifications.insert({rule.id, prem, derived});
            if (out.facts.insert(derived).second) grew = true;
          }
        }
        std::size_t k = 0;
        while (k < idx.size() && ++idx[k] == choices[k].size()) idx[k++] = 0;
        if (k == idx.size()) break;
      }
    }
  }
  return out;
}

// A proof as the set of (statement, chosen inference) pairs it uses.
using ProofChoice = std::set<std::pair<geoproof::NodeId, geoproof::NodeId>>;

// Every total parent-choice function over the non-hypothesis statements,
// restricted to the part reachable from the conclusion; a choice counts
// when that part is acyclic and grounded in hypotheses. Throws when the
// space is larger than `limit`.
inline std::set<ProofChoice> all_proofs(const geoproof::HpdicGraph& g,
                                        std::uint64_t limit = 20'000'000) {
  using geoproof::NodeClass;
  using geoproof::NodeId;
  std::vector<NodeId> derived;
  for (const auto& n : g.nodes()) {
    if (n.is_statement() && n.cls != NodeClass::Hypothesis) derived.push_back(n.id);
  }
  std::uint64_t space = 1;
  for (NodeId s : derived) {
    space *= std::max<std::size_t>(1, g.in(s).size());
    if (space > limit) throw std::runtime_error("oracle search space too large");
  }

  std::set<ProofChoice> proofs;
  std::vector<std::size_t> idx(derived.size(), 0);
  std::map<NodeId, std::size_t> slot;
  for (std::size_t i = 0; i < derived.size(); ++i) slot[derived[i]] = i;

  while (true) {
    // Walk from the conclusion following the chosen parents.
    ProofChoice used;
    bool valid = true;
    std::map<NodeId, int> state;  // 1 on stack, 2 done
    auto visit = [&](auto&& self, NodeId s) -> void {
      if (!valid) return;
      if (g.node(s).cls == NodeClass::Hypothesis) return;
      if (state[s] == 2) return;
      if (state[s] == 1) {
        valid = false;
        return;
      }
      const auto parents = g.in(s);
      if (parents.empty()) {
        valid = false;
        return;
      }
      state[s] = 1;
      const NodeId inf = parents[idx[slot[s]]];
      used.insert({s, inf});
      for (NodeId p : g.in(inf)) self(self, p);
      state[s] = 2;
    };
    visit(visit, g.conclusion());
    if (valid) proofs.insert(used);

    std::size_t k = 0;
    while (k < idx.size() && ++idx[k] == std::max<std::size_t>(1, g.in(derived[k]).size())) idx[k++] = 0;
    if (k == idx.size()) break;
  }
  return proofs;
}

// ---- random instances ----

struct EngineInstance {
  RuleBase base;
  std::vector<GroundFact> given;
};

inline EngineInstance random_engine_instance(std::mt19937& rng) {
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  EngineInstance inst;
  const int n_objects = pick(2, 4);
  const int n_preds = pick(2, 4);
  std::vector<int> arity;
  for (int i = 0; i < n_preds; ++i) {
    const int a = pick(1, 3);
    arity.push_back(a);
    std::vector<SymmetryGenerator> gens;
    const int s = pick(0, 3);
    if (a == 2 && s >= 2) gens.push_back({SymmetryGenerator::Kind::Swap, {1, 2}});
    if (a == 3 && s == 1) gens.push_back({SymmetryGenerator::Kind::Swap, {2, 3}});
    if (a == 3 && s == 2) gens.push_back({SymmetryGenerator::Kind::Cycle, {1, 2, 3}});
    if (a == 3 && s == 3) gens.push_back({SymmetryGenerator::Kind::Full, {}});
    inst.base.declare(PredicateDecl("p" + std::to_string(i),
                                    std::vector<ObjectKind>(a, ObjectKind::Point), gens));
  }

  const char* var_names[] = {"A", "B", "C", "D"};
  const int n_rules = pick(1, 4);
  for (int r = 0; r < n_rules; ++r) {
    geoproof::Rule rule;
    rule.id = "r" + std::to_string(r);
    std::set<std::string> seen;
    const int n_prem = pick(1, 3);
    for (int k = 0; k < n_prem; ++k) {
      const int p = pick(0, n_preds - 1);
      geoproof::Pattern pat{"p" + std::to_string(p), {}};
      for (int j = 0; j < arity[p]; ++j) {
        const std::string v = var_names[pick(0, 3)];
        seen.insert(v);
        pat.args.push_back(geoproof::Term::variable(v));
      }
      rule.premises.push_back(std::move(pat));
    }
    const std::vector<std::string> vars(seen.begin(), seen.end());
    const int c = pick(0, n_preds - 1);
    geoproof::Pattern concl{"p" + std::to_string(c), {}};
    for (int j = 0; j < arity[c]; ++j) {
      concl.args.push_back(geoproof::Term::variable(vars[pick(0, static_cast<int>(vars.size()) - 1)]));
    }
    rule.conclusion = std::move(concl);
    inst.base.add_rule(std::move(rule));
  }

  const int n_facts = pick(2, 7);
  for (int f = 0; f < n_facts; ++f) {
    const int p = pick(0, n_preds - 1);
    GroundFact g{"p" + std::to_string(p), {}};
    for (int j = 0; j < arity[p]; ++j) g.args.push_back("o" + std::to_string(pick(0, n_objects - 1)));
    inst.given.push_back(std::move(g));
  }
  return inst;
}

// Random bipartite statement/inference graph with at most `max_statements`
// statements; may contain cycles and underivable statements.
inline geoproof::HpdicGraph random_graph(std::mt19937& rng, int max_statements = 12) {
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  const int n = pick(3, max_statements);
  const int n_hyp = pick(1, std::min(3, n - 1));
  std::vector<geoproof::Fact> statements;
  std::vector<std::string> keys;
  for (int i = 0; i < n; ++i) {
    char name[16];
    std::snprintf(name, sizeof name, "s%02d", i);
    statements.push_back(geoproof::Fact::from_canonical(name, {}));
    keys.push_back(statements.back().key());
  }
  std::vector<std::string> hyps(keys.begin(), keys.begin() + n_hyp);
  std::vector<geoproof::GraphInference> infs;
  const int n_inf = pick(n - n_hyp, 2 * n);
  for (int k = 0; k < n_inf; ++k) {
    geoproof::GraphInference inf;
    inf.rule = "r" + std::to_string(pick(0, 3));
    const int d = pick(n_hyp, n - 1);
    inf.derived = keys[d];
    std::set<int> prem;
    const int n_prem = pick(1, 3);
    for (int j = 0; j < n_prem; ++j) {
      int p = pick(0, n - 1);
      if (p == d) p = pick(0, n_hyp - 1);
      prem.insert(p);
    }
    for (int p : prem) inf.premises.push_back(keys[p]);
    infs.push_back(std::move(inf));
  }
  return geoproof::HpdicGraph::assemble(statements, hyps, infs, keys.back());
}

}  // namespace oracle
