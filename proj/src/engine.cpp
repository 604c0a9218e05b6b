#include "geoproof/engine.hpp"

#include <algorithm>
#include <set>

#include "geoproof/errors.hpp"
#include "json.hpp"

namespace geoproof {

std::pair<FactId, bool> FactStore::insert(const Fact& fact) {
  auto [it, fresh] = by_key_.emplace(fact.key(), facts_.size());
  if (!fresh) return {it->second, false};
  facts_.push_back(fact);
  by_predicate_[fact.predicate()].push_back(it->second);
  return {it->second, true};
}

std::optional<FactId> FactStore::find(std::string_view key) const {
  auto it = by_key_.find(std::string(key));
  if (it == by_key_.end()) return std::nullopt;
  return it->second;
}

std::span<const FactId> FactStore::with_predicate(std::string_view predicate) const {
  auto it = by_predicate_.find(predicate);
  if (it == by_predicate_.end()) return {};
  return it->second;
}

namespace {

using PredicateBuckets = std::map<std::string, std::vector<FactId>, std::less<>>;

struct CompiledPattern {
  const PredicateDecl* decl;
  std::vector<int> var;              // variable slot per argument, -1 for constants
  std::vector<std::string> constant;  // used where var == -1
};

struct CompiledPremises {
  std::vector<std::string> variables;
  std::vector<CompiledPattern> patterns;
};

CompiledPremises compile(std::span<const Pattern> premises, const RuleBase& base) {
  CompiledPremises out;
  for (const auto& p : premises) {
    CompiledPattern cp{&base.predicate(p.predicate), {}, {}};
    if (cp.decl->arity() != p.args.size()) {
      throw ArityMismatch(p.render() + ": arity does not match the declaration");
    }
    for (const auto& t : p.args) {
      if (t.is_variable) {
        auto it = std::find(out.variables.begin(), out.variables.end(), t.name);
        if (it == out.variables.end()) {
          out.variables.push_back(t.name);
          it = out.variables.end() - 1;
        }
        cp.var.push_back(static_cast<int>(it - out.variables.begin()));
        cp.constant.emplace_back();
      } else {
        cp.var.push_back(-1);
        cp.constant.push_back(t.name);
      }
    }
    out.patterns.push_back(std::move(cp));
  }
  return out;
}

struct Match {
  std::vector<std::string> values;  // per variable slot
  std::vector<FactId> premises;     // per pattern
};

// Backtracking join. When `delta` is set, the pattern at delta_pos only
// ranges over facts in it; every other pattern ranges over the full store.
class Matcher {
 public:
  Matcher(const CompiledPremises& cp, const FactStore& store, const PredicateBuckets* delta,
          std::size_t delta_pos)
      : cp_(cp), store_(store), delta_(delta), delta_pos_(delta_pos) {
    order_.resize(cp.patterns.size());
    for (std::size_t i = 0; i < order_.size(); ++i) order_[i] = i;
    if (delta_ != nullptr) std::swap(order_[0], order_[delta_pos_]);
    bound_.assign(cp.variables.size(), nullptr);
    chosen_.assign(cp.patterns.size(), 0);
  }

  void run(std::vector<Match>& out) {
    out_ = &out;
    step(0);
  }

 private:
  std::span<const FactId> candidates(std::size_t pattern) const {
    const std::string& pred = cp_.patterns[pattern].decl->name();
    if (delta_ != nullptr && pattern == delta_pos_) {
      auto it = delta_->find(pred);
      if (it == delta_->end()) return {};
      return it->second;
    }
    return store_.with_predicate(pred);
  }

  void step(std::size_t depth) {
    if (depth == order_.size()) {
      Match m;
      m.values.reserve(bound_.size());
      for (const auto* v : bound_) m.values.push_back(*v);
      m.premises = chosen_;
      out_->push_back(std::move(m));
      return;
    }
    const std::size_t pi = order_[depth];
    const CompiledPattern& pat = cp_.patterns[pi];
    const std::size_t n = pat.var.size();
    std::vector<int> newly;
    for (FactId fid : candidates(pi)) {
      const auto& args = store_.fact(fid).args();
      for (const auto& perm : pat.decl->group()) {
        newly.clear();
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i) {
          const std::string& value = args[perm[i]];
          const int v = pat.var[i];
          if (v < 0) {
            ok = value == pat.constant[i];
          } else if (bound_[v] == nullptr) {
            bound_[v] = &value;
            newly.push_back(v);
          } else {
            ok = *bound_[v] == value;
          }
        }
        if (ok) {
          chosen_[pi] = fid;
          step(depth + 1);
        }
        for (int v : newly) bound_[v] = nullptr;
      }
    }
  }

  const CompiledPremises& cp_;
  const FactStore& store_;
  const PredicateBuckets* delta_;
  std::size_t delta_pos_;
  std::vector<std::size_t> order_;
  std::vector<const std::string*> bound_;
  std::vector<FactId> chosen_;
  std::vector<Match>* out_ = nullptr;
};

// Distinct matches; with a delta, the union over every delta position.
std::vector<Match> find_matches(const CompiledPremises& cp, const FactStore& store,
                                const PredicateBuckets* delta) {
  std::vector<Match> all;
  if (delta == nullptr) {
    Matcher(cp, store, nullptr, 0).run(all);
  } else {
    for (std::size_t pos = 0; pos < cp.patterns.size(); ++pos) {
      Matcher(cp, store, delta, pos).run(all);
    }
  }
  std::sort(all.begin(), all.end(), [](const Match& a, const Match& b) { return a.values < b.values; });
  all.erase(std::unique(all.begin(), all.end(),
                        [](const Match& a, const Match& b) { return a.values == b.values; }),
            all.end());
  return all;
}

Binding to_binding(const CompiledPremises& cp, const Match& m) {
  Binding b;
  for (std::size_t i = 0; i < cp.variables.size(); ++i) b.emplace(cp.variables[i], m.values[i]);
  return b;
}

Fact instantiate(const Pattern& p, const Binding& b, const RuleBase& base) {
  std::vector<std::string> args;
  args.reserve(p.args.size());
  for (const auto& t : p.args) args.push_back(t.is_variable ? b.at(t.name) : t.name);
  return canonicalize_names(base.predicate(p.predicate), args);
}

std::vector<Candidate> apply_compiled(const Rule& rule, const CompiledPremises& cp,
                                      const FactStore& store, const RuleBase& base,
                                      const PredicateBuckets* delta) {
  std::map<std::pair<std::vector<FactId>, std::string>, Candidate> unique;
  for (const auto& m : find_matches(cp, store, delta)) {
    Binding b = to_binding(cp, m);
    Fact derived = instantiate(rule.conclusion, b, base);
    if (std::any_of(m.premises.begin(), m.premises.end(),
                    [&](FactId id) { return store.fact(id) == derived; })) {
      continue;
    }
    std::vector<FactId> multiset = m.premises;
    std::sort(multiset.begin(), multiset.end());
    auto key = std::make_pair(std::move(multiset), derived.key());
    auto it = unique.find(key);
    if (it == unique.end()) {
      unique.emplace(std::move(key), Candidate{rule.id, m.premises, std::move(derived), std::move(b)});
    } else if (b < it->second.binding) {
      it->second.premises = m.premises;
      it->second.binding = std::move(b);
    }
  }
  std::vector<Candidate> out;
  out.reserve(unique.size());
  for (auto& [k, c] : unique) out.push_back(std::move(c));
  return out;
}

}  // namespace

std::vector<Binding> match_premises(std::span<const Pattern> premises, const FactStore& store,
                                    const RuleBase& base) {
  const CompiledPremises cp = compile(premises, base);
  std::vector<Binding> out;
  for (const auto& m : find_matches(cp, store, nullptr)) out.push_back(to_binding(cp, m));
  return out;
}

std::vector<Candidate> apply_rule(const Rule& rule, const FactStore& store, const RuleBase& base) {
  return apply_compiled(rule, compile(rule.premises, base), store, base, nullptr);
}

FactId DerivationRecord::add_fact(const Fact& fact, bool hypothesis) {
  auto [id, fresh] = store_.insert(fact);
  if (fresh) hypothesis_.push_back(hypothesis);
  if (hypothesis) hypothesis_[id] = true;
  return id;
}

bool DerivationRecord::add_justification(Justification j) {
  if (std::find(j.premises.begin(), j.premises.end(), j.derived) != j.premises.end()) return false;
  std::vector<FactId> multiset = j.premises;
  std::sort(multiset.begin(), multiset.end());
  DedupKey key{j.rule, std::move(multiset), j.derived};
  auto it = dedup_.find(key);
  if (it != dedup_.end()) {
    Justification& existing = justifications_[it->second];
    if (j.binding < existing.binding) existing = std::move(j);
    return false;
  }
  dedup_.emplace(std::move(key), justifications_.size());
  justifications_.push_back(std::move(j));
  return true;
}

std::vector<FactId> DerivationRecord::hypotheses() const {
  std::vector<FactId> out;
  for (FactId i = 0; i < hypothesis_.size(); ++i) {
    if (hypothesis_[i]) out.push_back(i);
  }
  return out;
}

std::string render_hint(std::string_view hint_template, const Binding& binding) {
  std::string out;
  std::size_t i = 0;
  while (i < hint_template.size()) {
    if (hint_template[i] == '{' && i + 1 < hint_template.size() && hint_template[i + 1] == '?') {
      const auto close = hint_template.find('}', i);
      if (close != std::string_view::npos) {
        const std::string var(hint_template.substr(i + 2, close - i - 2));
        auto it = binding.find(var);
        if (it != binding.end()) {
          out += it->second;
          i = close + 1;
          continue;
        }
      }
    }
    out += hint_template[i++];
  }
  return out;
}

namespace {

struct CompiledRule {
  const Rule* rule;
  CompiledPremises premises;
};

std::size_t record_round(DerivationRecord& record, const std::vector<CompiledRule>& rules,
                         const RuleBase& base, const PredicateBuckets* delta,
                         std::vector<FactId>& new_facts) {
  // Every rule sees the store as it was when the round started.
  std::vector<std::pair<const Rule*, Candidate>> found;
  for (const auto& cr : rules) {
    for (auto& c : apply_compiled(*cr.rule, cr.premises, record.store(), base, delta)) {
      found.emplace_back(cr.rule, std::move(c));
    }
  }
  // Insert new facts in key order so ids do not depend on rule order.
  std::vector<const Fact*> fresh;
  for (const auto& [r, c] : found) {
    if (!record.store().contains(c.derived.key())) fresh.push_back(&c.derived);
  }
  std::sort(fresh.begin(), fresh.end(), [](const Fact* a, const Fact* b) { return a->key() < b->key(); });
  fresh.erase(std::unique(fresh.begin(), fresh.end(),
                          [](const Fact* a, const Fact* b) { return a->key() == b->key(); }),
              fresh.end());
  new_facts.clear();
  for (const Fact* f : fresh) new_facts.push_back(record.add_fact(*f));

  std::size_t added = 0;
  for (auto& [r, c] : found) {
    Justification j;
    j.rule = c.rule;
    j.premises = std::move(c.premises);
    j.derived = *record.find(c.derived.key());
    j.hint = render_hint(r->hint, c.binding);
    j.binding = std::move(c.binding);
    if (record.add_justification(std::move(j))) ++added;
  }
  return added;
}

}  // namespace

DerivationRecord saturate_facts(std::span<const Fact> given, const RuleBase& base,
                                const SaturationOptions& options) {
  DerivationRecord record;
  for (const auto& f : given) record.add_fact(f, true);

  std::vector<CompiledRule> rules;
  rules.reserve(base.rules().size());
  for (const auto& r : base.rules()) rules.push_back({&r, compile(r.premises, base)});

  std::vector<FactId> new_facts;
  PredicateBuckets delta;
  bool first = true;
  while (true) {
    if (record.rounds >= options.limits.max_rounds) {
      throw LimitExceeded("saturation did not converge within " +
                          std::to_string(options.limits.max_rounds) + " rounds");
    }
    ++record.rounds;
    const bool naive = first || options.strategy == Strategy::Naive;
    record_round(record, rules, base, naive ? nullptr : &delta, new_facts);
    first = false;
    if (record.store().size() > options.limits.max_facts) {
      throw LimitExceeded("saturation produced more than " +
                          std::to_string(options.limits.max_facts) + " facts");
    }
    if (new_facts.empty()) break;
    delta.clear();
    for (FactId id : new_facts) delta[record.fact(id).predicate()].push_back(id);
  }
  if (options.harvest_round) {
    record_round(record, rules, base, nullptr, new_facts);
  }
  return record;
}

DerivationRecord saturate(const Problem& problem, const RuleBase& base,
                          const SaturationOptions& options) {
  std::vector<Fact> given = problem.hypotheses;
  given.insert(given.end(), problem.superfigure.begin(), problem.superfigure.end());
  return saturate_facts(given, base, options);
}

std::string dump_derivation(const DerivationRecord& record, int indent) {
  using nlohmann::ordered_json;
  std::vector<std::string> facts;
  std::vector<std::string> hyps;
  for (FactId i = 0; i < record.facts().size(); ++i) {
    facts.push_back(record.fact(i).key());
    if (record.is_hypothesis(i)) hyps.push_back(record.fact(i).key());
  }
  std::sort(facts.begin(), facts.end());
  std::sort(hyps.begin(), hyps.end());

  struct Row {
    std::string rule;
    std::vector<std::string> premises;
    std::string derived;
    auto tie() const { return std::tie(derived, rule, premises); }
  };
  std::vector<Row> rows;
  for (const auto& j : record.justifications()) {
    Row r{j.rule, {}, record.fact(j.derived).key()};
    for (FactId p : j.premises) r.premises.push_back(record.fact(p).key());
    rows.push_back(std::move(r));
  }
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.tie() < b.tie(); });

  ordered_json out;
  out["schemaVersion"] = 1;
  out["rounds"] = record.rounds;
  out["facts"] = facts;
  out["hypotheses"] = hyps;
  out["justifications"] = ordered_json::array();
  for (const auto& r : rows) {
    out["justifications"].push_back({{"rule", r.rule}, {"premises", r.premises}, {"derived", r.derived}});
  }
  return out.dump(indent) + "\n";
}

}  // namespace geoproof
