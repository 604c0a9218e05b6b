#include "geoproof/dsl.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "geoproof/errors.hpp"
#include "lexer.hpp"

namespace geoproof {

using detail::Token;
using detail::TokenStream;

namespace {

std::string location(const Token& t) {
  return std::to_string(t.line) + ":" + std::to_string(t.col) + ": ";
}

// Re-raises a semantic error with the position of the construct that caused it.
template <typename Fn>
auto at_token(const Token& t, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const SyntaxError&) {
    throw;
  } catch (const UndeclaredPredicate& e) {
    throw UndeclaredPredicate(location(t) + e.what());
  } catch (const UndeclaredObject& e) {
    throw UndeclaredObject(location(t) + e.what());
  } catch (const ArityMismatch& e) {
    throw ArityMismatch(location(t) + e.what());
  } catch (const KindMismatch& e) {
    throw KindMismatch(location(t) + e.what());
  } catch (const RangeRestrictionViolation& e) {
    throw RangeRestrictionViolation(location(t) + e.what());
  } catch (const DuplicateRuleId& e) {
    throw DuplicateRuleId(location(t) + e.what());
  } catch (const InvalidDeclaration& e) {
    throw InvalidDeclaration(location(t) + e.what());
  } catch (const InvalidProblem& e) {
    throw InvalidProblem(location(t) + e.what());
  }
}

std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') {
      out += '\\';
      out += c;
    } else if (c == '\n') {
      out += "\\n";
    } else {
      out += c;
    }
  }
  out += '"';
  return out;
}

Pattern parse_pattern(TokenStream& ts) {
  Pattern p;
  p.predicate = ts.expect_identifier("predicate name");
  ts.expect_punct('(');
  do {
    if (ts.is_punct('?')) {
      ts.next();
      p.args.push_back(Term::variable(ts.expect_identifier("variable name")));
    } else {
      p.args.push_back(Term::constant(ts.expect_identifier("object name or ?Variable")));
    }
    if (!ts.is_punct(',')) break;
    ts.next();
  } while (true);
  ts.expect_punct(')');
  return p;
}

RawFact parse_atom(TokenStream& ts) {
  RawFact f;
  f.predicate = ts.expect_identifier("predicate name");
  ts.expect_punct('(');
  do {
    f.args.push_back(ts.expect_identifier("object name"));
    if (!ts.is_punct(',')) break;
    ts.next();
  } while (true);
  ts.expect_punct(')');
  return f;
}

SymmetryGenerator parse_generator(TokenStream& ts) {
  if (ts.is_name("full")) {
    ts.next();
    return {SymmetryGenerator::Kind::Full, {}};
  }
  if (ts.is_name("swap")) {
    ts.next();
    int a = ts.expect_int("position");
    int b = ts.expect_int("position");
    return {SymmetryGenerator::Kind::Swap, {a, b}};
  }
  if (ts.is_name("cycle")) {
    ts.next();
    SymmetryGenerator g{SymmetryGenerator::Kind::Cycle, {}};
    g.positions.push_back(ts.expect_int("position"));
    while (ts.peek().kind == Token::Kind::Int) g.positions.push_back(ts.expect_int("position"));
    return g;
  }
  ts.fail("expected 'swap', 'cycle' or 'full', found " + detail::describe(ts.peek()));
}

void parse_pred_decl(TokenStream& ts, RuleBase& base) {
  const Token start = ts.peek();
  ts.expect_name("pred");
  std::string name = ts.expect_identifier("predicate name");
  ts.expect_punct('/');
  const Token arity_tok = ts.peek();
  const int arity = ts.expect_int("arity");
  ts.expect_name("kinds");
  ts.expect_punct('(');
  std::vector<ObjectKind> kinds;
  do {
    const Token kt = ts.peek();
    std::string k = ts.expect_identifier("object kind");
    auto kind = parse_object_kind(k);
    if (!kind) ts.fail(kt, "unknown object kind '" + k + "'");
    kinds.push_back(*kind);
    if (!ts.is_punct(',')) break;
    ts.next();
  } while (true);
  ts.expect_punct(')');
  if (arity < 1 || static_cast<std::size_t>(arity) != kinds.size()) {
    throw ArityMismatch(location(arity_tok) + "predicate " + name + " declares arity " +
                        std::to_string(arity) + " but lists " + std::to_string(kinds.size()) +
                        " kinds");
  }
  std::vector<SymmetryGenerator> gens;
  if (ts.is_name("sym")) {
    ts.next();
    ts.expect_punct('(');
    gens.push_back(parse_generator(ts));
    while (ts.is_punct(';')) {
      ts.next();
      gens.push_back(parse_generator(ts));
    }
    ts.expect_punct(')');
  }
  at_token(start, [&] { base.declare(PredicateDecl(std::move(name), std::move(kinds), std::move(gens))); });
}

void parse_rule(TokenStream& ts, RuleBase& base) {
  ts.expect_name("rule");
  const Token id_tok = ts.peek();
  Rule r;
  r.id = ts.expect_identifier("rule name");
  ts.expect_punct('{');
  ts.expect_label("level");
  r.level = ts.expect_int("level");
  ts.expect_label("isle");
  r.isle = ts.expect_identifier("isle tag");
  ts.expect_label("tier");
  const Token tier_tok = ts.peek();
  auto tier = parse_tier(ts.expect_identifier("tier"));
  if (!tier) ts.fail(tier_tok, "tier must be coarse, fine or default");
  r.tier = *tier;
  ts.expect_label("if");
  r.premises.push_back(parse_pattern(ts));
  while (ts.is_punct(',')) {
    ts.next();
    r.premises.push_back(parse_pattern(ts));
  }
  ts.expect_label("then");
  r.conclusion = parse_pattern(ts);
  if (ts.is_label("hint")) {
    ts.next();
    ts.next();
    r.hint = ts.expect_string("hint string");
  }
  ts.expect_punct('}');
  at_token(id_tok, [&] { base.add_rule(std::move(r)); });
}

void check_pattern(const Pattern& p, const RuleBase& base,
                   std::map<std::string, ObjectKind>& var_kinds) {
  const PredicateDecl& decl = base.predicate(p.predicate);
  if (decl.arity() != p.args.size()) {
    throw ArityMismatch(p.render() + ": " + decl.name() + " expects " +
                        std::to_string(decl.arity()) + " arguments");
  }
  for (std::size_t i = 0; i < p.args.size(); ++i) {
    if (!p.args[i].is_variable) continue;
    const ObjectKind want = decl.arg_kinds()[i];
    auto [it, fresh] = var_kinds.emplace(p.args[i].name, want);
    if (!fresh && it->second != want) {
      throw KindMismatch("variable ?" + p.args[i].name + " used both as " +
                         std::string(to_string(it->second)) + " and " + std::string(to_string(want)));
    }
  }
}

}  // namespace

std::string Pattern::render() const {
  std::string out = predicate + "(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i != 0) out += ",";
    out += args[i].render();
  }
  return out + ")";
}

std::string_view to_string(Tier tier) {
  switch (tier) {
    case Tier::Coarse:
      return "coarse";
    case Tier::Fine:
      return "fine";
    case Tier::Default:
      return "default";
  }
  return "default";
}

std::optional<Tier> parse_tier(std::string_view text) {
  if (text == "coarse") return Tier::Coarse;
  if (text == "fine") return Tier::Fine;
  if (text == "default") return Tier::Default;
  return std::nullopt;
}

std::vector<std::string> Rule::variables() const {
  std::vector<std::string> out;
  auto visit = [&](const Pattern& p) {
    for (const auto& t : p.args) {
      if (t.is_variable && std::find(out.begin(), out.end(), t.name) == out.end()) {
        out.push_back(t.name);
      }
    }
  };
  for (const auto& p : premises) visit(p);
  visit(conclusion);
  return out;
}

void RuleBase::declare(PredicateDecl decl) {
  auto it = predicate_index_.find(decl.name());
  if (it != predicate_index_.end()) {
    if (predicates_[it->second] == decl) return;
    throw InvalidDeclaration("predicate " + decl.name() + " redeclared with a different signature");
  }
  predicate_index_.emplace(decl.name(), predicates_.size());
  predicates_.push_back(std::move(decl));
}

void RuleBase::add_rule(Rule rule) {
  if (!is_identifier(rule.id)) throw InvalidDeclaration("invalid rule id '" + rule.id + "'");
  if (rule_index_.count(rule.id) != 0) throw DuplicateRuleId("duplicate rule id '" + rule.id + "'");
  if (rule.premises.empty()) throw InvalidDeclaration("rule " + rule.id + " has no premises");
  if (rule.level < 1) throw InvalidDeclaration("rule " + rule.id + ": level must be >= 1");
  std::map<std::string, ObjectKind> var_kinds;
  for (const auto& p : rule.premises) check_pattern(p, *this, var_kinds);
  std::set<std::string> bound;
  for (const auto& p : rule.premises) {
    for (const auto& t : p.args) {
      if (t.is_variable) bound.insert(t.name);
    }
  }
  for (const auto& t : rule.conclusion.args) {
    if (t.is_variable && bound.count(t.name) == 0) {
      throw RangeRestrictionViolation("rule " + rule.id + ": conclusion variable ?" + t.name +
                                      " does not occur in any premise");
    }
  }
  check_pattern(rule.conclusion, *this, var_kinds);
  rule_index_.emplace(rule.id, rules_.size());
  rules_.push_back(std::move(rule));
}

const PredicateDecl* RuleBase::find_predicate(std::string_view name) const {
  auto it = predicate_index_.find(name);
  return it == predicate_index_.end() ? nullptr : &predicates_[it->second];
}

const PredicateDecl& RuleBase::predicate(std::string_view name) const {
  const PredicateDecl* d = find_predicate(name);
  if (d == nullptr) throw UndeclaredPredicate("undeclared predicate '" + std::string(name) + "'");
  return *d;
}

const Rule* RuleBase::find_rule(std::string_view id) const {
  auto it = rule_index_.find(id);
  return it == rule_index_.end() ? nullptr : &rules_[it->second];
}

RuleBase RuleBase::merged_with(const RuleBase& other) const {
  RuleBase out = *this;
  for (const auto& p : other.predicates_) out.declare(p);
  for (const auto& r : other.rules_) out.add_rule(r);
  return out;
}

RuleBase parse_rules(std::string_view text) {
  TokenStream ts(detail::tokenize(text));
  RuleBase base;
  while (!ts.at_end()) {
    if (ts.is_name("pred")) {
      parse_pred_decl(ts, base);
    } else if (ts.is_name("rule")) {
      parse_rule(ts, base);
    } else {
      ts.fail("expected 'pred' or 'rule', found " + detail::describe(ts.peek()));
    }
  }
  return base;
}

std::string serialize_rules(const RuleBase& base) {
  std::ostringstream out;
  for (const auto& p : base.predicates()) {
    out << "pred " << p.name() << "/" << p.arity() << " kinds(";
    for (std::size_t i = 0; i < p.arity(); ++i) {
      out << (i ? "," : "") << to_string(p.arg_kinds()[i]);
    }
    out << ")";
    if (!p.generators().empty()) {
      out << " sym(";
      for (std::size_t i = 0; i < p.generators().size(); ++i) {
        const auto& g = p.generators()[i];
        if (i) out << "; ";
        switch (g.kind) {
          case SymmetryGenerator::Kind::Full:
            out << "full";
            break;
          case SymmetryGenerator::Kind::Swap:
            out << "swap";
            break;
          case SymmetryGenerator::Kind::Cycle:
            out << "cycle";
            break;
        }
        for (int pos : g.positions) out << " " << pos;
      }
      out << ")";
    }
    out << "\n";
  }
  for (const auto& r : base.rules()) {
    out << "\nrule " << r.id << " {\n";
    out << "  level: " << r.level << "\n";
    out << "  isle: " << r.isle << "\n";
    out << "  tier: " << to_string(r.tier) << "\n";
    out << "  if: ";
    for (std::size_t i = 0; i < r.premises.size(); ++i) {
      out << (i ? ", " : "") << r.premises[i].render();
    }
    out << "\n  then: " << r.conclusion.render() << "\n";
    if (!r.hint.empty()) out << "  hint: " << quote(r.hint) << "\n";
    out << "}\n";
  }
  return out.str();
}

std::string Problem::statement() const {
  std::string out = "Given ";
  for (std::size_t i = 0; i < hypotheses.size(); ++i) {
    if (i != 0) out += i + 1 == hypotheses.size() ? " and " : ", ";
    out += hypotheses[i].key();
  }
  out += ", prove " + conclusion.key() + ".";
  return out;
}

bool operator==(const Problem& a, const Problem& b) {
  return a.id == b.id && a.objects.objects() == b.objects.objects() &&
         a.student_figure == b.student_figure && a.hypotheses == b.hypotheses &&
         a.superfigure == b.superfigure && a.conclusion == b.conclusion;
}

Problem parse_problem(std::string_view text, const RuleBase& base) {
  TokenStream ts(detail::tokenize(text));
  Problem prob;
  ts.expect_name("problem");
  prob.id = ts.expect_identifier("problem name");
  ts.expect_punct('{');

  ts.expect_label("objects");
  if (ts.is_label("student")) ts.fail("at least one object must be declared");
  while (!ts.is_label("student")) {
    const Token kt = ts.peek();
    std::string k = ts.expect_identifier("object kind");
    auto kind = parse_object_kind(k);
    if (!kind) ts.fail(kt, "unknown object kind '" + k + "'");
    const Token nt = ts.peek();
    std::string name = ts.expect_identifier("object name");
    at_token(nt, [&] { prob.objects.add({std::move(name), *kind}); });
  }

  ts.expect_label("student");
  while (!ts.is_label("hypotheses")) {
    const Token nt = ts.peek();
    std::string name = ts.expect_identifier("object name");
    at_token(nt, [&] { prob.objects.at(name); });
    prob.student_figure.push_back(std::move(name));
  }

  auto read_fact = [&] {
    const Token ft = ts.peek();
    RawFact raw = parse_atom(ts);
    return at_token(ft, [&] { return resolve_fact(raw, base, prob.objects); });
  };

  ts.expect_label("hypotheses");
  if (ts.is_label("superfigure")) ts.fail("at least one hypothesis is required");
  while (!ts.is_label("superfigure")) prob.hypotheses.push_back(read_fact());

  ts.expect_label("superfigure");
  while (!ts.is_label("conclusion") && !ts.is_punct('}') && !ts.at_end()) {
    prob.superfigure.push_back(read_fact());
  }
  if (!ts.is_label("conclusion")) {
    throw MissingConclusion(location(ts.peek()) + "problem " + prob.id + " has no conclusion");
  }
  ts.expect_label("conclusion");
  const Token ct = ts.peek();
  prob.conclusion = read_fact();
  ts.expect_punct('}');
  if (!ts.at_end()) ts.fail("unexpected " + detail::describe(ts.peek()) + " after problem block");

  for (const auto& h : prob.hypotheses) {
    if (h == prob.conclusion) {
      throw InvalidProblem(location(ct) + "conclusion " + h.key() + " is also a hypothesis");
    }
  }
  return prob;
}

std::string serialize_problem(const Problem& problem) {
  std::ostringstream out;
  out << "problem " << problem.id << " {\n  objects:\n";
  for (const auto& o : problem.objects.objects()) {
    out << "    " << to_string(o.kind) << " " << o.name << "\n";
  }
  out << "  student:";
  for (const auto& s : problem.student_figure) out << " " << s;
  out << "\n  hypotheses:\n";
  for (const auto& h : problem.hypotheses) out << "    " << h.key() << "\n";
  out << "  superfigure:\n";
  for (const auto& f : problem.superfigure) out << "    " << f.key() << "\n";
  out << "  conclusion: " << problem.conclusion.key() << "\n}\n";
  return out.str();
}

RawFact parse_raw_fact(std::string_view text) {
  TokenStream ts(detail::tokenize(text));
  RawFact f = parse_atom(ts);
  if (!ts.at_end()) ts.fail("unexpected " + detail::describe(ts.peek()) + " after statement");
  return f;
}

Fact resolve_fact(const RawFact& raw, const RuleBase& base, const ObjectTable& objects) {
  const PredicateDecl& decl = base.predicate(raw.predicate);
  if (decl.arity() != raw.args.size()) {
    throw ArityMismatch(raw.predicate + " expects " + std::to_string(decl.arity()) +
                        " arguments, got " + std::to_string(raw.args.size()));
  }
  return canonicalize(decl, raw.args, objects);
}

void IsleConfig::validate() const {
  if (enabled_tiers.empty()) throw std::invalid_argument("isle configuration enables no tier");
}

RuleBase filter_rules(const RuleBase& base, const IsleConfig& cfg, std::vector<Warning>* warnings) {
  cfg.validate();
  RuleBase out;
  for (const auto& p : base.predicates()) out.declare(p);
  for (const auto& r : base.rules()) {
    if (r.level > cfg.max_level) continue;
    if (cfg.enabled_isles && cfg.enabled_isles->count(r.isle) == 0) continue;
    if (cfg.enabled_tiers.count(r.tier) == 0) continue;
    out.add_rule(r);
  }
  if (out.rules().empty() && warnings != nullptr) {
    warnings->push_back({Warning::Kind::EmptyRuleBase, "no rule survives the isle configuration"});
  }
  return out;
}

}  // namespace geoproof
