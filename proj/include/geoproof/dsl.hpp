#pragma once

// Rule packs (.qr), problem files (.qp) and teacher-facing rule filtering.
//
// Rule file:
//   pred perp/2 kinds(line,line) sym(swap 1 2)
//   rule on_bisector {
//     level: 1  isle: perp_bisector  tier: fine
//     if: equidistant(?P,?A,?B), segmentOf(?S,?A,?B)
//     then: onBisector(?P,?S)
//     hint: "Where are the points equidistant from {?A} and {?B}?"
//   }
//
// Problem file:
//   problem bisector {
//     objects: point A point B ... line lXY segment sAB
//     student: A B X Y
//     hypotheses: equidistant(X,A,B) ...
//     superfigure: lineThrough(lXY,X,Y) ...
//     conclusion: perpBisector(lXY,sAB)
//   }

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "geoproof/model.hpp"

namespace geoproof {

struct Term {
  bool is_variable = false;
  std::string name;  // without the leading '?'

  static Term variable(std::string n) { return {true, std::move(n)}; }
  static Term constant(std::string n) { return {false, std::move(n)}; }
  std::string render() const { return is_variable ? "?" + name : name; }

  friend bool operator==(const Term&, const Term&) = default;
};

struct Pattern {
  std::string predicate;
  std::vector<Term> args;

  std::string render() const;
  friend bool operator==(const Pattern&, const Pattern&) = default;
};

enum class Tier { Coarse, Fine, Default };

std::string_view to_string(Tier tier);
std::optional<Tier> parse_tier(std::string_view text);

struct Rule {
  std::string id;
  std::vector<Pattern> premises;
  Pattern conclusion;
  int level = 1;
  std::string isle;
  Tier tier = Tier::Default;
  std::string hint;  // may contain {?Var} placeholders

  // Distinct variables in first-occurrence order over premises then conclusion.
  std::vector<std::string> variables() const;

  friend bool operator==(const Rule&, const Rule&) = default;
};

// Predicates are kept in declaration order; lookups go through the index.
class RuleBase {
 public:
  // Identical redeclaration is accepted; a conflicting one throws
  // InvalidDeclaration.
  void declare(PredicateDecl decl);
  // Validates against the declarations (UndeclaredPredicate, ArityMismatch,
  // KindMismatch, RangeRestrictionViolation, DuplicateRuleId).
  void add_rule(Rule rule);

  const PredicateDecl* find_predicate(std::string_view name) const;
  const PredicateDecl& predicate(std::string_view name) const;  // UndeclaredPredicate
  const std::vector<PredicateDecl>& predicates() const { return predicates_; }
  const std::vector<Rule>& rules() const { return rules_; }
  const Rule* find_rule(std::string_view id) const;

  // Copy of this base with `other`'s declarations and rules appended.
  RuleBase merged_with(const RuleBase& other) const;

  friend bool operator==(const RuleBase&, const RuleBase&) = default;

 private:
  std::vector<PredicateDecl> predicates_;
  std::map<std::string, std::size_t, std::less<>> predicate_index_;
  std::vector<Rule> rules_;
  std::map<std::string, std::size_t, std::less<>> rule_index_;
};

RuleBase parse_rules(std::string_view text);
std::string serialize_rules(const RuleBase& base);

struct Problem {
  std::string id;
  ObjectTable objects;
  std::vector<std::string> student_figure;
  std::vector<Fact> hypotheses;
  std::vector<Fact> superfigure;
  Fact conclusion = Fact::from_canonical("missing", {});

  // "Given ..., prove ..." rendering used by the service listing.
  std::string statement() const;
};

bool operator==(const Problem& a, const Problem& b);

// Canonicalizes every fact; never adds facts the file does not state.
Problem parse_problem(std::string_view text, const RuleBase& base);
std::string serialize_problem(const Problem& problem);

// A bare `pred(a,b,...)` atom as typed by a student or a session script.
struct RawFact {
  std::string predicate;
  std::vector<std::string> args;
};
RawFact parse_raw_fact(std::string_view text);  // SyntaxError
// UndeclaredPredicate/UndeclaredObject/ArityMismatch/KindMismatch.
Fact resolve_fact(const RawFact& raw, const RuleBase& base, const ObjectTable& objects);

struct IsleConfig {
  int max_level = 1 << 20;
  std::optional<std::set<std::string>> enabled_isles;  // nullopt: every isle
  std::set<Tier> enabled_tiers{Tier::Coarse, Tier::Fine, Tier::Default};

  // Throws std::invalid_argument when no tier is enabled.
  void validate() const;
  static IsleConfig all() { return {}; }
};

struct Warning {
  enum class Kind { EmptyRuleBase, CapExceeded };
  Kind kind;
  std::string message;
};

RuleBase filter_rules(const RuleBase& base, const IsleConfig& cfg,
                      std::vector<Warning>* warnings = nullptr);

}  // namespace geoproof
