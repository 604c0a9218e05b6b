#pragma once

// Geometric objects, predicate declarations with argument symmetries, and
// canonical ground facts.

#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace geoproof {

enum class ObjectKind { Point, Line, Segment, Angle, Circle, Polygon, Scalar };

std::string_view to_string(ObjectKind kind);
std::optional<ObjectKind> parse_object_kind(std::string_view text);

// Identifiers follow [A-Za-z][A-Za-z0-9_]*.
bool is_identifier(std::string_view text);

struct Object {
  std::string name;
  ObjectKind kind;

  friend bool operator==(const Object&, const Object&) = default;
};

// Name -> object lookup for one problem.
class ObjectTable {
 public:
  ObjectTable() = default;
  explicit ObjectTable(std::span<const Object> objects);

  // Throws InvalidProblem on duplicate names or invalid identifiers.
  void add(Object object);
  const Object* find(std::string_view name) const;
  const Object& at(std::string_view name) const;  // UndeclaredObject
  std::size_t size() const { return by_name_.size(); }

  // Declaration order.
  const std::vector<Object>& objects() const { return objects_; }

 private:
  std::vector<Object> objects_;
  std::map<std::string, std::size_t, std::less<>> by_name_;
};

// A permutation of argument positions (0-based): image[i] = args[perm[i]].
using Permutation = std::vector<int>;

// One generator as written in a rule pack. Positions are 1-based.
struct SymmetryGenerator {
  enum class Kind { Swap, Cycle, Full };
  Kind kind;
  std::vector<int> positions;

  friend bool operator==(const SymmetryGenerator&, const SymmetryGenerator&) = default;
};

class PredicateDecl {
 public:
  // Validates the generators and closes the group they generate.
  // Throws InvalidDeclaration.
  PredicateDecl(std::string name, std::vector<ObjectKind> arg_kinds,
                std::vector<SymmetryGenerator> generators = {});

  const std::string& name() const { return name_; }
  std::size_t arity() const { return arg_kinds_.size(); }
  const std::vector<ObjectKind>& arg_kinds() const { return arg_kinds_; }
  const std::vector<SymmetryGenerator>& generators() const { return generators_; }

  // Closed group, sorted, identity first.
  const std::vector<Permutation>& group() const { return group_; }

  // Structural equality: same name, kinds and generated group.
  friend bool operator==(const PredicateDecl& a, const PredicateDecl& b);

 private:
  std::string name_;
  std::vector<ObjectKind> arg_kinds_;
  std::vector<SymmetryGenerator> generators_;
  std::vector<Permutation> group_;
};

std::string render_atom(std::string_view predicate, std::span<const std::string> args);

// A canonical ground statement. Only constructible through canonicalize()
// (or rebuilt from an already canonical key by graph import).
class Fact {
 public:
  const std::string& predicate() const { return predicate_; }
  const std::vector<std::string>& args() const { return args_; }
  const std::string& key() const { return key_; }

  friend bool operator==(const Fact& a, const Fact& b) { return a.key_ == b.key_; }
  friend std::strong_ordering operator<=>(const Fact& a, const Fact& b) {
    return a.key_ <=> b.key_;
  }

  // Trusts that (predicate, args) is already the canonical representative.
  static Fact from_canonical(std::string predicate, std::vector<std::string> args);

 private:
  Fact(std::string predicate, std::vector<std::string> args);

  std::string predicate_;
  std::vector<std::string> args_;
  std::string key_;
};

// Returns the representative of args' orbit under the predicate's group with
// the byte-wise smallest rendering. Throws ArityMismatch / KindMismatch.
Fact canonicalize(const PredicateDecl& predicate, std::span<const Object> args);

// As above, without kind checks (arity still checked).
Fact canonicalize_names(const PredicateDecl& predicate, std::span<const std::string> args);

// Resolves names through the table first (UndeclaredObject).
Fact canonicalize(const PredicateDecl& predicate, std::span<const std::string> names,
                  const ObjectTable& objects);

inline bool facts_equal(const Fact& a, const Fact& b) { return a.key() == b.key(); }

// Every distinct image of args under the group, in group order.
std::vector<std::vector<std::string>> orbit(const PredicateDecl& predicate,
                                            std::span<const std::string> args);

struct FactHash {
  std::size_t operator()(const Fact& f) const { return std::hash<std::string>{}(f.key()); }
};

}  // namespace geoproof
