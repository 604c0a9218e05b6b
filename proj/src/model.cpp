#include "geoproof/model.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <set>

#include "geoproof/errors.hpp"

namespace geoproof {

namespace {

constexpr std::array<std::pair<ObjectKind, std::string_view>, 7> kKindNames{{
    {ObjectKind::Point, "point"},
    {ObjectKind::Line, "line"},
    {ObjectKind::Segment, "segment"},
    {ObjectKind::Angle, "angle"},
    {ObjectKind::Circle, "circle"},
    {ObjectKind::Polygon, "polygon"},
    {ObjectKind::Scalar, "scalar"},
}};

Permutation identity(std::size_t n) {
  Permutation p(n);
  std::iota(p.begin(), p.end(), 0);
  return p;
}

// (a * b)[i] = a[b[i]]: applying b's image after a's.
Permutation compose(const Permutation& a, const Permutation& b) {
  Permutation out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[b[i]];
  return out;
}

std::vector<Permutation> expand_generator(const std::string& pred, std::size_t arity,
                                          const SymmetryGenerator& gen) {
  auto check_pos = [&](int pos) {
    if (pos < 1 || static_cast<std::size_t>(pos) > arity) {
      throw InvalidDeclaration("predicate " + pred + ": symmetry position " +
                               std::to_string(pos) + " outside 1.." + std::to_string(arity));
    }
  };
  switch (gen.kind) {
    case SymmetryGenerator::Kind::Full: {
      if (!gen.positions.empty()) {
        throw InvalidDeclaration("predicate " + pred + ": 'full' takes no positions");
      }
      // Transposition (1 2) and the long cycle generate the symmetric group.
      std::vector<Permutation> out;
      if (arity >= 2) {
        Permutation swap = identity(arity);
        std::swap(swap[0], swap[1]);
        Permutation cycle(arity);
        for (std::size_t i = 0; i < arity; ++i) cycle[i] = static_cast<int>((i + 1) % arity);
        out.push_back(std::move(swap));
        out.push_back(std::move(cycle));
      }
      return out;
    }
    case SymmetryGenerator::Kind::Swap: {
      if (gen.positions.size() != 2) {
        throw InvalidDeclaration("predicate " + pred + ": 'swap' takes exactly two positions");
      }
      check_pos(gen.positions[0]);
      check_pos(gen.positions[1]);
      if (gen.positions[0] == gen.positions[1]) {
        throw InvalidDeclaration("predicate " + pred + ": 'swap' positions must differ");
      }
      Permutation p = identity(arity);
      std::swap(p[gen.positions[0] - 1], p[gen.positions[1] - 1]);
      return {p};
    }
    case SymmetryGenerator::Kind::Cycle: {
      if (gen.positions.size() < 2) {
        throw InvalidDeclaration("predicate " + pred + ": 'cycle' needs at least two positions");
      }
      std::set<int> seen;
      for (int pos : gen.positions) {
        check_pos(pos);
        if (!seen.insert(pos).second) {
          throw InvalidDeclaration("predicate " + pred + ": 'cycle' repeats position " +
                                   std::to_string(pos));
        }
      }
      // cycle a b c moves the argument at a to b, b to c, c to a.
      Permutation p = identity(arity);
      const auto& c = gen.positions;
      for (std::size_t i = 0; i < c.size(); ++i) {
        p[c[(i + 1) % c.size()] - 1] = c[i] - 1;
      }
      return {p};
    }
  }
  return {};
}

}  // namespace

std::string_view to_string(ObjectKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "?";
}

std::optional<ObjectKind> parse_object_kind(std::string_view text) {
  for (const auto& [k, name] : kKindNames) {
    if (name == text) return k;
  }
  return std::nullopt;
}

bool is_identifier(std::string_view text) {
  if (text.empty()) return false;
  auto alpha = [](char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z'); };
  auto digit = [](char c) { return c >= '0' && c <= '9'; };
  if (!alpha(text.front())) return false;
  return std::all_of(text.begin() + 1, text.end(),
                     [&](char c) { return alpha(c) || digit(c) || c == '_'; });
}

ObjectTable::ObjectTable(std::span<const Object> objects) {
  for (const auto& o : objects) add(o);
}

void ObjectTable::add(Object object) {
  if (!is_identifier(object.name)) {
    throw InvalidProblem("invalid object name '" + object.name + "'");
  }
  if (by_name_.count(object.name) != 0) {
    throw InvalidProblem("object '" + object.name + "' declared twice");
  }
  by_name_.emplace(object.name, objects_.size());
  objects_.push_back(std::move(object));
}

const Object* ObjectTable::find(std::string_view name) const {
  auto it = by_name_.find(name);
  return it == by_name_.end() ? nullptr : &objects_[it->second];
}

const Object& ObjectTable::at(std::string_view name) const {
  const Object* o = find(name);
  if (o == nullptr) throw UndeclaredObject("undeclared object '" + std::string(name) + "'");
  return *o;
}

PredicateDecl::PredicateDecl(std::string name, std::vector<ObjectKind> arg_kinds,
                             std::vector<SymmetryGenerator> generators)
    : name_(std::move(name)), arg_kinds_(std::move(arg_kinds)), generators_(std::move(generators)) {
  if (!is_identifier(name_)) throw InvalidDeclaration("invalid predicate name '" + name_ + "'");
  if (arg_kinds_.empty()) throw InvalidDeclaration("predicate " + name_ + ": arity must be positive");

  const std::size_t n = arity();
  std::vector<Permutation> gens;
  for (const auto& g : generators_) {
    for (auto& p : expand_generator(name_, n, g)) gens.push_back(std::move(p));
  }
  for (const auto& g : gens) {
    for (std::size_t i = 0; i < n; ++i) {
      if (arg_kinds_[g[i]] != arg_kinds_[i]) {
        throw InvalidDeclaration("predicate " + name_ + ": symmetry permutes arguments of different kinds");
      }
    }
  }

  // Closure by breadth-first multiplication with the generators.
  std::set<Permutation> closed{identity(n)};
  std::vector<Permutation> frontier{identity(n)};
  while (!frontier.empty()) {
    std::vector<Permutation> next;
    for (const auto& p : frontier) {
      for (const auto& g : gens) {
        Permutation q = compose(p, g);
        if (closed.insert(q).second) next.push_back(std::move(q));
      }
    }
    frontier = std::move(next);
  }
  group_.assign(closed.begin(), closed.end());  // identity is the smallest
}

bool operator==(const PredicateDecl& a, const PredicateDecl& b) {
  return a.name_ == b.name_ && a.arg_kinds_ == b.arg_kinds_ && a.group_ == b.group_;
}

std::string render_atom(std::string_view predicate, std::span<const std::string> args) {
  std::string out(predicate);
  out += '(';
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i != 0) out += ',';
    out += args[i];
  }
  out += ')';
  return out;
}

Fact::Fact(std::string predicate, std::vector<std::string> args)
    : predicate_(std::move(predicate)), args_(std::move(args)), key_(render_atom(predicate_, args_)) {}

Fact Fact::from_canonical(std::string predicate, std::vector<std::string> args) {
  return Fact(std::move(predicate), std::move(args));
}

std::vector<std::vector<std::string>> orbit(const PredicateDecl& predicate,
                                            std::span<const std::string> args) {
  std::vector<std::vector<std::string>> out;
  std::set<std::vector<std::string>> seen;
  for (const auto& perm : predicate.group()) {
    std::vector<std::string> image(args.size());
    for (std::size_t i = 0; i < args.size(); ++i) image[i] = args[perm[i]];
    if (seen.insert(image).second) out.push_back(std::move(image));
  }
  return out;
}

Fact canonicalize_names(const PredicateDecl& predicate, std::span<const std::string> args) {
  if (args.size() != predicate.arity()) {
    throw ArityMismatch(predicate.name() + " expects " + std::to_string(predicate.arity()) +
                        " arguments, got " + std::to_string(args.size()));
  }
  std::vector<std::string> best;
  std::string best_key;
  std::vector<std::string> image(args.size());
  for (const auto& perm : predicate.group()) {
    for (std::size_t i = 0; i < args.size(); ++i) image[i] = args[perm[i]];
    std::string key = render_atom(predicate.name(), image);
    if (best.empty() || key < best_key) {
      best = image;
      best_key = std::move(key);
    }
  }
  return Fact::from_canonical(predicate.name(), std::move(best));
}

Fact canonicalize(const PredicateDecl& predicate, std::span<const Object> args) {
  if (args.size() != predicate.arity()) {
    throw ArityMismatch(predicate.name() + " expects " + std::to_string(predicate.arity()) +
                        " arguments, got " + std::to_string(args.size()));
  }
  std::vector<std::string> names;
  names.reserve(args.size());
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i].kind != predicate.arg_kinds()[i]) {
      throw KindMismatch(predicate.name() + " argument " + std::to_string(i + 1) + " ('" +
                         args[i].name + "') must be a " +
                         std::string(to_string(predicate.arg_kinds()[i])) + ", not a " +
                         std::string(to_string(args[i].kind)));
    }
    names.push_back(args[i].name);
  }
  return canonicalize_names(predicate, names);
}

Fact canonicalize(const PredicateDecl& predicate, std::span<const std::string> names,
                  const ObjectTable& objects) {
  std::vector<Object> resolved;
  resolved.reserve(names.size());
  for (const auto& n : names) resolved.push_back(objects.at(n));
  return canonicalize(predicate, resolved);
}

}  // namespace geoproof
