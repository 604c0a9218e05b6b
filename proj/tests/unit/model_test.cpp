#include <numeric>
#include <random>
#include <set>

#include "doctest.h"
#include "geoproof/errors.hpp"
#include "geoproof/model.hpp"
#include "support/oracles.hpp"

using namespace geoproof;

namespace {

using G = SymmetryGenerator;
using oracle::Perm;

PredicateDecl dihedral4(const std::string& name) {
  return PredicateDecl(name, std::vector<ObjectKind>(4, ObjectKind::Point),
                       {{G::Kind::Cycle, {1, 2, 3, 4}}, {G::Kind::Swap, {2, 4}}});
}

std::vector<Object> points(std::initializer_list<const char*> names) {
  std::vector<Object> out;
  for (auto n : names) out.push_back({n, ObjectKind::Point});
  return out;
}

Perm apply(const Permutation& a, const Permutation& b) {  // a after b
  Perm r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = b[a[i]];
  return r;
}

}  // namespace

TEST_CASE("object table rejects duplicates and unknown names") {
  ObjectTable t;
  t.add({"A", ObjectKind::Point});
  t.add({"lAB", ObjectKind::Line});
  CHECK(t.size() == 2);
  CHECK(t.at("lAB").kind == ObjectKind::Line);
  CHECK(t.find("Z") == nullptr);
  CHECK_THROWS_AS(t.add({"A", ObjectKind::Line}), InvalidProblem);
  CHECK_THROWS_AS(t.add({"9x", ObjectKind::Point}), InvalidProblem);
  CHECK_THROWS_AS(t.at("Z"), UndeclaredObject);
}

TEST_CASE("object kinds round-trip through text") {
  for (auto k : {ObjectKind::Point, ObjectKind::Line, ObjectKind::Segment, ObjectKind::Angle,
                 ObjectKind::Circle, ObjectKind::Polygon, ObjectKind::Scalar}) {
    CHECK(parse_object_kind(to_string(k)) == k);
  }
  CHECK_FALSE(parse_object_kind("blob").has_value());
}

TEST_CASE("symmetry groups match the oracle closure") {
  SUBCASE("dihedral group of a quadrilateral has 8 elements") {
    const auto d = dihedral4("rectangle");
    CHECK(d.group().size() == 8);
    const auto expected = oracle::group_of(d);
    CHECK(std::set<Perm>(d.group().begin(), d.group().end()) == expected);
  }
  SUBCASE("no generator gives the trivial group") {
    PredicateDecl d("onLine", {ObjectKind::Point, ObjectKind::Line});
    REQUIRE(d.group().size() == 1);
    CHECK(d.group()[0] == Permutation{0, 1});
  }
  SUBCASE("full symmetry on three arguments") {
    PredicateDecl d("collinear", std::vector<ObjectKind>(3, ObjectKind::Point), {{G::Kind::Full, {}}});
    CHECK(d.group().size() == 6);
  }
}

TEST_CASE("invalid symmetry declarations are rejected") {
  using K = ObjectKind;
  CHECK_THROWS_AS(PredicateDecl("p", {K::Point, K::Point}, {{G::Kind::Swap, {1, 3}}}), InvalidDeclaration);
  CHECK_THROWS_AS(PredicateDecl("p", {K::Point, K::Point}, {{G::Kind::Swap, {1, 1}}}), InvalidDeclaration);
  CHECK_THROWS_AS(PredicateDecl("p", {K::Line, K::Point}, {{G::Kind::Swap, {1, 2}}}), InvalidDeclaration);
  CHECK_THROWS_AS(PredicateDecl("p", {K::Line, K::Point}, {{G::Kind::Full, {}}}), InvalidDeclaration);
  CHECK_THROWS_AS(PredicateDecl("p", {K::Point, K::Point, K::Point}, {{G::Kind::Cycle, {1, 2, 2}}}),
                  InvalidDeclaration);
  CHECK_THROWS_AS(PredicateDecl("1p", {K::Point}), InvalidDeclaration);
}

TEST_CASE("canonicalization picks the smallest rendering in the orbit") {
  PredicateDecl perp("perp", {ObjectKind::Line, ObjectKind::Line}, {{G::Kind::Swap, {1, 2}}});
  const std::vector<std::string> swapped{"lBC", "lAB"};
  CHECK(canonicalize_names(perp, swapped).key() == "perp(lAB,lBC)");

  const auto rect = dihedral4("rectangle");
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"A", "B", "C", "D"}, {"C", "D", "A", "B"}, {"D", "C", "B", "A"}, {"B", "A", "D", "C"}}) {
    CHECK(canonicalize_names(rect, args).key() == "rectangle(A,B,C,D)");
  }
  // Not in the orbit: a different quadrilateral.
  const std::vector<std::string> crossed{"A", "C", "B", "D"};
  CHECK(canonicalize_names(rect, crossed).key() == "rectangle(A,C,B,D)");
}

TEST_CASE("canonicalization checks arity and kinds") {
  PredicateDecl on("onLine", {ObjectKind::Point, ObjectKind::Line});
  const auto objs = std::vector<Object>{{"A", ObjectKind::Point}, {"l", ObjectKind::Line}};
  CHECK(canonicalize(on, objs).key() == "onLine(A,l)");
  const auto wrong = std::vector<Object>{{"l", ObjectKind::Line}, {"A", ObjectKind::Point}};
  CHECK_THROWS_AS(canonicalize(on, wrong), KindMismatch);
  CHECK_THROWS_AS(canonicalize(on, points({"A"})), ArityMismatch);

  ObjectTable table(objs);
  const std::vector<std::string> unknown{"A", "m"};
  CHECK_THROWS_AS(canonicalize(on, unknown, table), UndeclaredObject);
}

TEST_CASE("canonicalization group laws on random declarations") {
  std::mt19937 rng(7);
  const char* names[] = {"a", "b", "c", "d"};
  for (int trial = 0; trial < 200; ++trial) {
    const int arity = std::uniform_int_distribution<int>(1, 4)(rng);
    std::vector<G> gens;
    const int n_gens = std::uniform_int_distribution<int>(0, 2)(rng);
    for (int g = 0; g < n_gens && arity >= 2; ++g) {
      const int kind = std::uniform_int_distribution<int>(0, 2)(rng);
      if (kind == 2) {
        gens.push_back({G::Kind::Full, {}});
        continue;
      }
      std::vector<int> pos(arity);
      std::iota(pos.begin(), pos.end(), 1);
      std::shuffle(pos.begin(), pos.end(), rng);
      const int len = kind == 0 ? 2 : std::uniform_int_distribution<int>(2, arity)(rng);
      pos.resize(len);
      gens.push_back({kind == 0 ? G::Kind::Swap : G::Kind::Cycle, pos});
    }
    PredicateDecl d("q", std::vector<ObjectKind>(arity, ObjectKind::Point), gens);
    const auto& group = d.group();
    const std::set<Perm> members(group.begin(), group.end());
    CAPTURE(trial);

    // Identity first, closed under composition, inverses present.
    Perm id(arity);
    std::iota(id.begin(), id.end(), 0);
    REQUIRE(group.front() == id);
    for (const auto& a : group) {
      bool has_inverse = false;
      for (const auto& b : group) {
        CHECK(members.count(apply(a, b)) == 1);
        if (apply(a, b) == id) has_inverse = true;
      }
      CHECK(has_inverse);
    }
    CHECK(members == oracle::group_of(d));

    std::vector<std::string> args;
    for (int i = 0; i < arity; ++i) args.push_back(names[std::uniform_int_distribution<int>(0, 3)(rng)]);
    const Fact canon = canonicalize_names(d, args);
    CHECK(canon.key() == oracle::canonical_key(d, args));
    // Every orbit member has the same representative, which is idempotent.
    const auto orb = orbit(d, args);
    for (const auto& img : orb) CHECK(canonicalize_names(d, img) == canon);
    CHECK(canonicalize_names(d, canon.args()) == canon);
    // Orbit-stabilizer: the orbit size divides the group order.
    CHECK(group.size() % orb.size() == 0);
  }
}
