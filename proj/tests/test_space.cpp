#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "dgsheaf/space.hpp"

using namespace dgsheaf;

namespace {
SpacePtr sierpinski() { return FiniteSpace::make({"o", "c"}, {{"o", "c"}}); }
}  // namespace

TEST_CASE("sierpinski minimal opens") {
  auto X = sierpinski();
  CHECK(open_to_string(X->minimal_open(0)) == "{o}");
  CHECK(open_to_string(X->minimal_open(1)) == "{o,c}");
}

TEST_CASE("discrete space minimal opens are singletons") {
  auto X = FiniteSpace::make({"a", "b", "c"}, {});
  for (size_t i = 0; i < 3; ++i) CHECK(X->minimal_open(i).members == (1ull << i));
}

TEST_CASE("intersection") {
  auto X = sierpinski();
  OpenSet o = X->minimal_open(0), w = X->whole(), e = X->empty_open();
  CHECK(intersect(o, o) == o);
  CHECK(intersect(o, e) == e);
  CHECK(intersect(o, w) == o);
  auto Y = sierpinski();
  OpenSet other = Y->minimal_open(0);
  CHECK_THROWS(intersect(o, other));
}

TEST_CASE("open sets are the down-closed subsets") {
  auto X = sierpinski();
  CHECK(X->is_down_closed(0b01));
  CHECK(!X->is_down_closed(0b10));  // {c} is not open
  CHECK_THROWS(X->open(0b10));
  CHECK(X->is_up_closed(0b10));
}

TEST_CASE("validate the relation as written") {
  CHECK(check_relation({"o", "c"}, {{"o", "o"}, {"c", "c"}, {"o", "c"}}).empty());

  auto diags = check_relation({"x", "y"}, {{"x", "x"}, {"y", "y"}, {"x", "y"}, {"y", "x"}});
  REQUIRE(!diags.empty());
  CHECK(diags[0].message == "antisymmetry violated at (x, y)");

  auto missing = check_relation({"p"}, {});
  REQUIRE(missing.size() == 1);
  CHECK(missing[0].message == "reflexivity missing at p");

  auto trans = check_relation({"a", "b", "c"},
                              {{"a", "a"}, {"b", "b"}, {"c", "c"}, {"a", "b"}, {"b", "c"}});
  REQUIRE(trans.size() == 1);
  CHECK(trans[0].message == "transitivity missing: a <= b <= c");
}

TEST_CASE("minimal open is contained in every open containing the point") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    size_t n = 2 + rng() % 7;  // up to 8 points
    std::vector<std::string> pts;
    for (size_t i = 0; i < n; ++i) pts.push_back("p" + std::to_string(i));
    std::vector<std::pair<std::string, std::string>> pairs;
    for (size_t i = 0; i < n; ++i)
      for (size_t j = i + 1; j < n; ++j)
        if (rng() % 3 == 0) pairs.emplace_back(pts[i], pts[j]);  // i <= j, acyclic by index
    auto X = FiniteSpace::make(pts, pairs);
    CHECK(X->validate().empty());
    // enumerate all down-closed subsets
    for (uint64_t mask = 0; mask < (1ull << n); ++mask) {
      if (!X->is_down_closed(mask)) continue;
      for (size_t x = 0; x < n; ++x)
        if ((mask >> x) & 1) CHECK(X->minimal_open(x).subset_of(OpenSet{X, mask}));
      // lattice: intersections and unions of opens stay open
      for (uint64_t mask2 = 0; mask2 < (1ull << n); ++mask2) {
        if (!X->is_down_closed(mask2)) continue;
        CHECK(X->is_down_closed(mask & mask2));
        CHECK(X->is_down_closed(mask | mask2));
      }
    }
  }
}

TEST_CASE("induced subspace keeps the order") {
  auto X = FiniteSpace::make({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}});
  std::vector<size_t> old_of_new;
  auto Y = induced_subspace(*X, 0b101, old_of_new);  // {a, c}
  REQUIRE(Y->npoints() == 2);
  CHECK(Y->leq(0, 1));  // a <= c survives via transitivity
  CHECK(!Y->leq(1, 0));
}
