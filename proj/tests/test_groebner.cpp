#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "dgsheaf/groebner.hpp"

using namespace dgsheaf;

namespace {

PolyRingPtr ring2(OrderKind k = OrderKind::grevlex) {
  MonoOrder ord;
  ord.kind = k;
  return PolyRing::make(Field::Q(), {"x", "y"}, ord);
}

// Independent reduction oracle: repeatedly rewrite any term divisible by a
// generator's lead. No tail reduction tricks, no sharing with the engine.
Poly brute_reduce(Poly f, const std::vector<Poly>& gens) {
  bool changed = true;
  while (changed && !f.is_zero()) {
    changed = false;
    for (const auto& g : gens) {
      if (g.is_zero()) continue;
      for (const auto& t : f.terms()) {
        if (mono_divides(g.lead().mono, t.mono)) {
          Mono q = mono_div(t.mono, g.lead().mono);
          f = f - g.mul_term(q, t.coeff / g.lead().coeff);
          changed = true;
          break;
        }
      }
      if (changed) break;
    }
  }
  return f;
}

// Exhaustive low-degree membership by linear algebra: is f in the span of
// { m * g_i : total degree <= bound }?
bool member_at_bound(const Poly& f, const std::vector<Poly>& gens, uint32_t bound) {
  auto R = f.ring();
  size_t nv = R->nvars();
  std::vector<Mono> monos;
  Mono cur(nv, 0);
  // enumerate all monomials with total degree <= bound
  while (true) {
    if (mono_total_degree(cur) <= bound) monos.push_back(cur);
    size_t i = 0;
    while (i < nv) {
      if (cur[i] < bound) {
        ++cur[i];
        break;
      }
      cur[i] = 0;
      ++i;
    }
    if (i == nv) break;
  }
  std::map<Mono, size_t> index;
  std::vector<Mono> cols;
  auto col_of = [&](const Mono& m) {
    auto it = index.find(m);
    if (it != index.end()) return it->second;
    index[m] = cols.size();
    cols.push_back(m);
    return cols.size() - 1;
  };
  std::vector<std::vector<Fq>> rows;
  auto add_row = [&](const Poly& p) {
    std::vector<Fq> row;
    for (const auto& t : p.terms()) {
      size_t c = col_of(t.mono);
      if (row.size() <= c) row.resize(c + 1, Fq::zero(R->field()));
      row[c] = t.coeff;
    }
    rows.push_back(std::move(row));
  };
  for (const auto& g : gens)
    for (const auto& m : monos)
      if (g.total_degree() + static_cast<int>(mono_total_degree(m)) <= static_cast<int>(bound))
        add_row(g.mul_term(m, Fq::one(R->field())));
  size_t width = 0;
  add_row(f);
  for (auto& r : rows) width = std::max(width, r.size());
  for (auto& r : rows) r.resize(width, Fq::zero(R->field()));
  auto without = rows;
  without.pop_back();
  return fq_matrix_rank(without, R->field()) == fq_matrix_rank(rows, R->field());
}

}  // namespace

TEST_CASE("normal form basics") {
  auto R = ring2();
  Poly x = Poly::variable(R, 0), y = Poly::variable(R, 1);
  auto G = buchberger(R, {x});
  CHECK(normal_form(Poly(R), G).is_zero());
  CHECK(normal_form(x * y, G).is_zero());
}

TEST_CASE("hand division confirmed by brute-force oracle") {
  auto R = ring2(OrderKind::lex);
  Poly f = parse_poly(R, "x^2 + y");
  std::vector<Poly> gens{parse_poly(R, "x^2 - y")};
  Poly expected = parse_poly(R, "2*y");
  CHECK(brute_reduce(f, gens) == expected);
  auto G = buchberger(R, gens);
  CHECK(normal_form(f, G) == expected);
}

TEST_CASE("single monomial is its own basis") {
  auto R = ring2();
  auto G = buchberger(R, {parse_poly(R, "x")});
  REQUIRE(G.gens.size() == 1);
  CHECK(G.gens[0] == parse_poly(R, "x"));
}

TEST_CASE("linear chain, mutual containment") {
  MonoOrder lex;
  lex.kind = OrderKind::lex;
  auto R = PolyRing::make(Field::Q(), {"x", "y", "z"}, lex);
  auto G = buchberger(R, {parse_poly(R, "x - y"), parse_poly(R, "y - z")});
  REQUIRE(G.gens.size() == 2);
  CHECK(G.contains(parse_poly(R, "x - z")));
  CHECK(G.contains(parse_poly(R, "y - z")));
  auto G2 = buchberger(R, {parse_poly(R, "x - z"), parse_poly(R, "y - z")});
  CHECK(G2.contains(parse_poly(R, "x - y")));
  CHECK(ideal_equal(G, G2));
}

TEST_CASE("univariate ideals reduce to the gcd") {
  auto R = PolyRing::make(Field::Q(), {"x"});
  // gcd oracle by Euclid on univariate polynomials
  auto uni_divmod = [&](Poly a, const Poly& b) {
    Poly q(R);
    while (!a.is_zero() && a.total_degree() >= b.total_degree()) {
      Mono m = mono_div(a.lead().mono, b.lead().mono);
      Fq c = a.lead().coeff / b.lead().coeff;
      q = q + Poly::from_terms(R, {{m, c}});
      a = a - b.mul_term(m, c);
    }
    return a;  // remainder
  };
  auto uni_gcd = [&](Poly a, Poly b) {
    while (!b.is_zero()) {
      Poly r = uni_divmod(a, b);
      a = b;
      b = r;
    }
    return a.monic();
  };
  Poly f = parse_poly(R, "x^2 - 1"), g = parse_poly(R, "x^3 - 1");
  CHECK(uni_gcd(f, g) == parse_poly(R, "x - 1"));
  auto G = buchberger(R, {f, g});
  REQUIRE(G.gens.size() == 1);
  CHECK(G.gens[0] == parse_poly(R, "x - 1"));
}

TEST_CASE("normal form is additive and decides membership") {
  auto R = ring2();
  std::vector<Poly> gens{parse_poly(R, "x^2 - y"), parse_poly(R, "x*y - 1")};
  auto G = buchberger(R, gens);
  std::mt19937_64 rng(3);
  auto rand_poly = [&]() {
    std::vector<Term> ts;
    for (int i = 0; i < 3; ++i)
      ts.push_back({Mono{static_cast<uint32_t>(rng() % 3), static_cast<uint32_t>(rng() % 3)},
                    Fq::of_int(R->field(), static_cast<long long>(rng() % 5) - 2)});
    return Poly::from_terms(R, ts);
  };
  for (int i = 0; i < 100; ++i) {
    Poly a = rand_poly(), b = rand_poly();
    CHECK(normal_form(a + b, G) == normal_form(a, G) + normal_form(b, G));
  }
  // membership agrees with exhaustive low-degree linear algebra
  for (const Poly& f : {parse_poly(R, "x^3 - x*y"), parse_poly(R, "x^3*y - x^2"),
                        parse_poly(R, "x^2 - y + 1"), parse_poly(R, "y^2*x - 1")}) {
    bool gb_says = G.contains(f);
    bool la_says = member_at_bound(f, gens, 8);
    CHECK(gb_says == la_says);
  }
}

TEST_CASE("basis independent of generator order") {
  auto R = ring2();
  std::vector<Poly> gens{parse_poly(R, "x^2 + y^2 - 1"), parse_poly(R, "x*y - 1"),
                         parse_poly(R, "x^3 - y")};
  std::mt19937_64 rng(11);
  auto G0 = buchberger(R, gens);
  for (int i = 0; i < 6; ++i) {
    auto shuffled = gens;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    CHECK(ideal_equal(G0, buchberger(R, shuffled)));
  }
}

TEST_CASE("syzygy kernels") {
  auto R = ring2();
  Poly x = Poly::variable(R, 0), y = Poly::variable(R, 1);
  auto trivial = GroebnerBasis::trivial(R);

  SUBCASE("identity has zero kernel") {
    std::vector<ModVec> id_cols;
    id_cols.push_back(ModVec{Poly::constant(R, Fq::one(R->field())), Poly(R)});
    id_cols.push_back(ModVec{Poly(R), Poly::constant(R, Fq::one(R->field()))});
    auto ker = syzygy_kernel(R, id_cols, 2, trivial);
    CHECK(ker.empty());
  }

  SUBCASE("Koszul syzygy of the row [x, y]") {
    std::vector<ModVec> cols{ModVec{x}, ModVec{y}};
    auto ker = syzygy_kernel(R, cols, 1, trivial);
    REQUIRE(ker.size() == 1);
    // the kernel generator annihilates the row (substitution check)
    Poly s = ker[0][0] * x + ker[0][1] * y;
    CHECK(s.is_zero());
    // and is (y, -x) up to scalar
    CHECK((ker[0][0] * x).is_zero() == false);
    CHECK(ker[0][0] * (-x) == ker[0][1] * y);
  }

  SUBCASE("row [x] over K[x]/(x^2)") {
    auto Rx = PolyRing::make(Field::Q(), {"x"});
    Poly xv = Poly::variable(Rx, 0);
    auto G = buchberger(Rx, {parse_poly(Rx, "x^2")});
    auto ker = syzygy_kernel(Rx, {ModVec{xv}}, 1, G);
    REQUIRE(ker.size() == 1);
    CHECK(ker[0][0] == xv);
    CHECK(G.contains(ker[0][0] * xv));
  }

  SUBCASE("kernel vectors annihilate the matrix on randoms") {
    std::vector<ModVec> cols{ModVec{x * x, y}, ModVec{x * y, -x}, ModVec{y * y, x + y}};
    auto ker = syzygy_kernel(R, cols, 2, trivial);
    for (const auto& k : ker) {
      for (size_t p = 0; p < 2; ++p) {
        Poly acc(R);
        for (size_t j = 0; j < cols.size(); ++j) acc = acc + k[j] * cols[j][p];
        CHECK(acc.is_zero());
      }
    }
  }
}

TEST_CASE("elimination kernel of a ring map") {
  // kernel of K[t] -> K[x], t |-> x^2, is trivial; kernel of K[t,u] -> K[x],
  // t |-> x^2, u |-> x^3 contains t^3 - u^2
  MonoOrder ord;
  ord.kind = OrderKind::grevlex;
  ord.elim_mask = {1, 0, 0};  // eliminate x
  auto R = PolyRing::make(Field::Q(), {"x", "t", "u"}, ord);
  std::vector<ModVec> quotient{ModVec{parse_poly(R, "t - x^2")}, ModVec{parse_poly(R, "u - x^3")}};
  auto ker = kernel_of_cols(R, {ModVec{Poly::constant(R, Fq::one(R->field()))}}, quotient, 1,
                            {1, 0, 0});
  bool found = false;
  for (const auto& k : ker)
    if (k[0] == parse_poly(R, "t^3 - u^2") || k[0] == parse_poly(R, "u^2 - t^3")) found = true;
  CHECK(found);
}
