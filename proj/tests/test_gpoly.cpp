#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "dgsheaf/stalk.hpp"

using namespace dgsheaf;

namespace {

struct Fixture {
  SpacePtr X = FiniteSpace::make({"o", "c"}, {{"o", "c"}});
  VarPoolPtr pool = std::make_shared<VarPool>(X);
  Field f = Field::Q();
};

}  // namespace

TEST_CASE("graded slice and local index set") {
  Fixture fx;
  GeneratorSpec spec{{"a", fx.X->whole(), 0}, {"b", fx.X->minimal_open(0), -1}};
  CHECK(graded_slice(spec, -1) == std::vector<std::string>{"b"});
  CHECK(graded_slice(spec, 1).empty());
  CHECK(graded_slice(GeneratorSpec{}, 0).empty());

  auto at_o = local_index_set(spec, 0);
  REQUIRE(at_o.size() == 2);
  auto at_c = local_index_set(spec, 1);
  REQUIRE(at_c.size() == 1);
  CHECK(at_c[0].first == "a");

  CHECK(stalk_basis(spec, 1, -1).empty());          // b dies at the closed point
  CHECK(stalk_basis(spec, 0, -1) == std::vector<std::string>{"b"});
}

TEST_CASE("koszul signs") {
  Fixture fx;
  int u = fx.pool->add("u", 0, fx.X->whole());
  int v = fx.pool->add("v", -1, fx.X->whole());
  int w = fx.pool->add("w", -1, fx.X->whole());
  GPoly pu = GPoly::variable(fx.f, u, 0);
  GPoly pv = GPoly::variable(fx.f, v, -1);
  GPoly pw = GPoly::variable(fx.f, w, -1);

  CHECK((pv * pv).is_zero());                 // odd square
  CHECK(pv * pw == -(pw * pv));               // odd-odd anticommute
  CHECK(pu * pv == pv * pu);                  // even commutes
  CHECK((pv * pw) * pv == GPoly::zero(fx.f)); // v w v = 0
  int m2 = fx.pool->add("m2", -2, fx.X->whole());
  GPoly pm = GPoly::variable(fx.f, m2, -2);
  CHECK(pm * pv == pv * pm);                  // even(-2) commutes with odd
  CHECK(!(pm * pm).is_zero());                // even variables are polynomial
}

TEST_CASE("strict commutativity on random homogeneous pairs") {
  Fixture fx;
  std::vector<std::pair<int, int>> vars;  // (id, deg)
  for (int d : {0, -1, -2, -3}) {
    vars.emplace_back(fx.pool->add("g" + std::to_string(-d), d, fx.X->whole()), d);
  }
  std::mt19937_64 rng(17);
  auto rand_mono = [&]() {
    GPoly p = GPoly::constant(fx.f, Fq::one(fx.f));
    int len = 1 + static_cast<int>(rng() % 3);
    for (int i = 0; i < len; ++i) {
      auto [id, d] = vars[rng() % vars.size()];
      p = p * GPoly::variable(fx.f, id, d);
    }
    return p;
  };
  for (int i = 0; i < 200; ++i) {
    GPoly a = rand_mono(), b = rand_mono();
    int da = 0, db = 0;
    if (!a.is_homogeneous(&da) || !b.is_homogeneous(&db)) continue;
    if (a.is_zero() || b.is_zero()) continue;
    GPoly lhs = a * b;
    GPoly rhs = b * a;
    if ((da * db) % 2 != 0) rhs = -rhs;
    CHECK(lhs == rhs);
  }
}

TEST_CASE("derivation satisfies the graded Leibniz rule") {
  Fixture fx;
  int x = fx.pool->add("x", 0, fx.X->whole());
  int y = fx.pool->add("y", -1, fx.X->whole());
  int z = fx.pool->add("z", -2, fx.X->whole());
  GPoly px = GPoly::variable(fx.f, x, 0);
  GPoly py = GPoly::variable(fx.f, y, -1);
  GPoly pz = GPoly::variable(fx.f, z, -2);

  std::map<int, GPoly> d{{y, px}, {z, py * px}};

  // d(y * x^k) = x^(k+1)
  GPoly yx2 = py * px * px;
  CHECK(apply_derivation(yx2, d, fx.f) == px * px * px);

  std::mt19937_64 rng(23);
  std::vector<GPoly> gens{px, py, pz};
  auto rand_homog = [&]() {
    GPoly p = GPoly::constant(fx.f, Fq::of_int(fx.f, 1 + static_cast<long long>(rng() % 3)));
    int len = static_cast<int>(rng() % 3);
    for (int i = 0; i < len; ++i) p = p * gens[rng() % gens.size()];
    return p;
  };
  for (int i = 0; i < 300; ++i) {
    GPoly a = rand_homog(), b = rand_homog();
    int da = 0;
    if (a.is_zero() || b.is_zero()) continue;
    REQUIRE(a.is_homogeneous(&da));
    GPoly lhs = apply_derivation(a * b, d, fx.f);
    GPoly sign_adb = apply_derivation(b, d, fx.f);
    if (da % 2 != 0) sign_adb = -sign_adb;
    GPoly rhs = apply_derivation(a, d, fx.f) * b + a * sign_adb;
    CHECK(lhs == rhs);
  }
}

TEST_CASE("stalk bases match the Hilbert oracle") {
  // I_x = {u:0, v:-1}: degree -1 basis is v u^k; v^2 = 0
  Fixture fx;
  auto A = DgRing::constant_sheaf(fx.pool, fx.f);
  RingBuilder bld(A);
  bld.add_gen("u", 0, fx.X->whole());
  bld.add_gen("v", -1, fx.X->whole());
  auto R = bld.build();

  StalkCtx ctx(R, 0, -4);
  CHECK(ctx.rank(0) == 1);
  CHECK(ctx.rank(-1) == 1);  // v (times any power of u in P0)
  CHECK(ctx.rank(-2) == 0);  // v^2 = 0 and no other negative generators

  auto flat = flatness_check(R, -4, 6);
  CHECK(flat.ok);
  // weight-1 count at degree -1 is exactly the single v
  for (const auto& pr : flat.points) CHECK(pr.enumerated[1][3] == 1);

  // I_x = {w:-2}: degree -2k has basis w^k
  VarPoolPtr pool2 = std::make_shared<VarPool>(fx.X);
  RingBuilder bld2(pool2, fx.f);
  bld2.add_gen("w", -2, fx.X->whole());
  auto R2 = bld2.build();
  StalkCtx ctx2(R2, 0, -6);
  CHECK(ctx2.rank(0) == 1);
  CHECK(ctx2.rank(-1) == 0);
  CHECK(ctx2.rank(-2) == 1);
  CHECK(ctx2.rank(-4) == 1);
  CHECK(ctx2.rank(-3) == 0);
  CHECK(flatness_check(R2, -6, 6).ok);

  // empty spec: rank 1 in degree 0, rank 0 below
  VarPoolPtr pool3 = std::make_shared<VarPool>(fx.X);
  RingBuilder bld3(pool3, fx.f);
  auto R3 = bld3.build();
  StalkCtx ctx3(R3, 0, -4);
  CHECK(ctx3.rank(0) == 1);
  CHECK(ctx3.rank(-1) == 0);
  CHECK(flatness_check(R3, -4, 6).ok);
}

TEST_CASE("random generator specs: enumeration equals series") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    size_t nv = 1 + rng() % 5;
    std::vector<std::pair<int, bool>> vars;
    for (size_t i = 0; i < nv; ++i) {
      int d = -static_cast<int>(rng() % 4);
      vars.emplace_back(d, d % 2 != 0);
    }
    CHECK(enumerate_bigraded(vars, -4, 6) == hilbert_bigraded(vars, -4, 6));
  }
}

TEST_CASE("sections multiply over intersections") {
  Fixture fx;
  auto A = DgRing::constant_sheaf(fx.pool, fx.f);
  RingBuilder bld(A);
  int tU = bld.add_gen("tU", 0, fx.X->minimal_open(0));
  int tX = bld.add_gen("tX", 0, fx.X->whole());
  auto R = bld.build();

  Section sU{fx.X->minimal_open(0), GPoly::variable(fx.f, tU, 0)};
  Section sX{fx.X->whole(), GPoly::variable(fx.f, tX, 0)};
  Section prod = multiply(*R, sU, sX);
  CHECK(prod.open == fx.X->minimal_open(0));

  // sections may not use dead variables
  CHECK_THROWS(validate_section(*R, Section{fx.X->whole(), GPoly::variable(fx.f, tU, 0)}));
}

TEST_CASE("restriction to the whole space and to the empty set") {
  Fixture fx;
  auto A = DgRing::constant_sheaf(fx.pool, fx.f);
  RingBuilder bld(A);
  bld.add_gen("s", 0, fx.X->minimal_open(0));
  auto R = bld.build();

  auto whole = restrict_to_open(R, fx.X->whole().members);
  CHECK(whole.ring->flat_gens().size() == 1);
  CHECK(whole.subspace->npoints() == 2);

  auto nothing = restrict_to_open(R, 0);
  CHECK(nothing.subspace->npoints() == 0);
  CHECK(nothing.ring->flat_gens().size() == 1);  // generator survives with empty support
}

TEST_CASE("signed partials") {
  Fixture fx;
  int x = fx.pool->add("x", 0, fx.X->whole());
  int y1 = fx.pool->add("y1", -1, fx.X->whole());
  int y2 = fx.pool->add("y2", -1, fx.X->whole());
  GPoly px = GPoly::variable(fx.f, x, 0);
  GPoly py1 = GPoly::variable(fx.f, y1, -1);
  GPoly py2 = GPoly::variable(fx.f, y2, -1);

  // partial of x^3 in x is 3 x^2
  GMono x3 = (px * px * px).terms().begin()->first;
  CHECK(gmono_partial(x3, x, fx.f) == (px * px).scaled(Fq::of_int(fx.f, 3)));

  // partial of y1*y2 in y1 carries the sign of jumping over y2
  GMono m = (py1 * py2).terms().begin()->first;
  CHECK(gmono_partial(m, y1, fx.f) == -py2);
  CHECK(gmono_partial(m, y2, fx.f) == py1);
  CHECK(gmono_partial(m, x, fx.f).is_zero());
}
