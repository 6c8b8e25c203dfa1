// Acceptance suite: runs each criterion at its stated tolerance and prints
// one pass/fail line per criterion. All comparisons are exact.

#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "dgsheaf/derived.hpp"
#include "dgsheaf/problem.hpp"

using namespace dgsheaf;

namespace {

struct Harness {
  int failures = 0;
  void criterion(int number, const std::string& title, const std::function<bool()>& body) {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    std::string err;
    try {
      ok = body();
    } catch (const std::exception& e) {
      err = e.what();
    }
    auto t1 = std::chrono::steady_clock::now();
    double secs = std::chrono::duration<double>(t1 - t0).count();
    std::ostringstream line;
    line << (ok ? "[PASS]" : "[FAIL]") << " criterion " << number << ": " << title << " ("
         << secs << "s)";
    if (!ok && !err.empty()) line << " error: " << err;
    std::cout << line.str() << std::endl;
    if (!ok) ++failures;
  }
};

struct World {
  SpacePtr X;
  VarPoolPtr pool;
  Field f;
  DgRingPtr KX;
  World(SpacePtr space, Field field) : X(std::move(space)), f(field) {
    pool = std::make_shared<VarPool>(X);
    KX = DgRing::constant_sheaf(pool, f);
  }
};

World point_world(Field f = Field::Q()) { return World(FiniteSpace::make({"pt"}, {}), f); }
World sierpinski_world(Field f = Field::Q()) {
  return World(FiniteSpace::make({"o", "c"}, {{"o", "c"}}), f);
}
World chain3_world(Field f = Field::Q()) {
  return World(FiniteSpace::make({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}}), f);
}

GPoly gv(const World& w, int id) { return GPoly::variable(w.f, id, w.pool->degree(id)); }

// ---------------------------------------------------------------------------
// criterion 1: stalk ring monomial counts match the Hilbert-series oracle on
// random generator specifications over random posets
bool criterion1() {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 50; ++trial) {
    size_t n = 1 + rng() % 6;
    std::vector<std::string> pts;
    for (size_t i = 0; i < n; ++i) pts.push_back("p" + std::to_string(i));
    std::vector<std::pair<std::string, std::string>> pairs;
    for (size_t i = 0; i < n; ++i)
      for (size_t j = i + 1; j < n; ++j)
        if (rng() % 3 == 0) pairs.emplace_back(pts[i], pts[j]);
    World w(FiniteSpace::make(pts, pairs), Field::Q());
    RingBuilder bld(w.KX);
    size_t ngens = 1 + rng() % 5;
    for (size_t g = 0; g < ngens; ++g) {
      int degree = -static_cast<int>(rng() % 4);
      // random down-closed support
      uint64_t members = 0;
      for (size_t i = 0; i < n; ++i)
        if (rng() % 2) members |= 1ull << i;
      for (size_t y = 0; y < n; ++y)
        if ((members >> y) & 1)
          for (size_t x = 0; x < n; ++x)
            if (w.X->leq(x, y)) members |= 1ull << x;
      bld.add_gen("t" + std::to_string(g), degree, OpenSet{w.X, members});
    }
    auto R = bld.build();
    auto rep = flatness_check(R, -4, 6);
    if (!rep.ok) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// criterion 2: d^2 = 0 for random derivations with closed generator values,
// and the graded Leibniz rule on random homogeneous pairs
bool criterion2() {
  std::mt19937_64 rng(202);
  int leibniz_checked = 0;
  for (int trial = 0; trial < 50; ++trial) {
    World w = (trial % 3 == 0) ? sierpinski_world() : point_world();
    RingBuilder bld(w.KX);
    std::vector<int> closed;  // degree-0 and explicitly closed generators
    int x = bld.add_gen("x", 0, w.X->whole());
    closed.push_back(x);
    size_t nneg = 1 + rng() % 3;
    std::vector<int> first_batch;
    for (size_t i = 0; i < nneg; ++i) {
      int deg = -1 - static_cast<int>(rng() % 2);
      first_batch.push_back(bld.add_gen("a" + std::to_string(i), deg, w.X->whole()));
    }
    // second batch: d-values are polynomials in the closed first batch
    auto rand_value = [&](int degree) {
      GPoly val = GPoly::zero(w.f);
      for (int t = 0; t < 2; ++t) {
        GPoly term = GPoly::constant(w.f, Fq::of_int(w.f, 1 + static_cast<long long>(rng() % 3)));
        int acc = 0;
        // multiply closed generators until the degree matches
        for (int guard = 0; guard < 8 && acc != degree; ++guard) {
          std::vector<int> cands;
          for (int g : first_batch)
            if (w.pool->degree(g) >= degree - acc && w.pool->degree(g) < 0) cands.push_back(g);
          if (degree - acc == 0) break;
          if (cands.empty()) break;
          int pick = cands[rng() % cands.size()];
          GPoly next = term * gv(w, pick);
          if (next.is_zero()) break;  // odd square
          term = next;
          acc += w.pool->degree(pick);
        }
        if (acc == degree) {
          for (int e = rng() % 3; e > 0; --e) term = term * gv(w, x);
          val = val + term;
        }
      }
      return val;
    };
    size_t nsecond = 1 + rng() % 2;
    for (size_t i = 0; i < nsecond; ++i) {
      int deg = -1 - static_cast<int>(rng() % 3);
      int g = bld.add_gen("b" + std::to_string(i), deg, w.X->whole());
      GPoly val = rand_value(deg + 1);
      int vd = 0;
      if (!val.is_zero() && val.is_homogeneous(&vd) && vd == deg + 1) bld.set_d(g, val);
    }
    auto B = bld.build();
    if (check_d_squared(B, -5) != -1) return false;

    // Leibniz on random homogeneous pairs
    auto dmap = B->d_map();
    std::vector<int> gens = B->flat_gens();
    auto rand_mono = [&]() {
      GPoly p = GPoly::constant(w.f, Fq::of_int(w.f, 1 + static_cast<long long>(rng() % 3)));
      int len = 1 + static_cast<int>(rng() % 3);
      for (int i = 0; i < len; ++i) p = p * gv(w, gens[rng() % gens.size()]);
      return p;
    };
    int checked_here = 0;
    for (int guard = 0; guard < 50 && checked_here < 2; ++guard) {
      GPoly a = rand_mono(), b = rand_mono();
      int da = 0;
      if (a.is_zero() || b.is_zero()) continue;
      if (!a.is_homogeneous(&da)) continue;
      GPoly lhs = apply_derivation(a * b, dmap, w.f);
      GPoly db = apply_derivation(b, dmap, w.f);
      if (da % 2 != 0) db = -db;
      GPoly rhs = apply_derivation(a, dmap, w.f) * b + a * db;
      if (!(lhs == rhs)) return false;
      ++checked_here;
      ++leibniz_checked;
    }
    if (checked_here != 2) return false;
  }
  return leibniz_checked == 100;
}

// ---------------------------------------------------------------------------
// criterion 3: resolution certificates across ten targets, and mutants with
// one generator deleted always fail
struct Target {
  std::string name;
  DgRingPtr base;
  DgRingPtr ring;
  int q;
  std::string q0_victim;  // mirror name for the q = 0 mutant, empty otherwise
};

std::vector<Target> criterion3_targets(std::vector<std::shared_ptr<World>>& keep) {
  std::vector<Target> out;

  auto add_quotient = [&](World& w, const std::string& name, DgRingPtr base,
                          const std::vector<GPoly>& ideal, int q) {
    RingBuilder bld(base);
    for (const auto& g : ideal) bld.add_rel({w.X->whole(), g});
    out.push_back({name, base, bld.build(), q, ""});
  };

  {
    auto w = std::make_shared<World>(point_world());
    keep.push_back(w);
    RingBuilder ab(w->KX);
    int x = ab.add_gen("x", 0, w->X->whole());
    auto A = ab.build();
    add_quotient(*w, "K[x]/(x) q1", A, {gv(*w, x)}, 1);
    add_quotient(*w, "K[x]/(x^2) q1", A, {gv(*w, x) * gv(*w, x)}, 1);
  }
  {
    auto w = std::make_shared<World>(point_world());
    keep.push_back(w);
    RingBuilder ab(w->KX);
    int x = ab.add_gen("x", 0, w->X->whole());
    int y = ab.add_gen("y", 0, w->X->whole());
    auto A2 = ab.build();
    add_quotient(*w, "K[x,y]/(x,y) q2", A2, {gv(*w, x), gv(*w, y)}, 2);
    add_quotient(*w, "K[x,y]/(x^2,y) q2", A2, {gv(*w, x) * gv(*w, x), gv(*w, y)}, 2);
    add_quotient(*w, "K[x,y]/(xy) q3", A2, {gv(*w, x) * gv(*w, y)}, 3);
  }
  {
    auto w = std::make_shared<World>(point_world());
    keep.push_back(w);
    RingBuilder ab(w->KX);
    int x = ab.add_gen("u3", 0, w->X->whole());
    int y = ab.add_gen("v3", 0, w->X->whole());
    int z = ab.add_gen("w3", 0, w->X->whole());
    auto A3 = ab.build();
    add_quotient(*w, "K[u,v,w]/(u,v,w) q2", A3, {gv(*w, x), gv(*w, y), gv(*w, z)}, 2);
  }
  {
    auto w = std::make_shared<World>(sierpinski_world());
    keep.push_back(w);
    RingBuilder ab(w->KX);
    int x = ab.add_gen("x", 0, w->X->whole());
    auto A = ab.build();
    RingBuilder q1(A);
    q1.add_rel({w->X->minimal_open(0), gv(*w, x)});
    out.push_back({"sierpinski x|o q1", A, q1.build(), 1, ""});
    add_quotient(*w, "sierpinski x q2", A, {gv(*w, x)}, 2);
  }
  {
    auto w = std::make_shared<World>(chain3_world());
    keep.push_back(w);
    RingBuilder ab(w->KX);
    int x = ab.add_gen("x", 0, w->X->whole());
    auto A = ab.build();
    RingBuilder q1(A);
    q1.add_rel({w->X->minimal_open(1), gv(*w, x)});
    out.push_back({"chain3 x|Ub q1", A, q1.build(), 1, ""});
  }
  {
    // q = 0 entry: generators over the constant sheaf, mutant drops a mirror
    auto w = std::make_shared<World>(point_world());
    keep.push_back(w);
    RingBuilder rb(w->KX);
    int u = rb.add_gen("u0", 0, w->X->whole());
    int v = rb.add_gen("v0", 0, w->X->whole());
    RingBuilder qb(rb.build());
    qb.add_rel({w->X->whole(), gv(*w, u) - gv(*w, v) * gv(*w, v)});
    qb.add_rel({w->X->whole(), gv(*w, v) * gv(*w, v) * gv(*w, v)});
    out.push_back({"K[u,v]/(u-v^2,v^3) q0", w->KX, qb.build(), 0, "v0~"});
  }
  return out;
}

// rebuild the stage tower without one generator
ResolutionStage drop_generator(const ResolutionStage& st, int victim) {
  RingBuilder bld(st.base);
  const DgRing* cur = st.ring.get();
  std::vector<const DgRing*> chain;
  while (cur != st.base.get()) {
    chain.push_back(cur);
    cur = cur->base().get();
  }
  std::reverse(chain.begin(), chain.end());
  for (const DgRing* node : chain)
    for (int g : node->own_gens()) {
      if (g == victim) continue;
      bld.adopt_gen(g);
      GPoly dv = node->d_of(g);
      if (!dv.is_zero()) bld.set_d(g, dv);
    }
  ResolutionStage mut = st;
  mut.ring = bld.build();
  mut.phi.source = mut.ring;
  mut.phi.images.erase(victim);
  mut.certificate = {};
  return mut;
}

int pick_victim(const ResolutionStage& st, const std::string& q0_name) {
  const auto& pool = st.ring->pool();
  if (!q0_name.empty()) return pool->find(q0_name);
  // last-stage kill or hitter generators are never referenced by later data
  std::vector<int> gens = st.ring->flat_gens();
  for (auto it = gens.rbegin(); it != gens.rend(); ++it) {
    const std::string& nm = pool->name(*it);
    if (nm.empty() || (nm[0] != 'k' && nm[0] != 'h')) continue;
    bool referenced = false;
    for (int g : gens) {
      if (g == *it) continue;
      GPoly dv = st.ring->d_of(g);
      for (int v : dv.vars_used())
        if (v == *it) referenced = true;
    }
    if (!referenced) return *it;
  }
  return -1;
}

bool criterion3() {
  std::vector<std::shared_ptr<World>> keep;
  auto targets = criterion3_targets(keep);
  if (targets.size() != 10) return false;
  for (const auto& t : targets) {
    auto st = resolve(t.ring, t.base, t.q, 0);
    auto cert = certify(st);
    if (!cert.pass) return false;
    int victim = pick_victim(st, t.q0_victim);
    if (victim < 0) return false;
    auto mut = drop_generator(st, victim);
    auto mcert = certify(mut);
    if (mcert.pass) return false;  // mutants must fail
  }
  return true;
}

// ---------------------------------------------------------------------------
// fixtures shared by criteria 4, 5: closed subschemes of the affine plane
struct PlaneFixture {
  std::string name;
  std::vector<std::string> f, g;
  std::vector<long long> expected_kdim;  // degrees 0, -1, -2, -3
};

std::vector<PlaneFixture> plane_fixtures() {
  // expected field dimensions per degree; the line self-intersection is
  // infinite-dimensional over the field (Tor = K[y] in two degrees) and its
  // stated ranks 1,1 are generator counts over the stalk ring
  return {
      {"transverse lines", {"x"}, {"y"}, {1, 0, 0, 0}},
      {"origin self-intersection", {"x", "y"}, {"x", "y"}, {1, 2, 1, 0}},
      {"tangential parabola/line", {"y"}, {"y - x^2"}, {2, 0, 0, 0}},
      {"comaximal", {"x"}, {"x - 1"}, {0, 0, 0, 0}},
      {"line self-intersection", {"x"}, {"x"}, {-1, -1, 0, 0}},
  };
}

struct PlaneSetup {
  std::shared_ptr<World> w;
  DgRingPtr OX;
  RingedSpace X;
  ClosedSubspaceDatum Y1, Y2;
  PolyRingPtr oracle_ring;
  std::vector<Poly> of, og;
};

PlaneSetup make_plane(const PlaneFixture& fx) {
  PlaneSetup s;
  s.w = std::make_shared<World>(point_world());
  RingBuilder bld(s.w->KX);
  bld.add_gen("x", 0, s.w->X->whole());
  bld.add_gen("y", 0, s.w->X->whole());
  s.OX = bld.build();
  s.X = RingedSpace{s.w->X, s.OX};
  auto table = s.OX->name_table();
  uint64_t all = s.w->X->whole().members;
  for (const auto& e : fx.f)
    s.Y1.ideal_gens.push_back(Section{s.w->X->whole(), parse_gpoly(*s.w->pool, table, s.w->f, e)});
  for (const auto& e : fx.g)
    s.Y2.ideal_gens.push_back(Section{s.w->X->whole(), parse_gpoly(*s.w->pool, table, s.w->f, e)});
  s.Y1.support = all;
  s.Y2.support = all;

  s.oracle_ring = PolyRing::make(s.w->f, {"x", "y"});
  for (const auto& e : fx.f) s.of.push_back(parse_poly(s.oracle_ring, e));
  for (const auto& e : fx.g) s.og.push_back(parse_poly(s.oracle_ring, e));
  return s;
}

// criterion 4: engine derived intersections match the classical Tor oracle
// under module_iso_test at every point and degree of [-3, 0]
bool criterion4() {
  for (const auto& fx : plane_fixtures()) {
    PlaneSetup s = make_plane(fx);
    auto di = derived_intersection(s.X, s.Y1, s.Y2, 4, -3, 0, 0);
    auto oracle = koszul_tor_oracle(s.oracle_ring, s.of, s.og, 3);
    for (int p = 0; p <= 3; ++p) {
      if (di.engine->at(0, -p).kdim != fx.expected_kdim[static_cast<size_t>(p)]) return false;
      if (oracle.kdim[p] != fx.expected_kdim[static_cast<size_t>(p)]) return false;
      if (!pres_equivalent(di.engine->at(0, -p).pres, oracle.tor.at(p))) return false;
    }
    // the stated ranks 1,1 of the line self-intersection are generator counts
    if (fx.name == "line self-intersection") {
      if (di.engine->at(0, 0).pres.pruned().rank() != 1) return false;
      if (di.engine->at(0, -1).pres.pruned().rank() != 1) return false;
    }
    if (!di.vanishing_outside) return false;
  }
  return true;
}

// criterion 5: derived tensor reports are iso across seeds and across the
// one-sided/two-sided resolution modes
bool criterion5() {
  for (const auto& fx : plane_fixtures()) {
    PlaneSetup s = make_plane(fx);
    auto quotient_of = [&](const ClosedSubspaceDatum& Y) {
      RingBuilder bld(s.OX);
      for (const auto& sec : Y.ideal_gens) bld.add_rel(sec);
      return bld.build();
    };
    DgRingPtr O1 = quotient_of(s.Y1);
    DgRingPtr O2 = quotient_of(s.Y2);
    auto a = derived_tensor(O1, O2, s.OX, 4, -3, 0, 11);
    auto b = derived_tensor(O1, O2, s.OX, 4, -3, 0, 222);
    auto c = derived_tensor(O1, O2, s.OX, 4, -3, 0, 11, true);
    if (!reports_iso(*a.engine, *b.engine)) return false;
    if (!reports_iso(*a.engine, *c.engine)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// criterion 6: ore squares close exactly over ten pairs of distinct
// resolutions, with window quasi-isomorphisms
bool criterion6() {
  int pairs_checked = 0;
  auto check_square = [&](const SheafHom& p0, const SheafHom& p1, int q) {
    auto sq = ore_square(p0, p1, q, 5);
    ++pairs_checked;
    return sq.composites_equal && sq.qiso0.ok && sq.qiso1.ok && sq.certificate.pass;
  };

  // registered Koszul resolution of base/(gens)
  auto registered = [&](World& w, const DgRingPtr& A, const DgRingPtr& B,
                        const std::vector<GPoly>& gens, int depth) {
    RingBuilder kb(A);
    std::map<int, Section> images;
    for (size_t i = 0; i < gens.size(); ++i) {
      int y = kb.add_gen(w.pool->fresh_name("ry" + std::to_string(i)), -1, w.X->whole());
      kb.set_d(y, gens[i]);
      images[y] = Section{w.X->whole(), GPoly::zero(w.f)};
    }
    auto reg = kb.build();
    return extend_hom(reg, B, images, -depth - 2);
  };
  // a resolution padded with one contractible pair
  auto padded = [&](World& w, const ResolutionStage& st) {
    RingBuilder pb(st.ring);
    int z = pb.add_gen(w.pool->fresh_name("padz"), 0, w.X->whole());
    int wv = pb.add_gen(w.pool->fresh_name("padw"), -1, w.X->whole());
    pb.set_d(wv, GPoly::variable(w.f, z, 0));
    auto ring = pb.build();
    SheafHom phi = st.phi;
    phi.source = ring;
    phi.images[z] = Section{w.X->whole(), GPoly::zero(w.f)};
    phi.images[wv] = Section{w.X->whole(), GPoly::zero(w.f)};
    return phi;
  };

  {
    World w = point_world();
    RingBuilder ab(w.KX);
    int x = ab.add_gen("x", 0, w.X->whole());
    auto A = ab.build();
    RingBuilder qb(A);
    qb.add_rel({w.X->whole(), gv(w, x)});
    auto B = qb.build();
    auto s0 = resolve(B, A, 1, 0);
    auto s1 = resolve(B, A, 1, 31);
    if (!check_square(s0.phi, s1.phi, 1)) return false;
    if (!check_square(s0.phi, registered(w, A, B, {gv(w, x)}, 1), 1)) return false;
    if (!check_square(s0.phi, padded(w, s0), 1)) return false;

    RingBuilder q2(A);
    q2.add_rel({w.X->whole(), gv(w, x) * gv(w, x)});
    auto B2 = q2.build();
    auto t0 = resolve(B2, A, 1, 0);
    auto t1 = resolve(B2, A, 1, 7);
    if (!check_square(t0.phi, t1.phi, 1)) return false;
    if (!check_square(t0.phi, registered(w, A, B2, {gv(w, x) * gv(w, x)}, 1), 1)) return false;
    if (!check_square(t0.phi, padded(w, t0), 1)) return false;
  }
  {
    World w = point_world();
    RingBuilder ab(w.KX);
    int u = ab.add_gen("u", 0, w.X->whole());
    int v = ab.add_gen("v", 0, w.X->whole());
    auto A = ab.build();
    RingBuilder qb(A);
    qb.add_rel({w.X->whole(), gv(w, u)});
    qb.add_rel({w.X->whole(), gv(w, v)});
    auto B = qb.build();
    auto s0 = resolve(B, A, 1, 0);
    auto s1 = resolve(B, A, 1, 17);
    if (!check_square(s0.phi, s1.phi, 1)) return false;
    if (!check_square(s0.phi, registered(w, A, B, {gv(w, u), gv(w, v)}, 1), 1)) return false;

    RingBuilder pb(A);
    pb.add_rel({w.X->whole(), gv(w, v) - gv(w, u) * gv(w, u)});
    auto P = pb.build();
    auto p0 = resolve(P, A, 1, 0);
    if (!check_square(p0.phi, registered(w, A, P, {gv(w, v) - gv(w, u) * gv(w, u)}, 1), 1))
      return false;
  }
  {
    World w = sierpinski_world();
    RingBuilder ab(w.KX);
    int x = ab.add_gen("x", 0, w.X->whole());
    auto A = ab.build();
    RingBuilder qb(A);
    qb.add_rel({w.X->minimal_open(0), gv(w, x)});
    auto B = qb.build();
    auto s0 = resolve(B, A, 1, 0);
    auto s1 = resolve(B, A, 1, 13);
    if (!check_square(s0.phi, s1.phi, 1)) return false;
  }
  return pairs_checked == 10;
}

// ---------------------------------------------------------------------------
// criterion 7: factorization invariants, over Q and F5
bool criterion7() {
  auto run = [&](Field field) {
    World w(FiniteSpace::make({"pt"}, {}), field);
    RingBuilder ab(w.KX);
    int x = ab.add_gen("x", 0, w.X->whole());
    auto A = ab.build();
    RingBuilder kb(A);
    int y = kb.add_gen("y", -1, w.X->whole());
    kb.set_d(y, gv(w, x));
    auto K = kb.build();

    // K_X -> Koszul algebra: a non-surjective quasi-iso
    SheafHom incl{w.KX, K, {}};
    auto fac = factorize(incl, -2, 0);
    if (fac.trivial || !fac.checks.empty()) return false;

    // eps . eta = id exactly on every generator of the source
    SheafHom round = compose(fac.eps, fac.eta);
    for (int g : w.KX->flat_gens()) {
      GPoly img = round.apply(GPoly::variable(field, g, w.pool->degree(g)));
      if (!(img == GPoly::variable(field, g, w.pool->degree(g)))) return false;
    }
    // phi+ surjective in-window, eta a window quasi-iso
    if (!component_surjective(fac.phiplus, -2)) return false;
    if (!is_quasi_iso(fac.eta, -2, 0).ok) return false;
    // the contractible pair ring has H = K in degree 0
    HomologyEngine ce(fac.contractible, -2, 0);
    for (size_t pt = 0; pt < w.X->npoints(); ++pt) {
      if (ce.at(pt, 0).kdim != 1) return false;
      if (ce.at(pt, -1).kdim != 0) return false;
      if (ce.at(pt, -2).kdim != 0) return false;
    }

    // a surjective resolution factors trivially
    RingBuilder qb(A);
    qb.add_rel({w.X->whole(), gv(w, x)});
    auto B = qb.build();
    auto st = resolve(B, A, 1, 0);
    auto triv = factorize(st.phi, -1, 0);
    if (!triv.trivial) return false;
    return true;
  };
  if (!run(Field::Q())) return false;
  if (!run(Field::Fp(5))) return false;

  // sheaf case over the sierpinski space
  World w = sierpinski_world();
  RingBuilder ab(w.KX);
  int x = ab.add_gen("x", 0, w.X->whole());
  auto A = ab.build();
  RingBuilder kb(A);
  int y = kb.add_gen("y", -1, w.X->whole());
  kb.set_d(y, gv(w, x));
  auto K = kb.build();
  SheafHom incl{w.KX, K, {}};
  auto fac = factorize(incl, -2, 0);
  if (fac.trivial || !fac.checks.empty()) return false;
  HomologyEngine ce(fac.contractible, -2, 0);
  for (size_t pt = 0; pt < 2; ++pt)
    if (ce.at(pt, 0).kdim != 1 || ce.at(pt, -1).kdim != 0) return false;
  return true;
}

// ---------------------------------------------------------------------------
// criterion 8: stalkwise freeness of pseudo-free rings, and tensoring with a
// pseudo-semi-free ring preserves window-acyclicity of contractible sheaves
bool criterion8() {
  // freeness reports for pseudo-free fixtures, including resolution outputs
  {
    World w = sierpinski_world();
    RingBuilder bld(w.KX);
    bld.add_gen("t0", 0, w.X->whole());
    bld.add_gen("t1", -1, w.X->minimal_open(0));
    bld.add_gen("t2", -2, w.X->whole());
    if (!flatness_check(bld.build(), -4, 6).ok) return false;
  }
  {
    World w = point_world();
    RingBuilder ab(w.KX);
    int x = ab.add_gen("x", 0, w.X->whole());
    auto A = ab.build();
    RingBuilder qb(A);
    qb.add_rel({w.X->whole(), gv(w, x) * gv(w, x)});
    auto st = resolve(qb.build(), A, 2, 0);
    if (!flatness_check(st.ring, -4, 6).ok) return false;
  }

  // K-flatness, weak form: H(B (x) C) has the same dimensions as H(B) for a
  // split contractible C on degree (-1, -2) pair generators
  auto contractible_over = [&](World& w, const OpenSet& supp) {
    RingBuilder cb(w.KX);
    int z = cb.add_gen(w.pool->fresh_name("cz"), -1, supp);
    int cw = cb.add_gen(w.pool->fresh_name("cw"), -2, supp);
    cb.set_d(cw, gv(w, z));
    return cb.build();
  };

  int fixtures = 0;
  auto check_pair = [&](World& w, const DgRingPtr& B, const DgRingPtr& C) {
    auto t = tensor_over_A(B, C, w.KX);
    HomologyEngine hb(B, -2, 0), ht(t.ring, -2, 0);
    for (size_t x = 0; x < w.X->npoints(); ++x)
      for (int n = -2; n <= 0; ++n) {
        const HEntry& eb = hb.at(x, n);
        const HEntry& et = ht.at(x, n);
        if (eb.kdim != et.kdim) return false;
        if (eb.kdim >= 0 && !module_iso_test(eb.pres, et.pres)) return false;
      }
    ++fixtures;
    return true;
  };

  {
    World w = point_world();
    RingBuilder ab(w.KX);
    int x = ab.add_gen("x", 0, w.X->whole());
    auto A = ab.build();
    RingBuilder kb(A);
    int y = kb.add_gen("y", -1, w.X->whole());
    kb.set_d(y, gv(w, x));
    auto K = kb.build();
    auto C = contractible_over(w, w.X->whole());
    if (!check_pair(w, K, C)) return false;          // Koszul algebra
    if (!check_pair(w, A, C)) return false;          // polynomial ring, infinite H^0
    RingBuilder qb(A);
    qb.add_rel({w.X->whole(), gv(w, x) * gv(w, x)});
    auto st = resolve(qb.build(), A, 2, 0);
    if (!check_pair(w, st.ring, C)) return false;    // resolution tower
  }
  {
    World w = sierpinski_world();
    RingBuilder ab(w.KX);
    int x = ab.add_gen("x", 0, w.X->whole());
    auto A = ab.build();
    RingBuilder kb(A);
    int y = kb.add_gen("y", -1, w.X->minimal_open(0));
    kb.set_d(y, gv(w, x));
    auto K = kb.build();
    auto C = contractible_over(w, w.X->whole());
    if (!check_pair(w, K, C)) return false;          // sheaf Koszul, mixed supports
    auto Cpart = contractible_over(w, w.X->minimal_open(0));
    if (!check_pair(w, K, Cpart)) return false;      // contractible with small support
  }
  return fixtures == 5;
}

// ---------------------------------------------------------------------------
// criterion 9: experimental cotangent complex of K[x]/(x^2) against the
// registered two-term hypersurface oracle
bool criterion9() {
  World w = point_world();
  RingBuilder bld(w.KX);
  int x = bld.add_gen("x", 0, w.X->whole());
  RingBuilder qb(bld.build());
  qb.add_rel({w.X->whole(), gv(w, x) * gv(w, x)});
  auto R = qb.build();
  RingedSpace X{w.X, R};
  auto ct = cotangent_complex(X, 2, -1, 0, 0);
  if (!ct.experimental) return false;

  // registered oracle: R -(2x)-> R over R = K[x]/(x^2)
  auto R1 = PolyRing::make(w.f, {"x"});
  Poly ox = Poly::variable(R1, 0);
  Poly fprime = ox.scaled(Fq::of_int(w.f, 2));
  ModPres h0_oracle(R1, 1, {ModVec{fprime}, ModVec{ox * ox}});
  std::vector<ModVec> ker = kernel_of_cols(R1, {ModVec{fprime}},
                                           {ModVec{ox * ox}}, 1);
  ModPres hm1_oracle(R1, ker.size(), kernel_of_cols(R1, ker, {ModVec{ox * ox}}, 1));

  const auto& h0 = ct.presentations.at({0, 0});
  const auto& hm1 = ct.presentations.at({0, -1});
  if (h0.kdim() != 1 || hm1.kdim() != 1) return false;
  if (!module_iso_test(h0, h0_oracle)) return false;
  if (!module_iso_test(hm1, hm1_oracle)) return false;
  return true;
}

}  // namespace

int main() {
  Harness h;
  h.criterion(1, "stalk ring monomial counts match the Hilbert-series oracle", criterion1);
  h.criterion(2, "d^2 = 0 and the graded Leibniz rule on random derivations", criterion2);
  h.criterion(3, "resolution certificates pass; one-generator mutants fail", criterion3);
  h.criterion(4, "derived intersections match the classical Koszul Tor oracle", criterion4);
  h.criterion(5, "derived tensor is resolution-independent (seeds, one-sided)", criterion5);
  h.criterion(6, "ore squares close exactly with window quasi-isomorphisms", criterion6);
  h.criterion(7, "factorization: split, surjective leg, contractible H = K", criterion7);
  h.criterion(8, "flatness of pseudo-free components; K-flat tensor preservation", criterion8);
  h.criterion(9, "experimental cotangent matches the hypersurface oracle", criterion9);
  if (h.failures == 0) {
    std::cout << "all acceptance criteria passed" << std::endl;
  } else {
    std::cout << h.failures << " criterion(s) failed" << std::endl;
  }
  return h.failures;
}
