#include "dgsheaf/resolution.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace dgsheaf {

namespace {

// deterministic shuffle; seed 0 keeps the canonical order
template <typename T>
void seeded_shuffle(std::vector<T>& v, uint64_t& state) {
  if (state == 0) return;
  for (size_t i = v.size(); i > 1; --i) {
    state = state * 6364136223846793005ull + 1442695040888963407ull;
    size_t j = (state >> 33) % i;
    std::swap(v[i - 1], v[j]);
  }
}

std::string canon_mono_name(const VarPool& pool, const GMono& m) {
  std::string s;
  for (const auto& f : m.factors) {
    if (!s.empty()) s += ".";
    s += pool.name(f.var);
    if (f.exp > 1) s += "^" + std::to_string(f.exp);
  }
  return s.empty() ? "1" : s;
}

struct OwnMono {
  GMono mono;
  uint64_t support;
};

// monomials of the given degree in the ring's negative generators above the
// ancestor (whole tower when above is null), with their natural supports
std::vector<OwnMono> own_neg_monomials(const DgRingPtr& ring, const DgRingPtr& above, int degree) {
  const auto& pool = ring->pool();
  std::vector<int> gens;
  for (const auto& e : above ? ring->spec_above(above) : ring->spec()) {
    if (e.degree < 0) gens.push_back(pool->find(e.id));
  }
  std::sort(gens.begin(), gens.end());
  std::vector<OwnMono> out;
  std::vector<GFactor> cur;
  uint64_t whole = ring->space()->whole().members;
  std::function<void(size_t, int, uint64_t)> rec = [&](size_t idx, int remaining, uint64_t supp) {
    if (remaining == 0) {
      if (!cur.empty() && supp != 0) out.push_back({GMono{cur}, supp});
      return;
    }
    if (idx >= gens.size()) return;
    rec(idx + 1, remaining, supp);
    int v = gens[idx];
    int d = pool->degree(v);
    int max_exp = (d % 2 != 0) ? 1 : remaining / d;
    for (int e = 1; e <= max_exp; ++e) {
      if (remaining - e * d > 0) break;
      cur.push_back({v, e, d});
      rec(idx + 1, remaining - e * d, supp & pool->support(v).members);
      cur.pop_back();
      if (d % 2 != 0) break;
    }
  };
  rec(0, degree, whole);
  std::sort(out.begin(), out.end(),
            [](const OwnMono& a, const OwnMono& b) { return a.mono < b.mono; });
  return out;
}

GPoly gpoly_of(const Field& f, const GMono& m) {
  GPoly p(f);
  p.add_term(m, Fq::one(f));
  return p;
}

GPoly assemble(const StalkCtx& c, const std::vector<Poly>& coeffs, int degree) {
  ModVec v(coeffs.begin(), coeffs.end());
  return c.from_coords(v, degree);
}

// columns of the component map phi_n in the target coordinates
std::vector<ModVec> image_cols(const StalkCtx& cs, const StalkCtx& ct, const SheafHom& phi,
                               int n) {
  std::vector<ModVec> cols;
  for (const auto& mu : cs.basis(n))
    cols.push_back(ct.to_coords(phi.apply(gpoly_of(ct.ring()->field(), mu)), n));
  return cols;
}

// componentwise surjectivity of phi at one point and degree (module span on
// top of the caller-established degree-0 ring surjectivity)
bool comp_surj_at(const StalkCtx& cs, const StalkCtx& ct, const SheafHom& phi, int n) {
  SpanSolver span(ct.P0(), image_cols(cs, ct, phi, n), ct.rel_gens(n), ct.rank(n));
  for (size_t i = 0; i < ct.rank(n); ++i) {
    if (!span.contains(modvec_unit(ct.P0(), ct.rank(n), i))) return false;
  }
  return true;
}

bool ring_deg0_surjective(const StalkCtx& cs, const StalkCtx& ct, const SheafHom& phi) {
  std::vector<Poly> mod0;
  for (const auto& r : ct.rel_gens(0)) mod0.push_back(r[0]);
  for (size_t i = 0; i < ct.deg0_vars().size(); ++i)
    if (!express_in_deg0_image(cs, ct, phi, Poly::variable(ct.P0(), i), mod0)) return false;
  return true;
}

// columns spanning the image of source coboundaries at degree n
std::vector<ModVec> coboundary_cols(const StalkCtx& cs, const StalkCtx& ct, const SheafHom& phi,
                                    int n) {
  std::vector<ModVec> cols;
  for (const auto& mu : cs.basis(n - 1)) {
    GPoly dmu = cs.ring()->apply_d(gpoly_of(ct.ring()->field(), mu));
    cols.push_back(ct.to_coords(phi.apply(dmu), n));
  }
  return cols;
}

// B(phi)-surjectivity at degree n: every target coboundary is hit by the
// image of a source coboundary
bool bsurj_at(const StalkCtx& cs, const StalkCtx& ct, const SheafHom& phi, int n) {
  SpanSolver span(ct.P0(), coboundary_cols(cs, ct, phi, n), ct.rel_gens(n), ct.rank(n));
  for (const auto& col : ct.d_columns(n - 1)) {
    ModVec y = ct.nf(col, n);
    if (modvec_is_zero(y)) continue;
    if (!span.contains(y)) return false;
  }
  return true;
}

DgRingPtr common_ancestor(const DgRingPtr& a, const DgRingPtr& b) {
  DgRingPtr node = b;
  while (node) {
    if (a->descends_from(node)) return node;
    node = node->base();
  }
  throw std::invalid_argument("common_ancestor: towers share no node");
}

}  // namespace

bool component_surjective(const SheafHom& phi, int wmin, std::string* where) {
  StalkFamily sf(phi.source, wmin - 1), tf(phi.target, wmin - 1);
  const auto& space = phi.target->space();
  for (size_t x = 0; x < space->npoints(); ++x) {
    StalkCtx& cs = sf.at(x);
    StalkCtx& ct = tf.at(x);
    if (!ring_deg0_surjective(cs, ct, phi)) {
      if (where) *where = "(" + space->points()[x] + ", 0) ring image";
      return false;
    }
    for (int n = wmin; n <= 0; ++n) {
      if (!comp_surj_at(cs, ct, phi, n)) {
        if (where) *where = "(" + space->points()[x] + ", " + std::to_string(n) + ")";
        return false;
      }
    }
  }
  return true;
}

ResolutionStage resolve(const DgRingPtr& target, const DgRingPtr& base, int q_max,
                        uint64_t seed) {
  if (!target->descends_from(base))
    throw std::invalid_argument("resolve: target is not a ring over the base");
  if (q_max < 0) throw std::invalid_argument("resolve: q_max must be >= 0");

  const auto& pool = target->pool();
  const auto& space = target->space();
  const Field& f = target->field();
  int floor = -(q_max + 2);
  uint64_t rng = seed;

  std::map<int, Section> images;

  // greedy pair adjunction: a monomial gets a generator only when its value
  // (or its coboundary) is not already covered by the image of the partial
  // tower prev, using per-point span solvers
  auto adjoin_pairs = [&](RingBuilder& bld, int n, const DgRingPtr& prev) {
    auto monos = own_neg_monomials(target, base, n);
    seeded_shuffle(monos, rng);
    if (monos.empty()) return;
    StalkFamily pf(prev, floor - 1), tf(target, floor - 1);
    SheafHom partial{prev, target, images};
    std::map<size_t, std::shared_ptr<SpanSolver>> val_span, cob_span;
    auto val_solver = [&](size_t x) {
      auto it = val_span.find(x);
      if (it != val_span.end()) return it->second;
      auto s = std::make_shared<SpanSolver>(tf.at(x).P0(),
                                            image_cols(pf.at(x), tf.at(x), partial, n),
                                            tf.at(x).rel_gens(n), tf.at(x).rank(n));
      val_span[x] = s;
      return s;
    };
    auto cob_solver = [&](size_t x) {
      auto it = cob_span.find(x);
      if (it != cob_span.end()) return it->second;
      auto s = std::make_shared<SpanSolver>(tf.at(x).P0(),
                                            coboundary_cols(pf.at(x), tf.at(x), partial, n + 1),
                                            tf.at(x).rel_gens(n + 1), tf.at(x).rank(n + 1));
      cob_span[x] = s;
      return s;
    };
    for (const auto& om : monos) {
      OpenSet O{space, om.support};
      GPoly mug = gpoly_of(f, om.mono);
      GPoly dmu = target->apply_d(mug);
      bool val_needed = false, cob_needed = false;
      for (size_t x = 0; x < space->npoints(); ++x) {
        if (!O.contains(x)) continue;
        if (!val_needed && !val_solver(x)->contains(tf.at(x).to_coords(mug, n)))
          val_needed = true;
        if (!dmu.is_zero() && !cob_needed &&
            !cob_solver(x)->contains(tf.at(x).nf(tf.at(x).to_coords(dmu, n + 1), n + 1)))
          cob_needed = true;
      }
      if (!val_needed && !cob_needed) continue;
      std::string mn = canon_mono_name(*pool, om.mono);
      int wv = bld.add_gen(pool->fresh_name("w." + mn), n, O);
      images[wv] = {O, mug};
      if (dmu.is_zero()) continue;  // a closed hitter; no coboundary partner needed
      int zv = bld.add_gen(pool->fresh_name("z." + mn), n + 1, O);
      bld.set_d(wv, GPoly::variable(f, zv, n + 1));
      images[zv] = {O, dmu};
    }
  };

  // stage 0: mirrors for the target's own degree-0 generators, pairs for its
  // degree -1 module generators
  RingBuilder b0(base);
  for (const auto& e : target->spec_above(base)) {
    if (e.degree != 0) continue;
    int g = pool->find(e.id);
    int m = b0.add_gen(pool->fresh_name(e.id + "~"), 0, e.support);
    images[m] = {e.support, GPoly::variable(f, g, 0)};
  }
  DgRingPtr F = b0.build();
  RingBuilder b0b(F);
  adjoin_pairs(b0b, -1, F);
  F = b0b.build();
  SheafHom phi = extend_hom(F, target, images, floor);

  for (int q = 1; q <= q_max; ++q) {
    RingBuilder bq(F);
    HomologyEngine se(F, -q - 1, 0), te(target, -q - 1, 0);

    // (1) kill the kernel of H^{-q+1}(phi)
    struct Candidate {
      GPoly value;
      size_t point;
    };
    std::vector<Candidate> kills;
    for (size_t x = 0; x < space->npoints(); ++x)
      for (auto& z : h_kernel_classes(se, te, phi, x, -q + 1)) kills.push_back({z, x});
    seeded_shuffle(kills, rng);
    std::vector<std::pair<std::string, uint64_t>> seen;
    int ki = 0;
    for (const auto& k : kills) {
      OpenSet U = space->minimal_open(k.point);
      std::string key = k.value.to_string(*pool);
      bool dup = false;
      for (const auto& [s, m] : seen)
        if (s == key && (U.members & ~m) == 0) dup = true;
      if (dup) continue;
      StalkCtx& tc = te.ctx(k.point);
      ModVec y = tc.to_coords(phi.apply(k.value), -q + 1);
      auto sol = solve_in_span(tc.P0(), y, tc.d_columns(-q), tc.rel_gens(-q + 1));
      if (!sol)
        throw std::logic_error("resolve: kernel class has no coboundary witness (engine bug)");
      GPoly c = assemble(tc, *sol, -q);
      int t = bq.add_gen(pool->fresh_name("k" + std::to_string(q) + "." + std::to_string(ki++)),
                         -q, U);
      bq.set_d(t, k.value);
      images[t] = {U, c};
      seen.emplace_back(key, U.members);
    }

    // (1.5) closed generators hitting the target's degree -q cocycle classes
    // not already reached by the partial tower
    std::vector<Candidate> hits;
    for (size_t x = 0; x < space->npoints(); ++x) {
      StalkCtx& tc = te.ctx(x);
      auto zg = kernel_of_cols(tc.P0(), tc.d_columns(-q), tc.rel_gens(-q + 1), tc.rank(-q + 1));
      if (zg.empty()) continue;
      const HEntry& esrc = se.at(x, -q);
      StalkCtx& sc = se.ctx(x);
      std::vector<ModVec> cols;
      for (const auto& z : esrc.zgens)
        cols.push_back(tc.to_coords(phi.apply(sc.from_coords(z, -q)), -q));
      SpanSolver reach(tc.P0(), cols, te.at(x, -q).bgens, tc.rank(-q));
      for (auto& zv : zg) {
        if (reach.contains(zv)) continue;
        hits.push_back({tc.from_coords(zv, -q), x});
      }
    }
    seeded_shuffle(hits, rng);
    seen.clear();
    int hi = 0;
    for (const auto& h : hits) {
      OpenSet U = space->minimal_open(h.point);
      std::string key = h.value.to_string(*pool);
      bool dup = false;
      for (const auto& [s, m] : seen)
        if (s == key && (U.members & ~m) == 0) dup = true;
      if (dup) continue;
      int t = bq.add_gen(pool->fresh_name("h" + std::to_string(q) + "." + std::to_string(hi++)),
                         -q, U);
      images[t] = {U, h.value};
      seen.emplace_back(key, U.members);
    }

    // (2) surjectivity pairs one degree further down
    adjoin_pairs(bq, -q - 1, F);

    F = bq.build();
    phi = extend_hom(F, target, images, floor);
  }

  ResolutionStage stage;
  stage.base = base;
  stage.target = target;
  stage.ring = F;
  stage.phi = phi;
  stage.q = q_max;
  stage.seed = seed;
  stage.certificate = certify(stage);
  if (!stage.certificate.pass) {
    auto fail = stage.certificate.first_failure();
    throw std::logic_error("resolve: certificate failed at (" + fail->point + ", " +
                           std::to_string(fail->degree) + ", " + fail->condition +
                           ") - engine bug");
  }
  return stage;
}

Certificate certify(const ResolutionStage& stage) {
  int q = stage.q;
  Certificate cert;
  HomologyEngine se(stage.ring, -q - 1, 0), te(stage.target, -q - 1, 0);
  const auto& space = stage.target->space();

  auto add = [&](size_t x, int n, const std::string& cond, bool pass) {
    cert.items.push_back({space->points()[x], n, cond, pass});
    cert.pass = cert.pass && pass;
  };

  for (size_t x = 0; x < space->npoints(); ++x) {
    StalkCtx& cs = se.ctx(x);
    StalkCtx& ct = te.ctx(x);
    bool ring_surj = ring_deg0_surjective(cs, ct, stage.phi);
    for (int n = -q; n <= 0; ++n) {
      bool psurj = comp_surj_at(cs, ct, stage.phi, n);
      if (n == 0) psurj = psurj && ring_surj;
      add(x, n, "phi-surjective", psurj);
      add(x, n, "B(phi)-surjective", bsurj_at(cs, ct, stage.phi, n));
      add(x, n, "H-surjective", h_surjective_at(se, te, stage.phi, x, n));
    }
    for (int n = -q + 1; n <= 0; ++n) {
      bool surj = h_surjective_at(se, te, stage.phi, x, n);
      bool inj = h_kernel_classes(se, te, stage.phi, x, n).empty();
      add(x, n, "H-bijective", surj && inj);
    }
  }
  return cert;
}

Factorization factorize(const SheafHom& phi, int wmin, uint64_t seed) {
  auto q = is_quasi_iso(phi, wmin, 0);
  if (!q.ok)
    throw std::invalid_argument("factorize: input is not a window quasi-isomorphism (" +
                                (q.diagnostics.empty() ? std::string("?") : q.diagnostics[0]) +
                                ")");
  Factorization out;
  if (component_surjective(phi, wmin)) {
    out.aplus = phi.source;
    out.eta = SheafHom::identity(phi.source);
    out.eps = SheafHom::identity(phi.source);
    out.phiplus = phi;
    out.contractible = DgRing::constant_sheaf(phi.source->pool(), phi.source->field());
    out.trivial = true;
    return out;
  }

  const DgRingPtr& A = phi.source;
  const DgRingPtr& B = phi.target;
  const auto& pool = A->pool();
  const auto& space = A->space();
  const Field& f = A->field();
  uint64_t rng = seed;

  RingBuilder bld(A);
  std::map<int, Section> images;  // for phi+
  StalkFamily sf(A, wmin - 1), tf(B, wmin - 1);

  // degree 0: coboundary-corrected hitters for unreachable ring generators
  struct Deg0Item {
    int var;
    size_t point;
  };
  std::vector<Deg0Item> d0;
  for (int b : B->flat_gens()) {
    if (pool->degree(b) != 0) continue;
    for (size_t x = 0; x < space->npoints(); ++x)
      if (pool->support(b).contains(x)) d0.push_back({b, x});
  }
  seeded_shuffle(d0, rng);
  std::vector<std::pair<std::string, uint64_t>> seen;
  for (const auto& it : d0) {
    StalkCtx& cs = sf.at(it.point);
    StalkCtx& ct = tf.at(it.point);
    std::vector<Poly> mod0;
    for (const auto& r : ct.rel_gens(0)) mod0.push_back(r[0]);
    int bidx = -1;
    for (size_t i = 0; i < ct.deg0_vars().size(); ++i)
      if (ct.deg0_vars()[i] == it.var) bidx = static_cast<int>(i);
    if (bidx < 0) continue;
    Poly bpoly = Poly::variable(ct.P0(), static_cast<size_t>(bidx));
    if (express_in_deg0_image(cs, ct, phi, bpoly, mod0)) continue;  // already reachable

    // b = phi(a) + d(c): find a modulo boundaries, then solve for c
    std::vector<Poly> mod_with_bd = mod0;
    for (const auto& col : ct.d_columns(-1)) {
      Poly p = ct.nf(col, 0)[0];
      if (!p.is_zero()) mod_with_bd.push_back(p);
    }
    auto a = express_in_deg0_image(cs, ct, phi, bpoly, mod_with_bd);
    if (!a)
      throw std::logic_error("factorize: H^0-surjectivity witness missing (engine bug)");
    GPoly a_img = phi.apply(cs.from_p0(*a));
    GPoly target_val = GPoly::variable(f, it.var, 0) - a_img;
    ModVec y = ct.to_coords(target_val, 0);
    auto csol = solve_in_span(ct.P0(), y, ct.d_columns(-1), ct.rel_gens(0));
    if (!csol) throw std::logic_error("factorize: coboundary witness missing (engine bug)");
    GPoly c = assemble(ct, *csol, -1);

    OpenSet U = space->minimal_open(it.point);
    std::string key = pool->name(it.var) + "|" + c.to_string(*pool);
    bool dup = false;
    for (const auto& [s, m] : seen)
      if (s == key && (U.members & ~m) == 0) dup = true;
    if (dup) continue;
    seen.emplace_back(key, U.members);

    int zv = bld.add_gen(pool->fresh_name("fz." + pool->name(it.var)), 0, U);
    int wv = bld.add_gen(pool->fresh_name("fw." + pool->name(it.var)), -1, U);
    bld.set_d(wv, GPoly::variable(f, zv, 0));
    images[zv] = {U, target_val};
    images[wv] = {U, c};
  }

  // negative degrees: pairs hitting every module generator not already in
  // the image span
  for (int n = -1; n >= wmin; --n) {
    auto monos = own_neg_monomials(B, nullptr, n);  // whole tower
    seeded_shuffle(monos, rng);
    std::map<size_t, std::shared_ptr<SpanSolver>> solvers;
    for (const auto& om : monos) {
      OpenSet O{space, om.support};
      GPoly mug = gpoly_of(f, om.mono);
      bool needed = false;
      for (size_t x = 0; x < space->npoints(); ++x) {
        if (!O.contains(x)) continue;
        StalkCtx& cs = sf.at(x);
        StalkCtx& ct = tf.at(x);
        auto sit = solvers.find(x);
        if (sit == solvers.end()) {
          std::vector<ModVec> cols;
          for (const auto& mu : cs.basis(n))
            cols.push_back(ct.to_coords(phi.apply(gpoly_of(f, mu)), n));
          sit = solvers
                    .emplace(x, std::make_shared<SpanSolver>(ct.P0(), cols, ct.rel_gens(n),
                                                             ct.rank(n)))
                    .first;
        }
        if (!sit->second->contains(ct.to_coords(mug, n))) needed = true;
      }
      if (!needed) continue;
      std::string mn = canon_mono_name(*pool, om.mono);
      int zv = bld.add_gen(pool->fresh_name("fz." + mn), n + 1, O);
      int wv = bld.add_gen(pool->fresh_name("fw." + mn), n, O);
      bld.set_d(wv, GPoly::variable(f, zv, n + 1));
      images[wv] = {O, mug};
      images[zv] = {O, B->apply_d(mug)};
    }
  }

  out.aplus = bld.build();
  out.cspec = out.aplus->spec_above(A);
  out.eta = SheafHom{A, out.aplus, {}};
  SheafHom eps{out.aplus, A, {}};
  for (const auto& e : out.cspec) {
    int v = pool->find(e.id);
    eps.images[v] = Section{e.support, GPoly::zero(f)};
  }
  out.eps = eps;
  out.phiplus = extend_hom(out.aplus, B, images, wmin);

  // standalone copy of the contractible pair ring over the constant sheaf
  {
    RingBuilder cb(DgRing::constant_sheaf(pool, f));
    std::map<int, int> cm;
    for (const auto& e : out.cspec) {
      int v = pool->find(e.id);
      cm[v] = cb.add_gen(pool->fresh_name("C." + e.id), e.degree, e.support);
    }
    for (const auto& e : out.cspec) {
      int v = pool->find(e.id);
      GPoly dv = out.aplus->d_of(v);
      if (dv.is_zero()) continue;
      std::map<int, GPoly> tr;
      for (const auto& [from, to] : cm) tr[from] = GPoly::variable(f, to, pool->degree(to));
      cb.set_d(cm[v], substitute(dv, tr, f));
    }
    out.contractible = cb.build();
  }

  // verifications
  auto eq = is_quasi_iso(out.eta, wmin, 0);
  if (!eq.ok) out.checks.push_back("eta is not a window quasi-isomorphism");
  std::string where;
  if (!component_surjective(out.phiplus, wmin, &where))
    out.checks.push_back("phi+ not surjective at " + where);
  auto pq = is_quasi_iso(out.phiplus, wmin, 0);
  if (!pq.ok) out.checks.push_back("phi+ is not a window quasi-isomorphism");
  return out;
}

FiberProduct fiber_product(const SheafHom& phi0, const SheafHom& phi1, int wmin) {
  if (phi0.target.get() != phi1.target.get())
    throw std::invalid_argument("fiber_product: target mismatch");
  std::string where;
  if (!component_surjective(phi0, wmin, &where) || !component_surjective(phi1, wmin, &where))
    throw std::invalid_argument("fiber_product: maps must be surjective in the window (" +
                                where + ")");

  const DgRingPtr& B0 = phi0.source;
  const DgRingPtr& B1 = phi1.source;
  const DgRingPtr& B = phi0.target;
  DgRingPtr A = common_ancestor(B0, B1);
  const auto& pool = B->pool();
  const auto& space = B->space();
  const Field& f = B->field();

  StalkFamily f0(B0, wmin - 1), f1(B1, wmin - 1), fb(B, wmin - 1);

  RingBuilder bld(A);
  std::map<int, Section> img0, img1;

  auto dedup_key = [&](const std::string& a, const std::string& b) { return a + "|" + b; };
  std::vector<std::pair<std::string, uint64_t>> seen;
  auto is_dup = [&](const std::string& key, uint64_t members) {
    for (const auto& [s, m] : seen)
      if (s == key && (members & ~m) == 0) return true;
    seen.emplace_back(key, members);
    return false;
  };

  // re-express a target degree-0 coefficient inside the image of one factor
  auto pull_coeff = [&](StalkFamily& sfam, const SheafHom& ph, size_t x, const Poly& c) {
    StalkCtx& cs = sfam.at(x);
    StalkCtx& ct = fb.at(x);
    std::vector<Poly> mod0;
    for (const auto& r : ct.rel_gens(0)) mod0.push_back(r[0]);
    auto e = express_in_deg0_image(cs, ct, ph, c, mod0);
    if (!e) throw std::logic_error("fiber_product: surjectivity witness missing (engine bug)");
    return cs.from_p0(*e);
  };

  // adjoined generator bookkeeping: name stem, degree, support, pair images
  struct NewGen {
    std::string stem;
    int degree;
    OpenSet support;
    GPoly im0, im1;
    bool closed = false;
    int var = -1;
    int dpartner = -1;
  };
  std::vector<NewGen> gens;

  auto queue_pair_gen = [&](const std::string& stem, int degree, const OpenSet& supp,
                            const GPoly& a0, const GPoly& a1) {
    std::string key = dedup_key(a0.to_string(*pool), a1.to_string(*pool));
    if (is_dup(std::to_string(degree) + ":" + key, supp.members)) return;
    gens.push_back({stem, degree, supp, a0, a1, false, -1, -1});
  };

  // (a)/(b): graph generators for each factor's own degree-0 variables
  for (const auto& e : B0->spec_above(A)) {
    if (e.degree != 0) continue;
    int v = pool->find(e.id);
    for (size_t x = 0; x < space->npoints(); ++x) {
      if (!e.support.contains(x)) continue;
      GPoly val = phi0.apply(GPoly::variable(f, v, 0));
      GPoly p1 = pull_coeff(f1, phi1, x, fb.at(x).to_p0(val));
      queue_pair_gen("a." + e.id, 0, space->minimal_open(x), GPoly::variable(f, v, 0), p1);
    }
  }
  for (const auto& e : B1->spec_above(A)) {
    if (e.degree != 0) continue;
    int v = pool->find(e.id);
    for (size_t x = 0; x < space->npoints(); ++x) {
      if (!e.support.contains(x)) continue;
      GPoly val = phi1.apply(GPoly::variable(f, v, 0));
      GPoly p0 = pull_coeff(f0, phi0, x, fb.at(x).to_p0(val));
      queue_pair_gen("b." + e.id, 0, space->minimal_open(x), p0, GPoly::variable(f, v, 0));
    }
  }

  // kernels of each projection, degree by degree
  auto queue_kernel_gens = [&](StalkFamily& sfam, const SheafHom& ph, const char* tag,
                               bool left) {
    for (int n = 0; n >= wmin; --n) {
      for (size_t x = 0; x < space->npoints(); ++x) {
        StalkCtx& cs = sfam.at(x);
        StalkCtx& ct = fb.at(x);
        std::vector<GPoly> elems;
        for (const auto& mu : cs.basis(n)) elems.push_back(gpoly_of(f, mu));
        auto ker = kernel_along_ring_map(cs, ct, ph, elems, n, ct.rel_gens(n));
        for (const auto& kv : ker) {
          GPoly g = cs.from_coords(kv, n);
          if (g.is_zero()) continue;
          queue_pair_gen(std::string(tag) + std::to_string(-n), n, space->minimal_open(x),
                         left ? g : GPoly::zero(f), left ? GPoly::zero(f) : g);
        }
      }
    }
  };
  queue_kernel_gens(f0, phi0, "ka.", true);
  queue_kernel_gens(f1, phi1, "kb.", false);

  // graph pairs for negative-degree module generators of B0
  for (int n = -1; n >= wmin; --n) {
    auto monos = own_neg_monomials(B0, A, n);
    if (monos.empty()) continue;
    std::map<size_t, std::shared_ptr<SpanSolver>> solvers;
    for (const auto& om : monos) {
      for (size_t x = 0; x < space->npoints(); ++x) {
        if (!((om.support >> x) & 1)) continue;
        StalkCtx& cs1 = f1.at(x);
        StalkCtx& ct = fb.at(x);
        GPoly mug = gpoly_of(f, om.mono);
        GPoly val = phi0.apply(mug);
        auto sit = solvers.find(x);
        if (sit == solvers.end()) {
          std::vector<ModVec> cols;
          for (const auto& nu : cs1.basis(n))
            cols.push_back(ct.to_coords(phi1.apply(gpoly_of(f, nu)), n));
          sit = solvers
                    .emplace(x, std::make_shared<SpanSolver>(ct.P0(), cols, ct.rel_gens(n),
                                                             ct.rank(n)))
                    .first;
        }
        auto sol = sit->second->solve(ct.to_coords(val, n));
        if (!sol) throw std::logic_error("fiber_product: partner solve failed (engine bug)");
        GPoly w1(f);
        for (size_t j = 0; j < sol->size(); ++j) {
          if ((*sol)[j].is_zero()) continue;
          GPoly coeff = pull_coeff(f1, phi1, x, (*sol)[j]);
          w1 = w1 + coeff * gpoly_of(f, cs1.basis(n)[j]);
        }
        queue_pair_gen("g." + canon_mono_name(*pool, om.mono), n, space->minimal_open(x), mug,
                       w1);
      }
    }
  }

  // materialize generators, then d-partners; an existing generator with the
  // same image pair doubles as the partner
  for (auto& g : gens) {
    g.var = bld.add_gen(pool->fresh_name(g.stem), g.degree, g.support);
    img0[g.var] = {g.support, g.im0};
    img1[g.var] = {g.support, g.im1};
  }
  auto find_partner = [&](int degree, const OpenSet& supp, const GPoly& d0, const GPoly& d1) {
    for (const auto& g : gens) {
      if (g.var < 0 || g.degree != degree) continue;
      if (!supp.subset_of(g.support)) continue;
      if (g.im0 == d0 && g.im1 == d1) return g.var;
    }
    return -1;
  };
  size_t ngens = gens.size();
  for (size_t i = 0; i < ngens; ++i) {
    if (gens[i].degree == 0) continue;  // closed
    GPoly d0 = B0->apply_d(gens[i].im0);
    GPoly d1 = B1->apply_d(gens[i].im1);
    if (d0.is_zero() && d1.is_zero()) continue;
    int dp = find_partner(gens[i].degree + 1, gens[i].support, d0, d1);
    if (dp < 0) {
      dp = bld.add_gen(pool->fresh_name("d" + gens[i].stem), gens[i].degree + 1,
                       gens[i].support);
      img0[dp] = {gens[i].support, d0};
      img1[dp] = {gens[i].support, d1};
      gens.push_back({"d" + gens[i].stem, gens[i].degree + 1, gens[i].support, d0, d1, false,
                      dp, -1});
    }
    bld.set_d(gens[i].var, GPoly::variable(f, dp, gens[i].degree + 1));
  }

  DgRingPtr T0 = bld.build();
  SheafHom p0{T0, B0, img0};
  SheafHom p1{T0, B1, img1};

  // window relations: intersection of the two projection kernels
  RingBuilder rb(A);
  for (int g : T0->own_gens()) rb.adopt_gen(g);
  for (const auto& [v, s] : T0->own_d()) rb.set_d(v, s.value);

  StalkFamily tfam(T0, wmin - 1);
  std::vector<std::pair<std::string, uint64_t>> rel_seen;
  for (int n = 0; n >= wmin; --n) {
    for (size_t x = 0; x < space->npoints(); ++x) {
      StalkCtx& tc = tfam.at(x);
      std::vector<GPoly> elems;
      for (const auto& mu : tc.basis(n)) elems.push_back(gpoly_of(f, mu));
      auto k0 = kernel_along_ring_map(tc, f0.at(x), p0, elems, n, f0.at(x).rel_gens(n));
      auto k1 = kernel_along_ring_map(tc, f1.at(x), p1, elems, n, f1.at(x).rel_gens(n));
      // intersection via the kernel of the diagonal map into the two cokernels
      size_t r = tc.rank(n);
      std::vector<ModVec> cols;
      for (size_t i = 0; i < r; ++i) {
        ModVec c = modvec_zero(tc.P0(), 2 * r);
        c[i] = Poly::constant(tc.P0(), Fq::one(f));
        c[r + i] = Poly::constant(tc.P0(), Fq::one(f));
        cols.push_back(std::move(c));
      }
      std::vector<ModVec> quot;
      for (const auto& v : k0) {
        ModVec q = modvec_zero(tc.P0(), 2 * r);
        for (size_t i = 0; i < r; ++i) q[i] = v[i];
        quot.push_back(std::move(q));
      }
      for (const auto& v : k1) {
        ModVec q = modvec_zero(tc.P0(), 2 * r);
        for (size_t i = 0; i < r; ++i) q[r + i] = v[i];
        quot.push_back(std::move(q));
      }
      auto inter = kernel_of_cols(tc.P0(), cols, quot, 2 * r);
      for (const auto& v : inter) {
        GPoly rel = tc.from_coords(v, n);
        if (rel.is_zero()) continue;
        std::string key = rel.to_string(*pool);
        uint64_t U = space->minimal_open(x).members;
        bool dup = false;
        for (const auto& [s, m] : rel_seen)
          if (s == key && (U & ~m) == 0) dup = true;
        if (dup) continue;
        rel_seen.emplace_back(key, U);
        rb.add_rel({OpenSet{space, U}, rel});
      }
    }
  }

  FiberProduct out;
  out.ring = rb.build();
  out.p0 = SheafHom{out.ring, B0, img0};
  out.p1 = SheafHom{out.ring, B1, img1};

  // verifications: projections are homs, and the square over B commutes
  for (const auto& d : check_hom(out.p0, wmin)) out.checks.push_back("p0: " + d);
  for (const auto& d : check_hom(out.p1, wmin)) out.checks.push_back("p1: " + d);
  StalkFamily bfam(B, wmin - 1);
  for (int g : out.ring->own_gens()) {
    GPoly lhs = phi0.apply(img0.at(g).value);
    GPoly rhs = phi1.apply(img1.at(g).value);
    GPoly diff = lhs - rhs;
    if (diff.is_zero()) continue;
    int dg = 0;
    diff.is_homogeneous(&dg);
    for (size_t x = 0; x < space->npoints(); ++x) {
      if (!pool->support(g).contains(x)) continue;
      if (dg < wmin - 1) continue;
      if (!bfam.at(x).is_zero(diff, dg))
        out.checks.push_back("square does not commute on " + pool->name(g));
    }
  }
  return out;
}

OreSquare ore_square(const SheafHom& phi0, const SheafHom& phi1, int q_max, uint64_t seed) {
  int wmin = -q_max - 1;
  auto q0 = is_quasi_iso(phi0, wmin, 0);
  auto q1 = is_quasi_iso(phi1, wmin, 0);
  if (!q0.ok || !q1.ok)
    throw std::invalid_argument("ore_square: inputs must be quasi-isomorphisms");

  Factorization fac0 = factorize(phi0, wmin, seed);
  Factorization fac1 = factorize(phi1, wmin, seed + 1);
  if (!fac0.trivial || !fac1.trivial)
    throw std::invalid_argument(
        "ore_square: inputs must be surjective in the window (factorize them first and pass "
        "the surjective legs)");

  FiberProduct fp = fiber_product(fac0.phiplus, fac1.phiplus, wmin);
  DgRingPtr A = common_ancestor(phi0.source, phi1.source);
  ResolutionStage res = resolve(fp.ring, A, q_max, seed);

  OreSquare out;
  out.ring = res.ring;
  out.certificate = res.certificate;
  out.psi0 = compose(fp.p0, res.phi);
  out.psi1 = compose(fp.p1, res.phi);

  // exact equality of the two composites on every generator
  out.composites_equal = true;
  const auto& pool = out.ring->pool();
  const auto& space = out.ring->space();
  StalkFamily bfam(phi0.target, wmin - 1);
  for (int g : out.ring->flat_gens()) {
    GPoly lhs = phi0.apply(out.psi0.apply(GPoly::variable(out.ring->field(), g, pool->degree(g))));
    GPoly rhs = phi1.apply(out.psi1.apply(GPoly::variable(out.ring->field(), g, pool->degree(g))));
    GPoly diff = lhs - rhs;
    if (diff.is_zero()) continue;
    int dg = 0;
    diff.is_homogeneous(&dg);
    if (dg < wmin) continue;
    for (size_t x = 0; x < space->npoints(); ++x) {
      if (!pool->support(g).contains(x)) continue;
      if (!bfam.at(x).is_zero(diff, dg)) out.composites_equal = false;
    }
  }

  int lo = std::min(-q_max + 1, 0);
  out.qiso0 = is_quasi_iso(out.psi0, lo, 0);
  out.qiso1 = is_quasi_iso(out.psi1, lo, 0);
  return out;
}

WitnessCheck check_homotopy_witness(const HomotopyWitness& w, const SheafHom& phi0,
                                    const SheafHom& phi1, const TensorResult& square, int wmin) {
  WitnessCheck out;
  auto note = [&](const std::string& s) {
    out.ok = false;
    out.diagnostics.push_back(s);
  };

  if (w.eta.source.get() != square.ring.get()) note("eta does not start at the tensor square");
  if (w.eta.target.get() != w.bplus.get()) note("eta does not land in B+");
  if (w.eps.source.get() != w.bplus.get() || w.phi.source.get() != w.bplus.get())
    note("eps/phi do not start at B+");

  for (const auto& d : check_hom(w.eta, wmin)) note("eta: " + d);
  for (const auto& d : check_hom(w.eps, wmin)) note("eps: " + d);
  for (const auto& d : check_hom(w.phi, wmin)) note("phi: " + d);
  if (!out.ok) return out;

  const DgRingPtr& Bring = phi0.source;
  const DgRingPtr& Cring = phi0.target;
  const auto& pool = Bring->pool();
  SheafHom mu = multiplication_hom(square, Bring);

  StalkFamily bfam(Bring, wmin - 1), cfam(Cring, wmin - 1);
  auto check_equal = [&](const GPoly& lhs, const GPoly& rhs, StalkFamily& fam,
                         const OpenSet& supp, const std::string& what) {
    GPoly diff = lhs - rhs;
    if (diff.is_zero()) return;
    int dg = 0;
    diff.is_homogeneous(&dg);
    if (dg < wmin) return;
    for (size_t x = 0; x < supp.space->npoints(); ++x) {
      if (!supp.contains(x)) continue;
      if (!fam.at(x).is_zero(diff, dg)) note(what);
    }
  };

  // eps . eta = mu and phi . eta = phi0 (x) phi1, on the square's generators
  for (const auto& [from, to] : square.clone0) {
    GPoly tv = GPoly::variable(Bring->field(), to, pool->degree(to));
    check_equal(w.eps.apply(w.eta.apply(tv)), mu.apply(tv), bfam, pool->support(to),
                "eps . eta != mu on " + pool->name(to));
    check_equal(w.phi.apply(w.eta.apply(tv)),
                phi0.apply(GPoly::variable(Bring->field(), from, pool->degree(from))), cfam,
                pool->support(to), "phi . eta != phi0 (x) phi1 on " + pool->name(to));
  }
  for (const auto& [from, to] : square.clone1) {
    GPoly tv = GPoly::variable(Bring->field(), to, pool->degree(to));
    check_equal(w.eps.apply(w.eta.apply(tv)), mu.apply(tv), bfam, pool->support(to),
                "eps . eta != mu on " + pool->name(to));
    check_equal(w.phi.apply(w.eta.apply(tv)),
                phi1.apply(GPoly::variable(Bring->field(), from, pool->degree(from))), cfam,
                pool->support(to), "phi . eta != phi0 (x) phi1 on " + pool->name(to));
  }

  auto eq = is_quasi_iso(w.eps, wmin, 0);
  if (!eq.ok) note("eps is not a window quasi-isomorphism");
  return out;
}

WitnessCheck check_quasi_homotopy_witness(const SheafHom& psi, const HomotopyWitness& w,
                                          const SheafHom& phi0, const SheafHom& phi1,
                                          const TensorResult& square, int wmin) {
  WitnessCheck out;
  auto pq = is_quasi_iso(psi, wmin, 0);
  if (!pq.ok) {
    out.ok = false;
    out.diagnostics.push_back("psi is not a window quasi-isomorphism");
    return out;
  }
  SheafHom c0 = compose(phi0, psi);
  SheafHom c1 = compose(phi1, psi);
  return check_homotopy_witness(w, c0, c1, square, wmin);
}

}  // namespace dgsheaf
