#include "dgsheaf/homology.hpp"

#include <algorithm>
#include <stdexcept>

namespace dgsheaf {

HomologyEngine::HomologyEngine(DgRingPtr ring, int wmin, int wmax)
    : ring_(std::move(ring)), wmin_(wmin), wmax_(wmax), fam_(ring_, wmin - 1) {
  if (wmin > wmax || wmax > 0) throw std::invalid_argument("HomologyEngine: bad window");
}

const HEntry& HomologyEngine::at(size_t point, int degree) const {
  if (degree < wmin_ || degree > wmax_)
    throw std::out_of_range("HomologyEngine: degree outside window");
  auto key = std::make_pair(point, degree);
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;

  StalkCtx& c = fam_.at(point);
  HEntry e;
  e.degree = degree;

  if (degree == 0) {
    e.zgens.push_back(modvec_unit(c.P0(), 1, 0));
  } else {
    e.zgens = kernel_of_cols(c.P0(), c.d_columns(degree), c.rel_gens(degree + 1),
                             c.rank(degree + 1));
  }
  for (const auto& col : c.d_columns(degree - 1)) {
    ModVec r = c.nf(col, degree);
    if (!modvec_is_zero(r)) e.bgens.push_back(std::move(r));
  }
  for (const auto& r : c.rel_gens(degree)) e.bgens.push_back(r);

  std::vector<ModVec> rel_rows =
      kernel_of_cols(c.P0(), e.zgens, e.bgens, c.rank(degree));
  e.pres = ModPres(c.P0(), e.zgens.size(), rel_rows);
  e.kdim = e.pres.kdim();
  return cache_.emplace(key, std::move(e)).first->second;
}

std::optional<ModVec> HomologyEngine::class_coords(size_t point, int degree,
                                                   const GPoly& cocycle) const {
  StalkCtx& c = fam_.at(point);
  const HEntry& e = at(point, degree);
  ModVec v = c.to_coords(cocycle, degree);
  auto sol = solve_in_span(c.P0(), v, e.zgens, c.rel_gens(degree));
  if (!sol) return std::nullopt;
  return ModVec(sol->begin(), sol->end());
}

namespace {

std::string coeff_string(const Poly& p) { return p.to_string(); }

}  // namespace

CohomologyReport cohomology(const HomologyEngine& eng) {
  CohomologyReport rep;
  rep.wmin = eng.wmin();
  rep.wmax = eng.wmax();
  const auto& ring = eng.ring();
  const auto& space = ring->space();
  const auto& pool = ring->pool();

  for (size_t x = 0; x < space->npoints(); ++x) {
    std::map<int, HPointDegree> degs;
    for (int n = eng.wmin(); n <= eng.wmax(); ++n) {
      const HEntry& e = eng.at(x, n);
      HPointDegree pd;
      pd.ngens = e.zgens.size();
      pd.kdim = e.kdim;
      StalkCtx& c = eng.ctx(x);
      for (const auto& z : e.zgens) pd.gens.push_back(c.from_coords(z, n).to_string(*pool));
      for (const auto& r : e.pres.rels()) {
        std::vector<std::string> row;
        for (const auto& p : r) row.push_back(coeff_string(p));
        pd.relations.push_back(std::move(row));
      }
      degs[n] = std::move(pd);
    }
    rep.per_point[space->points()[x]] = std::move(degs);
  }

  // restriction maps H^n(y) -> H^n(x) along x <= y, x != y
  for (size_t y = 0; y < space->npoints(); ++y)
    for (size_t x = 0; x < space->npoints(); ++x) {
      if (x == y || !space->leq(x, y)) continue;
      for (int n = eng.wmin(); n <= eng.wmax(); ++n) {
        const HEntry& ey = eng.at(y, n);
        const HEntry& ex = eng.at(x, n);
        StalkCtx& cy = eng.ctx(y);
        StalkCtx& cx = eng.ctx(x);
        RestrictionEntry re;
        re.from = space->points()[y];
        re.to = space->points()[x];
        re.degree = n;
        SpanSolver span(cx.P0(), ex.zgens, ex.bgens, cx.rank(n));
        for (const auto& zy : ey.zgens) {
          GPoly g = cy.from_coords(zy, n);
          auto sol = span.solve(cx.to_coords(g, n));
          if (!sol)
            throw std::logic_error("cohomology: restriction of a cocycle failed to resolve");
          std::vector<std::string> row;
          for (const auto& p : *sol) row.push_back(coeff_string(p));
          re.matrix.push_back(std::move(row));
        }
        rep.restrictions.push_back(std::move(re));
      }
    }
  return rep;
}

CohomologyReport cohomology(const DgRingPtr& ring, int wmin, int wmax) {
  HomologyEngine eng(ring, wmin, wmax);
  return cohomology(eng);
}

namespace {

// Joint polynomial ring over the union of the two stalks' degree-0 variables,
// with the target-only ones flagged for elimination.
struct JointRing {
  PolyRingPtr J;
  std::vector<int> ids;              // pool ids, ascending
  std::map<int, size_t> index;       // id -> J var slot
  std::vector<uint8_t> elim;         // 1 = target-only (to eliminate)
};

JointRing make_joint(const StalkCtx& src, const StalkCtx& tgt) {
  JointRing jr;
  std::vector<int> ids = src.deg0_vars();
  for (int v : tgt.deg0_vars())
    if (std::find(ids.begin(), ids.end(), v) == ids.end()) ids.push_back(v);
  std::sort(ids.begin(), ids.end());
  jr.ids = ids;
  std::vector<std::string> names;
  jr.elim.resize(ids.size(), 0);
  const auto& pool = src.ring()->pool();
  for (size_t i = 0; i < ids.size(); ++i) {
    names.push_back(pool->name(ids[i]));
    jr.index[ids[i]] = i;
    bool in_src = std::find(src.deg0_vars().begin(), src.deg0_vars().end(), ids[i]) !=
                  src.deg0_vars().end();
    jr.elim[i] = in_src ? 0 : 1;
  }
  MonoOrder ord;
  ord.kind = OrderKind::grevlex;
  bool any = false;
  for (uint8_t e : jr.elim) any = any || e;
  if (any) ord.elim_mask = jr.elim;
  jr.J = PolyRing::make(src.ring()->field(), names, ord);
  return jr;
}

Poly lift_poly(const JointRing& jr, const Poly& p, const std::vector<int>& from_ids) {
  std::vector<Term> ts;
  for (const auto& t : p.terms()) {
    Mono m(jr.J->nvars(), 0);
    for (size_t i = 0; i < t.mono.size(); ++i) {
      if (t.mono[i] == 0) continue;
      m[jr.index.at(from_ids[i])] = t.mono[i];
    }
    ts.push_back({std::move(m), t.coeff});
  }
  return Poly::from_terms(jr.J, ts);
}

Poly drop_poly(const JointRing& jr, const Poly& p, const StalkCtx& to) {
  // read a J-polynomial whose support avoids eliminated vars back into P0
  std::vector<Term> ts;
  const auto& ids = to.deg0_vars();
  for (const auto& t : p.terms()) {
    Mono m(to.P0()->nvars(), 0);
    for (size_t i = 0; i < t.mono.size(); ++i) {
      if (t.mono[i] == 0) continue;
      auto it = std::find(ids.begin(), ids.end(), jr.ids[i]);
      if (it == ids.end()) throw std::logic_error("drop_poly: eliminated variable survives");
      m[static_cast<size_t>(it - ids.begin())] = t.mono[i];
    }
    ts.push_back({std::move(m), t.coeff});
  }
  return Poly::from_terms(to.P0(), ts);
}

// deg-0 image of a source degree-0 variable under phi, as a target P0 poly
Poly deg0_image(const SheafHom& phi, const StalkCtx& tgt, int var) {
  auto it = phi.images.find(var);
  GPoly g = (it != phi.images.end())
                ? it->second.value
                : GPoly::variable(phi.source->field(), var, 0);
  return tgt.to_p0(g);
}

}  // namespace

std::vector<ModVec> kernel_along_ring_map(const StalkCtx& src, const StalkCtx& tgt,
                                          const SheafHom& phi, const std::vector<GPoly>& elems,
                                          int degree, const std::vector<ModVec>& tgt_quotient) {
  JointRing jr = make_joint(src, tgt);
  size_t rank = tgt.rank(degree);

  std::vector<ModVec> cols;
  for (const auto& e : elems) {
    ModVec v = tgt.to_coords(phi.apply(e), degree);
    ModVec vj(rank, Poly(jr.J));
    for (size_t p = 0; p < rank; ++p) vj[p] = lift_poly(jr, v[p], tgt.deg0_vars());
    cols.push_back(std::move(vj));
  }
  std::vector<ModVec> quotient;
  for (const auto& b : tgt_quotient) {
    ModVec vj(rank, Poly(jr.J));
    for (size_t p = 0; p < rank; ++p) vj[p] = lift_poly(jr, b[p], tgt.deg0_vars());
    quotient.push_back(std::move(vj));
  }
  // graph relations u - phi(u) for source degree-0 variables with nontrivial
  // images
  std::vector<Poly> graph;
  for (int u : src.deg0_vars()) {
    bool shared = std::find(tgt.deg0_vars().begin(), tgt.deg0_vars().end(), u) !=
                  tgt.deg0_vars().end();
    auto it = phi.images.find(u);
    if (shared && it == phi.images.end()) continue;
    Poly lhs = Poly::variable(jr.J, jr.index.at(u));
    Poly rhs = lift_poly(jr, deg0_image(phi, tgt, u), tgt.deg0_vars());
    Poly g = lhs - rhs;
    if (!g.is_zero()) graph.push_back(std::move(g));
  }
  for (const auto& g : graph)
    for (size_t p = 0; p < rank; ++p) {
      ModVec vj(rank, Poly(jr.J));
      vj[p] = g;
      quotient.push_back(std::move(vj));
    }

  std::vector<uint8_t> elim = jr.elim;
  bool any = false;
  for (uint8_t e : elim) any = any || e;
  auto ker = kernel_of_cols(jr.J, cols, quotient, rank, any ? elim : std::vector<uint8_t>{});

  std::vector<ModVec> out;
  for (const auto& k : ker) {
    ModVec v;
    v.reserve(k.size());
    bool ok = true;
    for (const auto& p : k) {
      try {
        v.push_back(drop_poly(jr, p, src));
      } catch (const std::logic_error&) {
        ok = false;
        break;
      }
    }
    if (ok) out.push_back(std::move(v));
  }
  return out;
}

namespace {

// kernel of the induced map on H^degree at a point, as source coefficient
// vectors over the source presentation generators
std::vector<ModVec> h_kernel_vectors(const HomologyEngine& src, const HomologyEngine& tgt,
                                     const SheafHom& phi, size_t point, int degree) {
  const HEntry& es = src.at(point, degree);
  const HEntry& et = tgt.at(point, degree);
  StalkCtx& cs = src.ctx(point);
  StalkCtx& ct = tgt.ctx(point);
  std::vector<GPoly> elems;
  for (const auto& z : es.zgens) elems.push_back(cs.from_coords(z, degree));
  return kernel_along_ring_map(cs, ct, phi, elems, degree, et.bgens);
}

}  // namespace

bool h_surjective_at(const HomologyEngine& src, const HomologyEngine& tgt, const SheafHom& phi,
                     size_t point, int degree) {
  const HEntry& es = src.at(point, degree);
  const HEntry& et = tgt.at(point, degree);
  StalkCtx& cs = src.ctx(point);
  StalkCtx& ct = tgt.ctx(point);
  std::vector<ModVec> cols;
  for (const auto& z : es.zgens) {
    GPoly img = phi.apply(cs.from_coords(z, degree));
    cols.push_back(ct.to_coords(img, degree));
  }
  SpanSolver span(ct.P0(), cols, et.bgens, ct.rank(degree));
  for (const auto& z : et.zgens) {
    if (!span.contains(z)) return false;
  }
  if (degree == 0) {
    // module-span surjectivity only covers the H^0(target)-action; the ring
    // image itself must reach every degree-0 variable modulo boundaries
    std::vector<Poly> modulo;
    for (const auto& b : et.bgens) modulo.push_back(b[0]);
    for (size_t i = 0; i < ct.deg0_vars().size(); ++i) {
      Poly v = Poly::variable(ct.P0(), i);
      if (!express_in_deg0_image(cs, ct, phi, v, modulo)) return false;
    }
  }
  return true;
}

std::optional<Poly> express_in_deg0_image(const StalkCtx& src, const StalkCtx& tgt,
                                          const SheafHom& phi, const Poly& y,
                                          const std::vector<Poly>& modulo) {
  JointRing jr = make_joint(src, tgt);
  std::vector<Poly> gens;
  for (const auto& m : modulo)
    if (!m.is_zero()) gens.push_back(lift_poly(jr, m, tgt.deg0_vars()));
  for (int u : src.deg0_vars()) {
    bool shared = std::find(tgt.deg0_vars().begin(), tgt.deg0_vars().end(), u) !=
                  tgt.deg0_vars().end();
    if (shared && !phi.images.count(u)) continue;
    Poly lhs = Poly::variable(jr.J, jr.index.at(u));
    Poly rhs = lift_poly(jr, deg0_image(phi, tgt, u), tgt.deg0_vars());
    Poly g = lhs - rhs;
    if (!g.is_zero()) gens.push_back(std::move(g));
  }
  auto gb = buchberger(jr.J, gens);
  Poly r = normal_form(lift_poly(jr, y, tgt.deg0_vars()), gb);
  // membership iff the remainder avoids the eliminated (target-only) block
  for (const auto& t : r.terms())
    for (size_t i = 0; i < t.mono.size(); ++i)
      if (t.mono[i] && jr.elim[i]) return std::nullopt;
  try {
    return drop_poly(jr, r, src);
  } catch (const std::logic_error&) {
    return std::nullopt;
  }
}

std::vector<GPoly> h_kernel_classes(const HomologyEngine& src, const HomologyEngine& tgt,
                                    const SheafHom& phi, size_t point, int degree) {
  const HEntry& es = src.at(point, degree);
  StalkCtx& cs = src.ctx(point);
  auto kvs = h_kernel_vectors(src, tgt, phi, point, degree);
  std::vector<GPoly> out;
  for (const auto& kv : kvs) {
    // assemble the source cocycle sum a_j z_j
    ModVec elem = modvec_zero(cs.P0(), cs.rank(degree));
    for (size_t j = 0; j < kv.size(); ++j)
      elem = modvec_add(elem, modvec_mul_poly(es.zgens[j], kv[j]));
    // skip classes already zero in the source
    auto already = solve_in_span(cs.P0(), elem, es.bgens, {});
    if (already) continue;
    out.push_back(cs.from_coords(elem, degree));
  }
  return out;
}

QisoResult is_quasi_iso(const SheafHom& phi, const HomologyEngine& src,
                        const HomologyEngine& tgt) {
  QisoResult res;
  const auto& space = phi.source->space();
  for (size_t x = 0; x < space->npoints(); ++x) {
    for (int n = src.wmin(); n <= src.wmax(); ++n) {
      if (!h_surjective_at(src, tgt, phi, x, n)) {
        res.ok = false;
        res.diagnostics.push_back("H(phi) not surjective at (" + space->points()[x] + ", " +
                                  std::to_string(n) + ")");
        if (!res.witness) res.witness = {space->points()[x], n};
        continue;
      }
      auto kernel = h_kernel_classes(src, tgt, phi, x, n);
      if (!kernel.empty()) {
        res.ok = false;
        res.diagnostics.push_back("H(phi) not injective at (" + space->points()[x] + ", " +
                                  std::to_string(n) + ")");
        if (!res.witness) res.witness = {space->points()[x], n};
      }
    }
  }
  return res;
}

QisoResult is_quasi_iso(const SheafHom& phi, int wmin, int wmax) {
  HomologyEngine src(phi.source, wmin, wmax);
  HomologyEngine tgt(phi.target, wmin, wmax);
  return is_quasi_iso(phi, src, tgt);
}

}  // namespace dgsheaf
