#include "dgsheaf/derived.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace dgsheaf {

namespace {

DgRingPtr tower_root(const DgRingPtr& r) {
  DgRingPtr cur = r;
  while (cur->base()) cur = cur->base();
  return cur;
}

}  // namespace

DerivedTensorResult derived_tensor(const DgRingPtr& B, const DgRingPtr& C, const DgRingPtr& A,
                                   int q_max, int wmin, int wmax, uint64_t seed,
                                   bool one_sided) {
  if (wmin > wmax || wmax > 0) throw std::invalid_argument("derived_tensor: bad window");
  if (wmin < -q_max + 1)
    throw std::invalid_argument("derived_tensor: window exceeds certified range q_max");

  DerivedTensorResult out;
  out.res_left = resolve(B, A, q_max, seed);
  DgRingPtr right = C;
  if (!one_sided) {
    out.res_right = resolve(C, A, q_max, seed + 1);
    right = out.res_right->ring;
  }
  TensorResult t = tensor_over_A(out.res_left.ring, right, A);
  out.ring = t.ring;
  out.engine = std::make_shared<HomologyEngine>(out.ring, wmin, wmax);
  out.report = cohomology(*out.engine);

  // comparison hom onto the underived tensor
  TensorResult under = tensor_over_A(B, C, A);
  const Field& f = B->field();
  const auto& pool = B->pool();
  SheafHom xi;
  xi.source = out.ring;
  xi.target = under.ring;
  auto route = [&](const std::map<int, int>& clone, const SheafHom& phi_to_factor,
                   const SheafHom& inj) {
    for (const auto& [from, to] : clone) {
      // image of the resolved factor's generator, pushed into the underived
      // tensor through the factor inclusion
      GPoly img_in_factor;
      auto it = phi_to_factor.images.find(from);
      if (it != phi_to_factor.images.end())
        img_in_factor = it->second.value;
      else
        img_in_factor = GPoly::variable(f, from, pool->degree(from));
      xi.images[to] = Section{pool->support(to), inj.apply(img_in_factor)};
    }
  };
  route(t.clone0, out.res_left.phi, under.inj0);
  if (one_sided) {
    SheafHom idc = SheafHom::identity(C);
    route(t.clone1, idc, under.inj1);
  } else {
    route(t.clone1, out.res_right->phi, under.inj1);
  }
  out.xi = xi;
  out.xi_qiso = is_quasi_iso(xi, wmin, wmax);
  return out;
}

bool pres_equivalent(const ModPres& a, const ModPres& b) {
  if (!a.ring() || !b.ring() || !a.ring()->compatible(*b.ring()))
    throw std::invalid_argument("pres_equivalent: presentations over different rings");
  bool fa = a.finite_dimensional();
  bool fb = b.finite_dimensional();
  if (fa != fb) return false;
  if (fa) return module_iso_test(a, b);
  if (a.pruned().rank() != b.pruned().rank()) return false;
  auto canon = [](const std::vector<Poly>& gb) {
    std::vector<std::string> s;
    for (const auto& g : gb) s.push_back(g.to_string());
    std::sort(s.begin(), s.end());
    return s;
  };
  return canon(a.annihilator()) == canon(b.annihilator());
}

bool reports_iso(const HomologyEngine& a, const HomologyEngine& b) {
  if (a.wmin() != b.wmin() || a.wmax() != b.wmax()) return false;
  const auto& space = a.ring()->space();
  if (space->npoints() != b.ring()->space()->npoints()) return false;
  for (size_t x = 0; x < space->npoints(); ++x)
    for (int n = a.wmin(); n <= a.wmax(); ++n) {
      if (!pres_equivalent(a.at(x, n).pres, b.at(x, n).pres)) return false;
    }
  return true;
}

void validate_subspace(const RingedSpace& X, const ClosedSubspaceDatum& Y) {
  const auto& space = X.space;
  if (!space->is_up_closed(Y.support))
    throw std::invalid_argument("subspace support is not closed (up-closed)");
  for (const auto& s : Y.ideal_gens) {
    validate_section(*X.structure, s);
    int d = 0;
    if (!s.value.is_homogeneous(&d) || (!s.value.is_zero() && d != 0))
      throw std::invalid_argument("subspace ideal generators must have degree 0");
  }
  // declared support must match the points with nonzero quotient stalk
  StalkFamily fam(X.structure, -1);
  for (size_t x = 0; x < space->npoints(); ++x) {
    StalkCtx& c = fam.at(x);
    std::vector<ModVec> gens = c.rel_gens(0);
    for (const auto& s : Y.ideal_gens)
      if (s.open.contains(x)) gens.push_back(c.to_coords(s.value, 0));
    ModPres pres(c.P0(), 1, gens);
    bool zero_stalk = pres.is_zero_elem(modvec_unit(c.P0(), 1, 0));
    bool declared = (Y.support >> x) & 1;
    if (zero_stalk == declared)
      throw std::invalid_argument("declared support mismatch at point " + space->points()[x]);
  }
}

DerivedIntersection derived_intersection(const RingedSpace& X, const ClosedSubspaceDatum& Y1,
                                         const ClosedSubspaceDatum& Y2, int q_max, int wmin,
                                         int wmax, uint64_t seed) {
  for (const auto& e : X.structure->spec())
    if (e.degree != 0)
      throw std::invalid_argument("derived_intersection: structure sheaf must sit in degree 0");
  validate_subspace(X, Y1);
  validate_subspace(X, Y2);

  auto quotient_of = [&](const ClosedSubspaceDatum& Y) {
    RingBuilder bld(X.structure);
    for (const auto& s : Y.ideal_gens) bld.add_rel(s);
    return bld.build();
  };
  DgRingPtr O1 = quotient_of(Y1);
  DgRingPtr O2 = quotient_of(Y2);

  DerivedIntersection out;
  out.Y = Y1.support & Y2.support;
  out.tensor = derived_tensor(O1, O2, X.structure, q_max, wmin, wmax, seed);
  out.engine = out.tensor.engine;
  out.report = out.tensor.report;

  // H vanishes off Y in the window (this is the content of the canonical
  // quasi-isomorphism onto the pushforward of O_Y)
  for (size_t x = 0; x < X.space->npoints(); ++x) {
    if ((out.Y >> x) & 1) continue;
    for (int n = wmin; n <= wmax; ++n)
      if (out.engine->at(x, n).kdim != 0) out.vanishing_outside = false;
  }
  out.restricted = restrict_to_open(out.tensor.ring, out.Y);
  return out;
}

namespace {

// Koszul complex terms: subsets of {0..k-1} of size p index the basis
std::vector<std::vector<size_t>> subsets_of_size(size_t k, size_t p) {
  std::vector<std::vector<size_t>> out;
  std::vector<size_t> cur;
  std::function<void(size_t)> rec = [&](size_t start) {
    if (cur.size() == p) {
      out.push_back(cur);
      return;
    }
    for (size_t i = start; i < k; ++i) {
      cur.push_back(i);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
  return out;
}

struct FreeComplex {
  // boundary[p]: columns of d_p : F_p -> F_{p-1}; ranks[p] = rank F_p
  std::vector<size_t> ranks;
  std::vector<std::vector<ModVec>> boundary;
};

FreeComplex koszul_complex(const PolyRingPtr& R, const std::vector<Poly>& f, size_t pmax) {
  FreeComplex cx;
  size_t k = f.size();
  size_t top = std::min(pmax + 1, k);
  std::vector<std::vector<std::vector<size_t>>> bases;
  for (size_t p = 0; p <= top; ++p) bases.push_back(subsets_of_size(k, p));
  for (size_t p = 0; p <= top; ++p) cx.ranks.push_back(bases[p].size());
  cx.boundary.resize(top + 1);
  for (size_t p = 1; p <= top; ++p) {
    std::map<std::vector<size_t>, size_t> index;
    for (size_t i = 0; i < bases[p - 1].size(); ++i) index[bases[p - 1][i]] = i;
    for (const auto& S : bases[p]) {
      ModVec col = modvec_zero(R, bases[p - 1].size());
      for (size_t j = 0; j < S.size(); ++j) {
        std::vector<size_t> T = S;
        T.erase(T.begin() + static_cast<long>(j));
        Fq sign = (j % 2 == 0) ? Fq::one(R->field()) : -Fq::one(R->field());
        col[index[T]] = col[index[T]] + f[S[j]].scaled(sign);
      }
      cx.boundary[p].push_back(std::move(col));
    }
  }
  return cx;
}

// free resolution of R/(f) by iterated syzygies, to homological depth pmax
FreeComplex syzygy_resolution(const PolyRingPtr& R, const std::vector<Poly>& f, size_t pmax) {
  FreeComplex cx;
  cx.ranks.push_back(1);
  cx.boundary.resize(1);
  std::vector<ModVec> cols;
  for (const auto& g : f) cols.push_back(ModVec{g});
  auto trivial = GroebnerBasis::trivial(R);
  for (size_t p = 1; p <= pmax + 1; ++p) {
    if (cols.empty()) {
      cx.ranks.push_back(0);
      cx.boundary.push_back({});
      continue;
    }
    cx.ranks.push_back(cols.size());
    cx.boundary.push_back(cols);
    cols = syzygy_kernel(R, cols, cx.ranks[p - 1], trivial);
  }
  return cx;
}

bool is_regular_sequence(const PolyRingPtr& R, const std::vector<Poly>& f) {
  for (size_t i = 0; i < f.size(); ++i) {
    std::vector<Poly> prior(f.begin(), f.begin() + static_cast<long>(i));
    auto gb = buchberger(R, prior);
    if (gb.contains(f[i])) return false;  // f_i already in the prior ideal
    auto quot = ideal_quotient(gb, f[i]);
    for (const auto& q : quot)
      if (!gb.contains(q)) return false;  // a zero divisor modulo the prior ideal
  }
  return true;
}

}  // namespace

TorOracleResult koszul_tor_oracle(const PolyRingPtr& R, const std::vector<Poly>& f,
                                  const std::vector<Poly>& g, int pmax) {
  if (pmax < 0) throw std::invalid_argument("koszul_tor_oracle: pmax must be >= 0");
  TorOracleResult out;
  out.used_koszul = !f.empty() && is_regular_sequence(R, f);
  FreeComplex cx = out.used_koszul ? koszul_complex(R, f, static_cast<size_t>(pmax))
                                   : syzygy_resolution(R, f, static_cast<size_t>(pmax));

  auto gbJ = buchberger(R, g);
  auto fold_quotient = [&](size_t rank) {
    std::vector<ModVec> q;
    for (const auto& gen : gbJ.gens)
      for (size_t i = 0; i < rank; ++i) {
        ModVec v = modvec_zero(R, rank);
        v[i] = gen;
        q.push_back(std::move(v));
      }
    return q;
  };

  for (int p = 0; p <= pmax; ++p) {
    size_t sp = static_cast<size_t>(p);
    if (sp >= cx.ranks.size() || cx.ranks[sp] == 0) {
      out.tor.emplace(p, ModPres(R, 0, {}));
      out.kdim[p] = 0;
      continue;
    }
    size_t rank_p = cx.ranks[sp];
    // cycles: kernel of d_p (x) R/J
    std::vector<ModVec> zgens;
    if (p == 0) {
      zgens.push_back(modvec_unit(R, 1, 0));
    } else {
      size_t rank_prev = cx.ranks[sp - 1];
      zgens = kernel_of_cols(R, cx.boundary[sp], fold_quotient(rank_prev), rank_prev);
    }
    // boundaries: image of d_{p+1} plus J-multiples
    std::vector<ModVec> bgens = fold_quotient(rank_p);
    if (sp + 1 < cx.boundary.size())
      for (const auto& col : cx.boundary[sp + 1]) bgens.push_back(col);
    auto rels = kernel_of_cols(R, zgens, bgens, rank_p);
    ModPres pres(R, zgens.size(), rels);
    out.kdim[p] = pres.kdim();
    out.tor.emplace(p, std::move(pres));
  }
  return out;
}

AffineComparison one_point_affine_comparison(const DgRingPtr& A,
                                             const std::vector<GPoly>& ideal_gens, int q_max,
                                             uint64_t seed) {
  AffineComparison out;
  if (A->space()->npoints() != 1) {
    out.diagnostics.push_back("requires a one-point space");
    return out;
  }
  const auto& pool = A->pool();
  const Field& f = A->field();
  OpenSet whole = A->space()->whole();

  RingBuilder qb(A);
  for (const auto& gp : ideal_gens) qb.add_rel({whole, gp});
  DgRingPtr B = qb.build();

  ResolutionStage engine_res = resolve(B, A, q_max, seed);

  // hand-registered classical resolution: the Koszul algebra on the ideal
  RingBuilder kb(A);
  std::map<int, Section> images;
  for (size_t i = 0; i < ideal_gens.size(); ++i) {
    int y = kb.add_gen(pool->fresh_name("reg.y" + std::to_string(i)), -1, whole);
    kb.set_d(y, ideal_gens[i]);
    images[y] = Section{whole, GPoly::zero(f)};
  }
  DgRingPtr reg = kb.build();
  SheafHom reg_phi = extend_hom(reg, B, images, -(q_max + 2));

  auto rq = is_quasi_iso(reg_phi, -q_max - 1, 0);
  if (!rq.ok) {
    out.diagnostics.push_back("registered Koszul resolution is not a quasi-iso (non-regular ideal?)");
    return out;
  }

  auto sq = ore_square(engine_res.phi, reg_phi, q_max, seed);
  out.ok = sq.composites_equal && sq.qiso0.ok && sq.qiso1.ok && sq.certificate.pass;
  if (!sq.composites_equal) out.diagnostics.push_back("composites differ");
  if (!sq.qiso0.ok) out.diagnostics.push_back("psi0 not a window quasi-iso");
  if (!sq.qiso1.ok) out.diagnostics.push_back("psi1 not a window quasi-iso");
  return out;
}

CotangentReport cotangent_complex(const RingedSpace& X, int q_max, int wmin, int wmax,
                                  uint64_t seed) {
  for (const auto& e : X.structure->spec())
    if (e.degree != 0)
      throw std::invalid_argument("cotangent_complex: structure sheaf must sit in degree 0");
  if (wmin > wmax || wmax > 0) throw std::invalid_argument("cotangent_complex: bad window");

  CotangentReport out;
  DgRingPtr root = tower_root(X.structure);
  out.resolution = resolve(X.structure, root, q_max, seed);
  const DgRingPtr& At = out.resolution.ring;
  const SheafHom& rho = out.resolution.phi;
  const auto& pool = At->pool();
  const Field& f = At->field();
  const auto& space = X.space;

  // generators of Omega^1: one delta per tower generator of the resolution
  std::vector<int> gens = At->flat_gens();

  StalkFamily ofam(X.structure, wmin - 1);
  out.report.wmin = wmin;
  out.report.wmax = wmax;

  struct PointData {
    std::map<int, std::vector<int>> basis;            // degree -> delta-generators
    std::map<int, std::vector<ModVec>> dcols;         // degree -> D columns
    std::map<int, std::vector<ModVec>> zgens, bgens;  // per degree
    std::map<int, ModPres> pres;
  };
  std::vector<PointData> pts(space->npoints());

  for (size_t x = 0; x < space->npoints(); ++x) {
    StalkCtx& oc = ofam.at(x);
    PointData& pd = pts[x];
    for (int n = wmin - 1; n <= 0; ++n) {
      std::vector<int> bs;
      for (int gvar : gens)
        if (pool->degree(gvar) == n && pool->support(gvar).contains(x)) bs.push_back(gvar);
      pd.basis[n] = std::move(bs);
    }
    // D(delta t) = sum_s rho(partial_s(d t)) delta s, a P0-linear map
    auto fold = [&](size_t rank) {
      std::vector<ModVec> q;
      for (const auto& r : oc.rel_gens(0))
        for (size_t i = 0; i < rank; ++i) {
          ModVec v = modvec_zero(oc.P0(), rank);
          v[i] = r[0];
          q.push_back(std::move(v));
        }
      return q;
    };
    for (int n = wmin - 1; n <= 0; ++n) {
      std::vector<ModVec> cols;
      std::vector<int> next = pd.basis.count(n + 1) ? pd.basis[n + 1] : std::vector<int>{};
      for (int t : pd.basis[n]) {
        ModVec col = modvec_zero(oc.P0(), next.size());
        GPoly dt = At->d_of(t);
        if (!dt.is_zero()) {
          for (size_t si = 0; si < next.size(); ++si) {
            int s = next[si];
            GPoly coeff(f);
            for (const auto& [m, c] : dt.terms()) {
              GPoly part = gmono_partial(m, s, f);
              coeff = coeff + part.scaled(c);
            }
            if (coeff.is_zero()) continue;
            GPoly pushed = rho.apply(coeff);
            col[si] = oc.to_p0(oc.nf(pushed, 0));
          }
        }
        cols.push_back(std::move(col));
      }
      pd.dcols[n] = std::move(cols);
    }
    for (int n = wmin; n <= wmax; ++n) {
      size_t rank_n = pd.basis[n].size();
      size_t rank_next = n + 1 <= 0 ? pd.basis[n + 1].size() : 0;
      std::vector<ModVec> z;
      if (n == 0 || rank_next == 0) {
        for (size_t i = 0; i < rank_n; ++i) z.push_back(modvec_unit(oc.P0(), rank_n, i));
      } else {
        z = kernel_of_cols(oc.P0(), pd.dcols[n], fold(rank_next), rank_next);
      }
      std::vector<ModVec> b = fold(rank_n);
      for (const auto& col : pd.dcols[n - 1]) b.push_back(col);
      auto rels = kernel_of_cols(oc.P0(), z, b, rank_n);
      pd.zgens[n] = z;
      pd.bgens[n] = b;
      pd.pres.emplace(n, ModPres(oc.P0(), z.size(), rels));
      out.presentations.emplace(std::make_pair(x, n), pd.pres.at(n));
    }

    std::map<int, HPointDegree> degs;
    for (int n = wmin; n <= wmax; ++n) {
      HPointDegree hp;
      const ModPres& pres = pd.pres.at(n);
      hp.ngens = pres.rank();
      hp.kdim = pres.kdim();
      for (const auto& zg : pd.zgens[n]) {
        std::string s;
        for (size_t i = 0; i < zg.size(); ++i) {
          if (zg[i].is_zero()) continue;
          if (!s.empty()) s += " + ";
          s += "(" + zg[i].to_string() + ")*d" + pool->name(pd.basis[n][i]);
        }
        hp.gens.push_back(s.empty() ? "0" : s);
      }
      for (const auto& r : pres.rels()) {
        std::vector<std::string> row;
        for (const auto& p : r) row.push_back(p.to_string());
        hp.relations.push_back(std::move(row));
      }
      degs[n] = std::move(hp);
    }
    out.report.per_point[space->points()[x]] = std::move(degs);
  }
  return out;
}

}  // namespace dgsheaf
