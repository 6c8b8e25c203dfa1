#include "dgsheaf/modules.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace dgsheaf {

int ModuleOrder::cmp(size_t pa, const Mono& ma, size_t pb, const Mono& mb) const {
  int ba = block(pa), bb = block(pb);
  if (ba != bb) return ba < bb ? 1 : -1;  // lower block dominates
  int c = mono.cmp(ma, mb);
  if (c != 0) return c;
  if (pa != pb) return pa < pb ? 1 : -1;  // lower position dominates
  return 0;
}

ModVec modvec_zero(const PolyRingPtr& ring, size_t rank) {
  return ModVec(rank, Poly(ring));
}

ModVec modvec_unit(const PolyRingPtr& ring, size_t rank, size_t pos) {
  ModVec v = modvec_zero(ring, rank);
  v[pos] = Poly::constant(ring, Fq::one(ring->field()));
  return v;
}

bool modvec_is_zero(const ModVec& v) {
  for (const auto& p : v)
    if (!p.is_zero()) return false;
  return true;
}

ModVec modvec_add(const ModVec& a, const ModVec& b) {
  ModVec r(a.size(), Poly());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

ModVec modvec_sub(const ModVec& a, const ModVec& b) {
  ModVec r(a.size(), Poly());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

ModVec modvec_scale(const ModVec& a, const Fq& c) {
  ModVec r(a.size(), Poly());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i].scaled(c);
  return r;
}

ModVec modvec_mul_term(const ModVec& a, const Mono& m, const Fq& c) {
  ModVec r(a.size(), Poly());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i].mul_term(m, c);
  return r;
}

ModVec modvec_mul_poly(const ModVec& a, const Poly& p) {
  ModVec r(a.size(), Poly());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] * p;
  return r;
}

bool modvec_equal(const ModVec& a, const ModVec& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return false;
  return true;
}

std::optional<ModTerm> modvec_lead(const ModVec& v, const ModuleOrder& ord) {
  std::optional<ModTerm> best;
  for (size_t p = 0; p < v.size(); ++p) {
    if (v[p].is_zero()) continue;
    const Term& t = v[p].lead();
    if (!best || ord.cmp(p, t.mono, best->pos, best->mono) > 0)
      best = ModTerm{p, t.mono, t.coeff};
  }
  return best;
}

namespace {

// v -= g * (q, c), touching only the nonzero entries of g
void modvec_axpy(ModVec& v, const ModVec& g, const Mono& q, const Fq& c) {
  for (size_t i = 0; i < g.size(); ++i) {
    if (g[i].is_zero()) continue;
    v[i] = v[i] - g[i].mul_term(q, c);
  }
}

// One reduction step: cancel the given term of v against a basis element
// whose lead divides it. Returns false if no divisor exists. skip marks an
// element to ignore (used by inter-reduction).
bool reduce_term_once(ModVec& v, size_t pos, const Mono& mono, const Fq& coeff,
                      const std::vector<ModVec>& basis,
                      const std::vector<ModTerm>& leads, size_t skip) {
  for (size_t k = 0; k < basis.size(); ++k) {
    if (k == skip) continue;
    if (leads[k].pos != pos) continue;
    if (!mono_divides(leads[k].mono, mono)) continue;
    Mono q = mono_div(mono, leads[k].mono);
    Fq c = coeff / leads[k].coeff;
    modvec_axpy(v, basis[k], q, c);
    return true;
  }
  return false;
}

std::vector<ModTerm> lead_table(const std::vector<ModVec>& basis, const ModuleOrder& ord) {
  std::vector<ModTerm> leads;
  leads.reserve(basis.size());
  for (const auto& b : basis) {
    auto l = modvec_lead(b, ord);
    if (!l) throw std::logic_error("module basis contains zero vector");
    leads.push_back(*l);
  }
  return leads;
}

constexpr size_t kNoSkip = static_cast<size_t>(-1);

ModVec nf_impl(ModVec v, const std::vector<ModVec>& basis,
               const std::vector<ModTerm>& leads, const ModuleOrder& ord,
               size_t skip = kNoSkip) {
  if (basis.empty()) return v;
  ModVec result(v.size(), Poly(v.empty() ? PolyRingPtr() : v[0].ring()));
  for (size_t i = 0; i < v.size(); ++i) result[i] = Poly(v[i].ring());
  // Repeatedly reduce the highest remaining term; if irreducible, move it
  // to the result.
  while (true) {
    auto l = modvec_lead(v, ord);
    if (!l) break;
    if (!reduce_term_once(v, l->pos, l->mono, l->coeff, basis, leads, skip)) {
      result[l->pos] = result[l->pos] + Poly::from_terms(v[l->pos].ring(), {{l->mono, l->coeff}});
      v[l->pos] = v[l->pos] - Poly::from_terms(v[l->pos].ring(), {{l->mono, l->coeff}});
    }
  }
  return result;
}

}  // namespace

ModVec module_nf(const ModVec& v, const std::vector<ModVec>& basis, const ModuleOrder& ord) {
  return nf_impl(v, basis, lead_table(basis, ord), ord);
}

std::vector<ModVec> module_groebner(std::vector<ModVec> gens, const ModuleOrder& ord) {
  std::vector<ModVec> basis;
  for (auto& g : gens)
    if (!modvec_is_zero(g)) basis.push_back(std::move(g));
  if (basis.empty()) return basis;

  std::vector<ModTerm> leads = lead_table(basis, ord);
  // pair queue; process deterministically by insertion order
  std::vector<std::pair<size_t, size_t>> pairs;
  for (size_t i = 0; i < basis.size(); ++i)
    for (size_t j = i + 1; j < basis.size(); ++j)
      if (leads[i].pos == leads[j].pos) pairs.emplace_back(i, j);

  size_t next = 0;
  while (next < pairs.size()) {
    auto [i, j] = pairs[next++];
    const ModTerm& li = leads[i];
    const ModTerm& lj = leads[j];
    if (li.pos != lj.pos) continue;
    Mono l = mono_lcm(li.mono, lj.mono);
    ModVec s = modvec_sub(
        modvec_mul_term(basis[i], mono_div(l, li.mono), Fq::one(li.coeff.field()) / li.coeff),
        modvec_mul_term(basis[j], mono_div(l, lj.mono), Fq::one(lj.coeff.field()) / lj.coeff));
    ModVec r = nf_impl(std::move(s), basis, leads, ord);
    if (modvec_is_zero(r)) continue;
    auto lr = modvec_lead(r, ord);
    for (size_t k = 0; k < basis.size(); ++k)
      if (leads[k].pos == lr->pos) pairs.emplace_back(k, basis.size());
    basis.push_back(std::move(r));
    leads.push_back(*lr);
  }

  // inter-reduce to the unique reduced basis
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t k = 0; k < basis.size(); ++k) {
      ModVec r = nf_impl(basis[k], basis, leads, ord, k);
      if (!modvec_equal(r, basis[k])) changed = true;
      if (modvec_is_zero(r)) {
        basis.erase(basis.begin() + static_cast<long>(k));
        leads.erase(leads.begin() + static_cast<long>(k));
        --k;
        changed = true;
        continue;
      }
      auto lr = modvec_lead(r, ord);
      basis[k] = modvec_scale(r, Fq::one(lr->coeff.field()) / lr->coeff);
      leads[k] = *modvec_lead(basis[k], ord);
    }
  }
  std::sort(basis.begin(), basis.end(), [&](const ModVec& a, const ModVec& b) {
    auto la = modvec_lead(a, ord), lb = modvec_lead(b, ord);
    return ord.cmp(la->pos, la->mono, lb->pos, lb->mono) > 0;
  });
  return basis;
}

namespace {

// Graph-module setup shared by kernel and membership queries:
// positions [0, rank) carry the target (block 0), positions [rank, rank+s)
// carry the coefficients (block 1).
struct GraphCtx {
  std::vector<ModVec> gb;
  ModuleOrder ord;
  size_t rank;
  size_t s;
};

GraphCtx build_graph(const PolyRingPtr& ring, const std::vector<ModVec>& cols,
                     const std::vector<ModVec>& quotient, size_t rank,
                     const std::vector<uint8_t>& elim_vars) {
  GraphCtx ctx;
  ctx.rank = rank;
  ctx.s = cols.size();
  ctx.ord.mono = ring->order();
  if (!elim_vars.empty()) ctx.ord.mono.elim_mask = elim_vars;
  ctx.ord.pos_block.assign(rank + cols.size(), 0);
  for (size_t i = rank; i < rank + cols.size(); ++i) ctx.ord.pos_block[i] = 1;

  std::vector<ModVec> gens;
  for (size_t j = 0; j < cols.size(); ++j) {
    if (cols[j].size() != rank) throw std::invalid_argument("kernel_of_cols: column size mismatch");
    ModVec g = modvec_zero(ring, rank + cols.size());
    for (size_t p = 0; p < rank; ++p) g[p] = cols[j][p];
    g[rank + j] = Poly::constant(ring, Fq::one(ring->field()));
    gens.push_back(std::move(g));
  }
  for (const auto& n : quotient) {
    if (n.size() != rank) throw std::invalid_argument("kernel_of_cols: quotient size mismatch");
    ModVec g = modvec_zero(ring, rank + cols.size());
    for (size_t p = 0; p < rank; ++p) g[p] = n[p];
    if (!modvec_is_zero(g)) gens.push_back(std::move(g));
  }
  ctx.gb = module_groebner(std::move(gens), ctx.ord);
  return ctx;
}

bool first_block_zero(const ModVec& v, size_t rank) {
  for (size_t p = 0; p < rank; ++p)
    if (!v[p].is_zero()) return false;
  return true;
}

bool uses_elim_vars(const Poly& p, const std::vector<uint8_t>& elim_vars) {
  for (const auto& t : p.terms())
    for (size_t i = 0; i < t.mono.size(); ++i)
      if (t.mono[i] && i < elim_vars.size() && elim_vars[i]) return true;
  return false;
}

}  // namespace

std::vector<ModVec> kernel_of_cols(const PolyRingPtr& ring,
                                   const std::vector<ModVec>& cols,
                                   const std::vector<ModVec>& quotient,
                                   size_t rank,
                                   const std::vector<uint8_t>& elim_vars) {
  GraphCtx ctx = build_graph(ring, cols, quotient, rank, elim_vars);
  std::vector<ModVec> out;
  for (const auto& g : ctx.gb) {
    if (!first_block_zero(g, rank)) continue;
    ModVec coeffs(g.begin() + static_cast<long>(rank), g.end());
    if (!elim_vars.empty()) {
      bool bad = false;
      for (const auto& c : coeffs)
        if (uses_elim_vars(c, elim_vars)) {
          bad = true;
          break;
        }
      if (bad) continue;
    }
    if (!modvec_is_zero(coeffs)) out.push_back(std::move(coeffs));
  }
  return out;
}

std::optional<std::vector<Poly>> solve_in_span(const PolyRingPtr& ring,
                                               const ModVec& y,
                                               const std::vector<ModVec>& cols,
                                               const std::vector<ModVec>& quotient) {
  SpanSolver s(ring, cols, quotient, y.size());
  return s.solve(y);
}

SpanSolver::SpanSolver(PolyRingPtr ring, const std::vector<ModVec>& cols,
                       const std::vector<ModVec>& quotient, size_t rank)
    : ring_(std::move(ring)), rank_(rank), ncols_(cols.size()) {
  GraphCtx ctx = build_graph(ring_, cols, quotient, rank_, {});
  gb_ = std::move(ctx.gb);
  ord_ = std::move(ctx.ord);
}

std::optional<std::vector<Poly>> SpanSolver::solve(const ModVec& y) const {
  if (y.size() != rank_) throw std::invalid_argument("SpanSolver: rank mismatch");
  ModVec probe = modvec_zero(ring_, rank_ + ncols_);
  for (size_t p = 0; p < rank_; ++p) probe[p] = y[p];
  ModVec r = gb_.empty() ? probe : module_nf(probe, gb_, ord_);
  if (!first_block_zero(r, rank_)) return std::nullopt;
  std::vector<Poly> coeffs;
  coeffs.reserve(ncols_);
  for (size_t j = 0; j < ncols_; ++j) coeffs.push_back(-r[rank_ + j]);
  return coeffs;
}

ModPres::ModPres(PolyRingPtr ring, size_t rank, std::vector<ModVec> rels)
    : ring_(std::move(ring)), rank_(rank), rels_(std::move(rels)) {
  ord_.mono = ring_->order();
  ord_.pos_block.assign(rank_, 0);
  std::vector<ModVec> gens;
  for (const auto& r : rels_) {
    if (r.size() != rank_) throw std::invalid_argument("ModPres: relation size mismatch");
    if (!modvec_is_zero(r)) gens.push_back(r);
  }
  gb_ = module_groebner(std::move(gens), ord_);
}

ModVec ModPres::nf(const ModVec& v) const {
  if (gb_.empty()) return v;
  return module_nf(v, gb_, ord_);
}

bool ModPres::is_zero_elem(const ModVec& v) const { return modvec_is_zero(nf(v)); }

std::optional<std::vector<std::pair<Mono, size_t>>> ModPres::std_monomials(size_t cap) const {
  std::vector<std::pair<Mono, size_t>> out;
  size_t nv = ring_->nvars();
  for (size_t p = 0; p < rank_; ++p) {
    std::vector<Mono> leads_p;
    for (const auto& g : gb_) {
      auto l = modvec_lead(g, ord_);
      if (l->pos == p) leads_p.push_back(l->mono);
    }
    // per-variable exponent caps from pure powers in the lead set
    std::vector<uint32_t> caps(nv, 0);
    for (size_t i = 0; i < nv; ++i) {
      bool found = false;
      uint32_t best = 0;
      for (const auto& m : leads_p) {
        bool pure = true;
        for (size_t k = 0; k < nv; ++k)
          if (k != i && m[k] != 0) pure = false;
        if (pure && (m[i] > 0 || mono_total_degree(m) == 0)) {
          if (!found || m[i] < best) best = m[i];
          found = true;
        }
      }
      if (!found) {
        if (nv == 0) continue;
        return std::nullopt;  // x_i^k never a lead => infinite staircase
      }
      caps[i] = best;
    }
    // constant lead kills the whole position
    bool has_const = false;
    for (const auto& m : leads_p)
      if (mono_total_degree(m) == 0) has_const = true;
    if (has_const) continue;

    Mono cur(nv, 0);
    std::vector<size_t> stack;
    // iterative odometer over the box prod [0, caps_i)
    while (true) {
      bool divisible = false;
      for (const auto& m : leads_p)
        if (mono_divides(m, cur)) {
          divisible = true;
          break;
        }
      if (!divisible) {
        out.emplace_back(cur, p);
        if (out.size() > cap) return std::nullopt;
      }
      size_t i = 0;
      while (i < nv) {
        if (cur[i] + 1 < caps[i]) {
          ++cur[i];
          break;
        }
        cur[i] = 0;
        ++i;
      }
      if (i == nv) break;
    }
  }
  return out;
}

long long ModPres::kdim() const {
  auto sm = std_monomials();
  return sm ? static_cast<long long>(sm->size()) : -1;
}

std::vector<Poly> ModPres::annihilator() const {
  // Ann(M) = kernel of f |-> (f e_0, ..., f e_{r-1}) into (R^r/N)^r,
  // realized as one stacked kernel computation.
  if (rank_ == 0) return {Poly::constant(ring_, Fq::one(ring_->field()))};
  size_t big = rank_ * rank_;
  ModVec col = modvec_zero(ring_, big);
  for (size_t p = 0; p < rank_; ++p) col[p * rank_ + p] = Poly::constant(ring_, Fq::one(ring_->field()));
  std::vector<ModVec> quotient;
  for (size_t p = 0; p < rank_; ++p)
    for (const auto& r : rels_) {
      ModVec q = modvec_zero(ring_, big);
      for (size_t i = 0; i < rank_; ++i) q[p * rank_ + i] = r[i];
      quotient.push_back(std::move(q));
    }
  auto ker = kernel_of_cols(ring_, {col}, quotient, big);
  std::vector<ModVec> gens;
  for (auto& k : ker) gens.push_back(std::move(k));
  ModuleOrder ideal_ord;
  ideal_ord.mono = ring_->order();
  auto gb = module_groebner(std::move(gens), ideal_ord);
  std::vector<Poly> out;
  for (auto& g : gb) out.push_back(g[0]);
  return out;
}

ModPres ModPres::pruned() const {
  size_t r = rank_;
  std::vector<ModVec> rels = rels_;
  std::vector<size_t> alive(r);
  for (size_t i = 0; i < r; ++i) alive[i] = i;

  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t k = 0; k < rels.size() && !changed; ++k) {
      for (size_t p = 0; p < alive.size() && !changed; ++p) {
        // relation with a unit constant entry at position p pins that
        // generator; substitute it away
        const Poly& e = rels[k][p];
        if (e.is_zero()) continue;
        bool unit_const = e.terms().size() >= 1 &&
                          mono_total_degree(e.lead().mono) == 0 && e.terms().size() == 1;
        if (!unit_const) continue;
        Fq c = e.lead().coeff;
        ModVec pivot = rels[k];
        std::vector<ModVec> next;
        for (size_t m = 0; m < rels.size(); ++m) {
          if (m == k) continue;
          // eliminate position p: v' = v - (v_p / c) * pivot
          ModVec v = rels[m];
          if (!v[p].is_zero()) {
            Poly f = v[p].scaled(Fq::one(c.field()) / c);
            v = modvec_sub(v, modvec_mul_poly(pivot, f));
          }
          v.erase(v.begin() + static_cast<long>(p));
          if (!modvec_is_zero(v)) next.push_back(std::move(v));
        }
        alive.erase(alive.begin() + static_cast<long>(p));
        rels = std::move(next);
        changed = true;
      }
    }
  }
  return ModPres(ring_, alive.size(), rels);
}

namespace {

// Row reduction in place; returns the echelon rows (a basis of the row space).
std::vector<std::vector<Fq>> row_space_basis(std::vector<std::vector<Fq>> m) {
  size_t rows = m.size();
  if (rows == 0) return {};
  size_t cols = m[0].size();
  size_t rank = 0;
  for (size_t c = 0; c < cols && rank < rows; ++c) {
    size_t piv = rank;
    while (piv < rows && m[piv][c].is_zero()) ++piv;
    if (piv == rows) continue;
    std::swap(m[rank], m[piv]);
    Fq inv = m[rank][c].inv();
    for (size_t j = c; j < cols; ++j) m[rank][j] = m[rank][j] * inv;
    for (size_t i = 0; i < rows; ++i) {
      if (i == rank || m[i][c].is_zero()) continue;
      Fq factor = m[i][c];
      for (size_t j = c; j < cols; ++j) m[i][j] = m[i][j] - factor * m[rank][j];
    }
    ++rank;
  }
  m.resize(rank);
  return m;
}

}  // namespace

size_t fq_matrix_rank(std::vector<std::vector<Fq>> m, const Field& f) {
  (void)f;
  return row_space_basis(std::move(m)).size();
}

namespace {

struct KBasis {
  std::vector<std::pair<Mono, size_t>> basis;
  std::map<std::pair<Mono, size_t>, size_t> index;
};

KBasis kbasis_of(const ModPres& m) {
  auto sm = m.std_monomials();
  if (!sm) throw std::domain_error("module_iso_test: module not finite-dimensional over the field");
  KBasis kb;
  kb.basis = *sm;
  std::sort(kb.basis.begin(), kb.basis.end());
  for (size_t i = 0; i < kb.basis.size(); ++i) kb.index[kb.basis[i]] = i;
  return kb;
}

std::vector<Fq> coords_of(const ModPres& m, const KBasis& kb, const ModVec& v) {
  ModVec r = m.nf(v);
  std::vector<Fq> out(kb.basis.size(), Fq::zero(m.ring()->field()));
  for (size_t p = 0; p < r.size(); ++p)
    for (const auto& t : r[p].terms()) {
      auto it = kb.index.find({t.mono, p});
      if (it == kb.index.end()) throw std::logic_error("coords_of: nf outside standard basis");
      out[it->second] = t.coeff;
    }
  return out;
}

// action matrix of multiplication by variable v (columns = images of basis)
std::vector<std::vector<Fq>> var_action(const ModPres& m, const KBasis& kb, size_t var) {
  std::vector<std::vector<Fq>> mat;
  for (const auto& [mono, pos] : kb.basis) {
    Mono shifted = mono;
    shifted[var] += 1;
    ModVec v = modvec_zero(m.ring(), m.rank());
    v[pos] = Poly::from_terms(m.ring(), {{shifted, Fq::one(m.ring()->field())}});
    mat.push_back(coords_of(m, kb, v));
  }
  // stored row-per-basis-image; transpose not needed for rank purposes
  return mat;
}

std::vector<std::vector<Fq>> mat_mul(const std::vector<std::vector<Fq>>& a,
                                     const std::vector<std::vector<Fq>>& b, const Field& f) {
  size_t n = a.size();
  std::vector<std::vector<Fq>> r(n, std::vector<Fq>(n, Fq::zero(f)));
  for (size_t i = 0; i < n; ++i)
    for (size_t k = 0; k < n; ++k) {
      if (a[i][k].is_zero()) continue;
      for (size_t j = 0; j < n; ++j) r[i][j] = r[i][j] + a[i][k] * b[k][j];
    }
  return r;
}

// dims of m^k M for the augmentation ideal m = (all variables)
std::vector<size_t> layer_dims(const ModPres& m, const KBasis& kb) {
  const Field& f = m.ring()->field();
  size_t n = kb.basis.size();
  std::vector<std::vector<std::vector<Fq>>> actions;
  for (size_t v = 0; v < m.ring()->nvars(); ++v) actions.push_back(var_action(m, kb, v));

  // span as row space; start with identity (the whole module)
  std::vector<std::vector<Fq>> span;
  for (size_t i = 0; i < n; ++i) {
    std::vector<Fq> row(n, Fq::zero(f));
    row[i] = Fq::one(f);
    span.push_back(row);
  }
  std::vector<size_t> dims;
  size_t prev = n;
  for (size_t step = 0; step < n + 1; ++step) {
    // next span = sum_v span * X_v
    std::vector<std::vector<Fq>> next;
    for (const auto& row : span)
      for (const auto& act : actions) {
        std::vector<Fq> img(n, Fq::zero(f));
        for (size_t i = 0; i < n; ++i) {
          if (row[i].is_zero()) continue;
          for (size_t j = 0; j < n; ++j) img[j] = img[j] + row[i] * act[i][j];
        }
        next.push_back(std::move(img));
      }
    auto reduced = row_space_basis(std::move(next));
    size_t d = reduced.size();
    dims.push_back(d);
    if (d == 0 || d == prev) break;
    prev = d;
    span = std::move(reduced);
  }
  return dims;
}

std::vector<std::vector<size_t>> var_power_ranks(const ModPres& m, const KBasis& kb) {
  const Field& f = m.ring()->field();
  std::vector<std::vector<size_t>> out;
  size_t n = kb.basis.size();
  size_t kmax = std::min<size_t>(n, 8);
  for (size_t v = 0; v < m.ring()->nvars(); ++v) {
    auto base = var_action(m, kb, v);
    auto cur = base;
    std::vector<size_t> ranks;
    for (size_t k = 0; k < kmax; ++k) {
      ranks.push_back(fq_matrix_rank(cur, f));
      cur = mat_mul(cur, base, f);
    }
    out.push_back(std::move(ranks));
  }
  return out;
}

std::vector<std::string> canon_ideal(const std::vector<Poly>& gb) {
  std::vector<std::string> s;
  for (const auto& g : gb) s.push_back(g.to_string());
  std::sort(s.begin(), s.end());
  return s;
}

}  // namespace

bool module_iso_test(const ModPres& a, const ModPres& b) {
  if (!a.ring() || !b.ring() || !a.ring()->compatible(*b.ring()))
    throw std::invalid_argument("module_iso_test: presentations over different rings");
  KBasis ka = kbasis_of(a);
  KBasis kb = kbasis_of(b);
  if (ka.basis.size() != kb.basis.size()) return false;
  if (ka.basis.empty()) return true;
  if (canon_ideal(a.annihilator()) != canon_ideal(b.annihilator())) return false;
  if (layer_dims(a, ka) != layer_dims(b, kb)) return false;
  if (var_power_ranks(a, ka) != var_power_ranks(b, kb)) return false;
  return true;
}

}  // namespace dgsheaf
