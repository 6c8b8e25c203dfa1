#pragma once

#include <optional>
#include <vector>

#include "dgsheaf/poly.hpp"

namespace dgsheaf {

// Element of a free module R^r, dense by position.
using ModVec = std::vector<Poly>;

struct ModTerm {
  size_t pos = 0;
  Mono mono;
  Fq coeff;
};

// Position-over-term order with a block structure on positions (lower block
// wins) used for graph-module eliminations. Variable elimination, when
// needed, rides on the underlying MonoOrder.
struct ModuleOrder {
  MonoOrder mono;
  std::vector<int> pos_block;  // per position; empty = all block 0

  int block(size_t pos) const { return pos_block.empty() ? 0 : pos_block[pos]; }
  // -1, 0, 1 for a < b, equal, a > b
  int cmp(size_t pa, const Mono& ma, size_t pb, const Mono& mb) const;
};

ModVec modvec_zero(const PolyRingPtr& ring, size_t rank);
ModVec modvec_unit(const PolyRingPtr& ring, size_t rank, size_t pos);
bool modvec_is_zero(const ModVec& v);
ModVec modvec_add(const ModVec& a, const ModVec& b);
ModVec modvec_sub(const ModVec& a, const ModVec& b);
ModVec modvec_scale(const ModVec& a, const Fq& c);
ModVec modvec_mul_term(const ModVec& a, const Mono& m, const Fq& c);
ModVec modvec_mul_poly(const ModVec& a, const Poly& p);
bool modvec_equal(const ModVec& a, const ModVec& b);

std::optional<ModTerm> modvec_lead(const ModVec& v, const ModuleOrder& ord);

// Fully reduced normal form of v modulo basis (assumed a Groebner basis for
// exact membership semantics; any basis gives a valid but non-canonical
// reduction).
ModVec module_nf(const ModVec& v, const std::vector<ModVec>& basis, const ModuleOrder& ord);

// Buchberger for submodules of R^r. Returns the reduced basis: monic,
// tail-reduced, sorted by lead descending.
std::vector<ModVec> module_groebner(std::vector<ModVec> gens, const ModuleOrder& ord);

// Generators of { a in R^s : sum_j a_j * cols[j] lies in span(quotient) }.
// With elim_vars nonempty, additionally restricts to coefficient vectors
// whose entries avoid the flagged variables (kernel along a ring map).
std::vector<ModVec> kernel_of_cols(const PolyRingPtr& ring,
                                   const std::vector<ModVec>& cols,
                                   const std::vector<ModVec>& quotient,
                                   size_t rank,
                                   const std::vector<uint8_t>& elim_vars = {});

// Coefficients a with y = sum a_j cols[j] modulo span(quotient), if any.
std::optional<std::vector<Poly>> solve_in_span(const PolyRingPtr& ring,
                                               const ModVec& y,
                                               const std::vector<ModVec>& cols,
                                               const std::vector<ModVec>& quotient);

// Same query against a fixed span: the graph-module basis is computed once
// and reused across many right-hand sides.
class SpanSolver {
public:
  SpanSolver(PolyRingPtr ring, const std::vector<ModVec>& cols,
             const std::vector<ModVec>& quotient, size_t rank);
  std::optional<std::vector<Poly>> solve(const ModVec& y) const;
  bool contains(const ModVec& y) const { return solve(y).has_value(); }

private:
  PolyRingPtr ring_;
  size_t rank_;
  size_t ncols_;
  std::vector<ModVec> gb_;
  ModuleOrder ord_;
};

// Finite presentation R^rank / span(rels).
class ModPres {
public:
  ModPres() = default;
  ModPres(PolyRingPtr ring, size_t rank, std::vector<ModVec> rels);

  const PolyRingPtr& ring() const { return ring_; }
  size_t rank() const { return rank_; }
  const std::vector<ModVec>& rels() const { return rels_; }
  const std::vector<ModVec>& groebner() const { return gb_; }
  const ModuleOrder& order() const { return ord_; }

  ModVec nf(const ModVec& v) const;
  bool is_zero_elem(const ModVec& v) const;

  // Standard monomials (mono, pos) of the cokernel; nullopt when the module
  // is not finite-dimensional over the field.
  std::optional<std::vector<std::pair<Mono, size_t>>> std_monomials(size_t cap = 20000) const;
  bool finite_dimensional() const { return std_monomials().has_value(); }
  long long kdim() const;  // -1 when infinite-dimensional

  // Reduced Groebner basis of Ann(M) = { f : f * e_p in N for all p }.
  std::vector<Poly> annihilator() const;

  // Eliminates generators pinned by unit relation entries; returns an
  // equivalent smaller presentation (used for reporting).
  ModPres pruned() const;

private:
  PolyRingPtr ring_;
  size_t rank_ = 0;
  std::vector<ModVec> rels_;
  std::vector<ModVec> gb_;
  ModuleOrder ord_;
};

// Isomorphism verdict by invariant comparison: field dimensions, annihilator
// ideals, augmentation-power layer dimensions and per-variable nilpotency
// ranks. Throws if a module is not finite-dimensional over the field.
bool module_iso_test(const ModPres& a, const ModPres& b);

// Dense exact linear algebra over the coefficient field.
size_t fq_matrix_rank(std::vector<std::vector<Fq>> m, const Field& f);

}  // namespace dgsheaf
