#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "dgsheaf/dgring.hpp"
#include "dgsheaf/groebner.hpp"
#include "dgsheaf/modules.hpp"

namespace dgsheaf {

// Stalk of a tower at one point, organized degree by degree over the
// polynomial ring P0 on the degree-0 variables alive there. For n <= 0 the
// degree-n component is the free P0-module on the basis of negative-variable
// monomials of degree n, modulo the relation submodule; the differential is
// P0-linear because degree-0 generators are closed.
class StalkCtx {
public:
  StalkCtx(DgRingPtr ring, size_t point, int floor);

  const DgRingPtr& ring() const { return ring_; }
  size_t point() const { return point_; }
  int floor() const { return floor_; }
  const PolyRingPtr& P0() const { return p0_; }
  const std::vector<int>& deg0_vars() const { return deg0_vars_; }
  const std::vector<int>& neg_vars() const { return neg_vars_; }

  // negative-monomial basis of the degree-n component (empty for n > 0 except
  // basis(0) = {1}); n must be >= floor()
  const std::vector<GMono>& basis(int n) const;
  size_t rank(int n) const { return basis(n).size(); }

  // relation submodule generators / reduced basis at degree n
  const std::vector<ModVec>& rel_gens(int n) const;
  const std::vector<ModVec>& rel_gb(int n) const;
  const ModuleOrder& mod_order() const { return mod_ord_; }

  ModVec to_coords(const GPoly& p, int n) const;
  GPoly from_coords(const ModVec& v, int n) const;
  ModVec nf(const ModVec& v, int n) const;
  GPoly nf(const GPoly& p, int n) const;
  bool is_zero(const GPoly& p, int n) const;

  // columns: images of basis(n) under the differential, as coords in n+1
  const std::vector<ModVec>& d_columns(int n) const;
  ModVec d_coords(const ModVec& v, int n) const;

  // split a degree-0 GPoly (in deg-0 variables only) into a P0 element
  Poly to_p0(const GPoly& p) const;
  GPoly from_p0(const Poly& p) const;

private:
  DgRingPtr ring_;
  size_t point_;
  int floor_;
  std::vector<int> deg0_vars_;
  std::vector<int> neg_vars_;
  PolyRingPtr p0_;
  std::map<int, size_t> p0_index_;
  ModuleOrder mod_ord_;
  mutable std::map<int, std::vector<GMono>> basis_;
  mutable std::map<int, std::map<GMono, size_t>> basis_index_;
  mutable std::map<int, std::vector<ModVec>> rel_gens_;
  mutable std::map<int, std::vector<ModVec>> rel_gb_;
  mutable std::map<int, std::vector<ModVec>> d_cols_;

  void ensure_basis(int n) const;
};

using StalkCtxPtr = std::shared_ptr<StalkCtx>;

// Cache of stalk contexts per point for one ring/floor. Cell construction is
// serialized. A StalkCtx fills its per-degree tables lazily and is not
// internally synchronized: warm the degrees you need before sharing one
// across threads (sheaf data itself is immutable after validation).
class StalkFamily {
public:
  StalkFamily(DgRingPtr ring, int floor);
  StalkCtx& at(size_t point) const;
  const DgRingPtr& ring() const { return ring_; }
  int floor() const { return floor_; }

private:
  DgRingPtr ring_;
  int floor_;
  mutable std::mutex mu_;
  mutable std::vector<StalkCtxPtr> cache_;
};

// Bigraded count oracle: number of monomials of cohomological degree n and
// weight w (number of generator factors) in the free strictly commutative
// algebra on the given variables, by series convolution. Degree-0 variables
// contribute weight without degree.
// result[w] = vector over degrees [floor..0] (index deg - floor)
std::vector<std::vector<long long>> hilbert_bigraded(const std::vector<std::pair<int, bool>>& vars,
                                                     int floor, int weight_cap);

// Direct enumeration of the same counts (independent route used by
// flatness_check and the stalk command to cross-check hilbert_bigraded).
std::vector<std::vector<long long>> enumerate_bigraded(const std::vector<std::pair<int, bool>>& vars,
                                                       int floor, int weight_cap);

struct FlatnessPointReport {
  size_t point;
  // per degree [floor..0]: per weight counts, enumeration vs series
  std::vector<std::vector<long long>> enumerated;
  std::vector<std::vector<long long>> series;
  bool match;
};

struct FlatnessReport {
  bool ok;
  std::vector<FlatnessPointReport> points;
};

// Stalkwise freeness cross-check of the degree components of a pseudo-free
// ring (free => flat); reports bigraded basis cardinalities both ways.
FlatnessReport flatness_check(const DgRingPtr& ring, int floor, int weight_cap = 8);

// Structural homomorphism checks: degree/support of images, d-commutation
// and relation collapse via stalk normal forms. Returns diagnostics, empty
// when the hom is valid.
std::vector<std::string> check_hom(const SheafHom& phi, int floor);

// extend_hom of the universal property: builds the hom from generator images
// over a shared base and validates it. Throws on degree/support mismatch.
SheafHom extend_hom(const DgRingPtr& source, const DgRingPtr& target,
                    const std::map<int, Section>& images, int floor);

// d(d(t)) = 0 for every tower generator, via normal forms at every point of
// the generator's support. Returns the offending generator id, or -1.
int check_d_squared(const DgRingPtr& ring, int floor);

// pointwise product of sections over the intersection of their opens
Section multiply(const DgRing& ring, const Section& a, const Section& b);

}  // namespace dgsheaf
