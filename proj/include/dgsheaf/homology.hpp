#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dgsheaf/stalk.hpp"

namespace dgsheaf {

// One cohomology module H^n(stalk) presented over the stalk's P0:
// generators are cocycles (coords in basis(n)), relations are coefficient
// vectors spanning boundaries and the relation submodule.
struct HEntry {
  int degree = 0;
  std::vector<ModVec> zgens;  // cocycle generators
  std::vector<ModVec> bgens;  // boundaries + relation submodule generators
  ModPres pres;               // coker presentation on zgens
  long long kdim = 0;         // -1 when infinite-dimensional over the field
};

// Window-relative cohomology of one ring: stalkwise entries plus enough
// context to map elements in and out.
class HomologyEngine {
public:
  HomologyEngine(DgRingPtr ring, int wmin, int wmax);

  const DgRingPtr& ring() const { return ring_; }
  int wmin() const { return wmin_; }
  int wmax() const { return wmax_; }
  StalkCtx& ctx(size_t point) const { return fam_.at(point); }
  const HEntry& at(size_t point, int degree) const;

  // class of a cocycle in the presentation basis; nullopt if not a cocycle
  std::optional<ModVec> class_coords(size_t point, int degree, const GPoly& cocycle) const;

private:
  DgRingPtr ring_;
  int wmin_, wmax_;
  StalkFamily fam_;
  mutable std::map<std::pair<size_t, int>, HEntry> cache_;
};

struct HPointDegree {
  size_t ngens = 0;
  long long kdim = 0;
  std::vector<std::string> gens;                      // cocycle representatives
  std::vector<std::vector<std::string>> relations;    // coefficient rows
};

struct RestrictionEntry {
  std::string from;  // bigger point y
  std::string to;    // smaller point x (x <= y)
  int degree = 0;
  std::vector<std::vector<std::string>> matrix;  // row per y-generator
};

struct CohomologyReport {
  int wmin = 0, wmax = 0;
  std::map<std::string, std::map<int, HPointDegree>> per_point;
  std::vector<RestrictionEntry> restrictions;
};

CohomologyReport cohomology(const DgRingPtr& ring, int wmin, int wmax);
CohomologyReport cohomology(const HomologyEngine& eng);

struct QisoResult {
  bool ok = true;
  std::vector<std::string> diagnostics;
  std::optional<std::pair<std::string, int>> witness;  // first failing (point, degree)
};

// Window-relative verdict: H(phi) bijective at every point and degree in
// [wmin, wmax].
QisoResult is_quasi_iso(const SheafHom& phi, int wmin, int wmax);
QisoResult is_quasi_iso(const SheafHom& phi, const HomologyEngine& src, const HomologyEngine& tgt);

// Generators of ker(H^degree(phi)) at a point, as source cocycles. Used by
// the resolution tower to pick cycle-killing generators.
std::vector<GPoly> h_kernel_classes(const HomologyEngine& src, const HomologyEngine& tgt,
                                    const SheafHom& phi, size_t point, int degree);

// Whether H^degree(phi) at the point is surjective (used by certificates).
// The degree-0 ring-level check below must accompany this at degree 0.
bool h_surjective_at(const HomologyEngine& src, const HomologyEngine& tgt, const SheafHom& phi,
                     size_t point, int degree);

// Expresses a target degree-0 element as a polynomial in the phi-images of
// the source degree-0 variables, modulo the given target ideal. This is the
// subring membership behind ring-level surjectivity in degree 0 (the
// module-span tests at negative degrees are only valid on top of it).
std::optional<Poly> express_in_deg0_image(const StalkCtx& src, const StalkCtx& tgt,
                                          const SheafHom& phi, const Poly& y,
                                          const std::vector<Poly>& modulo);

// Generators, over the source P0, of the coefficient vectors a with
// sum_j phi-hat(a_j) * phi(elems_j) inside span(tgt_quotient) at the given
// degree. This is the kernel computation along the degree-0 ring map that
// both the quasi-iso test and the fiber product lean on.
std::vector<ModVec> kernel_along_ring_map(const StalkCtx& src, const StalkCtx& tgt,
                                          const SheafHom& phi, const std::vector<GPoly>& elems,
                                          int degree, const std::vector<ModVec>& tgt_quotient);

}  // namespace dgsheaf
