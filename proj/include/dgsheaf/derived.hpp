#pragma once

#include <map>
#include <memory>

#include "dgsheaf/resolution.hpp"

namespace dgsheaf {

struct DerivedTensorResult {
  DgRingPtr ring;  // resolved tensor representing B (x)^L_A C
  std::shared_ptr<HomologyEngine> engine;
  CohomologyReport report;
  SheafHom xi;          // comparison hom onto the underived tensor B (x)_A C
  QisoResult xi_qiso;   // window verdict; an isomorphism when a factor is K-flat
  ResolutionStage res_left;
  std::optional<ResolutionStage> res_right;  // absent in one-sided mode
};

// Resolves the factors (both, or only the left one), tensors over the base
// and reports window cohomology. Requires wmin >= -q_max + 1 so the window
// stays inside the certified range.
DerivedTensorResult derived_tensor(const DgRingPtr& B, const DgRingPtr& C, const DgRingPtr& A,
                                   int q_max, int wmin, int wmax, uint64_t seed = 0,
                                   bool one_sided = false);

// module_iso_test when both sides are finite-dimensional over the field;
// otherwise compares pruned generator counts and annihilator ideals (the
// sound invariant set for the infinite-dimensional stalks that arise from
// positive-dimensional intersections)
bool pres_equivalent(const ModPres& a, const ModPres& b);

// true when the two results have pres_equivalent cohomology at every point
// and degree of the window (the resolution-independence invariant)
bool reports_iso(const HomologyEngine& a, const HomologyEngine& b);

struct ClosedSubspaceDatum {
  std::vector<Section> ideal_gens;  // degree-0 sections of the structure sheaf
  uint64_t support = 0;             // up-closed set of points with nonzero quotient stalk
};

// validates up-closure and that the declared support matches the points
// where the quotient stalk is nonzero; throws on mismatch
void validate_subspace(const RingedSpace& X, const ClosedSubspaceDatum& Y);

struct DerivedIntersection {
  uint64_t Y = 0;                       // intersection of the supports
  RestrictionResult restricted;         // O_Y data on the subspace
  std::shared_ptr<HomologyEngine> engine;  // over the ambient space (pushforward view)
  CohomologyReport report;              // per ambient point
  bool vanishing_outside = true;        // H = 0 off Y in the window
  DerivedTensorResult tensor;
};

DerivedIntersection derived_intersection(const RingedSpace& X, const ClosedSubspaceDatum& Y1,
                                         const ClosedSubspaceDatum& Y2, int q_max, int wmin,
                                         int wmax, uint64_t seed = 0);

// Independent classical oracle: Tor_*^R(R/(f), R/(g)) down to homological
// degree pmax, via the Koszul complex when f is a certified regular sequence
// and an iterated-syzygy free resolution otherwise. Entirely on the
// polynomial side; shares nothing with the sheaf engine path.
struct TorOracleResult {
  bool used_koszul = false;
  std::map<int, ModPres> tor;   // p >= 0
  std::map<int, long long> kdim;
};
TorOracleResult koszul_tor_oracle(const PolyRingPtr& R, const std::vector<Poly>& f,
                                  const std::vector<Poly>& g, int pmax);

struct AffineComparison {
  bool ok = false;
  std::vector<std::string> diagnostics;
};

// One-point space: resolve A/(gens) with the engine, register the classical
// Koszul resolution by hand, and confirm the Ore square closes.
AffineComparison one_point_affine_comparison(const DgRingPtr& A,
                                             const std::vector<GPoly>& ideal_gens, int q_max,
                                             uint64_t seed = 0);

struct CotangentReport {
  CohomologyReport report;
  bool experimental = true;
  ResolutionStage resolution;
  // presentations over the structure stalk's P0, per point index and degree
  std::map<std::pair<size_t, int>, ModPres> presentations;
};

// Experimental: L = O_X (x)_A Omega^1 for a resolution A -> O_X over the
// constant sheaf; reports stalkwise cohomology of the resulting complex of
// free O_X-modules.
CotangentReport cotangent_complex(const RingedSpace& X, int q_max, int wmin, int wmax,
                                  uint64_t seed = 0);

}  // namespace dgsheaf
