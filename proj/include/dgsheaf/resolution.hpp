#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dgsheaf/homology.hpp"

namespace dgsheaf {

struct CertItem {
  std::string point;
  int degree = 0;
  std::string condition;  // "phi-surjective" | "B(phi)-surjective" | "H-surjective" | "H-bijective"
  bool pass = true;
};

struct Certificate {
  bool pass = true;
  std::vector<CertItem> items;
  std::optional<CertItem> first_failure() const {
    for (const auto& it : items)
      if (!it.pass) return it;
    return std::nullopt;
  }
};

// Truncated resolution tower F_q with its map to the target and the
// stage-q certificate of the surjectivity/bijectivity conditions.
struct ResolutionStage {
  DgRingPtr base;
  DgRingPtr target;
  DgRingPtr ring;  // relation-free over base
  SheafHom phi;
  int q = 0;
  uint64_t seed = 0;
  Certificate certificate;
};

// Builds the stage tower: degree-0 mirrors and degree -1 pairs at stage 0,
// then per stage q >= 1 cycle-killing generators for ker H^{-q+1}(phi),
// closed cocycle-hitting generators for Z^{-q}(target), and surjectivity
// pairs for the degree -(q+1) monomials. Seed permutes the candidate order
// of the negative-degree families (named generators stay stable in degree 0
// so reports remain comparable across seeds).
ResolutionStage resolve(const DgRingPtr& target, const DgRingPtr& base, int q_max,
                        uint64_t seed = 0);

// Recomputes both certificate conditions from scratch, independent of the
// bookkeeping used while the tower was built.
Certificate certify(const ResolutionStage& stage);

// componentwise surjectivity of phi in degrees [wmin, 0], stalkwise
bool component_surjective(const SheafHom& phi, int wmin, std::string* where = nullptr);

struct Factorization {
  DgRingPtr aplus;
  SheafHom eta;      // A -> A+, split acyclic pseudo-semi-free
  SheafHom eps;      // A+ -> A, retraction with eps . eta = id
  SheafHom phiplus;  // A+ -> B, surjective in-window quasi-isomorphism
  GeneratorSpec cspec;        // adjoined pair generators
  DgRingPtr contractible;     // standalone copy of the pair ring over K_X
  bool trivial = false;       // phi was already surjective in the window
  std::vector<std::string> checks;  // failed verifications, empty when sound
};

// phi = phiplus . eta with eta split acyclic pseudo-semi-free and phiplus a
// surjective quasi-isomorphism; throws if phi is not a window quasi-iso.
Factorization factorize(const SheafHom& phi, int wmin, uint64_t seed = 0);

struct FiberProduct {
  DgRingPtr ring;  // window presentation of the strict fiber product
  SheafHom p0;
  SheafHom p1;
  std::vector<std::string> checks;  // failed verifications, empty when sound
};

// Strict fiber product of two homs with common target, presented by paired
// generators and window relations. Requires both maps surjective
// componentwise in [wmin, 0].
FiberProduct fiber_product(const SheafHom& phi0, const SheafHom& phi1, int wmin);

struct OreSquare {
  DgRingPtr ring;  // B~'
  SheafHom psi0;
  SheafHom psi1;
  bool composites_equal = false;
  QisoResult qiso0, qiso1;
  Certificate certificate;  // of the internal resolution
};

// Closes the square over two in-window-surjective quasi-isomorphisms with
// exact equality phi0 . psi0 = phi1 . psi1 (factorize non-surjective inputs
// first; the fiber-product route needs surjectivity).
OreSquare ore_square(const SheafHom& phi0, const SheafHom& phi1, int q_max, uint64_t seed = 0);

struct HomotopyWitness {
  DgRingPtr bplus;
  SheafHom eta;  // B (x)_A B -> B+
  SheafHom eps;  // B+ -> B
  SheafHom phi;  // B+ -> C
};

struct WitnessCheck {
  bool ok = true;
  std::vector<std::string> diagnostics;
};

// Verifies the two commuting triangles on the tensor-square generators and
// that eps is a window quasi-isomorphism.
WitnessCheck check_homotopy_witness(const HomotopyWitness& w, const SheafHom& phi0,
                                    const SheafHom& phi1, const TensorResult& square, int wmin);

// Composes with psi and delegates; additionally requires psi to be a window
// quasi-isomorphism. The square argument is the tensor square of psi's
// source.
WitnessCheck check_quasi_homotopy_witness(const SheafHom& psi, const HomotopyWitness& w,
                                          const SheafHom& phi0, const SheafHom& phi1,
                                          const TensorResult& square, int wmin);

}  // namespace dgsheaf
