#pragma once

#include <string>
#include <vector>

#include "dgsheaf/modules.hpp"
#include "dgsheaf/poly.hpp"

namespace dgsheaf {

// Reduced Groebner basis: generators monic, tail-reduced, sorted by lead
// descending in the ring order.
struct GroebnerBasis {
  PolyRingPtr ring;
  std::vector<Poly> gens;

  bool contains(const Poly& f) const;
  static GroebnerBasis trivial(const PolyRingPtr& ring) { return {ring, {}}; }
};

GroebnerBasis buchberger(const PolyRingPtr& ring, std::vector<Poly> gens);
Poly normal_form(const Poly& f, const GroebnerBasis& gb);

bool ideal_equal(const GroebnerBasis& a, const GroebnerBasis& b);
// (A : f) = { p : p*f in A }
std::vector<Poly> ideal_quotient(const GroebnerBasis& a, const Poly& f);

// Kernel generators of the map (R/G)^s -> (R/G)^r given by the columns.
std::vector<ModVec> syzygy_kernel(const PolyRingPtr& ring,
                                  const std::vector<ModVec>& columns,
                                  size_t target_rank,
                                  const GroebnerBasis& ambient);

// Recursive-descent parser for the problem-file polynomial grammar:
// identifiers, integer and a/b rational literals, ^ * + - and parentheses.
// Throws std::invalid_argument with a position on bad input.
Poly parse_poly(const PolyRingPtr& ring, const std::string& text);

}  // namespace dgsheaf
