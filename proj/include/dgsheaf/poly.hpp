#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "dgsheaf/field.hpp"

namespace dgsheaf {

// Exponent vector; length equals the ring's variable count.
using Mono = std::vector<uint32_t>;

enum class OrderKind { lex, grevlex };

// Monomial order, optionally an elimination order: variables flagged in
// elim_mask dominate (compare by total degree in those first). Needed for
// kernels along ring maps and ideal intersections.
struct MonoOrder {
  OrderKind kind = OrderKind::grevlex;
  std::vector<uint8_t> elim_mask;  // empty = no elimination block

  // returns -1, 0, 1 for a < b, a == b, a > b
  int cmp(const Mono& a, const Mono& b) const;
};

class PolyRing;
using PolyRingPtr = std::shared_ptr<const PolyRing>;

class PolyRing : public std::enable_shared_from_this<PolyRing> {
public:
  static PolyRingPtr make(Field f, std::vector<std::string> vars,
                          MonoOrder order = MonoOrder{});

  const Field& field() const { return field_; }
  const std::vector<std::string>& vars() const { return vars_; }
  size_t nvars() const { return vars_.size(); }
  const MonoOrder& order() const { return order_; }
  int var_index(const std::string& name) const;  // -1 if unknown

  // Same field, same variable list (order may differ). Identity of the ring
  // object short-circuits the comparison.
  bool compatible(const PolyRing& o) const {
    return this == &o || (field_ == o.field_ && vars_ == o.vars_);
  }

private:
  PolyRing(Field f, std::vector<std::string> vars, MonoOrder order)
      : field_(std::move(f)), vars_(std::move(vars)), order_(std::move(order)) {}
  Field field_;
  std::vector<std::string> vars_;
  MonoOrder order_;
};

struct Term {
  Mono mono;
  Fq coeff;
};

// Sparse polynomial, terms sorted descending in the ring order, no zero
// coefficients stored.
class Poly {
public:
  Poly() = default;
  explicit Poly(PolyRingPtr ring) : ring_(std::move(ring)) {}
  static Poly constant(const PolyRingPtr& ring, const Fq& c);
  static Poly variable(const PolyRingPtr& ring, size_t idx, uint32_t exp = 1);
  static Poly from_terms(const PolyRingPtr& ring, std::vector<Term> terms);

  const PolyRingPtr& ring() const { return ring_; }
  bool is_zero() const { return terms_.empty(); }
  const std::vector<Term>& terms() const { return terms_; }
  const Term& lead() const;

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly operator-() const;
  Poly scaled(const Fq& c) const;
  Poly mul_term(const Mono& m, const Fq& c) const;
  bool operator==(const Poly& o) const;
  bool operator!=(const Poly& o) const { return !(*this == o); }

  int total_degree() const;  // -1 for zero
  Poly monic() const;

  std::string to_string() const;

private:
  PolyRingPtr ring_;
  std::vector<Term> terms_;
  void check_ring(const Poly& o) const;
};

bool mono_divides(const Mono& a, const Mono& b);      // a | b
Mono mono_mul(const Mono& a, const Mono& b);
Mono mono_div(const Mono& b, const Mono& a);          // b / a, requires a | b
Mono mono_lcm(const Mono& a, const Mono& b);
uint32_t mono_total_degree(const Mono& m);
std::string mono_to_string(const Mono& m, const std::vector<std::string>& vars);

}  // namespace dgsheaf
