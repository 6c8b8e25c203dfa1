#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "dgsheaf/bigint.hpp"

namespace dgsheaf {

// Coefficient field: Q or F_p, p an odd-sized prime < 2^31. All engine
// arithmetic is exact; there is no floating point anywhere.
struct Field {
  enum class Kind { rationals, prime };
  Kind kind = Kind::rationals;
  uint64_t p = 0;

  static Field Q() { return Field{}; }
  static Field Fp(uint64_t prime);

  bool operator==(const Field& o) const { return kind == o.kind && p == o.p; }
  bool operator!=(const Field& o) const { return !(*this == o); }
  std::string describe() const;
};

// A field element. Carries its field tag so mixed-field bugs surface as
// exceptions instead of wrong answers.
class Fq {
public:
  Fq() = default;
  static Fq zero(const Field& f) { return of_int(f, 0); }
  static Fq one(const Field& f) { return of_int(f, 1); }
  static Fq of_int(const Field& f, long long v);
  static Fq of_ratio(const Field& f, const BigInt& num, const BigInt& den);

  const Field& field() const { return field_; }
  bool is_zero() const;
  bool is_one() const;

  Fq operator+(const Fq& o) const;
  Fq operator-(const Fq& o) const;
  Fq operator*(const Fq& o) const;
  Fq operator/(const Fq& o) const;
  Fq operator-() const;
  Fq inv() const;

  bool operator==(const Fq& o) const;
  bool operator!=(const Fq& o) const { return !(*this == o); }

  // Canonical text form: "n" or "n/d" over Q, residue over F_p.
  std::string to_string() const;

private:
  Field field_;
  BigInt num_{0};   // reduced, den_ > 0 (Q only)
  BigInt den_{1};
  uint64_t rep_ = 0;  // F_p only

  void normalize();
  void check_same(const Fq& o) const;
};

uint64_t fp_inv(uint64_t a, uint64_t p);
bool is_prime_u64(uint64_t n);

}  // namespace dgsheaf
