#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace dgsheaf {

// Arbitrary-precision signed integer. Values fitting in int64 stay inline;
// only genuine coefficient growth promotes to base-2^32 limbs. Rational
// Groebner runs live and die by this fast path.
class BigInt {
public:
  BigInt() = default;
  BigInt(long long v) : small_(v) {}
  static BigInt from_string(const std::string& s);

  bool is_zero() const { return big_ ? limbs_.empty() : small_ == 0; }
  bool is_negative() const { return big_ ? neg_ : small_ < 0; }
  int sign() const { return is_zero() ? 0 : (is_negative() ? -1 : 1); }

  BigInt operator-() const;
  BigInt operator+(const BigInt& o) const;
  BigInt operator-(const BigInt& o) const;
  BigInt operator*(const BigInt& o) const;
  // Truncated division (C semantics): quotient rounds toward zero,
  // remainder has the sign of the dividend.
  BigInt operator/(const BigInt& o) const;
  BigInt operator%(const BigInt& o) const;
  static void divmod(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r);

  bool operator==(const BigInt& o) const { return cmp(*this, o) == 0; }
  bool operator!=(const BigInt& o) const { return cmp(*this, o) != 0; }
  bool operator<(const BigInt& o) const { return cmp(*this, o) < 0; }
  bool operator<=(const BigInt& o) const { return cmp(*this, o) <= 0; }
  bool operator>(const BigInt& o) const { return cmp(*this, o) > 0; }
  bool operator>=(const BigInt& o) const { return cmp(*this, o) >= 0; }

  static int cmp(const BigInt& a, const BigInt& b);
  static BigInt gcd(BigInt a, BigInt b);   // nonnegative
  BigInt abs() const;

  std::string to_string() const;
  // Exact conversion; false if out of range.
  bool fits_int64(long long& out) const;

private:
  long long small_ = 0;
  bool big_ = false;
  bool neg_ = false;                 // big path only; false for zero
  std::vector<uint32_t> limbs_;      // big path only; no leading zeros

  void promote();                     // move small_ into limbs_
  void demote();                      // shrink back when it fits
  static BigInt make_big(bool neg, std::vector<uint32_t> limbs);

  static int cmp_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b);
  static std::vector<uint32_t> add_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b);
  // requires |a| >= |b|
  static std::vector<uint32_t> sub_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b);
  static std::vector<uint32_t> mul_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b);
  static void divmod_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b,
                         std::vector<uint32_t>& q, std::vector<uint32_t>& r);
};

}  // namespace dgsheaf
