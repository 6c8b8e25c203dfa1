#include "dgsheaf/bigint.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

namespace dgsheaf {

namespace {
constexpr uint64_t kBase = 1ull << 32;

bool add_overflows(long long a, long long b, long long& out) {
  return __builtin_add_overflow(a, b, &out);
}
bool sub_overflows(long long a, long long b, long long& out) {
  return __builtin_sub_overflow(a, b, &out);
}
bool mul_overflows(long long a, long long b, long long& out) {
  return __builtin_mul_overflow(a, b, &out);
}

std::vector<uint32_t> limbs_of_u64(unsigned long long m) {
  std::vector<uint32_t> l;
  while (m) {
    l.push_back(static_cast<uint32_t>(m & 0xffffffffull));
    m >>= 32;
  }
  return l;
}

unsigned long long mag_of_ll(long long v) {
  return v < 0 ? ~static_cast<unsigned long long>(v) + 1ull : static_cast<unsigned long long>(v);
}

}  // namespace

BigInt BigInt::make_big(bool neg, std::vector<uint32_t> limbs) {
  BigInt r;
  while (!limbs.empty() && limbs.back() == 0) limbs.pop_back();
  r.big_ = true;
  r.neg_ = !limbs.empty() && neg;
  r.limbs_ = std::move(limbs);
  r.demote();
  return r;
}

void BigInt::promote() {
  if (big_) return;
  neg_ = small_ < 0;
  limbs_ = limbs_of_u64(mag_of_ll(small_));
  big_ = true;
  small_ = 0;
}

void BigInt::demote() {
  if (!big_) return;
  if (limbs_.size() > 2) return;
  unsigned long long m = 0;
  if (limbs_.size() >= 1) m = limbs_[0];
  if (limbs_.size() == 2) m |= static_cast<unsigned long long>(limbs_[1]) << 32;
  if (!neg_ && m <= 0x7fffffffffffffffull) {
    small_ = static_cast<long long>(m);
  } else if (neg_ && m <= 0x8000000000000000ull) {
    small_ = -static_cast<long long>(m - 1) - 1;
  } else {
    return;
  }
  big_ = false;
  neg_ = false;
  limbs_.clear();
}

int BigInt::cmp_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  for (size_t i = a.size(); i-- > 0;) {
    if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
  }
  return 0;
}

std::vector<uint32_t> BigInt::add_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
  std::vector<uint32_t> r;
  r.reserve(std::max(a.size(), b.size()) + 1);
  uint64_t carry = 0;
  for (size_t i = 0; i < std::max(a.size(), b.size()); ++i) {
    uint64_t s = carry;
    if (i < a.size()) s += a[i];
    if (i < b.size()) s += b[i];
    r.push_back(static_cast<uint32_t>(s & 0xffffffffull));
    carry = s >> 32;
  }
  if (carry) r.push_back(static_cast<uint32_t>(carry));
  return r;
}

std::vector<uint32_t> BigInt::sub_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
  std::vector<uint32_t> r;
  r.reserve(a.size());
  int64_t borrow = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    int64_t s = static_cast<int64_t>(a[i]) - borrow - (i < b.size() ? static_cast<int64_t>(b[i]) : 0);
    if (s < 0) {
      s += static_cast<int64_t>(kBase);
      borrow = 1;
    } else {
      borrow = 0;
    }
    r.push_back(static_cast<uint32_t>(s));
  }
  while (!r.empty() && r.back() == 0) r.pop_back();
  return r;
}

std::vector<uint32_t> BigInt::mul_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
  if (a.empty() || b.empty()) return {};
  std::vector<uint32_t> r(a.size() + b.size(), 0);
  for (size_t i = 0; i < a.size(); ++i) {
    uint64_t carry = 0;
    for (size_t j = 0; j < b.size(); ++j) {
      uint64_t cur = static_cast<uint64_t>(a[i]) * b[j] + r[i + j] + carry;
      r[i + j] = static_cast<uint32_t>(cur & 0xffffffffull);
      carry = cur >> 32;
    }
    size_t k = i + b.size();
    while (carry) {
      uint64_t cur = r[k] + carry;
      r[k] = static_cast<uint32_t>(cur & 0xffffffffull);
      carry = cur >> 32;
      ++k;
    }
  }
  while (!r.empty() && r.back() == 0) r.pop_back();
  return r;
}

// Knuth algorithm D with base 2^32.
void BigInt::divmod_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b,
                        std::vector<uint32_t>& q, std::vector<uint32_t>& r) {
  q.clear();
  r.clear();
  if (b.empty()) throw std::domain_error("BigInt: division by zero");
  if (cmp_mag(a, b) < 0) {
    r = a;
    return;
  }
  if (b.size() == 1) {
    uint64_t d = b[0];
    uint64_t rem = 0;
    q.assign(a.size(), 0);
    for (size_t i = a.size(); i-- > 0;) {
      uint64_t cur = (rem << 32) | a[i];
      q[i] = static_cast<uint32_t>(cur / d);
      rem = cur % d;
    }
    while (!q.empty() && q.back() == 0) q.pop_back();
    if (rem) r.push_back(static_cast<uint32_t>(rem));
    return;
  }

  // Normalize so the divisor's top limb has its high bit set.
  int shift = 0;
  {
    uint32_t top = b.back();
    while (!(top & 0x80000000u)) {
      top <<= 1;
      ++shift;
    }
  }
  auto shl = [&](const std::vector<uint32_t>& v) {
    std::vector<uint32_t> out(v.size() + 1, 0);
    for (size_t i = 0; i < v.size(); ++i) {
      out[i] |= static_cast<uint32_t>((static_cast<uint64_t>(v[i]) << shift) & 0xffffffffull);
      if (shift) out[i + 1] = static_cast<uint32_t>(static_cast<uint64_t>(v[i]) >> (32 - shift));
    }
    while (!out.empty() && out.back() == 0) out.pop_back();
    return out;
  };
  std::vector<uint32_t> u = shl(a);
  std::vector<uint32_t> v = shl(b);
  size_t n = v.size(), m = u.size() - n;
  u.resize(u.size() + 1, 0);
  q.assign(m + 1, 0);

  for (size_t j = m + 1; j-- > 0;) {
    uint64_t num = (static_cast<uint64_t>(u[j + n]) << 32) | u[j + n - 1];
    uint64_t qhat = num / v[n - 1];
    uint64_t rhat = num % v[n - 1];
    while (qhat >= kBase ||
           qhat * v[n - 2] > ((rhat << 32) | u[j + n - 2])) {
      --qhat;
      rhat += v[n - 1];
      if (rhat >= kBase) break;
    }
    int64_t borrow = 0;
    uint64_t carry = 0;
    for (size_t i = 0; i < n; ++i) {
      uint64_t p = qhat * v[i] + carry;
      carry = p >> 32;
      int64_t t = static_cast<int64_t>(u[i + j]) - static_cast<int64_t>(p & 0xffffffffull) - borrow;
      if (t < 0) {
        t += static_cast<int64_t>(kBase);
        borrow = 1;
      } else {
        borrow = 0;
      }
      u[i + j] = static_cast<uint32_t>(t);
    }
    int64_t t = static_cast<int64_t>(u[j + n]) - static_cast<int64_t>(carry) - borrow;
    if (t < 0) {
      t += static_cast<int64_t>(kBase);
      --qhat;
      uint64_t c2 = 0;
      for (size_t i = 0; i < n; ++i) {
        uint64_t s = static_cast<uint64_t>(u[i + j]) + v[i] + c2;
        u[i + j] = static_cast<uint32_t>(s & 0xffffffffull);
        c2 = s >> 32;
      }
      t += static_cast<int64_t>(c2);
    }
    u[j + n] = static_cast<uint32_t>(t);
    q[j] = static_cast<uint32_t>(qhat);
  }
  while (!q.empty() && q.back() == 0) q.pop_back();

  u.resize(n);
  r.assign(n, 0);
  if (shift) {
    for (size_t i = 0; i < n; ++i) {
      r[i] = u[i] >> shift;
      if (i + 1 < n) r[i] |= static_cast<uint32_t>((static_cast<uint64_t>(u[i + 1]) << (32 - shift)) & 0xffffffffull);
    }
  } else {
    r = u;
  }
  while (!r.empty() && r.back() == 0) r.pop_back();
}

BigInt BigInt::operator-() const {
  if (!big_) {
    if (small_ != (-0x7fffffffffffffffLL - 1)) return BigInt(-small_);
    BigInt r = *this;
    r.promote();
    r.neg_ = !r.neg_;
    return r;
  }
  BigInt r = *this;
  if (!r.limbs_.empty()) r.neg_ = !r.neg_;
  r.demote();
  return r;
}

BigInt BigInt::operator+(const BigInt& o) const {
  if (!big_ && !o.big_) {
    long long s;
    if (!add_overflows(small_, o.small_, s)) return BigInt(s);
  }
  BigInt a = *this, b = o;
  a.promote();
  b.promote();
  if (a.neg_ == b.neg_) return make_big(a.neg_, add_mag(a.limbs_, b.limbs_));
  int c = cmp_mag(a.limbs_, b.limbs_);
  if (c == 0) return BigInt();
  if (c > 0) return make_big(a.neg_, sub_mag(a.limbs_, b.limbs_));
  return make_big(b.neg_, sub_mag(b.limbs_, a.limbs_));
}

BigInt BigInt::operator-(const BigInt& o) const {
  if (!big_ && !o.big_) {
    long long s;
    if (!sub_overflows(small_, o.small_, s)) return BigInt(s);
  }
  return *this + (-o);
}

BigInt BigInt::operator*(const BigInt& o) const {
  if (!big_ && !o.big_) {
    long long s;
    if (!mul_overflows(small_, o.small_, s)) return BigInt(s);
  }
  BigInt a = *this, b = o;
  a.promote();
  b.promote();
  return make_big(a.neg_ != b.neg_, mul_mag(a.limbs_, b.limbs_));
}

void BigInt::divmod(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r) {
  if (!a.big_ && !b.big_) {
    if (b.small_ == 0) throw std::domain_error("BigInt: division by zero");
    if (!(a.small_ == (-0x7fffffffffffffffLL - 1) && b.small_ == -1)) {
      q = BigInt(a.small_ / b.small_);
      r = BigInt(a.small_ % b.small_);
      return;
    }
  }
  BigInt aa = a, bb = b;
  aa.promote();
  bb.promote();
  std::vector<uint32_t> qm, rm;
  divmod_mag(aa.limbs_, bb.limbs_, qm, rm);
  q = make_big(aa.neg_ != bb.neg_, std::move(qm));
  r = make_big(aa.neg_, std::move(rm));
}

BigInt BigInt::operator/(const BigInt& o) const {
  BigInt q, r;
  divmod(*this, o, q, r);
  return q;
}

BigInt BigInt::operator%(const BigInt& o) const {
  BigInt q, r;
  divmod(*this, o, q, r);
  return r;
}

int BigInt::cmp(const BigInt& a, const BigInt& b) {
  if (!a.big_ && !b.big_) return a.small_ < b.small_ ? -1 : (a.small_ > b.small_ ? 1 : 0);
  BigInt aa = a, bb = b;
  aa.promote();
  bb.promote();
  bool an = aa.neg_ && !aa.limbs_.empty();
  bool bn = bb.neg_ && !bb.limbs_.empty();
  if (an != bn) return an ? -1 : 1;
  int c = cmp_mag(aa.limbs_, bb.limbs_);
  return an ? -c : c;
}

BigInt BigInt::abs() const { return is_negative() ? -*this : *this; }

BigInt BigInt::gcd(BigInt a, BigInt b) {
  if (!a.big_ && !b.big_) {
    unsigned long long x = mag_of_ll(a.small_), y = mag_of_ll(b.small_);
    while (y) {
      unsigned long long t = x % y;
      x = y;
      y = t;
    }
    if (x <= 0x7fffffffffffffffull) return BigInt(static_cast<long long>(x));
  }
  a = a.abs();
  b = b.abs();
  while (!b.is_zero()) {
    BigInt q, r;
    divmod(a, b, q, r);
    a = b;
    b = r;
  }
  return a;
}

BigInt BigInt::from_string(const std::string& s) {
  BigInt r;
  size_t i = 0;
  bool neg = false;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
    neg = s[i] == '-';
    ++i;
  }
  if (i == s.size()) throw std::invalid_argument("BigInt: empty numeral");
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') throw std::invalid_argument("BigInt: bad digit");
    r = r * BigInt(10) + BigInt(s[i] - '0');
  }
  return neg ? -r : r;
}

std::string BigInt::to_string() const {
  if (!big_) return std::to_string(small_);
  if (limbs_.empty()) return "0";
  std::vector<uint32_t> mag = limbs_;
  std::string digits;
  while (!mag.empty()) {
    uint64_t rem = 0;
    for (size_t i = mag.size(); i-- > 0;) {
      uint64_t cur = (rem << 32) | mag[i];
      mag[i] = static_cast<uint32_t>(cur / 1000000000ull);
      rem = cur % 1000000000ull;
    }
    while (!mag.empty() && mag.back() == 0) mag.pop_back();
    for (int k = 0; k < 9; ++k) {
      digits.push_back(static_cast<char>('0' + rem % 10));
      rem /= 10;
    }
  }
  while (digits.size() > 1 && digits.back() == '0') digits.pop_back();
  if (neg_) digits.push_back('-');
  std::reverse(digits.begin(), digits.end());
  return digits;
}

bool BigInt::fits_int64(long long& out) const {
  if (!big_) {
    out = small_;
    return true;
  }
  if (limbs_.size() > 2) return false;
  unsigned long long m = 0;
  if (limbs_.size() >= 1) m = limbs_[0];
  if (limbs_.size() == 2) m |= static_cast<unsigned long long>(limbs_[1]) << 32;
  if (!neg_) {
    if (m > 0x7fffffffffffffffull) return false;
    out = static_cast<long long>(m);
  } else {
    if (m > 0x8000000000000000ull) return false;
    out = -static_cast<long long>(m - 1) - 1;
  }
  return true;
}

}  // namespace dgsheaf
