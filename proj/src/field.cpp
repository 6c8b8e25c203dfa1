#include "dgsheaf/field.hpp"

namespace dgsheaf {

bool is_prime_u64(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

Field Field::Fp(uint64_t prime) {
  if (prime >= (1ull << 31) || !is_prime_u64(prime))
    throw std::invalid_argument("Field: modulus must be a prime below 2^31");
  Field f;
  f.kind = Kind::prime;
  f.p = prime;
  return f;
}

std::string Field::describe() const {
  return kind == Kind::rationals ? "Q" : "F" + std::to_string(p);
}

uint64_t fp_inv(uint64_t a, uint64_t p) {
  if (a == 0) throw std::domain_error("F_p: division by zero");
  // extended Euclid
  int64_t t = 0, newt = 1;
  int64_t r = static_cast<int64_t>(p), newr = static_cast<int64_t>(a % p);
  while (newr != 0) {
    int64_t q = r / newr;
    int64_t tmp = t - q * newt;
    t = newt;
    newt = tmp;
    tmp = r - q * newr;
    r = newr;
    newr = tmp;
  }
  if (t < 0) t += static_cast<int64_t>(p);
  return static_cast<uint64_t>(t);
}

Fq Fq::of_int(const Field& f, long long v) {
  Fq x;
  x.field_ = f;
  if (f.kind == Field::Kind::rationals) {
    x.num_ = BigInt(v);
    x.den_ = BigInt(1);
  } else {
    long long m = v % static_cast<long long>(f.p);
    if (m < 0) m += static_cast<long long>(f.p);
    x.rep_ = static_cast<uint64_t>(m);
  }
  return x;
}

Fq Fq::of_ratio(const Field& f, const BigInt& num, const BigInt& den) {
  if (den.is_zero()) throw std::domain_error("Fq: zero denominator");
  Fq x;
  x.field_ = f;
  if (f.kind == Field::Kind::rationals) {
    x.num_ = num;
    x.den_ = den;
    x.normalize();
  } else {
    BigInt p(static_cast<long long>(f.p));
    long long n = 0, d = 0;
    (num % p).fits_int64(n);
    (den % p).fits_int64(d);
    if (n < 0) n += static_cast<long long>(f.p);
    if (d < 0) d += static_cast<long long>(f.p);
    if (d == 0) throw std::domain_error("Fq: denominator vanishes mod p");
    x.rep_ = (static_cast<uint64_t>(n) * fp_inv(static_cast<uint64_t>(d), f.p)) % f.p;
  }
  return x;
}

void Fq::normalize() {
  if (field_.kind != Field::Kind::rationals) return;
  if (num_.is_zero()) {
    den_ = BigInt(1);
    return;
  }
  if (den_.is_negative()) {
    num_ = -num_;
    den_ = -den_;
  }
  BigInt g = BigInt::gcd(num_, den_);
  if (g != BigInt(1)) {
    num_ = num_ / g;
    den_ = den_ / g;
  }
}

void Fq::check_same(const Fq& o) const {
  if (field_ != o.field_) throw std::logic_error("Fq: mixed fields");
}

bool Fq::is_zero() const {
  return field_.kind == Field::Kind::rationals ? num_.is_zero() : rep_ == 0;
}

bool Fq::is_one() const {
  return field_.kind == Field::Kind::rationals ? (num_ == BigInt(1) && den_ == BigInt(1)) : rep_ == 1;
}

Fq Fq::operator+(const Fq& o) const {
  check_same(o);
  Fq r;
  r.field_ = field_;
  if (field_.kind == Field::Kind::rationals) {
    r.num_ = num_ * o.den_ + o.num_ * den_;
    r.den_ = den_ * o.den_;
    r.normalize();
  } else {
    r.rep_ = (rep_ + o.rep_) % field_.p;
  }
  return r;
}

Fq Fq::operator-(const Fq& o) const { return *this + (-o); }

Fq Fq::operator*(const Fq& o) const {
  check_same(o);
  Fq r;
  r.field_ = field_;
  if (field_.kind == Field::Kind::rationals) {
    r.num_ = num_ * o.num_;
    r.den_ = den_ * o.den_;
    r.normalize();
  } else {
    r.rep_ = (rep_ * o.rep_) % field_.p;
  }
  return r;
}

Fq Fq::operator/(const Fq& o) const { return *this * o.inv(); }

Fq Fq::operator-() const {
  Fq r = *this;
  if (field_.kind == Field::Kind::rationals) {
    r.num_ = -r.num_;
  } else if (r.rep_ != 0) {
    r.rep_ = field_.p - r.rep_;
  }
  return r;
}

Fq Fq::inv() const {
  if (is_zero()) throw std::domain_error("Fq: division by zero");
  Fq r;
  r.field_ = field_;
  if (field_.kind == Field::Kind::rationals) {
    r.num_ = den_;
    r.den_ = num_;
    r.normalize();
  } else {
    r.rep_ = fp_inv(rep_, field_.p);
  }
  return r;
}

bool Fq::operator==(const Fq& o) const {
  check_same(o);
  if (field_.kind == Field::Kind::rationals) return num_ == o.num_ && den_ == o.den_;
  return rep_ == o.rep_;
}

std::string Fq::to_string() const {
  if (field_.kind == Field::Kind::rationals) {
    if (den_ == BigInt(1)) return num_.to_string();
    return num_.to_string() + "/" + den_.to_string();
  }
  return std::to_string(rep_);
}

}  // namespace dgsheaf
