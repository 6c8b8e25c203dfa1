#include "dgsheaf/poly.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace dgsheaf {

int MonoOrder::cmp(const Mono& a, const Mono& b) const {
  if (a == b) return 0;
  if (!elim_mask.empty()) {
    uint32_t da = 0, db = 0;
    for (size_t i = 0; i < a.size(); ++i)
      if (elim_mask[i]) {
        da += a[i];
        db += b[i];
      }
    if (da != db) return da < db ? -1 : 1;
  }
  if (kind == OrderKind::lex) {
    for (size_t i = 0; i < a.size(); ++i)
      if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
    return 0;
  }
  // graded reverse lex
  uint32_t da = mono_total_degree(a), db = mono_total_degree(b);
  if (da != db) return da < db ? -1 : 1;
  for (size_t i = a.size(); i-- > 0;) {
    if (a[i] != b[i]) return a[i] > b[i] ? -1 : 1;
  }
  return 0;
}

PolyRingPtr PolyRing::make(Field f, std::vector<std::string> vars, MonoOrder order) {
  if (!order.elim_mask.empty() && order.elim_mask.size() != vars.size())
    throw std::invalid_argument("PolyRing: elimination mask size mismatch");
  return PolyRingPtr(new PolyRing(std::move(f), std::move(vars), std::move(order)));
}

int PolyRing::var_index(const std::string& name) const {
  for (size_t i = 0; i < vars_.size(); ++i)
    if (vars_[i] == name) return static_cast<int>(i);
  return -1;
}

bool mono_divides(const Mono& a, const Mono& b) {
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

Mono mono_mul(const Mono& a, const Mono& b) {
  Mono r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

Mono mono_div(const Mono& b, const Mono& a) {
  Mono r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = b[i] - a[i];
  return r;
}

Mono mono_lcm(const Mono& a, const Mono& b) {
  Mono r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = std::max(a[i], b[i]);
  return r;
}

uint32_t mono_total_degree(const Mono& m) {
  uint32_t d = 0;
  for (uint32_t e : m) d += e;
  return d;
}

std::string mono_to_string(const Mono& m, const std::vector<std::string>& vars) {
  std::string s;
  for (size_t i = 0; i < m.size(); ++i) {
    if (m[i] == 0) continue;
    if (!s.empty()) s += "*";
    s += vars[i];
    if (m[i] > 1) s += "^" + std::to_string(m[i]);
  }
  return s.empty() ? "1" : s;
}

Poly Poly::constant(const PolyRingPtr& ring, const Fq& c) {
  Poly p(ring);
  if (!c.is_zero()) p.terms_.push_back({Mono(ring->nvars(), 0), c});
  return p;
}

Poly Poly::variable(const PolyRingPtr& ring, size_t idx, uint32_t exp) {
  if (idx >= ring->nvars()) throw std::out_of_range("Poly::variable");
  Poly p(ring);
  if (exp == 0) return constant(ring, Fq::one(ring->field()));
  Mono m(ring->nvars(), 0);
  m[idx] = exp;
  p.terms_.push_back({std::move(m), Fq::one(ring->field())});
  return p;
}

Poly Poly::from_terms(const PolyRingPtr& ring, std::vector<Term> terms) {
  std::map<Mono, Fq> acc;
  for (auto& t : terms) {
    if (t.mono.size() != ring->nvars()) throw std::invalid_argument("Poly: bad monomial size");
    auto it = acc.find(t.mono);
    if (it == acc.end())
      acc.emplace(std::move(t.mono), t.coeff);
    else
      it->second = it->second + t.coeff;
  }
  Poly p(ring);
  for (auto& [m, c] : acc)
    if (!c.is_zero()) p.terms_.push_back({m, c});
  std::sort(p.terms_.begin(), p.terms_.end(), [&](const Term& a, const Term& b) {
    return ring->order().cmp(a.mono, b.mono) > 0;
  });
  return p;
}

const Term& Poly::lead() const {
  if (terms_.empty()) throw std::logic_error("Poly::lead on zero");
  return terms_.front();
}

void Poly::check_ring(const Poly& o) const {
  if (!ring_ || !o.ring_ || !ring_->compatible(*o.ring_))
    throw std::logic_error("Poly: ring mismatch");
}

Poly Poly::operator+(const Poly& o) const {
  check_ring(o);
  std::vector<Term> merged;
  merged.reserve(terms_.size() + o.terms_.size());
  size_t i = 0, j = 0;
  const auto& ord = ring_->order();
  while (i < terms_.size() || j < o.terms_.size()) {
    if (i == terms_.size()) {
      merged.push_back(o.terms_[j++]);
    } else if (j == o.terms_.size()) {
      merged.push_back(terms_[i++]);
    } else {
      int c = ord.cmp(terms_[i].mono, o.terms_[j].mono);
      if (c > 0) {
        merged.push_back(terms_[i++]);
      } else if (c < 0) {
        merged.push_back(o.terms_[j++]);
      } else {
        Fq s = terms_[i].coeff + o.terms_[j].coeff;
        if (!s.is_zero()) merged.push_back({terms_[i].mono, s});
        ++i;
        ++j;
      }
    }
  }
  Poly r(ring_);
  r.terms_ = std::move(merged);
  return r;
}

Poly Poly::operator-() const {
  Poly r(ring_);
  r.terms_.reserve(terms_.size());
  for (const auto& t : terms_) r.terms_.push_back({t.mono, -t.coeff});
  return r;
}

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly Poly::scaled(const Fq& c) const {
  if (c.is_zero()) return Poly(ring_);
  Poly r(ring_);
  r.terms_.reserve(terms_.size());
  for (const auto& t : terms_) r.terms_.push_back({t.mono, t.coeff * c});
  return r;
}

Poly Poly::mul_term(const Mono& m, const Fq& c) const {
  if (c.is_zero()) return Poly(ring_);
  Poly r(ring_);
  r.terms_.reserve(terms_.size());
  for (const auto& t : terms_) r.terms_.push_back({mono_mul(t.mono, m), t.coeff * c});
  return r;
}

Poly Poly::operator*(const Poly& o) const {
  check_ring(o);
  std::map<Mono, Fq> acc;
  for (const auto& a : terms_)
    for (const auto& b : o.terms_) {
      Mono m = mono_mul(a.mono, b.mono);
      Fq c = a.coeff * b.coeff;
      auto it = acc.find(m);
      if (it == acc.end())
        acc.emplace(std::move(m), c);
      else
        it->second = it->second + c;
    }
  std::vector<Term> terms;
  terms.reserve(acc.size());
  for (auto& [m, c] : acc)
    if (!c.is_zero()) terms.push_back({m, c});
  std::sort(terms.begin(), terms.end(), [&](const Term& a, const Term& b) {
    return ring_->order().cmp(a.mono, b.mono) > 0;
  });
  Poly r(ring_);
  r.terms_ = std::move(terms);
  return r;
}

bool Poly::operator==(const Poly& o) const {
  check_ring(o);
  if (terms_.size() != o.terms_.size()) return false;
  for (size_t i = 0; i < terms_.size(); ++i)
    if (terms_[i].mono != o.terms_[i].mono || terms_[i].coeff != o.terms_[i].coeff) return false;
  return true;
}

int Poly::total_degree() const {
  int d = -1;
  for (const auto& t : terms_) d = std::max(d, static_cast<int>(mono_total_degree(t.mono)));
  return d;
}

Poly Poly::monic() const {
  if (is_zero()) return *this;
  return scaled(lead().coeff.inv());
}

std::string Poly::to_string() const {
  if (terms_.empty()) return "0";
  std::string s;
  for (size_t i = 0; i < terms_.size(); ++i) {
    const auto& t = terms_[i];
    std::string c = t.coeff.to_string();
    std::string m = mono_to_string(t.mono, ring_->vars());
    bool neg = !c.empty() && c[0] == '-';
    if (i == 0) {
      // keep sign on the coefficient
    } else {
      s += neg ? " - " : " + ";
      if (neg) c = c.substr(1);
    }
    if (m == "1") {
      s += c;
    } else if (c == "1") {
      s += m;
    } else if (c == "-1" && i == 0) {
      s += "-" + m;
    } else {
      s += c + "*" + m;
    }
  }
  return s;
}

}  // namespace dgsheaf
