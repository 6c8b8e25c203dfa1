#include "dgsheaf/gpoly.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace dgsheaf {

int VarPool::add(const std::string& name, int degree, const OpenSet& support) {
  if (degree > 0) throw std::invalid_argument("VarPool: generator degree must be <= 0");
  if (by_name_.count(name)) throw std::invalid_argument("VarPool: duplicate generator name " + name);
  if (support.space.get() != space_.get())
    throw std::invalid_argument("VarPool: support from a different space");
  vars_.push_back({name, degree, support});
  int id = static_cast<int>(vars_.size()) - 1;
  by_name_[name] = id;
  return id;
}

int VarPool::find(const std::string& name) const {
  auto it = by_name_.find(name);
  return it == by_name_.end() ? -1 : it->second;
}

std::string VarPool::fresh_name(const std::string& stem) const {
  if (!by_name_.count(stem)) return stem;
  for (int k = 1;; ++k) {
    std::string cand = stem + "." + std::to_string(k);
    if (!by_name_.count(cand)) return cand;
  }
}

int GMono::degree() const {
  int d = 0;
  for (const auto& f : factors) d += f.exp * f.deg;
  return d;
}

GMono GMono::var(int id, int deg, int exp) {
  GMono m;
  if (exp > 0) m.factors.push_back({id, static_cast<int32_t>(exp), deg});
  return m;
}

GMulResult gmono_mul(const GMono& a, const GMono& b) {
  GMulResult r;
  // merge sorted factor lists; count odd-odd transpositions
  size_t i = 0, j = 0;
  long long inversions = 0;
  // odd factors of a that the current b-factor would jump over
  std::vector<int32_t> a_odd_vars;
  for (const auto& f : a.factors)
    if (f.deg % 2 != 0) a_odd_vars.push_back(f.var);

  while (i < a.factors.size() || j < b.factors.size()) {
    if (j == b.factors.size() || (i < a.factors.size() && a.factors[i].var <= b.factors[j].var)) {
      if (j < b.factors.size() && a.factors[i].var == b.factors[j].var) {
        const GFactor& fa = a.factors[i];
        const GFactor& fb = b.factors[j];
        if (fa.deg % 2 != 0) {
          r.zero = true;  // odd square
          return r;
        }
        r.mono.factors.push_back({fa.var, fa.exp + fb.exp, fa.deg});
        ++i;
        ++j;
      } else {
        r.mono.factors.push_back(a.factors[i]);
        ++i;
      }
    } else {
      const GFactor& fb = b.factors[j];
      if (fb.deg % 2 != 0) {
        // count odd a-factors strictly to the right of fb's slot
        long long cnt = 0;
        for (size_t k = i; k < a.factors.size(); ++k)
          if (a.factors[k].deg % 2 != 0) ++cnt;
        inversions += cnt;
      }
      r.mono.factors.push_back(fb);
      ++j;
    }
  }
  r.sign = (inversions % 2 == 0) ? 1 : -1;
  return r;
}

GPoly GPoly::constant(const Field& f, const Fq& c) {
  GPoly p(f);
  if (!c.is_zero()) p.terms_[GMono::one()] = c;
  return p;
}

GPoly GPoly::variable(const Field& f, int id, int deg) {
  GPoly p(f);
  p.terms_[GMono::var(id, deg)] = Fq::one(f);
  return p;
}

void GPoly::add_term(const GMono& m, const Fq& c) {
  if (c.is_zero()) return;
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    terms_.emplace(m, c);
  } else {
    it->second = it->second + c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

GPoly GPoly::operator+(const GPoly& o) const {
  GPoly r = *this;
  for (const auto& [m, c] : o.terms_) r.add_term(m, c);
  return r;
}

GPoly GPoly::operator-() const {
  GPoly r(field_);
  for (const auto& [m, c] : terms_) r.terms_[m] = -c;
  return r;
}

GPoly GPoly::operator-(const GPoly& o) const { return *this + (-o); }

GPoly GPoly::scaled(const Fq& c) const {
  GPoly r(field_);
  if (c.is_zero()) return r;
  for (const auto& [m, k] : terms_) r.terms_[m] = k * c;
  return r;
}

GPoly GPoly::operator*(const GPoly& o) const {
  GPoly r(field_);
  for (const auto& [ma, ca] : terms_)
    for (const auto& [mb, cb] : o.terms_) {
      GMulResult mr = gmono_mul(ma, mb);
      if (mr.zero) continue;
      Fq c = ca * cb;
      if (mr.sign < 0) c = -c;
      r.add_term(mr.mono, c);
    }
  return r;
}

GPoly GPoly::pow(uint32_t e) const {
  GPoly r = GPoly::constant(field_, Fq::one(field_));
  for (uint32_t i = 0; i < e; ++i) r = r * (*this);
  return r;
}

bool GPoly::is_homogeneous(int* deg_out) const {
  if (terms_.empty()) {
    if (deg_out) *deg_out = -1000000;
    return true;
  }
  int d = terms_.begin()->first.degree();
  for (const auto& [m, c] : terms_)
    if (m.degree() != d) return false;
  if (deg_out) *deg_out = d;
  return true;
}

std::vector<int> GPoly::vars_used() const {
  std::vector<int> out;
  for (const auto& [m, c] : terms_)
    for (const auto& f : m.factors)
      if (std::find(out.begin(), out.end(), f.var) == out.end()) out.push_back(f.var);
  std::sort(out.begin(), out.end());
  return out;
}

std::string GPoly::to_string(const VarPool& pool) const {
  if (terms_.empty()) return "0";
  std::string s;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    std::string cs = c.to_string();
    bool neg = !cs.empty() && cs[0] == '-';
    if (first) {
      first = false;
    } else {
      s += neg ? " - " : " + ";
      if (neg) cs = cs.substr(1);
    }
    std::string ms;
    for (const auto& f : m.factors) {
      if (!ms.empty()) ms += "*";
      ms += pool.name(f.var);
      if (f.exp > 1) ms += "^" + std::to_string(f.exp);
    }
    if (ms.empty()) {
      s += cs;
    } else if (cs == "1") {
      s += ms;
    } else if (cs == "-1") {
      s += "-" + ms;
    } else {
      s += cs + "*" + ms;
    }
  }
  return s;
}

namespace {

GPoly mono_to_gpoly(const Field& f, const GMono& m) {
  GPoly p(f);
  p.add_term(m, Fq::one(f));
  return p;
}

}  // namespace

GPoly apply_derivation(const GPoly& p, const std::map<int, GPoly>& dvalues, const Field& f) {
  GPoly out(f);
  for (const auto& [m, c] : p.terms()) {
    int prefix_deg = 0;
    for (size_t j = 0; j < m.factors.size(); ++j) {
      const GFactor& fj = m.factors[j];
      auto it = dvalues.find(fj.var);
      if (it != dvalues.end() && !it->second.is_zero()) {
        GMono prefix{std::vector<GFactor>(m.factors.begin(),
                                          m.factors.begin() + static_cast<long>(j))};
        GMono suffix{std::vector<GFactor>(m.factors.begin() + static_cast<long>(j) + 1,
                                          m.factors.end())};
        GPoly piece;
        if (fj.deg % 2 == 0) {
          // d(t^e) = e * t^(e-1) * d(t)
          GMono reduced = fj.exp > 1 ? GMono::var(fj.var, fj.deg, fj.exp - 1) : GMono::one();
          piece = mono_to_gpoly(f, prefix) * mono_to_gpoly(f, reduced) * it->second *
                  mono_to_gpoly(f, suffix);
          piece = piece.scaled(Fq::of_int(f, fj.exp));
        } else {
          piece = mono_to_gpoly(f, prefix) * it->second * mono_to_gpoly(f, suffix);
        }
        Fq sc = c;
        if (prefix_deg % 2 != 0) sc = -sc;
        out = out + piece.scaled(sc);
      }
      prefix_deg += fj.exp * fj.deg;
    }
  }
  return out;
}

GPoly substitute(const GPoly& p, const std::map<int, GPoly>& images, const Field& f) {
  GPoly out(f);
  for (const auto& [m, c] : p.terms()) {
    GPoly acc = GPoly::constant(f, c);
    for (const auto& fac : m.factors) {
      auto it = images.find(fac.var);
      GPoly base = (it != images.end()) ? it->second : GPoly::variable(f, fac.var, fac.deg);
      acc = acc * base.pow(static_cast<uint32_t>(fac.exp));
    }
    out = out + acc;
  }
  return out;
}

GPoly gmono_partial(const GMono& m, int var, const Field& f) {
  for (size_t j = 0; j < m.factors.size(); ++j) {
    const GFactor& fj = m.factors[j];
    if (fj.var != var) continue;
    GMono rest;
    rest.factors = m.factors;
    if (fj.exp > 1)
      rest.factors[j].exp -= 1;
    else
      rest.factors.erase(rest.factors.begin() + static_cast<long>(j));
    GPoly out(f);
    if (fj.deg % 2 == 0) {
      out.add_term(rest, Fq::of_int(f, fj.exp));
    } else {
      int suffix_deg = 0;
      for (size_t k = j + 1; k < m.factors.size(); ++k)
        suffix_deg += m.factors[k].exp * m.factors[k].deg;
      Fq c = Fq::one(f);
      if (suffix_deg % 2 != 0) c = -c;
      out.add_term(rest, c);
    }
    return out;
  }
  return GPoly::zero(f);
}

namespace {

struct GParser {
  const VarPool& pool;
  const std::map<std::string, int>& names;
  Field field;
  const std::string& s;
  size_t pos = 0;

  void skip() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool eat(char c) {
    skip();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw std::invalid_argument("parse error at offset " + std::to_string(pos) + ": " + msg);
  }

  GPoly expr() {
    GPoly r = term();
    while (true) {
      skip();
      if (eat('+'))
        r = r + term();
      else if (eat('-'))
        r = r - term();
      else
        return r;
    }
  }

  GPoly term() {
    GPoly r = factor();
    while (true) {
      skip();
      if (eat('*')) {
        r = r * factor();
      } else if (pos < s.size() && (std::isalpha(static_cast<unsigned char>(s[pos])) ||
                                    s[pos] == '(' || s[pos] == '_')) {
        r = r * factor();
      } else {
        return r;
      }
    }
  }

  GPoly factor() {
    GPoly b = atom();
    skip();
    if (eat('^')) {
      skip();
      size_t start = pos;
      while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
      if (start == pos) fail("exponent expected");
      return b.pow(static_cast<uint32_t>(std::stoul(s.substr(start, pos - start))));
    }
    return b;
  }

  GPoly atom() {
    skip();
    if (pos >= s.size()) fail("unexpected end of input");
    char c = s[pos];
    if (c == '(') {
      ++pos;
      GPoly r = expr();
      if (!eat(')')) fail("')' expected");
      return r;
    }
    if (c == '-') {
      ++pos;
      return -factor();
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t start = pos;
      while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
      BigInt num = BigInt::from_string(s.substr(start, pos - start));
      BigInt den(1);
      if (pos < s.size() && s[pos] == '/') {
        ++pos;
        size_t dstart = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (dstart == pos) fail("denominator expected");
        den = BigInt::from_string(s.substr(dstart, pos - dstart));
      }
      return GPoly::constant(field, Fq::of_ratio(field, num, den));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos;
      while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) ||
                                s[pos] == '_' || s[pos] == '\'' || s[pos] == '.'))
        ++pos;
      std::string name = s.substr(start, pos - start);
      auto it = names.find(name);
      if (it == names.end()) fail("unknown generator '" + name + "'");
      return GPoly::variable(field, it->second, pool.degree(it->second));
    }
    fail(std::string("unexpected character '") + c + "'");
  }
};

}  // namespace

GPoly parse_gpoly(const VarPool& pool, const std::map<std::string, int>& names,
                  const Field& f, const std::string& text) {
  GParser p{pool, names, f, text};
  GPoly r = p.expr();
  p.skip();
  if (p.pos != text.size()) p.fail("trailing input");
  return r;
}

}  // namespace dgsheaf
