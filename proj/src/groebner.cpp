#include "dgsheaf/groebner.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace dgsheaf {

namespace {

ModuleOrder ideal_order(const PolyRingPtr& ring) {
  ModuleOrder ord;
  ord.mono = ring->order();
  return ord;
}

std::vector<ModVec> wrap(const std::vector<Poly>& ps) {
  std::vector<ModVec> out;
  for (const auto& p : ps) out.push_back(ModVec{p});
  return out;
}

}  // namespace

GroebnerBasis buchberger(const PolyRingPtr& ring, std::vector<Poly> gens) {
  for (const auto& g : gens)
    if (!g.is_zero() && !g.ring()->compatible(*ring))
      throw std::invalid_argument("buchberger: generator from a different ring");
  auto gb = module_groebner(wrap(gens), ideal_order(ring));
  GroebnerBasis out{ring, {}};
  for (auto& g : gb) out.gens.push_back(g[0]);
  return out;
}

Poly normal_form(const Poly& f, const GroebnerBasis& gb) {
  if (!f.ring() || !f.ring()->compatible(*gb.ring))
    throw std::invalid_argument("normal_form: variable-list mismatch");
  if (gb.gens.empty() || f.is_zero()) return f;
  auto r = module_nf(ModVec{f}, wrap(gb.gens), ideal_order(gb.ring));
  return r[0];
}

bool GroebnerBasis::contains(const Poly& f) const { return normal_form(f, *this).is_zero(); }

bool ideal_equal(const GroebnerBasis& a, const GroebnerBasis& b) {
  if (a.gens.size() != b.gens.size()) return false;
  for (size_t i = 0; i < a.gens.size(); ++i)
    if (a.gens[i] != b.gens[i]) return false;
  return true;
}

std::vector<Poly> ideal_quotient(const GroebnerBasis& a, const Poly& f) {
  // (A : f): kernel of R -> R/A, p |-> p*f
  std::vector<ModVec> cols{ModVec{f}};
  std::vector<ModVec> quot = wrap(a.gens);
  auto ker = kernel_of_cols(a.ring, cols, quot, 1);
  std::vector<Poly> gens;
  for (auto& k : ker) gens.push_back(k[0]);
  return buchberger(a.ring, gens).gens;
}

std::vector<ModVec> syzygy_kernel(const PolyRingPtr& ring,
                                  const std::vector<ModVec>& columns,
                                  size_t target_rank,
                                  const GroebnerBasis& ambient) {
  for (const auto& c : columns)
    if (c.size() != target_rank)
      throw std::invalid_argument("syzygy_kernel: dimension mismatch");
  std::vector<ModVec> quotient;
  for (const auto& g : ambient.gens)
    for (size_t p = 0; p < target_rank; ++p) {
      ModVec v = modvec_zero(ring, target_rank);
      v[p] = g;
      quotient.push_back(std::move(v));
    }
  auto ker = kernel_of_cols(ring, columns, quotient, target_rank);
  // reduce entries modulo the ambient ideal for canonical output
  for (auto& k : ker)
    for (auto& e : k) e = normal_form(e, ambient);
  std::vector<ModVec> out;
  for (auto& k : ker)
    if (!modvec_is_zero(k)) out.push_back(std::move(k));
  return out;
}

namespace {

struct Parser {
  const PolyRingPtr& ring;
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

  Poly expr() {
    Poly r = term();
    while (true) {
      skip();
      if (eat('+')) {
        r = r + term();
      } else if (eat('-')) {
        r = r - term();
      } else {
        return r;
      }
    }
  }

  Poly term() {
    Poly r = factor();
    while (true) {
      skip();
      if (eat('*')) {
        r = r * factor();
      } else if (pos < s.size() &&
                 (std::isalpha(static_cast<unsigned char>(s[pos])) || s[pos] == '(' || s[pos] == '_')) {
        // juxtaposition: 2x, x y
        r = r * factor();
      } else {
        return r;
      }
    }
  }

  Poly factor() {
    Poly b = atom();
    skip();
    if (eat('^')) {
      skip();
      size_t start = pos;
      while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
      if (start == pos) fail("exponent expected");
      unsigned long e = std::stoul(s.substr(start, pos - start));
      Poly r = Poly::constant(ring, Fq::one(ring->field()));
      for (unsigned long i = 0; i < e; ++i) r = r * b;
      return r;
    }
    return b;
  }

  Poly atom() {
    skip();
    if (pos >= s.size()) fail("unexpected end of input");
    char c = s[pos];
    if (c == '(') {
      ++pos;
      Poly r = expr();
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
      return Poly::constant(ring, Fq::of_ratio(ring->field(), num, den));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos;
      while (pos < s.size() &&
             (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_' || s[pos] == '\'' ||
              s[pos] == '.'))
        ++pos;
      std::string name = s.substr(start, pos - start);
      int idx = ring->var_index(name);
      if (idx < 0) fail("unknown variable '" + name + "'");
      return Poly::variable(ring, static_cast<size_t>(idx));
    }
    fail(std::string("unexpected character '") + c + "'");
  }
};

}  // namespace

Poly parse_poly(const PolyRingPtr& ring, const std::string& text) {
  Parser p{ring, text};
  Poly r = p.expr();
  p.skip();
  if (p.pos != text.size()) p.fail("trailing input");
  return r;
}

}  // namespace dgsheaf
