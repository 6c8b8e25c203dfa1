#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "dgsheaf/field.hpp"
#include "dgsheaf/space.hpp"

namespace dgsheaf {

// Graded variable registry shared by all sheaves of one problem. Degrees are
// nonpositive; odd-degree variables square to zero, even-degree variables are
// polynomial. Supports are open sets of the problem's space.
class VarPool {
public:
  explicit VarPool(SpacePtr space) : space_(std::move(space)) {}

  int add(const std::string& name, int degree, const OpenSet& support);
  size_t size() const { return vars_.size(); }
  const std::string& name(int id) const { return vars_[static_cast<size_t>(id)].name; }
  int degree(int id) const { return vars_[static_cast<size_t>(id)].degree; }
  const OpenSet& support(int id) const { return vars_[static_cast<size_t>(id)].support; }
  int find(const std::string& name) const;  // -1 if absent
  const SpacePtr& space() const { return space_; }

  // fresh name with the given stem ("y", "y.1", "y.2", ...)
  std::string fresh_name(const std::string& stem) const;

private:
  struct Entry {
    std::string name;
    int degree;
    OpenSet support;
  };
  SpacePtr space_;
  std::vector<Entry> vars_;
  std::map<std::string, int> by_name_;
};

using VarPoolPtr = std::shared_ptr<VarPool>;

struct GFactor {
  int32_t var;
  int32_t exp;
  int32_t deg;  // cohomological degree of the variable
  bool operator==(const GFactor& o) const { return var == o.var && exp == o.exp; }
  bool operator<(const GFactor& o) const {
    if (var != o.var) return var < o.var;
    return exp < o.exp;
  }
};

// Normalized graded-commutative monomial: factors ascending by variable id,
// odd variables with exponent exactly one. The empty list is 1.
struct GMono {
  std::vector<GFactor> factors;

  int degree() const;
  bool operator==(const GMono& o) const { return factors == o.factors; }
  bool operator<(const GMono& o) const { return factors < o.factors; }
  static GMono one() { return {}; }
  static GMono var(int id, int deg, int exp = 1);
};

// Koszul-sign product; zero (nullopt) when an odd variable repeats.
struct GMulResult {
  GMono mono;
  int sign = 1;  // +1 or -1
  bool zero = false;
};
GMulResult gmono_mul(const GMono& a, const GMono& b);

// Element of the free strictly graded-commutative algebra over the field on
// pool variables. Terms sorted by monomial for canonical printing.
class GPoly {
public:
  GPoly() = default;
  explicit GPoly(Field f) : field_(f) {}
  static GPoly zero(const Field& f) { return GPoly(f); }
  static GPoly constant(const Field& f, const Fq& c);
  static GPoly variable(const Field& f, int id, int deg);

  const Field& field() const { return field_; }
  bool is_zero() const { return terms_.empty(); }
  const std::map<GMono, Fq>& terms() const { return terms_; }

  GPoly operator+(const GPoly& o) const;
  GPoly operator-(const GPoly& o) const;
  GPoly operator*(const GPoly& o) const;
  GPoly operator-() const;
  GPoly scaled(const Fq& c) const;
  GPoly pow(uint32_t e) const;
  bool operator==(const GPoly& o) const { return field_ == o.field_ && terms_ == o.terms_; }
  bool operator!=(const GPoly& o) const { return !(*this == o); }

  void add_term(const GMono& m, const Fq& c);

  // -1000000 marker for zero; otherwise requires homogeneity when strict.
  bool is_homogeneous(int* deg_out = nullptr) const;
  std::vector<int> vars_used() const;

  std::string to_string(const VarPool& pool) const;

private:
  Field field_;
  std::map<GMono, Fq> terms_;
};

// Unique degree +1 derivation with the given values on variables (absent
// entries read as zero), extended by the graded Leibniz rule.
GPoly apply_derivation(const GPoly& p, const std::map<int, GPoly>& dvalues, const Field& f);

// Ring homomorphism: substitute images for variables (absent entries map the
// variable to itself, which must then exist in the caller's target context).
GPoly substitute(const GPoly& p, const std::map<int, GPoly>& images, const Field& f);

// Signed partial derivative used for Kaehler differentials: coefficient of
// delta(t) when delta(m) is written with the generator differentials moved to
// the right.
GPoly gmono_partial(const GMono& m, int var, const Field& f);

// Parse with an explicit name table (subset of pool vars visible in context).
GPoly parse_gpoly(const VarPool& pool, const std::map<std::string, int>& names,
                  const Field& f, const std::string& text);

}  // namespace dgsheaf
