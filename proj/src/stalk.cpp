#include "dgsheaf/stalk.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace dgsheaf {

StalkCtx::StalkCtx(DgRingPtr ring, size_t point, int floor)
    : ring_(std::move(ring)), point_(point), floor_(floor) {
  if (floor_ > 0) throw std::invalid_argument("StalkCtx: floor must be <= 0");
  const auto& pool = ring_->pool();
  for (int g : ring_->flat_gens()) {
    if (!pool->support(g).contains(point_)) continue;
    if (pool->degree(g) == 0)
      deg0_vars_.push_back(g);
    else
      neg_vars_.push_back(g);
  }
  // degree-0 variables sorted by name: P0 stays comparable across runs that
  // adjoin the same generators in different orders
  std::sort(deg0_vars_.begin(), deg0_vars_.end(),
            [&](int a, int b) { return pool->name(a) < pool->name(b); });
  std::sort(neg_vars_.begin(), neg_vars_.end());
  std::vector<std::string> names;
  names.reserve(deg0_vars_.size());
  for (int g : deg0_vars_) {
    p0_index_[g] = names.size();
    names.push_back(pool->name(g));
  }
  p0_ = PolyRing::make(ring_->field(), names);
  mod_ord_.mono = p0_->order();
}

void StalkCtx::ensure_basis(int n) const {
  if (basis_.count(n)) return;
  if (n < floor_) throw std::out_of_range("StalkCtx: degree below floor");
  std::vector<GMono> out;
  if (n == 0) {
    out.push_back(GMono::one());
  } else if (n < 0) {
    // DFS over negative variables in id order
    const auto& pool = ring_->pool();
    std::vector<GFactor> cur;
    std::function<void(size_t, int)> rec = [&](size_t idx, int remaining) {
      if (remaining == 0) {
        out.push_back(GMono{cur});
        return;
      }
      if (idx >= neg_vars_.size()) return;
      int v = neg_vars_[idx];
      int d = pool->degree(v);
      int max_exp = (d % 2 != 0) ? 1 : remaining / d;  // both negative: ratio >= 0
      rec(idx + 1, remaining);
      for (int e = 1; e <= max_exp; ++e) {
        if (remaining - e * d > 0) break;  // overshot toward positive
        cur.push_back({v, e, d});
        rec(idx + 1, remaining - e * d);
        cur.pop_back();
        if (d % 2 != 0) break;
      }
    };
    rec(0, n);
    std::sort(out.begin(), out.end());
  }
  basis_[n] = std::move(out);
  auto& idx = basis_index_[n];
  for (size_t i = 0; i < basis_[n].size(); ++i) idx[basis_[n][i]] = i;
}

const std::vector<GMono>& StalkCtx::basis(int n) const {
  if (n > 0) {
    static const std::vector<GMono> empty;
    return empty;
  }
  ensure_basis(n);
  return basis_[n];
}

const std::vector<ModVec>& StalkCtx::rel_gens(int n) const {
  auto it = rel_gens_.find(n);
  if (it != rel_gens_.end()) return it->second;
  std::vector<ModVec> gens;
  for (const auto& rel : ring_->flat_rels()) {
    if (!rel.open.contains(point_)) continue;
    if (rel.value.is_zero()) continue;
    int dr = 0;
    rel.value.is_homogeneous(&dr);
    int mu_deg = n - dr;
    if (mu_deg > 0) continue;
    for (const auto& mu : basis(mu_deg)) {
      GPoly prod(ring_->field());
      prod.add_term(mu, Fq::one(ring_->field()));
      prod = prod * rel.value;
      ModVec v = to_coords(prod, n);
      if (!modvec_is_zero(v)) gens.push_back(std::move(v));
    }
  }
  return rel_gens_.emplace(n, std::move(gens)).first->second;
}

const std::vector<ModVec>& StalkCtx::rel_gb(int n) const {
  auto it = rel_gb_.find(n);
  if (it != rel_gb_.end()) return it->second;
  auto gb = module_groebner(rel_gens(n), mod_ord_);
  return rel_gb_.emplace(n, std::move(gb)).first->second;
}

ModVec StalkCtx::to_coords(const GPoly& p, int n) const {
  ModVec v = modvec_zero(p0_, rank(n));
  const auto& idx = (ensure_basis(n), basis_index_[n]);
  for (const auto& [m, c] : p.terms()) {
    if (m.degree() != n)
      throw std::invalid_argument("to_coords: inhomogeneous or wrong-degree element");
    GMono negpart;
    Mono p0m(p0_->nvars(), 0);
    for (const auto& f : m.factors) {
      if (f.deg == 0) {
        auto pit = p0_index_.find(f.var);
        if (pit == p0_index_.end())
          throw std::invalid_argument("to_coords: variable not alive at point");
        p0m[pit->second] += static_cast<uint32_t>(f.exp);
      } else {
        negpart.factors.push_back(f);
      }
    }
    auto bit = idx.find(negpart);
    if (bit == idx.end()) throw std::invalid_argument("to_coords: monomial outside stalk basis");
    v[bit->second] = v[bit->second] + Poly::from_terms(p0_, {{p0m, c}});
  }
  return v;
}

GPoly StalkCtx::from_coords(const ModVec& v, int n) const {
  GPoly out(ring_->field());
  const auto& bas = basis(n);
  if (v.size() != bas.size()) throw std::invalid_argument("from_coords: rank mismatch");
  for (size_t i = 0; i < v.size(); ++i) {
    for (const auto& t : v[i].terms()) {
      GMono m = bas[i];
      for (size_t k = 0; k < t.mono.size(); ++k) {
        if (t.mono[k] == 0) continue;
        int var = deg0_vars_[k];
        GMulResult mr =
            gmono_mul(m, GMono::var(var, 0, static_cast<int>(t.mono[k])));
        m = mr.mono;  // degree-0 factors never produce signs or squares
      }
      out.add_term(m, t.coeff);
    }
  }
  return out;
}

ModVec StalkCtx::nf(const ModVec& v, int n) const {
  const auto& gb = rel_gb(n);
  if (gb.empty()) return v;
  return module_nf(v, gb, mod_ord_);
}

GPoly StalkCtx::nf(const GPoly& p, int n) const { return from_coords(nf(to_coords(p, n), n), n); }

bool StalkCtx::is_zero(const GPoly& p, int n) const {
  if (p.is_zero()) return true;
  return modvec_is_zero(nf(to_coords(p, n), n));
}

const std::vector<ModVec>& StalkCtx::d_columns(int n) const {
  auto it = d_cols_.find(n);
  if (it != d_cols_.end()) return it->second;
  std::vector<ModVec> cols;
  for (const auto& mu : basis(n)) {
    GPoly g(ring_->field());
    g.add_term(mu, Fq::one(ring_->field()));
    GPoly dg = ring_->apply_d(g);
    cols.push_back(n + 1 > 0 ? modvec_zero(p0_, 0) : to_coords(dg, n + 1));
  }
  return d_cols_.emplace(n, std::move(cols)).first->second;
}

ModVec StalkCtx::d_coords(const ModVec& v, int n) const {
  if (n + 1 > 0) return modvec_zero(p0_, 0);
  ModVec out = modvec_zero(p0_, rank(n + 1));
  const auto& cols = d_columns(n);
  for (size_t i = 0; i < v.size(); ++i) {
    if (v[i].is_zero()) continue;
    out = modvec_add(out, modvec_mul_poly(cols[i], v[i]));
  }
  return out;
}

Poly StalkCtx::to_p0(const GPoly& p) const {
  ModVec v = to_coords(p, 0);
  return v.empty() ? Poly(p0_) : v[0];
}

GPoly StalkCtx::from_p0(const Poly& p) const { return from_coords(ModVec{p}, 0); }

StalkFamily::StalkFamily(DgRingPtr ring, int floor) : ring_(std::move(ring)), floor_(floor) {
  cache_.resize(ring_->space()->npoints());
}

StalkCtx& StalkFamily::at(size_t point) const {
  if (point >= cache_.size()) throw std::out_of_range("StalkFamily: unknown point");
  std::lock_guard<std::mutex> lock(mu_);
  if (!cache_[point]) cache_[point] = std::make_shared<StalkCtx>(ring_, point, floor_);
  return *cache_[point];
}

std::vector<std::vector<long long>> hilbert_bigraded(const std::vector<std::pair<int, bool>>& vars,
                                                     int floor, int weight_cap) {
  size_t degs = static_cast<size_t>(-floor) + 1;  // degrees floor..0
  size_t ws = static_cast<size_t>(weight_cap) + 1;
  // series[w][i]: count at weight w, degree floor + i
  std::vector<std::vector<long long>> series(ws, std::vector<long long>(degs, 0));
  series[0][degs - 1] = 1;  // the empty monomial
  for (const auto& [deg, odd] : vars) {
    std::vector<std::vector<long long>> next(ws, std::vector<long long>(degs, 0));
    for (size_t w = 0; w < ws; ++w)
      for (size_t i = 0; i < degs; ++i) {
        if (series[w][i] == 0) continue;
        int base_deg = floor + static_cast<int>(i);
        // exponent e contributes weight e and degree e*deg
        int emax = odd ? 1 : weight_cap;
        for (int e = 0; e <= emax; ++e) {
          long long w2 = static_cast<long long>(w) + e;
          long long d2 = base_deg + static_cast<long long>(e) * deg;
          if (w2 >= static_cast<long long>(ws)) break;
          if (d2 < floor) break;
          next[static_cast<size_t>(w2)][static_cast<size_t>(d2 - floor)] += series[w][i];
        }
      }
    series = std::move(next);
  }
  return series;
}

std::vector<std::vector<long long>> enumerate_bigraded(const std::vector<std::pair<int, bool>>& vars,
                                                       int floor, int weight_cap) {
  size_t degs = static_cast<size_t>(-floor) + 1;
  size_t ws = static_cast<size_t>(weight_cap) + 1;
  std::vector<std::vector<long long>> counts(ws, std::vector<long long>(degs, 0));
  std::function<void(size_t, int, int)> rec = [&](size_t idx, int deg_acc, int w_acc) {
    if (idx == vars.size()) {
      counts[static_cast<size_t>(w_acc)][static_cast<size_t>(deg_acc - floor)] += 1;
      return;
    }
    auto [deg, odd] = vars[idx];
    for (int e = 0;; ++e) {
      int d2 = deg_acc + e * deg;
      int w2 = w_acc + e;
      if (d2 < floor || w2 > weight_cap) break;
      rec(idx + 1, d2, w2);
      if (odd && e == 1) break;
      if (deg == 0 && e >= weight_cap) break;
    }
  };
  rec(0, 0, 0);
  return counts;
}

FlatnessReport flatness_check(const DgRingPtr& ring, int floor, int weight_cap) {
  FlatnessReport rep;
  rep.ok = true;
  const auto& pool = ring->pool();
  for (size_t x = 0; x < ring->space()->npoints(); ++x) {
    std::vector<std::pair<int, bool>> vars;
    for (int g : ring->flat_gens()) {
      if (!pool->support(g).contains(x)) continue;
      int d = pool->degree(g);
      vars.emplace_back(d, d % 2 != 0);
    }
    FlatnessPointReport pr;
    pr.point = x;
    pr.enumerated = enumerate_bigraded(vars, floor, weight_cap);
    pr.series = hilbert_bigraded(vars, floor, weight_cap);
    pr.match = pr.enumerated == pr.series;
    rep.ok = rep.ok && pr.match;
    rep.points.push_back(std::move(pr));
  }
  return rep;
}

namespace {

// degree of a generator image must match, support must cover
void check_image_shape(const DgRingPtr& source, const SheafHom& phi,
                       std::vector<std::string>& diags) {
  const auto& pool = source->pool();
  for (const auto& [v, sec] : phi.images) {
    if (!source->has_var(v)) {
      diags.push_back("image given for non-generator " + pool->name(v));
      continue;
    }
    int vd = pool->degree(v);
    int sd = 0;
    if (!sec.value.is_homogeneous(&sd)) {
      diags.push_back("image of " + pool->name(v) + " is not homogeneous");
      continue;
    }
    if (!sec.value.is_zero() && sd != vd)
      diags.push_back("image of " + pool->name(v) + " has degree " + std::to_string(sd) +
                      ", expected " + std::to_string(vd));
    if (!pool->support(v).subset_of(sec.open))
      diags.push_back("image of " + pool->name(v) + " not defined over its support");
    try {
      validate_section(*phi.target, Section{pool->support(v), sec.value});
    } catch (const std::exception& e) {
      diags.push_back(e.what());
    }
  }
  // implicit identity images must exist in the target
  for (int g : source->flat_gens())
    if (!phi.images.count(g) && !phi.target->has_var(g))
      diags.push_back("generator " + pool->name(g) + " has no image and is absent from target");
}

}  // namespace

std::vector<std::string> check_hom(const SheafHom& phi, int floor) {
  std::vector<std::string> diags;
  check_image_shape(phi.source, phi, diags);
  if (!diags.empty()) return diags;

  const auto& pool = phi.source->pool();
  StalkFamily tgt(phi.target, floor - 1);

  // d-commutation on generators, pointwise over supports
  for (int g : phi.source->flat_gens()) {
    int n = pool->degree(g);
    GPoly lhs = phi.apply(phi.source->d_of(g));
    GPoly rhs = phi.target->apply_d(
        phi.apply(GPoly::variable(phi.source->field(), g, n)));
    GPoly diff = lhs - rhs;
    if (diff.is_zero()) continue;
    if (n + 1 > 0) {
      diags.push_back("d-compat fails for " + pool->name(g) + " (positive degree image)");
      continue;
    }
    for (size_t x = 0; x < pool->space()->npoints(); ++x) {
      if (!pool->support(g).contains(x)) continue;
      if (n + 1 < tgt.at(x).floor()) continue;
      if (!tgt.at(x).is_zero(diff, n + 1))
        diags.push_back("d-compat fails for " + pool->name(g) + " at point " +
                        pool->space()->points()[x]);
    }
  }

  // relations must map to zero
  for (const auto& rel : phi.source->flat_rels()) {
    GPoly img = phi.apply(rel.value);
    if (img.is_zero()) continue;
    int dr = 0;
    img.is_homogeneous(&dr);
    for (size_t x = 0; x < pool->space()->npoints(); ++x) {
      if (!rel.open.contains(x)) continue;
      if (dr < tgt.at(x).floor()) continue;
      if (!tgt.at(x).is_zero(img, dr))
        diags.push_back("relation image nonzero at point " + pool->space()->points()[x]);
    }
  }
  return diags;
}

SheafHom extend_hom(const DgRingPtr& source, const DgRingPtr& target,
                    const std::map<int, Section>& images, int floor) {
  SheafHom phi{source, target, images};
  auto diags = check_hom(phi, floor);
  if (!diags.empty()) throw std::invalid_argument("extend_hom: " + diags.front());
  return phi;
}

int check_d_squared(const DgRingPtr& ring, int floor) {
  StalkFamily fam(ring, floor - 1);
  const auto& pool = ring->pool();
  for (int g : ring->flat_gens()) {
    GPoly ddg = ring->apply_d(ring->apply_d(GPoly::variable(ring->field(), g, pool->degree(g))));
    if (ddg.is_zero()) continue;
    int n = pool->degree(g) + 2;
    if (n > 0) return g;  // nonzero element claimed in positive degree
    for (size_t x = 0; x < ring->space()->npoints(); ++x) {
      if (!pool->support(g).contains(x)) continue;
      if (n < fam.at(x).floor()) continue;
      if (!fam.at(x).is_zero(ddg, n)) return g;
    }
  }
  return -1;
}

Section multiply(const DgRing& ring, const Section& a, const Section& b) {
  Section r{intersect(a.open, b.open), a.value * b.value};
  validate_section(ring, r);
  return r;
}

}  // namespace dgsheaf
