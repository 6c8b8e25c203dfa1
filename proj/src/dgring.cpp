#include "dgsheaf/dgring.hpp"

#include <algorithm>
#include <stdexcept>

namespace dgsheaf {

std::vector<std::string> graded_slice(const GeneratorSpec& spec, int n) {
  std::vector<std::string> out;
  for (const auto& e : spec)
    if (e.degree == n) out.push_back(e.id);
  return out;
}

std::vector<std::pair<std::string, int>> local_index_set(const GeneratorSpec& spec, size_t point) {
  std::vector<std::pair<std::string, int>> out;
  for (const auto& e : spec) {
    if (point >= e.support.space->npoints()) throw std::out_of_range("local_index_set: unknown point");
    if (e.support.contains(point)) out.emplace_back(e.id, e.degree);
  }
  return out;
}

std::vector<std::string> stalk_basis(const GeneratorSpec& spec, size_t point, int n) {
  std::vector<std::string> out;
  for (const auto& e : spec)
    if (e.degree == n && e.support.contains(point)) out.push_back(e.id);
  return out;
}

DgRingPtr DgRing::constant_sheaf(VarPoolPtr pool, Field field) {
  auto r = std::make_shared<DgRing>();
  r->pool_ = std::move(pool);
  r->field_ = field;
  return r;
}

const std::vector<int>& DgRing::flat_gens() const {
  if (!flat_ready_) {
    flat_gens_cache_ = base_ ? base_->flat_gens() : std::vector<int>{};
    flat_gens_cache_.insert(flat_gens_cache_.end(), own_gens_.begin(), own_gens_.end());
    flat_rels_cache_ = base_ ? base_->flat_rels() : std::vector<Section>{};
    flat_rels_cache_.insert(flat_rels_cache_.end(), own_rels_.begin(), own_rels_.end());
    flat_ready_ = true;
  }
  return flat_gens_cache_;
}

const std::vector<Section>& DgRing::flat_rels() const {
  flat_gens();
  return flat_rels_cache_;
}

GPoly DgRing::d_of(int var) const {
  auto it = own_d_.find(var);
  if (it != own_d_.end()) return it->second.value;
  for (int g : own_gens_)
    if (g == var) return GPoly::zero(field_);
  if (base_) return base_->d_of(var);
  return GPoly::zero(field_);
}

std::map<int, GPoly> DgRing::d_map() const {
  std::map<int, GPoly> m = base_ ? base_->d_map() : std::map<int, GPoly>{};
  for (int g : own_gens_) {
    auto it = own_d_.find(g);
    m[g] = (it != own_d_.end()) ? it->second.value : GPoly::zero(field_);
  }
  return m;
}

bool DgRing::has_var(int var) const {
  for (int g : flat_gens())
    if (g == var) return true;
  return false;
}

bool DgRing::descends_from(const DgRingPtr& other) const {
  const DgRing* cur = this;
  while (cur) {
    if (cur == other.get()) return true;
    cur = cur->base_.get();
  }
  return false;
}

GeneratorSpec DgRing::spec() const {
  GeneratorSpec s;
  for (int g : flat_gens()) s.push_back({pool_->name(g), pool_->support(g), pool_->degree(g)});
  return s;
}

GeneratorSpec DgRing::spec_above(const DgRingPtr& anc) const {
  if (!descends_from(anc)) throw std::invalid_argument("spec_above: not an ancestor");
  GeneratorSpec s;
  const DgRing* cur = this;
  std::vector<const DgRing*> chain;
  while (cur != anc.get()) {
    chain.push_back(cur);
    cur = cur->base_.get();
  }
  std::reverse(chain.begin(), chain.end());
  for (const DgRing* node : chain)
    for (int g : node->own_gens_)
      s.push_back({pool_->name(g), pool_->support(g), pool_->degree(g)});
  return s;
}

bool DgRing::relation_free_above(const DgRingPtr& anc) const {
  const DgRing* cur = this;
  while (cur != anc.get()) {
    if (!cur->own_rels_.empty()) return false;
    cur = cur->base_.get();
    if (!cur && anc) return false;
  }
  return true;
}

std::map<std::string, int> DgRing::name_table() const {
  std::map<std::string, int> t;
  for (int g : flat_gens()) t[pool_->name(g)] = g;
  return t;
}

GPoly DgRing::apply_d(const GPoly& p) const { return apply_derivation(p, d_map(), field_); }

Section DgRing::apply_d(const Section& s) const { return {s.open, apply_d(s.value)}; }

RingBuilder::RingBuilder(DgRingPtr base)
    : pool_(base->pool()), field_(base->field()), base_(std::move(base)) {}

RingBuilder::RingBuilder(VarPoolPtr pool, Field field)
    : pool_(std::move(pool)), field_(field), base_(nullptr) {}

int RingBuilder::add_gen(const std::string& name, int degree, const OpenSet& support) {
  int id = pool_->add(name, degree, support);
  gens_.push_back(id);
  return id;
}

void RingBuilder::adopt_gen(int var) { gens_.push_back(var); }

void RingBuilder::set_d(int var, GPoly value) {
  if (std::find(gens_.begin(), gens_.end(), var) == gens_.end())
    throw std::invalid_argument("set_d: not a generator of this node");
  d_[var] = std::move(value);
}

void RingBuilder::add_rel(Section s) { rels_.push_back(std::move(s)); }

DgRingPtr RingBuilder::build() {
  auto r = std::make_shared<DgRing>();
  r->pool_ = pool_;
  r->field_ = field_;
  r->base_ = base_;

  std::vector<int> seen = base_ ? base_->flat_gens() : std::vector<int>{};
  for (int g : gens_) {
    if (std::find(seen.begin(), seen.end(), g) != seen.end())
      throw std::invalid_argument("RingBuilder: generator already in tower");
    seen.push_back(g);
    r->own_gens_.push_back(g);
  }

  for (auto& [var, val] : d_) {
    int vd = pool_->degree(var);
    if (!val.is_zero()) {
      int dd = 0;
      if (!val.is_homogeneous(&dd))
        throw std::invalid_argument("RingBuilder: d(" + pool_->name(var) + ") not homogeneous");
      if (dd != vd + 1)
        throw std::invalid_argument("RingBuilder: d(" + pool_->name(var) + ") has wrong degree");
      if (vd == 0) throw std::invalid_argument("RingBuilder: degree-0 generator must be closed");
    }
    Section s{pool_->support(var), val};
    r->own_d_[var] = s;
  }
  for (auto& s : rels_) {
    if (!s.value.is_homogeneous(nullptr))
      throw std::invalid_argument("RingBuilder: relation not homogeneous");
    r->own_rels_.push_back(s);
  }

  // structural checks need the finished tower
  for (auto& [var, sec] : r->own_d_) validate_section(*r, sec);
  for (auto& s : r->own_rels_) validate_section(*r, s);
  return r;
}

void validate_section(const DgRing& ring, const Section& s) {
  if (s.open.space.get() != ring.space().get())
    throw std::invalid_argument("Section: space mismatch");
  for (int v : s.value.vars_used()) {
    if (!ring.has_var(v))
      throw std::invalid_argument("Section: uses a variable outside the tower: " +
                                  ring.pool()->name(v));
    if (!s.open.subset_of(ring.pool()->support(v)))
      throw std::invalid_argument("Section: variable " + ring.pool()->name(v) +
                                  " not alive on the whole open set");
  }
}

SheafHom SheafHom::identity(const DgRingPtr& ring) { return {ring, ring, {}}; }

std::map<int, GPoly> SheafHom::image_map() const {
  std::map<int, GPoly> m;
  for (const auto& [v, s] : images) m[v] = s.value;
  return m;
}

GPoly SheafHom::apply(const GPoly& p) const { return substitute(p, image_map(), source->field()); }

Section SheafHom::apply(const Section& s) const { return {s.open, apply(s.value)}; }

SheafHom compose(const SheafHom& outer, const SheafHom& inner) {
  if (inner.target.get() != outer.source.get() && !inner.target->descends_from(outer.source))
    throw std::invalid_argument("compose: middle ring mismatch");
  SheafHom h;
  h.source = inner.source;
  h.target = outer.target;
  for (const auto& [v, s] : inner.images) h.images[v] = outer.apply(s);
  // inner may leave some source vars implicit; those flow through outer
  for (const auto& [v, s] : outer.images) {
    if (h.images.count(v)) continue;
    if (inner.source->has_var(v) && !inner.images.count(v)) h.images[v] = s;
  }
  return h;
}

TensorResult tensor_over_A(const DgRingPtr& B, const DgRingPtr& C, const DgRingPtr& A) {
  if (!B->descends_from(A) || !C->descends_from(A))
    throw std::invalid_argument("tensor_over_A: base mismatch");
  if (B->pool().get() != C->pool().get())
    throw std::invalid_argument("tensor_over_A: different variable pools");

  const auto& pool = B->pool();
  RingBuilder bld(A);

  auto chain_of = [&](const DgRingPtr& side) {
    std::vector<const DgRing*> chain;
    const DgRing* cur = side.get();
    while (cur != A.get()) {
      chain.push_back(cur);
      cur = cur->base().get();
    }
    std::reverse(chain.begin(), chain.end());
    return chain;
  };
  auto chain0 = chain_of(B);
  auto chain1 = chain_of(C);

  // fresh copies are needed only when the factors share tower nodes above
  // the base (self-tensors); otherwise the original variables carry over
  bool shared = false;
  for (const DgRing* n0 : chain0)
    for (const DgRing* n1 : chain1)
      if (n0 == n1) shared = true;

  auto add_side = [&](const std::vector<const DgRing*>& chain, const char* tag,
                      std::map<int, int>& cmap) {
    for (const DgRing* node : chain)
      for (int g : node->own_gens()) {
        if (shared) {
          std::string nm = pool->fresh_name(pool->name(g) + tag);
          cmap[g] = bld.add_gen(nm, pool->degree(g), pool->support(g));
        } else {
          bld.adopt_gen(g);
          cmap[g] = g;
        }
      }
  };

  std::map<int, int> c0, c1;
  add_side(chain0, "'", c0);
  add_side(chain1, "''", c1);

  auto translate = [&](const GPoly& p, const std::map<int, int>& cmap) {
    if (!shared) return p;
    std::map<int, GPoly> imgs;
    for (const auto& [from, to] : cmap)
      imgs[from] = GPoly::variable(B->field(), to, pool->degree(to));
    return substitute(p, imgs, B->field());
  };

  auto wire_side = [&](const std::vector<const DgRing*>& chain, const std::map<int, int>& cmap) {
    for (const DgRing* node : chain) {
      for (int g : node->own_gens()) {
        GPoly dv = node->d_of(g);
        if (!dv.is_zero()) bld.set_d(cmap.at(g), translate(dv, cmap));
      }
      for (const auto& rel : node->own_rels()) bld.add_rel({rel.open, translate(rel.value, cmap)});
    }
  };
  wire_side(chain0, c0);
  wire_side(chain1, c1);

  TensorResult out;
  out.ring = bld.build();
  out.clone0 = c0;
  out.clone1 = c1;
  out.inj0.source = B;
  out.inj0.target = out.ring;
  for (const auto& [from, to] : c0)
    out.inj0.images[from] = Section{pool->support(to), GPoly::variable(B->field(), to, pool->degree(to))};
  out.inj1.source = C;
  out.inj1.target = out.ring;
  for (const auto& [from, to] : c1)
    out.inj1.images[from] = Section{pool->support(to), GPoly::variable(B->field(), to, pool->degree(to))};
  return out;
}

SheafHom multiplication_hom(const TensorResult& square, const DgRingPtr& B) {
  SheafHom mu;
  mu.source = square.ring;
  mu.target = B;
  const auto& pool = B->pool();
  for (const auto& [from, to] : square.clone0)
    mu.images[to] = Section{pool->support(from), GPoly::variable(B->field(), from, pool->degree(from))};
  for (const auto& [from, to] : square.clone1)
    mu.images[to] = Section{pool->support(from), GPoly::variable(B->field(), from, pool->degree(from))};
  return mu;
}

namespace {

DgRingPtr restrict_node(const DgRingPtr& node, const SpacePtr& sub,
                        const std::vector<size_t>& old_of_new,
                        const VarPoolPtr& new_pool, std::map<int, int>& var_map) {
  auto remap_open = [&](const OpenSet& o) {
    uint64_t m = 0;
    for (size_t i = 0; i < old_of_new.size(); ++i)
      if (o.contains(old_of_new[i])) m |= 1ull << i;
    return OpenSet{sub, m};
  };
  auto translate = [&](const GPoly& p, const Field& f) {
    std::map<int, GPoly> imgs;
    for (const auto& [from, to] : var_map)
      imgs[from] = GPoly::variable(f, to, new_pool->degree(to));
    return substitute(p, imgs, f);
  };

  if (!node->base()) {
    return DgRing::constant_sheaf(new_pool, node->field());
  }
  DgRingPtr base = restrict_node(node->base(), sub, old_of_new, new_pool, var_map);
  RingBuilder bld(base);
  for (int g : node->own_gens()) {
    OpenSet s = remap_open(node->pool()->support(g));
    int ng = bld.add_gen(node->pool()->name(g), node->pool()->degree(g), s);
    var_map[g] = ng;
  }
  for (int g : node->own_gens()) {
    GPoly dv = node->d_of(g);
    if (!dv.is_zero()) bld.set_d(var_map[g], translate(dv, node->field()));
  }
  for (const auto& rel : node->own_rels()) {
    OpenSet o = remap_open(rel.open);
    if (o.empty()) continue;
    bld.add_rel({o, translate(rel.value, node->field())});
  }
  return bld.build();
}

}  // namespace

RestrictionResult restrict_to_open(const DgRingPtr& B, uint64_t members) {
  RestrictionResult out;
  out.subspace = induced_subspace(*B->space(), members, out.old_of_new_points);
  out.pool = std::make_shared<VarPool>(out.subspace);
  out.ring = restrict_node(B, out.subspace, out.old_of_new_points, out.pool, out.var_map);
  return out;
}

}  // namespace dgsheaf
