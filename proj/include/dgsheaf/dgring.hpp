#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dgsheaf/gpoly.hpp"
#include "dgsheaf/space.hpp"

namespace dgsheaf {

// Generator specification: indexing data (id, open pseudo-support,
// nonpositive degree) for pseudo-free generators.
struct GenSpecEntry {
  std::string id;
  OpenSet support;
  int degree;
};
using GeneratorSpec = std::vector<GenSpecEntry>;

std::vector<std::string> graded_slice(const GeneratorSpec& spec, int n);
// ids alive at the point, with degrees
std::vector<std::pair<std::string, int>> local_index_set(const GeneratorSpec& spec, size_t point);
// basis labels of the degree-n stalk component of the pseudo-free module
std::vector<std::string> stalk_basis(const GeneratorSpec& spec, size_t point, int n);

// A local section presented by one expression valid over the whole open set
// (on a finite space every stalk element extends over the minimal open with
// the same expression, so this loses nothing).
struct Section {
  OpenSet open;
  GPoly value;
};

class DgRing;
using DgRingPtr = std::shared_ptr<const DgRing>;

// One node of a presentation tower: new generators and homogeneous relation
// sections on top of an optional base ring. The constant sheaf sits at the
// bottom. Flattened, a stalk is a quotient of the free strictly
// graded-commutative algebra on all tower variables alive at the point.
class DgRing : public std::enable_shared_from_this<DgRing> {
public:
  static DgRingPtr constant_sheaf(VarPoolPtr pool, Field field);

  const VarPoolPtr& pool() const { return pool_; }
  const SpacePtr& space() const { return pool_->space(); }
  const Field& field() const { return field_; }
  const DgRingPtr& base() const { return base_; }
  const std::vector<int>& own_gens() const { return own_gens_; }
  const std::map<int, Section>& own_d() const { return own_d_; }
  const std::vector<Section>& own_rels() const { return own_rels_; }

  // tower-flattened views, base first, memoized
  const std::vector<int>& flat_gens() const;
  const std::vector<Section>& flat_rels() const;
  GPoly d_of(int var) const;              // zero if the generator is closed
  std::map<int, GPoly> d_map() const;     // var -> d(var) for the whole tower
  bool has_var(int var) const;
  bool descends_from(const DgRingPtr& other) const;

  GeneratorSpec spec() const;             // of the whole tower
  GeneratorSpec spec_above(const DgRingPtr& anc) const;
  bool relation_free_above(const DgRingPtr& anc) const;

  std::map<std::string, int> name_table() const;

  GPoly apply_d(const GPoly& p) const;
  Section apply_d(const Section& s) const;

private:
  friend class RingBuilder;
  VarPoolPtr pool_;
  Field field_;
  DgRingPtr base_;
  std::vector<int> own_gens_;
  std::map<int, Section> own_d_;
  std::vector<Section> own_rels_;
  mutable std::vector<int> flat_gens_cache_;
  mutable std::vector<Section> flat_rels_cache_;
  mutable bool flat_ready_ = false;
};

// Mutable builder for a tower node; build() validates degrees, supports and
// homogeneity (d-squared is checked separately, see check_d_squared).
class RingBuilder {
public:
  explicit RingBuilder(DgRingPtr base);
  RingBuilder(VarPoolPtr pool, Field field);  // node over the constant sheaf

  int add_gen(const std::string& name, int degree, const OpenSet& support);
  // reuse an existing pool variable as a generator of this node (same graded
  // shape, possibly different differential)
  void adopt_gen(int var);
  void set_d(int var, GPoly value);
  void add_rel(Section s);

  const VarPoolPtr& pool() const { return pool_; }
  DgRingPtr build();

private:
  VarPoolPtr pool_;
  Field field_;
  DgRingPtr base_;
  std::vector<int> gens_;
  std::map<int, GPoly> d_;
  std::vector<Section> rels_;
};

// A morphism of DG ring sheaves, determined by generator images. Variables
// without an explicit image map to themselves (they must then be visible in
// the target tower).
struct SheafHom {
  DgRingPtr source;
  DgRingPtr target;
  std::map<int, Section> images;

  static SheafHom identity(const DgRingPtr& ring);
  GPoly apply(const GPoly& p) const;
  Section apply(const Section& s) const;
  std::map<int, GPoly> image_map() const;
};

SheafHom compose(const SheafHom& outer, const SheafHom& inner);

// Structural section check: every variable used must be alive on the whole
// open set.
void validate_section(const DgRing& ring, const Section& s);

// commutative DG ringed space
struct RingedSpace {
  SpacePtr space;
  DgRingPtr structure;
};

struct TensorResult {
  DgRingPtr ring;
  SheafHom inj0;
  SheafHom inj1;
  std::map<int, int> clone0;  // source var -> tensor var
  std::map<int, int> clone1;
};

// B tensor C over their common base: disjoint-union generators (cloned with
// fresh names), union of relations and differentials, Koszul signs stalkwise.
TensorResult tensor_over_A(const DgRingPtr& B, const DgRingPtr& C, const DgRingPtr& A);

// multiplication homomorphism B (x)_A B -> B for a tensor square
SheafHom multiplication_hom(const TensorResult& square, const DgRingPtr& B);

struct RestrictionResult {
  DgRingPtr ring;
  SpacePtr subspace;
  std::vector<size_t> old_of_new_points;
  std::map<int, int> var_map;  // old var -> new var
  VarPoolPtr pool;
};

// Restriction to an open (or, for closed-subspace pushforward bookkeeping,
// any) subset of points carrying the induced poset.
RestrictionResult restrict_to_open(const DgRingPtr& B, uint64_t members);

}  // namespace dgsheaf
