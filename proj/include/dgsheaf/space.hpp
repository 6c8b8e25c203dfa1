#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace dgsheaf {

class FiniteSpace;
using SpacePtr = std::shared_ptr<const FiniteSpace>;

// Open set of a finite space, stored as a point bitmask. Opens are exactly
// the down-closed subsets of the specialization order.
struct OpenSet {
  SpacePtr space;
  uint64_t members = 0;

  bool contains(size_t point) const { return (members >> point) & 1; }
  bool empty() const { return members == 0; }
  bool subset_of(const OpenSet& o) const { return (members & ~o.members) == 0; }
  bool operator==(const OpenSet& o) const;
};

struct SpaceDiagnostic {
  std::string message;
};

// Finite T0 space as its specialization poset. x <= y reads "x lies in
// every open set containing y"; opens are the down-closed subsets.
class FiniteSpace : public std::enable_shared_from_this<FiniteSpace> {
public:
  // Relation pairs are (a, b) meaning a <= b. Reflexivity is implied and
  // transitive closure is taken; antisymmetry failures surface in validate().
  static SpacePtr make(std::vector<std::string> points,
                       const std::vector<std::pair<std::string, std::string>>& leq_pairs);

  size_t npoints() const { return points_.size(); }
  const std::vector<std::string>& points() const { return points_; }
  int point_index(const std::string& name) const;  // -1 if unknown
  bool leq(size_t a, size_t b) const { return leq_[a][b]; }

  OpenSet open(uint64_t members) const;
  OpenSet empty_open() const { return open(0); }
  OpenSet whole() const;
  OpenSet minimal_open(size_t point) const;  // { z : z <= point }
  bool is_down_closed(uint64_t members) const;
  bool is_up_closed(uint64_t members) const;

  std::vector<SpaceDiagnostic> validate() const;

private:
  std::vector<std::string> points_;
  std::vector<std::vector<bool>> leq_;
  std::vector<std::pair<size_t, size_t>> raw_pairs_;
  friend SpacePtr make_space_raw(std::vector<std::string>, std::vector<std::vector<bool>>,
                                 std::vector<std::pair<size_t, size_t>>);
};

OpenSet intersect(const OpenSet& a, const OpenSet& b);
OpenSet unite(const OpenSet& a, const OpenSet& b);
std::string open_to_string(const OpenSet& u);

// Checks the relation exactly as written (nothing implied): duplicates,
// unknown names, reflexivity, antisymmetry, transitivity. The lenient
// constructor FiniteSpace::make takes the closure instead; this is what the
// validate command runs.
std::vector<SpaceDiagnostic> check_relation(
    const std::vector<std::string>& points,
    const std::vector<std::pair<std::string, std::string>>& pairs);

// Induced poset on a subset of points (used for restriction and for closed
// subspaces). The returned space keeps only the selected points, renamed
// identically; index mapping is returned through old_of_new.
SpacePtr induced_subspace(const FiniteSpace& space, uint64_t members,
                          std::vector<size_t>& old_of_new);

}  // namespace dgsheaf
