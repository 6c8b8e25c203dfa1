#include "dgsheaf/space.hpp"

#include <stdexcept>

namespace dgsheaf {

bool OpenSet::operator==(const OpenSet& o) const {
  if (!space || !o.space) throw std::logic_error("OpenSet: missing space");
  if (space.get() != o.space.get()) throw std::invalid_argument("OpenSet: space mismatch");
  return members == o.members;
}

SpacePtr make_space_raw(std::vector<std::string> points, std::vector<std::vector<bool>> leq,
                        std::vector<std::pair<size_t, size_t>> raw) {
  auto sp = std::make_shared<FiniteSpace>();
  sp->points_ = std::move(points);
  sp->leq_ = std::move(leq);
  sp->raw_pairs_ = std::move(raw);
  return sp;
}

SpacePtr FiniteSpace::make(std::vector<std::string> points,
                           const std::vector<std::pair<std::string, std::string>>& leq_pairs) {
  size_t n = points.size();
  if (n > 60) throw std::invalid_argument("FiniteSpace: at most 60 points supported");
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      if (points[i] == points[j]) throw std::invalid_argument("FiniteSpace: duplicate point name");

  std::vector<std::vector<bool>> leq(n, std::vector<bool>(n, false));
  for (size_t i = 0; i < n; ++i) leq[i][i] = true;
  std::vector<std::pair<size_t, size_t>> raw;
  auto idx = [&](const std::string& name) {
    for (size_t i = 0; i < n; ++i)
      if (points[i] == name) return static_cast<int>(i);
    return -1;
  };
  for (const auto& [a, b] : leq_pairs) {
    int ia = idx(a), ib = idx(b);
    if (ia < 0 || ib < 0) throw std::invalid_argument("FiniteSpace: unknown point in relation");
    leq[static_cast<size_t>(ia)][static_cast<size_t>(ib)] = true;
    raw.emplace_back(static_cast<size_t>(ia), static_cast<size_t>(ib));
  }
  // transitive closure
  for (size_t k = 0; k < n; ++k)
    for (size_t i = 0; i < n; ++i)
      if (leq[i][k])
        for (size_t j = 0; j < n; ++j)
          if (leq[k][j]) leq[i][j] = true;
  return make_space_raw(std::move(points), std::move(leq), std::move(raw));
}

int FiniteSpace::point_index(const std::string& name) const {
  for (size_t i = 0; i < points_.size(); ++i)
    if (points_[i] == name) return static_cast<int>(i);
  return -1;
}

OpenSet FiniteSpace::open(uint64_t members) const {
  OpenSet u{shared_from_this(), members};
  if (!is_down_closed(members)) throw std::invalid_argument("OpenSet: set is not down-closed");
  return u;
}

OpenSet FiniteSpace::whole() const {
  uint64_t all = points_.empty() ? 0 : ((1ull << points_.size()) - 1);
  return OpenSet{shared_from_this(), all};
}

OpenSet FiniteSpace::minimal_open(size_t point) const {
  if (point >= points_.size()) throw std::out_of_range("minimal_open: unknown point");
  uint64_t m = 0;
  for (size_t z = 0; z < points_.size(); ++z)
    if (leq_[z][point]) m |= 1ull << z;
  return OpenSet{shared_from_this(), m};
}

bool FiniteSpace::is_down_closed(uint64_t members) const {
  for (size_t y = 0; y < points_.size(); ++y) {
    if (!((members >> y) & 1)) continue;
    for (size_t x = 0; x < points_.size(); ++x)
      if (leq_[x][y] && !((members >> x) & 1)) return false;
  }
  return true;
}

bool FiniteSpace::is_up_closed(uint64_t members) const {
  for (size_t x = 0; x < points_.size(); ++x) {
    if (!((members >> x) & 1)) continue;
    for (size_t y = 0; y < points_.size(); ++y)
      if (leq_[x][y] && !((members >> y) & 1)) return false;
  }
  return true;
}

std::vector<SpaceDiagnostic> FiniteSpace::validate() const {
  std::vector<SpaceDiagnostic> out;
  size_t n = points_.size();
  for (size_t i = 0; i < n; ++i)
    if (!leq_[i][i]) out.push_back({"reflexivity violated at " + points_[i]});
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      if (i != j && leq_[i][j] && leq_[j][i])
        out.push_back({"antisymmetry violated at (" + points_[i] + ", " + points_[j] + ")"});
  // transitivity holds by construction; report only if raw pairs referenced
  // a closure that collapses (covered by antisymmetry above)
  return out;
}

std::vector<SpaceDiagnostic> check_relation(
    const std::vector<std::string>& points,
    const std::vector<std::pair<std::string, std::string>>& pairs) {
  std::vector<SpaceDiagnostic> out;
  size_t n = points.size();
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      if (points[i] == points[j]) out.push_back({"duplicate point name " + points[i]});
  auto idx = [&](const std::string& name) {
    for (size_t i = 0; i < n; ++i)
      if (points[i] == name) return static_cast<int>(i);
    return -1;
  };
  std::vector<std::vector<bool>> rel(n, std::vector<bool>(n, false));
  for (const auto& [a, b] : pairs) {
    int ia = idx(a), ib = idx(b);
    if (ia < 0) out.push_back({"unknown point " + a + " in relation"});
    if (ib < 0) out.push_back({"unknown point " + b + " in relation"});
    if (ia >= 0 && ib >= 0) rel[static_cast<size_t>(ia)][static_cast<size_t>(ib)] = true;
  }
  for (size_t i = 0; i < n; ++i)
    if (!rel[i][i]) out.push_back({"reflexivity missing at " + points[i]});
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      if (i != j && rel[i][j] && rel[j][i])
        out.push_back({"antisymmetry violated at (" + points[i] + ", " + points[j] + ")"});
  for (size_t i = 0; i < n; ++i)
    for (size_t k = 0; k < n; ++k)
      if (rel[i][k])
        for (size_t j = 0; j < n; ++j)
          if (rel[k][j] && !rel[i][j])
            out.push_back({"transitivity missing: " + points[i] + " <= " + points[k] + " <= " +
                           points[j]});
  return out;
}

OpenSet intersect(const OpenSet& a, const OpenSet& b) {
  if (a.space.get() != b.space.get()) throw std::invalid_argument("intersect: space mismatch");
  return OpenSet{a.space, a.members & b.members};
}

OpenSet unite(const OpenSet& a, const OpenSet& b) {
  if (a.space.get() != b.space.get()) throw std::invalid_argument("unite: space mismatch");
  return OpenSet{a.space, a.members | b.members};
}

std::string open_to_string(const OpenSet& u) {
  std::string s = "{";
  bool first = true;
  for (size_t i = 0; i < u.space->npoints(); ++i) {
    if (!u.contains(i)) continue;
    if (!first) s += ",";
    s += u.space->points()[i];
    first = false;
  }
  return s + "}";
}

SpacePtr induced_subspace(const FiniteSpace& space, uint64_t members,
                          std::vector<size_t>& old_of_new) {
  old_of_new.clear();
  std::vector<std::string> pts;
  for (size_t i = 0; i < space.npoints(); ++i)
    if ((members >> i) & 1) {
      old_of_new.push_back(i);
      pts.push_back(space.points()[i]);
    }
  std::vector<std::pair<std::string, std::string>> pairs;
  for (size_t a = 0; a < old_of_new.size(); ++a)
    for (size_t b = 0; b < old_of_new.size(); ++b)
      if (space.leq(old_of_new[a], old_of_new[b])) pairs.emplace_back(pts[a], pts[b]);
  return FiniteSpace::make(std::move(pts), pairs);
}

}  // namespace dgsheaf
