#include "dgsheaf/problem.hpp"

#include <json.hpp>

#include "dgsheaf/stalk.hpp"

namespace dgsheaf {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& msg) { throw ProblemError{msg}; }

json expect(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) fail(where + ": missing field '" + key + "'");
  return j.at(key);
}

}  // namespace

const DgRingPtr& ProblemFile::ring(const std::string& name) const {
  auto it = rings.find(name);
  if (it == rings.end()) fail("unknown ring '" + name + "'");
  return it->second;
}

const SheafHom& ProblemFile::morphism(const std::string& name) const {
  auto it = morphisms.find(name);
  if (it == morphisms.end()) fail("unknown morphism '" + name + "'");
  return it->second;
}

const ClosedSubspaceDatum& ProblemFile::subscheme(const std::string& name) const {
  auto it = subschemes.find(name);
  if (it == subschemes.end()) fail("unknown subscheme '" + name + "'");
  return it->second;
}

std::string ProblemFile::task_ref(const std::string& key) const {
  auto it = task.find(key);
  if (it == task.end()) fail("task block is missing '" + key + "'");
  return it->second;
}

OpenSet ProblemFile::parse_open(const std::vector<std::string>& points) const {
  uint64_t m = 0;
  for (const auto& p : points) {
    int idx = space->point_index(p);
    if (idx < 0) fail("unknown point '" + p + "' in open set");
    m |= 1ull << idx;
  }
  if (!space->is_down_closed(m)) fail("open set is not down-closed");
  return OpenSet{space, m};
}

ProblemFile load_problem(const std::string& text, bool check_space_relation) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    fail(std::string("invalid JSON: ") + e.what());
  }

  ProblemFile pf;

  // field
  {
    json f = expect(j, "field", "problem");
    if (f.is_string() && f.get<std::string>() == "Q") {
      pf.field = Field::Q();
    } else if (f.is_object() && f.contains("p")) {
      pf.field = Field::Fp(f.at("p").get<uint64_t>());
    } else {
      fail("field must be \"Q\" or {\"p\": prime}");
    }
  }

  // space
  {
    json s = expect(j, "space", "problem");
    std::vector<std::string> points = expect(s, "points", "space").get<std::vector<std::string>>();
    std::vector<std::pair<std::string, std::string>> pairs;
    if (s.contains("leq"))
      for (const auto& pr : s.at("leq")) {
        if (!pr.is_array() || pr.size() != 2) fail("space.leq entries must be pairs");
        pairs.emplace_back(pr[0].get<std::string>(), pr[1].get<std::string>());
      }
    if (check_space_relation) {
      auto diags = check_relation(points, pairs);
      if (!diags.empty()) fail("space relation: " + diags.front().message);
    }
    pf.space = FiniteSpace::make(points, pairs);
    auto post = pf.space->validate();
    if (!post.empty()) fail("space relation: " + post.front().message);
  }

  pf.pool = std::make_shared<VarPool>(pf.space);
  pf.constant = DgRing::constant_sheaf(pf.pool, pf.field);

  auto open_of = [&](const json& arr) {
    return pf.parse_open(arr.get<std::vector<std::string>>());
  };

  // rings, in file order; bases must be declared earlier
  if (j.contains("rings")) {
    for (const auto& r : j.at("rings")) {
      std::string name = expect(r, "name", "ring").get<std::string>();
      if (pf.rings.count(name)) fail("duplicate ring '" + name + "'");
      DgRingPtr base = pf.constant;
      if (r.contains("base") && !r.at("base").is_null())
        base = pf.ring(r.at("base").get<std::string>());
      RingBuilder bld(base);
      std::vector<std::pair<int, json>> dvals;
      if (r.contains("generators"))
        for (const auto& g : r.at("generators")) {
          std::string id = expect(g, "id", "generator").get<std::string>();
          int degree = expect(g, "degree", "generator").get<int>();
          OpenSet supp =
              g.contains("support") ? open_of(g.at("support")) : pf.space->whole();
          int var = -1;
          try {
            var = bld.add_gen(id, degree, supp);
          } catch (const std::exception& e) {
            fail(std::string("generator '") + id + "': " + e.what());
          }
          if (g.contains("d")) dvals.emplace_back(var, g.at("d"));
        }
      // differentials and relations may reference any generator of the tower
      // including the ones declared in this block
      std::map<std::string, int> table = base->name_table();
      if (r.contains("generators"))
        for (const auto& g : r.at("generators")) {
          std::string id = g.at("id").get<std::string>();
          table[id] = pf.pool->find(id);
        }
      auto parse_val = [&](const json& v, const OpenSet& fallback_open) -> Section {
        if (v.is_string()) {
          try {
            return Section{fallback_open, parse_gpoly(*pf.pool, table, pf.field, v.get<std::string>())};
          } catch (const std::exception& e) {
            fail(std::string("polynomial: ") + e.what());
          }
        }
        if (v.is_object()) {
          OpenSet o = v.contains("open") ? open_of(v.at("open")) : fallback_open;
          try {
            return Section{
                o, parse_gpoly(*pf.pool, table, pf.field, expect(v, "value", "section").get<std::string>())};
          } catch (const std::exception& e) {
            fail(std::string("polynomial: ") + e.what());
          }
        }
        fail("section must be a string or {open, value}");
      };
      for (const auto& [var, dj] : dvals) {
        Section s = parse_val(dj, pf.pool->support(var));
        try {
          bld.set_d(var, s.value);
        } catch (const std::exception& e) {
          fail(std::string("differential of '") + pf.pool->name(var) + "': " + e.what());
        }
      }
      if (r.contains("relations"))
        for (const auto& rel : r.at("relations")) {
          Section s = parse_val(rel, pf.space->whole());
          bld.add_rel(s);
        }
      try {
        pf.rings.emplace(name, bld.build());
      } catch (const std::exception& e) {
        fail("ring '" + name + "': " + e.what());
      }
    }
  }

  // morphisms
  if (j.contains("morphisms")) {
    for (const auto& m : j.at("morphisms")) {
      std::string name = expect(m, "name", "morphism").get<std::string>();
      SheafHom h;
      h.source = pf.ring(expect(m, "source", "morphism").get<std::string>());
      h.target = pf.ring(expect(m, "target", "morphism").get<std::string>());
      std::map<std::string, int> ttable = h.target->name_table();
      if (m.contains("images"))
        for (auto it = m.at("images").begin(); it != m.at("images").end(); ++it) {
          int var = pf.pool->find(it.key());
          if (var < 0 || !h.source->has_var(var))
            fail("morphism '" + name + "': image for unknown generator '" + it.key() + "'");
          OpenSet fallback = pf.pool->support(var);
          const json& v = it.value();
          std::string exprs;
          OpenSet o = fallback;
          if (v.is_string()) {
            exprs = v.get<std::string>();
          } else if (v.is_object()) {
            exprs = expect(v, "value", "image").get<std::string>();
            if (v.contains("open")) o = pf.parse_open(v.at("open").get<std::vector<std::string>>());
          } else {
            fail("morphism image must be a string or {open, value}");
          }
          try {
            h.images[var] = Section{o, parse_gpoly(*pf.pool, ttable, pf.field, exprs)};
          } catch (const std::exception& e) {
            fail("morphism '" + name + "': " + e.what());
          }
        }
      pf.morphisms.emplace(name, std::move(h));
    }
  }

  // closed subschemes
  if (j.contains("subschemes")) {
    for (const auto& s : j.at("subschemes")) {
      std::string name = expect(s, "name", "subscheme").get<std::string>();
      ClosedSubspaceDatum d;
      std::string over = s.contains("ring") ? s.at("ring").get<std::string>()
                                            : (pf.task.count("ring") ? pf.task.at("ring") : "");
      // sections parse against the named structure ring when given, else the
      // task ring is resolved by the command later; store raw via first ring
      DgRingPtr structure;
      if (!over.empty()) structure = pf.ring(over);
      else if (pf.rings.size() == 1) structure = pf.rings.begin()->second;
      if (!structure) fail("subscheme '" + name + "': no structure ring to parse against");
      std::map<std::string, int> table = structure->name_table();
      for (const auto& gj : expect(s, "ideal", "subscheme")) {
        if (gj.is_string()) {
          d.ideal_gens.push_back(Section{
              pf.space->whole(), parse_gpoly(*pf.pool, table, pf.field, gj.get<std::string>())});
        } else {
          OpenSet o = open_of(expect(gj, "open", "ideal section"));
          d.ideal_gens.push_back(Section{
              o, parse_gpoly(*pf.pool, table, pf.field, expect(gj, "value", "ideal section").get<std::string>())});
        }
      }
      uint64_t supp = 0;
      for (const auto& p : expect(s, "support", "subscheme").get<std::vector<std::string>>()) {
        int idx = pf.space->point_index(p);
        if (idx < 0) fail("subscheme '" + name + "': unknown point " + p);
        supp |= 1ull << idx;
      }
      d.support = supp;
      pf.subschemes.emplace(name, std::move(d));
    }
  }

  // homotopy witnesses
  if (j.contains("witnesses")) {
    for (const auto& w : j.at("witnesses")) {
      std::string name = expect(w, "name", "witness").get<std::string>();
      WitnessSpec ws;
      ws.bplus = expect(w, "bplus", "witness").get<std::string>();
      ws.eps = expect(w, "eps", "witness").get<std::string>();
      ws.phi = expect(w, "phi", "witness").get<std::string>();
      if (w.contains("eta0"))
        for (auto it = w.at("eta0").begin(); it != w.at("eta0").end(); ++it)
          ws.eta0[it.key()] = it.value().get<std::string>();
      if (w.contains("eta1"))
        for (auto it = w.at("eta1").begin(); it != w.at("eta1").end(); ++it)
          ws.eta1[it.key()] = it.value().get<std::string>();
      pf.witnesses.emplace(name, std::move(ws));
    }
  }

  if (j.contains("task")) {
    for (auto it = j.at("task").begin(); it != j.at("task").end(); ++it) {
      if (it.value().is_string())
        pf.task[it.key()] = it.value().get<std::string>();
      else
        pf.task[it.key()] = it.value().dump();
    }
  }

  return pf;
}

}  // namespace dgsheaf
