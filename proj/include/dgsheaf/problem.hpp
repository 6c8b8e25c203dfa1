#pragma once

#include <map>
#include <string>

#include "dgsheaf/derived.hpp"

namespace dgsheaf {

// Parse error carrying enough position context for a one-line diagnostic.
struct ProblemError {
  std::string message;
};

struct WitnessSpec {
  std::string bplus;
  std::map<std::string, std::string> eta0, eta1;  // source gen -> expression in bplus
  std::string eps;
  std::string phi;
};

// A parsed and validated problem file: space, field, named rings built as
// towers, named morphisms, closed subschemes and homotopy witnesses, plus
// the task reference block.
struct ProblemFile {
  Field field;
  SpacePtr space;
  VarPoolPtr pool;
  DgRingPtr constant;
  std::map<std::string, DgRingPtr> rings;
  std::map<std::string, SheafHom> morphisms;
  std::map<std::string, ClosedSubspaceDatum> subschemes;
  std::map<std::string, WitnessSpec> witnesses;
  std::map<std::string, std::string> task;

  const DgRingPtr& ring(const std::string& name) const;
  const SheafHom& morphism(const std::string& name) const;
  const ClosedSubspaceDatum& subscheme(const std::string& name) const;
  std::string task_ref(const std::string& key) const;  // throws if missing

  OpenSet parse_open(const std::vector<std::string>& points) const;
};

// Throws ProblemError on malformed input. check_space_relation controls
// whether the leq block is validated as written (the validate command) or
// closed leniently (every other command).
ProblemFile load_problem(const std::string& json_text, bool check_space_relation = false);

}  // namespace dgsheaf
