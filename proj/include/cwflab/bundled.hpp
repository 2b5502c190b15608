#pragma once

// The bundled manifest (fixtures/c2.json) and the mutation manifests, built
// from the named fixtures so `cwf-lab fixtures emit` can regenerate them.

#include <string>

#include "json.hpp"

#include "cwflab/fixtures.hpp"
#include "cwflab/json_io.hpp"
#include "cwflab/pi.hpp"

namespace cwflab {

inline Json bundled_manifest() {
  Json j;
  j["v"] = 1;
  j["categories"] = {{"c1", {{"builtin", "terminal"}}},
                     {"c2", {{"builtin", "walking_arrow"}}},
                     {"chain2", {{"builtin", "chain"}, {"n", 2}}}};
  j["presheaves"] = {{"top1", {{"builtin", "terminal"}, {"base", "c1"}}},
                     {"top2", {{"builtin", "terminal"}, {"base", "c2"}}},
                     {"gamma2", to_json(fixtures::gamma2(), "c2")}};
  j["nats"] = {{"sigma2", {{"src", "top2"}, {"dst", "gamma2"}, {"components", to_json(fixtures::sigma2())["components"]}}}};
  auto a2 = to_json(fixtures::a2());
  a2["ctx"] = "gamma2";
  auto a1 = to_json(fixtures::constant_depty(terminal_presheaf(fixtures::c1()), fixtures::atoms({"u", "v"})));
  a1["ctx"] = "top1";
  j["deptys"] = {{"a1", a1}, {"a2", a2}};
  // A2 has exactly one term: u at b forces p at (a,0).
  j["terms"] = {{"m2", {{"ty", "a2"}, {"assign", {{"a|0", "p"}, {"a|1", "r"}, {"b|x", "u"}}}}}};
  j["base_cwfs"] = {{"d1", {{"builtin", "d1"}}}, {"d1_pi", {{"builtin", "d1_pi"}}}, {"dvar", {{"builtin", "dvar"}}}};
  j["suites"] = {"all"};
  j["budgets"] = {{"pi_fiber_budget", kDefaultPiFiberBudget},
                  {"fuel", 2},
                  {"fixture_bounds", {{"max_objects", 3}, {"max_card", 3}, {"cap", 128}}}};
  return j;
}

/// C2 with f∘id_a redirected to id_a: a composition table that type-checks
/// but breaks the identity law.
inline Json broken_composition_manifest() {
  auto c = to_json(fixtures::c2());
  for (auto& row : c["compose"]) {
    if (row["g"] == "f" && row["f"] == c["identity"]["a"]) row["result"] = c["identity"]["a"];
  }
  Json j;
  j["v"] = 1;
  j["categories"] = {{"c2bad", c}};
  j["suites"] = {"fincat"};
  return j;
}

/// A type whose context names a presheaf that is never declared.
inline Json unknown_reference_manifest() {
  Json j;
  j["v"] = 1;
  j["categories"] = {{"c2", {{"builtin", "walking_arrow"}}}};
  auto a2 = to_json(fixtures::a2());
  a2["ctx"] = "gamma3";
  j["deptys"] = {{"a2", a2}};
  j["suites"] = {"cwf"};
  return j;
}

}  // namespace cwflab
