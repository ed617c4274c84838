#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "bft/rules.hpp"

namespace bft {

enum class RuleKind { conjunctive, dsmc, wo, dwo, cprim };

const char* rule_name(RuleKind k);

/// Rule selector plus every parameter any rule consumes. Rules ignore the
/// parameters they do not use.
struct RuleConfig {
  RuleKind kind = RuleKind::conjunctive;
  WeightVector conflict_weights;       // W, for wo / dwo
  WeightVector intersection_weights;   // V, for dwo
  RedistributionSet redistributed;     // dwo / cprim
  ProportionalityFn f = ProportionalityFn::cardinal();
  TargetPolicy conflict_target = TargetPolicy::union_of_factors();
  TargetPolicy intersection_target = TargetPolicy::union_of_factors();
  ShareScope scope = ShareScope::components;
  bool ignorance_fallback_for_intersections = true;
  bool has_cprim_f = false;  // cprim requires an explicit proportionality choice
};

/// A fully validated fusion scenario: frame, model, sources and rule.
struct Scenario {
  Frame frame;
  Model model;
  std::vector<Bba> sources;
  RuleConfig rule;
};

/// Parses and validates a scenario document (JSON: frame labels, model
/// marking, sources as expression-to-mass maps, rule with parameters).
/// Malformed documents raise format errors; semantic problems raise
/// validation errors naming the offending field.
Scenario parse_scenario(std::string_view text);

std::string serialize_scenario(const Scenario& s);

bool scenario_equal(const Scenario& a, const Scenario& b);

/// Applies the scenario's rule, or `override_kind` instead of it.
FusedMass run_rule(const Scenario& s);
FusedMass run_rule(const Scenario& s, RuleKind override_kind);

/// Every element a fusion of the scenario's sources can mention: the
/// closure of the focal elements under intersection, plus total ignorance.
/// Ascending mask order; the raw empty set is excluded.
std::vector<SetMask> reachable_elements(const Scenario& s);

}  // namespace bft
