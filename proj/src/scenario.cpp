#include "bft/scenario.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <set>

#include <json.hpp>

#include "bft/expr.hpp"

namespace bft {

using json = nlohmann::json;

const char* rule_name(RuleKind k) {
  switch (k) {
    case RuleKind::conjunctive: return "conjunctive";
    case RuleKind::dsmc: return "dsmc";
    case RuleKind::wo: return "wo";
    case RuleKind::dwo: return "dwo";
    case RuleKind::cprim: return "cprim";
  }
  return "?";
}

namespace {

[[noreturn]] void ffail(const std::string& path, const std::string& what) {
  fail(errc::format_error, path + ": " + what);
}

// Expression and format problems keep their parse-class codes; everything
// else coming out of the domain constructors becomes a validation error,
// tagged with the field path either way.
template <typename F>
auto with_path(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const error& e) {
    const errc c = e.code();
    if (c == errc::syntax_error || c == errc::unknown_label || c == errc::format_error)
      throw error(c, path + ": " + e.what());
    throw error(errc::validation_error, path + ": " + e.what());
  }
}

double parse_mass_value(const json& v, const std::string& path) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    char* end = nullptr;
    const double x = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0') ffail(path, "'" + s + "' is not a number");
    return x;
  }
  ffail(path, "expected a number or a decimal string");
}

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<MassEntry> parse_mass_map(const Frame& frame, const json& obj,
                                      const std::string& path) {
  if (!obj.is_object()) ffail(path, "expected an object of expression -> mass");
  std::vector<MassEntry> entries;
  for (const auto& [key, value] : obj.items()) {
    const std::string p = path + "['" + key + "']";
    const SetMask element =
        with_path(p, [&] { return parse_set_expression(frame, key); });
    entries.push_back(MassEntry{element, parse_mass_value(value, p)});
  }
  return entries;
}

WeightVector parse_weights(const Frame& frame, const json& rule, const char* field,
                           const std::string& path) {
  if (!rule.contains(field)) return WeightVector{};
  return with_path(path, [&] { return WeightVector(frame, parse_mass_map(frame, rule[field], path)); });
}

TargetPolicy parse_target(const Frame& frame, const json& v, const std::string& path) {
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "union") return TargetPolicy::union_of_factors();
    if (s == "union_complement") return TargetPolicy::union_complement();
    ffail(path, "unknown target policy '" + s + "'");
  }
  if (v.is_object() && v.contains("subset") && v["subset"].is_string()) {
    const SetMask m = with_path(path + ".subset", [&] {
      return parse_set_expression(frame, v["subset"].get<std::string>());
    });
    return TargetPolicy::custom_subset(m);
  }
  ffail(path, "expected 'union', 'union_complement' or {\"subset\": expr}");
}

ProportionalityFn parse_f(const Frame& frame, const json& v, const std::string& path) {
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "mass") return ProportionalityFn::mass_conj();
    if (s == "cardinal") return ProportionalityFn::cardinal();
    if (s == "cardinal_ratio") return ProportionalityFn::cardinal_ratio();
    if (s == "mass_plus_cardinal") return ProportionalityFn::mass_plus_cardinal();
    ffail(path, "unknown proportionality '" + s + "'");
  }
  if (v.is_object() && v.contains("table")) {
    auto entries = parse_mass_map(frame, v["table"], path + ".table");
    return with_path(path + ".table", [&] { return ProportionalityFn::custom(frame, std::move(entries)); });
  }
  ffail(path, "expected a proportionality name or {\"table\": {...}}");
}

json target_to_json(const Frame& frame, const TargetPolicy& p) {
  switch (p.kind()) {
    case TargetPolicy::Kind::union_of_factors: return "union";
    case TargetPolicy::Kind::union_complement: return "union_complement";
    case TargetPolicy::Kind::custom_subset: return json{{"subset", render_element(frame, p.custom())}};
  }
  return "union";
}

json mass_map_to_json(const Frame& frame, std::span<const MassEntry> entries) {
  json obj = json::object();
  for (const auto& e : entries) obj[render_element(frame, e.element)] = format_double(e.mass);
  return obj;
}

}  // namespace

Scenario parse_scenario(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    fail(errc::format_error, std::string("scenario is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) fail(errc::format_error, "scenario must be a JSON object");

  if (!doc.contains("frame") || !doc["frame"].is_array())
    ffail("frame", "expected an array of labels");
  std::vector<std::string> labels;
  for (const auto& l : doc["frame"]) {
    if (!l.is_string()) ffail("frame", "labels must be strings");
    labels.push_back(l.get<std::string>());
  }
  Frame frame = with_path("frame", [&] { return Frame(labels); });

  Model model = Model::free_model(frame);
  if (doc.contains("model")) {
    const json& m = doc["model"];
    if (m.is_string()) {
      const std::string s = m.get<std::string>();
      if (s == "free")
        model = Model::free_model(frame);
      else if (s == "shafer")
        model = Model::shafer(frame);
      else
        ffail("model", "unknown model '" + s + "'");
    } else if (m.is_object() && m.contains("empty") && m["empty"].is_array()) {
      std::vector<SetMask> empties;
      std::size_t i = 0;
      for (const auto& e : m["empty"]) {
        const std::string p = "model.empty[" + std::to_string(i++) + "]";
        if (!e.is_string()) ffail(p, "expected an expression string");
        empties.push_back(with_path(p, [&] { return parse_set_expression(frame, e.get<std::string>()); }));
      }
      model = Model::hybrid(frame, empties);
    } else {
      ffail("model", "expected 'free', 'shafer' or {\"empty\": [expr...]}");
    }
  }

  if (!doc.contains("sources") || !doc["sources"].is_array() || doc["sources"].empty())
    ffail("sources", "expected a non-empty array of mass maps");
  std::vector<Bba> sources;
  std::size_t i = 0;
  for (const auto& s : doc["sources"]) {
    const std::string p = "sources[" + std::to_string(i++) + "]";
    auto entries = parse_mass_map(frame, s, p);
    sources.push_back(with_path(p, [&] { return Bba(frame, std::move(entries)); }));
  }

  RuleConfig rule;
  if (doc.contains("rule")) {
    const json& r = doc["rule"];
    if (!r.is_object() || !r.contains("name") || !r["name"].is_string())
      ffail("rule", "expected an object with a 'name'");
    const std::string name = r["name"].get<std::string>();
    if (name == "conjunctive")
      rule.kind = RuleKind::conjunctive;
    else if (name == "dsmc")
      rule.kind = RuleKind::dsmc;
    else if (name == "wo")
      rule.kind = RuleKind::wo;
    else if (name == "dwo")
      rule.kind = RuleKind::dwo;
    else if (name == "cprim")
      rule.kind = RuleKind::cprim;
    else
      ffail("rule.name", "unknown rule '" + name + "'");

    rule.conflict_weights = parse_weights(frame, r, "weights", "rule.weights");
    rule.intersection_weights =
        parse_weights(frame, r, "intersection_weights", "rule.intersection_weights");

    if (r.contains("redistribute")) {
      if (!r["redistribute"].is_array()) ffail("rule.redistribute", "expected an array of expressions");
      std::vector<SetMask> elems;
      std::size_t k = 0;
      for (const auto& e : r["redistribute"]) {
        const std::string p = "rule.redistribute[" + std::to_string(k++) + "]";
        if (!e.is_string()) ffail(p, "expected an expression string");
        elems.push_back(with_path(p, [&] { return parse_set_expression(frame, e.get<std::string>()); }));
      }
      const bool accept_unions = r.value("accept_union_elements", false);
      rule.redistributed = with_path("rule.redistribute", [&] {
        return RedistributionSet(model, std::move(elems), accept_unions);
      });
    }

    if (r.contains("f")) {
      rule.f = parse_f(frame, r["f"], "rule.f");
      rule.has_cprim_f = true;
    }
    if (r.contains("conflict_target"))
      rule.conflict_target = parse_target(frame, r["conflict_target"], "rule.conflict_target");
    if (r.contains("intersection_target"))
      rule.intersection_target =
          parse_target(frame, r["intersection_target"], "rule.intersection_target");
    if (r.contains("scope")) {
      const std::string s = r["scope"].is_string() ? r["scope"].get<std::string>() : "";
      if (s == "components")
        rule.scope = ShareScope::components;
      else if (s == "all_subsets")
        rule.scope = ShareScope::all_nonempty_subsets;
      else
        ffail("rule.scope", "expected 'components' or 'all_subsets'");
    }
    if (r.contains("ignorance_fallback_for_intersections")) {
      if (!r["ignorance_fallback_for_intersections"].is_boolean())
        ffail("rule.ignorance_fallback_for_intersections", "expected a boolean");
      rule.ignorance_fallback_for_intersections =
          r["ignorance_fallback_for_intersections"].get<bool>();
    }
  }

  return Scenario{std::move(frame), model, std::move(sources), std::move(rule)};
}

std::string serialize_scenario(const Scenario& s) {
  json doc;
  doc["frame"] = s.frame.labels();
  switch (s.model.kind()) {
    case Model::Kind::free: doc["model"] = "free"; break;
    case Model::Kind::shafer: doc["model"] = "shafer"; break;
    case Model::Kind::hybrid: {
      const SetMask removed =
          s.frame.element(s.frame.full_set().bits() & ~s.model.nonempty_regions());
      doc["model"] = json{{"empty", json::array({render_element(s.frame, removed)})}};
      break;
    }
  }
  doc["sources"] = json::array();
  for (const auto& b : s.sources) doc["sources"].push_back(mass_map_to_json(s.frame, b.focal_elements()));

  json rule;
  rule["name"] = rule_name(s.rule.kind);
  if (!s.rule.conflict_weights.absent())
    rule["weights"] = mass_map_to_json(s.frame, s.rule.conflict_weights.weights());
  if (!s.rule.intersection_weights.absent())
    rule["intersection_weights"] = mass_map_to_json(s.frame, s.rule.intersection_weights.weights());
  if (!s.rule.redistributed.empty()) {
    json arr = json::array();
    for (const auto& e : s.rule.redistributed.elements()) arr.push_back(render_element(s.frame, e));
    rule["redistribute"] = arr;
    rule["accept_union_elements"] = true;  // already validated; keep reparse permissive
  }
  if (s.rule.has_cprim_f) {
    switch (s.rule.f.kind()) {
      case ProportionalityFn::Kind::mass_conj: rule["f"] = "mass"; break;
      case ProportionalityFn::Kind::cardinal: rule["f"] = "cardinal"; break;
      case ProportionalityFn::Kind::cardinal_ratio: rule["f"] = "cardinal_ratio"; break;
      case ProportionalityFn::Kind::mass_plus_cardinal: rule["f"] = "mass_plus_cardinal"; break;
      case ProportionalityFn::Kind::custom_table:
        rule["f"] = json{{"table", mass_map_to_json(s.frame, s.rule.f.table())}};
        break;
    }
    rule["conflict_target"] = target_to_json(s.frame, s.rule.conflict_target);
    rule["intersection_target"] = target_to_json(s.frame, s.rule.intersection_target);
    rule["scope"] = s.rule.scope == ShareScope::components ? "components" : "all_subsets";
    rule["ignorance_fallback_for_intersections"] = s.rule.ignorance_fallback_for_intersections;
  }
  doc["rule"] = rule;
  return doc.dump(2);
}

bool scenario_equal(const Scenario& a, const Scenario& b) {
  auto spans_equal = [](std::span<const MassEntry> x, std::span<const MassEntry> y) {
    return std::equal(x.begin(), x.end(), y.begin(), y.end());
  };
  if (!(a.frame == b.frame) || !(a.model == b.model)) return false;
  if (a.sources != b.sources) return false;
  const RuleConfig& ra = a.rule;
  const RuleConfig& rb = b.rule;
  if (ra.kind != rb.kind || ra.scope != rb.scope ||
      ra.ignorance_fallback_for_intersections != rb.ignorance_fallback_for_intersections ||
      ra.has_cprim_f != rb.has_cprim_f)
    return false;
  if (!spans_equal(ra.conflict_weights.weights(), rb.conflict_weights.weights())) return false;
  if (!spans_equal(ra.intersection_weights.weights(), rb.intersection_weights.weights())) return false;
  if (!std::equal(ra.redistributed.elements().begin(), ra.redistributed.elements().end(),
                  rb.redistributed.elements().begin(), rb.redistributed.elements().end()))
    return false;
  if (ra.f.kind() != rb.f.kind() || !spans_equal(ra.f.table(), rb.f.table())) return false;
  if (!(ra.conflict_target == rb.conflict_target) ||
      !(ra.intersection_target == rb.intersection_target))
    return false;
  return true;
}

FusedMass run_rule(const Scenario& s, RuleKind kind) {
  switch (kind) {
    case RuleKind::conjunctive:
      return conjunctive_combine(s.sources, s.model).fused;
    case RuleKind::dsmc:
      return dsmc_combine(s.sources);
    case RuleKind::wo:
      return wo_combine(s.sources, s.model, s.rule.conflict_weights);
    case RuleKind::dwo:
      return dwo_combine(s.sources, s.model, s.rule.conflict_weights,
                         s.rule.intersection_weights, s.rule.redistributed);
    case RuleKind::cprim: {
      if (!s.rule.has_cprim_f)
        fail(errc::invalid_config, "cprim needs an explicit proportionality function 'f'");
      CprimConfig cfg;
      cfg.f = s.rule.f;
      cfg.conflict_target = s.rule.conflict_target;
      cfg.intersection_target = s.rule.intersection_target;
      cfg.scope = s.rule.scope;
      cfg.redistributed = s.rule.redistributed;
      cfg.ignorance_fallback_for_intersections = s.rule.ignorance_fallback_for_intersections;
      return cprim_combine(s.sources, s.model, cfg);
    }
  }
  fail(errc::invalid_config, "unknown rule");
}

FusedMass run_rule(const Scenario& s) { return run_rule(s, s.rule.kind); }

std::vector<SetMask> reachable_elements(const Scenario& s) {
  std::set<mask_bits> seen;
  seen.insert(s.frame.full_set().bits());
  for (const auto& b : s.sources)
    for (const auto& e : b.focal_elements()) seen.insert(e.element.bits());
  // fixpoint under pairwise intersection
  for (bool grew = true; grew;) {
    grew = false;
    const std::vector<mask_bits> snapshot(seen.begin(), seen.end());
    for (std::size_t i = 0; i < snapshot.size(); ++i)
      for (std::size_t j = i + 1; j < snapshot.size(); ++j)
        if (seen.insert(snapshot[i] & snapshot[j]).second) grew = true;
  }
  seen.erase(0);
  std::vector<SetMask> out;
  out.reserve(seen.size());
  for (mask_bits b : seen) out.push_back(s.frame.element(b));
  return out;
}

}  // namespace bft
