#include "bft/table.hpp"

#include <algorithm>
#include <cstdio>

#include <json.hpp>

#include "bft/expr.hpp"

namespace bft {

namespace {

std::string format_mass(double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

}  // namespace

ResultTable make_result_table(const FusedMass& fused, std::string rule_desc,
                              std::string model_desc) {
  ResultTable t;
  t.rule = std::move(rule_desc);
  t.model = std::move(model_desc);
  for (const auto& e : fused.entries())
    t.rows.push_back(ResultRow{render_element(fused.frame(), e.element), e.mass});
  if (fused.conflict() > 0.0) t.rows.push_back(ResultRow{"EMPTY", fused.conflict()});
  std::sort(t.rows.begin(), t.rows.end(), [](const ResultRow& a, const ResultRow& b) {
    if (a.mass != b.mass) return a.mass > b.mass;
    return a.element < b.element;
  });
  return t;
}

std::string format_table(const ResultTable& t) {
  std::size_t width = 7;  // len("element")
  for (const auto& r : t.rows) width = std::max(width, r.element.size());
  std::string out;
  out += "# rule: " + t.rule + "\n";
  out += "# model: " + t.model + "\n";
  out += "element";
  out.append(width - 7 + 2, ' ');
  out += "mass\n";
  for (const auto& r : t.rows) {
    out += r.element;
    out.append(width - r.element.size() + 2, ' ');
    out += format_mass(r.mass);
    out += '\n';
  }
  return out;
}

std::string format_csv(const ResultTable& t) {
  std::string out = "element,mass\n";
  for (const auto& r : t.rows) out += r.element + "," + format_mass(r.mass) + "\n";
  return out;
}

std::string format_json(const ResultTable& t) {
  nlohmann::json doc;
  doc["rule"] = t.rule;
  doc["model"] = t.model;
  doc["masses"] = nlohmann::json::array();
  for (const auto& r : t.rows)
    doc["masses"].push_back({{"element", r.element}, {"mass", format_mass(r.mass)}});
  return doc.dump(2) + "\n";
}

std::string describe_model(const Frame& frame, const Model& model) {
  switch (model.kind()) {
    case Model::Kind::free: return "free";
    case Model::Kind::shafer: return "shafer";
    case Model::Kind::hybrid: {
      const SetMask removed = frame.element(frame.full_set().bits() & ~model.nonempty_regions());
      return "hybrid[empty: " + render_element(frame, removed) + "]";
    }
  }
  return "?";
}

}  // namespace bft
