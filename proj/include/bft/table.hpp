#pragma once

#include <string>
#include <vector>

#include "bft/bba.hpp"

namespace bft {

struct ResultRow {
  std::string element;
  double mass = 0.0;
};

/// Rendered fusion output: rows ordered by descending mass, ties broken by
/// ascending element string; conflict (if any) appears as an EMPTY row so
/// the rows always sum to one.
struct ResultTable {
  std::string rule;
  std::string model;
  std::vector<ResultRow> rows;
};

ResultTable make_result_table(const FusedMass& fused, std::string rule_desc,
                              std::string model_desc);

std::string format_table(const ResultTable& t);
/// Header `element,mass`; masses with 12 significant digits.
std::string format_csv(const ResultTable& t);
std::string format_json(const ResultTable& t);

/// Model description for provenance headers ("free", "shafer", or the
/// hybrid's emptied regions).
std::string describe_model(const Frame& frame, const Model& model);

}  // namespace bft
