#pragma once

#include <initializer_list>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bft/expr.hpp"
#include "bft/rules.hpp"

namespace testutil {

template <typename F>
std::optional<bft::errc> code_of(F&& f) {
  try {
    (void)f();
    return std::nullopt;
  } catch (const bft::error& e) {
    return e.code();
  }
}

inline bft::Frame abc() { return bft::Frame({"A", "B", "C"}); }
inline bft::Frame ab() { return bft::Frame({"A", "B"}); }

inline bft::SetMask expr(const bft::Frame& f, const std::string& text) {
  return bft::parse_set_expression(f, text);
}

inline std::vector<bft::MassEntry> entries(
    const bft::Frame& f, std::initializer_list<std::pair<const char*, double>> init) {
  std::vector<bft::MassEntry> out;
  for (const auto& [e, m] : init) out.push_back(bft::MassEntry{expr(f, e), m});
  return out;
}

inline bft::Bba bba(const bft::Frame& f,
                    std::initializer_list<std::pair<const char*, double>> init) {
  return bft::Bba(f, entries(f, init));
}

/// The worked two-source example over {A, B, C}.
inline std::vector<bft::Bba> abc_sources(const bft::Frame& f) {
  return {bba(f, {{"A", 0.3}, {"B", 0.4}, {"C", 0.2}, {"A|B|C", 0.1}}),
          bba(f, {{"A", 0.5}, {"B", 0.2}, {"C", 0.1}, {"A|B|C", 0.2}})};
}

}  // namespace testutil
