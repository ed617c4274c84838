#pragma once

#include <string>
#include <string_view>

#include "bft/frame.hpp"

namespace bft {

/// Parses a set expression against the frame. Grammar: frame labels,
/// binary `&` (intersection), binary `|` (union), prefix `!` (complement),
/// parentheses, precedence ! > & > |, whitespace ignored. The keyword
/// `EMPTY` denotes the empty set. Unicode aliases accepted on input:
/// `∩` for `&`, `∪` for `|`, `τ` for `!`.
SetMask parse_set_expression(const Frame& frame, std::string_view text);

/// Canonical rendering: `EMPTY` for the empty set, the full union for
/// total ignorance, otherwise a minimal union of products of singletons
/// and complemented singletons (fewest products, then fewest literals).
/// Parsing the rendering yields the same mask.
std::string render_element(const Frame& frame, const SetMask& m);

/// Region bit vector as lowercase hex, region 1 at the least significant
/// bit, zero-padded to the frame's region width.
std::string to_hex(const SetMask& m);
SetMask from_hex(const Frame& frame, std::string_view hex);

}  // namespace bft
