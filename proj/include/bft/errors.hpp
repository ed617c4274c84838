#pragma once

#include <stdexcept>
#include <string>

namespace bft {

enum class errc {
  // frame / set algebra
  duplicate_label,
  invalid_label,
  frame_too_small,
  frame_too_large,
  index_out_of_range,
  frame_mismatch,
  empty_element,
  // mass functions
  negative_mass,
  not_normalized,
  mass_on_empty_set,
  // combination rules
  no_sources,
  invalid_weights,
  redistribution_contains_empty,
  weight_on_redistributed,
  empty_context,
  custom_not_subset_of_union,
  empty_target,
  invalid_config,
  // expressions and scenario files
  unknown_label,
  syntax_error,
  format_error,
  validation_error,
  numeric_error,
};

const char* errc_name(errc c);

/// Library-wide exception carrying a machine-checkable code.
class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

}  // namespace bft
