#include "bft/bba.hpp"

#include <algorithm>
#include <cmath>

namespace bft {

void canonicalize_entries(const Frame& frame, std::vector<MassEntry>& entries) {
  for (const auto& e : entries) {
    frame.check_owns(e.element);
    if (!std::isfinite(e.mass)) fail(errc::numeric_error, "non-finite mass value");
    if (e.mass < 0.0) fail(errc::negative_mass, "negative mass value");
  }
  std::sort(entries.begin(), entries.end(),
            [](const MassEntry& a, const MassEntry& b) { return a.element < b.element; });
  std::vector<MassEntry> merged;
  merged.reserve(entries.size());
  for (const auto& e : entries) {
    if (!merged.empty() && merged.back().element == e.element)
      merged.back().mass += e.mass;
    else
      merged.push_back(e);
  }
  std::erase_if(merged, [](const MassEntry& e) { return e.mass == 0.0; });
  entries = std::move(merged);
}

namespace {

double lookup(std::span<const MassEntry> entries, const SetMask& element) {
  auto it = std::lower_bound(entries.begin(), entries.end(), element,
                             [](const MassEntry& e, const SetMask& m) { return e.element < m; });
  if (it != entries.end() && it->element == element) return it->mass;
  return 0.0;
}

}  // namespace

Bba::Bba(const Frame& frame, std::vector<MassEntry> assignments) : frame_(frame) {
  canonicalize_entries(frame_, assignments);
  double sum = 0.0;
  for (const auto& e : assignments) {
    if (e.element.is_void()) fail(errc::mass_on_empty_set, "input mass on the empty set");
    sum += e.mass;
  }
  if (std::fabs(sum - 1.0) > mass_tolerance)
    fail(errc::not_normalized, "masses sum to " + std::to_string(sum) + ", expected 1");
  entries_ = std::move(assignments);
}

double Bba::mass_of(const SetMask& element) const {
  frame_.check_owns(element);
  return lookup(entries_, element);
}

FusedMass::FusedMass(const Frame& frame, std::vector<MassEntry> entries, double conflict)
    : frame_(frame), conflict_(conflict) {
  canonicalize_entries(frame_, entries);
  if (!std::isfinite(conflict_) || conflict_ < 0.0)
    fail(errc::numeric_error, "conflict mass must be finite and non-negative");
  double sum = conflict_;
  for (const auto& e : entries) {
    if (e.element.is_void()) fail(errc::mass_on_empty_set, "use the conflict slot for empty-set mass");
    sum += e.mass;
  }
  if (std::fabs(sum - 1.0) > mass_tolerance)
    fail(errc::not_normalized, "fused masses sum to " + std::to_string(sum) + ", expected 1");
  entries_ = std::move(entries);
}

double FusedMass::mass_of(const SetMask& element) const {
  frame_.check_owns(element);
  return lookup(entries_, element);
}

double FusedMass::total() const {
  double sum = conflict_;
  for (const auto& e : entries_) sum += e.mass;
  return sum;
}

}  // namespace bft
