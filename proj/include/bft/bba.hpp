#pragma once

#include <span>
#include <vector>

#include "bft/frame.hpp"

namespace bft {

/// Tolerance for "the masses sum to one" checks.
inline constexpr double mass_tolerance = 1e-9;

struct MassEntry {
  SetMask element;
  double mass = 0.0;

  friend bool operator==(const MassEntry&, const MassEntry&) = default;
};

/// A normalized basic belief assignment. Entries are kept in ascending mask
/// order, duplicates merged by addition, zero masses dropped, and no mass is
/// allowed on the empty set. Immutable after construction.
class Bba {
 public:
  Bba(const Frame& frame, std::vector<MassEntry> assignments);

  const Frame& frame() const { return frame_; }
  std::span<const MassEntry> focal_elements() const { return entries_; }
  std::size_t focal_count() const { return entries_.size(); }
  double mass_of(const SetMask& element) const;

  friend bool operator==(const Bba&, const Bba&) = default;

 private:
  Frame frame_;
  std::vector<MassEntry> entries_;
};

/// The output of a combination rule. Like a Bba but with an explicit
/// conflict slot: mass that landed on empty intersections. Only the raw
/// conjunctive rule may leave it non-zero.
class FusedMass {
 public:
  FusedMass(const Frame& frame, std::vector<MassEntry> entries, double conflict);

  const Frame& frame() const { return frame_; }
  std::span<const MassEntry> entries() const { return entries_; }
  double conflict() const { return conflict_; }
  double mass_of(const SetMask& element) const;
  double total() const;

 private:
  Frame frame_;
  std::vector<MassEntry> entries_;
  double conflict_ = 0.0;
};

/// Sorts by mask, merges duplicate masks by addition, drops zero entries.
/// Shared by Bba, FusedMass and the weight vectors.
void canonicalize_entries(const Frame& frame, std::vector<MassEntry>& entries);

}  // namespace bft
