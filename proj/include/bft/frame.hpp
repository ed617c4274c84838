#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bft/errors.hpp"

namespace bft {

/// Raw region bit vector. Region p (1-based) occupies bit p-1.
using mask_bits = std::uint64_t;

class Frame;
class Model;

/// An element of the super-power set in canonical form: one bit per Venn
/// region of the frame. The membership pattern of region p has bit i set
/// iff the region lies inside singleton i, so a frame of n singletons has
/// regions 1 .. 2^n - 1. Two set expressions denote the same element iff
/// their masks are equal.
///
/// Masks are immutable values and safe to share across threads.
class SetMask {
 public:
  SetMask() = default;  // detached empty mask; usable only as a placeholder

  mask_bits bits() const { return bits_; }
  unsigned arity() const { return arity_; }
  unsigned region_count() const { return (1u << arity_) - 1u; }

  /// Raw emptiness (the canonical empty set), independent of any model.
  bool is_void() const { return bits_ == 0; }
  /// Total ignorance: every region present.
  bool is_full() const { return arity_ != 0 && bits_ == full_bits(arity_); }

  int popcount() const { return std::popcount(bits_); }

  bool same_frame(const SetMask& o) const { return arity_ == o.arity_ && tag_ == o.tag_; }
  bool subset_of(const SetMask& o) const {
    check_compatible(o);
    return (bits_ & ~o.bits_) == 0;
  }

  SetMask operator&(const SetMask& o) const {
    check_compatible(o);
    return SetMask(bits_ & o.bits_, arity_, tag_);
  }
  SetMask operator|(const SetMask& o) const {
    check_compatible(o);
    return SetMask(bits_ | o.bits_, arity_, tag_);
  }

  /// A mask over the same frame with the given region bits.
  SetMask with_bits(mask_bits b) const;

  friend bool operator==(const SetMask&, const SetMask&) = default;
  /// Deterministic ordering: by frame, then by region bits.
  friend bool operator<(const SetMask& a, const SetMask& b) {
    if (a.arity_ != b.arity_) return a.arity_ < b.arity_;
    if (a.tag_ != b.tag_) return a.tag_ < b.tag_;
    return a.bits_ < b.bits_;
  }

  static mask_bits full_bits(unsigned arity) { return (mask_bits{1} << ((1u << arity) - 1u)) - 1u; }

 private:
  SetMask(mask_bits bits, std::uint8_t arity, std::uint32_t tag)
      : bits_(bits), arity_(arity), tag_(tag) {}

  void check_compatible(const SetMask& o) const {
    if (!same_frame(o)) fail(errc::frame_mismatch, "set masks belong to different frames");
  }

  mask_bits bits_ = 0;
  std::uint8_t arity_ = 0;
  std::uint32_t tag_ = 0;

  friend class Frame;
  friend class Model;
};

/// The frame of discernment: an ordered list of singleton labels.
/// Frames are capped at 6 singletons so the 2^n - 1 region bits of any
/// element fit one machine word.
class Frame {
 public:
  static constexpr std::size_t min_singletons = 2;
  static constexpr std::size_t max_singletons = 6;

  explicit Frame(std::vector<std::string> names);

  std::size_t size() const { return names_.size(); }
  unsigned region_count() const { return (1u << names_.size()) - 1u; }
  const std::string& label(std::size_t i) const;
  const std::vector<std::string>& labels() const { return names_; }
  std::optional<std::size_t> index_of(std::string_view label) const;

  SetMask empty_set() const { return SetMask(0, arity8(), tag_); }
  SetMask full_set() const { return SetMask(SetMask::full_bits(arity8()), arity8(), tag_); }
  SetMask singleton(std::size_t i) const;
  /// The element with exactly the given region bits; bits must fit the frame.
  SetMask element(mask_bits bits) const;
  /// Complement with respect to total ignorance.
  SetMask complement(const SetMask& a) const;

  std::uint32_t tag() const { return tag_; }
  bool owns(const SetMask& m) const { return m.arity() == names_.size() && m.tag_ == tag_; }
  void check_owns(const SetMask& m) const {
    if (!owns(m)) fail(errc::frame_mismatch, "set mask does not belong to this frame");
  }

  bool operator==(const Frame& o) const { return names_ == o.names_; }

 private:
  std::uint8_t arity8() const { return static_cast<std::uint8_t>(names_.size()); }

  std::vector<std::string> names_;
  std::uint32_t tag_ = 0;
};

/// Region bits of singleton i in a frame of `arity` singletons.
mask_bits singleton_bits(unsigned arity, unsigned i);

/// Which Venn regions are declared non-empty. The free model keeps every
/// region; the Shafer model keeps only the n single-membership regions
/// (every distinct-singleton intersection is empty); anything else is a
/// hybrid marking.
class Model {
 public:
  enum class Kind { free, shafer, hybrid };

  static Model free_model(const Frame& f);
  static Model shafer(const Frame& f);
  /// Constrain every region of each listed element to be empty.
  static Model hybrid(const Frame& f, std::span<const SetMask> empty_elements);

  Kind kind() const;
  mask_bits nonempty_regions() const { return nonempty_; }
  unsigned arity() const { return arity_; }

  bool is_empty(const SetMask& a) const {
    check_compatible(a);
    return (a.bits() & nonempty_) == 0;
  }
  int dsm_cardinal(const SetMask& a) const {
    check_compatible(a);
    return std::popcount(a.bits() & nonempty_);
  }
  mask_bits restricted_bits(const SetMask& a) const {
    check_compatible(a);
    return a.bits() & nonempty_;
  }
  /// True iff `a` cannot be written as a union of singletons alone, judged
  /// on the non-empty regions. Helper only: combination rules never infer
  /// redistribution sets from it.
  bool requires_intersection(const SetMask& a) const;

  bool same_frame(const SetMask& a) const { return a.arity() == arity_ && a.tag_ == tag_; }
  void check_compatible(const SetMask& a) const {
    if (!same_frame(a)) fail(errc::frame_mismatch, "set mask does not belong to the model's frame");
  }
  bool compatible_with(const Frame& f) const {
    return f.size() == arity_ && f.tag() == tag_;
  }

  friend bool operator==(const Model&, const Model&) = default;

 private:
  Model(mask_bits nonempty, std::uint8_t arity, std::uint32_t tag)
      : nonempty_(nonempty), arity_(arity), tag_(tag) {}

  mask_bits nonempty_ = 0;
  std::uint8_t arity_ = 0;
  std::uint32_t tag_ = 0;
};

}  // namespace bft
