#include "bft/frame.hpp"

#include <algorithm>
#include <cctype>

namespace bft {

const char* errc_name(errc c) {
  switch (c) {
    case errc::duplicate_label: return "duplicate_label";
    case errc::invalid_label: return "invalid_label";
    case errc::frame_too_small: return "frame_too_small";
    case errc::frame_too_large: return "frame_too_large";
    case errc::index_out_of_range: return "index_out_of_range";
    case errc::frame_mismatch: return "frame_mismatch";
    case errc::empty_element: return "empty_element";
    case errc::negative_mass: return "negative_mass";
    case errc::not_normalized: return "not_normalized";
    case errc::mass_on_empty_set: return "mass_on_empty_set";
    case errc::no_sources: return "no_sources";
    case errc::invalid_weights: return "invalid_weights";
    case errc::redistribution_contains_empty: return "redistribution_contains_empty";
    case errc::weight_on_redistributed: return "weight_on_redistributed";
    case errc::empty_context: return "empty_context";
    case errc::custom_not_subset_of_union: return "custom_not_subset_of_union";
    case errc::empty_target: return "empty_target";
    case errc::invalid_config: return "invalid_config";
    case errc::unknown_label: return "unknown_label";
    case errc::syntax_error: return "syntax_error";
    case errc::format_error: return "format_error";
    case errc::validation_error: return "validation_error";
    case errc::numeric_error: return "numeric_error";
  }
  return "unknown";
}

namespace {

// Labels double as identifiers in set expressions, so they must lex as one.
bool valid_label(std::string_view s) {
  if (s.empty()) return false;
  if (s == "EMPTY") return false;  // reserved rendering of the empty set
  if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

std::uint32_t fnv1a(std::span<const std::string> names) {
  std::uint32_t h = 2166136261u;
  for (const auto& s : names) {
    for (char c : s) {
      h ^= static_cast<unsigned char>(c);
      h *= 16777619u;
    }
    h ^= 0xffu;  // separator so {"ab","c"} != {"a","bc"}
    h *= 16777619u;
  }
  return h;
}

}  // namespace

Frame::Frame(std::vector<std::string> names) : names_(std::move(names)) {
  if (names_.size() < min_singletons)
    fail(errc::frame_too_small, "a frame needs at least 2 singletons");
  if (names_.size() > max_singletons)
    fail(errc::frame_too_large, "frames are capped at 6 singletons");
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (!valid_label(names_[i]))
      fail(errc::invalid_label, "label '" + names_[i] + "' is not a valid identifier");
    for (std::size_t j = i + 1; j < names_.size(); ++j)
      if (names_[i] == names_[j]) fail(errc::duplicate_label, "duplicate label '" + names_[i] + "'");
  }
  tag_ = fnv1a(names_);
}

const std::string& Frame::label(std::size_t i) const {
  if (i >= names_.size()) fail(errc::index_out_of_range, "singleton index out of range");
  return names_[i];
}

std::optional<std::size_t> Frame::index_of(std::string_view label) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == label) return i;
  return std::nullopt;
}

mask_bits singleton_bits(unsigned arity, unsigned i) {
  mask_bits bits = 0;
  const unsigned regions = (1u << arity) - 1u;
  for (unsigned p = 1; p <= regions; ++p)
    if (p & (1u << i)) bits |= mask_bits{1} << (p - 1);
  return bits;
}

SetMask Frame::singleton(std::size_t i) const {
  if (i >= names_.size()) fail(errc::index_out_of_range, "singleton index out of range");
  return SetMask(singleton_bits(static_cast<unsigned>(names_.size()), static_cast<unsigned>(i)),
                 arity8(), tag_);
}

SetMask Frame::element(mask_bits bits) const {
  if (bits & ~SetMask::full_bits(arity8()))
    fail(errc::index_out_of_range, "region bits exceed the frame's region count");
  return SetMask(bits, arity8(), tag_);
}

SetMask Frame::complement(const SetMask& a) const {
  check_owns(a);
  return SetMask(~a.bits() & SetMask::full_bits(arity8()), arity8(), tag_);
}

SetMask SetMask::with_bits(mask_bits b) const {
  if (arity_ == 0) fail(errc::frame_mismatch, "detached mask has no frame");
  if (b & ~full_bits(arity_))
    fail(errc::index_out_of_range, "region bits exceed the frame's region count");
  return SetMask(b, arity_, tag_);
}

Model Model::free_model(const Frame& f) {
  return Model(SetMask::full_bits(static_cast<unsigned>(f.size())),
               static_cast<std::uint8_t>(f.size()), f.tag());
}

Model Model::shafer(const Frame& f) {
  mask_bits nonempty = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const unsigned p = 1u << i;  // the region lying in singleton i alone
    nonempty |= mask_bits{1} << (p - 1);
  }
  return Model(nonempty, static_cast<std::uint8_t>(f.size()), f.tag());
}

Model Model::hybrid(const Frame& f, std::span<const SetMask> empty_elements) {
  mask_bits removed = 0;
  for (const auto& e : empty_elements) {
    f.check_owns(e);
    removed |= e.bits();
  }
  return Model(SetMask::full_bits(static_cast<unsigned>(f.size())) & ~removed,
               static_cast<std::uint8_t>(f.size()), f.tag());
}

Model::Kind Model::kind() const {
  if (nonempty_ == SetMask::full_bits(arity_)) return Kind::free;
  mask_bits shafer_marking = 0;
  for (unsigned i = 0; i < arity_; ++i) shafer_marking |= mask_bits{1} << ((1u << i) - 1u);
  if (nonempty_ == shafer_marking) return Kind::shafer;
  return Kind::hybrid;
}

bool Model::requires_intersection(const SetMask& a) const {
  if (is_empty(a)) fail(errc::empty_element, "element is empty under the model");
  const mask_bits restricted = a.bits() & nonempty_;
  mask_bits covered = 0;
  for (unsigned i = 0; i < arity_; ++i) {
    const mask_bits s = singleton_bits(arity_, i) & nonempty_;
    if ((s & ~restricted) == 0) covered |= s;
  }
  return covered != restricted;
}

}  // namespace bft
