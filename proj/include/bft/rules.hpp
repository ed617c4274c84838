#pragma once

#include <span>
#include <vector>

#include "bft/ledger.hpp"

namespace bft {

/// Normalized redistribution weights keyed by canonical element. A
/// default-constructed vector is "absent": valid exactly where the mass it
/// would distribute is zero. Weights must lie in [0,1], sum to one, and
/// never sit on the empty set.
class WeightVector {
 public:
  WeightVector() = default;
  WeightVector(const Frame& frame, std::vector<MassEntry> weights);

  bool absent() const { return entries_.empty(); }
  std::span<const MassEntry> weights() const { return entries_; }

 private:
  std::vector<MassEntry> entries_;
};

/// The non-empty intersections whose conjunctive mass a rule moves
/// elsewhere. Always declared by the caller, never inferred; every element
/// must be non-empty under the model, must not be the empty set or total
/// ignorance, and must genuinely involve an intersection unless the caller
/// opts union-only elements in.
class RedistributionSet {
 public:
  RedistributionSet() = default;
  RedistributionSet(const Model& model, std::vector<SetMask> elements,
                    bool accept_union_elements = false);

  bool empty() const { return elements_.empty(); }
  std::span<const SetMask> elements() const { return elements_; }
  bool contains(mask_bits bits) const;
  bool contains(const SetMask& m) const { return contains(m.bits()); }

 private:
  std::vector<SetMask> elements_;  // ascending
};

/// The proportionality function f of the redistribution class: evaluates a
/// non-negative score per candidate element.
class ProportionalityFn {
 public:
  enum class Kind { mass_conj, cardinal, cardinal_ratio, mass_plus_cardinal, custom_table };

  static ProportionalityFn mass_conj() { return ProportionalityFn(Kind::mass_conj); }
  static ProportionalityFn cardinal() { return ProportionalityFn(Kind::cardinal); }
  static ProportionalityFn cardinal_ratio() { return ProportionalityFn(Kind::cardinal_ratio); }
  static ProportionalityFn mass_plus_cardinal() { return ProportionalityFn(Kind::mass_plus_cardinal); }
  static ProportionalityFn custom(const Frame& frame, std::vector<MassEntry> table);

  Kind kind() const { return kind_; }
  std::span<const MassEntry> table() const { return table_; }

 private:
  explicit ProportionalityFn(Kind k) : kind_(k) {}
  Kind kind_ = Kind::cardinal;
  std::vector<MassEntry> table_;  // custom only; absent entries evaluate to 0
};

/// f(x) given the ledger (for conjunctive-mass flavors) and the current
/// target set (for the ratio-of-cardinals flavor).
double evaluate_f(const ProportionalityFn& f, const SetMask& x, const ProductTermLedger& ledger,
                  const SetMask& m_context);

/// How the target set of one product term is derived from its factors.
class TargetPolicy {
 public:
  enum class Kind { union_of_factors, union_complement, custom_subset };

  static TargetPolicy union_of_factors() { return TargetPolicy(Kind::union_of_factors, {}); }
  static TargetPolicy union_complement() { return TargetPolicy(Kind::union_complement, {}); }
  /// A fixed target, checked per product term to be a subset of the
  /// factors' union.
  static TargetPolicy custom_subset(const SetMask& m) { return TargetPolicy(Kind::custom_subset, m); }

  Kind kind() const { return kind_; }
  const SetMask& custom() const { return custom_; }

  friend bool operator==(const TargetPolicy&, const TargetPolicy&) = default;

 private:
  TargetPolicy(Kind k, SetMask custom) : kind_(k), custom_(custom) {}
  Kind kind_ = Kind::union_of_factors;
  SetMask custom_;
};

SetMask target_set(const TargetPolicy& policy, std::span<const SetMask> factors, const Frame& frame);

/// Which elements of a target set share a redistributed product value.
/// `components` decomposes the target into the distinct contributing
/// factors when they genuinely split it, falling back to the singletons the
/// target contains; `all_nonempty_subsets` enumerates every non-empty
/// submask over the model's non-empty regions (the exhaustive reading).
enum class ShareScope { components, all_nonempty_subsets };

std::vector<SetMask> share_targets(ShareScope scope, const SetMask& target,
                                   std::span<const SetMask> factors, const Model& model);

/// Configuration of the proportional-redistribution rule class.
struct CprimConfig {
  ProportionalityFn f = ProportionalityFn::cardinal();
  TargetPolicy conflict_target = TargetPolicy::union_of_factors();      // M, for empty products
  TargetPolicy intersection_target = TargetPolicy::union_of_factors();  // N, for redistributed ones
  ShareScope scope = ShareScope::components;
  RedistributionSet redistributed;
  /// The total-ignorance fallback (target empty or zero f-sum) is stated
  /// for the conflict branch; applying it to the redistributed-intersection
  /// branch as well is an extrapolation and can be switched off, in which
  /// case such a product raises an error instead.
  bool ignorance_fallback_for_intersections = true;
};

struct ConjunctiveResult {
  FusedMass fused;
  ProductTermLedger ledger;
};

/// The s-source conjunctive rule. Terms with an empty result aggregate into
/// the conflict slot; everything else aggregates by result mask. A single
/// source passes through unchanged.
ConjunctiveResult conjunctive_combine(std::span<const Bba> sources, const Model& model);

/// The conjunctive rule on the free model (no intersection is empty).
FusedMass dsmc_combine(std::span<const Bba> sources);

/// Weighted operator: conflict mass moves to non-empty elements by `w`.
FusedMass wo_combine(std::span<const Bba> sources, const Model& model, const WeightVector& w);

/// Double weighted operator: like the weighted operator, plus the masses of
/// the declared non-empty intersections move by `v`. With an empty
/// redistribution set this is exactly the weighted operator.
FusedMass dwo_combine(std::span<const Bba> sources, const Model& model, const WeightVector& w,
                      const WeightVector& v, const RedistributionSet& redistributed);

/// Proportional redistribution class: every empty product is shared over
/// the share targets of its M proportionally to f; every product landing in
/// the redistribution set is shared over the share targets of its N; a
/// product whose target is empty or whose f-sum vanishes goes to total
/// ignorance.
FusedMass cprim_combine(std::span<const Bba> sources, const Model& model, const CprimConfig& cfg);

}  // namespace bft
