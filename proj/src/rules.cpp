#include "bft/rules.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace bft {

namespace {

void sort_and_merge(std::vector<MassEntry>& entries) {
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
  entries = std::move(merged);
}

double lookup(std::span<const MassEntry> entries, const SetMask& element) {
  auto it = std::lower_bound(entries.begin(), entries.end(), element,
                             [](const MassEntry& e, const SetMask& m) { return e.element < m; });
  if (it != entries.end() && it->element == element) return it->mass;
  return 0.0;
}

FusedMass pass_through(const Bba& source) {
  std::vector<MassEntry> entries(source.focal_elements().begin(), source.focal_elements().end());
  return FusedMass(source.frame(), std::move(entries), 0.0);
}

}  // namespace

WeightVector::WeightVector(const Frame& frame, std::vector<MassEntry> weights) {
  double sum = 0.0;
  for (const auto& e : weights) {
    frame.check_owns(e.element);
    if (e.element.is_void()) fail(errc::invalid_weights, "no weight may sit on the empty set");
    if (!std::isfinite(e.mass) || e.mass < 0.0 || e.mass > 1.0)
      fail(errc::invalid_weights, "weights must lie in [0,1]");
    sum += e.mass;
  }
  if (std::fabs(sum - 1.0) > mass_tolerance)
    fail(errc::invalid_weights, "weights sum to " + std::to_string(sum) + ", expected 1");
  sort_and_merge(weights);
  std::erase_if(weights, [](const MassEntry& e) { return e.mass == 0.0; });
  if (weights.empty()) fail(errc::invalid_weights, "weight vector has no entries");
  entries_ = std::move(weights);
}

RedistributionSet::RedistributionSet(const Model& model, std::vector<SetMask> elements,
                                     bool accept_union_elements) {
  for (const auto& e : elements) {
    model.check_compatible(e);
    if (model.is_empty(e))
      fail(errc::redistribution_contains_empty,
           "redistribution set contains an element that is empty under the model");
    if (e.is_full())
      fail(errc::invalid_config, "total ignorance cannot be redistributed");
    if (!accept_union_elements && !model.requires_intersection(e))
      fail(errc::invalid_config,
           "redistribution element is a plain union of singletons; opt in explicitly to allow it");
  }
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  elements_ = std::move(elements);
}

bool RedistributionSet::contains(mask_bits bits) const {
  return std::any_of(elements_.begin(), elements_.end(),
                     [bits](const SetMask& m) { return m.bits() == bits; });
}

ProportionalityFn ProportionalityFn::custom(const Frame& frame, std::vector<MassEntry> table) {
  for (const auto& e : table) {
    frame.check_owns(e.element);
    if (!std::isfinite(e.mass) || e.mass < 0.0)
      fail(errc::invalid_config, "proportionality scores must be finite and non-negative");
  }
  sort_and_merge(table);
  ProportionalityFn f(Kind::custom_table);
  f.table_ = std::move(table);
  return f;
}

double evaluate_f(const ProportionalityFn& f, const SetMask& x, const ProductTermLedger& ledger,
                  const SetMask& m_context) {
  const Model& model = ledger.model();
  switch (f.kind()) {
    case ProportionalityFn::Kind::mass_conj:
      return ledger.aggregate_mass(x);
    case ProportionalityFn::Kind::cardinal:
      return static_cast<double>(model.dsm_cardinal(x));
    case ProportionalityFn::Kind::cardinal_ratio: {
      if (model.is_empty(m_context))
        fail(errc::empty_context, "ratio of cardinals needs a non-empty target set");
      return static_cast<double>(model.dsm_cardinal(x)) /
             static_cast<double>(model.dsm_cardinal(m_context));
    }
    case ProportionalityFn::Kind::mass_plus_cardinal:
      return ledger.aggregate_mass(x) + static_cast<double>(model.dsm_cardinal(x));
    case ProportionalityFn::Kind::custom_table:
      if (!f.table().empty() && !f.table().front().element.same_frame(x))
        fail(errc::frame_mismatch, "proportionality table belongs to a different frame");
      return lookup(f.table(), x);
  }
  return 0.0;
}

SetMask target_set(const TargetPolicy& policy, std::span<const SetMask> factors, const Frame& frame) {
  SetMask joined = frame.empty_set();
  for (const auto& f : factors) joined = joined | f;
  switch (policy.kind()) {
    case TargetPolicy::Kind::union_of_factors:
      return joined;
    case TargetPolicy::Kind::union_complement:
      return frame.complement(joined);
    case TargetPolicy::Kind::custom_subset: {
      frame.check_owns(policy.custom());
      if (!policy.custom().subset_of(joined))
        fail(errc::custom_not_subset_of_union, "custom target is not a subset of the factors' union");
      return policy.custom();
    }
  }
  return joined;
}

std::vector<SetMask> share_targets(ShareScope scope, const SetMask& target,
                                   std::span<const SetMask> factors, const Model& model) {
  if (model.is_empty(target)) fail(errc::empty_target, "share target is empty under the model");
  std::vector<SetMask> out;

  if (scope == ShareScope::all_nonempty_subsets) {
    const mask_bits restricted = model.restricted_bits(target);
    for (mask_bits s = restricted; s != 0; s = (s - 1) & restricted)
      out.push_back(target.with_bits(s));
    std::sort(out.begin(), out.end());
    return out;
  }

  // The distinct contributing factors, when they genuinely split the target.
  std::vector<SetMask> parts;
  mask_bits covered = 0;
  for (const auto& f : factors) {
    model.check_compatible(f);
    if (model.is_empty(f) || f.is_full()) continue;
    if (!f.subset_of(target)) continue;
    if (std::find(parts.begin(), parts.end(), f) != parts.end()) continue;
    parts.push_back(f);
    covered |= f.bits();
  }
  if (parts.size() >= 2 && covered == target.bits()) {
    std::sort(parts.begin(), parts.end());
    return parts;
  }
  // Otherwise the singletons the target contains.
  for (unsigned i = 0; i < model.arity(); ++i) {
    const SetMask s = target.with_bits(singleton_bits(model.arity(), i));
    if (!model.is_empty(s) && s.subset_of(target)) out.push_back(s);
  }
  return out;
}

ConjunctiveResult conjunctive_combine(std::span<const Bba> sources, const Model& model) {
  ProductTermLedger ledger = build_ledger(sources, model);
  if (sources.size() == 1) return {pass_through(sources.front()), std::move(ledger)};
  const mask_bits nonempty = model.nonempty_regions();
  std::vector<MassEntry> entries;
  entries.reserve(ledger.aggregates().size());
  for (const auto& [mask, value] : ledger.aggregates())
    if ((mask & nonempty) != 0 && value != 0.0)
      entries.push_back(MassEntry{ledger.frame().element(mask), value});
  FusedMass fused(ledger.frame(), std::move(entries), ledger.conflict());
  return {std::move(fused), std::move(ledger)};
}

FusedMass dsmc_combine(std::span<const Bba> sources) {
  if (sources.empty()) fail(errc::no_sources, "at least one source is required");
  return conjunctive_combine(sources, Model::free_model(sources.front().frame())).fused;
}

FusedMass dwo_combine(std::span<const Bba> sources, const Model& model, const WeightVector& w,
                      const WeightVector& v, const RedistributionSet& redistributed) {
  auto [fused, ledger] = conjunctive_combine(sources, model);
  if (sources.size() == 1) return std::move(fused);

  for (const auto& z : redistributed.elements())
    if (model.is_empty(z))
      fail(errc::redistribution_contains_empty,
           "redistribution set contains an element that is empty under this model");
  for (const auto& e : w.weights()) {
    if (model.is_empty(e.element))
      fail(errc::invalid_weights, "conflict weight sits on an element that is empty under the model");
    if (redistributed.contains(e.element))
      fail(errc::weight_on_redistributed, "conflict weight sits on a redistributed element");
  }
  for (const auto& e : v.weights()) {
    if (model.is_empty(e.element))
      fail(errc::invalid_weights, "intersection weight sits on an empty element");
    if (redistributed.contains(e.element))
      fail(errc::weight_on_redistributed, "intersection weight sits on a redistributed element");
  }

  double moved = 0.0;
  for (const auto& z : redistributed.elements()) moved += ledger.aggregate_mass(z);

  std::vector<MassEntry> out;
  out.reserve(fused.entries().size() + w.weights().size() + v.weights().size());
  for (const auto& e : fused.entries())
    if (!redistributed.contains(e.element)) out.push_back(e);

  const double conflict = fused.conflict();
  if (conflict > 0.0) {
    if (w.absent())
      fail(errc::invalid_weights, "conflicting mass is present but no conflict weights were given");
    for (const auto& e : w.weights()) out.push_back(MassEntry{e.element, e.mass * conflict});
  }
  if (moved > 0.0) {
    if (v.absent())
      fail(errc::invalid_weights,
           "redistributed intersections carry mass but no intersection weights were given");
    for (const auto& e : v.weights()) out.push_back(MassEntry{e.element, e.mass * moved});
  }
  return FusedMass(fused.frame(), std::move(out), 0.0);
}

FusedMass wo_combine(std::span<const Bba> sources, const Model& model, const WeightVector& w) {
  return dwo_combine(sources, model, w, WeightVector{}, RedistributionSet{});
}

FusedMass cprim_combine(std::span<const Bba> sources, const Model& model, const CprimConfig& cfg) {
  ProductTermLedger ledger = build_ledger(sources, model);
  if (sources.size() == 1) return pass_through(sources.front());
  const Frame& frame = ledger.frame();
  for (const auto& z : cfg.redistributed.elements())
    if (model.is_empty(z))
      fail(errc::redistribution_contains_empty,
           "redistribution set contains an element that is empty under this model");

  const mask_bits nonempty = model.nonempty_regions();
  const mask_bits full = frame.full_set().bits();
  std::unordered_map<mask_bits, double> out;
  out.reserve(64);
  std::vector<SetMask> factors;
  std::vector<SetMask> shares;
  std::vector<double> scores;

  for (const auto& t : ledger.terms()) {
    const bool empty_result = (t.result & nonempty) == 0;
    const bool redistributed = !empty_result && cfg.redistributed.contains(t.result);
    if (!empty_result && !redistributed) {
      out[t.result] += t.value;
      continue;
    }

    ledger.factors_of(t, factors);
    const TargetPolicy& policy = empty_result ? cfg.conflict_target : cfg.intersection_target;
    const SetMask target = target_set(policy, factors, frame);

    bool to_ignorance = model.is_empty(target);
    double fsum = 0.0;
    if (!to_ignorance) {
      shares = share_targets(cfg.scope, target, factors, model);
      // redistributed elements never receive shares
      std::erase_if(shares, [&](const SetMask& z) { return cfg.redistributed.contains(z); });
      scores.clear();
      for (const auto& z : shares) {
        const double fz = evaluate_f(cfg.f, z, ledger, target);
        scores.push_back(fz);
        fsum += fz;
      }
      if (!(fsum > 0.0)) to_ignorance = true;
    }

    if (to_ignorance) {
      if (redistributed && !cfg.ignorance_fallback_for_intersections)
        fail(errc::numeric_error,
             "redistributed product has no viable share targets and the ignorance fallback is off");
      out[full] += t.value;
      continue;
    }
    for (std::size_t i = 0; i < shares.size(); ++i)
      if (scores[i] != 0.0) out[shares[i].bits()] += t.value * (scores[i] / fsum);
  }

  std::vector<MassEntry> entries;
  entries.reserve(out.size());
  for (const auto& [mask, value] : out)
    if (value != 0.0) entries.push_back(MassEntry{frame.element(mask), value});
  return FusedMass(frame, std::move(entries), 0.0);
}

}  // namespace bft
