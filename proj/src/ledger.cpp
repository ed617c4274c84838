#include "bft/ledger.hpp"

#include <algorithm>

#ifdef _OPENMP
#include <omp.h>
#include <parallel/algorithm>
#endif

namespace bft {

namespace {

// Beyond this the cross space costs more to enumerate than a scenario is
// worth; refuse rather than thrash. Also keeps flat indices inside 32 bits
// for the aggregation's sort keys.
constexpr std::uint64_t max_terms = 50'000'000;

// Below this the OpenMP fork/join overhead dominates.
constexpr std::uint64_t parallel_threshold = 1u << 14;

}  // namespace

void ProductTermLedger::init(std::span<const Bba> sources, const Model& model) {
  if (sources.empty()) fail(errc::no_sources, "at least one source is required");
  const Frame& frame = sources.front().frame();
  if (!model.compatible_with(frame))
    fail(errc::frame_mismatch, "model frame differs from the sources' frame");
  for (const auto& s : sources)
    if (!(s.frame() == frame)) fail(errc::frame_mismatch, "sources use different frames");

  frame_ = frame;
  model_ = model;
  focal_.clear();
  focal_.reserve(sources.size());
  for (const auto& s : sources)
    focal_.emplace_back(s.focal_elements().begin(), s.focal_elements().end());

  std::uint64_t count = 1;
  for (const auto& f : focal_) {
    if (f.empty()) fail(errc::invalid_config, "source has no focal elements");
    if (count > max_terms / f.size()) fail(errc::numeric_error, "focal cross space too large");
    count *= f.size();
  }

  // strides_[j] = how many flat indices one step of source j spans
  strides_.assign(focal_.size(), 1);
  for (std::size_t j = focal_.size(); j-- > 1;)
    strides_[j - 1] = strides_[j] * focal_[j].size();

  terms_.resize(count);
}

// Raw aggregates keep every result mask, including ones empty under the
// model (rules may still ask for their conjunctive mass); the conflict sum
// only covers the empty ones. Each element's total adds its terms in
// ascending flat order; the conflict adds all empty terms in flat order.
// Grouping goes through a sort of the unique (result, flat) keys, whose
// outcome no parallel sort can change, so the parallel path is bit-exact.
void ProductTermLedger::aggregate(bool parallel) {
  const mask_bits nonempty = model_.nonempty_regions();
  double conflict = 0.0;
  for (const auto& t : terms_)
    if ((t.result & nonempty) == 0) conflict += t.value;
  conflict_ = conflict;

  std::vector<std::pair<mask_bits, std::uint32_t>> order(terms_.size());
  for (std::size_t i = 0; i < terms_.size(); ++i)
    order[i] = {terms_[i].result, static_cast<std::uint32_t>(i)};
#ifdef _OPENMP
  if (parallel && order.size() >= parallel_threshold)
    __gnu_parallel::sort(order.begin(), order.end());
  else
    std::sort(order.begin(), order.end());
#else
  (void)parallel;
  std::sort(order.begin(), order.end());
#endif

  aggregate_.clear();
  for (std::size_t lo = 0; lo < order.size();) {
    std::size_t hi = lo;
    double acc = 0.0;
    while (hi < order.size() && order[hi].first == order[lo].first) {
      acc += terms_[order[hi].second].value;
      ++hi;
    }
    aggregate_.emplace_back(order[lo].first, acc);
    lo = hi;
  }
}

// Walks one contiguous slice of the cross space with an odometer over the
// focal indices. Every term recomputes its value as a left-to-right fold in
// source order, so slicing cannot change a single bit of any term.
void ProductTermLedger::fill_terms(std::uint64_t begin, std::uint64_t end) {
  if (begin >= end) return;
  const std::size_t s = focal_.size();
  std::vector<std::size_t> idx(s);
  std::uint64_t rest = begin;
  for (std::size_t j = 0; j < s; ++j) {
    idx[j] = rest / strides_[j];
    rest %= strides_[j];
  }
  for (std::uint64_t flat = begin; flat < end; ++flat) {
    double value = 1.0;
    mask_bits result = ~mask_bits{0};
    for (std::size_t j = 0; j < s; ++j) {
      const MassEntry& e = focal_[j][idx[j]];
      value *= e.mass;
      result &= e.element.bits();
    }
    terms_[flat] = ProductTerm{flat, value, result};
    for (std::size_t j = s; j-- > 0;) {
      if (++idx[j] < focal_[j].size()) break;
      idx[j] = 0;
    }
  }
}

ProductTermLedger make_ledger(std::span<const Bba> sources, const Model& model, bool parallel) {
  ProductTermLedger ledger;
  ledger.init(sources, model);
  const std::uint64_t count = ledger.terms_.size();
  if (parallel) {
#pragma omp parallel
    {
#ifdef _OPENMP
      const std::uint64_t workers = static_cast<std::uint64_t>(omp_get_num_threads());
      const std::uint64_t rank = static_cast<std::uint64_t>(omp_get_thread_num());
#else
      const std::uint64_t workers = 1, rank = 0;
#endif
      ledger.fill_terms(count * rank / workers, count * (rank + 1) / workers);
    }
  } else {
    ledger.fill_terms(0, count);
  }
  ledger.aggregate(parallel);
  return ledger;
}

ProductTermLedger build_ledger_serial(std::span<const Bba> sources, const Model& model) {
  return make_ledger(sources, model, false);
}

ProductTermLedger build_ledger_parallel(std::span<const Bba> sources, const Model& model) {
  return make_ledger(sources, model, true);
}

ProductTermLedger build_ledger(std::span<const Bba> sources, const Model& model) {
  std::uint64_t count = 1;
  for (const auto& s : sources) {
    if (s.focal_count() == 0) break;
    if (count > max_terms / s.focal_count()) {
      count = max_terms;
      break;
    }
    count *= s.focal_count();
  }
  return make_ledger(sources, model, count >= parallel_threshold);
}

void ProductTermLedger::factors_of(const ProductTerm& t, std::vector<SetMask>& out) const {
  out.clear();
  std::uint64_t rest = t.flat;
  for (std::size_t j = 0; j < focal_.size(); ++j) {
    out.push_back(focal_[j][rest / strides_[j]].element);
    rest %= strides_[j];
  }
}

double ProductTermLedger::aggregate_mass(const SetMask& element) const {
  frame_.check_owns(element);
  auto it = std::lower_bound(aggregate_.begin(), aggregate_.end(), element.bits(),
                             [](const auto& p, mask_bits m) { return p.first < m; });
  if (it != aggregate_.end() && it->first == element.bits()) return it->second;
  return 0.0;
}

double total_conflict(const ProductTermLedger& ledger) {
  const mask_bits nonempty = ledger.model().nonempty_regions();
  double sum = 0.0;
  for (const auto& t : ledger.terms())
    if ((t.result & nonempty) == 0) sum += t.value;
  return sum;
}

}  // namespace bft
