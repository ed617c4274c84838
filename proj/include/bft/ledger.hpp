#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "bft/bba.hpp"

namespace bft {

/// One s-fold product of focal elements: the product of the factor masses
/// and the intersection of the factor masks. Terms are kept individually
/// (not just their aggregate) so redistribution rules can act per product.
struct ProductTerm {
  std::uint64_t flat = 0;  // row-major index into the focal cross space
  double value = 0.0;      // product of the s factor masses
  mask_bits result = 0;    // bitwise AND of the factor masks

  friend bool operator==(const ProductTerm&, const ProductTerm&) = default;
};

/// Every product of one focal element per source, in row-major order over
/// the focal cross space (source 0 varies slowest). The flat order is the
/// canonical summation order: every aggregate over the ledger adds term
/// values in ascending flat index, which makes results bit-reproducible
/// regardless of how the term construction was parallelized.
class ProductTermLedger {
 public:
  const Frame& frame() const { return frame_; }
  const Model& model() const { return model_; }
  std::size_t source_count() const { return focal_.size(); }
  std::span<const ProductTerm> terms() const { return terms_; }
  std::uint64_t term_count() const { return terms_.size(); }
  std::span<const MassEntry> focal_of(std::size_t source) const { return focal_[source]; }

  /// Factor masks of a term, decoded from its flat index.
  void factors_of(const ProductTerm& t, std::vector<SetMask>& out) const;
  SetMask result_of(const ProductTerm& t) const { return frame_.element(t.result); }

  /// Aggregated conjunctive mass of one element (sum over terms whose
  /// result equals its mask), and the aggregate over all elements.
  double aggregate_mass(const SetMask& element) const;
  std::span<const std::pair<mask_bits, double>> aggregates() const { return aggregate_; }

  /// Mass on empty intersections: sum of term values whose result is empty
  /// under the model, added in flat order.
  double conflict() const { return conflict_; }

 private:
  void init(std::span<const Bba> sources, const Model& model);
  void fill_terms(std::uint64_t begin, std::uint64_t end);
  void aggregate(bool parallel);

  Frame frame_{std::vector<std::string>{"a", "b"}};
  Model model_ = Model::free_model(frame_);
  std::vector<std::vector<MassEntry>> focal_;
  std::vector<std::uint64_t> strides_;
  std::vector<ProductTerm> terms_;
  std::vector<std::pair<mask_bits, double>> aggregate_;  // ascending mask, all raw results
  double conflict_ = 0.0;

  friend ProductTermLedger make_ledger(std::span<const Bba>, const Model&, bool);
};

/// Reference implementation: one thread walks the cross space in flat order.
ProductTermLedger build_ledger_serial(std::span<const Bba> sources, const Model& model);

/// OpenMP kernel: the cross space is partitioned across threads; each term
/// is computed independently into its own slot, so the result is identical
/// to the serial reference bit for bit, for any thread count.
ProductTermLedger build_ledger_parallel(std::span<const Bba> sources, const Model& model);

/// Picks the parallel kernel for large cross spaces, the serial one below
/// that (both produce identical ledgers).
ProductTermLedger build_ledger(std::span<const Bba> sources, const Model& model);

/// Sum of term values over empty-under-model results.
double total_conflict(const ProductTermLedger& ledger);

}  // namespace bft
