// Times the serial reference against the OpenMP kernel on large focal
// cross spaces and checks that both produce identical ledgers.
//
//   bench_conjunctive [sources] [focal-per-source] [reps]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "bft/rules.hpp"

using namespace bft;

namespace {

double now_seconds() {
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

Bba random_source(const Frame& f, std::mt19937_64& rng, int focal) {
  std::uniform_real_distribution<double> unit(0.01, 1.0);
  const mask_bits top = (mask_bits{1} << f.region_count()) - 1;
  std::vector<MassEntry> entries;
  double sum = 0.0;
  for (int i = 0; i < focal; ++i) {
    entries.push_back(MassEntry{f.element(1 + rng() % top), unit(rng)});
    sum += entries.back().mass;
  }
  for (auto& e : entries) e.mass /= sum;
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < entries.size(); ++i) acc += entries[i].mass;
  entries.back().mass = 1.0 - acc;
  return Bba(f, std::move(entries));
}

template <typename F>
double best_of(int reps, F&& run) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const double t0 = now_seconds();
    run();
    const double t1 = now_seconds();
    if (t1 - t0 < best) best = t1 - t0;
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  const int s = argc > 1 ? std::atoi(argv[1]) : 3;
  const int focal = argc > 2 ? std::atoi(argv[2]) : 80;
  const int reps = argc > 3 ? std::atoi(argv[3]) : 5;

  Frame frame({"A", "B", "C", "D", "E", "F"});
  const Model model = Model::free_model(frame);
  std::mt19937_64 rng(12345);
  std::vector<Bba> sources;
  for (int i = 0; i < s; ++i) sources.push_back(random_source(frame, rng, focal));

  std::uint64_t terms = 1;
  for (const auto& src : sources) terms *= src.focal_count();
#ifdef _OPENMP
  const int threads = omp_get_max_threads();
#else
  const int threads = 1;
#endif
  std::printf("sources=%d focal=%d terms=%llu threads=%d reps=%d\n", s, focal,
              static_cast<unsigned long long>(terms), threads, reps);

  const double t_serial = best_of(reps, [&] { (void)build_ledger_serial(sources, model); });
  const double t_parallel = best_of(reps, [&] { (void)build_ledger_parallel(sources, model); });

  const ProductTermLedger reference = build_ledger_serial(sources, model);
  const ProductTermLedger parallel = build_ledger_parallel(sources, model);
  bool identical = reference.term_count() == parallel.term_count();
  for (std::uint64_t i = 0; identical && i < reference.term_count(); ++i)
    identical = reference.terms()[i] == parallel.terms()[i];
  identical = identical && reference.conflict() == parallel.conflict() &&
              std::equal(reference.aggregates().begin(), reference.aggregates().end(),
                         parallel.aggregates().begin(), parallel.aggregates().end());

  std::printf("serial   %8.3f ms  (%.1f Mterms/s)\n", t_serial * 1e3, terms / t_serial / 1e6);
  std::printf("parallel %8.3f ms  (%.1f Mterms/s)  speedup %.2fx\n", t_parallel * 1e3,
              terms / t_parallel / 1e6, t_serial / t_parallel);
  std::printf("ledgers identical: %s\n", identical ? "yes" : "NO");
  return identical ? 0 : 1;
}
