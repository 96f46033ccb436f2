#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <thread>
#include <vector>

#include "miconf/distribution.hpp"
#include "miconf/intervals.hpp"
#include "miconf/rng.hpp"

namespace miconf {

enum class ChannelKind { bsc };

/// Binary symmetric channel with crossover probability `ber` driven by a
/// two-point input distribution.
struct ChannelSpec {
  ChannelKind kind;
  double ber;
  MarginalDistribution input_dist;

  ChannelSpec(ChannelKind kind_, double ber_, MarginalDistribution input)
      : kind(kind_), ber(ber_), input_dist(std::move(input)) {
    if (!(ber >= 0.0 && ber <= 0.5)) throw std::domain_error("ber must be in [0, 0.5]");
    if (input_dist.size() != 2)
      throw std::invalid_argument("channel input distribution must have two symbols");
  }
};

/// Joint input/output distribution of the channel:
/// p(i,j) = p_X(i) * ((1-ber) if i == j else ber).
inline JointDistribution bsc_joint(const ChannelSpec& spec) {
  const double a = spec.input_dist[0], b = spec.input_dist[1];
  return JointDistribution(
      {a * (1.0 - spec.ber), a * spec.ber, b * spec.ber, b * (1.0 - spec.ber)}, 2, 2);
}

/// One multinomial sample of size n from the joint, as a count table.
/// Deterministic in (seed); uses the replicate-0 substream.
inline CountTable sample_counts(const JointDistribution& j, std::uint64_t n, std::uint64_t seed,
                                std::uint64_t replicate = 0) {
  if (n < 1) throw std::invalid_argument("sample count n must be >= 1");
  Xoshiro256pp rng(seed, replicate);
  return CountTable(multinomial_draw(rng, n, std::span(j.probs())), j.mx(), j.my());
}

/// Sorted plug-in MI realizations (nats) across Monte Carlo replicates.
struct SamplingCdf {
  std::vector<double> values;  // ascending, one per replicate
  std::uint64_t n_per_rep;
  std::uint64_t reps;
  std::uint64_t seed;
};

namespace detail {

/// Runs f(r) for r in [0, reps) on `threads` workers (0 = hardware count).
/// f must only touch state owned by index r.
template <typename F>
void parallel_replicates(std::uint64_t reps, unsigned threads, F&& f) {
  unsigned workers = threads != 0 ? threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, reps));
  if (workers <= 1) {
    for (std::uint64_t r = 0; r < reps; ++r) f(r);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (std::uint64_t r = w; r < reps; r += workers) f(r);
    });
  for (auto& t : pool) t.join();
}

}  // namespace detail

/// Empirical sampling distribution of the plug-in MI: `reps` independent
/// multinomial replicates of size n, each computed on its own substream, so
/// the result is bit-identical for any thread count.
inline SamplingCdf sampling_cdf(const JointDistribution& j, std::uint64_t n, std::uint64_t reps,
                                std::uint64_t seed, unsigned threads = 0) {
  if (reps < 1) throw std::invalid_argument("reps must be >= 1");
  if (n < 1) throw std::invalid_argument("sample count n must be >= 1");
  std::vector<double> values(reps);
  detail::parallel_replicates(reps, threads, [&](std::uint64_t r) {
    Xoshiro256pp rng(seed, r);
    CountTable t(multinomial_draw(rng, n, std::span(j.probs())), j.mx(), j.my());
    values[r] = mutual_information(t);
  });
  std::sort(values.begin(), values.end());
  return {std::move(values), n, reps, seed};
}

/// Lower order-statistic quantile: element ceil(q*reps) - 1 (clamped) of the
/// ascending values.
inline double quantile(const SamplingCdf& c, double q) {
  if (!(q >= 0.0 && q <= 1.0)) throw std::domain_error("quantile level must be in [0, 1]");
  if (c.values.empty()) throw std::invalid_argument("sampling cdf has no values");
  const double pos = std::ceil(q * static_cast<double>(c.values.size())) - 1.0;
  const auto idx = static_cast<std::size_t>(std::clamp(pos, 0.0, static_cast<double>(c.values.size() - 1)));
  return c.values[idx];
}

/// Fraction of replicates whose interval contains the true MI of j.
inline double coverage_experiment(const JointDistribution& j, std::uint64_t n, std::uint64_t reps,
                                  double alpha, IntervalMethod method, std::uint64_t seed,
                                  unsigned threads = 0) {
  if (reps < 1) throw std::invalid_argument("reps must be >= 1");
  const double true_mi = mutual_information(j);
  std::vector<unsigned char> hit(reps, 0);
  detail::parallel_replicates(reps, threads, [&](std::uint64_t r) {
    Xoshiro256pp rng(seed, r);
    CountTable t(multinomial_draw(rng, n, std::span(j.probs())), j.mx(), j.my());
    const Interval iv = method == IntervalMethod::thm2 ? interval_thm2(t, alpha, UnitTag::nats)
                                                       : interval_thm4(t, alpha, UnitTag::nats);
    hit[r] = iv.contains(true_mi) ? 1 : 0;
  });
  std::uint64_t covered = 0;
  for (unsigned char h : hit) covered += h;
  return static_cast<double>(covered) / static_cast<double>(reps);
}

/// Two-column text form "mi_bits cdf", ascending, for external plotting.
inline void write_cdf(std::ostream& os, const SamplingCdf& c) {
  os << "mi_bits cdf\n";
  const double denom = static_cast<double>(c.values.size());
  for (std::size_t i = 0; i < c.values.size(); ++i)
    os << nats_to_bits(c.values[i]) << ' ' << (static_cast<double>(i + 1) / denom) << '\n';
}

}  // namespace miconf
