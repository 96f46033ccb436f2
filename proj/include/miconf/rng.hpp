#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace miconf {

/// Identifies the generator and substream scheme in output metadata, so
/// recorded results state exactly how their randomness was produced.
inline constexpr const char* kGeneratorId = "xoshiro256++/splitmix64-substreams/v1";

namespace detail {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

/// splitmix64 step: advance the counter by the golden-ratio increment and
/// finalize. Output k of stream `seed` is mix_step applied to
/// seed + (k+1)*kGolden.
inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

}  // namespace detail

/// State words for a replicate's private generator: outputs 4r..4r+3 of the
/// splitmix64 stream seeded with `seed`. Distinct replicates get disjoint,
/// well-mixed state; the derivation is pure arithmetic, so replicates can be
/// initialized in any order on any thread.
inline std::array<std::uint64_t, 4> substream_seed(std::uint64_t seed, std::uint64_t replicate) {
  std::array<std::uint64_t, 4> s;
  std::uint64_t x = seed + 4ull * replicate * detail::kGolden;
  for (auto& w : s) {
    x += detail::kGolden;
    w = detail::mix64(x);
  }
  if ((s[0] | s[1] | s[2] | s[3]) == 0) s[0] = detail::kGolden;  // xoshiro forbids all-zero
  return s;
}

/// xoshiro256++ with a fixed, versioned algorithm: results are reproducible
/// across builds and platforms for a given state.
class Xoshiro256pp {
 public:
  explicit Xoshiro256pp(const std::array<std::uint64_t, 4>& state) : s_(state) {}
  Xoshiro256pp(std::uint64_t seed, std::uint64_t replicate)
      : Xoshiro256pp(substream_seed(seed, replicate)) {}

  std::uint64_t next() {
    const std::uint64_t result = std::rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = std::rotl(s_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::array<std::uint64_t, 4> s_;
};

/// Exact Binomial(n, p) sample by CDF inversion. The probability mass is
/// accumulated outward from the mode in a zigzag, using the term ratio
/// recurrence, so the expected work is O(sqrt(n p (1-p))) rather than O(n).
inline std::uint64_t binomial_draw(Xoshiro256pp& rng, std::uint64_t n, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("binomial probability must be in [0, 1]");
  if (n == 0 || p == 0.0) return 0;
  if (p == 1.0) return n;

  const double nd = static_cast<double>(n);
  const auto mode = static_cast<std::uint64_t>(
      std::min(nd, std::floor((nd + 1.0) * p)));
  const double md = static_cast<double>(mode);
  const double pmf_mode = std::exp(std::lgamma(nd + 1.0) - std::lgamma(md + 1.0) -
                                   std::lgamma(nd - md + 1.0) + md * std::log(p) +
                                   (nd - md) * std::log1p(-p));
  const double odds = p / (1.0 - p);

  const double u = rng.uniform01();
  double cum = pmf_mode;
  if (u <= cum) return mode;

  std::uint64_t lo = mode, hi = mode, last = mode;
  double pmf_lo = pmf_mode, pmf_hi = pmf_mode;
  while (lo > 0 || hi < n) {
    if (lo > 0) {
      const double k = static_cast<double>(lo);
      pmf_lo *= k / ((nd - k + 1.0) * odds);
      --lo;
      cum += pmf_lo;
      last = lo;
      if (u <= cum) return lo;
    }
    if (hi < n) {
      const double k = static_cast<double>(hi);
      pmf_hi *= (nd - k) / (k + 1.0) * odds;
      ++hi;
      cum += pmf_hi;
      last = hi;
      if (u <= cum) return hi;
    }
  }
  // Mass summed to 1 minus float dust yet u lies above it; return the most
  // extreme value visited.
  return last;
}

/// Multinomial(n, probs) via the conditional-binomial decomposition: cell i
/// is Binomial(remaining, p_i / remaining mass), the final cell takes the
/// remainder. Counts always sum to n exactly.
inline std::vector<std::uint64_t> multinomial_draw(Xoshiro256pp& rng, std::uint64_t n,
                                                   std::span<const double> probs) {
  if (probs.empty()) throw std::invalid_argument("multinomial needs at least one cell");
  std::vector<std::uint64_t> counts(probs.size(), 0);
  std::uint64_t remaining = n;
  double mass_left = 1.0;
  for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
    if (remaining == 0) break;
    double cond = mass_left > 0.0 ? probs[i] / mass_left : 1.0;
    cond = std::clamp(cond, 0.0, 1.0);
    const std::uint64_t c = binomial_draw(rng, remaining, cond);
    counts[i] = c;
    remaining -= c;
    mass_left -= probs[i];
  }
  counts.back() += remaining;
  return counts;
}

}  // namespace miconf
