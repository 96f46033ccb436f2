#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "miconf/bounds.hpp"
#include "miconf/distribution.hpp"
#include "miconf/entropy_opt.hpp"

namespace miconf {

enum class IntervalMethod { thm2, thm4 };

inline const char* method_name(IntervalMethod m) {
  return m == IntervalMethod::thm2 ? "thm2" : "thm4";
}

/// Two-sided confidence interval for the mutual information of the unknown
/// joint distribution behind a count table.
struct Interval {
  double lower;
  double upper;
  UnitTag unit;
  IntervalMethod method;
  double epsilon_used;  // deviation radius the construction relied on
  double alpha;

  double width() const { return upper - lower; }
  bool contains(double v) const { return lower <= v && v <= upper; }
};

/// Result of the sample-size calculation: smallest n whose interval
/// half-width is at most gamma at confidence level 1-alpha.
struct SampleSizePlan {
  std::uint64_t n_required;
  double epsilon_solved;
  double gamma;  // nats
  double alpha;
};

namespace detail {

inline void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::domain_error("alpha must be in (0, 1]");
}

inline Interval finish_interval(double lo_nats, double hi_nats, UnitTag unit, IntervalMethod m,
                                double eps, double alpha, bool clamp, std::size_t mx_min) {
  if (clamp) {
    const double cap = std::log(static_cast<double>(mx_min));
    lo_nats = std::clamp(lo_nats, 0.0, cap);
    hi_nats = std::clamp(hi_nats, 0.0, cap);
  }
  return {convert_unit(lo_nats, UnitTag::nats, unit), convert_unit(hi_nats, UnitTag::nats, unit),
          unit, m, eps, alpha};
}

}  // namespace detail

/// Fixed-width interval: plug-in MI plus/minus the worst-case MI difference
/// delta_I at the deviation radius epsilon that the tail bound grants with
/// probability 1-alpha. Width depends only on (n, alpha, alphabet sizes).
/// Endpoints are not clamped to [0, ln mx] unless `clamp` is set; a negative
/// lower endpoint is meaningful output.
inline Interval interval_thm2(const CountTable& counts, double alpha,
                              UnitTag unit = UnitTag::bits, bool clamp = false) {
  detail::check_alpha(alpha);
  const AlphabetPair a(counts.mx(), counts.my());
  const double eps = epsilon_for_confidence({alpha, counts.n(), a});
  const double half = delta_I(eps, a);
  const double mi = mutual_information(counts);
  return detail::finish_interval(mi - half, mi + half, unit, IntervalMethod::thm2, eps, alpha,
                                 clamp, a.mx());
}

/// Data-adaptive interval built from entropy extrema over variational-
/// distance balls around the empirical marginals and joint, all of radius
/// epsilon (marginal distances never exceed the joint distance):
///   lower = min H(X-ball) + min H(Y-ball) - max H(XY-ball)
///   upper = max H(X-ball) + max H(Y-ball) - min H(XY-ball)
/// Always contained in the interval_thm2 interval for the same inputs. The
/// endpoints are invariant under swapping X and Y, so no transposition of
/// the table is needed to normalize alphabet order.
inline Interval interval_thm4(const CountTable& counts, double alpha,
                              UnitTag unit = UnitTag::bits, bool clamp = false) {
  detail::check_alpha(alpha);
  const AlphabetPair a(counts.mx(), counts.my());
  const double eps = epsilon_for_confidence({alpha, counts.n(), a});
  const JointDistribution emp = to_distribution(counts);
  const auto [px, py] = marginals(emp);

  const double hx_min = min_entropy_in_ball(px, eps).value;
  const double hx_max = max_entropy_in_ball(px, eps).value;
  const double hy_min = min_entropy_in_ball(py, eps).value;
  const double hy_max = max_entropy_in_ball(py, eps).value;
  const double hxy_min = min_entropy_in_ball(std::span(emp.probs()), eps).value;
  const double hxy_max = max_entropy_in_ball(std::span(emp.probs()), eps).value;

  const double lo = hx_min + hy_min - hxy_max;
  const double hi = hx_max + hy_max - hxy_min;
  return detail::finish_interval(lo, hi, unit, IntervalMethod::thm4, eps, alpha, clamp, a.mx());
}

/// Smallest sample count n such that the fixed-width interval has half-width
/// at most gamma (nats) at confidence level 1-alpha. Solves
/// delta_I(epsilon) = gamma for the unique root on (0, 2 - 2/mx) by
/// bisection, then n = ceil((2/epsilon^2) * ln((2^(mx*my) - 2)/alpha)).
inline SampleSizePlan sample_size_thm3(double gamma, double alpha, const AlphabetPair& a) {
  detail::check_alpha(alpha);
  const double cap = std::log(static_cast<double>(a.mx()));
  if (!(gamma > 0.0)) throw std::domain_error("gamma must be > 0");
  if (!(gamma < cap))
    throw std::domain_error("gamma must be less than ln(mx) = " + std::to_string(cap) +
                            " nats: no finite n can pin mutual information tighter than its range");

  // The first branch of delta_I is strictly increasing and exceeds ln(mx) at
  // the branch boundary, so a root exists and is unique. Keep the bracket
  // invariant delta_I(hi) >= gamma and return hi: the solved epsilon then
  // errs on the large side by at most one ulp, so the ceiling below cannot
  // round an exact integer boundary upward.
  double lo = 0.0, hi = delta_I_branch_boundary(a);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (delta_I(mid, a) > gamma)
      hi = mid;
    else
      lo = mid;
  }
  const double eps = hi;

  const double n_raw =
      2.0 / (eps * eps) * (detail::log_tail_coefficient(a.cells()) - std::log(alpha));
  // Round-trip inputs land n_raw on an exact integer; subtract float dust
  // before the ceiling so it cannot tip upward. The half-width excess a
  // one-short n could cause is below the 1e-9 slack quoted everywhere.
  const double dust = 1e-9 + n_raw * 1e-12;
  const auto n = static_cast<std::uint64_t>(std::ceil(n_raw - dust));
  return {std::max<std::uint64_t>(n, 1), eps, gamma, alpha};
}

}  // namespace miconf
