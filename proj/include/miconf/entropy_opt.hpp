#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "miconf/distribution.hpp"

namespace miconf {

enum class ExtremumKind { min, max };

/// Optimizer of an entropy extremum problem over {p : V(p, q) <= epsilon}.
struct EntropyBallSolution {
  std::vector<double> argopt;  // valid probability vector
  double value;                // entropy(argopt), nats
  ExtremumKind kind;
};

namespace detail {

// L1 balls never need radii beyond 2: V is at most 2 on the simplex.
inline double clip_ball_radius(double epsilon) {
  if (!(epsilon >= 0.0)) throw std::domain_error("ball radius epsilon must be >= 0");
  return std::min(epsilon, 2.0);
}

/// Bisection for the unique root of a monotone piecewise-linear function on
/// [lo, hi]; runs to machine precision (well inside 1e-12), at most 200 steps.
template <typename F>
double bisect_monotone(F&& f, double lo, double hi, bool increasing) {
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const bool above = f(mid) > 0.0;
    if (above == increasing)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

/// Entropy maximizer over the variational-distance ball of radius epsilon
/// around q: water-filling. If the uniform distribution lies in the ball it
/// is the answer; otherwise mass epsilon/2 is shaved off the largest entries
/// (cap c) and poured onto the smallest (floor f), p_i = clamp(q_i, f, c).
inline EntropyBallSolution max_entropy_in_ball(std::span<const double> q_in, double epsilon) {
  const double eps = detail::clip_ball_radius(epsilon);
  const std::vector<double> q = detail::normalized_copy(q_in);
  const std::size_t m = q.size();

  std::vector<double> uniform(m, 1.0 / static_cast<double>(m));
  if (variational_distance(std::span(q), std::span<const double>(uniform)) <= eps) {
    const double value = entropy(std::span<const double>(uniform));
    return {std::move(uniform), value, ExtremumKind::max};
  }

  const double half = eps / 2.0;
  const double qmax = *std::max_element(q.begin(), q.end());
  // Mass above the cap, decreasing in c; mass below the floor, increasing in f.
  auto above_cap = [&](double c) {
    double s = 0.0;
    for (double v : q) s += std::max(v - c, 0.0);
    return s - half;
  };
  auto below_floor = [&](double f) {
    double s = 0.0;
    for (double v : q) s += std::max(f - v, 0.0);
    return s - half;
  };
  const double c = detail::bisect_monotone(above_cap, 0.0, qmax, /*increasing=*/false);
  const double f = detail::bisect_monotone(below_floor, 0.0, 1.0, /*increasing=*/true);

  std::vector<double> p(m);
  for (std::size_t i = 0; i < m; ++i) p[i] = std::clamp(q[i], f, c);
  MarginalDistribution result(std::move(p));
  const double value = entropy(result);
  return {result.probs(), value, ExtremumKind::max};
}

/// Entropy minimizer over the same ball: concentrate. Transfer
/// t = min(epsilon/2, 1 - max q) onto the largest entry (lowest index on
/// ties), taking it from the smallest entries first, zeroing them in
/// ascending order of mass (ties by lowest index).
inline EntropyBallSolution min_entropy_in_ball(std::span<const double> q_in, double epsilon) {
  const double eps = detail::clip_ball_radius(epsilon);
  std::vector<double> p = detail::normalized_copy(q_in);
  const std::size_t m = p.size();

  std::size_t receiver = 0;
  for (std::size_t i = 1; i < m; ++i)
    if (p[i] > p[receiver]) receiver = i;

  // A transfer capped at 1 - max q empties every other entry: that is the
  // vertex, written out exactly so no subtraction residue survives.
  if (eps / 2.0 >= 1.0 - p[receiver]) {
    std::fill(p.begin(), p.end(), 0.0);
    p[receiver] = 1.0;
    return {std::move(p), 0.0, ExtremumKind::min};
  }

  const double t = eps / 2.0;
  if (t > 0.0) {
    std::vector<std::size_t> order;
    order.reserve(m - 1);
    for (std::size_t i = 0; i < m; ++i)
      if (i != receiver) order.push_back(i);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return p[a] < p[b]; });
    p[receiver] += t;
    double remaining = t;
    for (std::size_t idx : order) {
      const double take = std::min(remaining, p[idx]);
      p[idx] -= take;
      remaining -= take;
      if (remaining <= 0.0) break;
    }
  }
  MarginalDistribution result(std::move(p));
  const double value = entropy(result);
  return {result.probs(), value, ExtremumKind::min};
}

inline EntropyBallSolution max_entropy_in_ball(const MarginalDistribution& q, double epsilon) {
  return max_entropy_in_ball(std::span(q.probs()), epsilon);
}

inline EntropyBallSolution min_entropy_in_ball(const MarginalDistribution& q, double epsilon) {
  return min_entropy_in_ball(std::span(q.probs()), epsilon);
}

/// Exhaustive grid-search reference for the two solvers above; test support
/// only. Walks every grid composition p_i = k_i/round(1/step) inside the
/// ball (plus the center itself) and returns the extremal entropy found.
/// Refuses dimensions above 4 and steps above 0.002: combinatorial blowup.
inline double oracle_entropy_extremum(std::span<const double> q_in, double epsilon,
                                      ExtremumKind kind, double step) {
  const std::vector<double> q = detail::normalized_copy(q_in);
  const std::size_t d = q.size();
  if (d > 4) throw std::invalid_argument("oracle_entropy_extremum refuses dimension > 4");
  if (!(step > 0.0 && step <= 0.002))
    throw std::invalid_argument("oracle_entropy_extremum requires 0 < step <= 0.002");
  const double eps = detail::clip_ball_radius(epsilon) + 1e-12;  // admit boundary points

  const long R = std::lround(1.0 / step);
  std::vector<double> xlnx(R + 1);
  for (long k = 0; k <= R; ++k) xlnx[k] = detail::xlnx(static_cast<double>(k) / R);
  std::vector<std::vector<double>> dist(d, std::vector<double>(R + 1));
  for (std::size_t j = 0; j < d; ++j)
    for (long k = 0; k <= R; ++k)
      dist[j][k] = std::abs(static_cast<double>(k) / R - q[j]);

  const bool maximize = kind == ExtremumKind::max;
  double best = entropy(std::span(q));  // the center is always feasible
  if (d < 2) return best;               // one-point simplex

  // Innermost pair (k, rem - k) is scanned contiguously; prefixes prune on
  // partial distance alone since every term is nonnegative.
  auto scan_last_two = [&](long rem, double pd, double ph, std::size_t j) {
    const auto& dj = dist[j];
    const auto& dk = dist[j + 1];
    for (long k = 0; k <= rem; ++k) {
      const double v = pd + dj[k] + dk[rem - k];
      if (v > eps) continue;
      const double h = -(ph + xlnx[k] + xlnx[rem - k]);
      if (maximize ? h > best : h < best) best = h;
    }
  };

  if (d == 2) {
    scan_last_two(R, 0.0, 0.0, 0);
  } else if (d == 3) {
    for (long k0 = 0; k0 <= R; ++k0) {
      if (dist[0][k0] > eps) continue;
      scan_last_two(R - k0, dist[0][k0], xlnx[k0], 1);
    }
  } else {
    for (long k0 = 0; k0 <= R; ++k0) {
      if (dist[0][k0] > eps) continue;
      for (long k1 = 0; k1 + k0 <= R; ++k1) {
        const double pd = dist[0][k0] + dist[1][k1];
        if (pd > eps) continue;
        scan_last_two(R - k0 - k1, pd, xlnx[k0] + xlnx[k1], 2);
      }
    }
  }
  return best;
}

}  // namespace miconf
