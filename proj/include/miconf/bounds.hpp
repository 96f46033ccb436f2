#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "miconf/distribution.hpp"

namespace miconf {

/// Pair of alphabet sizes, normalized so mx <= my. Swapping is permitted
/// because mutual information is symmetric in X and Y.
class AlphabetPair {
 public:
  AlphabetPair(std::size_t mx, std::size_t my) : mx_(mx), my_(my) {
    if (mx_ < 2 || my_ < 2) throw std::invalid_argument("alphabet sizes must be >= 2");
    if (mx_ > my_) std::swap(mx_, my_);
  }

  std::size_t mx() const { return mx_; }
  std::size_t my() const { return my_; }
  std::size_t cells() const { return mx_ * my_; }

 private:
  std::size_t mx_;
  std::size_t my_;
};

/// Parameters of a confidence statement: level 1-alpha, sample count n, and
/// the alphabet the samples live on.
struct ConfidenceQuery {
  double alpha;
  std::uint64_t n;
  AlphabetPair alphabet;

  ConfidenceQuery(double alpha_, std::uint64_t n_, AlphabetPair alphabet_)
      : alpha(alpha_), n(n_), alphabet(alphabet_) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::domain_error("alpha must be in (0, 1]");
    if (n < 1) throw std::invalid_argument("sample count n must be >= 1");
  }
};

namespace detail {

/// ln(2^cells - 2), computed in log space so it never overflows.
inline double log_tail_coefficient(std::size_t cells) {
  const double c = static_cast<double>(cells);
  return c * kLn2 + std::log1p(-2.0 * std::exp2(-c));
}

}  // namespace detail

/// Largest variational distance between two joints on an mx x my alphabet at
/// which the first branch of delta_I applies.
inline double delta_I_branch_boundary(const AlphabetPair& a) {
  return 2.0 - 2.0 / static_cast<double>(a.mx());
}

/// Upper bound, in nats, on |I(p) - I(p')| over all joint pairs within
/// variational distance epsilon:
///   (eps/2) * ln[(mx*my - 1)(mx - 1)(my - 1)] + 3 * H2(eps/2)   for eps <= 2 - 2/mx,
///   ln(mx)                                                      otherwise.
/// The boundary point belongs to the first branch, which may exceed ln(mx)
/// near it; no minimum of the two branches is taken.
inline double delta_I(double epsilon, const AlphabetPair& a) {
  if (!(epsilon >= 0.0)) throw std::domain_error("delta_I requires epsilon >= 0");
  const double mx = static_cast<double>(a.mx());
  const double my = static_cast<double>(a.my());
  if (epsilon <= delta_I_branch_boundary(a))
    return (epsilon / 2.0) * std::log((mx * my - 1.0) * (mx - 1.0) * (my - 1.0)) +
           3.0 * binary_entropy(epsilon / 2.0);
  return std::log(mx);
}

/// Validity limit of delta_I_zhang: epsilon <= 2 - 2/(mx*my).
inline double delta_I_zhang_boundary(const AlphabetPair& a) {
  return 2.0 - 2.0 / static_cast<double>(a.cells());
}

/// Earlier bound 3*(eps/2)*ln(mx*my - 1) + 3*H2(eps/2), kept for comparison;
/// delta_I is everywhere at most this value on the shared domain.
inline double delta_I_zhang(double epsilon, const AlphabetPair& a) {
  const double hi = delta_I_zhang_boundary(a);
  if (!(epsilon >= 0.0 && epsilon <= hi))
    throw std::domain_error("delta_I_zhang requires 0 <= epsilon <= 2 - 2/(mx*my) = " +
                            std::to_string(hi));
  const double cells = static_cast<double>(a.cells());
  return 3.0 * (epsilon / 2.0) * std::log(cells - 1.0) + 3.0 * binary_entropy(epsilon / 2.0);
}

/// Upper bound (2^(mx*my) - 2) * exp(-n*eps^2/2) on the probability that the
/// empirical joint of n samples deviates from the truth by more than epsilon
/// in variational distance. May exceed 1; it bounds a probability but is not
/// one. Returns +inf when the coefficient overflows (bound vacuous).
inline double weissman_tail(std::uint64_t n, double epsilon, const AlphabetPair& a) {
  if (n < 1) throw std::invalid_argument("sample count n must be >= 1");
  if (!(epsilon > 0.0)) throw std::domain_error("weissman_tail requires epsilon > 0");
  const double log_tail =
      detail::log_tail_coefficient(a.cells()) - static_cast<double>(n) * epsilon * epsilon / 2.0;
  return std::exp(log_tail);
}

/// Deviation radius epsilon = sqrt((2/n) * ln((2^(mx*my) - 2)/alpha)) such
/// that weissman_tail(n, epsilon) = alpha. A result > 2 means the tail bound
/// is vacuous at this (n, alpha): no distribution pair is that far apart.
inline double epsilon_for_confidence(const ConfidenceQuery& q) {
  const double log_ratio = detail::log_tail_coefficient(q.alphabet.cells()) - std::log(q.alpha);
  return std::sqrt(2.0 / static_cast<double>(q.n) * log_ratio);
}

}  // namespace miconf
