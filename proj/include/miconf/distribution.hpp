#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace miconf {

/// Unit of entropy-like quantities. Internally everything is computed in
/// nats; conversion to bits happens only when results are presented.
enum class UnitTag { nats, bits };

inline constexpr double kLn2 = 0.6931471805599453;

/// Absolute tolerance on probability sums. Inputs whose entries sum to 1
/// within this tolerance are accepted and renormalized.
inline constexpr double kProbSumTol = 1e-12;

inline double nats_to_bits(double x) { return x / kLn2; }
inline double bits_to_nats(double x) { return x * kLn2; }

inline double convert_unit(double x, UnitTag from, UnitTag to) {
  if (from == to) return x;
  return from == UnitTag::nats ? nats_to_bits(x) : bits_to_nats(x);
}

inline const char* unit_name(UnitTag u) { return u == UnitTag::nats ? "nats" : "bits"; }

namespace detail {

inline double xlnx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

inline void check_probability_vector(std::span<const double> p) {
  if (p.empty()) throw std::invalid_argument("probability vector must be nonempty");
  double sum = 0.0;
  for (double v : p) {
    if (!(v >= 0.0)) throw std::invalid_argument("probability entries must be >= 0 and finite");
    sum += v;
  }
  if (std::abs(sum - 1.0) > kProbSumTol)
    throw std::invalid_argument("probability entries must sum to 1 (got " + std::to_string(sum) + ")");
}

inline std::vector<double> normalized_copy(std::span<const double> p) {
  check_probability_vector(p);
  double sum = 0.0;
  for (double v : p) sum += v;
  std::vector<double> out(p.begin(), p.end());
  for (double& v : out) v /= sum;
  return out;
}

}  // namespace detail

/// A probability distribution over a single finite alphabet {1, ..., M}.
class MarginalDistribution {
 public:
  explicit MarginalDistribution(std::vector<double> probs) : probs_(detail::normalized_copy(probs)) {}

  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  const std::vector<double>& probs() const { return probs_; }

 private:
  std::vector<double> probs_;
};

/// A joint probability distribution over {1,...,Mx} x {1,...,My}, stored
/// row-major (X indexes rows).
class JointDistribution {
 public:
  JointDistribution(std::vector<double> probs_row_major, std::size_t mx, std::size_t my)
      : probs_(detail::normalized_copy(probs_row_major)), mx_(mx), my_(my) {
    if (mx < 2 || my < 2) throw std::invalid_argument("alphabet sizes must be >= 2");
    if (probs_.size() != mx * my)
      throw std::invalid_argument("joint matrix has " + std::to_string(probs_.size()) +
                                  " entries, expected " + std::to_string(mx * my));
  }

  std::size_t mx() const { return mx_; }
  std::size_t my() const { return my_; }
  double at(std::size_t i, std::size_t j) const { return probs_[i * my_ + j]; }
  const std::vector<double>& probs() const { return probs_; }

 private:
  std::vector<double> probs_;  // row-major, mx_ x my_
  std::size_t mx_;
  std::size_t my_;
};

/// An Mx x My table of sample counts with total n >= 1. Dividing by n gives
/// the empirical joint distribution.
class CountTable {
 public:
  CountTable(std::vector<std::uint64_t> counts_row_major, std::size_t mx, std::size_t my)
      : counts_(std::move(counts_row_major)), mx_(mx), my_(my), n_(0) {
    if (mx < 2 || my < 2) throw std::invalid_argument("alphabet sizes must be >= 2");
    if (counts_.size() != mx * my)
      throw std::invalid_argument("count matrix has " + std::to_string(counts_.size()) +
                                  " entries, expected " + std::to_string(mx * my));
    for (std::uint64_t c : counts_) n_ += c;
    if (n_ == 0) throw std::invalid_argument("count table must contain at least one sample");
  }

  std::size_t mx() const { return mx_; }
  std::size_t my() const { return my_; }
  std::uint64_t n() const { return n_; }
  std::uint64_t at(std::size_t i, std::size_t j) const { return counts_[i * my_ + j]; }
  const std::vector<std::uint64_t>& counts() const { return counts_; }

 private:
  std::vector<std::uint64_t> counts_;
  std::size_t mx_;
  std::size_t my_;
  std::uint64_t n_;
};

/// Shannon entropy -sum p_i ln p_i in nats, with 0 ln 0 = 0.
inline double entropy(std::span<const double> p) {
  detail::check_probability_vector(p);
  double h = 0.0;
  for (double v : p) h -= detail::xlnx(v);
  return std::max(0.0, h);
}

inline double entropy(const MarginalDistribution& p) { return entropy(std::span(p.probs())); }

/// Joint entropy: the entropy of the flattened cell distribution.
inline double entropy(const JointDistribution& j) { return entropy(std::span(j.probs())); }

/// Binary entropy function in nats; endpoints return 0.
inline double binary_entropy(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("binary_entropy requires x in [0, 1]");
  return -detail::xlnx(x) - detail::xlnx(1.0 - x);
}

/// Row sums and column sums of a joint distribution: (p_X, p_Y).
inline std::pair<MarginalDistribution, MarginalDistribution> marginals(const JointDistribution& j) {
  std::vector<double> px(j.mx(), 0.0), py(j.my(), 0.0);
  for (std::size_t i = 0; i < j.mx(); ++i)
    for (std::size_t k = 0; k < j.my(); ++k) {
      px[i] += j.at(i, k);
      py[k] += j.at(i, k);
    }
  return {MarginalDistribution(std::move(px)), MarginalDistribution(std::move(py))};
}

/// Mutual information H(X) + H(Y) - H(XY) in nats. Tiny negative values from
/// floating-point cancellation (within -1e-12) are clamped to 0.
inline double mutual_information(const JointDistribution& j) {
  auto [px, py] = marginals(j);
  double mi = entropy(px) + entropy(py) - entropy(j);
  if (mi < 0.0 && mi >= -1e-12) mi = 0.0;
  return mi;
}

/// Plug-in mutual information of the empirical distribution counts/n, in
/// nats, computed directly from the counts:
///   I = ln n + (1/n) (sum_cells c ln c - sum_rows r ln r - sum_cols s ln s)
inline double mutual_information(const CountTable& t) {
  const double n = static_cast<double>(t.n());
  std::vector<double> rows(t.mx(), 0.0), cols(t.my(), 0.0);
  double cell_sum = 0.0;
  for (std::size_t i = 0; i < t.mx(); ++i)
    for (std::size_t j = 0; j < t.my(); ++j) {
      const double c = static_cast<double>(t.at(i, j));
      rows[i] += c;
      cols[j] += c;
      cell_sum += detail::xlnx(c);
    }
  double row_sum = 0.0, col_sum = 0.0;
  for (double r : rows) row_sum += detail::xlnx(r);
  for (double s : cols) col_sum += detail::xlnx(s);
  double mi = std::log(n) + (cell_sum - row_sum - col_sum) / n;
  if (mi < 0.0 && mi >= -1e-12) mi = 0.0;
  return mi;
}

/// Variational (L1) distance sum |a_i - b_i|; lies in [0, 2].
inline double variational_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw std::invalid_argument("variational_distance requires equal-length vectors");
  detail::check_probability_vector(a);
  detail::check_probability_vector(b);
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d += std::abs(a[i] - b[i]);
  return d;
}

inline double variational_distance(const MarginalDistribution& a, const MarginalDistribution& b) {
  return variational_distance(std::span(a.probs()), std::span(b.probs()));
}

inline double variational_distance(const JointDistribution& a, const JointDistribution& b) {
  if (a.mx() != b.mx() || a.my() != b.my())
    throw std::invalid_argument("variational_distance requires joints of equal shape");
  return variational_distance(std::span(a.probs()), std::span(b.probs()));
}

/// Tally an i.i.d. sequence of 1-based (x, y) label pairs into a CountTable.
inline CountTable empirical_from_samples(std::span<const std::pair<int, int>> samples,
                                         std::size_t mx, std::size_t my) {
  if (mx < 2 || my < 2) throw std::invalid_argument("alphabet sizes must be >= 2");
  std::vector<std::uint64_t> counts(mx * my, 0);
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const auto [x, y] = samples[k];
    if (x < 1 || static_cast<std::size_t>(x) > mx || y < 1 || static_cast<std::size_t>(y) > my)
      throw std::invalid_argument("sample " + std::to_string(k + 1) + ": label (" +
                                  std::to_string(x) + ", " + std::to_string(y) +
                                  ") out of range for " + std::to_string(mx) + "x" +
                                  std::to_string(my) + " alphabet");
    counts[(static_cast<std::size_t>(x) - 1) * my + (static_cast<std::size_t>(y) - 1)] += 1;
  }
  return CountTable(std::move(counts), mx, my);
}

/// Empirical joint distribution counts/n.
inline JointDistribution to_distribution(const CountTable& t) {
  const double n = static_cast<double>(t.n());
  std::vector<double> probs(t.counts().size());
  for (std::size_t i = 0; i < probs.size(); ++i)
    probs[i] = static_cast<double>(t.counts()[i]) / n;
  return JointDistribution(std::move(probs), t.mx(), t.my());
}

}  // namespace miconf
