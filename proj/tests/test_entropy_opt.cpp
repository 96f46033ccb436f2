#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <vector>

#include "miconf/entropy_opt.hpp"

using namespace miconf;
using Catch::Matchers::WithinAbs;

namespace {

std::vector<double> random_simplex_point(std::mt19937& rng, std::size_t dim) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> q(dim);
  double sum = 0.0;
  for (double& v : q) {
    v = -std::log(1.0 - u(rng));
    sum += v;
  }
  for (double& v : q) v /= sum;
  return q;
}

void check_solution(const EntropyBallSolution& s, const std::vector<double>& q, double eps) {
  double sum = 0.0;
  for (double v : s.argopt) {
    CHECK(v >= 0.0);
    sum += v;
  }
  CHECK_THAT(sum, WithinAbs(1.0, 1e-12));
  CHECK(variational_distance(std::span<const double>(s.argopt), std::span<const double>(q)) <=
        eps + 1e-9);
  CHECK_THAT(s.value, WithinAbs(entropy(std::span<const double>(s.argopt)), 1e-10));
}

}  // namespace

TEST_CASE("max entropy in ball: two-point examples") {
  std::vector<double> q = {0.7, 0.3};

  auto s0 = max_entropy_in_ball(q, 0.0);
  CHECK_THAT(s0.argopt[0], WithinAbs(0.7, 1e-12));
  CHECK_THAT(s0.value, WithinAbs(0.6108643020548935, 1e-12));

  // V(q, uniform) = 0.4, so the uniform distribution is reachable.
  auto s_wide = max_entropy_in_ball(q, 0.4);
  CHECK(s_wide.argopt[0] == 0.5);
  CHECK(s_wide.argopt[1] == 0.5);
  CHECK_THAT(s_wide.value, WithinAbs(kLn2, 1e-15));

  auto s = max_entropy_in_ball(q, 0.2);
  CHECK_THAT(s.argopt[0], WithinAbs(0.6, 1e-12));
  CHECK_THAT(s.argopt[1], WithinAbs(0.4, 1e-12));
  CHECK_THAT(s.value, WithinAbs(0.6730116670092564, 1e-12));
  CHECK(s.kind == ExtremumKind::max);
}

TEST_CASE("min entropy in ball: two-point examples") {
  std::vector<double> q = {0.7, 0.3};

  auto s0 = min_entropy_in_ball(q, 0.0);
  CHECK_THAT(s0.argopt[0], WithinAbs(0.7, 1e-12));

  // 2*(1 - 0.7) = 0.6: the point mass is reachable.
  auto s_wide = min_entropy_in_ball(q, 0.6);
  CHECK_THAT(s_wide.argopt[0], WithinAbs(1.0, 1e-12));
  CHECK(s_wide.value == 0.0);

  auto s = min_entropy_in_ball(q, 0.2);
  CHECK_THAT(s.argopt[0], WithinAbs(0.8, 1e-12));
  CHECK_THAT(s.argopt[1], WithinAbs(0.2, 1e-12));
  CHECK_THAT(s.value, WithinAbs(0.5004024235381879, 1e-12));
  CHECK(s.kind == ExtremumKind::min);
}

TEST_CASE("solutions stay feasible for random instances") {
  std::mt19937 rng(20240811);
  std::uniform_real_distribution<double> ueps(0.0, 2.0);
  std::uniform_int_distribution<std::size_t> udim(2, 6);
  for (int i = 0; i < 500; ++i) {
    const auto q = random_simplex_point(rng, udim(rng));
    const double eps = ueps(rng);
    CAPTURE(i, eps, q.size());
    check_solution(max_entropy_in_ball(q, eps), q, eps);
    check_solution(min_entropy_in_ball(q, eps), q, eps);
  }
}

TEST_CASE("min <= center <= max, equal only at radius zero") {
  std::mt19937 rng(7);
  for (int i = 0; i < 100; ++i) {
    const auto q = random_simplex_point(rng, 4);
    const double hq = entropy(std::span<const double>(q));

    auto at0_min = min_entropy_in_ball(q, 0.0);
    auto at0_max = max_entropy_in_ball(q, 0.0);
    CHECK_THAT(at0_min.value, WithinAbs(hq, 1e-10));
    CHECK_THAT(at0_max.value, WithinAbs(hq, 1e-10));

    const double lo = min_entropy_in_ball(q, 0.3).value;
    const double hi = max_entropy_in_ball(q, 0.3).value;
    CHECK(lo <= hq + 1e-12);
    CHECK(hq <= hi + 1e-12);
    CHECK(lo < hi);
  }
}

TEST_CASE("extrema are monotone in the radius") {
  std::mt19937 rng(99);
  const auto q = random_simplex_point(rng, 5);
  double prev_max = -1.0, prev_min = 10.0;
  for (int i = 0; i <= 40; ++i) {
    const double eps = 2.0 * i / 40.0;
    const double hi = max_entropy_in_ball(q, eps).value;
    const double lo = min_entropy_in_ball(q, eps).value;
    CHECK(hi >= prev_max - 1e-12);
    CHECK(lo <= prev_min + 1e-12);
    prev_max = hi;
    prev_min = lo;
  }
  // Radius 2 covers the whole simplex.
  CHECK_THAT(prev_max, WithinAbs(std::log(5.0), 1e-12));
  CHECK(prev_min == 0.0);
}

TEST_CASE("saturation: uniform cap and point-mass floor") {
  std::vector<double> q = {0.1, 0.2, 0.3, 0.4};
  const double v_to_uniform =
      variational_distance(std::span<const double>(q), std::vector<double>{0.25, 0.25, 0.25, 0.25});
  auto s = max_entropy_in_ball(q, v_to_uniform);
  for (double v : s.argopt) CHECK(v == 0.25);

  auto t = min_entropy_in_ball(q, 2.0 * (1.0 - 0.4));
  CHECK(t.value == 0.0);
  CHECK_THAT(t.argopt[3], WithinAbs(1.0, 1e-12));
}

TEST_CASE("permutation equivariance") {
  std::vector<double> q = {0.05, 0.35, 0.15, 0.45};
  std::vector<double> qp = {0.45, 0.05, 0.35, 0.15};  // rotate right by one
  for (double eps : {0.1, 0.5, 1.2}) {
    auto a = max_entropy_in_ball(q, eps);
    auto b = max_entropy_in_ball(qp, eps);
    for (std::size_t i = 0; i < q.size(); ++i)
      CHECK_THAT(b.argopt[(i + 1) % 4], WithinAbs(a.argopt[i], 1e-12));
    auto c = min_entropy_in_ball(q, eps);
    auto d = min_entropy_in_ball(qp, eps);
    for (std::size_t i = 0; i < q.size(); ++i)
      CHECK_THAT(d.argopt[(i + 1) % 4], WithinAbs(c.argopt[i], 1e-12));
  }
}

TEST_CASE("ties break toward the lowest index") {
  std::vector<double> q = {0.25, 0.25, 0.25, 0.25};
  auto s = min_entropy_in_ball(q, 0.4);
  // Receiver is index 0; removal starts at index 1.
  CHECK_THAT(s.argopt[0], WithinAbs(0.45, 1e-12));
  CHECK_THAT(s.argopt[1], WithinAbs(0.05, 1e-12));
  CHECK_THAT(s.argopt[2], WithinAbs(0.25, 1e-12));
  CHECK_THAT(s.argopt[3], WithinAbs(0.25, 1e-12));
}

TEST_CASE("invalid radii and inputs are rejected") {
  std::vector<double> q = {0.5, 0.5};
  CHECK_THROWS_AS(max_entropy_in_ball(q, -0.1), std::domain_error);
  CHECK_THROWS_AS(min_entropy_in_ball(q, -0.1), std::domain_error);
  // Radius above 2 is clipped, not rejected.
  CHECK_NOTHROW(max_entropy_in_ball(q, 5.0));
  CHECK_THROWS_AS(max_entropy_in_ball(std::vector<double>{0.5, 0.6}, 0.1), std::invalid_argument);
}

TEST_CASE("grid oracle reproduces two-point extrema") {
  std::vector<double> q = {0.7, 0.3};
  // 0.6/0.4 and 0.8/0.2 are exact grid points at step 0.002.
  CHECK_THAT(oracle_entropy_extremum(q, 0.2, ExtremumKind::max, 0.002),
             WithinAbs(0.6730116670092564, 1e-12));
  CHECK_THAT(oracle_entropy_extremum(q, 0.2, ExtremumKind::min, 0.002),
             WithinAbs(0.5004024235381879, 1e-12));
  CHECK_THAT(oracle_entropy_extremum(std::vector<double>{0.5, 0.5}, 0.0, ExtremumKind::max, 0.002),
             WithinAbs(kLn2, 1e-12));
}

TEST_CASE("grid oracle refuses oversized problems") {
  std::vector<double> q5 = {0.2, 0.2, 0.2, 0.2, 0.2};
  CHECK_THROWS_AS(oracle_entropy_extremum(q5, 0.1, ExtremumKind::max, 0.002),
                  std::invalid_argument);
  std::vector<double> q2 = {0.5, 0.5};
  CHECK_THROWS_AS(oracle_entropy_extremum(q2, 0.1, ExtremumKind::max, 0.003),
                  std::invalid_argument);
}

TEST_CASE("solvers agree with the grid oracle on random instances") {
  std::mt19937 rng(424242);
  std::uniform_real_distribution<double> ueps(0.02, 2.0);
  for (int i = 0; i < 12; ++i) {
    const std::size_t dim = 2 + i % 3;
    const auto q = random_simplex_point(rng, dim);
    const double eps = ueps(rng);
    CAPTURE(i, dim, eps);
    const double omax = oracle_entropy_extremum(q, eps, ExtremumKind::max, 0.002);
    const double omin = oracle_entropy_extremum(q, eps, ExtremumKind::min, 0.002);
    CHECK_THAT(max_entropy_in_ball(q, eps).value, WithinAbs(omax, 8e-3));
    CHECK_THAT(min_entropy_in_ball(q, eps).value, WithinAbs(omin, 8e-3));
  }
}
