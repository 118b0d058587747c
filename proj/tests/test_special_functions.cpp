#include "permatch/rng.hpp"
#include "permatch/special_functions.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <vector>

using namespace permatch;

TEST_CASE("incomplete beta closed forms") {
  CHECK(std::exp(log_inc_beta(1.0, 2.0, 3.0)) == doctest::Approx(1.0 / 12.0).epsilon(1e-13));
  CHECK(std::exp(log_inc_beta(0.5, 1.0, 1.0)) == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(std::exp(log_inc_beta(0.5, 3.0, 2.0)) == doctest::Approx(5.0 / 192.0).epsilon(1e-13));
  CHECK(log_inc_beta(1.0, 4.5, 0.7) == doctest::Approx(log_beta(4.5, 0.7)).epsilon(1e-13));
}

TEST_CASE("incomplete beta agrees with Boost on a grid") {
  const std::vector<double> shapes{0.3, 0.9, 1.0, 2.5, 7.0, 40.0, 400.0, 3000.0};
  const std::vector<double> points{1e-6, 0.01, 0.2, 0.5, 0.77, 0.999};
  for (double a : shapes)
    for (double b : shapes)
      for (double x : points) {
        const double expected = std::log(boost::math::ibeta(a, b, x));
        if (!(expected > -700.0))
          continue;
        const double got = log_regularized_inc_beta(x, a, b);
        CHECK(got == doctest::Approx(expected).epsilon(1e-12).scale(1.0));
        const double ub = std::log(boost::math::beta(a, b, x));
        if (ub > -700.0 && x <= 0.5)
          CHECK(log_inc_beta(x, a, b) == doctest::Approx(ub).epsilon(1e-12).scale(1.0));
      }
}

TEST_CASE("incomplete beta rejects bad arguments") {
  CHECK_THROWS(log_inc_beta(0.0, 1.0, 1.0));
  CHECK_THROWS(log_inc_beta(1.5, 1.0, 1.0));
  CHECK_THROWS(log_inc_beta(0.5, 0.0, 1.0));
  CHECK_THROWS(log_inc_beta(0.5, 1.0, -2.0));
}

TEST_CASE("log-sum-exp and log-gamma") {
  CHECK(log_sum_exp(std::vector<double>{}) == -std::numeric_limits<double>::infinity());
  const double ninf = -std::numeric_limits<double>::infinity();
  CHECK(log_sum_exp(std::vector<double>{ninf, ninf}) == ninf);
  CHECK(log_sum_exp(std::vector<double>{std::log(0.25), std::log(0.75)}) ==
        doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
  CHECK(log_sum_exp(std::vector<double>{1000.0, 1000.0}) == doctest::Approx(1000.0 + std::log(2.0)));
  for (double x : {0.1, 1.0, 2.5, 17.0, 1e4})
    CHECK(log_gamma(x) == doctest::Approx(std::lgamma(x)).epsilon(1e-15));
  CHECK(log_beta(2.0, 3.0) == doctest::Approx(std::log(1.0 / 12.0)));
}

TEST_CASE("truncated beta draws") {
  Rng rng(3);
  const int draws = 100000;
  double sum = 0.0;
  for (int i = 0; i < draws; ++i) {
    const double x = sample_truncated_beta(0.5, 1.0, 1.0, rng);
    REQUIRE(x > 0.0);
    REQUIRE(x < 0.5);
    sum += x;
  }
  CHECK(std::abs(sum / draws - 0.25) < 0.002);

  std::vector<double> xs;
  for (int i = 0; i < draws; ++i)
    xs.push_back(sample_truncated_beta(0.5, 2.0, 5.0, rng));
  std::sort(xs.begin(), xs.end());
  const double norm = boost::math::ibeta(2.0, 5.0, 0.5);
  double ks = 0.0;
  for (int i = 0; i < draws; ++i) {
    const double cdf = boost::math::ibeta(2.0, 5.0, xs[i]) / norm;
    ks = std::max({ks, std::abs(cdf - double(i) / draws), std::abs(cdf - double(i + 1) / draws)});
  }
  // 0.1% critical value of the one-sample statistic.
  CHECK(ks < 1.95 / std::sqrt(double(draws)));

  // Posterior with heavy concordance piles up near zero.
  double tail = 0.0;
  for (int i = 0; i < 2000; ++i)
    tail += sample_truncated_beta(0.5, 1.0 + 5.0, 1.0 + 995.0, rng);
  CHECK(tail / 2000 < 0.05);
  for (int i = 0; i < 1000; ++i) {
    const double x = sample_truncated_beta(0.5, 3000.0, 2.0, rng);
    REQUIRE(x > 0.0);
    REQUIRE(x < 0.5);
  }
}

TEST_CASE("random number generator") {
  Rng a(5), b(5);
  for (int i = 0; i < 100; ++i)
    CHECK(a.uniform() == b.uniform());
  std::set<std::uint64_t> seeds;
  for (std::uint64_t s = 0; s < 64; ++s)
    seeds.insert(Rng::derive(42, s));
  CHECK(seeds.size() == 64);
  CHECK(Rng::derive(42, 0) != Rng::derive(43, 0));

  Rng rng(9);
  std::vector<int> counts(3, 0);
  const std::vector<double> w{std::log(1.0), std::log(2.0), std::log(7.0)};
  const int n = 200000;
  for (int i = 0; i < n; ++i)
    ++counts[rng.categorical_log(w)];
  CHECK(counts[0] / double(n) == doctest::Approx(0.1).epsilon(0.05));
  CHECK(counts[2] / double(n) == doctest::Approx(0.7).epsilon(0.01));

  double g = 0.0, be = 0.0;
  for (int i = 0; i < n; ++i) {
    g += rng.gamma(3.0, 2.0);
    be += rng.beta(2.0, 6.0);
  }
  CHECK(g / n == doctest::Approx(1.5).epsilon(0.01));
  CHECK(be / n == doctest::Approx(0.25).epsilon(0.01));
  for (int i = 0; i < 1000; ++i)
    CHECK(rng.index(7) < 7);
}
