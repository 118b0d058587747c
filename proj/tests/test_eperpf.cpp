#include "support.hpp"

#include "permatch/eperpf.hpp"
#include "permatch/oracle.hpp"

#include <doctest.h>

#include <cmath>
#include <map>

using namespace permatch;
using permatch::test::cyc;

namespace {

std::vector<EperpfFamily> families() {
  return {EperpfFamily::dirichlet(1.0), EperpfFamily::dirichlet(2.7),
          EperpfFamily::normalized_stable(0.4), EperpfFamily::pitman_yor(1.0, 0.3),
          EperpfFamily::pitman_yor(0.2, 0.8), EperpfFamily::gnedin(0.5),
          EperpfFamily::gnedin(0.15)};
}

double log_factorial(std::size_t n) { return std::lgamma(static_cast<double>(n) + 1.0); }

SubsetPermutation embed(const Permutation& p) {
  std::vector<Node> img(p.images().begin(), p.images().end());
  img.push_back(static_cast<Node>(p.size()));
  return SubsetPermutation(Permutation(std::move(img))).without(static_cast<Node>(p.size()));
}

std::vector<std::size_t> type_key(const Permutation& p) {
  return canonical_cycles(p).type;
}

} // namespace

TEST_CASE("parameter validation") {
  CHECK_THROWS(EperpfFamily::dirichlet(0.0));
  CHECK_THROWS(EperpfFamily::dirichlet(-1.0));
  CHECK_THROWS(EperpfFamily::normalized_stable(0.0));
  CHECK_THROWS(EperpfFamily::normalized_stable(1.0));
  CHECK_THROWS(EperpfFamily::pitman_yor(0.0, 0.5));
  CHECK_THROWS(EperpfFamily::pitman_yor(1.0, 1.0));
  CHECK_THROWS(EperpfFamily::gnedin(0.0));
  CHECK_THROWS(EperpfFamily::gnedin(1.0));
  CHECK_THROWS(EperpfFamily::dirichlet(std::nan("")));
  CHECK(EperpfFamily::pitman_yor(1.0, 0.3).name() == "pitman_yor");
  CHECK(EperpfFamily::gnedin(0.5).to_config_string() == "{family=\"gnedin\", gamma=0.5}");
}

TEST_CASE("partition function basics") {
  const std::vector<std::size_t> one{1}, a{3, 1, 2}, b{1, 2, 3};
  for (const auto& f : families()) {
    CHECK(log_eppf(f, one) == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
    CHECK(log_eppf(f, a) == doctest::Approx(log_eppf(f, b)).epsilon(1e-14));
    CHECK(log_eppf(f, std::vector<std::size_t>{}) == 0.0);
  }
  double total = 0.0;
  const auto d2 = EperpfFamily::dirichlet(2.0);
  for (const auto& p : oracle::enumerate_permutations(3))
    total += std::exp(log_eperpf(d2, p));
  CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS(log_eppf(d2, std::vector<std::size_t>{2, 0}));
}

TEST_CASE("Dirichlet with unit concentration is uniform") {
  const auto f = EperpfFamily::dirichlet(1.0);
  for (std::size_t n = 1; n <= 6; ++n)
    for (const auto& p : oracle::enumerate_permutations(n))
      CHECK(log_eperpf(f, p) == doctest::Approx(-log_factorial(n)).epsilon(1e-13));
}

TEST_CASE("permutations of equal cycle type share their probability") {
  for (const auto& f : families())
    CHECK(log_eperpf(f, cyc("(143)(2)")) ==
          doctest::Approx(log_eperpf(f, cyc("(1)(234)"))).epsilon(1e-14));

  for (const auto& f : families()) {
    std::map<std::vector<std::size_t>, double> by_type;
    for (const auto& p : oracle::enumerate_permutations(5)) {
      const double lp = log_eperpf(f, p);
      const auto [it, fresh] = by_type.emplace(type_key(p), lp);
      if (!fresh)
        CHECK(std::abs(it->second - lp) <= 1e-12);
    }
    CHECK(by_type.size() == 7);
  }
}

TEST_CASE("probabilities match the sequential seating oracle and normalize") {
  for (const auto& f : families())
    for (std::size_t n = 1; n <= 7; ++n) {
      double total = 0.0;
      for (const auto& p : oracle::enumerate_permutations(n)) {
        const double lp = log_eperpf(f, p);
        total += std::exp(lp);
        if (n <= 6)
          CHECK(lp == doctest::Approx(oracle::sequential_log_prior(f, p)).epsilon(1e-11));
      }
      CHECK(std::abs(total - 1.0) < 1e-10);
    }
}

TEST_CASE("probabilities are consistent across sizes") {
  for (const auto& f : families())
    for (std::size_t n = 1; n <= 6; ++n)
      for (const auto& p : oracle::enumerate_permutations(n)) {
        double children = 0.0;
        for (const auto& ins : insertion_set(embed(p), static_cast<Node>(n)))
          children += std::exp(log_eperpf(f, ins.perm.to_permutation()));
        CHECK(std::abs(std::exp(log_eperpf(f, p)) - children) < 1e-10);
      }
}

TEST_CASE("predictive weights") {
  const auto dir = EperpfFamily::dirichlet(2.5);
  const std::vector<std::size_t> state{3, 1, 2};
  const auto w = predictive_weights(dir, state);
  REQUIRE(w.per_cycle.size() == 3);
  for (double x : w.per_cycle)
    CHECK(x == doctest::Approx(std::log(1.0 / 8.5)).epsilon(1e-14));
  CHECK(w.new_cycle == doctest::Approx(std::log(2.5 / 8.5)).epsilon(1e-14));

  for (const auto& f : families()) {
    const auto empty = predictive_weights(f, std::vector<std::size_t>{});
    CHECK(empty.per_cycle.empty());
    CHECK(empty.new_cycle == 0.0);
  }

  // Printed closed forms, typed out independently.
  const std::vector<std::size_t> lens{2, 1, 4};
  const double n = 7.0, k = 3.0;
  const auto ns = predictive_weights(EperpfFamily::normalized_stable(0.4), lens);
  const auto py = predictive_weights(EperpfFamily::pitman_yor(1.3, 0.4), lens);
  const auto gn = predictive_weights(EperpfFamily::gnedin(0.3), lens);
  for (std::size_t j = 0; j < lens.size(); ++j) {
    const double nj = static_cast<double>(lens[j]);
    CHECK(std::exp(ns.per_cycle[j]) == doctest::Approx((1.0 - 0.4 / nj) / n).epsilon(1e-13));
    CHECK(std::exp(py.per_cycle[j]) ==
          doctest::Approx((1.0 - 0.4 / nj) / (n + 1.3)).epsilon(1e-13));
    CHECK(std::exp(gn.per_cycle[j]) ==
          doctest::Approx((nj + 1.0) / nj * (n - k + 0.3) / (n * (n + 0.3))).epsilon(1e-13));
  }
  CHECK(std::exp(ns.new_cycle) == doctest::Approx(k * 0.4 / n).epsilon(1e-13));
  CHECK(std::exp(py.new_cycle) == doctest::Approx((1.3 + k * 0.4) / (n + 1.3)).epsilon(1e-13));
  CHECK(std::exp(gn.new_cycle) == doctest::Approx(k * (k - 0.3) / (n * (n + 0.3))).epsilon(1e-13));
}

TEST_CASE("closed-form predictive weights agree with the ratio form") {
  const std::vector<std::vector<std::size_t>> states{
      {1}, {2, 1}, {1, 1, 1}, {5}, {3, 3, 1, 2}, {7, 1, 1, 1, 4}, {12, 30, 2}};
  for (const auto& f : families())
    for (const auto& s : states) {
      const auto fast = predictive_weights(f, s);
      const auto slow = reference_predictive_weights(f, s);
      REQUIRE(fast.per_cycle.size() == s.size());
      double total = std::exp(fast.new_cycle);
      for (std::size_t j = 0; j < s.size(); ++j) {
        CHECK(fast.per_cycle[j] == doctest::Approx(slow.per_cycle[j]).epsilon(1e-12));
        total += static_cast<double>(s[j]) * std::exp(fast.per_cycle[j]);
      }
      CHECK(fast.new_cycle == doctest::Approx(slow.new_cycle).epsilon(1e-12));
      CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("sequential sampler") {
  Rng rng(17);
  for (const auto& f : families())
    CHECK(sample_pa_gcrp(f, 1, rng) == Permutation::identity(1));

  const auto draw_table = [&](const EperpfFamily& f, std::size_t n, std::size_t draws) {
    std::map<Permutation, std::size_t> counts;
    for (std::size_t i = 0; i < draws; ++i)
      ++counts[sample_pa_gcrp(f, n, rng)];
    std::map<Permutation, double> exact;
    for (const auto& p : oracle::enumerate_permutations(n))
      exact[p] = std::exp(log_eperpf(f, p));
    return test::total_variation(counts, draws, exact);
  };
  CHECK(draw_table(EperpfFamily::dirichlet(1.0), 4, 1000000) < 0.005);
  CHECK(draw_table(EperpfFamily::pitman_yor(1.0, 0.3), 4, 1000000) < 0.01);
}

TEST_CASE("cycle partitions of sequential draws follow the partition function") {
  Rng rng(23);
  for (const auto& f : {EperpfFamily::pitman_yor(0.7, 0.5), EperpfFamily::gnedin(0.4)}) {
    const std::size_t draws = 400000;
    std::map<Allocation, std::size_t> counts;
    std::map<Allocation, double> exact;
    for (std::size_t i = 0; i < draws; ++i)
      ++counts[canonical_cycles(sample_pa_gcrp(f, 5, rng)).z];
    for (const auto& p : oracle::enumerate_permutations(5)) {
      const auto cd = canonical_cycles(p);
      exact[cd.z] = std::exp(log_eppf(f, cd.lengths));
    }
    double total = 0.0;
    for (const auto& [z, p] : exact)
      total += p;
    CHECK(exact.size() == 52);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(test::total_variation(counts, draws, exact) < 0.01);
  }
}

TEST_CASE("uniform draw given a cycle partition") {
  Rng rng(29);
  for (int i = 0; i < 20; ++i)
    CHECK(uniform_given_partition(Allocation{0, 1, 2}, rng) == Permutation::identity(3));

  std::map<std::string, int> three, four;
  const int draws = 40000;
  for (int i = 0; i < draws; ++i) {
    ++three[uniform_given_partition(Allocation{0, 0, 0}, rng).to_cycle_string()];
    ++four[uniform_given_partition(Allocation{0, 0, 1, 0}, rng).to_cycle_string()];
  }
  REQUIRE(three.size() == 2);
  CHECK(three.count("(123)") == 1);
  CHECK(three.count("(132)") == 1);
  CHECK(std::abs(three["(123)"] / double(draws) - 0.5) < 0.01);
  REQUIRE(four.size() == 2);
  CHECK(four.count("(124)(3)") == 1);
  CHECK(four.count("(142)(3)") == 1);
  CHECK(std::abs(four["(124)(3)"] / double(draws) - 0.5) < 0.01);

  CHECK_THROWS(uniform_given_partition(Allocation{1, 0}, rng));
}
