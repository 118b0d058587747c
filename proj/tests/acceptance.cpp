// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "support.hpp"

#include "permatch/config.hpp"
#include "permatch/csbm.hpp"
#include "permatch/eperpf.hpp"
#include "permatch/gibbs.hpp"
#include "permatch/io.hpp"
#include "permatch/oracle.hpp"
#include "permatch/permutation.hpp"
#include "permatch/special_functions.hpp"
#include "permatch/summarize.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace permatch;
using permatch::test::cyc;

namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (detail.size() < 400)
        detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

std::vector<EperpfFamily> all_families() {
  return {EperpfFamily::dirichlet(1.0),        EperpfFamily::dirichlet(3.5),
          EperpfFamily::normalized_stable(0.25), EperpfFamily::normalized_stable(0.8),
          EperpfFamily::pitman_yor(1.0, 0.3),  EperpfFamily::pitman_yor(0.4, 0.7),
          EperpfFamily::gnedin(0.5),           EperpfFamily::gnedin(0.2)};
}

// The permutation p of {0..n-1} seen inside a universe of n + 1 nodes.
SubsetPermutation embed(const Permutation& p) {
  std::vector<Node> img(p.images().begin(), p.images().end());
  img.push_back(static_cast<Node>(p.size()));
  return SubsetPermutation(Permutation(std::move(img))).without(static_cast<Node>(p.size()));
}

Outcome prior_normalization() {
  Outcome o;
  double worst_sum = 0.0, worst_cons = 0.0;
  for (const auto& f : all_families())
    for (std::size_t n = 1; n <= 6; ++n) {
      double total = 0.0;
      for (const auto& p : oracle::enumerate_permutations(n)) {
        const double prob = std::exp(log_eperpf(f, p));
        total += prob;
        double children = 0.0;
        for (const auto& ins : insertion_set(embed(p), static_cast<Node>(n)))
          children += std::exp(log_eperpf(f, ins.perm.to_permutation()));
        worst_cons = std::max(worst_cons, std::abs(children - prob));
      }
      worst_sum = std::max(worst_sum, std::abs(total - 1.0));
    }
  o.require(worst_sum <= 1e-10, "sum off by " + fmt(worst_sum));
  o.require(worst_cons <= 1e-10, "consistency off by " + fmt(worst_cons));
  o.detail = o.pass ? "max |sum-1| " + fmt(worst_sum) + ", max consistency gap " + fmt(worst_cons)
                    : o.detail;
  return o;
}

Outcome exchangeability() {
  Outcome o;
  double worst = 0.0;
  for (const auto& f : all_families()) {
    std::map<std::vector<std::size_t>, double> by_type;
    for (const auto& p : oracle::enumerate_permutations(5)) {
      const double lp = log_eperpf(f, p);
      const auto [it, fresh] = by_type.emplace(canonical_cycles(p).type, lp);
      if (!fresh)
        worst = std::max(worst, std::abs(it->second - lp));
    }
    o.require(by_type.size() == 7, "expected 7 conjugacy classes");
  }
  o.require(worst <= 1e-12, "class spread " + fmt(worst));
  if (o.pass)
    o.detail = "max within-class log spread " + fmt(worst);
  return o;
}

Outcome sequential_sampler() {
  Outcome o;
  Rng rng(20240601);
  const std::size_t draws = 1000000;
  const auto tv_of = [&](const EperpfFamily& f) {
    std::map<Permutation, std::size_t> counts;
    for (std::size_t i = 0; i < draws; ++i)
      ++counts[sample_pa_gcrp(f, 4, rng)];
    std::map<Permutation, double> exact;
    for (const auto& p : oracle::enumerate_permutations(4))
      exact[p] = std::exp(log_eperpf(f, p));
    return test::total_variation(counts, draws, exact);
  };
  const double uniform_tv = tv_of(EperpfFamily::dirichlet(1.0));
  o.require(uniform_tv < 0.005, "uniform TV " + fmt(uniform_tv));
  double worst = 0.0;
  for (const auto& f : {EperpfFamily::dirichlet(2.5), EperpfFamily::normalized_stable(0.4),
                        EperpfFamily::pitman_yor(1.0, 0.3), EperpfFamily::gnedin(0.5)})
    worst = std::max(worst, tv_of(f));
  o.require(worst < 0.01, "family TV " + fmt(worst));
  if (o.pass)
    o.detail = "uniform TV " + fmt(uniform_tv) + ", worst family TV " + fmt(worst);
  return o;
}

Outcome cayley_identity() {
  Outcome o;
  std::size_t checks = 0, bad = 0;
  const auto s4 = oracle::enumerate_permutations(4);
  for (const auto& p : s4)
    for (const auto& s : s4) {
      ++checks;
      if (cayley_distance(p, s) != oracle::cayley_bfs(p, s))
        ++bad;
    }
  o.require(checks == 576, "check count " + std::to_string(checks));
  o.require(bad == 0, std::to_string(bad) + " disagreements");
  if (o.pass)
    o.detail = std::to_string(checks) + " pairs agree";
  return o;
}

Outcome worked_examples() {
  Outcome o;
  o.require(delete_last(cyc("(143)(25)")) == cyc("(143)(2)"), "deletion of the largest element");

  std::set<std::string> got;
  for (const auto& ins : insertion_set(delete_node(cyc("(143)(2)"), 2), 2))
    got.insert(ins.perm.to_cycle_string());
  o.require(got == std::set<std::string>{"(134)(2)", "(143)(2)", "(14)(23)", "(14)(2)(3)"},
            "insertion set of node 3");

  std::set<std::string> grown;
  for (const auto& ins : insertion_set(embed(cyc("(143)(2)")), 4))
    grown.insert(ins.perm.to_cycle_string());
  o.require(grown == std::set<std::string>{"(1543)(2)", "(1453)(2)", "(1435)(2)", "(143)(25)",
                                           "(143)(2)(5)"},
            "insertion set of a new element");

  const Permutation pi = Permutation::parse_one_line("4 1 3 2");
  o.require(pi.to_cycle_string() == "(142)(3)", "cycle form");
  o.require(canonical_cycles(pi).z == Allocation{0, 0, 1, 0}, "cycle allocation");

  const Permutation a = cyc("(123)(456)");
  o.require(cayley_distance(a, cyc("(132)(465)")) == 4, "Cayley 4");
  o.require(hamming_distance(a, cyc("(132)(465)")) == 6, "Hamming 6");
  o.require(cayley_distance(a, cyc("(13)(2)(46)(5)")) == 2, "Cayley 2");
  o.require(hamming_distance(a, cyc("(13)(2)(46)(5)")) == 4, "Hamming 4");
  if (o.pass)
    o.detail = "all worked values reproduced";
  return o;
}

Outcome gibbs_exactness() {
  Outcome o;
  const Hyperparameters hyper{1.5, 2.0, 1.0, 2.5, 1.0, 1.0};
  SymmetricBinaryMatrix one(2);
  one.set(0, 1, true);
  const Graphs g(one, SymmetricBinaryMatrix(2));
  SamplerConfig c;
  c.family = EperpfFamily::dirichlet(0.7);
  c.hyper = hyper;
  c.theta_hyperprior = false;
  Rng rng(77);
  ChainState s = init_state(g, c, rng);
  std::map<std::pair<Permutation, bool>, std::size_t> counts;
  const std::size_t sweeps = 1000000;
  for (std::size_t i = 0; i < sweeps; ++i) {
    sweep(s, g, c, rng);
    ++counts[{s.permutation(), s.parent(0, 1)}];
  }
  std::map<std::pair<Permutation, bool>, double> exact;
  for (const auto& e : oracle::exact_joint_posterior(g, hyper, c.family))
    exact[{e.pi, e.parent(0, 1)}] = std::exp(e.log_prob);
  const double tv = test::total_variation(counts, sweeps, exact);
  o.require(tv < 0.01, "n=2 TV " + fmt(tv));

  double worst = 0.0;
  Rng inst(91);
  for (const auto& f : all_families())
    for (int rep = 0; rep < 5; ++rep) {
      const Graphs g3(test::random_graph(3, 0.5, inst), test::random_graph(3, 0.5, inst));
      const NoiseRates noise{0.02 + 0.4 * inst.uniform(), 0.02 + 0.4 * inst.uniform()};
      const ChainState st = make_state(test::random_permutation(3, inst),
                                       test::random_graph(3, 0.5, inst), noise, f, g3);
      for (Node v = 0; v < 3; ++v) {
        const auto lp = node_move_distribution(st, v, g3, hyper);
        const auto set = insertion_set(delete_node(st.permutation(), v), v);
        std::vector<double> lw;
        for (const auto& ins : set)
          lw.push_back(oracle::log_conditional_joint(ins.perm.to_permutation(), st.parent, g3,
                                                     st.noise, hyper, f));
        const double norm = log_sum_exp(lw);
        for (std::size_t i = 0; i < set.size(); ++i)
          worst = std::max(worst, std::abs(std::exp(lp[i]) - std::exp(lw[i] - norm)));
      }
    }
  o.require(worst <= 1e-10, "n=3 move gap " + fmt(worst));
  if (o.pass)
    o.detail = "n=2 TV " + fmt(tv) + ", n=3 max move gap " + fmt(worst);
  return o;
}

Outcome model_equivalence() {
  using boost::multiprecision::cpp_rational;
  Outcome o;
  std::size_t checks = 0, bad = 0;
  double worst_double = 0.0;
  for (int i = 1; i <= 10; ++i)
    for (int j = 1; j <= 10; ++j)
      for (int k = 1; k <= 10; ++k) {
        const cpp_rational xi(i, 11), alpha(j, 22), beta(k, 22);
        for (int y = 0; y < 2; ++y)
          for (int yp = 0; yp < 2; ++yp) {
            // Sum over the parent bit of p(y | parent) p(y' | parent) p(parent).
            const cpp_rational given_edge = cpp_rational(y ? 1 - beta : beta) * (yp ? 1 - beta : beta);
            const cpp_rational given_none =
                cpp_rational(y ? alpha : 1 - alpha) * (yp ? alpha : 1 - alpha);
            const cpp_rational direct = given_edge * xi + given_none * (1 - xi);
            const cpp_rational closed = pair_marginal_prob<cpp_rational>(y, yp, xi, alpha, beta);
            ++checks;
            if (closed != direct)
              ++bad;
            const double d = pair_marginal_prob(y, yp, i / 11.0, NoiseRates{j / 22.0, k / 22.0});
            worst_double = std::max(worst_double, std::abs(d - direct.convert_to<double>()));
          }
      }
  o.require(bad == 0, std::to_string(bad) + " exact mismatches");
  o.require(worst_double < 1e-15, "double path gap " + fmt(worst_double));
  if (o.pass)
    o.detail = std::to_string(checks) + " exact rational identities, double gap " +
               fmt(worst_double);
  return o;
}

struct RecoveryRun {
  double nmi = 0.0;
  std::size_t cayley = 0;
  double auc = 0.0;
};

RecoveryRun recover(const Simulation& sim, std::uint64_t seed) {
  SamplerConfig c;
  c.n_iter = 10000;
  c.burn_in = 2000;
  c.thin = 10;
  c.seed = seed;
  Rng rng(c.seed);
  const DrawArchive a = run(sim.graphs, c, rng);
  const PosteriorPermSample sample(a.pi);
  Rng summary_rng(seed);
  const PersalsoResult r = persalso(sample, SummaryConfig{}, summary_rng);
  RecoveryRun out;
  out.nmi = nmi(canonical_cycles(r.estimate).z, sim.z);
  out.cayley = cayley_distance(r.estimate, sim.pi);
  out.auc = auc_parent(a.parent, sim.parent).value_or(0.0);
  return out;
}

Outcome recovery() {
  Outcome o;
  int nmi_ok = 0, cayley_ok = 0, auc_ok = 0;
  std::ostringstream two, mixed;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Rng rng(seed);
    SimulationSpec spec;
    spec.n = 30;
    spec.pi = two_cycle_permutation(30);
    spec.xi = assortative_blocks(2, 0.6, 0.1);
    spec.noise = {0.05, 0.05};
    const Simulation sim = simulate(spec, rng);
    const RecoveryRun r = recover(sim, Rng::derive(seed, 1));
    nmi_ok += r.nmi >= 0.9;
    cayley_ok += static_cast<double>(r.cayley) / 30.0 <= 0.2;
    two << (seed > 1 ? " " : "") << fmt(r.nmi) << "/" << r.cayley;
  }
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Rng rng(100 + seed);
    const MixedScenario m = mixed_block_scenario(40);
    SimulationSpec spec;
    spec.n = 40;
    spec.pi = uniform_given_partition(m.z, rng);
    spec.xi = m.xi;
    spec.noise = {0.01, 0.01};
    const Simulation sim = simulate(spec, rng);
    const RecoveryRun r = recover(sim, Rng::derive(100 + seed, 1));
    auc_ok += r.auc >= 0.9;
    mixed << (seed > 1 ? " " : "") << fmt(r.auc);
  }
  o.require(nmi_ok >= 8, "two-cycle NMI>=0.9 in " + std::to_string(nmi_ok) + "/10");
  o.require(cayley_ok >= 7, "two-cycle dC/n<=0.2 in " + std::to_string(cayley_ok) + "/10");
  o.require(auc_ok >= 7, "mixed AUC>=0.9 in " + std::to_string(auc_ok) + "/10");
  const std::string counts = "NMI ok " + std::to_string(nmi_ok) + "/10, dC ok " +
                             std::to_string(cayley_ok) + "/10, AUC ok " + std::to_string(auc_ok) +
                             "/10";
  o.detail = counts + " [two-cycle nmi/dC: " + two.str() + "] [mixed auc: " + mixed.str() + "]";
  return o;
}

Outcome summary_quality() {
  Outcome o;
  Rng rng(4242);
  // Dominance over the draws on assorted samples.
  int dominance_failures = 0;
  for (std::size_t n : {4u, 7u, 12u, 25u})
    for (int rep = 0; rep < 5; ++rep) {
      std::vector<Permutation> draws;
      const Permutation center = test::random_permutation(n, rng);
      for (int s = 0; s < 40; ++s) {
        std::vector<Node> img(center.images().begin(), center.images().end());
        const std::size_t swaps = rep == 0 ? n : rng.index(4);
        for (std::size_t t = 0; t < swaps; ++t)
          std::swap(img[rng.index(n)], img[rng.index(n)]);
        draws.emplace_back(std::move(img));
      }
      const PosteriorPermSample sample(draws);
      const PersalsoResult r = persalso(sample, SummaryConfig{}, rng);
      for (const auto& d : sample.distinct())
        if (r.f_c > expected_cayley(sample, d) + 1e-12)
          ++dominance_failures;
    }
  o.require(dominance_failures == 0, std::to_string(dominance_failures) + " dominated estimates");

  int exact = 0;
  const auto s5 = oracle::enumerate_permutations(5);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Rng draw_rng(seed);
    std::vector<Permutation> draws;
    for (int s = 0; s < 20; ++s)
      draws.push_back(test::random_permutation(5, draw_rng));
    const PosteriorPermSample sample(draws);
    std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
    for (const auto& p : s5)
      best = std::min(best, total_cayley(sample, p));
    SummaryConfig c;
    c.seed = seed;
    Rng search_rng(seed);
    const PersalsoResult r = persalso(sample, c, search_rng);
    exact += total_cayley(sample, r.estimate) == best;
  }
  o.require(exact >= 9, "global minimum in " + std::to_string(exact) + "/10");
  if (o.pass)
    o.detail = "no dominated estimate, global minimum in " + std::to_string(exact) + "/10";
  return o;
}

std::map<std::string, std::string> pipeline_bytes(const fs::path& dir) {
  fs::remove_all(dir);
  fs::create_directories(dir);
  Rng sim_rng(5);
  SimulationSpec spec;
  spec.n = 12;
  spec.pi = two_cycle_permutation(12);
  spec.xi = assortative_blocks(2, 0.6, 0.1);
  spec.noise = {0.05, 0.05};
  const Simulation sim = simulate(spec, sim_rng);
  const SamplerConfig c = parse_sampler_config("n_iter = 600\nburn_in = 100\nthin = 5\nseed = 31\n");
  Rng rng(c.seed);
  const DrawArchive a = run(sim.graphs, c, rng);
  write_archive(dir / "archive", a);

  const PosteriorPermSample sample(read_permutations(dir / "archive" / "pi.draws"));
  Rng summary_rng(9);
  const PersalsoResult full = persalso(sample, SummaryConfig{}, summary_rng);
  std::vector<Allocation> z_draws;
  for (const auto& p : sample.draws())
    z_draws.push_back(canonical_cycles(p).z);
  const Allocation z_hat = partition_point_estimate(z_draws, summary_rng);
  const PersalsoResult fast = fast_persalso(sample, z_hat, SummaryConfig{}, summary_rng);
  write_text(dir / "summary", full.estimate.to_one_line() + "\n" + fast.estimate.to_one_line() +
                                  "\n" + allocation_to_string(z_hat) + "\n");

  std::map<std::string, std::string> bytes;
  for (const auto& entry : fs::recursive_directory_iterator(dir))
    if (entry.is_regular_file())
      bytes[fs::relative(entry.path(), dir).string()] = read_text(entry.path());
  return bytes;
}

Outcome determinism() {
  Outcome o;
  const fs::path root = fs::temp_directory_path() / "permatch_acceptance";
  const auto first = pipeline_bytes(root / "first");
  const auto second = pipeline_bytes(root / "second");
  o.require(first.size() >= 5, "only " + std::to_string(first.size()) + " files written");
  o.require(first == second, "outputs differ between runs");
  if (o.pass)
    o.detail = std::to_string(first.size()) + " files byte-identical";
  fs::remove_all(root);
  return o;
}

} // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"prior normalization and consistency", prior_normalization},
      {"finite exchangeability", exchangeability},
      {"sequential sampler correctness", sequential_sampler},
      {"Cayley identity", cayley_identity},
      {"worked examples", worked_examples},
      {"Gibbs exactness at micro scale", gibbs_exactness},
      {"pair marginal equivalence", model_equivalence},
      {"desk-scale recovery", recovery},
      {"summary search quality", summary_quality},
      {"determinism", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const std::chrono::duration<double> wall = std::chrono::steady_clock::now() - start;
    failures += !o.pass;
    std::printf("%s %zu %s (%.1f s): %s\n", o.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].first.c_str(), wall.count(), o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
