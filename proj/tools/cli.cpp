#include "cli.hpp"

#include "permatch/config.hpp"
#include "permatch/csbm.hpp"
#include "permatch/gibbs.hpp"
#include "permatch/oracle.hpp"
#include "permatch/rng.hpp"
#include "permatch/summarize.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <future>
#include <map>
#include <sstream>
#include <stdexcept>

namespace permatch::cli {

namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string opt_num(const std::optional<double>& x) { return x ? num(*x) : "NA"; }

Allocation contiguous_blocks(std::size_t n, std::size_t k) {
  Allocation z;
  for (std::size_t j = 0; j < k; ++j)
    z.insert(z.end(), n / k + (j < n % k ? 1 : 0), j);
  return z;
}

std::string block_matrix_text(const BlockMatrix& xi) {
  std::string out;
  for (std::size_t j = 0; j < xi.k; ++j) {
    out += "xi." + std::to_string(j + 1) + " = ";
    for (std::size_t h = 0; h < xi.k; ++h)
      out += (h ? " " : "") + num(xi(j, h));
    out += '\n';
  }
  return out;
}

Graphs load_graphs(const fs::path& g1, const fs::path& g2, GraphFormat format, std::size_t nodes) {
  return Graphs(read_graph(g1, format, nodes), read_graph(g2, format, nodes));
}

SamplerConfig load_config(const std::optional<fs::path>& path) {
  return parse_sampler_config(path ? read_text(*path) : std::string{});
}

} // namespace

EperpfFamily FamilyOptions::build() const {
  if (family == "dirichlet")
    return EperpfFamily::dirichlet(theta);
  if (family == "normalized_stable")
    return EperpfFamily::normalized_stable(discount);
  if (family == "pitman_yor")
    return EperpfFamily::pitman_yor(theta, discount);
  if (family == "gnedin")
    return EperpfFamily::gnedin(gamma);
  throw std::invalid_argument("unknown prior family: " + family);
}

std::string cmd_simulate(const SimulateOptions& opt) {
  SimulationSpec spec;
  spec.n = opt.n;
  spec.noise = {opt.alpha, opt.beta};
  spec.a_xi = opt.a_xi;
  spec.b_xi = opt.b_xi;
  Rng rng(opt.seed);

  if (opt.scenario == "planted") {
    if (opt.blocks == 0 || opt.blocks > opt.n)
      throw std::invalid_argument("simulate: need 1 <= blocks <= n");
    spec.pi = uniform_given_partition(contiguous_blocks(opt.n, opt.blocks), rng);
    spec.xi = assortative_blocks(opt.blocks, opt.p_in, opt.p_out);
  } else if (opt.scenario == "two-cycle") {
    spec.pi = two_cycle_permutation(opt.n);
    spec.xi = assortative_blocks(2, opt.p_in, opt.p_out);
  } else if (opt.scenario == "mixed") {
    const MixedScenario mixed = mixed_block_scenario(opt.n);
    spec.pi = uniform_given_partition(mixed.z, rng);
    spec.xi = mixed.xi;
  } else if (opt.scenario == "prior") {
    spec.family = opt.prior.build();
  } else {
    throw std::invalid_argument("simulate: unknown scenario " + opt.scenario);
  }
  if (spec.xi)
    for (double p : spec.xi->p)
      if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("simulate: block probabilities must lie in [0, 1]");

  const Simulation sim = simulate(spec, rng);
  fs::create_directories(opt.out);
  write_text(opt.out / "y1.csv", format_dense(sim.graphs.y1));
  write_text(opt.out / "y2.csv", format_dense(sim.graphs.y2));
  write_text(opt.out / "true_pi", sim.pi.to_one_line() + '\n');
  write_text(opt.out / "true_z", allocation_to_string(sim.z) + '\n');
  write_text(opt.out / "true_parent.csv", format_dense(sim.parent));

  std::ostringstream params;
  params << "scenario = \"" << opt.scenario << "\"\n"
         << "n = " << sim.pi.size() << "\n"
         << "seed = " << opt.seed << "\n"
         << "alpha = " << num(opt.alpha) << "\n"
         << "beta = " << num(opt.beta) << "\n";
  if (opt.scenario == "prior")
    params << "prior = " << opt.prior.build().to_config_string() << "\n"
           << "a_xi = " << num(opt.a_xi) << "\n"
           << "b_xi = " << num(opt.b_xi) << "\n";
  params << "blocks = " << sim.xi.k << "\n" << block_matrix_text(sim.xi);
  write_text(opt.out / "params", params.str());
  return "simulated n=" + std::to_string(sim.pi.size()) + " into " + opt.out.string();
}

std::string cmd_fit(const FitOptions& opt) {
  if (opt.chains == 0)
    throw std::invalid_argument("fit: need at least one chain");
  const Graphs graphs = load_graphs(opt.graph1, opt.graph2, opt.format, opt.nodes);
  SamplerConfig base = load_config(opt.config);
  if (opt.seed)
    base.seed = *opt.seed;
  base.validate();

  const auto run_one = [&graphs](SamplerConfig config, fs::path dir) {
    const auto start = std::chrono::steady_clock::now();
    Rng rng(config.seed);
    const DrawArchive archive = run(graphs, config, rng);
    const std::chrono::duration<double> wall = std::chrono::steady_clock::now() - start;
    write_archive(dir, archive);
    write_text(dir / "timing", "wall_seconds = " + num(wall.count()) + '\n');
    return archive.pi.size();
  };

  if (opt.chains == 1) {
    const std::size_t draws = run_one(base, opt.out);
    return "kept " + std::to_string(draws) + " draws in " + opt.out.string();
  }
  std::vector<std::future<std::size_t>> jobs;
  for (std::size_t c = 0; c < opt.chains; ++c) {
    SamplerConfig config = base;
    config.seed = Rng::derive(base.seed, c);
    jobs.push_back(std::async(std::launch::async, run_one, config,
                              opt.out / ("chain_" + std::to_string(c + 1))));
  }
  std::size_t draws = 0;
  for (auto& j : jobs)
    draws += j.get();
  return "kept " + std::to_string(draws) + " draws over " + std::to_string(opt.chains) +
         " chains in " + opt.out.string();
}

std::string cmd_summarize(const SummarizeOptions& opt) {
  const PosteriorPermSample sample(read_permutations(opt.draws));
  const std::size_t n = sample.node_count();
  SummaryConfig config;
  config.n_zeal = opt.n_zeal;
  config.n_runs = opt.n_runs;
  config.seed = opt.seed;
  config.fast_mode = opt.fast;
  config.early_stopping = opt.early_stopping;
  config.validate();
  Rng rng(opt.seed);

  PersalsoResult result;
  if (opt.fast) {
    Allocation z_hat;
    if (opt.z_hat) {
      z_hat = read_allocation(*opt.z_hat);
    } else {
      std::vector<Allocation> z_draws;
      for (const auto& p : sample.draws())
        z_draws.push_back(canonical_cycles(p).z);
      z_hat = partition_point_estimate(z_draws, rng);
      write_text(fs::path(opt.out.string() + ".z_hat"), allocation_to_string(z_hat) + '\n');
    }
    if (z_hat.size() != n)
      throw std::invalid_argument("summarize: z_hat length does not match the draws");
    result = fast_persalso(sample, z_hat, config, rng);
  } else {
    result = persalso(sample, config, rng);
  }
  if (opt.out.has_parent_path())
    fs::create_directories(opt.out.parent_path());
  write_text(opt.out, result.estimate.to_one_line() + '\n');

  if (opt.report) {
    std::optional<Permutation> truth;
    if (opt.truth) {
      const auto t = read_permutations(*opt.truth);
      if (t.size() != 1 || t.front().size() != n)
        throw std::invalid_argument("summarize: truth must be one permutation of the draws' size");
      truth = t.front();
    }
    std::optional<Graphs> graphs;
    if (opt.graph1 && opt.graph2)
      graphs = load_graphs(*opt.graph1, *opt.graph2, opt.format, n);

    std::optional<double> cayley, expected, nmi_value, frob_hat, frob_truth, auc;
    if (truth) {
      cayley = static_cast<double>(cayley_distance(result.estimate, *truth));
      expected = expected_cayley(sample, *truth);
      nmi_value = nmi(canonical_cycles(result.estimate).z, canonical_cycles(*truth).z);
    }
    if (graphs) {
      frob_hat = frobenius_discrepancy(*graphs, result.estimate);
      if (truth)
        frob_truth = frobenius_discrepancy(*graphs, *truth);
    }
    if (opt.parent_draws && opt.true_parent) {
      const auto draws = read_parent_draws(*opt.parent_draws, n);
      auc = auc_parent(draws, read_graph(*opt.true_parent, GraphFormat::dense));
    }
    std::string report = "f_C,cayley_to_truth,expected_cayley_to_truth,nmi,"
                         "frobenius_estimate,frobenius_truth,auc\n";
    report += num(result.f_c) + ',' + opt_num(cayley) + ',' + opt_num(expected) + ',' +
              opt_num(nmi_value) + ',' + opt_num(frob_hat) + ',' + opt_num(frob_truth) + ',' +
              opt_num(auc) + '\n';
    if (opt.report->has_parent_path())
      fs::create_directories(opt.report->parent_path());
    write_text(*opt.report, report);
  }
  return "estimate " + result.estimate.to_one_line() + " with f_C = " + num(result.f_c);
}

std::string cmd_diagnose(const DiagnoseOptions& opt) {
  const DrawArchive archive = read_archive(opt.archive);
  if (archive.pi.empty())
    throw std::invalid_argument("diagnose: archive has no draws");
  fs::create_directories(opt.out);

  std::string trace = "iter,log_joint,alpha,beta,theta\n";
  std::string cycles = "iter,k\n";
  for (const auto& r : archive.trace) {
    trace += std::to_string(r.iter) + ',' + num(r.log_joint) + ',' + num(r.alpha) + ',' +
             num(r.beta) + ',' + num(r.theta) + '\n';
    cycles += std::to_string(r.iter) + ',' + std::to_string(r.k) + '\n';
  }
  write_text(opt.out / "trace.csv", trace);
  write_text(opt.out / "cycle_count.csv", cycles);

  const std::size_t n = archive.pi.front().size();
  std::vector<std::size_t> counts(n * n, 0);
  for (const auto& p : archive.pi) {
    if (p.size() != n)
      throw std::invalid_argument("diagnose: draws differ in size");
    for (Node u = 0; u < n; ++u)
      ++counts[u * n + p[u]];
  }
  const double draws = static_cast<double>(archive.pi.size());
  std::string freq;
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t t = 0; t < n; ++t)
      freq += (t ? "," : "") + num(static_cast<double>(counts[u * n + t]) / draws);
    freq += '\n';
  }
  write_text(opt.out / "mapping_frequency.csv", freq);
  return "wrote diagnostics for " + std::to_string(archive.pi.size()) + " draws to " +
         opt.out.string();
}

std::string cmd_oracle(const OracleOptions& opt) {
  std::string csv;
  if (opt.table == "prior" || opt.table == "posterior") {
    const EperpfFamily family = opt.prior.build();
    oracle::ExactTable table;
    if (opt.table == "prior") {
      table = oracle::exact_prior_table(family, opt.n);
    } else {
      if (!opt.graph1 || !opt.graph2)
        throw std::invalid_argument("oracle posterior: --graph1 and --graph2 are required");
      const Graphs graphs = load_graphs(*opt.graph1, *opt.graph2, GraphFormat::automatic, 0);
      table = oracle::exact_posterior_table(graphs, load_config(opt.config).hyper, family);
    }
    csv = "pi,probability\n";
    for (std::size_t i = 0; i < table.perms.size(); ++i)
      csv += table.perms[i].to_one_line() + ',' + num(std::exp(table.log_prob[i])) + '\n';
  } else if (opt.table == "cayley") {
    const auto perms = oracle::enumerate_permutations(opt.n);
    csv = "pi,sigma,closed_form,shortest_path\n";
    for (const auto& p : perms)
      for (const auto& s : perms)
        csv += p.to_one_line() + ',' + s.to_one_line() + ',' +
               std::to_string(cayley_distance(p, s)) + ',' +
               std::to_string(oracle::cayley_bfs(p, s)) + '\n';
  } else {
    throw std::invalid_argument("oracle: unknown table " + opt.table);
  }
  if (opt.out.has_parent_path())
    fs::create_directories(opt.out.parent_path());
  write_text(opt.out, csv);
  return "wrote " + opt.table + " table to " + opt.out.string();
}

} // namespace permatch::cli
