#include "permatch/csbm.hpp"

#include "permatch/rng.hpp"
#include "permatch/special_functions.hpp"

#include <cmath>
#include <stdexcept>

namespace permatch {

SymmetricBinaryMatrix SymmetricBinaryMatrix::from_dense(std::size_t n,
                                                        std::span<const int> entries) {
  if (entries.size() != n * n)
    throw std::invalid_argument("matrix must have n*n entries");
  SymmetricBinaryMatrix out(n);
  for (std::size_t u = 0; u < n; ++u) {
    if (entries[u * n + u] != 0)
      throw std::invalid_argument("matrix diagonal must be zero");
    for (std::size_t v = 0; v < n; ++v) {
      const int x = entries[u * n + v];
      if (x != 0 && x != 1)
        throw std::invalid_argument("matrix entries must be 0 or 1");
      if (x != entries[v * n + u])
        throw std::invalid_argument("matrix must be symmetric");
      out.bits_[u * n + v] = static_cast<std::uint8_t>(x);
    }
  }
  return out;
}

void SymmetricBinaryMatrix::set(std::size_t u, std::size_t v, bool value) {
  if (u == v)
    throw std::invalid_argument("diagonal entries are fixed at zero");
  bits_[u * n_ + v] = value;
  bits_[v * n_ + u] = value;
}

std::size_t SymmetricBinaryMatrix::edge_count() const {
  std::size_t c = 0;
  for (std::size_t u = 0; u < n_; ++u)
    for (std::size_t v = u + 1; v < n_; ++v)
      c += bits_[u * n_ + v];
  return c;
}

SymmetricBinaryMatrix SymmetricBinaryMatrix::pulled_back(const Permutation& pi) const {
  if (pi.size() != n_)
    throw std::invalid_argument("permutation size does not match matrix");
  SymmetricBinaryMatrix out(n_);
  for (std::size_t u = 0; u < n_; ++u)
    for (std::size_t v = 0; v < n_; ++v)
      out.bits_[u * n_ + v] = bits_[pi[u] * n_ + pi[v]];
  return out;
}

Graphs::Graphs(SymmetricBinaryMatrix a, SymmetricBinaryMatrix b) : y1(std::move(a)), y2(std::move(b)) {
  if (y1.size() != y2.size())
    throw std::invalid_argument("graphs must have the same number of nodes");
}

void validate_noise(const NoiseRates& noise) {
  if (!(noise.alpha > 0.0 && noise.alpha < 0.5) || !(noise.beta > 0.0 && noise.beta < 0.5))
    throw std::invalid_argument("noise rates must lie in (0, 1/2)");
}

ExponentTally edge_exponents(const ParentMatrix& y, const Graphs& graphs, const Permutation& pi) {
  const std::size_t n = y.size();
  if (graphs.size() != n || pi.size() != n)
    throw std::invalid_argument("edge_exponents: size mismatch");
  ExponentTally t;
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      const int q = y(u, v);
      const int o1 = graphs.y1(u, v);
      const int o2 = graphs.y2(pi[u], pi[v]);
      (o1 == q ? t.e : t.e_bar)[q][0] += 1;
      (o2 == q ? t.e : t.e_bar)[q][1] += 1;
    }
  }
  return t;
}

void BlockCounts::add(std::size_t j, std::size_t h, bool edge, std::int64_t delta) {
  auto& target = edge ? m : m_bar;
  target[j * k + h] += delta;
  if (j != h)
    target[h * k + j] += delta;
}

BlockCounts block_counts(const ParentMatrix& y, std::span<const std::size_t> z) {
  const std::size_t n = y.size();
  if (z.size() != n)
    throw std::invalid_argument("block_counts: size mismatch");
  std::size_t k = 0;
  for (std::size_t label : z)
    k = std::max(k, label + 1);
  BlockCounts c(k);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v)
      c.add(z[u], z[v], y(u, v), 1);
  return c;
}

double log_marginal_sbm(const BlockCounts& counts, double a_xi, double b_xi) {
  const double base = log_beta(a_xi, b_xi);
  double v = 0.0;
  for (std::size_t j = 0; j < counts.k; ++j)
    for (std::size_t h = j; h < counts.k; ++h)
      v += log_beta(a_xi + static_cast<double>(counts.edges(j, h)),
                    b_xi + static_cast<double>(counts.non_edges(j, h))) -
           base;
  return v;
}

double log_joint(const ExponentTally& tally, const BlockCounts& counts,
                 std::span<const std::size_t> cycle_lengths, const Hyperparameters& hyper,
                 const EperpfFamily& family) {
  // alpha pairs with parent non-edges (q = 0), beta with parent edges (q = 1):
  // discordant counts feed the first beta argument.
  const auto noise_term = [&](int q, double a, double b) {
    const double bad = static_cast<double>(tally.e_bar[q][0] + tally.e_bar[q][1]);
    const double good = static_cast<double>(tally.e[q][0] + tally.e[q][1]);
    return log_inc_beta(0.5, a + bad, b + good) - log_inc_beta(0.5, a, b);
  };
  return noise_term(0, hyper.a0, hyper.b0) + noise_term(1, hyper.a1, hyper.b1) +
         log_marginal_sbm(counts, hyper.a_xi, hyper.b_xi) + log_eperpf(family, cycle_lengths);
}

double log_joint(const Permutation& pi, const ParentMatrix& y, const Graphs& graphs,
                 const Hyperparameters& hyper, const EperpfFamily& family) {
  const CycleDecomposition cd = canonical_cycles(pi);
  return log_joint(edge_exponents(y, graphs, pi), block_counts(y, cd.z), cd.lengths, hyper,
                   family);
}

Simulation simulate(const SimulationSpec& spec, Rng& rng) {
  const NoiseRates& noise = spec.noise;
  if (noise.alpha < 0.0 || noise.beta < 0.0 || !(noise.alpha < 1.0 - noise.beta))
    throw std::invalid_argument("simulate: need alpha, beta >= 0 and alpha < 1 - beta");
  Simulation sim;
  if (spec.pi) {
    sim.pi = *spec.pi;
  } else if (spec.family) {
    sim.pi = sample_pa_gcrp(*spec.family, spec.n, rng);
  } else {
    throw std::invalid_argument("simulate: supply a permutation or a prior family");
  }
  const std::size_t n = sim.pi.size();
  if (spec.n != 0 && spec.n != n)
    throw std::invalid_argument("simulate: permutation size does not match n");
  const CycleDecomposition cd = canonical_cycles(sim.pi);
  sim.z = cd.z;
  const std::size_t k = cd.count();

  if (spec.xi) {
    if (spec.xi->k < k || spec.xi->p.size() != spec.xi->k * spec.xi->k)
      throw std::invalid_argument("simulate: block matrix smaller than the cycle count");
    sim.xi = *spec.xi;
  } else {
    sim.xi.k = k;
    sim.xi.p.assign(k * k, 0.0);
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t h = j; h < k; ++h)
        sim.xi.p[j * k + h] = sim.xi.p[h * k + j] = rng.beta(spec.a_xi, spec.b_xi);
  }

  sim.parent = ParentMatrix(n);
  SymmetricBinaryMatrix y1(n);
  SymmetricBinaryMatrix y2(n);
  const auto observe = [&](bool parent_bit) {
    return parent_bit ? rng.bernoulli(1.0 - noise.beta) : rng.bernoulli(noise.alpha);
  };
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      const bool bit = rng.bernoulli(sim.xi(sim.z[u], sim.z[v]));
      sim.parent.set(u, v, bit);
      y1.set(u, v, observe(bit));
      y2.set(sim.pi[u], sim.pi[v], observe(bit));
    }
  }
  sim.graphs = Graphs(std::move(y1), std::move(y2));
  return sim;
}

Permutation two_cycle_permutation(std::size_t n) {
  if (n < 4 || n % 2 != 0)
    throw std::invalid_argument("two_cycle_permutation: n must be even and at least 4");
  const std::size_t half = n / 2;
  std::vector<Node> image(n);
  for (std::size_t i = 0; i < half; ++i) {
    image[i] = static_cast<Node>((i + 1) % half);
    image[half + i] = static_cast<Node>(half + (i + 1) % half);
  }
  return Permutation(std::move(image));
}

BlockMatrix assortative_blocks(std::size_t k, double p_in, double p_out) {
  BlockMatrix b{k, std::vector<double>(k * k, p_out)};
  for (std::size_t j = 0; j < k; ++j)
    b.p[j * k + j] = p_in;
  return b;
}

MixedScenario mixed_block_scenario(std::size_t n) {
  constexpr std::size_t k = 7;
  if (n < k)
    throw std::invalid_argument("mixed_block_scenario: need at least 7 nodes");
  // Block 0 is a dense core, blocks 1-2 its periphery, blocks 3-4 assortative
  // communities and blocks 5-6 a disassortative pair.
  static constexpr double p[k][k] = {
      {0.9, 0.7, 0.4, 0.2, 0.2, 0.1, 0.1}, {0.7, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1},
      {0.4, 0.1, 0.3, 0.1, 0.1, 0.1, 0.1}, {0.2, 0.1, 0.1, 0.8, 0.1, 0.1, 0.1},
      {0.2, 0.1, 0.1, 0.1, 0.8, 0.1, 0.1}, {0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.7},
      {0.1, 0.1, 0.1, 0.1, 0.1, 0.7, 0.1}};
  MixedScenario s;
  s.xi.k = k;
  for (const auto& row : p)
    s.xi.p.insert(s.xi.p.end(), std::begin(row), std::end(row));
  const std::size_t base = n / k;
  const std::size_t extra = n % k;
  for (std::size_t j = 0; j < k; ++j)
    s.z.insert(s.z.end(), base + (j < extra ? 1 : 0), j);
  return s;
}

} // namespace permatch
