#ifndef PERMATCH_CSBM_HPP
#define PERMATCH_CSBM_HPP

#include "permatch/eperpf.hpp"
#include "permatch/permutation.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace permatch {

class Rng;

/// Dense symmetric 0/1 matrix with zero diagonal.
class SymmetricBinaryMatrix {
public:
  SymmetricBinaryMatrix() = default;
  explicit SymmetricBinaryMatrix(std::size_t n) : n_(n), bits_(n * n, 0) {}

  /// Validates symmetry, zero diagonal and 0/1 entries of a row-major matrix.
  static SymmetricBinaryMatrix from_dense(std::size_t n, std::span<const int> entries);

  std::size_t size() const noexcept { return n_; }
  bool operator()(std::size_t u, std::size_t v) const { return bits_[u * n_ + v] != 0; }
  /// Sets both (u, v) and (v, u); u != v.
  void set(std::size_t u, std::size_t v, bool value);

  std::size_t edge_count() const;
  /// The matrix with rows and columns relabeled: result(u, v) = (*this)(pi(u), pi(v)).
  SymmetricBinaryMatrix pulled_back(const Permutation& pi) const;

  friend bool operator==(const SymmetricBinaryMatrix&, const SymmetricBinaryMatrix&) = default;

private:
  std::size_t n_ = 0;
  std::vector<std::uint8_t> bits_;
};

using ParentMatrix = SymmetricBinaryMatrix;

/// The two observed graphs. y2 is seen through the unknown matching:
/// y2(pi(u), pi(v)) is the noisy copy of the parent pair (u, v).
struct Graphs {
  SymmetricBinaryMatrix y1;
  SymmetricBinaryMatrix y2;

  Graphs() = default;
  Graphs(SymmetricBinaryMatrix a, SymmetricBinaryMatrix b);
  std::size_t size() const noexcept { return y1.size(); }
};

/// alpha: a parent non-edge shows up as an edge. beta: a parent edge is lost.
struct NoiseRates {
  double alpha = 0.0;
  double beta = 0.0;
};

/// Throws unless both rates lie in (0, 1/2).
void validate_noise(const NoiseRates& noise);

struct Hyperparameters {
  double a0 = 1.0;
  double b0 = 1.0;
  double a1 = 1.0;
  double b1 = 1.0;
  double a_xi = 1.0;
  double b_xi = 1.0;
};

/// Concordance counts between the parent and each observed graph.
/// Index [q][l]: q is the parent bit, l = 0 for graph 1 (read directly) and
/// l = 1 for graph 2 (read through pi). `e` counts pairs where the observed
/// bit equals q, `e_bar` pairs where it differs.
struct ExponentTally {
  std::array<std::array<std::int64_t, 2>, 2> e{};
  std::array<std::array<std::int64_t, 2>, 2> e_bar{};

  friend bool operator==(const ExponentTally&, const ExponentTally&) = default;
};

ExponentTally edge_exponents(const ParentMatrix& y, const Graphs& graphs, const Permutation& pi);

/// Edge and non-edge counts between blocks, symmetric storage, within-block
/// pairs counted once.
struct BlockCounts {
  std::size_t k = 0;
  std::vector<std::int64_t> m;
  std::vector<std::int64_t> m_bar;

  explicit BlockCounts(std::size_t blocks = 0)
      : k(blocks), m(blocks * blocks, 0), m_bar(blocks * blocks, 0) {}
  std::int64_t edges(std::size_t j, std::size_t h) const { return m[j * k + h]; }
  std::int64_t non_edges(std::size_t j, std::size_t h) const { return m_bar[j * k + h]; }
  void add(std::size_t j, std::size_t h, bool edge, std::int64_t delta);

  friend bool operator==(const BlockCounts&, const BlockCounts&) = default;
};

BlockCounts block_counts(const ParentMatrix& y, std::span<const std::size_t> z);

/// log p(Y | z) with Xi integrated out.
double log_marginal_sbm(const BlockCounts& counts, double a_xi, double b_xi);

/// log p(Y1, Y2, Y, pi) with alpha, beta and Xi integrated out.
double log_joint(const Permutation& pi, const ParentMatrix& y, const Graphs& graphs,
                 const Hyperparameters& hyper, const EperpfFamily& family);

/// Same, from precomputed tallies and block counts.
double log_joint(const ExponentTally& tally, const BlockCounts& counts,
                 std::span<const std::size_t> cycle_lengths, const Hyperparameters& hyper,
                 const EperpfFamily& family);

namespace detail {
template <class T> T ipow(T base, int exponent) {
  T r(1);
  for (int i = 0; i < exponent; ++i)
    r *= base;
  return r;
}
} // namespace detail

/// Joint law of one aligned observed pair (y1 bit, y2 bit) with the parent
/// bit integrated out, for block probability xi.
template <class T>
T pair_marginal_prob(int y, int y_prime, const T& xi, const T& alpha, const T& beta) {
  const int ones = y + y_prime;
  const int zeros = 2 - ones;
  const T one(1);
  const T keep = one - beta;
  const T clear = one - alpha;
  const T absent = one - xi;
  const T present = detail::ipow<T>(keep, ones) * detail::ipow<T>(beta, zeros) * xi;
  const T spurious = detail::ipow<T>(alpha, ones) * detail::ipow<T>(clear, zeros) * absent;
  return T(present + spurious);
}

inline double pair_marginal_prob(int y, int y_prime, double xi, const NoiseRates& noise) {
  return pair_marginal_prob<double>(y, y_prime, xi, noise.alpha, noise.beta);
}

/// Square matrix of block edge probabilities, symmetric.
struct BlockMatrix {
  std::size_t k = 0;
  std::vector<double> p;
  double operator()(std::size_t j, std::size_t h) const { return p[j * k + h]; }
};

struct SimulationSpec {
  std::size_t n = 0;
  /// Matching to use; drawn from `family` when empty.
  std::optional<Permutation> pi;
  std::optional<EperpfFamily> family;
  /// Block probabilities indexed by cycle ordinal; drawn from Beta(a_xi, b_xi)
  /// when empty.
  std::optional<BlockMatrix> xi;
  double a_xi = 1.0;
  double b_xi = 1.0;
  /// Zero rates are allowed here for noiseless experiments; alpha < 1 - beta.
  NoiseRates noise;
};

struct Simulation {
  Permutation pi;
  Allocation z;
  BlockMatrix xi;
  ParentMatrix parent;
  Graphs graphs;
};

Simulation simulate(const SimulationSpec& spec, Rng& rng);

/// Two cycles of length n/2: 1 -> 2 -> ... -> n/2 -> 1 and likewise on the
/// second half. n must be even and at least 4.
Permutation two_cycle_permutation(std::size_t n);

/// Planted two-block probabilities.
BlockMatrix assortative_blocks(std::size_t k, double p_in, double p_out);

/// Seven-block layout mixing core-periphery, assortative and disassortative
/// patterns, for n nodes split as evenly as possible.
struct MixedScenario {
  Allocation z;
  BlockMatrix xi;
};
MixedScenario mixed_block_scenario(std::size_t n);

} // namespace permatch

#endif
