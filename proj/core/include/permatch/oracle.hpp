#ifndef PERMATCH_ORACLE_HPP
#define PERMATCH_ORACLE_HPP

// Brute-force references for tests and inspection. These deliberately avoid
// the production probability code and only share permutation arithmetic.

#include "permatch/csbm.hpp"
#include "permatch/eperpf.hpp"
#include "permatch/permutation.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace permatch::oracle {

/// All n! permutations in lexicographic one-line order; n <= 8.
std::vector<Permutation> enumerate_permutations(std::size_t n);

struct ExactTable {
  std::size_t n = 0;
  std::string descriptor;
  std::vector<Permutation> perms;
  std::vector<double> log_prob;

  double total_probability() const;
  /// Probability of pi; throws if pi is not in the table.
  double probability(const Permutation& pi) const;
};

/// Prior probability from the sequential seating rule, peeling off the
/// largest element one step at a time.
double sequential_log_prior(const EperpfFamily& family, const Permutation& pi);

/// Prior over S_n for n <= 7.
ExactTable exact_prior_table(const EperpfFamily& family, std::size_t n);

/// log p(Y1, Y2 | Y, pi, alpha, beta) + log p(Y | z(pi)) + log p(pi).
double log_conditional_joint(const Permutation& pi, const ParentMatrix& y, const Graphs& graphs,
                             const NoiseRates& noise, const Hyperparameters& hyper,
                             const EperpfFamily& family);

/// log p(Y1, Y2, Y, pi) with the noise rates integrated by quadrature.
double log_joint_by_quadrature(const Permutation& pi, const ParentMatrix& y,
                               const Graphs& graphs, const Hyperparameters& hyper,
                               const EperpfFamily& family);

/// p(pi | Y1, Y2) by summing the joint over every parent matrix; n <= 4.
ExactTable exact_posterior_table(const Graphs& graphs, const Hyperparameters& hyper,
                                 const EperpfFamily& family);

struct JointEntry {
  Permutation pi;
  ParentMatrix parent;
  double log_prob = 0.0;
};

/// p(pi, Y | Y1, Y2) over every (pi, Y); n <= 3.
std::vector<JointEntry> exact_joint_posterior(const Graphs& graphs, const Hyperparameters& hyper,
                                              const EperpfFamily& family);

/// Shortest path between pi and sigma in the Cayley graph generated by
/// transpositions; n <= 6.
std::size_t cayley_bfs(const Permutation& pi, const Permutation& sigma);

} // namespace permatch::oracle

#endif
