#ifndef PERMATCH_SUMMARIZE_HPP
#define PERMATCH_SUMMARIZE_HPP

#include "permatch/csbm.hpp"
#include "permatch/permutation.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace permatch {

class Rng;

/// Posterior draws of a common size, with repeated draws merged into weights.
class PosteriorPermSample {
public:
  explicit PosteriorPermSample(std::vector<Permutation> draws);

  std::size_t draw_count() const noexcept { return draws_.size(); }
  std::size_t node_count() const noexcept { return draws_.front().size(); }
  const std::vector<Permutation>& draws() const noexcept { return draws_; }
  /// Distinct draws in ascending one-line order and their multiplicities.
  const std::vector<Permutation>& distinct() const noexcept { return distinct_; }
  const std::vector<std::size_t>& weights() const noexcept { return weights_; }

private:
  std::vector<Permutation> draws_;
  std::vector<Permutation> distinct_;
  std::vector<std::size_t> weights_;
};

struct SummaryConfig {
  std::size_t n_zeal = 10;
  std::size_t n_runs = 8;
  std::uint64_t seed = 1;
  bool fast_mode = false;
  bool early_stopping = true;
  /// Adds a restart that starts from the best draw, so the estimate is never
  /// worse than any single draw.
  bool best_draw_start = true;

  void validate() const;
};

/// Sum over draws of the Cayley distance to sigma.
std::uint64_t total_cayley(const PosteriorPermSample& sample, const Permutation& sigma);

/// Mean Cayley distance from the draws to sigma.
double expected_cayley(const PosteriorPermSample& sample, const Permutation& sigma);
/// Same, but gives up (returns nullopt) once the partial sum exceeds
/// budget * draw_count.
std::optional<double> expected_cayley(const PosteriorPermSample& sample,
                                      const Permutation& sigma, double budget);

struct PersalsoResult {
  Permutation estimate;
  double f_c = 0.0;
  /// Sum of distances after each accepted move, all restarts in order.
  std::vector<std::uint64_t> accepted_totals;
  /// Number of single-draw distance evaluations performed.
  std::uint64_t draw_evaluations = 0;
};

PersalsoResult persalso(const PosteriorPermSample& sample, const SummaryConfig& config, Rng& rng);

/// Every search restricted to permutations whose cycles are the blocks of
/// z_hat.
PersalsoResult fast_persalso(const PosteriorPermSample& sample, std::span<const std::size_t> z_hat,
                             const SummaryConfig& config, Rng& rng);

/// Expected Binder loss (equal misclassification costs) of z against the
/// draws' co-clustering frequencies, times the number of draws.
std::uint64_t binder_loss_total(std::span<const Allocation> z_draws, std::span<const std::size_t> z);

/// Greedy sequential allocation plus sweetening on the Binder loss.
Allocation partition_point_estimate(std::span<const Allocation> z_draws, Rng& rng);

/// Mutual information over the arithmetic mean of the two entropies;
/// 1 when both partitions are trivial in the same way.
double nmi(std::span<const std::size_t> z1, std::span<const std::size_t> z2);

/// ||Y1 - Y2_pi||_F where Y2_pi(u, v) = y2(pi(u), pi(v)).
double frobenius_discrepancy(const Graphs& graphs, const Permutation& pi);

/// Posterior inclusion frequency of every upper-triangle pair.
std::vector<double> edge_frequencies(std::span<const ParentMatrix> parent_draws);

/// Area under the ROC curve of the inclusion frequencies against the true
/// parent's upper triangle, ties counted one half. nullopt when the truth has
/// no edges or no non-edges.
std::optional<double> auc_parent(std::span<const ParentMatrix> parent_draws,
                                 const ParentMatrix& truth);
std::optional<double> auc_scores(std::span<const double> scores, std::span<const int> labels);

} // namespace permatch

#endif
