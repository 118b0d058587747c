#ifndef PERMATCH_GIBBS_HPP
#define PERMATCH_GIBBS_HPP

#include "permatch/block_tracker.hpp"
#include "permatch/csbm.hpp"
#include "permatch/eperpf.hpp"
#include "permatch/permutation.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace permatch {

class Rng;

enum class InitMode { sbm, prior, identity };

std::string to_string(InitMode mode);
InitMode parse_init_mode(std::string_view text);

struct SamplerConfig {
  std::size_t n_iter = 10000;
  std::size_t burn_in = 2000;
  std::size_t thin = 10;
  std::uint64_t seed = 1;
  EperpfFamily family = EperpfFamily::dirichlet(1.0);
  Hyperparameters hyper;
  /// Gamma(shape, rate) hyperprior on the Dirichlet concentration.
  bool theta_hyperprior = true;
  double theta_shape = 1.0;
  double theta_rate = 1.0;
  /// Sweeps between full recounts of the cached tallies.
  std::size_t check_period = 50;
  InitMode init = InitMode::sbm;
  std::size_t init_sweeps = 200;
  bool save_parent = true;

  /// Throws std::invalid_argument on inconsistent settings.
  void validate() const;
};

/// Everything one chain mutates. The block tracker follows the cycles of pi
/// over the parent matrix; the tally follows (parent, graphs, pi).
struct ChainState {
  std::vector<Node> pi;
  std::vector<Node> pi_inv;
  ParentMatrix parent;
  NoiseRates noise;
  EperpfFamily family = EperpfFamily::dirichlet(1.0);
  BlockTracker blocks;
  ExponentTally tally;

  std::size_t size() const noexcept { return pi.size(); }
  Permutation permutation() const { return Permutation(pi); }
  std::size_t cycle_count() const { return blocks.active_count(); }
};

/// Builds a consistent state from its parts (recounting everything).
ChainState make_state(const Permutation& pi, ParentMatrix parent, NoiseRates noise,
                      const EperpfFamily& family, const Graphs& graphs);

/// Throws std::logic_error if the cached counts differ from a recount.
void verify_state(const ChainState& state, const Graphs& graphs);

/// Collapsed Gibbs sampler for an SBM partition of one graph under the
/// family's partition prior, started from singletons. Returns the visited
/// partition with the highest posterior score, in order of appearance.
Allocation sbm_partition(const SymmetricBinaryMatrix& y, const EperpfFamily& family,
                         double a_xi, double b_xi, std::size_t sweeps, Rng& rng);

ChainState init_state(const Graphs& graphs, const SamplerConfig& config, Rng& rng);

/// Normalized log probabilities of the n ways to reinsert v, in
/// insertion_set order (targets ascending, v last). Conditions on the parent
/// matrix and the noise rates; block probabilities are integrated out.
std::vector<double> node_move_distribution(const ChainState& state, Node v, const Graphs& graphs,
                                           const Hyperparameters& hyper);

void node_move(ChainState& state, Node v, const Graphs& graphs, const Hyperparameters& hyper,
               Rng& rng);

/// Resamples y(v, u) for every u != v in ascending order, each from its exact
/// conditional given all other parent bits.
void parent_row_update(ChainState& state, Node v, const Graphs& graphs,
                       const Hyperparameters& hyper, Rng& rng);

void noise_update(ChainState& state, const Hyperparameters& hyper, Rng& rng);

/// Escobar-West augmentation for the Dirichlet concentration. Warns once and
/// leaves the state unchanged for other families.
void theta_update(ChainState& state, double shape, double rate, Rng& rng);

/// Current concentration for the Dirichlet family, NaN otherwise.
double current_theta(const ChainState& state);

double state_log_joint(const ChainState& state, const Hyperparameters& hyper);

/// One pass of the sampler: every node in random order gets a node move and
/// a parent row update, then the noise rates and (if enabled) the
/// concentration are refreshed.
void sweep(ChainState& state, const Graphs& graphs, const SamplerConfig& config, Rng& rng);

struct TraceRow {
  std::size_t iter = 0;
  double alpha = 0.0;
  double beta = 0.0;
  double theta = 0.0;
  double log_joint = 0.0;
  std::size_t k = 0;
};

struct DrawArchive {
  std::uint64_t seed = 0;
  std::string config_text;
  std::uint64_t config_hash = 0;
  /// One row per sweep.
  std::vector<TraceRow> trace;
  /// Kept draws, with the sweep each was taken at.
  std::vector<std::size_t> draw_iters;
  std::vector<Permutation> pi;
  std::vector<ParentMatrix> parent;
};

/// Number of draws kept: floor((n_iter - burn_in) / thin).
std::size_t expected_draw_count(const SamplerConfig& config);

DrawArchive run(const Graphs& graphs, const SamplerConfig& config, Rng& rng);

} // namespace permatch

#endif
