#ifndef PERMATCH_EPERPF_HPP
#define PERMATCH_EPERPF_HPP

#include "permatch/permutation.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace permatch {

class Rng;

struct Dirichlet {
  double theta;
};
struct NormalizedStable {
  double discount;
};
struct PitmanYor {
  double theta;
  double discount;
};
struct Gnedin {
  double gamma;
};

/// One of the four exchangeable permutation priors. Construct through the
/// factory functions, which reject boundary and out-of-range parameters.
class EperpfFamily {
public:
  using Params = std::variant<Dirichlet, NormalizedStable, PitmanYor, Gnedin>;

  static EperpfFamily dirichlet(double theta);
  static EperpfFamily normalized_stable(double discount);
  static EperpfFamily pitman_yor(double theta, double discount);
  static EperpfFamily gnedin(double gamma);

  const Params& params() const noexcept { return params_; }
  /// "dirichlet", "normalized_stable", "pitman_yor" or "gnedin".
  std::string name() const;
  /// e.g. `{family="pitman_yor", theta=1, discount=0.3}`.
  std::string to_config_string() const;

  bool is_dirichlet() const noexcept { return std::holds_alternative<Dirichlet>(params_); }

private:
  explicit EperpfFamily(Params p) : params_(p) {}
  Params params_;
};

/// Log per-seat probability for each existing cycle plus the log probability
/// of opening a new cycle. Every seat inside a cycle is equally likely.
struct PredictiveWeights {
  std::vector<double> per_cycle;
  double new_cycle = 0.0;
};

/// log phi_k^(n)(n_1, ..., n_k), the EPPF of the family's cycle partition.
/// An empty `lengths` is the empty partition with probability one.
double log_eppf(const EperpfFamily& family, std::span<const std::size_t> lengths);

/// log p(pi) = log phi(c(pi)) - sum_j log (n_j - 1)!.
double log_eperpf(const EperpfFamily& family, const Permutation& pi);
double log_eperpf(const EperpfFamily& family, std::span<const std::size_t> lengths);

/// Closed-form sequential predictive rule for the next element, given the
/// cycle lengths of the current permutation.
PredictiveWeights predictive_weights(const EperpfFamily& family,
                                     std::span<const std::size_t> lengths);

/// The same rule evaluated as ratios of EPPF values. Slow; kept to cross-check
/// the closed forms.
PredictiveWeights reference_predictive_weights(const EperpfFamily& family,
                                               std::span<const std::size_t> lengths);

/// Forward draw by sequential seating: each arriving element takes a seat
/// next to an existing element (joining its cycle) or opens a fixed point.
Permutation sample_pa_gcrp(const EperpfFamily& family, std::size_t n, Rng& rng);

/// Uniform draw among the permutations whose cycle structure is `z`
/// (z must be in order of appearance).
Permutation uniform_given_partition(std::span<const std::size_t> z, Rng& rng);

} // namespace permatch

#endif
