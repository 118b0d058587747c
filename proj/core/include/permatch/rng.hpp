#ifndef PERMATCH_RNG_HPP
#define PERMATCH_RNG_HPP

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>

namespace permatch {

/// Seeded generator passed explicitly to every sampling routine. The output
/// of each method depends only on the engine state, so runs replay exactly.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on the open interval (0, 1).
  double uniform();
  /// Uniform on {0, ..., n - 1}; n > 0.
  std::size_t index(std::size_t n);
  bool bernoulli(double p) { return uniform() < p; }
  /// Gamma with the given shape and rate.
  double gamma(double shape, double rate);
  double beta(double a, double b);
  /// Index drawn proportionally to exp(log_weights).
  std::size_t categorical_log(std::span<const double> log_weights);

  std::mt19937_64& engine() noexcept { return engine_; }

  /// Stream `stream` of master seed `master` (splitmix64 of a counter).
  static std::uint64_t derive(std::uint64_t master, std::uint64_t stream);

private:
  std::mt19937_64 engine_;
};

} // namespace permatch

#endif
