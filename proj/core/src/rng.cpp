#include "permatch/rng.hpp"

#include "permatch/special_functions.hpp"

#include <boost/random/gamma_distribution.hpp>

#include <cmath>
#include <stdexcept>
#include <vector>

namespace permatch {

namespace {
__extension__ typedef unsigned __int128 u128;
}

double Rng::uniform() {
  // 53 random bits, shifted half a step off zero.
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

std::size_t Rng::index(std::size_t n) {
  if (n == 0)
    throw std::invalid_argument("empty range");
  // Lemire's multiply-shift with rejection.
  const std::uint64_t range = n;
  u128 m = static_cast<u128>(engine_()) * range;
  auto low = static_cast<std::uint64_t>(m);
  if (low < range) {
    const std::uint64_t threshold = (0 - range) % range;
    while (low < threshold) {
      m = static_cast<u128>(engine_()) * range;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::size_t>(m >> 64);
}

double Rng::gamma(double shape, double rate) {
  if (!(shape > 0.0) || !(rate > 0.0))
    throw std::invalid_argument("gamma parameters must be positive");
  boost::random::gamma_distribution<double> dist(shape, 1.0 / rate);
  return dist(engine_);
}

double Rng::beta(double a, double b) {
  const double x = gamma(a, 1.0);
  const double y = gamma(b, 1.0);
  return x / (x + y);
}

std::size_t Rng::categorical_log(std::span<const double> log_weights) {
  if (log_weights.empty())
    throw std::invalid_argument("no categories");
  const double top = log_sum_exp(log_weights);
  double u = uniform();
  double acc = 0.0;
  std::size_t last_finite = 0;
  for (std::size_t i = 0; i < log_weights.size(); ++i) {
    if (log_weights[i] == -INFINITY)
      continue;
    last_finite = i;
    acc += std::exp(log_weights[i] - top);
    if (u < acc)
      return i;
  }
  return last_finite;
}

std::uint64_t Rng::derive(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

} // namespace permatch
