#ifndef PERMATCH_TESTS_SUPPORT_HPP
#define PERMATCH_TESTS_SUPPORT_HPP

#include "permatch/csbm.hpp"
#include "permatch/permutation.hpp"
#include "permatch/rng.hpp"

#include <cmath>
#include <map>
#include <string>
#include <vector>

namespace permatch::test {

inline Permutation cyc(const std::string& text, std::size_t n = 0) {
  return Permutation::parse_cycles(text, n);
}

inline Permutation one_line(const std::string& text) { return Permutation::parse_one_line(text); }

/// Random symmetric 0/1 matrix with the given edge probability.
inline SymmetricBinaryMatrix random_graph(std::size_t n, double p, Rng& rng) {
  SymmetricBinaryMatrix y(n);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v)
      y.set(u, v, rng.bernoulli(p));
  return y;
}

inline Permutation random_permutation(std::size_t n, Rng& rng) {
  std::vector<Node> img(n);
  for (std::size_t i = 0; i < n; ++i)
    img[i] = static_cast<Node>(i);
  for (std::size_t i = n; i > 1; --i)
    std::swap(img[i - 1], img[rng.index(i)]);
  return Permutation(std::move(img));
}

/// Total variation between empirical counts and a reference distribution.
template <class Key>
double total_variation(const std::map<Key, std::size_t>& counts, std::size_t total,
                       const std::map<Key, double>& exact) {
  double tv = 0.0;
  for (const auto& [key, p] : exact) {
    const auto it = counts.find(key);
    const double f = it == counts.end() ? 0.0 : static_cast<double>(it->second) / total;
    tv += std::abs(f - p);
  }
  for (const auto& [key, c] : counts)
    if (!exact.count(key))
      tv += static_cast<double>(c) / total;
  return tv / 2.0;
}

} // namespace permatch::test

#endif
