#include "permatch/eperpf.hpp"

#include "permatch/rng.hpp"
#include "permatch/special_functions.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace permatch {

namespace {

template <class... Ts> struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts> overloaded(Ts...) -> overloaded<Ts...>;

void require(bool ok, const char* what) {
  if (!ok)
    throw std::invalid_argument(what);
}

std::size_t total(std::span<const std::size_t> lengths) {
  std::size_t n = 0;
  for (std::size_t len : lengths) {
    if (len == 0)
      throw std::invalid_argument("cycle lengths must be positive");
    n += len;
  }
  return n;
}

// log of (1 - d)_{m - 1} = Gamma(m - d) / Gamma(1 - d).
double log_rising_weight(std::size_t m, double discount) {
  return log_gamma(static_cast<double>(m) - discount) - log_gamma(1.0 - discount);
}

} // namespace

EperpfFamily EperpfFamily::dirichlet(double theta) {
  require(theta > 0.0 && std::isfinite(theta), "dirichlet: theta must be positive");
  return EperpfFamily(Dirichlet{theta});
}

EperpfFamily EperpfFamily::normalized_stable(double discount) {
  require(discount > 0.0 && discount < 1.0, "normalized_stable: discount must lie in (0, 1)");
  return EperpfFamily(NormalizedStable{discount});
}

EperpfFamily EperpfFamily::pitman_yor(double theta, double discount) {
  require(theta > 0.0 && std::isfinite(theta), "pitman_yor: theta must be positive");
  require(discount > 0.0 && discount < 1.0, "pitman_yor: discount must lie in (0, 1)");
  return EperpfFamily(PitmanYor{theta, discount});
}

EperpfFamily EperpfFamily::gnedin(double gamma) {
  require(gamma > 0.0 && gamma < 1.0, "gnedin: gamma must lie in (0, 1)");
  return EperpfFamily(Gnedin{gamma});
}

std::string EperpfFamily::name() const {
  return std::visit(overloaded{[](const Dirichlet&) { return std::string("dirichlet"); },
                               [](const NormalizedStable&) {
                                 return std::string("normalized_stable");
                               },
                               [](const PitmanYor&) { return std::string("pitman_yor"); },
                               [](const Gnedin&) { return std::string("gnedin"); }},
                    params_);
}

std::string EperpfFamily::to_config_string() const {
  std::ostringstream out;
  out.precision(17);
  out << "{family=\"" << name() << "\"";
  std::visit(overloaded{[&](const Dirichlet& p) { out << ", theta=" << p.theta; },
                        [&](const NormalizedStable& p) { out << ", discount=" << p.discount; },
                        [&](const PitmanYor& p) {
                          out << ", theta=" << p.theta << ", discount=" << p.discount;
                        },
                        [&](const Gnedin& p) { out << ", gamma=" << p.gamma; }},
             params_);
  out << "}";
  return out.str();
}

double log_eppf(const EperpfFamily& family, std::span<const std::size_t> lengths) {
  const std::size_t n = total(lengths);
  if (n == 0)
    return 0.0;
  const auto k = static_cast<double>(lengths.size());
  const auto nd = static_cast<double>(n);
  return std::visit(
      overloaded{
          [&](const Dirichlet& p) {
            double v = k * std::log(p.theta) + log_gamma(p.theta) - log_gamma(p.theta + nd);
            for (std::size_t len : lengths)
              v += log_gamma(static_cast<double>(len));
            return v;
          },
          [&](const NormalizedStable& p) {
            double v = (k - 1.0) * std::log(p.discount) + log_gamma(k) - log_gamma(nd);
            for (std::size_t len : lengths)
              v += log_rising_weight(len, p.discount);
            return v;
          },
          [&](const PitmanYor& p) {
            // prod_{i=1}^{k-1} (theta + i d) / (theta + 1)_{n-1}
            double v = log_gamma(p.theta + 1.0) - log_gamma(p.theta + nd);
            for (std::size_t i = 1; i < lengths.size(); ++i)
              v += std::log(p.theta + static_cast<double>(i) * p.discount);
            for (std::size_t len : lengths)
              v += log_rising_weight(len, p.discount);
            return v;
          },
          [&](const Gnedin& p) {
            // Gibbs-type with weights (2)_{n_j - 1} = n_j! and
            // V_{n,k} = gamma (k-1)! Gamma(k-gamma) Gamma(n+gamma-k)
            //           / (Gamma(1-gamma) Gamma(n) Gamma(n+gamma)).
            const double g = p.gamma;
            double v = std::log(g) + log_gamma(k) + log_gamma(k - g) + log_gamma(nd + g - k) -
                       log_gamma(1.0 - g) - log_gamma(nd) - log_gamma(nd + g);
            for (std::size_t len : lengths)
              v += log_gamma(static_cast<double>(len) + 1.0);
            return v;
          }},
      family.params());
}

double log_eperpf(const EperpfFamily& family, std::span<const std::size_t> lengths) {
  double v = log_eppf(family, lengths);
  for (std::size_t len : lengths)
    v -= log_gamma(static_cast<double>(len));
  return v;
}

double log_eperpf(const EperpfFamily& family, const Permutation& pi) {
  return log_eperpf(family, canonical_cycles(pi).lengths);
}

PredictiveWeights predictive_weights(const EperpfFamily& family,
                                     std::span<const std::size_t> lengths) {
  const std::size_t n = total(lengths);
  PredictiveWeights w;
  w.per_cycle.resize(lengths.size());
  if (n == 0) {
    w.new_cycle = 0.0;
    return w;
  }
  const auto k = static_cast<double>(lengths.size());
  const auto nd = static_cast<double>(n);
  std::visit(overloaded{
                 [&](const Dirichlet& p) {
                   const double denom = std::log(nd + p.theta);
                   for (auto& x : w.per_cycle)
                     x = -denom;
                   w.new_cycle = std::log(p.theta) - denom;
                 },
                 [&](const NormalizedStable& p) {
                   for (std::size_t j = 0; j < lengths.size(); ++j)
                     w.per_cycle[j] =
                         std::log1p(-p.discount / static_cast<double>(lengths[j])) - std::log(nd);
                   w.new_cycle = std::log(k * p.discount) - std::log(nd);
                 },
                 [&](const PitmanYor& p) {
                   const double denom = std::log(nd + p.theta);
                   for (std::size_t j = 0; j < lengths.size(); ++j)
                     w.per_cycle[j] =
                         std::log1p(-p.discount / static_cast<double>(lengths[j])) - denom;
                   w.new_cycle = std::log(p.theta + k * p.discount) - denom;
                 },
                 [&](const Gnedin& p) {
                   const double denom = std::log(nd) + std::log(nd + p.gamma);
                   const double join = std::log(nd - k + p.gamma) - denom;
                   for (std::size_t j = 0; j < lengths.size(); ++j) {
                     const auto nj = static_cast<double>(lengths[j]);
                     w.per_cycle[j] = std::log((nj + 1.0) / nj) + join;
                   }
                   w.new_cycle = std::log(k) + std::log(k - p.gamma) - denom;
                 }},
             family.params());
  return w;
}

PredictiveWeights reference_predictive_weights(const EperpfFamily& family,
                                               std::span<const std::size_t> lengths) {
  const double base = log_eppf(family, lengths);
  PredictiveWeights w;
  std::vector<std::size_t> grown(lengths.begin(), lengths.end());
  for (std::size_t j = 0; j < lengths.size(); ++j) {
    ++grown[j];
    w.per_cycle.push_back(log_eppf(family, grown) - base -
                          std::log(static_cast<double>(lengths[j])));
    --grown[j];
  }
  grown.push_back(1);
  w.new_cycle = log_eppf(family, grown) - base;
  return w;
}

Permutation sample_pa_gcrp(const EperpfFamily& family, std::size_t n, Rng& rng) {
  if (n == 0)
    throw std::invalid_argument("sample_pa_gcrp: n must be positive");
  std::vector<Node> image(n);
  std::vector<std::size_t> lengths;
  std::vector<std::vector<Node>> members;
  std::vector<double> log_w;
  for (std::size_t m = 0; m < n; ++m) {
    const auto node = static_cast<Node>(m);
    const PredictiveWeights w = predictive_weights(family, lengths);
    log_w.clear();
    for (std::size_t j = 0; j < lengths.size(); ++j)
      log_w.push_back(w.per_cycle[j] + std::log(static_cast<double>(lengths[j])));
    log_w.push_back(w.new_cycle);
    const std::size_t j = rng.categorical_log(log_w);
    if (j == lengths.size()) {
      image[node] = node;
      lengths.push_back(1);
      members.push_back({node});
      continue;
    }
    // Seat uniformly within the cycle: node takes over the image of a chosen
    // member and the member now maps to node.
    const Node host = members[j][rng.index(members[j].size())];
    image[node] = image[host];
    image[host] = node;
    ++lengths[j];
    members[j].push_back(node);
  }
  return Permutation(std::move(image));
}

Permutation uniform_given_partition(std::span<const std::size_t> z, Rng& rng) {
  if (!is_canonical_allocation(z))
    throw std::invalid_argument("allocation labels are not in order of appearance");
  std::vector<std::vector<Node>> blocks(block_count(z));
  for (std::size_t u = 0; u < z.size(); ++u)
    blocks[z[u]].push_back(static_cast<Node>(u));
  std::vector<Node> image(z.size());
  for (auto& block : blocks) {
    // Fix the first element and shuffle the rest: uniform over (m-1)! cycles.
    for (std::size_t i = block.size(); i > 2; --i) {
      const std::size_t j = 1 + rng.index(i - 1);
      std::swap(block[i - 1], block[j]);
    }
    for (std::size_t i = 0; i < block.size(); ++i)
      image[block[i]] = block[(i + 1) % block.size()];
  }
  return Permutation(std::move(image));
}

} // namespace permatch
