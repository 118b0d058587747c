#include "permatch/oracle.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <queue>
#include <stdexcept>

namespace permatch::oracle {

namespace {

double lbeta(double a, double b) { return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b); }

double log_add(double a, double b) {
  if (a == -INFINITY)
    return b;
  if (b == -INFINITY)
    return a;
  const double hi = std::max(a, b);
  return hi + std::log(std::exp(a - hi) + std::exp(b - hi));
}

// log of int_0^{1/2} x^(a-1) (1-x)^(b-1) dx.
double log_half_integral(double a, double b) {
  thread_local boost::math::quadrature::tanh_sinh<double> integrator;
  // Scale by the integrand's largest value on (0, 1/2] to keep it O(1).
  const double mode = a > 1.0 ? std::min(0.5, (a - 1.0) / std::max(a + b - 2.0, a - 1.0)) : 0.5;
  const double log_scale = (a - 1.0) * std::log(mode) + (b - 1.0) * std::log1p(-mode);
  const auto f = [&](double x) {
    return std::exp((a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) - log_scale);
  };
  return std::log(integrator.integrate(f, 0.0, 0.5)) + log_scale;
}

std::vector<std::vector<Node>> cycles_of(const std::vector<Node>& img) {
  std::vector<std::vector<Node>> out;
  std::vector<char> seen(img.size(), 0);
  for (Node u = 0; u < img.size(); ++u) {
    if (seen[u])
      continue;
    out.emplace_back();
    for (Node x = u; !seen[x]; x = img[x]) {
      seen[x] = 1;
      out.back().push_back(x);
    }
  }
  return out;
}

// Sequential seating probability of the last element given the lengths of
// the previous cycles; `joined` is the length of the cycle it joins, 0 for a
// new cycle.
double log_seat(const EperpfFamily& family, std::size_t seated, std::size_t k, std::size_t joined) {
  if (seated == 0)
    return 0.0;
  const double n = static_cast<double>(seated);
  const double kk = static_cast<double>(k);
  const double nj = static_cast<double>(joined);
  const auto& p = family.params();
  if (const auto* d = std::get_if<Dirichlet>(&p))
    return joined == 0 ? std::log(d->theta / (n + d->theta)) : -std::log(n + d->theta);
  if (const auto* s = std::get_if<NormalizedStable>(&p))
    return joined == 0 ? std::log(kk * s->discount / n) : std::log((1.0 - s->discount / nj) / n);
  if (const auto* y = std::get_if<PitmanYor>(&p))
    return joined == 0 ? std::log((y->theta + kk * y->discount) / (n + y->theta))
                       : std::log((1.0 - y->discount / nj) / (n + y->theta));
  const double g = std::get<Gnedin>(p).gamma;
  return joined == 0 ? std::log(kk * (kk - g) / (n * (n + g)))
                     : std::log((nj + 1.0) / nj * (n - kk + g) / (n * (n + g)));
}

double sbm_term(const ParentMatrix& y, const Allocation& z, double a, double b) {
  const std::size_t n = y.size();
  std::map<std::pair<std::size_t, std::size_t>, std::pair<double, double>> counts;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v) {
      auto key = std::minmax(z[u], z[v]);
      auto& c = counts[{key.first, key.second}];
      (y(u, v) ? c.first : c.second) += 1.0;
    }
  double total = 0.0;
  for (const auto& [key, c] : counts)
    total += lbeta(a + c.first, b + c.second) - lbeta(a, b);
  return total;
}

Allocation cycle_labels(const Permutation& pi) {
  std::vector<Node> img(pi.images().begin(), pi.images().end());
  Allocation z(pi.size());
  const auto cycles = cycles_of(img);
  for (std::size_t j = 0; j < cycles.size(); ++j)
    for (Node u : cycles[j])
      z[u] = j;
  return z;
}

std::vector<ParentMatrix> all_parents(std::size_t n) {
  const std::size_t pairs = n * (n - 1) / 2;
  std::vector<ParentMatrix> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << pairs); ++mask) {
    ParentMatrix y(n);
    std::size_t bit = 0;
    for (std::size_t u = 0; u < n; ++u)
      for (std::size_t v = u + 1; v < n; ++v, ++bit)
        y.set(u, v, (mask >> bit) & 1U);
    out.push_back(std::move(y));
  }
  return out;
}

} // namespace

std::vector<Permutation> enumerate_permutations(std::size_t n) {
  if (n == 0 || n > 8)
    throw std::invalid_argument("enumerate_permutations: need 1 <= n <= 8");
  std::vector<Node> img(n);
  std::iota(img.begin(), img.end(), Node{0});
  std::vector<Permutation> out;
  do
    out.emplace_back(img);
  while (std::next_permutation(img.begin(), img.end()));
  return out;
}

double ExactTable::total_probability() const {
  double s = 0.0;
  for (double lp : log_prob)
    s += std::exp(lp);
  return s;
}

double ExactTable::probability(const Permutation& pi) const {
  for (std::size_t i = 0; i < perms.size(); ++i)
    if (perms[i] == pi)
      return std::exp(log_prob[i]);
  throw std::invalid_argument("permutation not in table");
}

double sequential_log_prior(const EperpfFamily& family, const Permutation& pi) {
  std::vector<Node> img(pi.images().begin(), pi.images().end());
  double lp = 0.0;
  while (!img.empty()) {
    const Node last = static_cast<Node>(img.size() - 1);
    const Node target = img[last];
    // Remove the last element, splicing its predecessor onto its target.
    if (target != last) {
      for (auto& x : img)
        if (x == last) {
          x = target;
          break;
        }
    }
    img.pop_back();
    const auto cycles = cycles_of(img);
    std::size_t joined = 0;
    if (target != last)
      for (const auto& c : cycles)
        if (std::find(c.begin(), c.end(), target) != c.end())
          joined = c.size();
    lp += log_seat(family, img.size(), cycles.size(), joined);
  }
  return lp;
}

ExactTable exact_prior_table(const EperpfFamily& family, std::size_t n) {
  if (n == 0 || n > 7)
    throw std::invalid_argument("exact_prior_table: need 1 <= n <= 7");
  ExactTable t;
  t.n = n;
  t.descriptor = "prior " + family.to_config_string();
  t.perms = enumerate_permutations(n);
  for (const auto& p : t.perms)
    t.log_prob.push_back(sequential_log_prior(family, p));
  if (std::abs(t.total_probability() - 1.0) > 1e-10)
    throw std::logic_error("exact_prior_table: table does not normalize");
  return t;
}

double log_conditional_joint(const Permutation& pi, const ParentMatrix& y, const Graphs& graphs,
                             const NoiseRates& noise, const Hyperparameters& hyper,
                             const EperpfFamily& family) {
  const std::size_t n = pi.size();
  double lp = 0.0;
  const auto observe = [&](bool parent, bool seen) {
    const double p1 = parent ? 1.0 - noise.beta : noise.alpha;
    return std::log(seen ? p1 : 1.0 - p1);
  };
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v) {
      lp += observe(y(u, v), graphs.y1(u, v));
      lp += observe(y(u, v), graphs.y2(pi[u], pi[v]));
    }
  return lp + sbm_term(y, cycle_labels(pi), hyper.a_xi, hyper.b_xi) +
         sequential_log_prior(family, pi);
}

double log_joint_by_quadrature(const Permutation& pi, const ParentMatrix& y,
                               const Graphs& graphs, const Hyperparameters& hyper,
                               const EperpfFamily& family) {
  const std::size_t n = pi.size();
  // Counts of (parent bit, observed bit) over both graphs.
  double c[2][2] = {{0, 0}, {0, 0}};
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v) {
      c[y(u, v)][graphs.y1(u, v)] += 1.0;
      c[y(u, v)][graphs.y2(pi[u], pi[v])] += 1.0;
    }
  // alpha: parent 0 observed 1; beta: parent 1 observed 0.
  const double alpha_part = log_half_integral(hyper.a0 + c[0][1], hyper.b0 + c[0][0]) -
                            log_half_integral(hyper.a0, hyper.b0);
  const double beta_part = log_half_integral(hyper.a1 + c[1][0], hyper.b1 + c[1][1]) -
                           log_half_integral(hyper.a1, hyper.b1);
  return alpha_part + beta_part + sbm_term(y, cycle_labels(pi), hyper.a_xi, hyper.b_xi) +
         sequential_log_prior(family, pi);
}

ExactTable exact_posterior_table(const Graphs& graphs, const Hyperparameters& hyper,
                                 const EperpfFamily& family) {
  const std::size_t n = graphs.size();
  if (n == 0 || n > 4)
    throw std::invalid_argument("exact_posterior_table: need 1 <= n <= 4");
  ExactTable t;
  t.n = n;
  t.descriptor = "posterior " + family.to_config_string();
  t.perms = enumerate_permutations(n);
  const auto parents = all_parents(n);
  double norm = -INFINITY;
  for (const auto& p : t.perms) {
    double lp = -INFINITY;
    for (const auto& y : parents)
      lp = log_add(lp, log_joint_by_quadrature(p, y, graphs, hyper, family));
    t.log_prob.push_back(lp);
    norm = log_add(norm, lp);
  }
  for (double& lp : t.log_prob)
    lp -= norm;
  return t;
}

std::vector<JointEntry> exact_joint_posterior(const Graphs& graphs, const Hyperparameters& hyper,
                                              const EperpfFamily& family) {
  const std::size_t n = graphs.size();
  if (n == 0 || n > 3)
    throw std::invalid_argument("exact_joint_posterior: need 1 <= n <= 3");
  std::vector<JointEntry> out;
  double norm = -INFINITY;
  for (const auto& p : enumerate_permutations(n))
    for (const auto& y : all_parents(n)) {
      const double lp = log_joint_by_quadrature(p, y, graphs, hyper, family);
      out.push_back({p, y, lp});
      norm = log_add(norm, lp);
    }
  for (auto& e : out)
    e.log_prob -= norm;
  return out;
}

std::size_t cayley_bfs(const Permutation& pi, const Permutation& sigma) {
  const std::size_t n = pi.size();
  if (sigma.size() != n)
    throw std::invalid_argument("cayley_bfs: size mismatch");
  if (n > 6)
    throw std::invalid_argument("cayley_bfs: need n <= 6");
  using Key = std::vector<Node>;
  const Key start(pi.images().begin(), pi.images().end());
  const Key goal(sigma.images().begin(), sigma.images().end());
  std::map<Key, std::size_t> dist{{start, 0}};
  std::queue<Key> frontier;
  frontier.push(start);
  while (!frontier.empty()) {
    Key cur = frontier.front();
    frontier.pop();
    const std::size_t d = dist[cur];
    if (cur == goal)
      return d;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        Key next = cur;
        std::swap(next[i], next[j]);
        if (dist.emplace(next, d + 1).second)
          frontier.push(std::move(next));
      }
  }
  throw std::logic_error("cayley_bfs: goal unreachable");
}

} // namespace permatch::oracle
