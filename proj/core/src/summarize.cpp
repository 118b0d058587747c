#include "permatch/summarize.hpp"

#include "permatch/rng.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

namespace permatch {

PosteriorPermSample::PosteriorPermSample(std::vector<Permutation> draws) : draws_(std::move(draws)) {
  if (draws_.empty())
    throw std::invalid_argument("posterior sample is empty");
  const std::size_t n = draws_.front().size();
  for (const auto& d : draws_)
    if (d.size() != n)
      throw std::invalid_argument("posterior draws differ in size");
  std::map<Permutation, std::size_t> counts;
  for (const auto& d : draws_)
    ++counts[d];
  for (auto& [p, c] : counts) {
    distinct_.push_back(p);
    weights_.push_back(c);
  }
}

void SummaryConfig::validate() const {
  if (n_runs == 0)
    throw std::invalid_argument("n_runs must be at least 1");
}

namespace {

std::size_t cycles_of_composite(std::span<const Node> pi, std::span<const Node> sigma_inv) {
  const std::size_t n = pi.size();
  std::vector<char> seen(n, 0);
  std::size_t c = 0;
  for (std::size_t u = 0; u < n; ++u) {
    if (seen[u])
      continue;
    ++c;
    for (std::size_t x = u; !seen[x]; x = sigma_inv[pi[x]])
      seen[x] = 1;
  }
  return c;
}

std::vector<Node> inverse_images(const Permutation& p) {
  std::vector<Node> inv(p.size());
  for (std::size_t i = 0; i < p.size(); ++i)
    inv[p[i]] = static_cast<Node>(i);
  return inv;
}

constexpr std::uint64_t kNoBudget = std::numeric_limits<std::uint64_t>::max();

struct Shared {
  std::size_t n = 0;
  std::vector<std::vector<Node>> draws;
  std::vector<std::uint64_t> weights;
  const Allocation* z_hat = nullptr;
  const SummaryConfig* config = nullptr;
};

struct RestartOutcome {
  std::vector<Node> estimate;
  std::uint64_t total = 0;
  std::vector<std::uint64_t> accepted;
  std::uint64_t evaluations = 0;
};

// One restart of the search. The current estimate lives in img/pre over the
// nodes flagged in member; candidates are applied in place and reverted.
class Searcher {
public:
  Searcher(const Shared& shared, std::uint64_t seed)
      : sh_(shared), rng_(seed), img_(shared.n), pre_(shared.n), member_(shared.n, 0),
        stamp_(shared.n, 0), pruned_(shared.draws.size(), std::vector<Node>(shared.n)),
        freq_(shared.n, 0) {}

  RestartOutcome from_scratch() {
    initialize();
    polish();
    return finish();
  }

  RestartOutcome from_draw(const std::vector<Node>& start) {
    const std::size_t n = sh_.n;
    for (std::size_t u = 0; u < n; ++u) {
      img_[u] = start[u];
      pre_[start[u]] = static_cast<Node>(u);
      member_[u] = 1;
    }
    support_ = n;
    current_ = evaluate(full_table(), kNoBudget);
    out_.accepted.push_back(current_);
    polish();
    return finish();
  }

private:
  using Table = const std::vector<std::vector<Node>>&;

  Table full_table() const { return sh_.draws; }

  RestartOutcome finish() {
    out_.estimate = img_;
    out_.total = current_;
    return std::move(out_);
  }

  void polish() {
    sweeten();
    for (std::size_t r = 0; r < sh_.config->n_zeal; ++r)
      zeal();
  }

  std::vector<Node> shuffled(std::vector<Node> items) {
    for (std::size_t i = items.size(); i > 1; --i)
      std::swap(items[i - 1], items[rng_.index(i)]);
    return items;
  }

  std::vector<Node> all_nodes() const {
    std::vector<Node> v(sh_.n);
    std::iota(v.begin(), v.end(), Node{0});
    return v;
  }

  // Projection of every draw onto the current support: each member maps to
  // the first member reached along the draw's cycle.
  void prune() {
    for (std::size_t s = 0; s < sh_.draws.size(); ++s) {
      const auto& d = sh_.draws[s];
      auto& p = pruned_[s];
      for (std::size_t u = 0; u < sh_.n; ++u) {
        if (!member_[u])
          continue;
        Node x = d[u];
        while (!member_[x])
          x = d[x];
        p[u] = x;
      }
    }
  }

  // Weighted sum of distances; stops with kNoBudget once it passes `budget`.
  std::uint64_t evaluate(Table table, std::uint64_t budget) {
    const bool early = sh_.config->early_stopping;
    std::uint64_t total = 0;
    for (std::size_t s = 0; s < table.size(); ++s) {
      const auto& p = table[s];
      ++stamp_value_;
      std::size_t cycles = 0;
      for (std::size_t u = 0; u < sh_.n; ++u) {
        if (!member_[u] || stamp_[u] == stamp_value_)
          continue;
        ++cycles;
        for (Node x = static_cast<Node>(u); stamp_[x] != stamp_value_; x = pre_[p[x]])
          stamp_[x] = stamp_value_;
      }
      ++out_.evaluations;
      total += sh_.weights[s] * (support_ - cycles);
      if (early && total > budget)
        return kNoBudget;
    }
    return total;
  }

  // v becomes a member mapping to target (target == v: new fixed point).
  void apply(Node v, Node target) {
    member_[v] = 1;
    ++support_;
    if (target == v) {
      img_[v] = v;
      pre_[v] = v;
      return;
    }
    const Node host = pre_[target];
    img_[host] = v;
    pre_[v] = host;
    img_[v] = target;
    pre_[target] = v;
  }

  // Removes v from the cycle representation; returns its former target.
  Node detach(Node v) {
    const Node target = img_[v];
    if (target != v) {
      const Node host = pre_[v];
      img_[host] = target;
      pre_[target] = host;
    }
    member_[v] = 0;
    --support_;
    return target;
  }

  // Targets allowed for v, most frequent image of v in the table first.
  std::vector<Node> candidates(Node v, Table table) {
    std::vector<Node> out;
    if (sh_.z_hat != nullptr) {
      const auto& z = *sh_.z_hat;
      for (Node t = 0; t < sh_.n; ++t)
        if (t != v && member_[t] && z[t] == z[v])
          out.push_back(t);
      if (out.empty())
        out.push_back(v);
    } else {
      for (Node t = 0; t < sh_.n; ++t)
        if (t != v && member_[t])
          out.push_back(t);
      out.push_back(v);
    }
    if (out.size() < 2)
      return out;
    for (Node t : out)
      freq_[t] = 0;
    for (std::size_t s = 0; s < table.size(); ++s)
      freq_[table[s][v]] += sh_.weights[s];
    std::stable_sort(out.begin(), out.end(),
                     [&](Node a, Node b) { return freq_[a] > freq_[b]; });
    return out;
  }

  // Inserts v (not a member) at the position minimizing the distance to the
  // table; ties go to the earliest candidate.
  std::uint64_t insert_best(Node v, Table table) {
    std::uint64_t best = kNoBudget;
    Node choice = v;
    for (Node t : candidates(v, table)) {
      apply(v, t);
      const std::uint64_t total = evaluate(table, best);
      detach(v);
      if (total < best) {
        best = total;
        choice = t;
      }
    }
    apply(v, choice);
    return best;
  }

  void initialize() {
    const std::vector<Node> order = shuffled(all_nodes());
    support_ = 0;
    apply(order[0], order[0]);
    for (std::size_t i = 1; i < order.size(); ++i) {
      member_[order[i]] = 1;
      prune();
      member_[order[i]] = 0;
      current_ = insert_best(order[i], pruned_);
    }
    if (order.size() == 1)
      current_ = evaluate(full_table(), kNoBudget);
    out_.accepted.push_back(current_);
  }

  void accept(std::uint64_t total) {
    if (total >= current_)
      throw std::logic_error("perSALSO accepted a move that did not improve");
    current_ = total;
    out_.accepted.push_back(total);
  }

  void sweeten() {
    bool improved = true;
    while (improved) {
      improved = false;
      for (Node v : shuffled(all_nodes())) {
        const Node original = detach(v);
        std::uint64_t best = current_;
        Node choice = original;
        for (Node t : candidates(v, full_table())) {
          if (t == original)
            continue;
          apply(v, t);
          const std::uint64_t total = evaluate(full_table(), best);
          detach(v);
          if (total < best) {
            best = total;
            choice = t;
          }
        }
        apply(v, choice);
        if (choice != original) {
          accept(best);
          improved = true;
        }
      }
    }
  }

  void zeal() {
    std::vector<std::vector<Node>> cycles;
    std::vector<char> seen(sh_.n, 0);
    for (Node u = 0; u < sh_.n; ++u) {
      if (seen[u])
        continue;
      cycles.emplace_back();
      for (Node x = u; !seen[x]; x = img_[x]) {
        seen[x] = 1;
        cycles.back().push_back(x);
      }
    }
    const std::vector<Node> order = shuffled(cycles[rng_.index(cycles.size())]);
    const std::vector<Node> saved_img = img_;
    const std::vector<Node> saved_pre = pre_;
    for (Node u : order) {
      member_[u] = 0;
      --support_;
    }
    apply(order[0], order[0]);
    std::uint64_t total = 0;
    for (std::size_t i = 1; i < order.size(); ++i) {
      member_[order[i]] = 1;
      prune();
      member_[order[i]] = 0;
      total = insert_best(order[i], pruned_);
    }
    if (order.size() == 1)
      total = current_;
    if (total < current_) {
      accept(total);
    } else {
      img_ = saved_img;
      pre_ = saved_pre;
    }
  }

  const Shared& sh_;
  Rng rng_;
  std::vector<Node> img_;
  std::vector<Node> pre_;
  std::vector<char> member_;
  std::size_t support_ = 0;
  std::vector<std::uint32_t> stamp_;
  std::uint32_t stamp_value_ = 0;
  std::vector<std::vector<Node>> pruned_;
  std::vector<std::uint64_t> freq_;
  std::uint64_t current_ = 0;
  RestartOutcome out_;
};

PersalsoResult search(const PosteriorPermSample& sample, const Allocation* z_hat,
                      const SummaryConfig& config, Rng& rng) {
  config.validate();
  Shared sh;
  sh.n = sample.node_count();
  sh.z_hat = z_hat;
  sh.config = &config;
  for (std::size_t i = 0; i < sample.distinct().size(); ++i) {
    const auto images = sample.distinct()[i].images();
    sh.draws.emplace_back(images.begin(), images.end());
    sh.weights.push_back(sample.weights()[i]);
  }

  // Best single draw, restricted to the required cycle structure in fast mode.
  std::optional<std::size_t> best_draw;
  if (config.best_draw_start) {
    std::uint64_t best_total = kNoBudget;
    for (std::size_t i = 0; i < sample.distinct().size(); ++i) {
      const Permutation& d = sample.distinct()[i];
      if (z_hat != nullptr && canonical_cycles(d).z != *z_hat)
        continue;
      const std::uint64_t t = total_cayley(sample, d);
      if (t < best_total) {
        best_total = t;
        best_draw = i;
      }
    }
  }

  const std::uint64_t base_seed = rng.engine()();
  std::vector<std::future<RestartOutcome>> jobs;
  for (std::size_t r = 0; r < config.n_runs; ++r)
    jobs.push_back(std::async(std::launch::async, [&sh, seed = Rng::derive(base_seed, r)] {
      return Searcher(sh, seed).from_scratch();
    }));
  if (best_draw)
    jobs.push_back(std::async(std::launch::async,
                              [&sh, seed = Rng::derive(base_seed, config.n_runs),
                               start = sh.draws[*best_draw]] {
                                return Searcher(sh, seed).from_draw(start);
                              }));

  PersalsoResult result;
  std::optional<RestartOutcome> winner;
  for (auto& job : jobs) {
    RestartOutcome o = job.get();
    result.accepted_totals.insert(result.accepted_totals.end(), o.accepted.begin(),
                                  o.accepted.end());
    result.draw_evaluations += o.evaluations;
    if (!winner || o.total < winner->total ||
        (o.total == winner->total && o.estimate < winner->estimate))
      winner = std::move(o);
  }
  result.estimate = Permutation(winner->estimate);
  result.f_c = static_cast<double>(winner->total) / static_cast<double>(sample.draw_count());
  return result;
}

} // namespace

std::uint64_t total_cayley(const PosteriorPermSample& sample, const Permutation& sigma) {
  if (sigma.size() != sample.node_count())
    throw std::invalid_argument("expected_cayley: size mismatch");
  const std::vector<Node> inv = inverse_images(sigma);
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < sample.distinct().size(); ++i)
    total += sample.weights()[i] *
             (sigma.size() - cycles_of_composite(sample.distinct()[i].images(), inv));
  return total;
}

double expected_cayley(const PosteriorPermSample& sample, const Permutation& sigma) {
  return static_cast<double>(total_cayley(sample, sigma)) /
         static_cast<double>(sample.draw_count());
}

std::optional<double> expected_cayley(const PosteriorPermSample& sample,
                                      const Permutation& sigma, double budget) {
  if (sigma.size() != sample.node_count())
    throw std::invalid_argument("expected_cayley: size mismatch");
  const std::vector<Node> inv = inverse_images(sigma);
  const double limit = budget * static_cast<double>(sample.draw_count());
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < sample.distinct().size(); ++i) {
    total += sample.weights()[i] *
             (sigma.size() - cycles_of_composite(sample.distinct()[i].images(), inv));
    if (static_cast<double>(total) > limit)
      return std::nullopt;
  }
  return static_cast<double>(total) / static_cast<double>(sample.draw_count());
}

PersalsoResult persalso(const PosteriorPermSample& sample, const SummaryConfig& config, Rng& rng) {
  return search(sample, nullptr, config, rng);
}

PersalsoResult fast_persalso(const PosteriorPermSample& sample, std::span<const std::size_t> z_hat,
                             const SummaryConfig& config, Rng& rng) {
  if (z_hat.size() != sample.node_count())
    throw std::invalid_argument("fast_persalso: allocation size does not match the draws");
  if (!is_canonical_allocation(z_hat))
    throw std::invalid_argument("fast_persalso: allocation labels are not in order of appearance");
  const Allocation z(z_hat.begin(), z_hat.end());
  return search(sample, &z, config, rng);
}

namespace {

// co[i * n + j]: number of draws placing i and j together.
std::vector<std::uint64_t> co_clustering(std::span<const Allocation> z_draws) {
  const std::size_t n = z_draws.front().size();
  std::vector<std::uint64_t> co(n * n, 0);
  for (const auto& z : z_draws) {
    if (z.size() != n)
      throw std::invalid_argument("partition draws differ in size");
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (z[i] == z[j]) {
          ++co[i * n + j];
          ++co[j * n + i];
        }
  }
  return co;
}

std::uint64_t binder_total(const std::vector<std::uint64_t>& co, std::uint64_t draws,
                           std::span<const std::size_t> z) {
  const std::size_t n = z.size();
  std::uint64_t loss = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      loss += z[i] == z[j] ? draws - co[i * n + j] : co[i * n + j];
  return loss;
}

constexpr std::size_t kUnassigned = std::numeric_limits<std::size_t>::max();

// Best label for i among the labels in use plus a fresh one, by the change
// in loss. Ties keep `keep` when it is among the best, otherwise go to the
// smallest label, with the fresh label last.
std::size_t best_label(const std::vector<std::uint64_t>& co, std::uint64_t draws,
                       const std::vector<std::size_t>& z, std::size_t i, std::size_t keep) {
  const std::size_t n = z.size();
  std::size_t labels = 0;
  for (std::size_t j = 0; j < n; ++j)
    if (j != i && z[j] != kUnassigned)
      labels = std::max(labels, z[j] + 1);
  // Joining label h changes the loss by the sum over its members j of
  // (S - co_ij) - co_ij.
  std::vector<std::int64_t> cost(labels, 0);
  std::vector<char> used(labels, 0);
  for (std::size_t j = 0; j < n; ++j)
    if (j != i && z[j] != kUnassigned) {
      used[z[j]] = 1;
      cost[z[j]] += static_cast<std::int64_t>(draws) - 2 * static_cast<std::int64_t>(co[i * n + j]);
    }
  const std::size_t fresh = labels;
  if (keep != kUnassigned && (keep >= labels || !used[keep]))
    keep = fresh;
  std::size_t best = fresh;
  std::int64_t best_cost = 0;
  for (std::size_t h = 0; h < labels; ++h)
    if (used[h] && cost[h] < best_cost) {
      best_cost = cost[h];
      best = h;
    }
  if (best == fresh) {
    for (std::size_t h = 0; h < labels; ++h)
      if (used[h] && cost[h] == 0) {
        best = h;
        break;
      }
  }
  if (keep != kUnassigned) {
    const std::int64_t keep_cost = keep == fresh ? 0 : cost[keep];
    if (keep_cost == best_cost)
      return keep;
  }
  return best;
}

Allocation sweeten_partition(const std::vector<std::uint64_t>& co, std::uint64_t draws,
                             Allocation z, Rng& rng) {
  const std::size_t n = z.size();
  std::uint64_t current = binder_total(co, draws, z);
  bool improved = true;
  while (improved) {
    improved = false;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t i = n; i > 1; --i)
      std::swap(order[i - 1], order[rng.index(i)]);
    for (std::size_t i : order) {
      const std::size_t old = z[i];
      z[i] = kUnassigned;
      z[i] = best_label(co, draws, z, i, old);
      if (z[i] != old) {
        const std::uint64_t now = binder_total(co, draws, z);
        if (now < current) {
          current = now;
          improved = true;
        } else {
          z[i] = old;
        }
      }
    }
    z = canonical_allocation(z);
  }
  return z;
}

} // namespace

std::uint64_t binder_loss_total(std::span<const Allocation> z_draws, std::span<const std::size_t> z) {
  if (z_draws.empty())
    throw std::invalid_argument("no partition draws");
  return binder_total(co_clustering(z_draws), z_draws.size(), z);
}

Allocation partition_point_estimate(std::span<const Allocation> z_draws, Rng& rng) {
  if (z_draws.empty())
    throw std::invalid_argument("no partition draws");
  const std::vector<std::uint64_t> co = co_clustering(z_draws);
  const std::uint64_t draws = z_draws.size();
  const std::size_t n = z_draws.front().size();

  std::vector<Allocation> starts;
  constexpr int kRestarts = 4;
  for (int r = 0; r < kRestarts; ++r) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t i = n; i > 1; --i)
      std::swap(order[i - 1], order[rng.index(i)]);
    Allocation z(n, kUnassigned);
    for (std::size_t i : order)
      z[i] = best_label(co, draws, z, i, kUnassigned);
    starts.push_back(canonical_allocation(z));
  }
  const Allocation* best_draw = nullptr;
  std::uint64_t best_draw_loss = std::numeric_limits<std::uint64_t>::max();
  for (const auto& z : z_draws) {
    const std::uint64_t loss = binder_total(co, draws, z);
    if (loss < best_draw_loss) {
      best_draw_loss = loss;
      best_draw = &z;
    }
  }
  starts.push_back(canonical_allocation(*best_draw));

  Allocation best;
  std::uint64_t best_loss = std::numeric_limits<std::uint64_t>::max();
  for (auto& start : starts) {
    Allocation z = sweeten_partition(co, draws, std::move(start), rng);
    const std::uint64_t loss = binder_total(co, draws, z);
    if (loss < best_loss || (loss == best_loss && z < best)) {
      best_loss = loss;
      best = std::move(z);
    }
  }
  return best;
}

double nmi(std::span<const std::size_t> z1, std::span<const std::size_t> z2) {
  if (z1.size() != z2.size() || z1.empty())
    throw std::invalid_argument("nmi: partitions must be non-empty and of equal size");
  const Allocation a = canonical_allocation(z1);
  const Allocation b = canonical_allocation(z2);
  const std::size_t ka = block_count(a);
  const std::size_t kb = block_count(b);
  std::vector<double> joint(ka * kb, 0.0);
  std::vector<double> pa(ka, 0.0);
  std::vector<double> pb(kb, 0.0);
  const double n = static_cast<double>(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    joint[a[i] * kb + b[i]] += 1.0 / n;
    pa[a[i]] += 1.0 / n;
    pb[b[i]] += 1.0 / n;
  }
  const auto entropy = [](const std::vector<double>& p) {
    double h = 0.0;
    for (double x : p)
      if (x > 0.0)
        h -= x * std::log(x);
    return h;
  };
  const double ha = entropy(pa);
  const double hb = entropy(pb);
  if (ha == 0.0 && hb == 0.0)
    return 1.0;
  double mi = 0.0;
  for (std::size_t i = 0; i < ka; ++i)
    for (std::size_t j = 0; j < kb; ++j) {
      const double p = joint[i * kb + j];
      if (p > 0.0)
        mi += p * std::log(p / (pa[i] * pb[j]));
    }
  return std::clamp(mi / (0.5 * (ha + hb)), 0.0, 1.0);
}

double frobenius_discrepancy(const Graphs& graphs, const Permutation& pi) {
  const std::size_t n = graphs.size();
  if (pi.size() != n)
    throw std::invalid_argument("frobenius_discrepancy: size mismatch");
  std::size_t mismatches = 0;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v)
      mismatches += graphs.y1(u, v) != graphs.y2(pi[u], pi[v]);
  return std::sqrt(2.0 * static_cast<double>(mismatches));
}

std::vector<double> edge_frequencies(std::span<const ParentMatrix> parent_draws) {
  if (parent_draws.empty())
    throw std::invalid_argument("no parent draws");
  const std::size_t n = parent_draws.front().size();
  std::vector<double> freq;
  freq.reserve(n * (n - 1) / 2);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v) {
      std::size_t c = 0;
      for (const auto& y : parent_draws) {
        if (y.size() != n)
          throw std::invalid_argument("parent draws differ in size");
        c += y(u, v);
      }
      freq.push_back(static_cast<double>(c) / static_cast<double>(parent_draws.size()));
    }
  return freq;
}

std::optional<double> auc_scores(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size())
    throw std::invalid_argument("auc: size mismatch");
  const std::size_t m = scores.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  // Mid-ranks, summed over positives.
  double rank_sum = 0.0;
  std::size_t positives = 0;
  for (std::size_t i = 0; i < m;) {
    std::size_t j = i;
    while (j < m && scores[order[j]] == scores[order[i]])
      ++j;
    const double mid = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j));
    for (std::size_t t = i; t < j; ++t)
      if (labels[order[t]] != 0) {
        rank_sum += mid;
        ++positives;
      }
    i = j;
  }
  const std::size_t negatives = m - positives;
  if (positives == 0 || negatives == 0)
    return std::nullopt;
  const double p = static_cast<double>(positives);
  return (rank_sum - p * (p + 1.0) / 2.0) / (p * static_cast<double>(negatives));
}

std::optional<double> auc_parent(std::span<const ParentMatrix> parent_draws,
                                 const ParentMatrix& truth) {
  const std::vector<double> freq = edge_frequencies(parent_draws);
  const std::size_t n = truth.size();
  if (parent_draws.front().size() != n)
    throw std::invalid_argument("auc_parent: size mismatch");
  std::vector<int> labels;
  labels.reserve(freq.size());
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v)
      labels.push_back(truth(u, v) ? 1 : 0);
  return auc_scores(freq, labels);
}

} // namespace permatch
