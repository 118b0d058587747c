#include "permatch/gibbs.hpp"

#include "permatch/config.hpp"
#include "permatch/rng.hpp"
#include "permatch/special_functions.hpp"

#include <array>
#include <atomic>
#include <cmath>
#include <iostream>
#include <limits>
#include <stdexcept>

namespace permatch {

namespace {

// [parent bit][observed bit agrees]
using PairTally = std::array<std::array<std::int64_t, 2>, 2>;

void add_pair(PairTally& t, bool parent_bit, bool observed, std::int64_t sign) {
  t[parent_bit][observed == parent_bit] += sign;
}

struct NoiseLogs {
  // [parent bit][agrees]
  std::array<std::array<double, 2>, 2> w;
  explicit NoiseLogs(const NoiseRates& r) {
    w[0][0] = std::log(r.alpha);
    w[0][1] = std::log1p(-r.alpha);
    w[1][0] = std::log(r.beta);
    w[1][1] = std::log1p(-r.beta);
  }
  double operator()(const PairTally& t) const {
    double s = 0.0;
    for (int q = 0; q < 2; ++q)
      for (int a = 0; a < 2; ++a)
        if (t[q][a] != 0)
          s += static_cast<double>(t[q][a]) * w[q][a];
    return s;
  }
};

std::vector<Node> random_order(std::size_t n, Rng& rng) {
  std::vector<Node> order(n);
  for (std::size_t i = 0; i < n; ++i)
    order[i] = static_cast<Node>(i);
  for (std::size_t i = n; i > 1; --i)
    std::swap(order[i - 1], order[rng.index(i)]);
  return order;
}

// Log weight of adding a node with links (r, r_bar) to each slot, for every
// active slot (indexed by slot) and for a fresh block.
struct SbmGain {
  std::vector<double> join;
  double fresh = 0.0;
};

SbmGain sbm_gain(const BlockTracker& blocks, const std::vector<std::size_t>& active,
                 const std::vector<std::int64_t>& r, const std::vector<std::int64_t>& r_bar,
                 double a, double b) {
  SbmGain g;
  g.join.assign(blocks.slot_count(), -std::numeric_limits<double>::infinity());
  const double base = log_beta(a, b);
  for (std::size_t s : active)
    if (r[s] + r_bar[s] > 0)
      g.fresh += log_beta(a + static_cast<double>(r[s]), b + static_cast<double>(r_bar[s])) - base;
  for (std::size_t h : active) {
    double v = 0.0;
    for (std::size_t s : active) {
      if (r[s] + r_bar[s] == 0)
        continue;
      const double m = static_cast<double>(blocks.edges(h, s));
      const double mb = static_cast<double>(blocks.non_edges(h, s));
      v += log_beta(a + m + static_cast<double>(r[s]), b + mb + static_cast<double>(r_bar[s])) -
           log_beta(a + m, b + mb);
    }
    g.join[h] = v;
  }
  return g;
}

// Prior predictive per seat for each active slot, and for a new cycle.
struct SeatWeights {
  std::vector<double> seat;
  double fresh = 0.0;
};

SeatWeights seat_weights(const BlockTracker& blocks, const std::vector<std::size_t>& active,
                         const EperpfFamily& family) {
  std::vector<std::size_t> lengths;
  lengths.reserve(active.size());
  for (std::size_t s : active)
    lengths.push_back(blocks.block_size(s));
  const PredictiveWeights w = predictive_weights(family, lengths);
  SeatWeights out;
  out.seat.assign(blocks.slot_count(), -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < active.size(); ++i)
    out.seat[active[i]] = w.per_cycle[i];
  out.fresh = w.new_cycle;
  return out;
}

// Graph-2 tally of the pairs whose term depends on where v is reinserted.
// `img`/`pre` describe the permutation with v deleted.
PairTally insertion_tally(const ChainState& s, const Graphs& graphs, Node v, Node target,
                          const std::vector<Node>& img, const std::vector<Node>& pre) {
  const std::size_t n = s.size();
  PairTally t{};
  const auto& y = s.parent;
  const auto& y2 = graphs.y2;
  if (target == v) {
    for (Node u = 0; u < n; ++u)
      if (u != v)
        add_pair(t, y(v, u), y2(v, img[u]), 1);
    return t;
  }
  const Node w = pre[target];
  for (Node u = 0; u < n; ++u) {
    if (u == v)
      continue;
    add_pair(t, y(v, u), y2(target, u == w ? v : img[u]), 1);
    if (u == w)
      continue;
    const bool yw = y(w, u);
    add_pair(t, yw, y2(v, img[u]), 1);
    add_pair(t, yw, y2(target, img[u]), -1);
  }
  return t;
}

struct MoveScratch {
  std::vector<Node> img;
  std::vector<Node> pre;
  std::vector<PairTally> tallies;
  std::vector<double> log_w;
};

// Removes v from the block tracker and scores the n candidates. Candidate i
// has target i for i != v; the candidate with target v opens a new cycle.
void score_candidates(ChainState& s, Node v, const Graphs& graphs, const Hyperparameters& hyper,
                      MoveScratch& scratch) {
  const std::size_t n = s.size();
  scratch.img = s.pi;
  scratch.pre = s.pi_inv;
  const Node w = s.pi_inv[v];
  const Node x = s.pi[v];
  if (w != v) {
    scratch.img[w] = x;
    scratch.pre[x] = w;
  }
  s.blocks.remove_node(s.parent, v);
  std::vector<std::int64_t> r;
  std::vector<std::int64_t> r_bar;
  s.blocks.links(s.parent, v, r, r_bar);
  const std::vector<std::size_t> active = s.blocks.active_slots();
  const SbmGain gain = sbm_gain(s.blocks, active, r, r_bar, hyper.a_xi, hyper.b_xi);
  const SeatWeights seats = seat_weights(s.blocks, active, s.family);
  const NoiseLogs noise(s.noise);

  scratch.tallies.resize(n);
  scratch.log_w.resize(n);
  for (Node t = 0; t < n; ++t) {
    scratch.tallies[t] = insertion_tally(s, graphs, v, t, scratch.img, scratch.pre);
    double lw = noise(scratch.tallies[t]);
    if (t == v) {
      lw += gain.fresh + seats.fresh;
    } else {
      const std::size_t h = s.blocks.slot_of(t);
      lw += gain.join[h] + seats.seat[h];
    }
    scratch.log_w[t] = lw;
  }
}

void apply_move(ChainState& s, Node v, Node target, const MoveScratch& scratch) {
  const Node w = s.pi_inv[v];
  const Node x = s.pi[v];
  if (w != v) {
    s.pi[w] = x;
    s.pi_inv[x] = w;
  }
  std::size_t slot = 0;
  if (target == v) {
    s.pi[v] = v;
    s.pi_inv[v] = v;
    slot = s.blocks.new_slot();
  } else {
    const Node host = s.pi_inv[target];
    s.pi[host] = v;
    s.pi_inv[v] = host;
    s.pi[v] = target;
    s.pi_inv[target] = v;
    slot = s.blocks.slot_of(target);
  }
  s.blocks.add_node(s.parent, v, slot);
  const PairTally& now = scratch.tallies[target];
  const PairTally& before = scratch.tallies[x];
  for (int q = 0; q < 2; ++q) {
    s.tally.e[q][1] += now[q][1] - before[q][1];
    s.tally.e_bar[q][1] += now[q][0] - before[q][0];
  }
}

std::atomic<bool> theta_warning_issued{false};

} // namespace

std::string to_string(InitMode mode) {
  switch (mode) {
  case InitMode::sbm:
    return "sbm";
  case InitMode::prior:
    return "prior";
  case InitMode::identity:
    return "identity";
  }
  return "sbm";
}

InitMode parse_init_mode(std::string_view text) {
  if (text == "sbm")
    return InitMode::sbm;
  if (text == "prior")
    return InitMode::prior;
  if (text == "identity")
    return InitMode::identity;
  throw std::invalid_argument("unknown init mode: " + std::string(text));
}

void SamplerConfig::validate() const {
  if (n_iter == 0)
    throw std::invalid_argument("n_iter must be positive");
  if (thin == 0)
    throw std::invalid_argument("thin must be at least 1");
  if (burn_in > n_iter)
    throw std::invalid_argument("burn_in exceeds n_iter");
  if (check_period == 0)
    throw std::invalid_argument("check_period must be positive");
  for (double x : {hyper.a0, hyper.b0, hyper.a1, hyper.b1, hyper.a_xi, hyper.b_xi})
    if (!(x > 0.0) || !std::isfinite(x))
      throw std::invalid_argument("hyperparameters must be positive");
  if (!(theta_shape > 0.0) || !(theta_rate > 0.0))
    throw std::invalid_argument("theta hyperprior parameters must be positive");
}

ChainState make_state(const Permutation& pi, ParentMatrix parent, NoiseRates noise,
                      const EperpfFamily& family, const Graphs& graphs) {
  const std::size_t n = pi.size();
  if (parent.size() != n || graphs.size() != n)
    throw std::invalid_argument("make_state: size mismatch");
  validate_noise(noise);
  ChainState s;
  s.pi.assign(pi.images().begin(), pi.images().end());
  s.pi_inv.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    s.pi_inv[s.pi[i]] = static_cast<Node>(i);
  s.parent = std::move(parent);
  s.noise = noise;
  s.family = family;
  s.blocks = BlockTracker(s.parent, canonical_cycles(pi).z);
  s.tally = edge_exponents(s.parent, graphs, pi);
  return s;
}

void verify_state(const ChainState& state, const Graphs& graphs) {
  const Permutation pi = state.permutation();
  for (std::size_t i = 0; i < state.size(); ++i)
    if (state.pi_inv[state.pi[i]] != i)
      throw std::logic_error("chain state: inverse permutation out of sync");
  if (!(edge_exponents(state.parent, graphs, pi) == state.tally))
    throw std::logic_error("chain state: exponent tally drifted from recount");
  if (!state.blocks.consistent_with(state.parent))
    throw std::logic_error("chain state: block counts drifted from recount");
  const CycleDecomposition cd = canonical_cycles(pi);
  if (!(state.blocks.canonical_counts() == block_counts(state.parent, cd.z)) ||
      state.blocks.canonical_sizes() != cd.lengths)
    throw std::logic_error("chain state: blocks do not follow the cycles of pi");
}

Allocation sbm_partition(const SymmetricBinaryMatrix& y, const EperpfFamily& family,
                         double a_xi, double b_xi, std::size_t sweeps, Rng& rng) {
  const std::size_t n = y.size();
  std::vector<std::size_t> labels(n);
  for (std::size_t i = 0; i < n; ++i)
    labels[i] = i;
  BlockTracker blocks(y, labels);
  std::vector<std::int64_t> r;
  std::vector<std::int64_t> r_bar;
  std::vector<double> log_w;
  std::vector<std::size_t> choice;
  // Keep the highest-scoring partition visited.
  Allocation best = canonical_allocation(blocks.slots());
  double best_score = -std::numeric_limits<double>::infinity();
  for (std::size_t sweep = 0; sweep < sweeps; ++sweep) {
    for (Node v : random_order(n, rng)) {
      blocks.remove_node(y, v);
      blocks.links(y, v, r, r_bar);
      const std::vector<std::size_t> active = blocks.active_slots();
      const SbmGain gain = sbm_gain(blocks, active, r, r_bar, a_xi, b_xi);
      const SeatWeights seats = seat_weights(blocks, active, family);
      log_w.clear();
      choice.clear();
      for (std::size_t h : active) {
        log_w.push_back(std::log(static_cast<double>(blocks.block_size(h))) + seats.seat[h] +
                        gain.join[h]);
        choice.push_back(h);
      }
      log_w.push_back(seats.fresh + gain.fresh);
      const std::size_t pick = rng.categorical_log(log_w);
      const std::size_t slot = pick < choice.size() ? choice[pick] : blocks.new_slot();
      blocks.add_node(y, v, slot);
    }
    const double score = log_eppf(family, blocks.canonical_sizes()) +
                         log_marginal_sbm(blocks.canonical_counts(), a_xi, b_xi);
    if (score > best_score) {
      best_score = score;
      best = canonical_allocation(blocks.slots());
    }
  }
  return best;
}

ChainState init_state(const Graphs& graphs, const SamplerConfig& config, Rng& rng) {
  const std::size_t n = graphs.size();
  if (n == 0)
    throw std::invalid_argument("graphs have no nodes");
  Permutation pi;
  switch (config.init) {
  case InitMode::sbm: {
    const Allocation z = sbm_partition(graphs.y1, config.family, config.hyper.a_xi,
                                       config.hyper.b_xi, config.init_sweeps, rng);
    pi = uniform_given_partition(z, rng);
    break;
  }
  case InitMode::prior:
    pi = sample_pa_gcrp(config.family, n, rng);
    break;
  case InitMode::identity:
    pi = Permutation::identity(n);
    break;
  }
  ParentMatrix parent(n);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v) {
      const int votes = int(graphs.y1(u, v)) + int(graphs.y2(pi[u], pi[v]));
      bool bit = votes == 2;
      if (votes == 1)
        bit = rng.bernoulli(0.5);
      parent.set(u, v, bit);
    }
  NoiseRates noise;
  noise.alpha = sample_truncated_beta(0.5, config.hyper.a0, config.hyper.b0, rng);
  noise.beta = sample_truncated_beta(0.5, config.hyper.a1, config.hyper.b1, rng);
  return make_state(pi, std::move(parent), noise, config.family, graphs);
}

std::vector<double> node_move_distribution(const ChainState& state, Node v, const Graphs& graphs,
                                           const Hyperparameters& hyper) {
  if (v >= state.size())
    throw std::out_of_range("node_move: node out of range");
  ChainState copy = state;
  MoveScratch scratch;
  score_candidates(copy, v, graphs, hyper, scratch);
  std::vector<double> out;
  out.reserve(state.size());
  for (Node t = 0; t < state.size(); ++t)
    if (t != v)
      out.push_back(scratch.log_w[t]);
  out.push_back(scratch.log_w[v]);
  const double total = log_sum_exp(out);
  for (double& x : out)
    x -= total;
  return out;
}

void node_move(ChainState& state, Node v, const Graphs& graphs, const Hyperparameters& hyper,
               Rng& rng) {
  if (v >= state.size())
    throw std::out_of_range("node_move: node out of range");
  thread_local MoveScratch scratch;
  score_candidates(state, v, graphs, hyper, scratch);
  const auto target = static_cast<Node>(rng.categorical_log(scratch.log_w));
  apply_move(state, v, target, scratch);
}

void parent_row_update(ChainState& state, Node v, const Graphs& graphs,
                       const Hyperparameters& hyper, Rng& rng) {
  const std::size_t n = state.size();
  if (v >= n)
    throw std::out_of_range("parent_row_update: node out of range");
  const double l_keep = std::log1p(-state.noise.beta);
  const double l_lose = std::log(state.noise.beta);
  const double l_spur = std::log(state.noise.alpha);
  const double l_quiet = std::log1p(-state.noise.alpha);
  const std::size_t sv = state.blocks.slot_of(v);
  for (Node u = 0; u < n; ++u) {
    if (u == v)
      continue;
    const bool old = state.parent(v, u);
    const std::size_t su = state.blocks.slot_of(u);
    const double m = static_cast<double>(state.blocks.edges(sv, su) - (old ? 1 : 0));
    const double m_bar = static_cast<double>(state.blocks.non_edges(sv, su) - (old ? 0 : 1));
    const bool o1 = graphs.y1(v, u);
    const bool o2 = graphs.y2(state.pi[v], state.pi[u]);
    const double ones = double(o1) + double(o2);
    const double lp1 = ones * l_keep + (2.0 - ones) * l_lose + std::log(hyper.a_xi + m);
    const double lp0 = ones * l_spur + (2.0 - ones) * l_quiet + std::log(hyper.b_xi + m_bar);
    const bool bit = rng.uniform() * (1.0 + std::exp(lp0 - lp1)) < 1.0;
    if (bit == old)
      continue;
    state.blocks.flip_pair(v, u, old);
    state.parent.set(v, u, bit);
    for (int l = 0; l < 2; ++l) {
      const bool o = l == 0 ? o1 : o2;
      (o == old ? state.tally.e : state.tally.e_bar)[old][l] -= 1;
      (o == bit ? state.tally.e : state.tally.e_bar)[bit][l] += 1;
    }
  }
}

void noise_update(ChainState& state, const Hyperparameters& hyper, Rng& rng) {
  const auto& t = state.tally;
  const auto d = [](std::int64_t x) { return static_cast<double>(x); };
  state.noise.alpha = sample_truncated_beta(0.5, hyper.a0 + d(t.e_bar[0][0] + t.e_bar[0][1]),
                                            hyper.b0 + d(t.e[0][0] + t.e[0][1]), rng);
  state.noise.beta = sample_truncated_beta(0.5, hyper.a1 + d(t.e_bar[1][0] + t.e_bar[1][1]),
                                           hyper.b1 + d(t.e[1][0] + t.e[1][1]), rng);
}

void theta_update(ChainState& state, double shape, double rate, Rng& rng) {
  const auto* dp = std::get_if<Dirichlet>(&state.family.params());
  if (dp == nullptr) {
    if (!theta_warning_issued.exchange(true))
      std::clog << "warning: concentration update only available for the dirichlet family; "
                   "keeping hyperparameters fixed\n";
    return;
  }
  const auto n = static_cast<double>(state.size());
  const auto k = static_cast<double>(state.cycle_count());
  const double eta = rng.beta(dp->theta + 1.0, n);
  const double post_rate = rate - std::log(eta);
  const double odds = (shape + k - 1.0) / (n * post_rate);
  const double theta = rng.uniform() < odds / (1.0 + odds) ? rng.gamma(shape + k, post_rate)
                                                           : rng.gamma(shape + k - 1.0, post_rate);
  state.family = EperpfFamily::dirichlet(std::max(theta, std::numeric_limits<double>::min()));
}

double current_theta(const ChainState& state) {
  if (const auto* p = std::get_if<Dirichlet>(&state.family.params()))
    return p->theta;
  if (const auto* p = std::get_if<PitmanYor>(&state.family.params()))
    return p->theta;
  return std::numeric_limits<double>::quiet_NaN();
}

double state_log_joint(const ChainState& state, const Hyperparameters& hyper) {
  return log_joint(state.tally, state.blocks.canonical_counts(), state.blocks.canonical_sizes(),
                   hyper, state.family);
}

void sweep(ChainState& state, const Graphs& graphs, const SamplerConfig& config, Rng& rng) {
  for (Node v : random_order(state.size(), rng)) {
    node_move(state, v, graphs, config.hyper, rng);
    parent_row_update(state, v, graphs, config.hyper, rng);
  }
  noise_update(state, config.hyper, rng);
  if (config.theta_hyperprior)
    theta_update(state, config.theta_shape, config.theta_rate, rng);
}

std::size_t expected_draw_count(const SamplerConfig& config) {
  return (config.n_iter - config.burn_in) / config.thin;
}

DrawArchive run(const Graphs& graphs, const SamplerConfig& config, Rng& rng) {
  config.validate();
  DrawArchive archive;
  archive.seed = config.seed;
  archive.config_text = format_sampler_config(config);
  archive.config_hash = fnv1a_hash(archive.config_text);
  ChainState state = init_state(graphs, config, rng);
  archive.trace.reserve(config.n_iter);
  for (std::size_t iter = 1; iter <= config.n_iter; ++iter) {
    sweep(state, graphs, config, rng);
    if (iter % config.check_period == 0)
      verify_state(state, graphs);
    archive.trace.push_back({iter, state.noise.alpha, state.noise.beta, current_theta(state),
                             state_log_joint(state, config.hyper), state.cycle_count()});
    if (iter > config.burn_in && (iter - config.burn_in) % config.thin == 0) {
      archive.draw_iters.push_back(iter);
      archive.pi.push_back(state.permutation());
      if (config.save_parent)
        archive.parent.push_back(state.parent);
    }
  }
  return archive;
}

} // namespace permatch
