#include "permatch/block_tracker.hpp"

#include <algorithm>
#include <stdexcept>

namespace permatch {

BlockTracker::BlockTracker(const SymmetricBinaryMatrix& y, std::span<const std::size_t> labels)
    : slot_(labels.begin(), labels.end()) {
  if (labels.size() != y.size())
    throw std::invalid_argument("BlockTracker: label count does not match matrix");
  std::size_t k = 0;
  for (std::size_t s : slot_)
    k = std::max(k, s + 1);
  grow(k);
  sizes_.assign(k, 0);
  for (std::size_t s : slot_)
    ++sizes_[s];
  const std::size_t n = y.size();
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v) {
      auto& t = y(u, v) ? m_ : m_bar_;
      t[slot_[u] * cap_ + slot_[v]] += 1;
      if (slot_[u] != slot_[v])
        t[slot_[v] * cap_ + slot_[u]] += 1;
    }
}

void BlockTracker::grow(std::size_t capacity) {
  if (capacity <= cap_)
    return;
  std::vector<std::int64_t> m(capacity * capacity, 0);
  std::vector<std::int64_t> m_bar(capacity * capacity, 0);
  for (std::size_t a = 0; a < cap_; ++a)
    for (std::size_t b = 0; b < cap_; ++b) {
      m[a * capacity + b] = m_[a * cap_ + b];
      m_bar[a * capacity + b] = m_bar_[a * cap_ + b];
    }
  m_.swap(m);
  m_bar_.swap(m_bar);
  cap_ = capacity;
}

std::vector<std::size_t> BlockTracker::active_slots() const {
  std::vector<std::size_t> out;
  for (std::size_t s = 0; s < sizes_.size(); ++s)
    if (sizes_[s] > 0)
      out.push_back(s);
  return out;
}

std::size_t BlockTracker::active_count() const {
  return static_cast<std::size_t>(
      std::count_if(sizes_.begin(), sizes_.end(), [](std::size_t s) { return s > 0; }));
}

void BlockTracker::links(const SymmetricBinaryMatrix& y, Node v, std::vector<std::int64_t>& r,
                         std::vector<std::int64_t>& r_bar) const {
  r.assign(sizes_.size(), 0);
  r_bar.assign(sizes_.size(), 0);
  const std::size_t n = slot_.size();
  for (std::size_t u = 0; u < n; ++u) {
    if (u == v || slot_[u] == npos)
      continue;
    if (y(v, u))
      ++r[slot_[u]];
    else
      ++r_bar[slot_[u]];
  }
}

void BlockTracker::shift_node(const SymmetricBinaryMatrix& y, Node v, std::size_t slot,
                              std::int64_t sign) {
  const std::size_t n = slot_.size();
  for (std::size_t u = 0; u < n; ++u) {
    if (u == v || slot_[u] == npos)
      continue;
    const std::size_t g = slot_[u];
    auto& t = y(v, u) ? m_ : m_bar_;
    t[slot * cap_ + g] += sign;
    if (g != slot)
      t[g * cap_ + slot] += sign;
  }
}

void BlockTracker::remove_node(const SymmetricBinaryMatrix& y, Node v) {
  const std::size_t s = slot_[v];
  if (s == npos)
    throw std::logic_error("BlockTracker: node already unassigned");
  slot_[v] = npos;
  shift_node(y, v, s, -1);
  --sizes_[s];
}

void BlockTracker::add_node(const SymmetricBinaryMatrix& y, Node v, std::size_t slot) {
  if (slot_[v] != npos)
    throw std::logic_error("BlockTracker: node already assigned");
  if (slot >= sizes_.size())
    throw std::out_of_range("BlockTracker: unknown slot");
  shift_node(y, v, slot, +1);
  slot_[v] = slot;
  ++sizes_[slot];
}

std::size_t BlockTracker::new_slot() {
  for (std::size_t s = 0; s < sizes_.size(); ++s)
    if (sizes_[s] == 0)
      return s;
  const std::size_t s = sizes_.size();
  if (s + 1 > cap_)
    grow(std::max<std::size_t>(2 * cap_, 4));
  sizes_.push_back(0);
  return s;
}

void BlockTracker::flip_pair(Node u, Node v, bool old_value) {
  const std::size_t a = slot_[u];
  const std::size_t b = slot_[v];
  auto& from = old_value ? m_ : m_bar_;
  auto& to = old_value ? m_bar_ : m_;
  from[a * cap_ + b] -= 1;
  to[a * cap_ + b] += 1;
  if (a != b) {
    from[b * cap_ + a] -= 1;
    to[b * cap_ + a] += 1;
  }
}

std::vector<std::size_t> BlockTracker::slots_by_least_member() const {
  std::vector<std::size_t> order;
  std::vector<char> seen(sizes_.size(), 0);
  for (std::size_t s : slot_)
    if (s != npos && !seen[s]) {
      seen[s] = 1;
      order.push_back(s);
    }
  return order;
}

BlockCounts BlockTracker::canonical_counts() const {
  const std::vector<std::size_t> order = slots_by_least_member();
  BlockCounts c(order.size());
  for (std::size_t j = 0; j < order.size(); ++j)
    for (std::size_t h = 0; h < order.size(); ++h) {
      c.m[j * c.k + h] = edges(order[j], order[h]);
      c.m_bar[j * c.k + h] = non_edges(order[j], order[h]);
    }
  return c;
}

std::vector<std::size_t> BlockTracker::canonical_sizes() const {
  std::vector<std::size_t> out;
  for (std::size_t s : slots_by_least_member())
    out.push_back(sizes_[s]);
  return out;
}

bool BlockTracker::consistent_with(const SymmetricBinaryMatrix& y) const {
  if (y.size() != slot_.size())
    return false;
  std::vector<std::size_t> sizes(sizes_.size(), 0);
  std::vector<std::int64_t> m(cap_ * cap_, 0);
  std::vector<std::int64_t> m_bar(cap_ * cap_, 0);
  const std::size_t n = slot_.size();
  for (std::size_t u = 0; u < n; ++u) {
    if (slot_[u] == npos)
      continue;
    ++sizes[slot_[u]];
    for (std::size_t v = u + 1; v < n; ++v) {
      if (slot_[v] == npos)
        continue;
      auto& t = y(u, v) ? m : m_bar;
      t[slot_[u] * cap_ + slot_[v]] += 1;
      if (slot_[u] != slot_[v])
        t[slot_[v] * cap_ + slot_[u]] += 1;
    }
  }
  return sizes == sizes_ && m == m_ && m_bar == m_bar_;
}

} // namespace permatch
