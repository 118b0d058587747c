#ifndef PERMATCH_BLOCK_TRACKER_HPP
#define PERMATCH_BLOCK_TRACKER_HPP

#include "permatch/csbm.hpp"

#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

namespace permatch {

/// Incremental edge/non-edge counts between the blocks of a changing
/// partition. Blocks live in numbered slots; an emptied slot is recycled by
/// the next call to new_slot(). Nodes can be temporarily unassigned.
class BlockTracker {
public:
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

  BlockTracker() = default;
  /// Every node starts in slot labels[u]; labels need not be canonical.
  BlockTracker(const SymmetricBinaryMatrix& y, std::span<const std::size_t> labels);

  std::size_t node_count() const noexcept { return slot_.size(); }
  std::size_t slot_of(Node u) const { return slot_[u]; }
  std::size_t slot_count() const noexcept { return sizes_.size(); }
  std::size_t block_size(std::size_t slot) const { return sizes_[slot]; }
  std::int64_t edges(std::size_t a, std::size_t b) const { return m_[a * cap_ + b]; }
  std::int64_t non_edges(std::size_t a, std::size_t b) const { return m_bar_[a * cap_ + b]; }

  /// Non-empty slots in ascending order.
  std::vector<std::size_t> active_slots() const;
  std::size_t active_count() const;

  /// Edges and non-edges from v to the assigned members of every slot
  /// (v itself excluded). Vectors are resized to slot_count().
  void links(const SymmetricBinaryMatrix& y, Node v, std::vector<std::int64_t>& r,
             std::vector<std::int64_t>& r_bar) const;

  void remove_node(const SymmetricBinaryMatrix& y, Node v);
  void add_node(const SymmetricBinaryMatrix& y, Node v, std::size_t slot);
  /// An empty slot, growing storage if none is free.
  std::size_t new_slot();

  /// Moves the pair (u, v) between the edge and non-edge tallies. Call with the
  /// pair's previous value before changing the matrix entry.
  void flip_pair(Node u, Node v, bool old_value);

  /// Slot of every node, npos when unassigned.
  const std::vector<std::size_t>& slots() const noexcept { return slot_; }
  /// Counts with blocks ordered by their least member.
  BlockCounts canonical_counts() const;
  /// Sizes of non-empty slots, ordered by least member.
  std::vector<std::size_t> canonical_sizes() const;

  /// Integer comparison against a recount of `y` over the same assignment.
  bool consistent_with(const SymmetricBinaryMatrix& y) const;

private:
  void grow(std::size_t capacity);
  void shift_node(const SymmetricBinaryMatrix& y, Node v, std::size_t slot, std::int64_t sign);
  std::vector<std::size_t> slots_by_least_member() const;

  std::vector<std::size_t> slot_;
  std::vector<std::size_t> sizes_;
  std::size_t cap_ = 0;
  std::vector<std::int64_t> m_;
  std::vector<std::int64_t> m_bar_;
};

} // namespace permatch

#endif
