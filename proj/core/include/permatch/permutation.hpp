#ifndef PERMATCH_PERMUTATION_HPP
#define PERMATCH_PERMUTATION_HPP

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace permatch {

/// Zero-based node index. Text formats are one-based.
using Node = std::uint32_t;

/// Cluster labels in order of appearance, zero-based: the first node is in
/// block 0 and every new label is the smallest unused one.
using Allocation = std::vector<std::size_t>;

/// A bijection of {0..n-1} stored in one-line form.
class Permutation {
public:
  Permutation() = default;

  /// Takes zero-based images; throws std::invalid_argument unless bijective.
  explicit Permutation(std::vector<Node> images);

  static Permutation identity(std::size_t n);

  /// Parses whitespace separated one-based images, e.g. "4 1 3 2".
  static Permutation parse_one_line(std::string_view text);

  /// Parses one-based cycle notation such as "(142)(3)" or "(1 4 2)(3)".
  /// Elements are single digits unless some cycle separates its elements by
  /// spaces or commas, or n > 9. Elements not mentioned are fixed points when `n` exceeds the
  /// largest element seen.
  static Permutation parse_cycles(std::string_view text, std::size_t n = 0);

  std::size_t size() const noexcept { return images_.size(); }
  Node operator()(Node i) const { return images_[i]; }
  Node operator[](std::size_t i) const { return images_[i]; }
  std::span<const Node> images() const noexcept { return images_; }

  bool is_identity() const noexcept;

  /// One-based one-line text, e.g. "4 1 3 2".
  std::string to_one_line() const;
  /// Canonical one-based cycle notation, e.g. "(142)(3)". Elements are
  /// space-separated when n > 9.
  std::string to_cycle_string() const;

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation&, const Permutation&) = default;

private:
  std::vector<Node> images_;
};

struct CycleDecomposition {
  /// Each cycle starts with its least element; cycles sorted by first element.
  std::vector<std::vector<Node>> cycles;
  /// Cycle ordinal of every element (order of appearance).
  Allocation z;
  /// type[i] is the number of cycles of length i + 1.
  std::vector<std::size_t> type;
  /// Cycle lengths in canonical cycle order.
  std::vector<std::size_t> lengths;

  std::size_t count() const noexcept { return cycles.size(); }
};

/// Permutation of a subset of {0..n-1}. The full-length image and preimage
/// arrays are kept so that node labels never need reindexing.
class SubsetPermutation {
public:
  SubsetPermutation() = default;
  explicit SubsetPermutation(const Permutation& pi);

  /// Identity on `members` inside a universe of `universe` nodes.
  static SubsetPermutation identity_on(std::size_t universe, std::span<const Node> members);

  std::size_t universe() const noexcept { return image_.size(); }
  std::size_t size() const noexcept { return size_; }
  bool contains(Node u) const { return member_[u] != 0; }
  Node image(Node u) const { return image_[u]; }
  Node preimage(Node u) const { return preimage_[u]; }
  bool full() const noexcept { return size_ == image_.size(); }

  /// Members in ascending order.
  std::vector<Node> members() const;

  /// Removes `v` from the cycle representation.
  SubsetPermutation without(Node v) const;
  /// Inserts `v` so that it maps to `target` (`target == v` opens a new
  /// fixed point). The preimage of `target` is redirected to `v`.
  SubsetPermutation with(Node v, Node target) const;

  /// Requires full support.
  Permutation to_permutation() const;

  /// Cycle ordinal (order of appearance over members) of every member;
  /// entries of non-members are left at SIZE_MAX.
  Allocation cycle_labels() const;
  std::size_t cycle_count() const;

  std::string to_cycle_string() const;

  friend bool operator==(const SubsetPermutation& a, const SubsetPermutation& b);

private:
  std::vector<Node> image_;
  std::vector<Node> preimage_;
  std::vector<char> member_;
  std::size_t size_ = 0;
};

/// One element of an insertion set: `perm` maps the inserted node to `target`.
struct Insertion {
  SubsetPermutation perm;
  /// Zero-based cycle ordinal of the inserted node in `perm`.
  std::size_t cycle_ordinal = 0;
  Node target = 0;
};

/// result(i) = pi(sigma(i)).
Permutation compose(const Permutation& sigma, const Permutation& pi);
Permutation inverse(const Permutation& pi);
CycleDecomposition canonical_cycles(const Permutation& pi);
/// sigma^-1 . pi . sigma, i.e. the relabeling of pi's cycles by sigma.
Permutation conjugate(const Permutation& pi, const Permutation& sigma);
/// Drops the largest element from the cycle representation.
Permutation delete_last(const Permutation& sigma);
SubsetPermutation delete_node(const Permutation& pi, Node v);
/// Every way of inserting `v` into `sigma`: targets ascending, `v` itself last.
std::vector<Insertion> insertion_set(const SubsetPermutation& sigma, Node v);

std::size_t cycle_count(const Permutation& pi);
/// Minimum number of transpositions, n - k(sigma^-1 . pi).
std::size_t cayley_distance(const Permutation& pi, const Permutation& sigma);
std::size_t cayley_distance(const SubsetPermutation& pi, const SubsetPermutation& sigma);
/// Number of positions where the images differ.
std::size_t hamming_distance(const Permutation& pi, const Permutation& sigma);

/// Relabels an arbitrary labeling into order of appearance.
Allocation canonical_allocation(std::span<const std::size_t> labels);
bool is_canonical_allocation(std::span<const std::size_t> z);
std::size_t block_count(std::span<const std::size_t> z);
/// Block sizes indexed by label.
std::vector<std::size_t> block_sizes(std::span<const std::size_t> z);
/// One-based whitespace separated labels.
std::string allocation_to_string(std::span<const std::size_t> z);
Allocation parse_allocation(std::string_view text);

} // namespace permatch

#endif
