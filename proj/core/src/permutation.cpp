#include "permatch/permutation.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace permatch {

namespace {

constexpr std::size_t kUnset = std::numeric_limits<std::size_t>::max();

void check_same_size(std::size_t a, std::size_t b) {
  if (a != b)
    throw std::invalid_argument("permutation size mismatch: " + std::to_string(a) + " vs " +
                                std::to_string(b));
}

std::vector<long long> parse_integers(std::string_view text) {
  std::vector<long long> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && (std::isspace(static_cast<unsigned char>(text[i])) || text[i] == ','))
      ++i;
    if (i == text.size())
      break;
    long long value = 0;
    auto [ptr, ec] = std::from_chars(text.data() + i, text.data() + text.size(), value);
    if (ec != std::errc())
      throw std::invalid_argument("malformed integer in \"" + std::string(text) + "\"");
    out.push_back(value);
    i = static_cast<std::size_t>(ptr - text.data());
  }
  return out;
}

void append_cycle_element(std::string& out, Node u, bool spaced, bool first) {
  if (spaced && !first)
    out += ' ';
  out += std::to_string(u + 1);
}

} // namespace

Permutation::Permutation(std::vector<Node> images) : images_(std::move(images)) {
  std::vector<char> seen(images_.size(), 0);
  for (Node x : images_) {
    if (x >= images_.size() || seen[x])
      throw std::invalid_argument("not a bijection");
    seen[x] = 1;
  }
}

Permutation Permutation::identity(std::size_t n) {
  std::vector<Node> images(n);
  for (std::size_t i = 0; i < n; ++i)
    images[i] = static_cast<Node>(i);
  return Permutation(std::move(images));
}

Permutation Permutation::parse_one_line(std::string_view text) {
  auto values = parse_integers(text);
  std::vector<Node> images;
  images.reserve(values.size());
  for (long long v : values) {
    if (v < 1 || v > static_cast<long long>(values.size()))
      throw std::invalid_argument("one-line entry out of range: " + std::to_string(v));
    images.push_back(static_cast<Node>(v - 1));
  }
  return Permutation(std::move(images));
}

Permutation Permutation::parse_cycles(std::string_view text, std::size_t n) {
  std::vector<std::vector<long long>> cycles;
  std::size_t i = 0;
  long long largest = 0;
  // Multi-digit elements need separators, so one separated cycle (or n > 9)
  // switches every cycle to whitespace-separated parsing.
  bool all_separated = n > 9;
  for (std::size_t open = text.find('('); open != std::string_view::npos && !all_separated;
       open = text.find('(', open + 1)) {
    const std::size_t close = text.find(')', open);
    const std::size_t sep = text.find_first_of(" ,\t", open);
    all_separated = sep != std::string_view::npos && sep < close;
  }
  while (i < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    if (text[i] != '(')
      throw std::invalid_argument("expected '(' in cycle notation");
    auto close = text.find(')', i);
    if (close == std::string_view::npos)
      throw std::invalid_argument("unterminated cycle");
    auto body = text.substr(i + 1, close - i - 1);
    std::vector<long long> cycle;
    if (all_separated) {
      cycle = parse_integers(body);
    } else {
      for (char c : body) {
        if (!std::isdigit(static_cast<unsigned char>(c)))
          throw std::invalid_argument("bad cycle element");
        cycle.push_back(c - '0');
      }
    }
    if (cycle.empty())
      throw std::invalid_argument("empty cycle");
    for (long long e : cycle) {
      if (e < 1)
        throw std::invalid_argument("cycle elements are one-based");
      largest = std::max(largest, e);
    }
    cycles.push_back(std::move(cycle));
    i = close + 1;
  }
  std::size_t size = std::max<std::size_t>(n, static_cast<std::size_t>(largest));
  std::vector<Node> images(size, std::numeric_limits<Node>::max());
  for (const auto& cycle : cycles) {
    for (std::size_t j = 0; j < cycle.size(); ++j) {
      auto from = static_cast<std::size_t>(cycle[j] - 1);
      auto to = static_cast<Node>(cycle[(j + 1) % cycle.size()] - 1);
      if (from >= size || images[from] != std::numeric_limits<Node>::max())
        throw std::invalid_argument("element repeated in cycle notation");
      images[from] = to;
    }
  }
  for (std::size_t u = 0; u < size; ++u)
    if (images[u] == std::numeric_limits<Node>::max())
      images[u] = static_cast<Node>(u);
  return Permutation(std::move(images));
}

bool Permutation::is_identity() const noexcept {
  for (std::size_t i = 0; i < images_.size(); ++i)
    if (images_[i] != i)
      return false;
  return true;
}

std::string Permutation::to_one_line() const {
  std::string out;
  for (std::size_t i = 0; i < images_.size(); ++i) {
    if (i)
      out += ' ';
    out += std::to_string(images_[i] + 1);
  }
  return out;
}

std::string Permutation::to_cycle_string() const {
  return SubsetPermutation(*this).to_cycle_string();
}

// ---------------------------------------------------------------------------

SubsetPermutation::SubsetPermutation(const Permutation& pi)
    : image_(pi.images().begin(), pi.images().end()), preimage_(pi.size()),
      member_(pi.size(), 1), size_(pi.size()) {
  for (std::size_t u = 0; u < pi.size(); ++u)
    preimage_[pi[u]] = static_cast<Node>(u);
}

SubsetPermutation SubsetPermutation::identity_on(std::size_t universe,
                                                 std::span<const Node> members) {
  SubsetPermutation out;
  out.image_.resize(universe);
  out.preimage_.resize(universe);
  out.member_.assign(universe, 0);
  for (std::size_t u = 0; u < universe; ++u)
    out.image_[u] = out.preimage_[u] = static_cast<Node>(u);
  for (Node u : members) {
    if (u >= universe || out.member_[u])
      throw std::invalid_argument("bad subset member");
    out.member_[u] = 1;
    ++out.size_;
  }
  return out;
}

std::vector<Node> SubsetPermutation::members() const {
  std::vector<Node> out;
  out.reserve(size_);
  for (std::size_t u = 0; u < image_.size(); ++u)
    if (member_[u])
      out.push_back(static_cast<Node>(u));
  return out;
}

SubsetPermutation SubsetPermutation::without(Node v) const {
  if (v >= universe() || !member_[v])
    throw std::out_of_range("node " + std::to_string(v + 1) + " not in support");
  SubsetPermutation out = *this;
  Node w = preimage_[v];
  Node t = image_[v];
  if (w != v) {
    out.image_[w] = t;
    out.preimage_[t] = w;
  }
  out.image_[v] = out.preimage_[v] = v;
  out.member_[v] = 0;
  --out.size_;
  return out;
}

SubsetPermutation SubsetPermutation::with(Node v, Node target) const {
  if (v >= universe() || member_[v])
    throw std::invalid_argument("node " + std::to_string(v + 1) + " already in support");
  if (target != v && (target >= universe() || !member_[target]))
    throw std::invalid_argument("insertion target not in support");
  SubsetPermutation out = *this;
  out.member_[v] = 1;
  ++out.size_;
  if (target == v) {
    out.image_[v] = out.preimage_[v] = v;
    return out;
  }
  Node w = preimage_[target];
  out.image_[w] = v;
  out.preimage_[v] = w;
  out.image_[v] = target;
  out.preimage_[target] = v;
  return out;
}

Permutation SubsetPermutation::to_permutation() const {
  if (!full())
    throw std::logic_error("subset permutation does not cover its universe");
  return Permutation(image_);
}

Allocation SubsetPermutation::cycle_labels() const {
  Allocation labels(image_.size(), kUnset);
  std::size_t next = 0;
  for (std::size_t u = 0; u < image_.size(); ++u) {
    if (!member_[u] || labels[u] != kUnset)
      continue;
    Node x = static_cast<Node>(u);
    do {
      labels[x] = next;
      x = image_[x];
    } while (x != u);
    ++next;
  }
  return labels;
}

std::size_t SubsetPermutation::cycle_count() const {
  std::vector<char> seen(image_.size(), 0);
  std::size_t k = 0;
  for (std::size_t u = 0; u < image_.size(); ++u) {
    if (!member_[u] || seen[u])
      continue;
    ++k;
    for (Node x = static_cast<Node>(u); !seen[x]; x = image_[x])
      seen[x] = 1;
  }
  return k;
}

std::string SubsetPermutation::to_cycle_string() const {
  bool spaced = image_.size() > 9;
  std::vector<char> seen(image_.size(), 0);
  std::string out;
  for (std::size_t u = 0; u < image_.size(); ++u) {
    if (!member_[u] || seen[u])
      continue;
    out += '(';
    bool first = true;
    for (Node x = static_cast<Node>(u); !seen[x]; x = image_[x]) {
      seen[x] = 1;
      append_cycle_element(out, x, spaced, first);
      first = false;
    }
    out += ')';
  }
  return out;
}

bool operator==(const SubsetPermutation& a, const SubsetPermutation& b) {
  if (a.universe() != b.universe() || a.size_ != b.size_ || a.member_ != b.member_)
    return false;
  for (std::size_t u = 0; u < a.universe(); ++u)
    if (a.member_[u] && a.image_[u] != b.image_[u])
      return false;
  return true;
}

// ---------------------------------------------------------------------------

Permutation compose(const Permutation& sigma, const Permutation& pi) {
  check_same_size(sigma.size(), pi.size());
  std::vector<Node> images(pi.size());
  for (std::size_t i = 0; i < pi.size(); ++i)
    images[i] = pi[sigma[i]];
  return Permutation(std::move(images));
}

Permutation inverse(const Permutation& pi) {
  std::vector<Node> images(pi.size());
  for (std::size_t i = 0; i < pi.size(); ++i)
    images[pi[i]] = static_cast<Node>(i);
  return Permutation(std::move(images));
}

CycleDecomposition canonical_cycles(const Permutation& pi) {
  CycleDecomposition out;
  const std::size_t n = pi.size();
  out.z.assign(n, kUnset);
  out.type.assign(n, 0);
  for (std::size_t u = 0; u < n; ++u) {
    if (out.z[u] != kUnset)
      continue;
    std::vector<Node> cycle;
    Node x = static_cast<Node>(u);
    do {
      out.z[x] = out.cycles.size();
      cycle.push_back(x);
      x = pi[x];
    } while (x != u);
    out.lengths.push_back(cycle.size());
    ++out.type[cycle.size() - 1];
    out.cycles.push_back(std::move(cycle));
  }
  return out;
}

Permutation conjugate(const Permutation& pi, const Permutation& sigma) {
  return compose(compose(inverse(sigma), pi), sigma);
}

Permutation delete_last(const Permutation& sigma) {
  if (sigma.size() < 2)
    throw std::invalid_argument("cannot delete the only element");
  const Node last = static_cast<Node>(sigma.size() - 1);
  std::vector<Node> images(sigma.images().begin(), sigma.images().end() - 1);
  for (auto& x : images)
    if (x == last)
      x = sigma[last];
  return Permutation(std::move(images));
}

SubsetPermutation delete_node(const Permutation& pi, Node v) {
  if (v >= pi.size())
    throw std::out_of_range("node out of range");
  return SubsetPermutation(pi).without(v);
}

std::vector<Insertion> insertion_set(const SubsetPermutation& sigma, Node v) {
  if (v >= sigma.universe())
    throw std::out_of_range("node out of range");
  if (sigma.contains(v))
    throw std::invalid_argument("node " + std::to_string(v + 1) + " already in support");

  // Cycle minima of sigma; inserting v into a cycle can only lower its minimum.
  const Allocation labels = sigma.cycle_labels();
  std::vector<Node> minima;
  for (Node u : sigma.members())
    if (labels[u] == minima.size())
      minima.push_back(u);

  auto ordinal_with_min = [&](std::size_t own_label, Node new_min) {
    std::size_t rank = 0;
    for (std::size_t c = 0; c < minima.size(); ++c)
      if (c != own_label && minima[c] < new_min)
        ++rank;
    return rank;
  };

  std::vector<Insertion> out;
  out.reserve(sigma.size() + 1);
  for (Node u : sigma.members()) {
    std::size_t label = labels[u];
    Node new_min = std::min(minima[label], v);
    out.push_back({sigma.with(v, u), ordinal_with_min(label, new_min), u});
  }
  out.push_back({sigma.with(v, v), ordinal_with_min(kUnset, v), v});
  return out;
}

std::size_t cycle_count(const Permutation& pi) {
  std::vector<char> seen(pi.size(), 0);
  std::size_t k = 0;
  for (std::size_t u = 0; u < pi.size(); ++u) {
    if (seen[u])
      continue;
    ++k;
    for (Node x = static_cast<Node>(u); !seen[x]; x = pi[x])
      seen[x] = 1;
  }
  return k;
}

std::size_t cayley_distance(const Permutation& pi, const Permutation& sigma) {
  check_same_size(pi.size(), sigma.size());
  // k(sigma^-1 . pi) where (sigma^-1 . pi)(i) = pi(sigma^-1(i)).
  return pi.size() - cycle_count(compose(inverse(sigma), pi));
}

std::size_t cayley_distance(const SubsetPermutation& pi, const SubsetPermutation& sigma) {
  check_same_size(pi.universe(), sigma.universe());
  std::size_t k = 0;
  std::vector<char> seen(pi.universe(), 0);
  for (Node u : pi.members()) {
    if (!sigma.contains(u))
      throw std::invalid_argument("subset permutations have different supports");
    if (seen[u])
      continue;
    ++k;
    for (Node x = u; !seen[x]; x = pi.image(sigma.preimage(x)))
      seen[x] = 1;
  }
  if (pi.size() != sigma.size())
    throw std::invalid_argument("subset permutations have different supports");
  return pi.size() - k;
}

std::size_t hamming_distance(const Permutation& pi, const Permutation& sigma) {
  check_same_size(pi.size(), sigma.size());
  std::size_t d = 0;
  for (std::size_t i = 0; i < pi.size(); ++i)
    d += pi[i] != sigma[i];
  return d;
}

// ---------------------------------------------------------------------------

Allocation canonical_allocation(std::span<const std::size_t> labels) {
  Allocation out(labels.size());
  std::vector<std::pair<std::size_t, std::size_t>> seen;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto it = std::find_if(seen.begin(), seen.end(),
                           [&](const auto& p) { return p.first == labels[i]; });
    if (it == seen.end()) {
      seen.emplace_back(labels[i], seen.size());
      out[i] = seen.size() - 1;
    } else {
      out[i] = it->second;
    }
  }
  return out;
}

bool is_canonical_allocation(std::span<const std::size_t> z) {
  std::size_t next = 0;
  for (std::size_t label : z) {
    if (label > next)
      return false;
    if (label == next)
      ++next;
  }
  return true;
}

std::size_t block_count(std::span<const std::size_t> z) {
  std::size_t k = 0;
  for (std::size_t label : z)
    k = std::max(k, label + 1);
  return k;
}

std::vector<std::size_t> block_sizes(std::span<const std::size_t> z) {
  std::vector<std::size_t> sizes(block_count(z), 0);
  for (std::size_t label : z)
    ++sizes[label];
  return sizes;
}

std::string allocation_to_string(std::span<const std::size_t> z) {
  std::string out;
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (i)
      out += ' ';
    out += std::to_string(z[i] + 1);
  }
  return out;
}

Allocation parse_allocation(std::string_view text) {
  Allocation z;
  for (long long v : parse_integers(text)) {
    if (v < 1)
      throw std::invalid_argument("allocation labels are one-based");
    z.push_back(static_cast<std::size_t>(v - 1));
  }
  return z;
}

} // namespace permatch
