#ifndef PERMATCH_IO_HPP
#define PERMATCH_IO_HPP

#include "permatch/csbm.hpp"
#include "permatch/gibbs.hpp"
#include "permatch/permutation.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace permatch {

enum class GraphFormat { automatic, dense, edges };

GraphFormat parse_graph_format(std::string_view text);

/// Dense 0/1 CSV (optional header row) or a one-based edge list with two
/// integer columns. In automatic mode a square 0/1 table is read as dense.
/// `nodes` sets the node count of an edge list (default: largest label).
SymmetricBinaryMatrix read_graph(const std::filesystem::path& path,
                                 GraphFormat format = GraphFormat::automatic,
                                 std::size_t nodes = 0);
SymmetricBinaryMatrix parse_graph(std::string_view text, GraphFormat format = GraphFormat::automatic,
                                  std::size_t nodes = 0);
std::string format_dense(const SymmetricBinaryMatrix& y);

/// One permutation per line in one-based one-line form.
std::vector<Permutation> read_permutations(const std::filesystem::path& path);
std::string format_permutations(std::span<const Permutation> perms);

/// Upper triangle, row by row, as a string of 0/1 characters.
std::string upper_triangle_bits(const SymmetricBinaryMatrix& y);
SymmetricBinaryMatrix from_upper_triangle_bits(std::string_view bits, std::size_t n);
std::vector<ParentMatrix> read_parent_draws(const std::filesystem::path& path, std::size_t n);

Allocation read_allocation(const std::filesystem::path& path);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);

/// pi.draws, scalars.csv, parent.draws (when present) and meta.
void write_archive(const std::filesystem::path& dir, const DrawArchive& archive);
DrawArchive read_archive(const std::filesystem::path& dir);

std::string format_scalars(std::span<const TraceRow> trace);
std::vector<TraceRow> parse_scalars(std::string_view text);

} // namespace permatch

#endif
