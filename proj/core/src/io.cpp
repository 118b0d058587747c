#include "permatch/io.hpp"

#include "permatch/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace permatch {

namespace {

std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> out;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    if (!line.empty() && line.back() == '\r')
      line.remove_suffix(1);
    out.push_back(line);
    if (nl == std::string_view::npos)
      break;
    text.remove_prefix(nl + 1);
  }
  while (!out.empty() && out.back().find_first_not_of(" \t") == std::string_view::npos)
    out.pop_back();
  return out;
}

std::vector<std::string_view> split_tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ',' || line[i] == ' ' || line[i] == '\t' || line[i] == ';'))
      ++i;
    const std::size_t start = i;
    while (i < line.size() && !(line[i] == ',' || line[i] == ' ' || line[i] == '\t' || line[i] == ';'))
      ++i;
    if (i > start)
      out.push_back(line.substr(start, i - start));
  }
  return out;
}

bool parse_long(std::string_view tok, long long& x) {
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), x);
  return ec == std::errc() && ptr == tok.data() + tok.size();
}

bool numeric_row(const std::vector<std::string_view>& toks) {
  long long x = 0;
  for (auto t : toks)
    if (!parse_long(t, x))
      return false;
  return !toks.empty();
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_double(std::string_view tok) {
  const std::string s(tok);
  char* end = nullptr;
  const double x = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size())
    throw std::invalid_argument("expected a number, got '" + s + "'");
  return x;
}

} // namespace

GraphFormat parse_graph_format(std::string_view text) {
  if (text == "auto")
    return GraphFormat::automatic;
  if (text == "dense")
    return GraphFormat::dense;
  if (text == "edges")
    return GraphFormat::edges;
  throw std::invalid_argument("unknown graph format: " + std::string(text));
}

SymmetricBinaryMatrix parse_graph(std::string_view text, GraphFormat format, std::size_t nodes) {
  std::vector<std::vector<long long>> rows;
  bool header_skipped = false;
  for (std::string_view line : lines_of(text)) {
    const auto toks = split_tokens(line);
    if (toks.empty())
      continue;
    if (!numeric_row(toks)) {
      if (rows.empty() && !header_skipped) {
        header_skipped = true;
        continue;
      }
      throw std::invalid_argument("graph file: non-numeric row '" + std::string(line) + "'");
    }
    std::vector<long long> row;
    for (auto t : toks) {
      long long x = 0;
      parse_long(t, x);
      row.push_back(x);
    }
    rows.push_back(std::move(row));
  }

  bool dense = format == GraphFormat::dense;
  if (format == GraphFormat::automatic) {
    dense = !rows.empty();
    for (const auto& r : rows) {
      if (r.size() != rows.size()) {
        dense = false;
        break;
      }
      for (long long x : r)
        if (x != 0 && x != 1)
          dense = false;
    }
  }

  if (dense) {
    const std::size_t n = rows.size();
    std::vector<int> entries;
    entries.reserve(n * n);
    for (const auto& r : rows) {
      if (r.size() != n)
        throw std::invalid_argument("dense graph: matrix is not square");
      for (long long x : r)
        entries.push_back(static_cast<int>(x));
    }
    return SymmetricBinaryMatrix::from_dense(n, entries);
  }

  std::size_t n = nodes;
  for (const auto& r : rows) {
    if (r.size() != 2)
      throw std::invalid_argument("edge list: expected two columns per row");
    for (long long x : r) {
      if (x < 1)
        throw std::invalid_argument("edge list: node labels are one-based");
      if (nodes == 0)
        n = std::max(n, static_cast<std::size_t>(x));
      else if (static_cast<std::size_t>(x) > nodes)
        throw std::invalid_argument("edge list: label exceeds the node count");
    }
  }
  SymmetricBinaryMatrix y(n);
  for (const auto& r : rows) {
    if (r[0] == r[1])
      throw std::invalid_argument("edge list: self-loops are not allowed");
    y.set(static_cast<std::size_t>(r[0] - 1), static_cast<std::size_t>(r[1] - 1), true);
  }
  return y;
}

SymmetricBinaryMatrix read_graph(const std::filesystem::path& path, GraphFormat format,
                                 std::size_t nodes) {
  return parse_graph(read_text(path), format, nodes);
}

std::string format_dense(const SymmetricBinaryMatrix& y) {
  std::string out;
  const std::size_t n = y.size();
  out.reserve(n * 2 * n);
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = 0; v < n; ++v) {
      if (v > 0)
        out += ',';
      out += y(u, v) ? '1' : '0';
    }
    out += '\n';
  }
  return out;
}

std::vector<Permutation> read_permutations(const std::filesystem::path& path) {
  std::vector<Permutation> out;
  const std::string text = read_text(path);
  for (std::string_view line : lines_of(text)) {
    if (line.find_first_not_of(" \t") == std::string_view::npos)
      continue;
    out.push_back(Permutation::parse_one_line(line));
  }
  return out;
}

std::string format_permutations(std::span<const Permutation> perms) {
  std::string out;
  for (const auto& p : perms) {
    out += p.to_one_line();
    out += '\n';
  }
  return out;
}

std::string upper_triangle_bits(const SymmetricBinaryMatrix& y) {
  std::string out;
  const std::size_t n = y.size();
  out.reserve(n * (n - 1) / 2);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v)
      out += y(u, v) ? '1' : '0';
  return out;
}

SymmetricBinaryMatrix from_upper_triangle_bits(std::string_view bits, std::size_t n) {
  if (bits.size() != n * (n - 1) / 2)
    throw std::invalid_argument("parent draw has the wrong number of bits");
  SymmetricBinaryMatrix y(n);
  std::size_t i = 0;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v) {
      const char c = bits[i++];
      if (c != '0' && c != '1')
        throw std::invalid_argument("parent draw bits must be 0 or 1");
      y.set(u, v, c == '1');
    }
  return y;
}

std::vector<ParentMatrix> read_parent_draws(const std::filesystem::path& path, std::size_t n) {
  std::vector<ParentMatrix> out;
  const std::string text = read_text(path);
  for (std::string_view line : lines_of(text))
    out.push_back(from_upper_triangle_bits(line, n));
  return out;
}

Allocation read_allocation(const std::filesystem::path& path) {
  return parse_allocation(read_text(path));
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw std::runtime_error("cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out)
    throw std::runtime_error("write failed for " + path.string());
}

std::string format_scalars(std::span<const TraceRow> trace) {
  std::string out = "iter,alpha,beta,theta,log_joint,k\n";
  for (const auto& r : trace) {
    out += std::to_string(r.iter) + ',' + format_double(r.alpha) + ',' + format_double(r.beta) +
           ',' + format_double(r.theta) + ',' + format_double(r.log_joint) + ',' +
           std::to_string(r.k) + '\n';
  }
  return out;
}

std::vector<TraceRow> parse_scalars(std::string_view text) {
  std::vector<TraceRow> out;
  const auto lines = lines_of(text);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto toks = split_tokens(lines[i]);
    if (toks.size() != 6)
      throw std::invalid_argument("scalars.csv: expected 6 columns");
    TraceRow r;
    long long x = 0;
    if (!parse_long(toks[0], x))
      throw std::invalid_argument("scalars.csv: bad iteration");
    r.iter = static_cast<std::size_t>(x);
    r.alpha = parse_double(toks[1]);
    r.beta = parse_double(toks[2]);
    r.theta = parse_double(toks[3]);
    r.log_joint = parse_double(toks[4]);
    if (!parse_long(toks[5], x))
      throw std::invalid_argument("scalars.csv: bad cycle count");
    r.k = static_cast<std::size_t>(x);
    out.push_back(r);
  }
  return out;
}

void write_archive(const std::filesystem::path& dir, const DrawArchive& archive) {
  std::filesystem::create_directories(dir);
  write_text(dir / "pi.draws", format_permutations(archive.pi));
  write_text(dir / "scalars.csv", format_scalars(archive.trace));
  std::string iters;
  for (std::size_t it : archive.draw_iters)
    iters += std::to_string(it) + '\n';
  write_text(dir / "draw_iters", iters);
  if (!archive.parent.empty()) {
    std::string bits;
    for (const auto& y : archive.parent) {
      bits += upper_triangle_bits(y);
      bits += '\n';
    }
    write_text(dir / "parent.draws", bits);
  }
  std::ostringstream meta;
  meta << "seed = " << archive.seed << "\n"
       << "config_hash = " << archive.config_hash << "\n"
       << "draws = " << archive.pi.size() << "\n"
       << "# config\n"
       << archive.config_text;
  write_text(dir / "meta", meta.str());
}

DrawArchive read_archive(const std::filesystem::path& dir) {
  DrawArchive a;
  a.pi = read_permutations(dir / "pi.draws");
  a.trace = parse_scalars(read_text(dir / "scalars.csv"));
  if (std::filesystem::exists(dir / "draw_iters")) {
    const std::string iters = read_text(dir / "draw_iters");
    for (std::string_view line : lines_of(iters)) {
      long long x = 0;
      if (!parse_long(line, x))
        throw std::invalid_argument("draw_iters: bad line");
      a.draw_iters.push_back(static_cast<std::size_t>(x));
    }
  }
  if (std::filesystem::exists(dir / "parent.draws") && !a.pi.empty())
    a.parent = read_parent_draws(dir / "parent.draws", a.pi.front().size());
  const std::string meta = read_text(dir / "meta");
  const std::string marker = "# config\n";
  const std::size_t at = meta.find(marker);
  const auto header = parse_key_values(meta.substr(0, at));
  if (header.count("seed"))
    a.seed = std::stoull(header.at("seed"));
  if (header.count("config_hash"))
    a.config_hash = std::stoull(header.at("config_hash"));
  if (at != std::string::npos)
    a.config_text = meta.substr(at + marker.size());
  return a;
}

} // namespace permatch
