#ifndef PERMATCH_TOOLS_CLI_HPP
#define PERMATCH_TOOLS_CLI_HPP

#include "permatch/eperpf.hpp"
#include "permatch/io.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace permatch::cli {

namespace fs = std::filesystem;

struct FamilyOptions {
  std::string family = "dirichlet";
  double theta = 1.0;
  double discount = 0.5;
  double gamma = 0.5;

  EperpfFamily build() const;
};

struct SimulateOptions {
  /// planted | two-cycle | mixed | prior
  std::string scenario = "planted";
  std::size_t n = 20;
  std::size_t blocks = 2;
  double p_in = 0.6;
  double p_out = 0.1;
  double alpha = 0.05;
  double beta = 0.05;
  double a_xi = 1.0;
  double b_xi = 1.0;
  FamilyOptions prior;
  std::uint64_t seed = 1;
  fs::path out;
};

struct FitOptions {
  fs::path graph1;
  fs::path graph2;
  std::optional<fs::path> config;
  std::optional<std::uint64_t> seed;
  std::size_t chains = 1;
  GraphFormat format = GraphFormat::automatic;
  std::size_t nodes = 0;
  fs::path out;
};

struct SummarizeOptions {
  fs::path draws;
  fs::path out;
  std::optional<fs::path> report;
  std::optional<fs::path> truth;
  std::optional<fs::path> graph1;
  std::optional<fs::path> graph2;
  std::optional<fs::path> parent_draws;
  std::optional<fs::path> true_parent;
  std::optional<fs::path> z_hat;
  bool fast = false;
  bool early_stopping = true;
  std::uint64_t seed = 1;
  std::size_t n_zeal = 10;
  std::size_t n_runs = 8;
  GraphFormat format = GraphFormat::automatic;
};

struct DiagnoseOptions {
  fs::path archive;
  fs::path out;
};

struct OracleOptions {
  /// prior | posterior | cayley
  std::string table = "prior";
  std::size_t n = 3;
  FamilyOptions prior;
  std::optional<fs::path> graph1;
  std::optional<fs::path> graph2;
  std::optional<fs::path> config;
  fs::path out;
};

/// Each command writes its files and returns a short human-readable note.
std::string cmd_simulate(const SimulateOptions& opt);
std::string cmd_fit(const FitOptions& opt);
std::string cmd_summarize(const SummarizeOptions& opt);
std::string cmd_diagnose(const DiagnoseOptions& opt);
std::string cmd_oracle(const OracleOptions& opt);

} // namespace permatch::cli

#endif
