#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace fermigas::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitInfeasible = 2;

/// Global settings shared by every pipeline.
struct RunContext {
  std::string subcommand;
  std::filesystem::path out_dir = ".";
  std::uint64_t seed = 42;
  double tol = 0.0;  // 0 keeps each pipeline's default
  nlohmann::json options;  // echo of the subcommand options
};

struct ScatterArgs {
  std::string potential;
  int dim = 3;
  std::string out = "scatter.json";
};

struct FermiSeaArgs {
  long n = 100;
  double L = 1.0;
  int dim = 3;
  bool sweep = false;
  int points = 41;
  long fit_from = 1000;
  std::string out = "fermisea";
};

struct DeterminantalArgs {
  int scale = 1;
  std::string out = "determinantal_check.json";
};

struct DysonArgs {
  int dim = 3;
  std::string potential;
  double R = 3.0;
  double s = 6.0;
  std::vector<double> eps{0.1, 0.5};
  int corpus = 20;
  int centres = 1;
  int lattice_small = 10;
  int lattice_large = 100;
  double lattice_side = 300.0;  // box side for the lattice sum, in units of s
  std::string out = "dyson.json";
};

struct BoundsArgs {
  int dim = 3;
  std::string rho_sweep;
  std::string gas_sweep;
  double a = 1.0;
  double R0 = 1.0;
  double fraction = 0.5;
  std::string constants;
  std::string out = "bounds.csv";
};

struct OracleArgs {
  std::string potential;
  double L = 1.0;
  int cutoff = 5;
  int dim = 3;
  std::string out = "oracle.json";
};

struct SweepArgs {
  std::vector<std::string> potentials;
  std::string a_sweep = "0.002:0.01:3";
  double R0 = 0.1;
  double L = 1.0;
  int cutoff = 4;
  std::string out = "sweep.csv";
};

int run_scatter(const ScatterArgs& args, const RunContext& ctx);
int run_fermisea(const FermiSeaArgs& args, const RunContext& ctx);
int run_determinantal_check(const DeterminantalArgs& args, const RunContext& ctx);
int run_dyson(const DysonArgs& args, const RunContext& ctx);
int run_bounds(const BoundsArgs& args, const RunContext& ctx);
int run_oracle(const OracleArgs& args, const RunContext& ctx);
int run_sweep(const SweepArgs& args, const RunContext& ctx);

}  // namespace fermigas::cli
