#include <filesystem>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "commands.hpp"
#include "fermigas/errors.hpp"
#include "fermigas/io.hpp"
#include "fermigas/parallel.hpp"
#include "options.hpp"

using namespace fermigas::cli;
using json = nlohmann::json;

namespace {

struct Globals {
  std::string config;
  std::string out_dir = ".";
  std::uint64_t seed = 42;
  int threads = 0;
  double tol = 0.0;
};

void apply_config(const std::string& path, const std::string& chosen, std::string& subcommand, Globals& g,
                  const CLI::App& app, std::vector<std::pair<std::string, OptionSet*>>& sets) {
  json doc;
  try {
    doc = json::parse(fermigas::io::read_file(path));
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("config '" + path + "' is not valid JSON: " + e.what());
  }
  if (!doc.is_object()) throw std::invalid_argument("config must be a JSON object");
  if (!doc.contains("version") || doc["version"] != 1) throw std::invalid_argument("config field 'version' must be 1");
  const std::filesystem::path base = std::filesystem::path(path).parent_path();
  for (const auto& [key, value] : doc.items()) {
    if (key == "version" || key == "options") continue;
    try {
      if (key == "subcommand") {
        const auto name = value.get<std::string>();
        if (!chosen.empty() && chosen != name)
          throw std::invalid_argument("config field 'subcommand' is '" + name + "' but the command line runs '" +
                                      chosen + "'");
        subcommand = name;
      } else if (key == "seed") {
        if (app.get_option("--seed")->count() == 0) g.seed = value.get<std::uint64_t>();
      } else if (key == "out_dir") {
        if (app.get_option("--out-dir")->count() == 0) {
          const std::filesystem::path p(value.get<std::string>());
          g.out_dir = (p.is_absolute() ? p : base / p).string();
        }
      } else if (key == "threads") {
        if (app.get_option("--threads")->count() == 0) g.threads = value.get<int>();
      } else if (key == "tol") {
        if (app.get_option("--tol")->count() == 0) g.tol = value.get<double>();
      } else {
        throw std::invalid_argument("config field '" + key + "' is not recognised");
      }
    } catch (const json::exception&) {
      throw std::invalid_argument("config field '" + key + "' has the wrong type");
    }
  }
  if (subcommand.empty()) throw std::invalid_argument("config field 'subcommand' is missing");
  OptionSet* set = nullptr;
  for (auto& [name, s] : sets)
    if (name == subcommand) set = s;
  if (set == nullptr) throw std::invalid_argument("config field 'subcommand' names an unknown pipeline");
  if (doc.contains("options")) set->apply(doc["options"], base);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerics for the low-density Fermi gas: scattering lengths, Fermi seas, determinantal densities, "
               "the cut-off Dyson inequality, energy bounds and a two-body oracle."};
  app.require_subcommand(0, 1);
  Globals g;
  app.add_option("--config", g.config, "JSON run configuration {version, subcommand, options, ...}");
  app.add_option("--out-dir", g.out_dir, "Directory for reports")->capture_default_str();
  app.add_option("--seed", g.seed, "Seed for randomized corpora")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads (default: FERMIGAS_THREADS or 1)");
  app.add_option("--tol", g.tol, "Tolerance override for the selected pipeline");

  std::vector<std::pair<std::string, OptionSet*>> sets;
  auto sub = [&](const std::string& name, const std::string& help) {
    CLI::App* s = app.add_subcommand(name, help);
    s->fallthrough();
    return s;
  };

  ScatterArgs scatter;
  OptionSet scatter_set(sub("scatter", "Zero-energy scattering length and profile"));
  scatter_set.add_path("potential", scatter.potential, "Potential JSON file");
  scatter_set.add("dim", scatter.dim, "Dimension (2 or 3)");
  scatter_set.add("out", scatter.out, "Report file; the profile CSV is written next to it");

  FermiSeaArgs sea;
  OptionSet sea_set(sub("fermisea", "Dirichlet Fermi-sea energies"));
  sea_set.add("n", sea.n, "Particle number (sweep: largest n)");
  sea_set.add("L", sea.L, "Box side");
  sea_set.add("dim", sea.dim, "Dimension (1, 2 or 3)");
  sea_set.add_flag("sweep", sea.sweep, "Write a CSV over log-spaced n up to --n");
  sea_set.add("points", sea.points, "Sweep points");
  sea_set.add("fit-from", sea.fit_from, "Smallest n entering the correction fit");
  sea_set.add("out", sea.out, "Output stem (.json, .csv)");

  DeterminantalArgs det;
  OptionSet det_set(sub("determinantal-check", "Brute-force check of the determinantal formulas"));
  det_set.add("scale", det.scale, "Multiplier on the number of random weights");
  det_set.add("out", det.out, "Report file");

  DysonArgs dyson;
  OptionSet dyson_set(sub("dyson", "Cut-off Dyson inequality on a seeded corpus of test functions"));
  dyson_set.add("dim", dyson.dim, "Dimension (2 or 3)");
  dyson_set.add_path("potential", dyson.potential, "Potential JSON file");
  dyson_set.add("R", dyson.R, "Outer radius of the soft potential");
  dyson_set.add("s", dyson.s, "Momentum-cutoff length");
  dyson_set.add("eps", dyson.eps, "Values of eps in (0, 1]");
  dyson_set.add("corpus", dyson.corpus, "Number of test functions");
  dyson_set.add("centres", dyson.centres, "Centres per test function (> 1 selects the field form)");
  dyson_set.add("lattice-small", dyson.lattice_small, "Smaller point count for the lattice-sum constant");
  dyson_set.add("lattice-large", dyson.lattice_large, "Larger point count for the lattice-sum constant");
  dyson_set.add("lattice-side", dyson.lattice_side, "Box side for the lattice sum, in units of s");
  dyson_set.add("out", dyson.out, "Report file");

  BoundsArgs bounds;
  OptionSet bounds_set(sub("bounds", "Upper and lower energy bounds along a density sweep"));
  bounds_set.add("dim", bounds.dim, "Dimension (2 or 3)");
  bounds_set.add("rho-sweep", bounds.rho_sweep, "Densities lo:hi:n, log-spaced");
  bounds_set.add("gas-sweep", bounds.gas_sweep, "Gas parameters lo:hi:n (3D a rho^(1/3), 2D |ln(a^2 rho)|)");
  bounds_set.add("a", bounds.a, "Scattering length");
  bounds_set.add("R0", bounds.R0, "Potential range");
  bounds_set.add("fraction", bounds.fraction, "Density fraction of the first species");
  bounds_set.add_path("constants", bounds.constants, "Constants table JSON file");
  bounds_set.add("out", bounds.out, "CSV file; the JSON summary uses the same stem");

  OracleArgs oracle;
  OptionSet oracle_set(sub("oracle", "Two-body ground state in a Dirichlet box"));
  oracle_set.add_path("potential", oracle.potential, "Potential JSON file (no hard core)");
  oracle_set.add("L", oracle.L, "Box side");
  oracle_set.add("cutoff", oracle.cutoff, "Largest sine mode per axis per particle");
  oracle_set.add("dim", oracle.dim, "Dimension (2 or 3)");
  oracle_set.add("out", oracle.out, "Report file");

  SweepArgs sweep;
  OptionSet sweep_set(sub("sweep", "Two-body shift across shapes tuned to common scattering lengths (3D)"));
  sweep_set.add_paths("potential", sweep.potentials, "Shape files (repeatable); default: three built-in shapes");
  sweep_set.add("a-sweep", sweep.a_sweep, "Scattering lengths lo:hi:n, log-spaced");
  sweep_set.add("R0", sweep.R0, "Range of the built-in shapes");
  sweep_set.add("L", sweep.L, "Box side");
  sweep_set.add("cutoff", sweep.cutoff, "Largest sine mode per axis per particle");
  sweep_set.add("out", sweep.out, "CSV file; the JSON summary uses the same stem");

  sets = {{"scatter", &scatter_set}, {"fermisea", &sea_set},      {"determinantal-check", &det_set},
          {"dyson", &dyson_set},     {"bounds", &bounds_set},     {"oracle", &oracle_set},
          {"sweep", &sweep_set}};

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    std::string chosen;
    for (auto& [name, set] : sets)
      if (set->app()->parsed()) chosen = name;
    std::string subcommand = chosen;
    if (!g.config.empty()) apply_config(g.config, chosen, subcommand, g, app, sets);
    if (subcommand.empty()) {
      std::cerr << app.help();
      return kExitError;
    }
    if (g.threads < 0) throw std::invalid_argument("--threads must be non-negative");
    if (g.threads > 0) fermigas::set_thread_count(g.threads);
    if (g.tol < 0.0) throw std::invalid_argument("--tol must be non-negative");

    RunContext ctx;
    ctx.subcommand = subcommand;
    ctx.out_dir = g.out_dir;
    ctx.seed = g.seed;
    ctx.tol = g.tol;
    for (auto& [name, set] : sets)
      if (name == subcommand) ctx.options = set->echo();

    if (subcommand == "scatter") return run_scatter(scatter, ctx);
    if (subcommand == "fermisea") return run_fermisea(sea, ctx);
    if (subcommand == "determinantal-check") return run_determinantal_check(det, ctx);
    if (subcommand == "dyson") return run_dyson(dyson, ctx);
    if (subcommand == "bounds") return run_bounds(bounds, ctx);
    if (subcommand == "oracle") return run_oracle(oracle, ctx);
    return run_sweep(sweep, ctx);
  } catch (const fermigas::ScheduleInfeasible& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
}
