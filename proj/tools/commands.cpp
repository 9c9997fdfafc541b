#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <iomanip>
#include <iostream>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <boost/version.hpp>
#include <Eigen/Core>

#include "fermigas/determinantal_check.hpp"
#include "fermigas/dyson.hpp"
#include "fermigas/energy_bounds.hpp"
#include "fermigas/fermi_box.hpp"
#include "fermigas/fit.hpp"
#include "fermigas/io.hpp"
#include "fermigas/parallel.hpp"
#include "fermigas/potential.hpp"
#include "fermigas/scattering.hpp"
#include "fermigas/soft_potential.hpp"
#include "fermigas/twobody.hpp"
#include "options.hpp"

#ifndef FERMIGAS_VERSION
#define FERMIGAS_VERSION "unknown"
#endif

namespace fermigas::cli {

namespace {

using json = nlohmann::json;
constexpr double kPi = std::numbers::pi;

json versions() {
  std::ostringstream eigen, boost;
  eigen << EIGEN_WORLD_VERSION << '.' << EIGEN_MAJOR_VERSION << '.' << EIGEN_MINOR_VERSION;
  boost << BOOST_VERSION / 100000 << '.' << BOOST_VERSION / 100 % 1000 << '.' << BOOST_VERSION % 100;
  std::ostringstream nl;
  nl << NLOHMANN_JSON_VERSION_MAJOR << '.' << NLOHMANN_JSON_VERSION_MINOR << '.' << NLOHMANN_JSON_VERSION_PATCH;
  return {{"fermigas", FERMIGAS_VERSION}, {"eigen", eigen.str()}, {"boost", boost.str()}, {"nlohmann_json", nl.str()}};
}

json header(const RunContext& ctx) {
  return {{"tool", "fermigas"},
          {"schema_version", 1},
          {"versions", versions()},
          {"subcommand", ctx.subcommand},
          {"input", {{"options", ctx.options}, {"seed", ctx.seed}, {"tol", ctx.tol}}}};
}

json tagged(const json& value, const std::string& source) { return {{"value", value}, {"source", source}}; }

json fit_json(const LineFit& f, const std::string& source) {
  return {{"slope", f.slope}, {"intercept", f.intercept}, {"r_squared", f.r_squared},
          {"slope_stderr", f.slope_stderr}, {"source", source}};
}

std::filesystem::path output_path(const RunContext& ctx, const std::string& name) {
  const std::filesystem::path p(name);
  return p.is_absolute() ? p : ctx.out_dir / p;
}

std::filesystem::path with_suffix(std::filesystem::path p, const std::string& suffix) {
  p.replace_extension(suffix);
  return p;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

// Timestamps and thread counts live in a sidecar so the report itself is reproducible.
void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  io::atomic_write(path.string(), text);
}

void write_report(const std::filesystem::path& path, const json& report) {
  write_text(path, report.dump(2) + "\n");
  const json meta{{"report", path.filename().string()}, {"generated_at", utc_timestamp()}, {"threads", thread_count()}};
  write_text(path.string() + ".meta", meta.dump(2) + "\n");
}

class Csv {
 public:
  explicit Csv(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  void row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_.size()) throw std::logic_error("csv row width mismatch");
    rows_.push_back(cells);
  }

  [[nodiscard]] std::string str() const {
    std::string out;
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) out += (i ? "," : "") + cells[i];
      out += "\n";
    };
    line(columns_);
    for (const auto& r : rows_) line(r);
    return out;
  }

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

std::string num(double x) { return io::format_double(x); }

RadialPotential load_potential(const std::string& path) {
  if (path.empty()) throw std::invalid_argument("--potential is required");
  json doc;
  try {
    doc = json::parse(io::read_file(path));
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("potential file '" + path + "' is not valid JSON: " + e.what());
  }
  return RadialPotential::from_json(doc);
}

void check_dimension(int dim) {
  if (dim != 2 && dim != 3) throw std::invalid_argument("--dim must be 2 or 3");
}

}  // namespace

int run_scatter(const ScatterArgs& args, const RunContext& ctx) {
  check_dimension(args.dim);
  const RadialPotential v = load_potential(args.potential);
  const double tol = ctx.tol > 0.0 ? ctx.tol : 1e-10;
  const ScatteringSolution sol = solve_zero_energy(v, args.dim, tol);

  const auto path = output_path(ctx, args.out);
  const auto csv = path.parent_path() / (path.stem().string() + "_profile.csv");
  write_text(csv, sol.profile_csv());

  json report = header(ctx);
  report["outputs"] = {
      {"potential", tagged(v.to_json(), "potential.from_json")},
      {"a", tagged(sol.a, "scattering.solve_zero_energy")},
      {"log_a", tagged(sol.log_a, "scattering.solve_zero_energy")},
      {"residual", tagged(sol.residual, "scattering.solve_zero_energy")},
      {"profile_csv_path", tagged(csv.filename().string(), "scattering.profile_csv")},
  };
  write_report(path, report);
  return kExitOk;
}

int run_fermisea(const FermiSeaArgs& args, const RunContext& ctx) {
  if (args.dim < 1 || args.dim > 3) throw std::invalid_argument("--dim must be 1, 2 or 3");
  if (args.n < 1) throw std::invalid_argument("--n must be positive");
  if (!(args.L > 0.0)) throw std::invalid_argument("--L must be positive");
  const auto base = output_path(ctx, args.out);
  json report = header(ctx);

  if (!args.sweep) {
    const double energy = dirichlet_energy_sum(args.n, args.L, args.dim);
    const double leading = kinetic_leading(static_cast<double>(args.n), args.L, args.dim);
    report["outputs"] = {
        {"E_D", tagged(energy, "fermi_box.dirichlet_energy_sum")},
        {"leading", tagged(leading, "fermi_box.kinetic_leading")},
        {"ratio", tagged(energy / leading, "fermi_box.dirichlet_energy_sum / fermi_box.kinetic_leading")},
        {"density_square_integral", tagged(density_square_integral(args.n, args.L, args.dim),
                                           "fermi_box.density_square_integral")},
    };
    write_report(with_suffix(base, ".json"), report);
    return kExitOk;
  }

  if (args.points < 2) throw std::invalid_argument("--points must be at least 2");
  const auto prefix = dirichlet_k2_prefix(args.n, args.dim);
  std::vector<long> ns;
  for (double x : log_space(1.0, static_cast<double>(args.n), args.points)) ns.push_back(std::lround(x));
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());

  Csv csv({"n", "E_D", "leading", "ratio"});
  std::vector<double> fx, fy;
  const double scale = kPi * kPi / (args.L * args.L);
  for (long n : ns) {
    const double energy = scale * static_cast<double>(prefix[static_cast<std::size_t>(n - 1)]);
    const double leading = kinetic_leading(static_cast<double>(n), args.L, args.dim);
    csv.row({std::to_string(n), num(energy), num(leading), num(energy / leading)});
    if (n >= args.fit_from && energy > leading) {
      fx.push_back(static_cast<double>(n));
      fy.push_back(energy / leading - 1.0);
    }
  }
  write_text(with_suffix(base, ".csv"), csv.str());
  report["outputs"] = {{"csv_path", tagged(with_suffix(base, ".csv").filename().string(), "fermi_box.dirichlet_k2_prefix")},
                       {"rows", ns.size()}};
  report["outputs"]["correction_fit"] =
      fx.size() >= 3 ? fit_json(fit_power_law(fx, fy), "fit.fit_power_law(ratio - 1 vs n)") : json(nullptr);
  write_report(with_suffix(base, ".json"), report);
  return kExitOk;
}

int run_determinantal_check(const DeterminantalArgs& args, const RunContext& ctx) {
  if (args.scale < 1) throw std::invalid_argument("--scale must be at least 1");
  const double tol = ctx.tol > 0.0 ? ctx.tol : 1e-5;
  const auto result = determinantal_check(ctx.seed, tol, args.scale);
  json report = header(ctx);
  report["outputs"] = {{"suite", tagged(to_json(result), "determinantal_check.determinantal_check")},
                       {"passed", result.passed()}};
  write_report(output_path(ctx, args.out), report);
  if (!result.passed()) {
    std::cerr << "determinantal-check: " << result.failures << " comparisons exceeded the tolerance\n";
    return kExitError;
  }
  return kExitOk;
}

int run_dyson(const DysonArgs& args, const RunContext& ctx) {
  check_dimension(args.dim);
  if (args.corpus < 1) throw std::invalid_argument("--corpus must be positive");
  if (args.centres < 1) throw std::invalid_argument("--centres must be positive");
  if (args.eps.empty()) throw std::invalid_argument("--eps needs at least one value");
  if (args.lattice_small < 2 || args.lattice_large < args.lattice_small)
    throw std::invalid_argument("--lattice-small and --lattice-large must satisfy 2 <= small <= large");
  const RadialPotential v = load_potential(args.potential);
  const double a = solve_zero_energy(v, args.dim).a;
  const SoftPotentialKit kit(args.dim, MomentumCutoff{args.s}, args.R, v.range(), a);

  const auto corpus = dyson_corpus(static_cast<std::size_t>(args.corpus), args.dim, v, args.R, ctx.seed,
                                   static_cast<std::size_t>(args.centres));
  const double tol = ctx.tol > 0.0 ? ctx.tol : 1e-6;
  const auto results = run_dyson_corpus(corpus, v, kit, args.eps, args.centres > 1, tol);

  double min_gap = std::numeric_limits<double>::infinity(), eta = 0.0;
  std::size_t violations = 0;
  json per_eps = json::array();
  for (const auto& r : results) {
    min_gap = std::min(min_gap, r.min_gap);
    eta = std::max(eta, r.max_eta);
    violations += r.violations;
    per_eps.push_back({{"eps", r.eps}, {"count", r.count}, {"min_gap", r.min_gap},
                       {"min_relative_gap", r.min_relative_gap}, {"max_eta", r.max_eta},
                       {"max_relative_eta", r.max_relative_eta}, {"violations", r.violations}});
  }

  const auto s_values = log_space(args.s, 8.0 * args.s, 5);
  const WBoundFits fits = fit_w_bounds(args.dim, args.R, s_values);
  if (!(args.lattice_side > 0.0)) throw std::invalid_argument("--lattice-side must be positive");
  const double side = args.lattice_side * args.s;
  const auto small = lattice_sum_constant(kit, static_cast<std::size_t>(args.lattice_small), ctx.seed, side);
  const auto large = lattice_sum_constant(kit, static_cast<std::size_t>(args.lattice_large), ctx.seed, side);

  json report = header(ctx);
  report["outputs"] = {
      {"scattering_length", tagged(a, "scattering.solve_zero_energy")},
      {"min_gap", tagged(min_gap, "dyson.run_dyson_corpus")},
      {"eta", tagged(eta, "dyson.run_dyson_corpus")},
      {"violations", tagged(violations, "dyson.run_dyson_corpus")},
      {"per_eps", tagged(per_eps, "dyson.run_dyson_corpus")},
      {"bound_fits",
       {{"sup_w", {{"s_values", fits.s_values}, {"values", fits.sup_w}, {"fit", fit_json(fits.sup_fit, "soft_potential.fit_w_bounds")},
                   {"constant", fits.sup_constant}, {"source", "soft_potential.fit_w_bounds"}}},
        {"int_w", {{"s_values", fits.s_values}, {"values", fits.int_w}, {"fit", fit_json(fits.int_fit, "soft_potential.fit_w_bounds")},
                   {"constant", fits.int_constant}, {"source", "soft_potential.fit_w_bounds"}}},
        {"sum_w", {{"counts", {small.count, large.count}},
                   {"sup_sum", {small.sup_sum, large.sup_sum}},
                   {"constant", {small.constant, large.constant}},
                   {"constant_ratio", large.constant / small.constant},
                   {"source", "soft_potential.lattice_sum_constant"}}}}},
  };
  write_report(output_path(ctx, args.out), report);
  if (violations > 0) {
    std::cerr << "dyson: " << violations << " test functions violate the inequality\n";
    return kExitError;
  }
  return kExitOk;
}

int run_bounds(const BoundsArgs& args, const RunContext& ctx) {
  check_dimension(args.dim);
  if (args.rho_sweep.empty() == args.gas_sweep.empty())
    throw std::invalid_argument("bounds needs exactly one of --rho-sweep or --gas-sweep");
  if (!(args.a > 0.0) || !(args.R0 >= args.a)) throw std::invalid_argument("--a must be positive and --R0 >= --a");

  BoundConstants constants;
  if (!args.constants.empty()) constants = BoundConstants::from_json(json::parse(io::read_file(args.constants)));

  std::vector<double> rhos, gas;
  if (!args.rho_sweep.empty()) {
    rhos = parse_log_range(args.rho_sweep, "--rho-sweep");
    for (double rho : rhos)
      gas.push_back(args.dim == 3 ? args.a * std::cbrt(rho) : std::abs(std::log(args.a * args.a * rho)));
  } else {
    gas = parse_log_range(args.gas_sweep, "--gas-sweep");
  }
  const BoundsSweep sweep = sweep_bounds(args.dim, gas, args.fraction, args.R0 / args.a, constants);

  std::vector<std::string> columns{"rho", "gas_parameter", "log_energy_unit", "leading", "upper", "lower",
                                   "upper_eps", "lower_eps", "upper_feasible", "lower_feasible"};
  std::vector<std::string> channel_columns;
  for (const auto& row : sweep.rows)
    for (const auto* r : {&row.upper, &row.lower})
      for (const auto& c : r->channels) {
        const std::string col = std::string(r->upper ? "upper:" : "lower:") + c.name;
        if (std::find(channel_columns.begin(), channel_columns.end(), col) == channel_columns.end())
          channel_columns.push_back(col);
      }
  columns.insert(columns.end(), channel_columns.begin(), channel_columns.end());
  Csv csv(columns);
  for (std::size_t i = 0; i < sweep.rows.size(); ++i) {
    const auto& row = sweep.rows[i];
    std::vector<std::string> cells{rhos.empty() ? "" : num(rhos[i]), num(row.point.gas_parameter),
                                   num(row.upper.log_energy_unit), num(row.upper.leading()),
                                   num(row.upper.total), num(row.lower.total), num(row.upper.eps_rho),
                                   num(row.lower.eps_rho), row.upper.feasible ? "1" : "0",
                                   row.lower.feasible ? "1" : "0"};
    for (const auto& col : channel_columns) {
      const bool upper = col.rfind("upper:", 0) == 0;
      const std::string name = col.substr(6);
      std::string cell;
      for (const auto& c : (upper ? row.upper : row.lower).channels)
        if (c.name == name) cell = num(c.energy);
      cells.push_back(cell);
    }
    csv.row(cells);
  }

  const auto csv_path = output_path(ctx, args.out);
  write_text(csv_path, csv.str());
  json summary = to_json(sweep);
  summary["source"] = "energy_bounds.sweep_bounds";
  json report = header(ctx);
  report["outputs"] = {{"csv_path", tagged(csv_path.filename().string(), "energy_bounds.sweep_bounds")},
                       {"summary", summary}};
  write_report(with_suffix(csv_path, ".json"), report);
  if (sweep.infeasible > 0) {
    std::cerr << "bounds: " << sweep.infeasible << " of " << sweep.rows.size() << " points are infeasible\n";
    return kExitInfeasible;
  }
  return kExitOk;
}

int run_oracle(const OracleArgs& args, const RunContext& ctx) {
  check_dimension(args.dim);
  const RadialPotential v = load_potential(args.potential);
  TwoBodyOptions options;
  if (ctx.tol > 0.0) options.convergence_tolerance = ctx.tol;
  const TwoBodyResult result = ground_state_energy({v, args.L, args.cutoff, args.dim}, options);
  const double a = solve_zero_energy(v, args.dim).a;
  const double predicted = pseudopotential_prediction(a, args.L, args.dim);

  json report = header(ctx);
  json out{{"result", tagged(to_json(result), "twobody.ground_state_energy")},
           {"scattering_length", tagged(a, "scattering.solve_zero_energy")},
           {"prediction", tagged(predicted, "twobody.pseudopotential_prediction")}};
  if (result.converged) {
    const double shift = result.shift();
    const double predicted_shift = predicted - result.free_energy;
    if (args.dim == 3)
      out["shift_ratio"] = tagged(a > 0.0 ? shift * std::pow(args.L, 3) / (kPi * a) : std::nan(""),
                                  "twobody.ground_state_energy / (pi a)");
    out["shift_over_prediction"] =
        tagged(predicted_shift > 0.0 ? shift / predicted_shift : std::nan(""),
               args.dim == 3 ? "twobody.ground_state_energy / twobody.pseudopotential_prediction"
                             : "twobody.ground_state_energy / twobody.pseudopotential_prediction (heuristic)");
  }
  report["outputs"] = out;
  write_report(output_path(ctx, args.out), report);
  if (!result.converged) {
    std::cerr << "oracle: basis not converged (relative change " << result.relative_change << ")\n";
    return kExitError;
  }
  return kExitOk;
}

int run_sweep(const SweepArgs& args, const RunContext& ctx) {
  std::vector<RadialPotential> shapes;
  for (const auto& p : args.potentials) shapes.push_back(load_potential(p));
  if (shapes.empty())
    shapes = {RadialPotential::square_barrier(1.0, args.R0), RadialPotential::linear_ramp(1.0, args.R0),
              RadialPotential::double_step(2.0, 0.5, 0.5 * args.R0, args.R0)};
  const auto a_values = parse_log_range(args.a_sweep, "--a-sweep");
  TwoBodyOptions options;
  if (ctx.tol > 0.0) options.convergence_tolerance = ctx.tol;

  Csv csv({"shape", "a", "strength", "energy", "free_energy", "shift", "ratio", "relative_change", "converged"});
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  std::size_t unconverged = 0;
  for (double a : a_values)
    for (const auto& shape : shapes) {
      const RadialPotential tuned = tune_scattering_length(shape, a, 3);
      const TwoBodyResult r = ground_state_energy({tuned, args.L, args.cutoff, 3}, options);
      const double ratio = r.shift() * std::pow(args.L, 3) / (kPi * a);
      const double strength = tuned.max_value() / shape.max_value();
      csv.row({shape.label(), num(a), num(strength), num(r.energy), num(r.free_energy), num(r.shift()), num(ratio),
               num(r.relative_change), r.converged ? "1" : "0"});
      if (!r.converged) ++unconverged;
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }

  const auto csv_path = output_path(ctx, args.out);
  write_text(csv_path, csv.str());
  json report = header(ctx);
  report["outputs"] = {{"csv_path", tagged(csv_path.filename().string(), "twobody.ground_state_energy")},
                       {"ratio_min", tagged(lo, "twobody.ground_state_energy / (pi a)")},
                       {"ratio_max", tagged(hi, "twobody.ground_state_energy / (pi a)")},
                       {"target", tagged(27.0, "twobody.pseudopotential_prediction / (pi a)")},
                       {"unconverged", unconverged}};
  write_report(with_suffix(csv_path, ".json"), report);
  if (unconverged > 0) {
    std::cerr << "sweep: " << unconverged << " runs did not converge in the basis\n";
    return kExitError;
  }
  return kExitOk;
}

}  // namespace fermigas::cli
