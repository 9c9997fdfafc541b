#include <unistd.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "fermigas/determinantal.hpp"
#include "fermigas/determinantal_check.hpp"
#include "fermigas/dyson.hpp"
#include "fermigas/energy_bounds.hpp"
#include "fermigas/fermi_box.hpp"
#include "fermigas/fit.hpp"
#include "fermigas/potential.hpp"
#include "fermigas/scattering.hpp"
#include "fermigas/soft_potential.hpp"
#include "fermigas/twobody.hpp"
#include "quadrature_oracle.hpp"
#include "scattering_oracle.hpp"

using namespace fermigas;
namespace fs = std::filesystem;

namespace {

constexpr double pi = std::numbers::pi;

struct Outcome {
  bool passed = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      passed = false;
      detail << " FAILED[" << what << "]";
    }
  }
};

double relative(double got, double want) { return std::abs(got - want) / std::abs(want); }

Outcome scattering_lengths() {
  Outcome o;
  double worst = 0.0;
  for (double R0 : {0.5, 1.0, 2.0}) {
    worst = std::max(worst, relative(solve_zero_energy(RadialPotential::hard_sphere(R0), 3).a, R0));
    worst = std::max(worst, relative(solve_zero_energy(RadialPotential::hard_sphere(R0), 2).a, R0));
  }
  o.require(worst < 1e-8, "hard core");
  o.detail << "hard core rel " << worst;

  double barrier = 0.0;
  for (double v0 : {0.5, 10.0, 200.0}) {
    const auto v = RadialPotential::square_barrier(v0, 1.0);
    barrier = std::max(barrier, relative(solve_zero_energy(v, 3).a, oracle::barrier_a_3d(v0, 1.0)));
    barrier = std::max(barrier, relative(solve_zero_energy(v, 2).a, std::exp(oracle::barrier_log_a_2d(v0, 1.0))));
  }
  o.require(barrier < 1e-6, "barrier");
  o.detail << ", barrier rel " << barrier;

  double exterior = 0.0;
  for (const auto& v : {RadialPotential::hard_sphere(1.0), RadialPotential::square_barrier(10.0, 1.0)}) {
    const auto sol = solve_zero_energy(v, 3);
    for (int i = 0; i <= 900; ++i) {
      const double r = 1.0 + 9.0 * i / 900.0;
      exterior = std::max(exterior, std::abs(sol.phi(r) - (1.0 - sol.a / r)));
    }
  }
  o.require(exterior < 1e-7, "exterior");
  o.detail << ", exterior " << exterior;
  return o;
}

Outcome scattering_integrals() {
  Outcome o;
  double worst = 0.0, worst_xi = 0.0;
  const double R0 = 1.0;
  for (const auto& v : {RadialPotential::hard_sphere(R0), RadialPotential::square_barrier(10.0, R0),
                        RadialPotential::linear_ramp(30.0, R0, 4)}) {
    const auto s3 = solve_zero_energy(v, 3);
    const auto s2 = solve_zero_energy(v, 2);
    for (double R : {2.0 * R0, 5.0 * R0}) {
      worst = std::max(worst, relative(scattering_energy_integral(s3, R), 4 * pi * s3.a * (1 - s3.a / R)));
      worst = std::max(worst, relative(scattering_energy_integral(s2, R), 2 * pi / (std::log(R) - s2.log_a)));
      worst_xi = std::max(worst_xi, relative(xi_profile(s3, R).integral_xi(), 4 * pi * s3.a / (1 - s3.a / R)));
    }
  }
  o.require(worst < 1e-6, "energy integral");
  o.require(worst_xi < 1e-6, "xi integral");
  o.detail << "energy rel " << worst << ", xi rel " << worst_xi;
  return o;
}

// Exhaustive shell enumeration over a cube of modes.
std::uint64_t enumerated_k2_sum(long n, int d) {
  std::vector<std::uint64_t> k2;
  const int kmax = d == 1 ? 20 : 8;
  for (int a = 1; a <= kmax; ++a)
    for (int b = 1; b <= (d >= 2 ? kmax : 1); ++b)
      for (int c = 1; c <= (d == 3 ? kmax : 1); ++c)
        k2.push_back(static_cast<std::uint64_t>(a * a + (d >= 2 ? b * b : 0) + (d == 3 ? c * c : 0)));
  std::sort(k2.begin(), k2.end());
  std::uint64_t sum = 0;
  for (long i = 0; i < n; ++i) sum += k2[static_cast<std::size_t>(i)];
  return sum;
}

double squared_density_quadrature(const FermiSeaSpec& spec, int nodes) {
  const auto rule = oracle::golub_welsch(nodes, 0.0, spec.ell);
  return oracle::tensor_integrate(spec.dimension, rule, [&](const double* x) {
    double rho = 0.0;
    for (const auto& k : spec.modes) {
      double v = 1.0;
      for (int a = 0; a < spec.dimension; ++a) v *= 2.0 / spec.ell * std::pow(std::sin(pi * k[a] * x[a] / spec.ell), 2);
      rho += v;
    }
    return rho * rho;
  });
}

Outcome fermi_sea() {
  Outcome o;
  std::size_t mismatches = 0;
  for (int d : {1, 2, 3})
    for (long n = 1; n <= 20; ++n)
      if (dirichlet_k2_sum(n, d) != enumerated_k2_sum(n, d)) ++mismatches;
  o.require(mismatches == 0, "shell sums");
  o.detail << "shell mismatches " << mismatches;

  const auto prefix = dirichlet_k2_prefix(100000, 3);
  std::vector<double> xs, ys;
  for (double x : log_space(1e3, 1e5, 21)) {
    const long n = std::lround(x);
    const double energy = pi * pi * static_cast<double>(prefix[static_cast<std::size_t>(n - 1)]);
    xs.push_back(static_cast<double>(n));
    ys.push_back(energy / kinetic_leading(static_cast<double>(n), 1.0, 3) - 1.0);
  }
  const LineFit fit = fit_power_law(xs, ys);
  o.require(std::abs(fit.slope + 1.0 / 3.0) <= 0.05, "finite-size exponent");
  o.detail << ", correction slope " << fit.slope;

  double worst = 0.0;
  for (long n : {1, 2, 3}) {
    const auto spec = make_fermi_sea(n, 1.3, 3);
    worst = std::max(worst, std::abs(density_square_integral(spec) - squared_density_quadrature(spec, 24)));
  }
  o.require(worst < 1e-8, "density square integral");
  bool positive = true;
  for (long n : {10, 100, 1000, 10000, 100000})
    positive = positive && density_square_integral(n, 1.0) > static_cast<double>(n) * static_cast<double>(n);
  o.require(positive, "density excess positivity");
  o.detail << ", density quadrature diff " << worst;
  return o;
}

Outcome determinantal() {
  Outcome o;
  const auto report = determinantal_check(42, 1e-5, 2);
  o.require(report.passed(), "formula mismatch");
  o.require(report.weights >= 20, "weight count");
  o.detail << report.checks.size() << " checks over " << report.weights << " weights, max error " << report.max_error;
  return o;
}

Outcome m_deviation() {
  Outcome o;
  const auto corpus = m_deviation_corpus(100, 42);
  std::size_t violations = 0;
  double worst = 0.0;
  for (const auto& c : corpus) {
    const auto r = evaluate_m_deviation_case(c, kMDeviationConstant);
    if (!r.within) ++violations;
    worst = std::max(worst, r.exact / r.bound);
  }
  o.require(violations == 0, "bound violated");
  o.detail << corpus.size() << " configurations, constant " << kMDeviationConstant << ", worst exact/bound " << worst
           << ", violations " << violations;
  return o;
}

Outcome dyson() {
  Outcome o;
  const double R0 = 0.5, R = 1.5, s = 3.0;
  const double eps[] = {0.1, 0.5};
  std::size_t violations = 0, evaluated = 0;
  double min_rel = 1e300;
  for (int d : {3, 2})
    for (bool barrier : {false, true})
      for (bool field : {false, true}) {
        const auto v = barrier ? RadialPotential::square_barrier(40.0, R0) : RadialPotential::hard_sphere(R0);
        const SoftPotentialKit kit(d, MomentumCutoff{s}, R, R0, solve_zero_energy(v, d).a);
        const std::size_t centres = field ? (d == 3 ? 2 : 3) : 1;
        const std::size_t count = field ? 50 : 100;
        const auto corpus = dyson_corpus(count, d, v, R, 42, centres);
        for (const auto& r : run_dyson_corpus(corpus, v, kit, eps, field, 1e-6)) {
          violations += r.violations;
          evaluated += r.count;
          min_rel = std::min(min_rel, r.min_relative_gap);
        }
      }
  o.require(violations == 0, "gap below tolerance");
  o.detail << evaluated << " (psi, eps) evaluations, min gap/lhs " << min_rel << ", violations " << violations;
  return o;
}

Outcome soft_potential() {
  Outcome o;
  const auto s_values = log_space(10.0, 1000.0, 9);
  const auto f3 = fit_w_bounds(3, 1.0, s_values);
  const auto f2 = fit_w_bounds(2, 1.0, s_values);
  o.require(std::abs(f3.sup_fit.slope + 5.0) <= 0.1, "3D sup slope");
  o.require(std::abs(f2.sup_fit.slope + 4.0) <= 0.1, "2D sup slope");
  o.require(std::abs(f3.int_fit.slope + 2.0) <= 0.1, "3D integral slope");
  o.require(std::abs(f2.int_fit.slope + 2.0) <= 0.1, "2D integral slope");
  o.detail << "sup slopes " << f3.sup_fit.slope << " / " << f2.sup_fit.slope << ", integral slopes "
           << f3.int_fit.slope << " / " << f2.int_fit.slope;

  const double s3 = 0.003, s2 = 0.0003;
  const SoftPotentialKit k3(3, MomentumCutoff{s3}, 0.5 * s3, 0.25 * s3, 0.25 * s3);
  const SoftPotentialKit k2(2, MomentumCutoff{s2}, 0.5 * s2, 0.25 * s2, 0.25 * s2);
  for (const auto* kit : {&k3, &k2}) {
    const auto r10 = lattice_sum_constant(*kit, 10, 42), r100 = lattice_sum_constant(*kit, 100, 42);
    const double ratio = r100.constant / r10.constant;
    o.require(std::abs(ratio - 1.0) <= 0.2, "lattice constant");
    o.detail << ", lattice ratio " << kit->dimension() << "D " << ratio;
  }
  return o;
}

Outcome two_body() {
  Outcome o;
  const double a = 0.005, range = 0.1;
  const std::vector<RadialPotential> shapes{RadialPotential::square_barrier(1.0, range),
                                            RadialPotential::linear_ramp(1.0, range),
                                            RadialPotential::double_step(2.0, 0.5, 0.5 * range, range)};
  double lo = 1e300, hi = -1e300, a_spread = 0.0;
  for (const auto& shape : shapes) {
    const auto tuned = tune_scattering_length(shape, a, 3);
    a_spread = std::max(a_spread, relative(solve_zero_energy(tuned, 3).a, a));
    const auto r = ground_state_energy({tuned, 1.0, 4, 3});
    const double ratio = r.shift() / (pi * a);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
    o.detail << shape.label() << " " << ratio << ", ";
  }
  o.require(a_spread < 1e-8, "equal scattering lengths");
  o.require(lo >= 27.0 * 0.9 && hi <= 27.0 * 1.1, "shift ratio");
  o.detail << "a/l " << a << ", a mismatch " << a_spread;
  return o;
}

Outcome bounds() {
  Outcome o;
  const auto g3 = log_space(1e-30, 1e-22, 17);
  const auto s3 = sweep_bounds(3, g3, 0.5, 1.0);
  o.require(s3.infeasible == 0 && s3.all_sandwiched(), "3D sandwich");
  o.require(std::abs(s3.upper_fit.slope - 2.0 / 9.0) <= 0.02, "3D upper exponent");
  o.require(std::abs(s3.lower_fit.slope - 1.0 / 13.0) <= 0.01, "3D lower exponent");
  o.require(std::log10(g3.back() / g3.front()) >= 4.0, "3D range");
  o.detail << "3D upper " << s3.upper_fit.slope << ", lower " << s3.lower_fit.slope;

  const auto g2 = log_space(1e15, 1e19, 17);
  const auto s2 = sweep_bounds(2, g2, 0.5, 1.0);
  o.require(s2.infeasible == 0 && s2.all_sandwiched(), "2D sandwich");
  o.require(std::abs(s2.upper_reduced_fit.slope + 1.0) <= 0.02, "2D upper slope");
  o.require(s2.upper_log_fit.slope > 100.0 * s2.upper_log_fit.slope_stderr && s2.upper_fit.slope > -1.0,
            "2D ln ln correction");
  o.require(std::abs(s2.lower_fit.slope + 0.1) <= 0.01, "2D lower exponent");
  o.detail << ", 2D upper " << s2.upper_reduced_fit.slope << " (raw " << s2.upper_fit.slope << "), lower "
           << s2.lower_fit.slope;
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome determinism() {
  Outcome o;
  const fs::path fixtures = FERMIGAS_FIXTURE_DIR;
  const std::string hs = (fixtures / "hard_sphere.json").string();
  const std::string weak = (fixtures / "weak_barrier.json").string();
  struct Run {
    std::string args;
    std::vector<std::string> files;
  };
  const std::vector<Run> runs{
      {"scatter --potential " + hs, {"scatter.json", "scatter_profile.csv"}},
      {"fermisea --n 500", {"fermisea.json"}},
      {"fermisea --n 20000 --sweep --points 11 --out sea", {"sea.json", "sea.csv"}},
      {"determinantal-check", {"determinantal_check.json"}},
      {"dyson --potential " + hs + " --corpus 2 --lattice-large 20", {"dyson.json"}},
      {"dyson --dim 2 --potential " + hs + " --corpus 4 --centres 3 --lattice-large 20 --out field.json",
       {"field.json"}},
      {"bounds --gas-sweep 1e-30:1e-22:5", {"bounds.csv", "bounds.json"}},
      {"oracle --potential " + weak + " --cutoff 4 --tol 0.05", {"oracle.json"}},
      {"sweep --a-sweep 0.005:0.005:1 --cutoff 3", {"sweep.csv", "sweep.json"}},
  };
  std::string tmpl = (fs::temp_directory_path() / "fermigas_acceptance_XXXXXX").string();
  if (mkdtemp(tmpl.data()) == nullptr) {
    o.require(false, "temporary directory");
    return o;
  }
  const fs::path root(tmpl);
  std::size_t compared = 0;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    std::array<fs::path, 2> dirs{root / ("a" + std::to_string(i)), root / ("b" + std::to_string(i))};
    for (const auto& dir : dirs) {
      const std::string cmd = std::string("\"") + FERMIGAS_CLI_PATH + "\" --seed 11 --out-dir \"" + dir.string() +
                              "\" " + runs[i].args + " >/dev/null 2>&1";
      const int rc = std::system(cmd.c_str());
      o.require(rc == 0, runs[i].args.substr(0, runs[i].args.find(' ')) + " exit");
    }
    for (const auto& f : runs[i].files) {
      const std::string first = slurp(dirs[0] / f);
      o.require(!first.empty() && first == slurp(dirs[1] / f), f);
      ++compared;
    }
  }
  fs::remove_all(root);
  o.detail << runs.size() << " pipeline runs, " << compared << " files compared byte for byte";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, Outcome (*)()>> criteria{
      {"scattering lengths", scattering_lengths},
      {"scattering integrals", scattering_integrals},
      {"Fermi sea", fermi_sea},
      {"determinantal densities", determinantal},
      {"||1 - M_Y|| bound", m_deviation},
      {"Dyson inequality", dyson},
      {"soft-potential scalings", soft_potential},
      {"two-body oracle", two_body},
      {"bound schedules", bounds},
      {"CLI determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = criteria[i].second();
    } catch (const std::exception& e) {
      out.passed = false;
      out.detail << "exception: " << e.what();
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!out.passed) ++failed;
    std::printf("criterion %2zu %-24s %s  (%.1f s)  %s\n", i + 1, criteria[i].first.c_str(),
                out.passed ? "PASS" : "FAIL", seconds, out.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
