#include "fermigas/twobody.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <boost/math/tools/roots.hpp>
#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "fermigas/parallel.hpp"
#include "fermigas/quadrature.hpp"
#include "fermigas/scattering.hpp"

namespace fermigas {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kMaxBasis = 8000;

// int_t^ell cos(c u + phi) du
double cos_segment(double c, double phi, double t, double ell) {
  if (c == 0.0) return (ell - t) * std::cos(phi);
  return (std::sin(c * ell + phi) - std::sin(c * t + phi)) / c;
}

// K_pq(t) = int cos(p pi x / ell) cos(q pi (x - t) / ell) dx over the overlap, t >= 0.
double shifted_overlap(int p, int q, double t, double ell) {
  if (t >= ell) return 0.0;
  const double a = p * kPi / ell;
  const double b = q * kPi / ell;
  return 0.5 * (cos_segment(a + b, -b * t, t, ell) + cos_segment(a - b, b * t, t, ell));
}

// Nodes in the positive octant (quadrant) of the ball; the integrand is summed over
// all sign flips through the symmetrised overlap, so the weights cover one sector.
struct SectorRule {
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;  // already multiplied by v
};

SectorRule sector_rule(const RadialPotential& v, int dimension, const TwoBodyOptions& opt) {
  std::vector<double> breaks{0.0, v.range()};
  for (double b : v.breakpoints())
    if (b > 0.0 && b < v.range()) breaks.push_back(b);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  const quad::Rule radial = quad::composite(breaks, opt.radial_panels, opt.radial_order);
  const quad::Rule angle = quad::gauss_legendre(opt.angular_points, 0.0, 0.5 * kPi);

  SectorRule rule;
  for (std::size_t i = 0; i < radial.size(); ++i) {
    const double r = radial.nodes[i];
    const double lo = breaks[static_cast<std::size_t>(
        std::upper_bound(breaks.begin(), breaks.end(), r) - breaks.begin() - 1)];
    const double hi = *std::upper_bound(breaks.begin(), breaks.end(), r);
    const double vr = v.evaluate_within(r, lo, hi);
    if (vr == 0.0) continue;
    for (std::size_t a = 0; a < angle.size(); ++a) {
      const double phi = angle.nodes[a];
      if (dimension == 2) {
        rule.points.push_back({r * std::cos(phi), r * std::sin(phi), 0.0});
        rule.weights.push_back(radial.weights[i] * angle.weights[a] * r * vr);
        continue;
      }
      for (std::size_t b = 0; b < angle.size(); ++b) {
        const double theta = angle.nodes[b];
        const double st = std::sin(theta);
        rule.points.push_back({r * st * std::cos(phi), r * st * std::sin(phi), r * std::cos(theta)});
        rule.weights.push_back(radial.weights[i] * angle.weights[a] * angle.weights[b] * r * r * st * vr);
      }
    }
  }
  return rule;
}

// T[alpha_1, ..., alpha_d] with alpha = p * P + q, P = 2K + 1:
// int v(|r|) prod_i K_{p_i q_i}(r_i) dr over the whole ball.
std::vector<double> overlap_tensor(const TwoBodyProblem& pb, const TwoBodyOptions& opt) {
  const int d = pb.dimension;
  const int P = 2 * pb.cutoff + 1;
  const Eigen::Index A = static_cast<Eigen::Index>(P) * P;
  const SectorRule rule = sector_rule(pb.potential, d, opt);
  const auto N = static_cast<Eigen::Index>(rule.points.size());

  std::vector<Eigen::MatrixXd> S(static_cast<std::size_t>(d), Eigen::MatrixXd(N, A));
  parallel_for(static_cast<std::size_t>(N), [&](std::size_t n) {
    for (int i = 0; i < d; ++i) {
      const double t = rule.points[n][static_cast<std::size_t>(i)];
      for (int p = 0; p < P; ++p)
        for (int q = 0; q < P; ++q)
          S[static_cast<std::size_t>(i)](static_cast<Eigen::Index>(n), p * P + q) =
              shifted_overlap(p, q, t, pb.ell) + shifted_overlap(q, p, t, pb.ell);
    }
  });
  const Eigen::VectorXd W = Eigen::Map<const Eigen::VectorXd>(rule.weights.data(), N);

  if (d == 2) {
    std::vector<double> T(static_cast<std::size_t>(A * A));
    Eigen::Map<Eigen::MatrixXd> Tm(T.data(), A, A);  // column-major: T[a1 * A + a2] = Tm(a2, a1)
    Tm.noalias() = S[1].transpose() * W.asDiagonal() * S[0];
    return T;
  }
  std::vector<double> T(static_cast<std::size_t>(A * A * A));
  parallel_for(static_cast<std::size_t>(A), [&](std::size_t a1) {
    const Eigen::VectorXd w1 = W.cwiseProduct(S[0].col(static_cast<Eigen::Index>(a1)));
    Eigen::Map<Eigen::MatrixXd> slice(T.data() + a1 * static_cast<std::size_t>(A * A), A, A);
    slice.noalias() = S[2].transpose() * w1.asDiagonal() * S[1];
  });
  return T;
}

struct PairBasis {
  std::vector<std::array<int, 2>> pairs;  // (n, m), n + m even
};

PairBasis pair_basis(int k) {
  PairBasis basis;
  for (int n = 1; n <= k; ++n)
    for (int m = 1; m <= k; ++m)
      if ((n + m) % 2 == 0) basis.pairs.push_back({n, m});
  return basis;
}

struct Term {
  std::size_t alpha;
  double coefficient;
};

// Expansion of phi_n phi_n' (x) phi_m phi_m' (y) in cos(p pi x / ell) cos(q pi y / ell), times ell^2.
std::vector<std::vector<Term>> axis_terms(const PairBasis& basis, int P) {
  const std::size_t np = basis.pairs.size();
  std::vector<std::vector<Term>> terms(np * np);
  for (std::size_t s = 0; s < np; ++s)
    for (std::size_t t = 0; t < np; ++t) {
      const auto [n, m] = basis.pairs[s];
      const auto [n2, m2] = basis.pairs[t];
      const int ps[2] = {std::abs(n - n2), n + n2};
      const int qs[2] = {std::abs(m - m2), m + m2};
      auto& out = terms[s * np + t];
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          out.push_back({static_cast<std::size_t>(ps[i] * P + qs[j]), (i == 0 ? 1.0 : -1.0) * (j == 0 ? 1.0 : -1.0)});
    }
  return terms;
}

Eigen::MatrixXd hamiltonian(const TwoBodyProblem& pb, int k, const std::vector<double>& T) {
  const int d = pb.dimension;
  const int P = 2 * pb.cutoff + 1;
  const std::size_t A = static_cast<std::size_t>(P) * P;
  const PairBasis basis = pair_basis(k);
  const std::size_t np = basis.pairs.size();
  const std::size_t J = np * np;
  const auto terms = axis_terms(basis, P);

  // Contract the last alpha axis first: layout [alphas..., js...].
  std::vector<double> Z = T;
  std::size_t inner = 1;
  for (int r = 0; r < d; ++r) {
    std::size_t outer = 1;
    for (int i = 0; i < d - r - 1; ++i) outer *= A;
    std::vector<double> next(outer * J * inner, 0.0);
    parallel_for(J, [&](std::size_t j) {
      for (std::size_t o = 0; o < outer; ++o) {
        double* dst = next.data() + (o * J + j) * inner;
        for (const Term& term : terms[j]) {
          const double* src = Z.data() + (o * A + term.alpha) * inner;
          for (std::size_t x = 0; x < inner; ++x) dst[x] += term.coefficient * src[x];
        }
      }
    });
    Z.swap(next);
    inner *= J;
  }

  std::size_t N = 1;
  for (int i = 0; i < d; ++i) N *= np;
  const double scale = std::pow(pb.ell, -2.0 * d);
  Eigen::MatrixXd H(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(N));
  parallel_for(N, [&](std::size_t row) {
    std::array<std::size_t, 3> s{};
    std::size_t rest = row;
    for (int i = d - 1; i >= 0; --i) {
      s[static_cast<std::size_t>(i)] = rest % np;
      rest /= np;
    }
    for (std::size_t col = 0; col < N; ++col) {
      std::size_t c = col, z = 0, stride = 1;
      for (int i = d - 1; i >= 0; --i) {
        const std::size_t t = c % np;
        c /= np;
        z += (s[static_cast<std::size_t>(i)] * np + t) * stride;
        stride *= J;
      }
      H(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = scale * Z[z];
    }
    double kinetic = 0.0;
    for (int i = 0; i < d; ++i) {
      const auto [n, m] = basis.pairs[s[static_cast<std::size_t>(i)]];
      kinetic += static_cast<double>(n * n + m * m);
    }
    H(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(row)) += kinetic * kPi * kPi / (pb.ell * pb.ell);
  });
  return H;
}

// Lanczos with full reorthogonalisation started from the free ground state (index 0).
double lowest_eigenvalue_lanczos(const Eigen::MatrixXd& H, double tol) {
  const Eigen::Index N = H.rows();
  const Eigen::Index max_steps = std::min<Eigen::Index>(N, 800);
  Eigen::MatrixXd Q(N, max_steps);
  std::vector<double> alpha, beta;
  Q.col(0).setZero();
  Q(0, 0) = 1.0;
  Eigen::VectorXd w(N);
  double theta = 0.0;
  for (Eigen::Index j = 0; j < max_steps; ++j) {
    w.noalias() = H * Q.col(j);
    alpha.push_back(Q.col(j).dot(w));
    for (int pass = 0; pass < 2; ++pass) w -= Q.leftCols(j + 1) * (Q.leftCols(j + 1).transpose() * w);
    const double b = w.norm();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
    const Eigen::VectorXd diag = Eigen::Map<Eigen::VectorXd>(alpha.data(), j + 1);
    const Eigen::VectorXd sub = beta.empty() ? Eigen::VectorXd() : Eigen::VectorXd(Eigen::Map<Eigen::VectorXd>(beta.data(), j));
    tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    theta = tri.eigenvalues()(0);
    const double residual = b * std::abs(tri.eigenvectors()(j, 0));
    if (residual <= tol * std::max(1.0, std::abs(theta)) || b <= tol * std::max(1.0, std::abs(theta))) return theta;
    if (j + 1 == max_steps) break;
    beta.push_back(b);
    Q.col(j + 1) = w / b;
  }
  throw std::runtime_error("two-body eigensolver did not converge");
}

double lowest_eigenvalue(const Eigen::MatrixXd& H, const TwoBodyOptions& opt) {
  if (H.rows() <= opt.dense_limit) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(H, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw std::runtime_error("two-body eigensolver did not converge");
    return solver.eigenvalues()(0);
  }
  return lowest_eigenvalue_lanczos(H, opt.eigen_tolerance);
}

}  // namespace

void TwoBodyProblem::validate() const {
  if (dimension != 2 && dimension != 3) throw std::invalid_argument("two-body dimension must be 2 or 3");
  if (!(ell > 0.0) || !std::isfinite(ell)) throw std::invalid_argument("box length must be positive");
  if (cutoff < 2) throw std::invalid_argument("basis cutoff must be at least 2");
  if (potential.has_hard_core())
    throw std::invalid_argument("two-body oracle needs a soft potential; hard cores are not representable");
  if (!(potential.range() < ell)) throw std::invalid_argument("potential range must be shorter than the box");
  std::size_t N = 1;
  for (int i = 0; i < dimension; ++i) N *= pair_basis(cutoff).pairs.size();
  if (N > kMaxBasis)
    throw std::invalid_argument("basis of " + std::to_string(N) + " states exceeds the limit of " +
                                std::to_string(kMaxBasis));
}

double free_two_body_energy(double ell, int dimension) {
  return 2.0 * dimension * kPi * kPi / (ell * ell);
}

double pseudopotential_prediction(double a, double ell, int dimension) {
  if (!(a >= 0.0)) throw std::invalid_argument("scattering length must be non-negative");
  if (dimension != 2 && dimension != 3) throw std::invalid_argument("dimension must be 2 or 3");
  const double overlap = std::pow(1.5 / ell, dimension);  // int |phi_1|^4
  const double free = free_two_body_energy(ell, dimension);
  if (a == 0.0) return free;
  if (dimension == 3) return free + 8.0 * kPi * a * overlap;
  const double rho = 2.0 / (ell * ell);
  return free + 8.0 * kPi / std::abs(std::log(rho * a * a)) * overlap;
}

TwoBodyResult ground_state_energy(const TwoBodyProblem& problem, const TwoBodyOptions& options) {
  problem.validate();
  TwoBodyResult result;
  result.free_energy = free_two_body_energy(problem.ell, problem.dimension);

  std::vector<double> T;
  if (!problem.potential.is_identically_zero()) T = overlap_tensor(problem, options);
  else {
    const std::size_t A = static_cast<std::size_t>(2 * problem.cutoff + 1) * (2 * problem.cutoff + 1);
    T.assign(problem.dimension == 2 ? A * A : A * A * A, 0.0);
  }

  for (int k = 2; k <= problem.cutoff; ++k) {
    const Eigen::MatrixXd H = hamiltonian(problem, k, T);
    result.trace.push_back({k, static_cast<std::size_t>(H.rows()), lowest_eigenvalue(H, options)});
  }
  result.energy = result.trace.back().energy;
  const double previous = result.trace[result.trace.size() - 2].energy;
  result.relative_change = std::abs(previous - result.energy) / std::abs(result.energy);
  result.converged = result.relative_change < options.convergence_tolerance;
  return result;
}

RadialPotential tune_scattering_length(const RadialPotential& shape, double a, int dimension) {
  if (!(a > 0.0)) throw std::invalid_argument("target scattering length must be positive");
  if (shape.has_hard_core() || shape.tail_is_zero())
    throw std::invalid_argument("tuning needs a soft potential with a non-zero tail");
  auto length = [&](double factor) { return solve_zero_energy(shape.with_strength(factor), dimension).a; };
  double lo = 1.0, hi = 1.0;
  while (length(lo) > a) {
    lo *= 0.5;
    if (lo < 1e-30) throw std::invalid_argument("target scattering length is unreachable");
  }
  while (length(hi) < a) {
    hi *= 2.0;
    if (hi > 1e30) throw std::invalid_argument("target scattering length is unreachable");
  }
  if (lo == hi) return shape.with_strength(lo);
  std::uintmax_t iterations = 200;
  const auto [f_lo, f_hi] = boost::math::tools::toms748_solve(
      [&](double f) { return length(f) - a; }, lo, hi, boost::math::tools::eps_tolerance<double>(48), iterations);
  return shape.with_strength(0.5 * (f_lo + f_hi));
}

nlohmann::json to_json(const TwoBodyResult& result) {
  nlohmann::json trace = nlohmann::json::array();
  for (const auto& e : result.trace)
    trace.push_back({{"cutoff", e.cutoff}, {"basis_size", e.basis_size}, {"energy", e.energy}});
  return {{"energy", result.energy},
          {"free_energy", result.free_energy},
          {"shift", result.shift()},
          {"trace", trace},
          {"relative_change", result.relative_change},
          {"converged", result.converged}};
}

}  // namespace fermigas
