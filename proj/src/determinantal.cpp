#include "fermigas/determinantal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fermigas/errors.hpp"
#include "fermigas/parallel.hpp"
#include "fermigas/quadrature.hpp"
#include "fermigas/random.hpp"

namespace fermigas {

namespace {

constexpr double kPi = std::numbers::pi;

// Orbital values at many points, one row per point; zero outside the box.
Eigen::MatrixXd orbital_table(const FermiSeaSpec& basis, const std::vector<Point>& points) {
  const int d = basis.dimension;
  const auto n = static_cast<Eigen::Index>(basis.modes.size());
  int kmax = 1;
  for (const auto& k : basis.modes)
    for (int a = 0; a < d; ++a) kmax = std::max(kmax, k[a]);
  const double norm = std::pow(2.0 / basis.ell, 0.5 * d);
  Eigen::MatrixXd out(static_cast<Eigen::Index>(points.size()), n);
  std::vector<double> sines(static_cast<std::size_t>(3 * (kmax + 1)));
  for (std::size_t p = 0; p < points.size(); ++p) {
    const Point& x = points[p];
    bool inside = true;
    for (int a = 0; a < d; ++a) inside = inside && x[a] >= 0.0 && x[a] <= basis.ell;
    if (!inside) {
      out.row(static_cast<Eigen::Index>(p)).setZero();
      continue;
    }
    for (int a = 0; a < d; ++a)
      for (int k = 1; k <= kmax; ++k) sines[a * (kmax + 1) + k] = std::sin(kPi * k * x[a] / basis.ell);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto& k = basis.modes[static_cast<std::size_t>(i)];
      double v = norm;
      for (int a = 0; a < d; ++a) v *= sines[a * (kmax + 1) + k[a]];
      out(static_cast<Eigen::Index>(p), i) = v;
    }
  }
  return out;
}

// Weighted Gram matrix sum_p w_p g(x_p) phi(x_p) phi(x_p)^T over the box grid.
Eigen::MatrixXd box_gram(const FermiSeaSpec& basis, const std::function<double(const Point&)>& g,
                         const BoxQuadrature& quad) {
  const double ell = basis.ell;
  const std::array<double, 2> ends{0.0, ell};
  const quad::Rule rule = quad::composite(ends, quad.panels, quad.order);
  const int d = basis.dimension;
  const std::size_t m = rule.size();
  const auto n = static_cast<Eigen::Index>(basis.modes.size());

  // one slab per node of the first axis; slabs are summed in index order
  std::vector<Eigen::MatrixXd> slabs(m, Eigen::MatrixXd::Zero(n, n));
  parallel_for(m, [&](std::size_t i0) {
    std::vector<Point> pts;
    std::vector<double> wts;
    const std::size_t m1 = d >= 2 ? m : 1, m2 = d >= 3 ? m : 1;
    for (std::size_t i1 = 0; i1 < m1; ++i1)
      for (std::size_t i2 = 0; i2 < m2; ++i2) {
        Point x{rule.nodes[i0], d >= 2 ? rule.nodes[i1] : 0.0, d >= 3 ? rule.nodes[i2] : 0.0};
        double w = rule.weights[i0] * (d >= 2 ? rule.weights[i1] : 1.0) * (d >= 3 ? rule.weights[i2] : 1.0);
        w *= g(x);
        if (w == 0.0) continue;
        pts.push_back(x);
        wts.push_back(w);
      }
    if (pts.empty()) return;
    const Eigen::MatrixXd phi = orbital_table(basis, pts);
    const Eigen::Map<const Eigen::VectorXd> wv(wts.data(), static_cast<Eigen::Index>(wts.size()));
    slabs[i0] = phi.transpose() * wv.asDiagonal() * phi;
  });
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  for (const auto& s : slabs) M += s;
  return 0.5 * (M + M.transpose());
}

double symmetric_condition(const Eigen::MatrixXd& M) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff(), hi = es.eigenvalues().maxCoeff();
  if (!(lo > 0.0)) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

}  // namespace

Eigen::MatrixXd overlap_matrix(const FermiSeaSpec& basis, const Weight& h, const BoxQuadrature& quad) {
  return box_gram(basis, [&](const Point& x) {
    const double v = h(x);
    return v * v;
  }, quad);
}

WeightedSlater::WeightedSlater(FermiSeaSpec basis, Weight h, const BoxQuadrature& quad)
    : basis_(std::move(basis)), h_(std::move(h)) {
  M_ = overlap_matrix(basis_, h_, quad);
  factorize();
}

WeightedSlater::WeightedSlater(FermiSeaSpec basis, Weight h, Eigen::MatrixXd M)
    : basis_(std::move(basis)), h_(std::move(h)), M_(std::move(M)) {
  if (M_.rows() != static_cast<Eigen::Index>(basis_.modes.size()) || M_.cols() != M_.rows())
    throw std::invalid_argument("WeightedSlater: overlap matrix has the wrong shape");
  factorize();
}

void WeightedSlater::factorize() {
  condition_ = symmetric_condition(M_);
  singular_ = !(condition_ <= max_condition);
  if (!singular_) M_inv_ = Eigen::FullPivLU<Eigen::MatrixXd>(M_).inverse();
}

double WeightedSlater::norm() const { return Eigen::FullPivLU<Eigen::MatrixXd>(M_).determinant(); }

const Eigen::MatrixXd& WeightedSlater::M_inverse() const {
  if (singular_) throw SingularMatrix("overlap matrix is singular to working precision", condition_);
  return M_inv_;
}

double WeightedSlater::k_particle_density(std::span<const Point> points) const {
  const auto k = static_cast<Eigen::Index>(points.size());
  if (k < 1 || k > static_cast<Eigen::Index>(basis_.modes.size()))
    throw std::invalid_argument("k_particle_density: need 1 <= k <= n points");
  const Eigen::MatrixXd& Minv = M_inverse();
  Eigen::MatrixXd V(M_.rows(), k);
  double weight = 1.0;
  for (Eigen::Index i = 0; i < k; ++i) {
    const Point& x = points[static_cast<std::size_t>(i)];
    V.col(i) = basis_.orbitals(x);
    const double hv = h_(x);
    weight *= hv * hv;
  }
  const Eigen::MatrixXd G = V.transpose() * Minv * V;
  double factorial = 1.0;
  for (Eigen::Index i = 2; i <= k; ++i) factorial *= static_cast<double>(i);
  return weight * G.determinant() / factorial;
}

double slater_norm(const WeightedSlater& ws) { return ws.norm(); }

double k_particle_density(const WeightedSlater& ws, std::span<const Point> points) {
  return ws.k_particle_density(points);
}

double weighted_trace(const FermiSeaSpec& basis, const Weight& h, const Weight& k, const BoxQuadrature& quad) {
  const WeightedSlater ws(basis, h, quad);
  const Eigen::MatrixXd K = box_gram(basis, [&](const Point& x) {
    const double v = k(x);
    return v * v;
  }, quad);
  return ws.norm() * (K * ws.M_inverse()).trace();
}

double m_deviation_expression(double a, double R, double s, double ell, long n) {
  return a * R * R / (s * s * s) + std::pow(static_cast<double>(n), 2.0 / 3.0) * s * s / (ell * ell);
}

Eigen::MatrixXd m_deviation_matrix(const FermiSeaSpec& basis, std::span<const Point> Y, const CutoffProfile& f) {
  const auto n = static_cast<Eigen::Index>(basis.modes.size());
  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(n, n);
  if (Y.empty() || f.is_identity()) return Q;
  const double R = f.R();
  std::vector<double> cuts{0.0};
  for (double b : f.solution().potential.breakpoints())
    if (b > 0.0 && b < R) cuts.push_back(b);
  cuts.push_back(R);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  const quad::Rule radial = quad::composite(cuts, 2, 12);
  std::vector<double> q(radial.size());
  for (std::size_t i = 0; i < radial.size(); ++i) {
    const double fv = f.f(radial.nodes[i]);
    q[i] = 1.0 - fv * fv;
  }
  const int d = basis.dimension;
  for (const Point& y : Y) {
    const quad::PointRule ball = quad::ball_rule(d, radial, 12, 24, y);
    std::vector<double> w(ball.size());
    const std::size_t per_radius = ball.size() / radial.size();
    for (std::size_t p = 0; p < ball.size(); ++p) w[p] = ball.weights[p] * q[p / per_radius];
    const Eigen::MatrixXd phi = orbital_table(basis, ball.points);
    const Eigen::Map<const Eigen::VectorXd> wv(w.data(), static_cast<Eigen::Index>(w.size()));
    Q += phi.transpose() * wv.asDiagonal() * phi;
  }
  return 0.5 * (Q + Q.transpose());
}

MDeviationReport m_deviation(const FermiSeaSpec& basis, std::span<const Point> Y, const CutoffProfile& f,
                             double s, double constant) {
  const double R = f.R();
  if (s < 2.0 * R) throw std::invalid_argument("m_deviation: requires s >= 2R");
  for (std::size_t i = 0; i < Y.size(); ++i)
    for (std::size_t j = i + 1; j < Y.size(); ++j)
      if (distance(Y[i], Y[j]) < s) throw std::invalid_argument("m_deviation: centres closer than s");
  MDeviationReport rep;
  const Eigen::MatrixXd Q = m_deviation_matrix(basis, Y, f);
  if (Q.size() > 0 && !Q.isZero(0.0)) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Q, Eigen::EigenvaluesOnly);
    rep.exact = std::max(0.0, es.eigenvalues().maxCoeff());
  }
  rep.expression = m_deviation_expression(f.a(), R, s, basis.ell, basis.n);
  rep.constant = constant;
  rep.bound = constant * rep.expression;
  rep.within = rep.exact <= rep.bound;
  return rep;
}

std::vector<MDeviationCase> m_deviation_corpus(std::size_t count, unsigned long long seed) {
  Rng rng(seed);
  std::vector<MDeviationCase> out;
  out.reserve(count);
  while (out.size() < count) {
    MDeviationCase c;
    c.n = rng.integer(2, 30);
    c.ell = 1.0;
    c.R = rng.uniform(0.03, 0.15);
    c.s = c.R * rng.uniform(2.0, 5.0);
    c.core = c.R * rng.uniform(0.1, 0.7);
    const long want = rng.integer(1, 6);
    for (int tries = 0; tries < 2000 && static_cast<long>(c.Y.size()) < want; ++tries) {
      const Point y{rng.uniform(0.0, c.ell), rng.uniform(0.0, c.ell), rng.uniform(0.0, c.ell)};
      bool ok = true;
      for (const auto& z : c.Y) ok = ok && distance(y, z) >= c.s;
      if (ok) c.Y.push_back(y);
    }
    out.push_back(std::move(c));
  }
  return out;
}

MDeviationReport evaluate_m_deviation_case(const MDeviationCase& c, double constant) {
  const auto basis = make_fermi_sea(c.n, c.ell, 3);
  const auto sol = solve_zero_energy(RadialPotential::hard_sphere(c.core), 3);
  const CutoffProfile f(sol, c.R);
  return m_deviation(basis, c.Y, f, c.s, constant);
}

CalibrationResult calibrate_m_deviation_constant(std::span<const MDeviationCase> corpus, double margin) {
  CalibrationResult res;
  std::vector<double> ratios(corpus.size(), 0.0);
  parallel_for(corpus.size(), [&](std::size_t i) {
    const auto rep = evaluate_m_deviation_case(corpus[i], 1.0);
    ratios[i] = rep.exact / rep.expression;
  });
  for (double r : ratios) res.max_ratio = std::max(res.max_ratio, r);
  res.constant = margin * res.max_ratio;
  return res;
}

CorrectionFactors correction_factors(double a, double R, double s, double ell, long n, double C_A, double C_B) {
  CorrectionFactors cf;
  cf.a = a;
  cf.R = R;
  cf.s = s;
  cf.ell = ell;
  cf.n = n;
  cf.C_A = C_A;
  cf.C_B = C_B;
  const double dA = 1.0 - C_A * m_deviation_expression(a, R, s, ell, n);
  if (!(dA > 0.0)) throw ScheduleInfeasible("correction factor A_n: denominator is not positive");
  cf.A = 1.0 / dA;
  const double dB = 1.0 - C_B * std::pow(static_cast<double>(n), 8.0 / 3.0) * cf.A * cf.A * std::pow(s / ell, 5);
  if (!(dB > 0.0)) throw ScheduleInfeasible("correction factor B_n: denominator is not positive");
  cf.B = 1.0 / dB;
  return cf;
}

}  // namespace fermigas
