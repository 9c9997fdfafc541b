#include "fermigas/soft_potential.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <unordered_map>

#include <boost/math/special_functions/bessel.hpp>

#include "fermigas/parallel.hpp"
#include "fermigas/quadrature.hpp"
#include "fermigas/random.hpp"

namespace fermigas {

namespace {

constexpr double kPi = std::numbers::pi;

// Unit-kernel table layout: spacing kFine on [0, kSwitch], kCoarse beyond.
constexpr double kFine = 0.01;
constexpr double kCoarse = 0.05;
constexpr double kSwitch = 30.0;
constexpr double kTableEnd = 300.0;
constexpr double kTailStart = 15.0;
constexpr double kTailRelative = 1e-12;

double j0_spherical(double x) {
  if (std::abs(x) < 1e-4) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

double j0_spherical_derivative(double x) {
  if (std::abs(x) < 1e-3) return -x / 3.0 + x * x * x / 30.0;
  return (x * std::cos(x) - std::sin(x)) / (x * x);
}

struct Cubic {
  // p(t) = c0 + c1 t + c2 t^2 + c3 t^3 on t in [0, w]
  double c0, c1, c2, c3;

  [[nodiscard]] double value(double t) const { return c0 + t * (c1 + t * (c2 + t * c3)); }
  [[nodiscard]] double slope(double t) const { return c1 + t * (2.0 * c2 + t * 3.0 * c3); }

  // Extremes on [t0, t1].
  [[nodiscard]] std::pair<double, double> extremes(double t0, double t1) const {
    double lo = std::min(value(t0), value(t1)), hi = std::max(value(t0), value(t1));
    const double A = 3.0 * c3, B = 2.0 * c2, C = c1;
    auto visit = [&](double t) {
      if (t > t0 && t < t1) {
        const double v = value(t);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    };
    if (std::abs(A) < 1e-300) {
      if (std::abs(B) > 1e-300) visit(-C / B);
    } else {
      const double disc = B * B - 4.0 * A * C;
      if (disc >= 0.0) {
        const double q = -0.5 * (B + std::copysign(std::sqrt(disc), B));
        visit(q / A);
        if (q != 0.0) visit(C / q);
      }
    }
    return {lo, hi};
  }

  [[nodiscard]] double max_abs_slope(double w) const {
    double m = std::max(std::abs(slope(0.0)), std::abs(slope(w)));
    if (std::abs(c3) > 1e-300) {
      const double tv = -c2 / (3.0 * c3);
      if (tv > 0.0 && tv < w) m = std::max(m, std::abs(slope(tv)));
    }
    return m;
  }
};

Cubic hermite(double y0, double d0, double y1, double d1, double w) {
  const double dy = (y1 - y0) / w;
  return {y0, d0, (3.0 * dy - 2.0 * d0 - d1) / w, (d0 + d1 - 2.0 * dy) / (w * w)};
}

}  // namespace

double MomentumCutoff::l(double p) { return quad::smooth_step(std::abs(p) - 1.0); }

double MomentumCutoff::chi(double p) const {
  if (is_identity()) return 1.0;
  return l(s * p);
}

double TailEnvelope::operator()(double r) const {
  return amplitude * std::pow(s, -dimension) * std::exp(-rate * std::sqrt(std::max(r, 0.0) / s));
}

struct CutoffKernel::Table {
  int dimension = 3;
  std::vector<double> r, h, dh;
  std::vector<Cubic> pieces;
  double truncation = kTableEnd;
  double sup_abs_dh = 0.0;
  double integral = 0.0;
  TailEnvelope tail;

  [[nodiscard]] std::size_t piece_of(double t) const {
    std::size_t i;
    const auto fine = static_cast<std::size_t>(std::lround(kSwitch / kFine));
    if (t < kSwitch) i = static_cast<std::size_t>(t / kFine);
    else i = fine + static_cast<std::size_t>((t - kSwitch) / kCoarse);
    return std::min(i, pieces.size() - 1);
  }

  [[nodiscard]] double value(double t) const {
    if (t >= truncation) return 0.0;
    const std::size_t i = piece_of(t);
    return pieces[i].value(t - r[i]);
  }

  [[nodiscard]] double slope(double t) const {
    if (t >= truncation) return 0.0;
    const std::size_t i = piece_of(t);
    return pieces[i].slope(t - r[i]);
  }

  [[nodiscard]] std::pair<double, double> range(double t0, double t1) const {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    auto merge = [&](std::pair<double, double> e) {
      lo = std::min(lo, e.first);
      hi = std::max(hi, e.second);
    };
    const double a = std::min(t0, truncation), b = std::min(t1, truncation);
    if (b > a) {
      const std::size_t i0 = piece_of(a), i1 = piece_of(b);
      for (std::size_t i = i0; i <= i1; ++i) {
        const double w = r[i + 1] - r[i];
        const double lo_t = std::max(a - r[i], 0.0), hi_t = std::min(b - r[i], w);
        if (hi_t >= lo_t) merge(pieces[i].extremes(lo_t, hi_t));
      }
    } else {
      merge({value(a), value(a)});
    }
    if (t1 >= truncation) merge({0.0, 0.0});
    return {lo, hi};
  }
};

std::pair<double, double> CutoffKernel::unit_kernel_direct(double r, int dimension) {
  if (dimension != 2 && dimension != 3) throw std::invalid_argument("CutoffKernel: dimension must be 2 or 3");
  // On [0, 1] the momentum weight is 1 and the radial integrals are closed form.
  double h, dh;
  if (dimension == 3) {
    if (r < 1e-3) {
      h = 1.0 / 3.0 - r * r / 30.0;
      dh = -r / 15.0 + r * r * r / 210.0;
    } else {
      const double A = std::sin(r) - r * std::cos(r);
      h = A / (r * r * r);
      dh = (r * r * std::sin(r) - 3.0 * A) / (r * r * r * r);
    }
  } else {
    if (r < 1e-3) {
      h = 0.5 - r * r / 16.0;
      dh = -r / 8.0 + r * r * r / 96.0;
    } else {
      h = boost::math::cyl_bessel_j(1, r) / r;
      dh = -boost::math::cyl_bessel_j(2, r) / r;
    }
  }
  const std::array<double, 2> ends{1.0, 2.0};
  const quad::Rule rule = quad::composite(ends, static_cast<int>(std::ceil(r / 12.0)) + 8, 20);
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double p = rule.nodes[i];
    const double w = rule.weights[i] * (1.0 - MomentumCutoff::l(p));
    if (w == 0.0) continue;
    if (dimension == 3) {
      h += w * p * p * j0_spherical(p * r);
      dh += w * p * p * p * j0_spherical_derivative(p * r);
    } else {
      h += w * p * boost::math::cyl_bessel_j(0, p * r);
      dh -= w * p * p * boost::math::cyl_bessel_j(1, p * r);
    }
  }
  if (dimension == 3) {
    const double c = 4.0 * kPi * std::pow(2.0 * kPi, -1.5);
    h *= c;
    dh *= c;
  }
  return {h, dh};
}

namespace {

std::shared_ptr<const CutoffKernel::Table> build_table(int dimension) {
  auto t = std::make_shared<CutoffKernel::Table>();
  t->dimension = dimension;
  const auto fine = static_cast<std::size_t>(std::lround(kSwitch / kFine));
  const auto coarse = static_cast<std::size_t>(std::lround((kTableEnd - kSwitch) / kCoarse));
  for (std::size_t k = 0; k < fine; ++k) t->r.push_back(kFine * static_cast<double>(k));
  for (std::size_t k = 0; k <= coarse; ++k) t->r.push_back(kSwitch + kCoarse * static_cast<double>(k));
  const std::size_t n = t->r.size();
  t->h.assign(n, 0.0);
  t->dh.assign(n, 0.0);
  parallel_for(n, [&](std::size_t i) {
    const auto [h, dh] = CutoffKernel::unit_kernel_direct(t->r[i], dimension);
    t->h[i] = h;
    t->dh[i] = dh;
  });
  t->pieces.reserve(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i)
    t->pieces.push_back(hermite(t->h[i], t->dh[i], t->h[i + 1], t->dh[i + 1], t->r[i + 1] - t->r[i]));

  // Tail envelope A exp(-c sqrt(r)): c from a fit to the local maxima of |h|,
  // then A raised until every tabulated |h| beyond the start lies below it.
  std::vector<double> xs, ys;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double v = std::abs(t->h[i]);
    if (t->r[i] >= kTailStart && v >= std::abs(t->h[i - 1]) && v >= std::abs(t->h[i + 1]) && v > 1e-15) {
      xs.push_back(std::sqrt(t->r[i]));
      ys.push_back(std::log(v));
    }
  }
  TailEnvelope env;
  env.dimension = dimension;
  env.s = 1.0;
  env.start = kTailStart;
  env.rate = xs.size() >= 2 ? std::max(0.0, -fit_line(xs, ys).slope) : 0.0;
  for (std::size_t i = 0; i < n; ++i)
    if (t->r[i] >= kTailStart)
      env.amplitude = std::max(env.amplitude, std::abs(t->h[i]) * std::exp(env.rate * std::sqrt(t->r[i])));
  const double peak = std::abs(t->h[0]);
  double trunc = kTableEnd;
  if (env.rate > 0.0 && env.amplitude > 0.0) {
    const double root = std::log(env.amplitude / (kTailRelative * peak)) / env.rate;
    trunc = std::clamp(root * root, kTailStart, kTableEnd);
  }
  env.truncation = trunc;
  t->truncation = trunc;
  t->tail = env;

  for (std::size_t i = 0; i < t->pieces.size() && t->r[i] < trunc; ++i)
    t->sup_abs_dh = std::max(t->sup_abs_dh, t->pieces[i].max_abs_slope(t->r[i + 1] - t->r[i]));

  // three-point Gauss on every piece is exact for cubic * r^(d-1)
  static const double g3x[3] = {-std::sqrt(0.6), 0.0, std::sqrt(0.6)};
  static const double g3w[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
  double total = 0.0;
  for (std::size_t i = 0; i < t->pieces.size() && t->r[i] < trunc; ++i) {
    const double w = t->r[i + 1] - t->r[i];
    for (int q = 0; q < 3; ++q) {
      const double u = 0.5 * w * (1.0 + g3x[q]);
      const double x = t->r[i] + u;
      total += 0.5 * w * g3w[q] * t->pieces[i].value(u) * std::pow(x, dimension - 1);
    }
  }
  t->integral = quad::unit_sphere_area(dimension) * total;
  return t;
}

std::shared_ptr<const CutoffKernel::Table> unit_table(int dimension) {
  static const auto t3 = build_table(3);
  if (dimension == 3) return t3;
  static const auto t2 = build_table(2);
  return t2;
}

}  // namespace

CutoffKernel::CutoffKernel(MomentumCutoff cutoff, int dimension) : cutoff_(cutoff), dimension_(dimension) {
  if (dimension != 2 && dimension != 3) throw std::invalid_argument("CutoffKernel: dimension must be 2 or 3");
  if (!(cutoff.s > 0.0)) throw std::invalid_argument("CutoffKernel: s must be positive");
  if (cutoff.is_identity()) {
    tail_.dimension = dimension;
    tail_.s = 1.0;
    return;
  }
  table_ = unit_table(dimension);
  tail_ = table_->tail;
  tail_.s = cutoff.s;
  tail_.start *= cutoff.s;
  tail_.truncation *= cutoff.s;
}

double CutoffKernel::h(double r) const {
  if (!table_) return 0.0;
  const double s = cutoff_.s;
  return std::pow(s, -dimension_) * table_->value(std::abs(r) / s);
}

double CutoffKernel::dh(double r) const {
  if (!table_) return 0.0;
  const double s = cutoff_.s;
  return std::pow(s, -dimension_ - 1) * table_->slope(std::abs(r) / s);
}

std::pair<double, double> CutoffKernel::range(double t0, double t1) const {
  if (!table_) return {0.0, 0.0};
  if (t0 > t1) std::swap(t0, t1);
  const double s = cutoff_.s, scale = std::pow(s, -dimension_);
  const auto [lo, hi] = table_->range(std::max(t0, 0.0) / s, std::max(t1, 0.0) / s);
  return {scale * lo, scale * hi};
}

double CutoffKernel::sup_abs_dh() const {
  if (!table_) return 0.0;
  return std::pow(cutoff_.s, -dimension_ - 1) * table_->sup_abs_dh;
}

double CutoffKernel::integral() const { return table_ ? table_->integral : 0.0; }

AnnulusU annulus_U(double R0, double R, double a, int dimension) {
  if (dimension != 2 && dimension != 3) throw std::invalid_argument("annulus_U: dimension must be 2 or 3");
  if (!(R > R0) || R0 < 0.0) throw std::invalid_argument("annulus_U: requires R > R0 >= 0");
  if (a < 0.0 || a > R0 * (1.0 + 1e-12)) throw std::invalid_argument("annulus_U: requires 0 <= a <= R0");
  AnnulusU u;
  u.dimension = dimension;
  u.R0 = R0;
  u.R = R;
  u.a = a;
  if (dimension == 3) {
    u.value = 3.0 / (R * R * R - R0 * R0 * R0);
    u.integral = 4.0 * kPi / 3.0 * (R * R * R - R0 * R0 * R0) * u.value;
    return u;
  }
  if (!(a > 0.0)) throw std::invalid_argument("annulus_U: 2D requires a > 0");
  auto term = [&](double r) { return r > 0.0 ? r * r * (std::log(r * r / (a * a)) - 1.0) : 0.0; };
  u.nu = 0.25 * (term(R) - term(R0));
  u.value = 1.0 / u.nu;
  u.nu_lower = 0.5 * (R * R - R0 * R0) * (std::log(R / a) - 0.5);
  u.nu_upper = 0.5 * R * R * std::log(R / a);
  u.sandwich_holds = u.nu_lower <= u.nu * (1.0 + 1e-14) && u.nu <= u.nu_upper * (1.0 + 1e-14);
  u.integral = kPi * (R * R - R0 * R0) * u.value;
  const std::array<double, 2> ends{R0, R};
  const quad::Rule rule = quad::composite(ends, 8, 20);
  double m = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i)
    m += rule.weights[i] * rule.nodes[i] * std::log(rule.nodes[i] / a);
  u.log_moment = 2.0 * kPi * u.value * m;
  return u;
}

SoftPotentialKit::SoftPotentialKit(int dimension, MomentumCutoff cutoff, double R, double R0, double a,
                                   double max_R_over_s)
    : kernel_(cutoff, dimension), R_(R), U_(annulus_U(R0, R, a, dimension)) {
  if (!cutoff.is_identity() && R > max_R_over_s * cutoff.s)
    throw std::invalid_argument("SoftPotentialKit: requires R <= c s");
  c_d_ = dimension == 3 ? 2.0 / (kPi * kPi) : 2.0 / kPi;
  if (cutoff.is_identity()) return;
  const double s = cutoff.s;
  support_ = kernel_.truncation_radius() + R;

  // radial integral of f_R with panels matched to the table spacing
  const double S = quad::unit_sphere_area(dimension);
  std::vector<double> cuts;
  for (double x = 0.0; x < kSwitch * s; x += 2.0 * kFine * s) cuts.push_back(x);
  for (double x = kSwitch * s; x < support_; x += 2.0 * kCoarse * s) cuts.push_back(x);
  cuts.push_back(support_);
  const quad::Rule rule = quad::composite(cuts, 1, 8);
  std::vector<double> terms(rule.size());
  parallel_for(rule.size(), [&](std::size_t i) {
    const double r = rule.nodes[i];
    terms[i] = rule.weights[i] * f_exact(r) * std::pow(r, dimension - 1);
  });
  double total = 0.0;
  for (double v : terms) total += v;
  integral_f_ = S * total;

  dr_ = 0.002 * s;
  const auto count = static_cast<std::size_t>(std::ceil(support_ / dr_)) + 2;
  f_table_.assign(count, 0.0);
  parallel_for(count, [&](std::size_t i) { f_table_[i] = f_exact(dr_ * static_cast<double>(i)); });
  const auto it = std::max_element(f_table_.begin(), f_table_.end());
  const double r_peak = dr_ * static_cast<double>(it - f_table_.begin());
  double f_max = *it;
  for (int k = -100; k <= 100; ++k) f_max = std::max(f_max, f_exact(std::max(0.0, r_peak + k * dr_ / 100.0)));
  sup_w_ = c_d_ * integral_f_ * f_max;
}

double envelope_f_R(const CutoffKernel& kernel, double R, double r) {
  if (kernel.cutoff().is_identity() || R <= 0.0) return 0.0;
  r = std::abs(r);
  if (r - R >= kernel.truncation_radius()) return 0.0;
  const double hv = kernel.h(r);
  const auto [lo, hi] = kernel.range(std::max(0.0, r - R), r + R);
  return std::max({hi - hv, hv - lo, 0.0});
}

double SoftPotentialKit::w_exact(double r) const { return c_d_ * integral_f_ * f_exact(r); }

double SoftPotentialKit::f(double r) const {
  if (f_table_.empty()) return 0.0;
  const double x = std::abs(r) / dr_;
  const auto i = static_cast<std::size_t>(x);
  if (i + 1 >= f_table_.size()) return 0.0;
  const double t = x - static_cast<double>(i);
  return (1.0 - t) * f_table_[i] + t * f_table_[i + 1];
}

double SoftPotentialKit::w(double r) const { return c_d_ * integral_f_ * f(r); }

double SoftPotentialKit::u_coefficient() const { return dimension() == 3 ? U_.a : 1.0; }

double SoftPotentialKit::w_coefficient() const {
  return dimension() == 3 ? U_.a : U_.integral / (2.0 * kPi);
}

// Nearest-neighbour queries on a uniform cell list.

namespace {

struct CellList {
  double cell;
  std::unordered_map<long long, std::vector<std::size_t>> cells;

  static long long key(long long i, long long j, long long k) {
    return (i & 0x1fffff) | ((j & 0x1fffff) << 21) | ((k & 0x1fffff) << 42);
  }
  [[nodiscard]] std::array<long long, 3> index(const Point& p) const {
    return {static_cast<long long>(std::floor(p[0] / cell)), static_cast<long long>(std::floor(p[1] / cell)),
            static_cast<long long>(std::floor(p[2] / cell))};
  }
  CellList(std::span<const Point> pts, double c) : cell(c) {
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const auto ix = index(pts[i]);
      cells[key(ix[0], ix[1], ix[2])].push_back(i);
    }
  }
};

}  // namespace

std::vector<std::size_t> isolated_points(std::span<const Point> points, double R) {
  std::vector<std::size_t> out;
  if (R <= 0.0) {
    for (std::size_t i = 0; i < points.size(); ++i) out.push_back(i);
    return out;
  }
  const double d2 = 2.0 * R;
  const CellList cl(points, d2);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto ix = cl.index(points[i]);
    bool isolated = true;
    for (long long a = -1; a <= 1 && isolated; ++a)
      for (long long b = -1; b <= 1 && isolated; ++b)
        for (long long c = -1; c <= 1 && isolated; ++c) {
          const auto it = cl.cells.find(CellList::key(ix[0] + a, ix[1] + b, ix[2] + c));
          if (it == cl.cells.end()) continue;
          for (std::size_t j : it->second)
            if (j != i && distance(points[i], points[j]) < d2) {
              isolated = false;
              break;
            }
        }
    if (isolated) out.push_back(i);
  }
  return out;
}

std::size_t nearest_neighbor_count_I_R(std::span<const Point> points, double R) {
  return points.size() - isolated_points(points, R).size();
}

std::size_t nearest_neighbor_count_brute(std::span<const Point> points, double R) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = 0; j < points.size(); ++j)
      if (j != i && distance(points[i], points[j]) < 2.0 * R) {
        ++count;
        break;
      }
  return count;
}

SoftField::SoftField(std::span<const Point> Y, const SoftPotentialKit& kit, double eps) : kit_(&kit), eps_(eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("soft_field_W_Y: eps must lie in (0, 1)");
  for (std::size_t i : isolated_points(Y, kit.R())) kept_.push_back(Y[i]);
}

double SoftField::u_sum(const Point& x) const {
  double t = 0.0;
  for (const auto& y : kept_) t += kit_->U()(distance(x, y));
  return t;
}

double SoftField::w_sum(const Point& x) const {
  double t = 0.0;
  for (const auto& y : kept_) t += kit_->w(distance(x, y));
  return t;
}

double SoftField::operator()(const Point& x) const {
  return (1.0 - eps_) * kit_->u_coefficient() * u_sum(x) - kit_->w_coefficient() / eps_ * w_sum(x);
}

SoftField soft_field_W_Y(std::span<const Point> Y, const SoftPotentialKit& kit, double eps) {
  return {Y, kit, eps};
}

double lattice_sum_sup(const SoftPotentialKit& kit, std::span<const Point> Y) {
  if (Y.empty() || kit.cutoff().is_identity()) return 0.0;
  const int d = kit.dimension();
  auto sum = [&](const Point& x) {
    double t = 0.0;
    for (const auto& y : Y) t += kit.w(distance(x, y));
    return t;
  };
  // w_R peaks within a few s of its centre, so the maximum of the sum lies near some y_i
  const double s = kit.cutoff().s;
  const double step = 0.5 * std::min(kit.R(), s);
  const int half = static_cast<int>(std::ceil(2.0 * s / step));
  const int side = 2 * half + 1;
  const std::size_t per_point = static_cast<std::size_t>(side) * (d >= 2 ? side : 1) * (d >= 3 ? side : 1);
  auto point_of = [&](std::size_t idx) {
    const std::size_t q = idx / per_point, local = idx % per_point;
    Point x = Y[q];
    std::size_t rest = local;
    for (int c = 0; c < d; ++c) {
      x[c] += step * (static_cast<double>(rest % static_cast<std::size_t>(side)) - half);
      rest /= static_cast<std::size_t>(side);
    }
    return x;
  };
  const std::size_t total = per_point * Y.size();
  std::vector<double> vals(total);
  parallel_for(total, [&](std::size_t idx) { vals[idx] = sum(point_of(idx)); });
  std::vector<std::size_t> order(total);
  for (std::size_t i = 0; i < total; ++i) order[i] = i;
  const std::size_t keep = std::min<std::size_t>(16, total);
  std::partial_sort(order.begin(), order.begin() + static_cast<long>(keep), order.end(),
                    [&](std::size_t a, std::size_t b) { return vals[a] > vals[b] || (vals[a] == vals[b] && a < b); });
  double best = vals[order[0]];
  for (std::size_t q = 0; q < keep; ++q) {
    Point x = point_of(order[q]);
    double fx = vals[order[q]];
    for (double h = step; h > 1e-4 * step; h *= 0.5) {
      bool moved = true;
      while (moved) {
        moved = false;
        for (int c = 0; c < d; ++c)
          for (double sgn : {1.0, -1.0}) {
            Point z = x;
            z[c] += sgn * h;
            const double fz = sum(z);
            if (fz > fx) {
              x = z;
              fx = fz;
              moved = true;
            }
          }
      }
    }
    best = std::max(best, fx);
  }
  return best;
}

std::vector<Point> separated_configuration(std::size_t count, double R, int dimension, unsigned long long seed,
                                           double side) {
  if (dimension != 2 && dimension != 3) throw std::invalid_argument("separated_configuration: dimension must be 2 or 3");
  if (!(side > 0.0)) throw std::invalid_argument("separated_configuration: side must be positive");
  Rng rng(seed);
  std::vector<Point> out;
  std::size_t attempts = 0;
  while (out.size() < count) {
    if (++attempts > 1000000) throw std::runtime_error("separated_configuration: packing failed");
    Point p{0, 0, 0};
    for (int c = 0; c < dimension; ++c) p[c] = rng.uniform(0.0, side);
    bool ok = true;
    for (const auto& q : out)
      if (distance(p, q) < 2.0 * R) {
        ok = false;
        break;
      }
    if (ok) out.push_back(p);
  }
  return out;
}

WBoundFits fit_w_bounds(int dimension, double R, std::span<const double> s_values) {
  WBoundFits out;
  out.dimension = dimension;
  out.R = R;
  const double sup_power = dimension == 3 ? 5.0 : 4.0;
  for (double s : s_values) {
    const SoftPotentialKit kit(dimension, MomentumCutoff{s}, R, 0.5 * R, 0.5 * R);
    out.s_values.push_back(s);
    out.sup_w.push_back(kit.sup_w());
    out.int_w.push_back(kit.integral_w());
    out.sup_constant = std::max(out.sup_constant, kit.sup_w() * std::pow(s, sup_power) / (R * R));
    out.int_constant = std::max(out.int_constant, kit.integral_w() * s * s / (R * R));
  }
  out.sup_fit = fit_power_law(out.s_values, out.sup_w);
  out.int_fit = fit_power_law(out.s_values, out.int_w);
  return out;
}

LatticeSumReport lattice_sum_constant(const SoftPotentialKit& kit, std::size_t count, unsigned long long seed,
                                      double side) {
  LatticeSumReport rep;
  rep.count = count;
  const auto Y = separated_configuration(count, kit.R(), kit.dimension(), seed, side);
  rep.sup_sum = lattice_sum_sup(kit, Y);
  const double s = kit.cutoff().s;
  rep.constant = kit.dimension() == 3 ? rep.sup_sum * kit.R() * s * s : rep.sup_sum * s * s;
  return rep;
}

}  // namespace fermigas
