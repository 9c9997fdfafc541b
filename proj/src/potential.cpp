#include "fermigas/potential.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace fermigas {

bool ValidationReport::has(Failure f) const {
  return std::any_of(issues.begin(), issues.end(), [f](const Issue& i) { return i.kind == f; });
}

const char* to_string(ValidationReport::Failure f) {
  switch (f) {
    case ValidationReport::Failure::positivity: return "positivity";
    case ValidationReport::Failure::range_ordering: return "range_ordering";
    case ValidationReport::Failure::grid_monotonicity: return "grid_monotonicity";
    case ValidationReport::Failure::piece_layout: return "piece_layout";
  }
  return "unknown";
}

RadialPotential::RadialPotential(std::string label, double hard_core_radius, double range,
                                 std::vector<PotentialPiece> pieces)
    : label_(std::move(label)),
      hard_core_radius_(hard_core_radius),
      range_(range),
      pieces_(std::move(pieces)) {
  std::sort(pieces_.begin(), pieces_.end(),
            [](const PotentialPiece& a, const PotentialPiece& b) { return a.r_lo < b.r_lo; });
}

RadialPotential RadialPotential::zero(double range) { return {"zero", 0.0, range, {}}; }

RadialPotential RadialPotential::hard_sphere(double radius) {
  return {"hard_sphere", radius, radius, {}};
}

RadialPotential RadialPotential::square_barrier(double height, double range) {
  PotentialPiece p;
  p.r_lo = 0.0;
  p.r_hi = range;
  p.value = height;
  return {"square_barrier", 0.0, range, {p}};
}

RadialPotential RadialPotential::linear_ramp(double height, double range, int nodes) {
  PotentialPiece p;
  p.kind = PotentialPiece::Kind::table;
  p.r_lo = 0.0;
  p.r_hi = range;
  nodes = std::max(nodes, 2);
  for (int i = 0; i < nodes; ++i) {
    const double r = range * i / (nodes - 1);
    p.points.emplace_back(r, height * (1.0 - r / range));
  }
  return {"linear_ramp", 0.0, range, {p}};
}

RadialPotential RadialPotential::double_step(double inner, double outer, double split,
                                             double range) {
  PotentialPiece a, b;
  a.r_lo = 0.0;
  a.r_hi = split;
  a.value = inner;
  b.r_lo = split;
  b.r_hi = range;
  b.value = outer;
  return {"double_step", 0.0, range, {a, b}};
}

RadialPotential RadialPotential::hard_core_shoulder(double core, double shoulder, double range) {
  PotentialPiece p;
  p.r_lo = core;
  p.r_hi = range;
  p.value = shoulder;
  return {"hard_core_shoulder", core, range, {p}};
}

RadialPotential RadialPotential::from_json(const nlohmann::json& doc) {
  auto require = [&](const char* key) -> const nlohmann::json& {
    if (!doc.contains(key)) throw std::invalid_argument(std::string("potential: missing field '") + key + "'");
    return doc.at(key);
  };
  const std::string label = doc.value("label", std::string("unnamed"));
  const double core = doc.value("hard_core_radius", 0.0);
  const double range = require("R0").get<double>();
  std::vector<PotentialPiece> pieces;
  if (doc.contains("pieces")) {
    for (const auto& item : doc.at("pieces")) {
      PotentialPiece p;
      p.r_lo = item.at("r_lo").get<double>();
      p.r_hi = item.at("r_hi").get<double>();
      const std::string kind = item.at("kind").get<std::string>();
      if (kind == "const") {
        p.kind = PotentialPiece::Kind::constant;
        p.value = item.at("value").get<double>();
      } else if (kind == "table") {
        p.kind = PotentialPiece::Kind::table;
        for (const auto& pt : item.at("points")) {
          p.points.emplace_back(pt.at(0).get<double>(), pt.at(1).get<double>());
        }
      } else {
        throw std::invalid_argument("potential: piece kind must be 'const' or 'table', got '" + kind + "'");
      }
      pieces.push_back(std::move(p));
    }
  }
  return {label, core, range, std::move(pieces)};
}

nlohmann::json RadialPotential::to_json() const {
  nlohmann::json doc;
  doc["label"] = label_;
  doc["hard_core_radius"] = hard_core_radius_;
  doc["R0"] = range_;
  doc["pieces"] = nlohmann::json::array();
  for (const auto& p : pieces_) {
    nlohmann::json item{{"r_lo", p.r_lo}, {"r_hi", p.r_hi}};
    if (p.kind == PotentialPiece::Kind::constant) {
      item["kind"] = "const";
      item["value"] = p.value;
    } else {
      item["kind"] = "table";
      item["points"] = nlohmann::json::array();
      for (const auto& [r, v] : p.points) item["points"].push_back({r, v});
    }
    doc["pieces"].push_back(item);
  }
  return doc;
}

double RadialPotential::evaluate(double r) const {
  if (!(r >= 0.0)) throw std::invalid_argument("RadialPotential::evaluate: r must be >= 0");
  if (r < hard_core_radius_) return infinity;
  if (r > range_) return 0.0;
  for (const auto& p : pieces_) {
    if (r < p.r_lo || r > p.r_hi) continue;
    if (p.kind == PotentialPiece::Kind::constant) return p.value;
    const auto& pts = p.points;
    if (pts.empty()) return 0.0;
    if (r <= pts.front().first) return pts.front().second;
    if (r >= pts.back().first) return pts.back().second;
    auto it = std::upper_bound(pts.begin(), pts.end(), r,
                               [](double x, const std::pair<double, double>& q) { return x < q.first; });
    const auto& [r1, v1] = *it;
    const auto& [r0, v0] = *(it - 1);
    if (r == r0) return v0;
    return v0 + (v1 - v0) * (r - r0) / (r1 - r0);
  }
  return 0.0;
}

double RadialPotential::evaluate_within(double r, double lo, double hi) const {
  const double mid = 0.5 * (lo + hi);
  if (mid < hard_core_radius_) return infinity;
  if (mid > range_) return 0.0;
  r = std::clamp(r, lo, hi);
  for (const auto& p : pieces_) {
    if (mid < p.r_lo || mid > p.r_hi) continue;
    if (p.kind == PotentialPiece::Kind::constant) return p.value;
    const auto& pts = p.points;
    if (pts.empty()) return 0.0;
    if (r <= pts.front().first) return pts.front().second;
    if (r >= pts.back().first) return pts.back().second;
    auto it = std::upper_bound(pts.begin(), pts.end(), mid,
                               [](double x, const std::pair<double, double>& q) { return x < q.first; });
    const auto& [r1, v1] = *it;
    const auto& [r0, v0] = *(it - 1);
    return v0 + (v1 - v0) * (r - r0) / (r1 - r0);
  }
  return 0.0;
}

double RadialPotential::max_value() const {
  double m = 0.0;
  for (const auto& p : pieces_) {
    m = std::max(m, p.value);
    for (const auto& pt : p.points) m = std::max(m, pt.second);
  }
  return m;
}

ValidationReport RadialPotential::validate() const {
  using F = ValidationReport::Failure;
  ValidationReport report;
  auto add = [&](F f, const std::string& msg) { report.issues.push_back({f, msg}); };

  if (hard_core_radius_ < 0.0) add(F::range_ordering, "hard_core_radius is negative");
  if (range_ < hard_core_radius_) {
    std::ostringstream os;
    os << "R0 = " << range_ << " is smaller than hard_core_radius = " << hard_core_radius_;
    add(F::range_ordering, os.str());
  }
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const auto& p = pieces_[i];
    std::ostringstream where;
    where << "piece " << i << " [" << p.r_lo << ", " << p.r_hi << "]";
    if (!(p.r_hi > p.r_lo)) add(F::piece_layout, where.str() + " has empty or reversed extent");
    if (p.r_hi > range_) add(F::range_ordering, where.str() + " extends beyond R0");
    if (p.r_lo < 0.0) add(F::range_ordering, where.str() + " starts below r = 0");
    if (i > 0 && p.r_lo < pieces_[i - 1].r_hi) add(F::piece_layout, where.str() + " overlaps its predecessor");
    if (p.kind == PotentialPiece::Kind::constant) {
      if (p.value < 0.0) add(F::positivity, where.str() + " has negative value");
    } else {
      if (p.points.size() < 2) add(F::piece_layout, where.str() + " table needs at least two points");
      for (std::size_t k = 0; k < p.points.size(); ++k) {
        if (p.points[k].second < 0.0) add(F::positivity, where.str() + " table value is negative");
        if (k > 0 && !(p.points[k].first > p.points[k - 1].first)) {
          add(F::grid_monotonicity, where.str() + " table radii are not strictly increasing");
        }
      }
    }
  }
  return report;
}

RadialPotential RadialPotential::scaled(double lambda) const {
  if (!(lambda > 0.0)) throw std::invalid_argument("RadialPotential::scaled: lambda must be positive");
  auto pieces = pieces_;
  const double vs = 1.0 / (lambda * lambda);
  for (auto& p : pieces) {
    p.r_lo *= lambda;
    p.r_hi *= lambda;
    p.value *= vs;
    for (auto& [r, v] : p.points) {
      r *= lambda;
      v *= vs;
    }
  }
  return {label_, hard_core_radius_ * lambda, range_ * lambda, std::move(pieces)};
}

RadialPotential RadialPotential::with_strength(double factor) const {
  auto pieces = pieces_;
  for (auto& p : pieces) {
    p.value *= factor;
    for (auto& pt : p.points) pt.second *= factor;
  }
  return {label_, hard_core_radius_, range_, std::move(pieces)};
}

std::vector<double> RadialPotential::breakpoints() const {
  std::vector<double> b;
  if (hard_core_radius_ > 0.0) b.push_back(hard_core_radius_);
  for (const auto& p : pieces_) {
    b.push_back(p.r_lo);
    b.push_back(p.r_hi);
    for (const auto& pt : p.points) b.push_back(pt.first);
  }
  b.push_back(range_);
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return b;
}

bool RadialPotential::tail_is_zero() const {
  for (const auto& p : pieces_) {
    if (p.r_hi <= hard_core_radius_) continue;
    if (p.kind == PotentialPiece::Kind::constant && p.value != 0.0) return false;
    for (const auto& pt : p.points)
      if (pt.second != 0.0) return false;
  }
  return true;
}

}  // namespace fermigas
