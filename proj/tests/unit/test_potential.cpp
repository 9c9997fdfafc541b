#include <gtest/gtest.h>

#include <cmath>
#include <fstream>

#include "fermigas/io.hpp"
#include "fermigas/potential.hpp"

using fermigas::PotentialPiece;
using fermigas::RadialPotential;
using Failure = fermigas::ValidationReport::Failure;

TEST(Potential, HardSphereInsideCoreIsInfinite) {
  const auto p = RadialPotential::hard_sphere(1.0);
  EXPECT_TRUE(std::isinf(p.evaluate(0.5)));
  EXPECT_EQ(p.evaluate(2.0), 0.0);
}

TEST(Potential, BarrierValue) {
  const auto p = RadialPotential::square_barrier(10.0, 1.0);
  EXPECT_EQ(p.evaluate(0.5), 10.0);
  EXPECT_EQ(p.evaluate(1.5), 0.0);
}

TEST(Potential, NegativeRadiusRejected) {
  EXPECT_THROW(RadialPotential::zero().evaluate(-0.1), std::invalid_argument);
}

TEST(Potential, TableNodesReproduced) {
  PotentialPiece p;
  p.kind = PotentialPiece::Kind::table;
  p.r_lo = 0.0;
  p.r_hi = 1.0;
  p.points = {{0.0, 3.0}, {0.3, 1.7}, {0.7, 0.4}, {1.0, 0.1}};
  const RadialPotential pot("t", 0.0, 1.0, {p});
  for (const auto& [r, v] : p.points) EXPECT_EQ(pot.evaluate(r), v);
  EXPECT_DOUBLE_EQ(pot.evaluate(0.15), 0.5 * (3.0 + 1.7));
}

TEST(Potential, ValidationPasses) {
  EXPECT_TRUE(RadialPotential::hard_sphere(1.0).validate().passed());
  EXPECT_TRUE(RadialPotential::square_barrier(2.0, 1.0).validate().passed());
  EXPECT_TRUE(RadialPotential::hard_core_shoulder(0.5, 1.0, 1.0).validate().passed());
}

TEST(Potential, ValidationCatchesNegativeValue) {
  const auto p = RadialPotential::square_barrier(-1.0, 1.0);
  const auto report = p.validate();
  EXPECT_FALSE(report.passed());
  EXPECT_TRUE(report.has(Failure::positivity));
}

TEST(Potential, ValidationCatchesRangeOrdering) {
  const RadialPotential p("bad", 2.0, 1.0, {});
  EXPECT_TRUE(p.validate().has(Failure::range_ordering));
}

TEST(Potential, ValidationCatchesGrid) {
  PotentialPiece piece;
  piece.kind = PotentialPiece::Kind::table;
  piece.r_lo = 0.0;
  piece.r_hi = 1.0;
  piece.points = {{0.0, 1.0}, {0.5, 1.0}, {0.4, 1.0}, {1.0, 0.0}};
  const RadialPotential p("bad", 0.0, 1.0, {piece});
  EXPECT_TRUE(p.validate().has(Failure::grid_monotonicity));
}

TEST(Potential, JsonRoundTrip) {
  const std::string path = std::string(FERMIGAS_FIXTURE_DIR) + "/ramp_table.json";
  const auto doc = nlohmann::json::parse(fermigas::io::read_file(path));
  const auto p = RadialPotential::from_json(doc);
  EXPECT_EQ(p.label(), "ramp_table");
  EXPECT_DOUBLE_EQ(p.evaluate(0.125), 10.5);
  const auto q = RadialPotential::from_json(p.to_json());
  EXPECT_EQ(q.to_json().dump(), p.to_json().dump());
}

TEST(Potential, JsonMissingFieldNamed) {
  try {
    RadialPotential::from_json(nlohmann::json{{"label", "x"}});
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("R0"), std::string::npos);
  }
}

TEST(Potential, ScalingRescalesLengthsAndStrength) {
  const auto p = RadialPotential::hard_core_shoulder(0.5, 4.0, 1.0).scaled(2.0);
  EXPECT_DOUBLE_EQ(p.hard_core_radius(), 1.0);
  EXPECT_DOUBLE_EQ(p.range(), 2.0);
  EXPECT_DOUBLE_EQ(p.evaluate(1.5), 1.0);
}

TEST(Potential, OneSidedEvaluation) {
  const auto p = RadialPotential::double_step(5.0, 1.0, 0.5, 1.0);
  EXPECT_EQ(p.evaluate_within(0.5, 0.0, 0.5), 5.0);
  EXPECT_EQ(p.evaluate_within(0.5, 0.5, 1.0), 1.0);
}
