#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "zlab/model.hpp"

using namespace zlab;

namespace {

const IntLineModel kLine;

// r from the definition: 2^-n <= dist(g x0, boundary) < 2^-(n-1), with exact
// dyadic arithmetic on d = 1 / (2 (1 + |g|)).
int r_oracle(std::int64_t g) {
  const double denom = 2.0 * (1.0 + static_cast<double>(g < 0 ? -g : g));  // d = 1 / denom
  int n = 1;
  while (!(std::ldexp(1.0, n - 1) < denom && denom <= std::ldexp(1.0, n))) ++n;
  return n;
}

}  // namespace

TEST(LineModel, EmbedRoundTripAndEnds) {
  EXPECT_EQ(IntLineModel::embed(0.0), 0.5);
  EXPECT_EQ(IntLineModel::embed(INFINITY), 1.0);
  EXPECT_EQ(IntLineModel::embed(-INFINITY), 0.0);
  for (double x : {-1000.0, -3.5, -1.0, 0.25, 7.0, 1e6}) EXPECT_NEAR(IntLineModel::unembed(IntLineModel::embed(x)), x, 1e-9 * (1 + std::fabs(x)));
}

TEST(LineModel, RValueMatchesDyadicDefinition) {
  EXPECT_EQ(kLine.r_value(1), 2);
  EXPECT_EQ(kLine.r_value(3), 3);
  EXPECT_EQ(kLine.r_value(4), 4);
  for (std::int64_t g = -5000; g <= 5000; ++g) {
    if (g == 0) continue;
    ASSERT_EQ(kLine.r_value(g), r_oracle(g)) << g;
    // The generic route through the boundary distance agrees.
    ASSERT_EQ(r_from_distance(kLine.boundary_distance(kLine.orbit_point(g))), r_oracle(g)) << g;
  }
  EXPECT_EQ(kLine.r_min(), 2);
}

TEST(LineModel, ElementsWithRAtMost) {
  for (int R = 1; R <= 8; ++R) {
    const auto els = kLine.elements_with_r_at_most(R);
    std::size_t expected = 0;
    for (std::int64_t g = -300; g <= 300; ++g)
      if (g != 0 && kLine.r_value(g) <= R) ++expected;
    EXPECT_EQ(els.size(), expected);
    for (auto g : els) EXPECT_LE(kLine.r_value(g), R);
  }
}

TEST(LineModel, ActionIsAnActionOnOrbitAndBoundary) {
  for (std::int64_t a = -20; a <= 20; ++a)
    for (std::int64_t b = -20; b <= 20; ++b) {
      const double u = kLine.orbit_point(a);
      EXPECT_EQ(kLine.act(b, u), kLine.orbit_point(a + b));
    }
  EXPECT_EQ(kLine.act(5, 0.0), 0.0);
  EXPECT_EQ(kLine.act(-5, 1.0), 1.0);
  EXPECT_THROW(act(kLine, 1, 1.5), std::invalid_argument);
}

TEST(LineModel, HomotopyContract) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int i = 0; i < 10000; ++i) {
    const double a = (i % 10 == 0) ? (i % 20 == 0 ? 0.0 : 1.0) : U(rng);
    const double t = U(rng);
    EXPECT_EQ(kLine.homotopy(a, 0.0), a);
    EXPECT_EQ(kLine.homotopy(a, 1.0), kLine.basepoint());
    const double out = kLine.homotopy(a, t);
    if (t > 0.0) EXPECT_FALSE(kLine.is_boundary(out));
  }
  EXPECT_FALSE(kLine.is_boundary(kLine.homotopy(1.0, 1e-300)));
  // Orbit points stay fixed while t <= 2^-r(g).
  for (std::int64_t g = -100; g <= 100; ++g) {
    if (g == 0) continue;
    const double u = kLine.orbit_point(g);
    const double t = std::ldexp(1.0, -kLine.r_value(g));
    EXPECT_EQ(kLine.homotopy(u, t), u) << g;
  }
}

TEST(LineModel, ImageDiameterTailBoundsSampledImages) {
  const Interval c{IntLineModel::embed(-1.0), IntLineModel::embed(1.0)};
  for (int R = 2; R <= 12; ++R) {
    const double bound = kLine.image_diameter_tail(c, R);
    for (std::int64_t g = -5000; g <= 5000; ++g) {
      if (g == 0 || kLine.r_value(g) <= R) continue;
      const Interval img = kLine.act_interval(g, c);
      ASSERT_LE(kLine.rho_bar(img.lo, img.hi), bound + 1e-15) << R << " " << g;
    }
  }
}

TEST(LineModel, CarrierNetCovers) {
  for (double r : {0.6, 0.25, 0.1, 0.01}) {
    const auto net = kLine.carrier_net(r);
    for (int i = 0; i <= 1000; ++i) {
      const double u = i / 1000.0;
      double best = 1.0;
      for (double c : net) best = std::min(best, kLine.rho_bar(u, c));
      EXPECT_LE(best, r * (1 + 1e-12));
    }
  }
}

TEST(LineModel, CheckedEntryPoints) {
  EXPECT_THROW(rho_hat(kLine, -0.1, 0.5), std::invalid_argument);
  EXPECT_THROW(zset_homotopy(kLine, 0.5, 1.5), std::invalid_argument);
  EXPECT_THROW(r_value(kLine, IntegerGroup::kBound + 1), std::invalid_argument);
  EXPECT_THROW(make_model("torus"), std::invalid_argument);
  EXPECT_EQ(rho_hat(kLine, 0.25, 0.75), 0.5);
}
