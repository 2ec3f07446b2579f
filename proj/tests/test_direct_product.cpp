#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "zlab/direct_product.hpp"
#include "zlab/rng.hpp"
#include "zlab/verify.hpp"

using namespace zlab;

namespace {

const DirectProduct& line_product() {
  static const DirectProduct dp(make_model("int-line"), make_model("int-line"), line_proper_map_config(),
                                line_proper_map_config());
  return dp;
}

double interior(std::mt19937_64& rng) { return 1e-9 + (1.0 - 2e-9) * unit_double(rng); }

// Slope bounds from the brackets alone: with t' = t / s the p coordinate lies in
// [t' - 2, t' + 3] and the q coordinate in [mu t' - 2, mu t' + 3].
Interval slope_bounds_from_brackets(double mu, double t) {
  const long double s = std::sqrt(static_cast<long double>(mu) * mu + 1.0L);
  const long double tp = t / s;
  const long double plo = tp - 2, phi = tp + 3, qlo = mu * tp - 2, qhi = mu * tp + 3;
  long double lo = INFINITY, hi = -INFINITY;
  for (long double p : {plo, phi})
    for (long double q : {qlo, qhi}) {
      lo = std::min(lo, q / p);
      hi = std::max(hi, q / p);
    }
  return {static_cast<double>(lo), static_cast<double>(hi)};
}

}  // namespace

TEST(ProperMetric, AxiomsAndHeight) {
  const ProperMetric rho(make_model("int-line"));
  std::mt19937_64 rng(1);
  for (int i = 0; i < 5000; ++i) {
    const double a = interior(rng), b = interior(rng), c = interior(rng);
    EXPECT_EQ(rho(a, a), 0.0);
    EXPECT_EQ(rho(a, b), rho(b, a));
    EXPECT_LE(rho(a, c), rho(a, b) + rho(b, c) + 1e-12);
    EXPECT_GE(rho(a, b), std::fabs(a - b));
  }
  EXPECT_GT(rho.from_basepoint(IntLineModel::embed(1e6)), rho.from_basepoint(IntLineModel::embed(10)));
}

TEST(ProperMetric, RangeFromBasepointIsExact) {
  const ProperMetric rho(make_model("int-line"));
  std::mt19937_64 rng(2);
  for (int i = 0; i < 500; ++i) {
    double a = interior(rng), b = interior(rng);
    if (a > b) std::swap(a, b);
    const Interval r = rho.range_from_basepoint({a, b});
    double lo = INFINITY, hi = 0.0;
    for (int k = 0; k <= 200; ++k) {
      const double v = rho.from_basepoint(a + (b - a) * k / 200.0);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    EXPECT_LE(r.lo, lo + 1e-12);
    EXPECT_GE(r.hi, hi - 1e-12);
    EXPECT_NEAR(r.hi, hi, 1e-12 * (1 + hi));
  }
}

TEST(ProperMap, ShellsAndKnots) {
  const ProperMap& p = line_product().p();
  EXPECT_EQ(p(p.model().basepoint()), 0.0);
  for (std::size_t i = 1; i <= p.shells(); ++i) EXPECT_NEAR(p.of_radius(p.radii()[i - 1]), double(i), 1e-9);
  for (std::size_t i = 1; i < p.shells(); ++i) {
    EXPECT_LT(p.radii()[i - 1], p.radii()[i]);
    EXPECT_LT(p.times()[i], p.times()[i - 1]);
  }
  EXPECT_EQ(p.times()[0], 1.0);
  EXPECT_EQ(p.xi(0.0), 0.0);
  EXPECT_EQ(p.xi(1.0), 1.0);
  for (std::size_t i = 2; i < std::min<std::size_t>(p.shells(), 40); ++i)
    EXPECT_NEAR(p.xi(1.0 / double(i)), p.times()[i - 1], 1e-12) << i;
}

TEST(ProperMap, MonotoneAndProper) {
  const ProperMap& p = line_product().p();
  double prev = -1.0;
  for (int k = 0; k <= 1000; ++k) {
    const double v = p.of_radius(k * 0.05);
    EXPECT_GE(v, prev);
    prev = v;
  }
  EXPECT_GT(p(IntLineModel::embed(1e5)), p(IntLineModel::embed(100)));
}

TEST(ProperMap, AlphaHatBrackets) {
  const ProperMap& p = line_product().p();
  std::mt19937_64 rng(3);
  for (int i = 0; i < 2000; ++i) {
    const double u = (i & 1) ? 1.0 : 0.0;
    const double t = 0.02 + 0.98 * unit_double(rng);
    const double v = p(p.alpha_hat(u, t));
    EXPECT_GE(v, 1.0 / t - 1.0 - 1e-9);
    EXPECT_LE(v, 1.0 / t + 2.0 + 1e-9);
  }
}

TEST(RaySlope, IntervalAtMuOneTimeTen) {
  const Interval got = ray_slope_interval(1.0, 10.0);
  const Interval oracle = slope_bounds_from_brackets(1.0, 10.0);
  EXPECT_NEAR(got.lo, oracle.lo, 1e-12);
  EXPECT_NEAR(got.hi, oracle.hi, 1e-12);
  EXPECT_NEAR(got.lo, 0.50353, 1e-5);
  EXPECT_NEAR(got.hi, 1.98598, 1e-5);
}

TEST(RaySlope, MatchesBracketOracle) {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 1000; ++i) {
    const double mu = std::exp(8.0 * unit_double(rng) - 4.0);
    const double s = std::sqrt(mu * mu + 1);
    // Keep the lower q bracket positive, where the corner analysis is the formula's.
    const double t = std::max(2.0 * s, 2.0 * s / mu) + 0.1 + 100.0 * unit_double(rng);
    const Interval got = ray_slope_interval(mu, t);
    const Interval oracle = slope_bounds_from_brackets(mu, t);
    EXPECT_NEAR(got.lo, oracle.lo, 1e-9 * (1 + std::fabs(oracle.lo)));
    EXPECT_NEAR(got.hi, oracle.hi, 1e-9 * (1 + oracle.hi));
  }
  EXPECT_TRUE(std::isinf(ray_slope_interval(1.0, 1.0).hi));
}

TEST(Join, NeighborhoodsAreStrict) {
  const DirectProduct& dp = line_product();
  const JoinPoint c{0.0, 1.0, 2.0};
  EXPECT_TRUE(dp.nbhd_contains(c, 0.5, JoinPoint{0.0, 1.0, 2.4}));
  EXPECT_FALSE(dp.nbhd_contains(c, 0.5, JoinPoint{0.0, 1.0, 2.5}));
  EXPECT_FALSE(dp.nbhd_contains(c, 0.5, JoinPoint{0.5, 1.0, 2.0}));
  EXPECT_THROW(dp.nbhd_contains(c, 2.0, JoinPoint{0.0, 1.0, 2.0}), std::invalid_argument);
  EXPECT_THROW(dp.nbhd_contains(c, 0.0, JoinPoint{0.0, 1.0, 2.0}), std::invalid_argument);
  // At mu = 0 the y coordinate is forgotten.
  const JoinPoint zero{1.0, 0.3, 0.0};
  EXPECT_TRUE(dp.nbhd_contains(zero, 0.1, JoinPoint{1.0, 0.9, 0.0}));
  EXPECT_TRUE(dp.nbhd_contains(zero, 0.1, JoinPoint{0.95, 0.0, 0.05}));
  EXPECT_FALSE(dp.nbhd_contains(zero, 0.1, JoinPoint{0.95, 0.0, 0.1}));
  const JoinPoint inf{0.2, 0.0, kInf};
  EXPECT_TRUE(dp.nbhd_contains(inf, 0.1, JoinPoint{0.7, 0.0, kInf}));
  EXPECT_TRUE(dp.nbhd_contains(inf, 0.1, JoinPoint{0.5, 0.05, 20.0}));
  EXPECT_FALSE(dp.nbhd_contains(inf, 0.1, JoinPoint{0.5, 0.05, 10.0}));
  EXPECT_TRUE(equivalent(JoinPoint{0.3, 0.1, 0.0}, JoinPoint{0.3, 0.9, 0.0}));
  EXPECT_FALSE(equivalent(JoinPoint{0.3, 0.1, 1.0}, JoinPoint{0.3, 0.9, 1.0}));
}

TEST(Join, GammaEndpoints) {
  const DirectProduct& dp = line_product();
  const CompactPoint z = JoinPoint{1.0, 0.0, 1.5};
  EXPECT_TRUE(std::holds_alternative<JoinPoint>(dp.homotopy_gamma(z, 0.0)));
  const auto end = std::get<ProductPoint>(dp.homotopy_gamma(z, 1.0));
  EXPECT_EQ(end, (ProductPoint{0.5, 0.5}));
  const auto mid = std::get<ProductPoint>(dp.homotopy_gamma(z, 0.5));
  EXPECT_GT(mid.x, 0.0);
  EXPECT_LT(mid.x, 1.0);
  EXPECT_THROW(dp.homotopy_gamma(z, 1.5), std::invalid_argument);
}

TEST(Join, TextRoundTrip) {
  const JoinPoint j = parse_join_point(to_string(JoinPoint{0.0, 1.0, 2.5}));
  EXPECT_EQ(j.xbar, 0.0);
  EXPECT_EQ(j.ybar, 1.0);
  EXPECT_EQ(j.mu, 2.5);
  EXPECT_EQ(parse_product_point(to_string(ProductPoint{0.25, 0.75})), (ProductPoint{0.25, 0.75}));
}

TEST(Covering, CountsTranslatesOfTheFundamentalDomain) {
  const auto m = make_model("int-line");
  const Interval f{IntLineModel::embed(-0.5), IntLineModel::embed(0.5)};
  EXPECT_EQ(covering_count(*m, f, f), 1);
  EXPECT_EQ(covering_count(*m, f, {IntLineModel::embed(-0.5), IntLineModel::embed(1.5)}), 2);
  EXPECT_EQ(covering_count(*m, f, {IntLineModel::embed(-1.0), IntLineModel::embed(1.0)}), 3);
}

TEST(Fits, FittingBoxesLieInTheElement) {
  const DirectProduct& dp = line_product();
  const double delta = 0.1;
  const auto cover = product_cover(dp, delta);
  const Interval c{IntLineModel::embed(-1.0), IntLineModel::embed(1.0)};
  std::mt19937_64 rng(6);
  std::size_t fitted = 0;
  for (int i = 0; i < 400; ++i) {
    const auto g = static_cast<std::int64_t>(rng() % 4001) - 2000;
    const auto h = static_cast<std::int64_t>(rng() % 4001) - 2000;
    const TranslateBox b = translate_box(dp, g, c, h, c);
    for (const auto& e : cover) {
      if (!fits(dp, e, b)) continue;
      ++fitted;
      for (int k = 0; k < 20; ++k) {
        const ProductPoint z{b.x.lo + (b.x.hi - b.x.lo) * unit_double(rng), b.y.lo + (b.y.hi - b.y.lo) * unit_double(rng)};
        if (e.kind == ProductCoverElement::Kind::Box) {
          ASSERT_TRUE(z.x > e.box_x.lo && z.x < e.box_x.hi && z.y > e.box_y.lo && z.y < e.box_y.hi) << e.label();
        } else {
          ASSERT_TRUE(dp.nbhd_contains(e.center, e.eps, z)) << e.label() << " g=" << g << " h=" << h;
        }
      }
    }
  }
  EXPECT_GT(fitted, 0u);
}
