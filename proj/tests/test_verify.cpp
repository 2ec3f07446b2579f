#include <gtest/gtest.h>

#include <cmath>

#include "zlab/verify.hpp"

using namespace zlab;

namespace {

FreeProduct line_fp() { return FreeProduct(make_model("int-line"), make_model("int-line")); }

MetricSpace<double> line_space(std::function<double(double, double)> d) {
  MetricSpace<double> s;
  s.sample = [](std::mt19937_64& rng, const double* near) {
    return near ? *near + 1e-3 * (unit_double(rng) - 0.5) : unit_double(rng);
  };
  s.dist = std::move(d);
  s.same = [](double a, double b) { return a == b; };
  s.show = [](double a) { return std::to_string(a); };
  return s;
}

}  // namespace

TEST(MetricAxioms, AcceptsTheLine) {
  const auto r = check_metric_axioms(line_space([](double a, double b) { return std::fabs(a - b); }), 2000, 1e-12, {});
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.identity_failures, 0u);
}

TEST(MetricAxioms, RejectsSquaredDistanceWithAWitness) {
  const auto r = check_metric_axioms(line_space([](double a, double b) { return (a - b) * (a - b); }), 2000, 1e-9, {});
  EXPECT_FALSE(r.pass);
  EXPECT_GT(r.max_triangle_violation, 1e-9);
  EXPECT_FALSE(r.worst.empty());
}

TEST(MetricAxioms, RejectsAsymmetry) {
  const auto r = check_metric_axioms(line_space([](double a, double b) { return a > b ? a - b : 2 * (b - a); }), 500, 1e-9, {});
  EXPECT_FALSE(r.pass);
  EXPECT_GT(r.max_symmetry_violation, 0.0);
}

TEST(MetricAxioms, RejectsPseudometric) {
  const auto r = check_metric_axioms(line_space([](double a, double b) { return std::fabs(std::floor(4 * a) - std::floor(4 * b)); }), 500, 1e-9, {});
  EXPECT_FALSE(r.pass);
  EXPECT_GT(r.identity_failures, 0u);
}

TEST(Sweeps, SerialMatchesParallel) {
  const FreeProduct fp = line_fp();
  const SweepOptions serial{7, 1}, parallel{7, 0};
  const auto a = check_metric_axioms(free_product_space(fp, 6), 3000, 1e-9, serial);
  const auto b = check_metric_axioms(free_product_space(fp, 6), 3000, 1e-9, parallel);
  EXPECT_EQ(a.max_triangle_violation, b.max_triangle_violation);
  EXPECT_EQ(a.worst, b.worst);
  const auto ca = check_total_boundedness(fp, 0.25, 6, 2000, serial);
  const auto cb = check_total_boundedness(fp, 0.25, 6, 2000, parallel);
  EXPECT_EQ(ca.max_gap, cb.max_gap);
  EXPECT_EQ(ca.uncovered, cb.uncovered);
  const auto pa = check_homotopy_P(fp, 6, 200, 16, serial);
  const auto pb = check_homotopy_P(fp, 6, 200, 16, parallel);
  EXPECT_EQ(pa.checks, pb.checks);
  EXPECT_EQ(pa.worst, pb.worst);
}

TEST(FreeChecks, MetricScaleAndCoverage) {
  const FreeProduct fp = line_fp();
  EXPECT_TRUE(check_metric_axioms(free_product_space(fp, 6), 2000, 1e-9, {}).pass);
  EXPECT_TRUE(check_scale_law(fp, 40, 5, 200, {}).pass);
  const auto cov = check_total_boundedness(fp, 0.5, 6, 2000, {});
  EXPECT_TRUE(cov.pass);
  EXPECT_LE(cov.max_gap, 0.5);
}

TEST(FreeChecks, CoverageDetectsASparseNet) {
  const FreeProduct fp = line_fp();
  EpsilonNet net = fp.epsilon_net(0.5, 6);
  net.eps = net.certified_radius = 0.01;
  EXPECT_FALSE(check_coverage(fp, net, 6, 500, {}).pass);
}

TEST(FreeChecks, HomotopiesAndGluing) {
  const FreeProduct fp = line_fp();
  const ZEpsilonIndex idx = fp.build_z_epsilon(0.5, 8);
  const auto k = check_homotopy_K(fp, idx, 6, 300, 16, {});
  EXPECT_TRUE(k.pass) << k.worst;
  EXPECT_EQ(k.endpoint_failures, 0u);
  EXPECT_TRUE(check_gluing_fixed(fp, idx, 3, 2, 3).pass);
  EXPECT_TRUE(check_homotopy_P(fp, 6, 300, 16, {}).pass);
}

TEST(FreeChecks, NullConditionGamma) {
  const FreeProduct fp = line_fp();
  const auto r = check_null_free(fp, BaseCompactum{}, 0.25, 6, 500, {});
  EXPECT_TRUE(r.pass) << r.first_failure;
  std::vector<std::string> gamma;
  for (const auto& w : r.gamma) gamma.push_back(to_string(w));
  std::sort(gamma.begin(), gamma.end());
  EXPECT_EQ(gamma, (std::vector<std::string>{"1", "g:-1", "g:1", "h:-1", "h:1"}));
}

TEST(ProductChecks, Counterexample) {
  const DirectProduct dp(make_model("int-line"), make_model("int-line"), line_proper_map_config(),
                         line_proper_map_config());
  const auto r = reproduce_counterexample(dp, 100, 0.1);
  EXPECT_TRUE(r.pass);
  EXPECT_TRUE(r.product_fails_everywhere);
  ASSERT_TRUE(r.n0_found);
  for (const auto& row : r.rows) {
    EXPECT_TRUE(row.product_containing.empty()) << row.n;
    if (row.n >= r.n0) EXPECT_TRUE(row.join_contained) << row.n;
  }
}

TEST(ProductChecks, ExtIntervals) {
  const ExtInterval open{0.0, 1.0, true, true};
  EXPECT_FALSE(open.contains(0.0));
  EXPECT_TRUE(open.contains(0.5));
  EXPECT_TRUE((ExtInterval{}).contains(kInf));
  EXPECT_TRUE((ExtInterval{-1.0, 2.0}).contains(open));
  EXPECT_FALSE(open.contains(ExtInterval{0.0, 0.5}));
  EXPECT_EQ(counterexample_cover().size(), 4u);
}

TEST(ProductChecks, RaySlopesAndGamma) {
  const DirectProduct dp(make_model("int-line"), make_model("int-line"), line_proper_map_config(),
                         line_proper_map_config());
  EXPECT_TRUE(check_ray_slopes(dp, {0.1, 1.0, 10.0}).pass);
  EXPECT_TRUE(check_gamma(dp, 300, 16, {}).pass);
  EXPECT_TRUE(check_brackets(dp.p(), 20, 20, 0.05).pass);
}
