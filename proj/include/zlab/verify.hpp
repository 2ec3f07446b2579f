#ifndef ZLAB_VERIFY_HPP
#define ZLAB_VERIFY_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "zlab/direct_product.hpp"
#include "zlab/free_product.hpp"
#include "zlab/rng.hpp"
#include "zlab/sweep.hpp"

namespace zlab {

struct SweepOptions {
  std::uint64_t seed = 42;
  int jobs = 0;  // 0: OpenMP default, 1: serial reference path
};

// ---------------------------------------------------------------------------
// Metric axioms

template <class P>
struct MetricSpace {
  // Draws a point; when `near` is non-null the point may be drawn close to it.
  std::function<P(std::mt19937_64&, const P* near)> sample;
  std::function<double(const P&, const P&)> dist;
  std::function<bool(const P&, const P&)> same;
  std::function<std::string(const P&)> show;
};

struct MetricReport {
  std::size_t triples = 0;
  double tolerance = 0.0;
  double max_triangle_violation = 0.0;
  double max_symmetry_violation = 0.0;
  std::size_t identity_failures = 0;
  std::string worst;
  bool pass = false;
};

template <class P>
MetricReport check_metric_axioms(const MetricSpace<P>& space, std::size_t n, double tolerance,
                                 const SweepOptions& opt) {
  struct Cell {
    double tri = 0.0, sym = 0.0;
    bool identity_fail = false;
    std::array<P, 3> pts{};
  };
  auto cells = sweep<Cell>(n, opt.jobs, [&](std::size_t i) {
    auto rng = stream(opt.seed, i);
    Cell c;
    c.pts[0] = space.sample(rng, nullptr);
    c.pts[1] = space.sample(rng, &c.pts[0]);
    c.pts[2] = space.sample(rng, (rng() & 1) ? &c.pts[0] : &c.pts[1]);
    double d[3][3];
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) d[a][b] = space.dist(c.pts[a], c.pts[b]);
    for (int a = 0; a < 3; ++a) {
      if (d[a][a] != 0.0) c.identity_fail = true;
      for (int b = 0; b < 3; ++b) {
        c.sym = std::max(c.sym, std::fabs(d[a][b] - d[b][a]));
        if (a != b && space.same(c.pts[a], c.pts[b]) != (d[a][b] == 0.0)) c.identity_fail = true;
        for (int m = 0; m < 3; ++m) c.tri = std::max(c.tri, d[a][b] - d[a][m] - d[m][b]);
      }
    }
    return c;
  });
  MetricReport r;
  r.triples = n;
  r.tolerance = tolerance;
  std::size_t worst = n;
  for (std::size_t i = 0; i < n; ++i) {
    const Cell& c = cells[i];
    if (c.identity_fail) ++r.identity_failures;
    r.max_symmetry_violation = std::max(r.max_symmetry_violation, c.sym);
    if (c.tri > r.max_triangle_violation || worst == n) {
      if (c.tri > r.max_triangle_violation) r.max_triangle_violation = c.tri;
      worst = i;
    }
  }
  if (worst < n && space.show) {
    const auto& p = cells[worst].pts;
    r.worst = space.show(p[0]) + " ; " + space.show(p[1]) + " ; " + space.show(p[2]);
  }
  r.pass = r.max_triangle_violation <= tolerance && r.max_symmetry_violation == 0.0 && r.identity_failures == 0;
  return r;
}

// The glued space W, with clustered triples so that short legs get exercised.
MetricSpace<WPoint> free_product_space(const FreeProduct& fp, int depth);

// ---------------------------------------------------------------------------
// Free product

struct ScaleReport {
  std::size_t words = 0;
  std::size_t certified_violations = 0;
  std::size_t sampled_violations = 0;
  double min_sampled_ratio = 0.0;  // min over words of (sampled sup) / r*(w)
  std::string worst_word;
  bool pass = false;
};
ScaleReport check_scale_law(const FreeProduct& fp, std::size_t words, int depth, std::size_t samples,
                            const SweepOptions& opt);

// Distance from p to the nearest net center, by exhaustive search.
double nearest_center_distance(const FreeProduct& fp, const EpsilonNet& net, const WPoint& p);

struct CoverageReport {
  double eps = 0.0;
  int depth = 0;
  std::size_t net_size = 0;
  bool depth_cap_touched = false;
  std::size_t samples = 0;
  std::size_t end_samples = 0;
  std::size_t uncovered = 0;
  double max_gap = 0.0;  // max over samples of the certified distance to the net
  std::string worst;
  bool pass = false;
};
CoverageReport check_total_boundedness(const FreeProduct& fp, double eps, int depth, std::size_t samples,
                                       const SweepOptions& opt);
CoverageReport check_coverage(const FreeProduct& fp, const EpsilonNet& net, int depth, std::size_t samples,
                              const SweepOptions& opt);

struct TrackReport {
  double bound = 0.0;
  std::size_t samples = 0;
  std::size_t steps = 0;
  double max_track = 0.0;
  std::size_t endpoint_failures = 0;  // K(., 0) != id or K(., 1) != psi
  std::string worst;
  bool pass = false;
};
TrackReport check_homotopy_K(const FreeProduct& fp, const ZEpsilonIndex& idx, int depth, std::size_t samples,
                             std::size_t steps, const SweepOptions& opt);

// Every word of length <= depth with letters |a| <= max_element: K(w x0, t) = w x0
// on the dyadic grid t = k 2^-grid_log2 t(w), k = 0..2^grid_log2.
struct GluingReport {
  std::size_t words = 0;
  std::size_t words_checked = 0;
  std::size_t checks = 0;
  std::size_t failures = 0;
  std::string first_failure;
  bool pass = false;
};
GluingReport check_gluing_fixed(const FreeProduct& fp, const ZEpsilonIndex& idx, int depth, int max_element,
                                int grid_log2);

struct ZSetReport {
  std::size_t samples = 0;
  std::size_t identity_failures = 0;
  std::size_t checks = 0;
  std::size_t below_tail = 0;
  std::size_t not_interior = 0;
  std::size_t final_failures = 0;  // P(., 1) != x0
  std::string worst;
  bool pass = false;
};
ZSetReport check_homotopy_P(const FreeProduct& fp, int depth, std::size_t samples, std::size_t steps,
                            const SweepOptions& opt);

// Base compactum for the free-product null condition: a carrier interval in
// each base copy, both containing the basepoints.
struct BaseCompactum {
  Interval x{0.25, 0.75};
  Interval y{0.25, 0.75};
};

// Certified upper bound on the d-diameter of w . C.
double translate_diameter_bound(const FreeProduct& fp, const BaseCompactum& c, const ReducedWord& w);
// {w : bound(w) >= eps} to the given depth; sets cap when the search would need to go deeper.
std::vector<ReducedWord> exceptional_words(const FreeProduct& fp, const BaseCompactum& c, double eps, int depth,
                                           bool& cap);

struct NullFreeReport {
  double eps = 0.0;
  int depth = 0;
  std::vector<ReducedWord> gamma;
  bool depth_cap_touched = false;
  std::size_t cover_size = 0;
  double lebesgue = 0.0;
  std::size_t sampled_words = 0;
  std::size_t null_failures = 0;
  std::size_t cover_points = 0;
  std::size_t cover_defects = 0;
  std::string first_failure;
  bool pass = false;
};
NullFreeReport check_null_free(const FreeProduct& fp, const BaseCompactum& c, double eps, int depth,
                               std::size_t samples, const SweepOptions& opt);

// ---------------------------------------------------------------------------
// Direct product

// Minimal number of translates of `fundamental` whose union is connected and covers c
// (greedy on the carrier line).
int covering_count(const ZModel& m, Interval fundamental, Interval c);

struct VariationRow {
  std::string name;
  Interval compactum;
  int k = 0;
  double variation = 0.0;
  double bound = 0.0;
};

struct ProperMapReport {
  double p_at_basepoint = 0.0;
  std::size_t shells = 0;
  int imax = 0;
  std::size_t dagger_checks = 0;
  std::size_t dagger_violations = 0;
  std::string worst_dagger;
  int element_range = 0;
  double rp_c1 = 0.0;
  std::vector<VariationRow> variations;
  bool pass = false;
};
ProperMapReport check_proper_map(const ProperMap& p, Interval fundamental, int imax, int samples_per_shell,
                                 int element_range);

struct BracketReport {
  std::size_t hat_checks = 0;
  std::size_t hat_violations = 0;
  std::size_t prime_checks = 0;
  std::size_t prime_violations = 0;
  std::string worst;
  bool pass = false;
};
BracketReport check_brackets(const ProperMap& p, int nx, int nt, double tmin);

struct RaySlopeRow {
  double mu = 0.0;
  double t = 0.0;
  double xbar = 0.0;
  double ybar = 0.0;
  double slope = 0.0;
  Interval bounds;
  bool inside = false;
};
struct RaySlopeReport {
  std::vector<RaySlopeRow> rows;
  bool pass = false;
};
RaySlopeReport check_ray_slopes(const DirectProduct& dp, const std::vector<double>& mus);

// Points on the rays toward join points: gamma(z, 0) = z, interior for t > 0, (x0, y0) at t = 1.
struct GammaReport {
  std::size_t samples = 0;
  std::size_t steps = 0;
  std::size_t failures = 0;
  std::string first_failure;
  bool pass = false;
};
GammaReport check_gamma(const DirectProduct& dp, std::size_t samples, std::size_t steps, const SweepOptions& opt);

// Interval of the extended line with open or closed ends.
struct ExtInterval {
  double lo = -kInf;
  double hi = kInf;
  bool lo_open = false;
  bool hi_open = false;
  bool contains(double v) const;
  bool contains(const ExtInterval& o) const;
};

struct ProductCoverSet {
  std::string name;
  ExtInterval x;
  ExtInterval y;
};
// The four-set open cover of the two-point compactification of the plane.
std::vector<ProductCoverSet> counterexample_cover();

struct CounterexampleRow {
  std::int64_t n = 0;
  std::vector<std::string> product_containing;  // names of sets containing (0, n) . C
  bool join_contained = false;                   // in U(<ybar, inf>, delta) with ybar the end n points to
};
struct CounterexampleReport {
  int range = 0;
  double delta = 0.0;
  std::vector<CounterexampleRow> rows;
  bool product_fails_everywhere = false;
  bool n0_found = false;
  std::int64_t n0 = 0;
  bool pass = false;
};
CounterexampleReport reproduce_counterexample(const DirectProduct& dp, int range, double delta);

// One element of the cover used by the product null check.
struct ProductCoverElement {
  enum class Kind { Zero, Infinity, Interior, Box };
  Kind kind = Kind::Box;
  JoinPoint center;
  double eps = 0.0;
  Interval box_x;
  Interval box_y;
  std::string label() const;
};
std::vector<ProductCoverElement> product_cover(const DirectProduct& dp, double delta);

// Carrier intervals and exact p, q, slope ranges of g C x h D.
struct TranslateBox {
  Interval x;
  Interval y;
  Interval p;
  Interval q;
  double mu_lo() const;
  double mu_hi() const;
};
TranslateBox translate_box(const DirectProduct& dp, std::int64_t g, Interval c, std::int64_t h, Interval d);
bool fits(const DirectProduct& dp, const ProductCoverElement& e, const TranslateBox& b);
// Index of the first element that contains the box, or -1.
int fit_index(const DirectProduct& dp, const std::vector<ProductCoverElement>& cover, const TranslateBox& b);

struct NullProductConfig {
  // Fundamental domains used to build p and q and to count k_C, k_D.
  Interval fundamental_x{IntLineModel::embed(-0.5), IntLineModel::embed(0.5)};
  Interval fundamental_y{IntLineModel::embed(-0.5), IntLineModel::embed(0.5)};
  Interval c{IntLineModel::embed(-1.0), IntLineModel::embed(1.0)};
  Interval d{IntLineModel::embed(-1.0), IntLineModel::embed(1.0)};
  double delta = 0.1;
  int grid = 300;
  std::size_t off_grid_samples = 4000;
  double off_grid_factor = 4.0;
};

struct NullProductReport {
  double delta = 0.0;
  int grid = 0;
  std::size_t cover_size = 0;
  // Variation thresholds: analytic 2 k_C bounds and sampled maxima over the grid.
  int k_c = 0, k_d = 0;
  double rp_bound = 0.0, rq_bound = 0.0, rp_sampled = 0.0, rq_sampled = 0.0;
  // Certified exceptional set: |g| <= gx1, |h| <= hy1  or  |g| <= gx2, |h| <= hy2.
  std::int64_t g_j = 0, h_k = 0, g_q = 0, h_p = 0;
  double m_j = 0.0, m_k = 0.0;
  std::int64_t gamma_g1 = 0, gamma_h1 = 0, gamma_g2 = 0, gamma_h2 = 0;
  bool grid_inside_gamma = false;
  // Direct fit on the grid.
  std::size_t grid_cells = 0;
  std::size_t empirical_exceptional = 0;
  std::int64_t empirical_max_g = 0, empirical_max_h = 0;
  bool empirical_inside_certified = false;
  bool empirical_off_edge = false;
  // Off-grid translates outside the certified set.
  std::size_t off_grid = 0;
  std::size_t off_grid_failures = 0;
  std::size_t case1 = 0;
  double case1_max_diam_mu = 0.0;
  std::string first_failure;
  bool reach_ok = false;
  double reach_needed_x = 0.0, reach_needed_y = 0.0;
  bool pass = false;
};
NullProductReport check_null_product(const DirectProduct& dp, const NullProductConfig& cfg, const SweepOptions& opt,
                                     std::vector<int>* grid_fit = nullptr);
// Builds p and q with enough shells for check_null_product to stay inside the constructed region.
DirectProduct product_for_null(std::shared_ptr<const ZModel> x, std::shared_ptr<const ZModel> y,
                               const NullProductConfig& cfg, const SweepOptions& opt);

}  // namespace zlab

#endif
