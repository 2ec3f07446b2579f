#ifndef ZLAB_MODEL_HPP
#define ZLAB_MODEL_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "zlab/words.hpp"

namespace zlab {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
  bool contains(double x) const { return lo <= x && x <= hi; }
};

// A Z-compactification of a space on which a group acts properly and
// cocompactly. Points of the compactum are carrier coordinates in [0,1].
//
// Contract consumed by the constructions:
//   * rho_bar is a metric of diameter 1, and rho_bar(a, .) is convex along the
//     carrier (the fit checks evaluate suprema at interval endpoints);
//   * homotopy(., 0) = id, homotopy(., 1) = basepoint, the basepoint is fixed,
//     homotopy(a, t) is interior for t > 0, and homotopy(a, t) = a whenever
//     boundary_distance(a) >= 2^-k and t <= 2^-k;
//   * act maps carrier intervals monotonically onto carrier intervals.
class ZModel {
 public:
  virtual ~ZModel() = default;

  virtual std::string name() const = 0;
  virtual const GroupModel& group() const = 0;

  virtual double rho_bar(double a, double b) const = 0;
  virtual bool is_boundary(double a) const = 0;
  virtual std::vector<double> boundary_samples() const = 0;
  virtual double boundary_distance(double a) const;
  virtual double basepoint() const = 0;
  // Sup of rho_bar(basepoint, .) over the compactum.
  virtual double basepoint_radius() const { return 1.0; }

  virtual bool ez() const = 0;
  virtual double act(std::int64_t g, double a) const = 0;
  // g . basepoint, computed from the element directly.
  virtual double orbit_point(std::int64_t g) const = 0;
  // The element g with g . basepoint == a exactly, if any.
  virtual std::optional<std::int64_t> orbit_element(double a) const = 0;
  virtual Interval act_interval(std::int64_t g, Interval c) const;

  virtual double homotopy(double a, double t) const = 0;

  // Dyadic depth of g . basepoint: the n >= 1 with 2^-n <= dist(g x0, boundary) < 2^-(n-1).
  virtual int r_value(std::int64_t g) const;
  // Minimum of r over non-identity elements.
  virtual int r_min() const = 0;
  // Non-identity elements with r(g) <= R, in a fixed order.
  virtual std::vector<std::int64_t> elements_with_r_at_most(int R) const = 0;
  // Exhaustion of the group by finite layers; layer 0 is {identity}.
  virtual std::vector<std::int64_t> element_layer(int k) const = 0;
  virtual std::int64_t sample_element(std::mt19937_64& rng) const = 0;
  // Upper bound on rho_bar-diam(g . c) over all g with r(g) > R.
  virtual double image_diameter_tail(Interval c, int R) const = 0;

  // Carrier points such that every carrier point lies within `radius` of one.
  virtual std::vector<double> carrier_net(double radius) const = 0;

  // Continuous f with f(basepoint) = 0, f = 1 exactly on the boundary,
  // nondecreasing in rho_bar-distance from the basepoint.
  virtual double gauge(double a) const = 0;
};

// Dyadic depth for a boundary distance in (0, 1/2].
int r_from_distance(double d);

// The real line compactified by two points, with Z acting by translation.
// Carrier coordinate e(x) = 1/2 + x / (2 (1 + |x|)).
class IntLineModel final : public ZModel {
 public:
  static double embed(double x);
  static double unembed(double u);

  std::string name() const override { return "int-line"; }
  const GroupModel& group() const override { return integers(); }

  double rho_bar(double a, double b) const override;
  bool is_boundary(double a) const override { return a == 0.0 || a == 1.0; }
  std::vector<double> boundary_samples() const override { return {0.0, 1.0}; }
  double boundary_distance(double a) const override;
  double basepoint() const override { return 0.5; }
  double basepoint_radius() const override { return 0.5; }

  bool ez() const override { return true; }
  double act(std::int64_t g, double a) const override;
  double orbit_point(std::int64_t g) const override;
  std::optional<std::int64_t> orbit_element(double a) const override;

  // Clamp into [t/2, 1 - t/2].
  double homotopy(double a, double t) const override;

  int r_value(std::int64_t g) const override;
  int r_min() const override { return 2; }
  std::vector<std::int64_t> elements_with_r_at_most(int R) const override;
  std::vector<std::int64_t> element_layer(int k) const override;
  std::int64_t sample_element(std::mt19937_64& rng) const override;
  double image_diameter_tail(Interval c, int R) const override;

  std::vector<double> carrier_net(double radius) const override;

  // 2 |u - 1/2|.
  double gauge(double a) const override;
};

std::shared_ptr<const ZModel> make_model(const std::string& name);

// Checked entry points with the argument validation of the public contract.
double rho_hat(const ZModel& m, double a, double b);
double boundary_distance(const ZModel& m, double a);
double act(const ZModel& m, std::int64_t g, double a);
double zset_homotopy(const ZModel& m, double a, double t);
int r_value(const ZModel& m, std::int64_t g);

}  // namespace zlab

#endif
