#ifndef ZLAB_DIRECT_PRODUCT_HPP
#define ZLAB_DIRECT_PRODUCT_HPP

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "zlab/model.hpp"

namespace zlab {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Proper metric on the interior: rho(u, v) = sqrt(rho_bar(u, v)^2 + (H(u) - H(v))^2)
// with height H = f / (1 - f) for the model's gauge f.
class ProperMetric {
 public:
  explicit ProperMetric(std::shared_ptr<const ZModel> m);

  const ZModel& model() const { return *m_; }
  double height(double u) const;
  double operator()(double u, double v) const;
  double from_basepoint(double u) const { return (*this)(m_->basepoint(), u); }
  // Exact range of rho(x0, .) over a carrier interval, which is monotone on
  // either side of the basepoint.
  Interval range_from_basepoint(Interval c) const;

 private:
  std::shared_ptr<const ZModel> m_;
};

struct ProperMapConfig {
  double grid_step = 1.0 / 64.0;
  int shells = 128;
  // Keep adding shells until the last radius reaches this value.
  double min_reach = 0.0;
  int time_samples = 33;
  int bisection_steps = 200;
  // Both margins are applied every shell, so relative margins compound; keep them additive or tiny.
  double radius_margin = 1e-3;
  double time_margin = 1e-9;
  // Fraction of the previous shell width that t_i must clear beyond r_i.
  double clearance = 0.5;
  // A fundamental domain: carrier interval containing the basepoint whose translates cover X.
  Interval fundamental{0.0, 0.0};
};

// The proper map p: piecewise linear in rho(., x0) with p = i on the sphere of
// radius r_i, and the times t_i that slow the model homotopy accordingly.
class ProperMap {
 public:
  static ProperMap build(std::shared_ptr<const ZModel> m, const ProperMapConfig& cfg);
  // Rebuild from stored radii and times.
  ProperMap(std::shared_ptr<const ZModel> m, std::vector<double> radii, std::vector<double> times);

  const ZModel& model() const { return metric_.model(); }
  const ProperMetric& metric() const { return metric_; }
  // radii()[i-1] = r_i, times()[i] = t_i with times()[0] = 1.
  const std::vector<double>& radii() const { return radii_; }
  const std::vector<double>& times() const { return times_; }
  std::size_t shells() const { return radii_.size(); }

  double of_radius(double rho) const;
  double operator()(double u) const;
  Interval range(Interval carrier) const;
  // max over g of (max p - min p) on g . c.
  double variation(Interval c, const std::vector<std::int64_t>& elements) const;

  // The reparametrization xi with knots (0,0), (1/i, t_{i-1}), (1,1).
  double xi(double t) const;
  double alpha(double u, double s) const { return model().homotopy(u, s); }
  double alpha_hat(double u, double t) const;
  double alpha_prime(double u, double t) const;

 private:
  ProperMap(ProperMetric metric) : metric_(std::move(metric)) {}
  void check() const;

  ProperMetric metric_;
  std::vector<double> radii_;
  std::vector<double> times_;
};

// <xbar, ybar, mu> in the join; mu = 0 forgets ybar, mu = inf forgets xbar.
struct JoinPoint {
  double xbar = 0.0;
  double ybar = 0.0;
  double mu = 0.0;
};

bool equivalent(const JoinPoint& a, const JoinPoint& b);

struct ProductPoint {
  double x = 0.5;
  double y = 0.5;
  friend bool operator==(const ProductPoint&, const ProductPoint&) = default;
};

using CompactPoint = std::variant<ProductPoint, JoinPoint>;

// Metric data consulted by the join neighborhoods.
struct JoinGeometry {
  std::function<double(double, double)> rho_x;
  std::function<double(double, double)> rho_y;
  std::function<double(double, double)> slope;
};

// Membership in U(center, eps), strict inequalities throughout.
bool nbhd_contains(const JoinGeometry& geo, const JoinPoint& center, double eps, const CompactPoint& z);

class DirectProduct {
 public:
  DirectProduct(std::shared_ptr<const ZModel> x, std::shared_ptr<const ZModel> y, const ProperMapConfig& px,
                const ProperMapConfig& qy);
  DirectProduct(ProperMap p, ProperMap q);

  const ZModel& model_x() const { return p_.model(); }
  const ZModel& model_y() const { return q_.model(); }
  const ProperMap& p() const { return p_; }
  const ProperMap& q() const { return q_; }

  double slope(double x, double y) const;
  JoinGeometry geometry() const;
  bool nbhd_contains(const JoinPoint& center, double eps, const CompactPoint& z) const;

  ProductPoint ray_gamma_prime(const CompactPoint& z, double t) const;
  CompactPoint homotopy_gamma(const CompactPoint& z, double t) const;
  ProductPoint product_zset_homotopy(double x, double y, double t) const;
  CompactPoint extend_action_product(std::int64_t g, std::int64_t h, const CompactPoint& z) const;

 private:
  ProperMap p_;
  ProperMap q_;
};

// Line-model default: fundamental domain e([-1/2, 1/2]).
ProperMapConfig line_proper_map_config();

// Bounds of the displayed slope interval along the ray toward <xbar, ybar, mu>.
Interval ray_slope_interval(double mu, double t);

std::string to_string(const JoinPoint& z);
std::string to_string(const ProductPoint& z);
JoinPoint parse_join_point(const std::string& text);
ProductPoint parse_product_point(const std::string& text);
CompactPoint parse_compact_point(const std::string& text);

}  // namespace zlab

#endif
