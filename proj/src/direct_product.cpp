#include "zlab/direct_product.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "zlab/text.hpp"

namespace zlab {

// ---------------------------------------------------------------------------
// ProperMetric

ProperMetric::ProperMetric(std::shared_ptr<const ZModel> m) : m_(std::move(m)) {
  if (!m_) throw std::invalid_argument("a model is required");
  const double b = m_->basepoint();
  if (m_->gauge(b) != 0.0) throw std::invalid_argument("gauge must vanish at the basepoint");
  for (double z : m_->boundary_samples())
    if (m_->gauge(z) != 1.0) throw std::invalid_argument("gauge must equal 1 on the boundary");
}

double ProperMetric::height(double u) const {
  const double f = m_->gauge(u);
  if (f >= 1.0) return kInf;
  return f / (1.0 - f);
}

double ProperMetric::operator()(double u, double v) const {
  const double a = m_->rho_bar(u, v);
  const double hu = height(u);
  const double hv = height(v);
  if (std::isinf(hu) || std::isinf(hv)) return u == v ? 0.0 : kInf;
  return std::hypot(a, hu - hv);
}

Interval ProperMetric::range_from_basepoint(Interval c) const {
  const double a = from_basepoint(c.lo);
  const double b = from_basepoint(c.hi);
  const double lo = c.contains(m_->basepoint()) ? 0.0 : std::min(a, b);
  return {lo, std::max(a, b)};
}

// ---------------------------------------------------------------------------
// ProperMap

namespace {

// Smallest grid point strictly above x.
double grid_above(double x, double step) { return (std::floor(x / step) + 1.0) * step; }

// Translates g C1 ordered by the model's layers; tracks the largest rho(x0, .)
// over all translates that meet the open ball B(x0, r).
class TranslateScan {
 public:
  TranslateScan(const ProperMetric& metric, Interval c1) : metric_(metric), c1_(c1) {}

  double reach(double r) {
    auto keep = pending_.begin();
    for (auto it = pending_.begin(); it != pending_.end(); ++it) {
      if (it->lo < r)
        running_ = std::max(running_, it->hi);
      else
        *keep++ = *it;
    }
    pending_.erase(keep, pending_.end());
    for (;;) {
      bool met = false;
      for (std::int64_t g : metric_.model().element_layer(layer_)) {
        const Interval rng = metric_.range_from_basepoint(metric_.model().act_interval(g, c1_));
        if (rng.lo < r) {
          met = true;
          running_ = std::max(running_, rng.hi);
        } else {
          pending_.push_back(rng);
        }
      }
      ++layer_;
      if (!met) break;
    }
    return running_;
  }

 private:
  const ProperMetric& metric_;
  Interval c1_;
  int layer_ = 0;
  double running_ = 0.0;
  std::vector<Interval> pending_;
};

}  // namespace

ProperMap::ProperMap(std::shared_ptr<const ZModel> m, std::vector<double> radii, std::vector<double> times)
    : metric_(std::move(m)), radii_(std::move(radii)), times_(std::move(times)) {
  check();
}

void ProperMap::check() const {
  if (radii_.empty()) throw std::invalid_argument("a proper map needs at least one shell");
  if (times_.size() != radii_.size() + 1 || times_.front() != 1.0)
    throw std::invalid_argument("times must start at 1 and have one entry per shell plus one");
  for (std::size_t i = 0; i < radii_.size(); ++i) {
    const double prev = i == 0 ? 0.0 : radii_[i - 1];
    if (!(radii_[i] > prev)) throw std::invalid_argument("radii must be strictly increasing");
    if (!(times_[i + 1] < times_[i] && times_[i + 1] > 0.0))
      throw std::invalid_argument("times must be strictly decreasing in (0, 1]");
  }
}

ProperMap ProperMap::build(std::shared_ptr<const ZModel> m, const ProperMapConfig& cfg) {
  ProperMap pm{ProperMetric(std::move(m))};
  const ProperMetric& metric = pm.metric_;
  const ZModel& model = metric.model();
  if (!cfg.fundamental.contains(model.basepoint()))
    throw std::invalid_argument("the fundamental domain must contain the basepoint");
  if (cfg.shells < 1 || cfg.time_samples < 2) throw std::invalid_argument("invalid proper-map budgets");
  const std::vector<double> boundary = model.boundary_samples();

  // Closest approach to x0 of alpha(boundary, s); decreasing in s for the shipped models.
  auto closest = [&](double s) {
    double best = kInf;
    for (double z : boundary) best = std::min(best, metric.from_basepoint(model.homotopy(z, s)));
    return best;
  };
  auto farthest_after = [&](double t) {
    double best = 0.0;
    for (int k = 0; k < cfg.time_samples; ++k) {
      const double s = t + (1.0 - t) * k / (cfg.time_samples - 1);
      for (double z : boundary) best = std::max(best, metric.from_basepoint(model.homotopy(z, s)));
    }
    return best;
  };

  TranslateScan scan(metric, cfg.fundamental);
  pm.times_.push_back(1.0);
  const double c1_reach = metric.range_from_basepoint(cfg.fundamental).hi;
  pm.radii_.push_back(grid_above(c1_reach, cfg.grid_step));
  constexpr int kShellCap = 1 << 20;

  for (std::size_t i = 1;; ++i) {
    // t_i: alpha(boundary x [0, t_i)) stays beyond r_i plus a share of the last shell width.
    const double r = pm.radii_[i - 1];
    const double r_prev = i >= 2 ? pm.radii_[i - 2] : 0.0;
    const double target = r + cfg.clearance * (r - r_prev);
    double lo = 0.0;
    double hi = pm.times_[i - 1];
    if (!(closest(hi) <= target)) throw std::runtime_error("time search: homotopy never enters the shell");
    for (int k = 0; k < cfg.bisection_steps && hi - lo > 0.0; ++k) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      (closest(mid) > target ? lo : hi) = mid;
    }
    const double t = lo * (1.0 - cfg.time_margin);
    if (!(t > 0.0 && t < pm.times_[i - 1])) throw std::runtime_error("time search exhausted");
    pm.times_.push_back(t);

    const bool done = static_cast<int>(i) >= cfg.shells && r >= cfg.min_reach;
    if (done) break;
    if (static_cast<int>(i) >= kShellCap) throw std::runtime_error("radius search exhausted");

    // r_{i+1}: contains alpha(boundary x [t_i, 1]) and every translate meeting B(r_i).
    const double r_hom = farthest_after(t) + cfg.radius_margin;
    const double r_tr = scan.reach(r);
    pm.radii_.push_back(grid_above(std::max({r_hom, r_tr, r}), cfg.grid_step));
  }
  pm.check();
  return pm;
}

double ProperMap::of_radius(double rho) const {
  if (std::isinf(rho)) return kInf;
  if (rho <= radii_.front()) return rho / radii_.front();
  const auto it = std::upper_bound(radii_.begin(), radii_.end(), rho);
  std::size_t i = static_cast<std::size_t>(it - radii_.begin());  // radii_[i-1] <= rho
  if (i == radii_.size()) --i;                                    // extrapolate the last shell
  const double a = radii_[i - 1];
  const double b = radii_[i];
  return static_cast<double>(i) + (rho - a) / (b - a);
}

double ProperMap::operator()(double u) const { return of_radius(metric_.from_basepoint(u)); }

Interval ProperMap::range(Interval carrier) const {
  const Interval r = metric_.range_from_basepoint(carrier);
  return {of_radius(r.lo), of_radius(r.hi)};
}

double ProperMap::variation(Interval c, const std::vector<std::int64_t>& elements) const {
  if (elements.empty()) throw std::invalid_argument("empty element sample");
  double best = 0.0;
  for (std::int64_t g : elements) best = std::max(best, range(model().act_interval(g, c)).width());
  return best;
}

double ProperMap::xi(double t) const {
  if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("time outside [0,1]");
  if (t == 0.0 || t == 1.0) return t;
  const std::size_t n = times_.size() - 1;  // knots at 1/i for i = 1..n+1
  const double last = 1.0 / static_cast<double>(n + 1);
  if (t < last) return times_[n] * (t / last);
  auto i = static_cast<std::size_t>(std::floor(1.0 / t));
  while (t < 1.0 / static_cast<double>(i + 1)) ++i;
  while (i > 1 && t > 1.0 / static_cast<double>(i)) --i;
  // t in [1/(i+1), 1/i]
  const double a = 1.0 / static_cast<double>(i + 1);
  const double b = 1.0 / static_cast<double>(i);
  const double ta = times_[std::min(i, n)];
  const double tb = times_[i - 1];
  if (t == a) return ta;
  if (t == b) return tb;
  return ta + (t - a) / (b - a) * (tb - ta);
}

double ProperMap::alpha_hat(double u, double t) const { return alpha(u, xi(t)); }

double ProperMap::alpha_prime(double u, double t) const {
  if (!(t >= 0.0)) throw std::invalid_argument("ray parameter must be nonnegative");
  return alpha_hat(u, 1.0 / (1.0 + t));
}

ProperMapConfig line_proper_map_config() {
  ProperMapConfig cfg;
  cfg.fundamental = {IntLineModel::embed(-0.5), IntLineModel::embed(0.5)};
  return cfg;
}

// ---------------------------------------------------------------------------
// Join

bool equivalent(const JoinPoint& a, const JoinPoint& b) {
  if (a.mu != b.mu) return false;
  if (a.mu == 0.0) return a.xbar == b.xbar;
  if (std::isinf(a.mu)) return a.ybar == b.ybar;
  return a.xbar == b.xbar && a.ybar == b.ybar;
}

namespace {

double reciprocal(double mu) { return mu == 0.0 ? kInf : 1.0 / mu; }

}  // namespace

bool nbhd_contains(const JoinGeometry& geo, const JoinPoint& c, double eps, const CompactPoint& z) {
  if (!(eps > 0.0)) throw std::invalid_argument("neighborhood radius must be positive");
  const bool at_zero = c.mu == 0.0;
  const bool at_inf = std::isinf(c.mu);
  if (!at_zero && !at_inf && !(eps < c.mu))
    throw std::invalid_argument("interior-slope neighborhoods need eps < mu");

  if (const auto* p = std::get_if<ProductPoint>(&z)) {
    const double mu = geo.slope(p->x, p->y);
    if (at_zero) return geo.rho_x(p->x, c.xbar) < eps && mu < eps;
    if (at_inf) return geo.rho_y(p->y, c.ybar) < eps && reciprocal(mu) < eps;
    return geo.rho_x(p->x, c.xbar) < eps && geo.rho_y(p->y, c.ybar) < eps && std::fabs(mu - c.mu) < eps;
  }
  const auto& j = std::get<JoinPoint>(z);
  if (at_zero) {
    if (j.mu == 0.0) return geo.rho_x(c.xbar, j.xbar) < eps;
    return geo.rho_x(c.xbar, j.xbar) < eps && j.mu < eps;
  }
  if (at_inf) {
    if (std::isinf(j.mu)) return geo.rho_y(c.ybar, j.ybar) < eps;
    return geo.rho_y(c.ybar, j.ybar) < eps && reciprocal(j.mu) < eps;
  }
  return geo.rho_x(c.xbar, j.xbar) < eps && geo.rho_y(c.ybar, j.ybar) < eps && std::fabs(c.mu - j.mu) < eps;
}

Interval ray_slope_interval(double mu, double t) {
  const double s = std::sqrt(mu * mu + 1.0);
  const double lo = (mu * t - 2.0 * s) / (t + 3.0 * s);
  const double hi = t > 2.0 * s ? (mu * t + 3.0 * s) / (t - 2.0 * s) : kInf;
  return {lo, hi};
}

// ---------------------------------------------------------------------------
// DirectProduct

DirectProduct::DirectProduct(std::shared_ptr<const ZModel> x, std::shared_ptr<const ZModel> y,
                             const ProperMapConfig& px, const ProperMapConfig& qy)
    : p_(ProperMap::build(std::move(x), px)), q_(ProperMap::build(std::move(y), qy)) {}

DirectProduct::DirectProduct(ProperMap p, ProperMap q) : p_(std::move(p)), q_(std::move(q)) {}

double DirectProduct::slope(double x, double y) const {
  const double px = p_(x);
  if (px == 0.0) return kInf;
  return q_(y) / px;
}

JoinGeometry DirectProduct::geometry() const {
  return {[this](double a, double b) { return model_x().rho_bar(a, b); },
          [this](double a, double b) { return model_y().rho_bar(a, b); },
          [this](double x, double y) { return slope(x, y); }};
}

bool DirectProduct::nbhd_contains(const JoinPoint& center, double eps, const CompactPoint& z) const {
  return zlab::nbhd_contains(geometry(), center, eps, z);
}

ProductPoint DirectProduct::ray_gamma_prime(const CompactPoint& z, double t) const {
  if (!(t >= 0.0)) throw std::invalid_argument("ray parameter must be nonnegative");
  double x, y, mu;
  if (const auto* p = std::get_if<ProductPoint>(&z)) {
    x = p->x;
    y = p->y;
    mu = slope(x, y);
  } else {
    const auto& j = std::get<JoinPoint>(z);
    x = j.xbar;
    y = j.ybar;
    mu = j.mu;
    if (mu == 0.0) return {p_.alpha_prime(x, t), model_y().basepoint()};
    if (std::isinf(mu)) return {model_x().basepoint(), q_.alpha_prime(y, t)};
  }
  if (std::isinf(mu)) return {p_.alpha_prime(x, 0.0), q_.alpha_prime(y, t)};
  const double s = std::sqrt(mu * mu + 1.0);
  return {p_.alpha_prime(x, t / s), q_.alpha_prime(y, mu * t / s)};
}

CompactPoint DirectProduct::homotopy_gamma(const CompactPoint& z, double t) const {
  if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("time outside [0,1]");
  if (t == 0.0) return z;
  return ray_gamma_prime(z, 1.0 / t - 1.0);
}

ProductPoint DirectProduct::product_zset_homotopy(double x, double y, double t) const {
  return {zset_homotopy(model_x(), x, t), zset_homotopy(model_y(), y, t)};
}

CompactPoint DirectProduct::extend_action_product(std::int64_t g, std::int64_t h, const CompactPoint& z) const {
  if (!model_x().ez() || !model_y().ez())
    throw std::domain_error("the action extends to the join only for EZ models");
  if (const auto* p = std::get_if<ProductPoint>(&z)) return ProductPoint{act(model_x(), g, p->x), act(model_y(), h, p->y)};
  const auto& j = std::get<JoinPoint>(z);
  return JoinPoint{act(model_x(), g, j.xbar), act(model_y(), h, j.ybar), j.mu};
}

// ---------------------------------------------------------------------------
// Text forms

std::string to_string(const JoinPoint& z) {
  return "xbar=" + format_double(z.xbar) + "|ybar=" + format_double(z.ybar) + "|mu=" + format_double(z.mu);
}

std::string to_string(const ProductPoint& z) { return "x=" + format_double(z.x) + "|y=" + format_double(z.y); }

namespace {

void check_unit(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument(std::string(what) + " outside [0,1]");
}

}  // namespace

JoinPoint parse_join_point(const std::string& text) {
  JoinPoint z;
  int seen = 0;
  for (const auto& [k, v] : split_fields(text)) {
    if (k == "xbar")
      z.xbar = parse_double(v), seen |= 1;
    else if (k == "ybar")
      z.ybar = parse_double(v), seen |= 2;
    else if (k == "mu")
      z.mu = parse_double(v), seen |= 4;
    else
      throw std::invalid_argument("unknown join field '" + k + "'");
  }
  if (seen != 7) throw std::invalid_argument("join point needs xbar=, ybar= and mu=");
  check_unit(z.xbar, "xbar");
  check_unit(z.ybar, "ybar");
  if (!(z.mu >= 0.0)) throw std::invalid_argument("mu must be in [0, inf]");
  return z;
}

ProductPoint parse_product_point(const std::string& text) {
  ProductPoint z;
  int seen = 0;
  for (const auto& [k, v] : split_fields(text)) {
    if (k == "x")
      z.x = parse_double(v), seen |= 1;
    else if (k == "y")
      z.y = parse_double(v), seen |= 2;
    else
      throw std::invalid_argument("unknown product field '" + k + "'");
  }
  if (seen != 3) throw std::invalid_argument("product point needs x= and y=");
  check_unit(z.x, "x");
  check_unit(z.y, "y");
  return z;
}

CompactPoint parse_compact_point(const std::string& text) {
  if (text.rfind("xbar=", 0) == 0 || text.find("|mu=") != std::string::npos) return parse_join_point(text);
  return parse_product_point(text);
}

}  // namespace zlab
