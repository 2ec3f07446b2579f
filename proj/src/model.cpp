#include "zlab/model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace zlab {

double ZModel::boundary_distance(double a) const {
  double best = std::numeric_limits<double>::infinity();
  for (double b : boundary_samples()) best = std::min(best, rho_bar(a, b));
  return best;
}

Interval ZModel::act_interval(std::int64_t g, Interval c) const {
  const double a = act(g, c.lo);
  const double b = act(g, c.hi);
  return {std::min(a, b), std::max(a, b)};
}

int ZModel::r_value(std::int64_t g) const { return r_from_distance(boundary_distance(orbit_point(g))); }

int r_from_distance(double d) {
  if (!(d > 0.0) || !(d < 1.0)) throw std::domain_error("boundary distance outside (0,1)");
  int e = 0;
  std::frexp(d, &e);
  // d in [2^(e-1), 2^e), so d in [2^-n, 2^-(n-1)) with n = 1 - e.
  return 1 - e;
}

// ---------------------------------------------------------------------------

double IntLineModel::embed(double x) {
  if (std::isinf(x)) return x > 0 ? 1.0 : 0.0;
  // Same formula, arranged so that neither end cancels.
  return x < 0.0 ? 1.0 / (2.0 * (1.0 - x)) : 0.5 + x / (2.0 * (1.0 + x));
}

double IntLineModel::unembed(double u) {
  if (u >= 1.0) return std::numeric_limits<double>::infinity();
  if (u <= 0.0) return -std::numeric_limits<double>::infinity();
  return u < 0.5 ? (u - 0.5) / u : (u - 0.5) / (1.0 - u);
}

double IntLineModel::rho_bar(double a, double b) const { return std::fabs(a - b); }

double IntLineModel::boundary_distance(double a) const { return std::min(a, 1.0 - a); }

double IntLineModel::orbit_point(std::int64_t g) const {
  if (!integers().contains(g)) throw std::invalid_argument("element outside the integer model's domain");
  return embed(static_cast<double>(g));
}

std::optional<std::int64_t> IntLineModel::orbit_element(double a) const {
  if (!(a > 0.0 && a < 1.0)) return std::nullopt;
  const double x = unembed(a);
  if (!(std::fabs(x) <= static_cast<double>(IntegerGroup::kBound) + 1.0)) return std::nullopt;
  const std::int64_t n = std::llround(x);
  for (std::int64_t c : {n, n - 1, n + 1}) {
    if (integers().contains(c) && orbit_point(c) == a) return c;
  }
  return std::nullopt;
}

double IntLineModel::act(std::int64_t g, double a) const {
  if (is_boundary(a)) return a;
  if (g == 0) return a;
  if (auto n = orbit_element(a)) return orbit_point(integers().multiply(*n, g));
  return embed(unembed(a) + static_cast<double>(g));
}

double IntLineModel::homotopy(double a, double t) const {
  const double c = 0.5 * t;
  double hi = 1.0 - c;
  if (t > 0.0 && hi == 1.0) hi = std::nextafter(1.0, 0.0);
  double lo = c;
  if (t > 0.0 && lo == 0.0) lo = std::numeric_limits<double>::denorm_min();
  if (a < lo) return lo;
  if (a > hi) return hi;
  return a;
}

int IntLineModel::r_value(std::int64_t g) const {
  if (!integers().contains(g)) throw std::invalid_argument("element outside the integer model's domain");
  // The unique n with 2^(n-2) < 1 + |g| <= 2^(n-1).
  const auto m = static_cast<std::uint64_t>(g < 0 ? -g : g);
  return 1 + static_cast<int>(std::bit_width(m));
}

std::vector<std::int64_t> IntLineModel::elements_with_r_at_most(int R) const {
  if (R > 40) throw std::length_error("element enumeration bound too large");
  std::vector<std::int64_t> out;
  if (R < 2) return out;
  const std::int64_t n = (std::int64_t{1} << (R - 1)) - 1;
  out.reserve(static_cast<std::size_t>(2 * n));
  for (std::int64_t k = 1; k <= n; ++k) {
    out.push_back(k);
    out.push_back(-k);
  }
  return out;
}

std::vector<std::int64_t> IntLineModel::element_layer(int k) const {
  if (k < 0) throw std::invalid_argument("negative layer");
  if (k == 0) return {0};
  return {k, -k};
}

std::int64_t IntLineModel::sample_element(std::mt19937_64& rng) const {
  const std::uint64_t kind = rng() % 10;
  std::int64_t mag;
  if (kind < 6) {
    mag = 1 + static_cast<std::int64_t>(rng() % 4);
  } else if (kind < 9) {
    mag = 5 + static_cast<std::int64_t>(rng() % 60);
  } else {
    const int bits = 6 + static_cast<int>(rng() % 15);
    mag = (std::int64_t{1} << bits) + static_cast<std::int64_t>(rng() % (std::uint64_t{1} << bits));
  }
  return (rng() & 1) ? mag : -mag;
}

double IntLineModel::image_diameter_tail(Interval c, int R) const {
  if (is_boundary(c.lo) || is_boundary(c.hi)) return 1.0;
  if (R > 50) R = 50;
  const double n0 = std::ldexp(1.0, R - 1);
  const double A = unembed(c.lo);
  const double B = unembed(c.hi);
  // Beyond n0 the image of [A, B] moves monotonically toward a boundary point
  // and shrinks, provided the whole preimage interval has crossed 0.
  if (A + n0 < 0.0 || B - n0 > 0.0) return 1.0;
  const double right = embed(B + n0) - embed(A + n0);
  const double left = embed(B - n0) - embed(A - n0);
  return std::max(right, left);
}

std::vector<double> IntLineModel::carrier_net(double radius) const {
  if (!(radius > 0.0)) throw std::invalid_argument("net radius must be positive");
  if (radius >= 0.5) return {0.5};
  const double nd = std::ceil(1.0 / (2.0 * radius));
  if (nd > 1e7) throw std::length_error("carrier net too fine");
  const auto n = static_cast<int>(nd);
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = (i + 0.5) / n;
  return out;
}

double IntLineModel::gauge(double a) const { return 2.0 * std::fabs(a - 0.5); }

std::shared_ptr<const ZModel> make_model(const std::string& name) {
  if (name == "int-line") return std::make_shared<IntLineModel>();
  throw std::invalid_argument("unknown model '" + name + "'");
}

// ---------------------------------------------------------------------------

namespace {

void check_carrier(double a) {
  if (!(a >= 0.0 && a <= 1.0)) throw std::invalid_argument("carrier coordinate outside [0,1]");
}

void check_time(double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("time outside [0,1]");
}

}  // namespace

double rho_hat(const ZModel& m, double a, double b) {
  check_carrier(a);
  check_carrier(b);
  return m.rho_bar(a, b);
}

double boundary_distance(const ZModel& m, double a) {
  check_carrier(a);
  return m.boundary_distance(a);
}

double act(const ZModel& m, std::int64_t g, double a) {
  check_carrier(a);
  if (!m.group().contains(g)) throw std::invalid_argument("element outside the model's group");
  if (m.is_boundary(a) && !m.ez()) throw std::domain_error("model does not extend the action to the boundary");
  return m.act(g, a);
}

double zset_homotopy(const ZModel& m, double a, double t) {
  check_carrier(a);
  check_time(t);
  return m.homotopy(a, t);
}

int r_value(const ZModel& m, std::int64_t g) {
  if (!m.group().contains(g)) throw std::invalid_argument("element outside the model's group");
  return m.r_value(g);
}

}  // namespace zlab
