#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "zlab/text.hpp"
#include "zlab/verify.hpp"

namespace zlab {

namespace {

// Endpoints of act_interval computed through unembed/embed can miss the exact
// tiling by an ulp or two; the greedy cover accepts such gaps.
constexpr double kTilingSlack = 1e-12;

bool overlaps(Interval a, Interval b) { return a.lo <= b.hi && b.lo <= a.hi; }

Interval hull(Interval a, Interval b) { return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)}; }

// sup of rho_bar(., b) over a carrier interval, by convexity.
double sup_rho(const ZModel& m, Interval c, double b) { return std::max(m.rho_bar(c.lo, b), m.rho_bar(c.hi, b)); }

double diameter(const ZModel& m, Interval c) { return m.rho_bar(c.lo, c.hi); }

// Upper bound on sup over c of the distance to the boundary.
double sup_boundary_distance(const ZModel& m, Interval c) {
  double best = kInf;
  for (double b : m.boundary_samples()) best = std::min(best, sup_rho(m, c, b));
  return best;
}

std::string show_interval(Interval c) { return "[" + format_double(c.lo) + ", " + format_double(c.hi) + "]"; }

}  // namespace

int covering_count(const ZModel& m, Interval fundamental, Interval c) {
  if (!(c.lo <= c.hi)) throw std::invalid_argument("empty compactum");
  std::vector<Interval> cand;
  int quiet = 0;
  for (int k = 0; quiet < 4; ++k) {
    if (k > 1'000'000) throw std::runtime_error("compactum not covered by translates");
    bool any = false;
    for (std::int64_t g : m.element_layer(k)) {
      const Interval t = m.act_interval(g, fundamental);
      if (overlaps(t, {c.lo - kTilingSlack, c.hi + kTilingSlack})) {
        cand.push_back(t);
        any = true;
      }
    }
    quiet = (any || cand.empty()) ? 0 : quiet + 1;
  }
  int count = 0;
  double cur = c.lo;
  while (true) {
    double reach = -kInf;
    for (const Interval& t : cand)
      if (t.lo <= cur + kTilingSlack && t.hi >= cur) reach = std::max(reach, t.hi);
    if (reach == -kInf) throw std::runtime_error("translates of the fundamental domain leave a gap");
    ++count;
    if (reach >= c.hi - kTilingSlack) return count;
    if (reach <= cur) throw std::runtime_error("greedy cover made no progress");
    cur = reach;
  }
}

ProperMapReport check_proper_map(const ProperMap& p, Interval fundamental, int imax, int samples_per_shell,
                                 int element_range) {
  const ZModel& m = p.model();
  ProperMapReport r;
  r.p_at_basepoint = p(m.basepoint());
  r.shells = p.shells();
  r.imax = imax;
  r.element_range = element_range;
  if (static_cast<std::size_t>(imax) >= p.times().size()) throw std::invalid_argument("imax beyond the built shells");

  const auto bd = m.boundary_samples();
  double worst_excess = -kInf;
  for (int i = 1; i <= imax; ++i) {
    const double ti = p.times()[i];
    const double tprev = p.times()[i - 1];
    for (int k = 0; k < samples_per_shell; ++k) {
      const double s = ti + (tprev - ti) * static_cast<double>(k) / samples_per_shell;
      const double xb = bd[static_cast<std::size_t>(k) % bd.size()];
      const double v = p(p.alpha(xb, s));
      ++r.dagger_checks;
      const bool ok = v > i - 1 && v <= i + 1;
      const double excess = std::max((i - 1) - v, v - (i + 1));
      if (!ok) ++r.dagger_violations;
      if (excess > worst_excess) {
        worst_excess = excess;
        std::ostringstream os;
        os << "i=" << i << " s=" << format_double(s) << " xbar=" << format_double(xb) << " p=" << format_double(v);
        r.worst_dagger = os.str();
      }
    }
  }

  std::vector<std::int64_t> elements;
  for (std::int64_t g = -element_range; g <= element_range; ++g) elements.push_back(g);
  const Interval f1 = m.act_interval(1, fundamental);
  const Interval fm1 = m.act_interval(-1, fundamental);
  const std::vector<std::pair<std::string, Interval>> compacta = {
      {"C1", fundamental}, {"C1 u g1 C1", hull(fundamental, f1)}, {"g-1 C1 u C1 u g1 C1", hull(fm1, f1)}};
  bool vars_ok = true;
  for (const auto& [name, c] : compacta) {
    VariationRow row;
    row.name = name;
    row.compactum = c;
    row.k = covering_count(m, fundamental, c);
    row.variation = p.variation(c, elements);
    row.bound = 2.0 * row.k;
    vars_ok = vars_ok && row.variation <= row.bound;
    r.variations.push_back(row);
  }
  r.rp_c1 = r.variations.front().variation;
  r.pass = r.p_at_basepoint == 0.0 && r.dagger_violations == 0 && r.rp_c1 <= 2.0 && vars_ok;
  return r;
}

BracketReport check_brackets(const ProperMap& p, int nx, int nt, double tmin) {
  if (nx < 1 || nt < 2 || !(tmin > 0.0 && tmin < 1.0)) throw std::invalid_argument("bad bracket grid");
  const auto bd = p.model().boundary_samples();
  BracketReport r;
  double worst = -kInf;
  auto note = [&](double excess, const char* which, double xb, double t, double v) {
    if (excess <= worst) return;
    worst = excess;
    std::ostringstream os;
    os << which << " xbar=" << format_double(xb) << " t=" << format_double(t) << " p=" << format_double(v);
    r.worst = os.str();
  };
  for (int a = 0; a < nx; ++a) {
    const double xb = bd[static_cast<std::size_t>(a) % bd.size()];
    for (int b = 0; b < nt; ++b) {
      const double t = b == nt - 1 ? 1.0 : tmin + (1.0 - tmin) * b / (nt - 1);
      const double v = p(p.alpha_hat(xb, t));
      ++r.hat_checks;
      if (!(v >= 1.0 / t - 1.0 && v <= 1.0 / t + 2.0)) ++r.hat_violations;
      note(std::max((1.0 / t - 1.0) - v, v - (1.0 / t + 2.0)), "hat", xb, t, v);

      const double tp = 1.0 / t - 1.0;
      const double w = p(p.alpha_prime(xb, tp));
      ++r.prime_checks;
      if (!(w > tp - 1.0 && w < tp + 3.0)) ++r.prime_violations;
      note(std::max((tp - 1.0) - w, w - (tp + 3.0)), "prime", xb, tp, w);
    }
  }
  r.pass = r.hat_violations == 0 && r.prime_violations == 0;
  return r;
}

RaySlopeReport check_ray_slopes(const DirectProduct& dp, const std::vector<double>& mus) {
  RaySlopeReport r;
  r.pass = true;
  auto add = [&](double mu, double t) {
    for (double xb : dp.model_x().boundary_samples())
      for (double yb : dp.model_y().boundary_samples()) {
        RaySlopeRow row;
        row.mu = mu;
        row.t = t;
        row.xbar = xb;
        row.ybar = yb;
        const ProductPoint z = dp.ray_gamma_prime(JoinPoint{xb, yb, mu}, t);
        row.slope = dp.slope(z.x, z.y);
        row.bounds = ray_slope_interval(mu, t);
        row.inside = row.bounds.lo < row.slope && row.slope < row.bounds.hi;
        r.pass = r.pass && row.inside;
        r.rows.push_back(row);
      }
  };
  for (double mu : mus) {
    if (!(mu > 0.0) || std::isinf(mu)) throw std::invalid_argument("ray slopes need 0 < mu < inf");
    add(mu, 10.0 * std::sqrt(mu * mu + 1.0));
  }
  return r;
}

GammaReport check_gamma(const DirectProduct& dp, std::size_t samples, std::size_t steps, const SweepOptions& opt) {
  const ZModel& mx = dp.model_x();
  const ZModel& my = dp.model_y();
  const auto bx = mx.boundary_samples();
  const auto by = my.boundary_samples();
  struct Cell {
    std::size_t failures = 0;
    std::string first;
  };
  auto cells = sweep<Cell>(samples, opt.jobs, [&](std::size_t i) {
    auto rng = stream(opt.seed, i);
    CompactPoint z;
    const auto interior = [&] { return 1e-6 + (1.0 - 2e-6) * unit_double(rng); };
    switch (i % 4) {
      case 0: z = JoinPoint{bx[rng() % bx.size()], by[rng() % by.size()], 0.0}; break;
      case 1: z = JoinPoint{bx[rng() % bx.size()], by[rng() % by.size()], kInf}; break;
      case 2: z = JoinPoint{bx[rng() % bx.size()], by[rng() % by.size()], std::pow(10.0, -3.0 + 6.0 * unit_double(rng))}; break;
      default: z = ProductPoint{interior(), interior()}; break;
    }
    Cell c;
    auto fail = [&](const std::string& why) {
      if (c.failures++ == 0) {
        const std::string s = std::holds_alternative<JoinPoint>(z) ? to_string(std::get<JoinPoint>(z))
                                                                   : to_string(std::get<ProductPoint>(z));
        c.first = s + ": " + why;
      }
    };
    const CompactPoint z0 = dp.homotopy_gamma(z, 0.0);
    if (z0.index() != z.index()) {
      fail("gamma(z,0) changed type");
    } else if (const auto* j = std::get_if<JoinPoint>(&z)) {
      const auto& k = std::get<JoinPoint>(z0);
      if (!(k.xbar == j->xbar && k.ybar == j->ybar && k.mu == j->mu)) fail("gamma(z,0) != z");
    } else if (!(std::get<ProductPoint>(z0) == std::get<ProductPoint>(z))) {
      fail("gamma(z,0) != z");
    }
    for (std::size_t s = 1; s <= steps; ++s) {
      const double t = static_cast<double>(s) / static_cast<double>(steps);
      const CompactPoint w = dp.homotopy_gamma(z, t);
      const auto* pp = std::get_if<ProductPoint>(&w);
      if (!pp) {
        fail("gamma(z," + format_double(t) + ") left the product");
        continue;
      }
      if (mx.is_boundary(pp->x) || my.is_boundary(pp->y)) fail("gamma(z," + format_double(t) + ") not interior");
      if (s == steps && !(pp->x == mx.basepoint() && pp->y == my.basepoint())) fail("gamma(z,1) != (x0,y0)");
    }
    return c;
  });
  GammaReport r;
  r.samples = samples;
  r.steps = steps;
  for (const Cell& c : cells) {
    if (c.failures > 0 && r.failures == 0) r.first_failure = c.first;
    r.failures += c.failures;
  }
  r.pass = r.failures == 0;
  return r;
}

// ---------------------------------------------------------------------------
// Counterexample

bool ExtInterval::contains(double v) const {
  const bool above = v > lo || (v == lo && !lo_open);
  const bool below = v < hi || (v == hi && !hi_open);
  return above && below;
}

bool ExtInterval::contains(const ExtInterval& o) const {
  const bool above = o.lo > lo || (o.lo == lo && (!lo_open || o.lo_open));
  const bool below = o.hi < hi || (o.hi == hi && (!hi_open || o.hi_open));
  return above && below;
}

std::vector<ProductCoverSet> counterexample_cover() {
  const ExtInterval all{-kInf, kInf, false, false};
  return {
      {"U0", {-0.75, 0.75, true, true}, {-0.5, kInf, true, false}},
      {"U1", {-0.75, 0.75, true, true}, {-kInf, 0.5, false, true}},
      {"U2", {-kInf, -0.5, false, true}, all},
      {"U3", {0.5, kInf, true, false}, all},
  };
}

CounterexampleReport reproduce_counterexample(const DirectProduct& dp, int range, double delta) {
  if (range < 0 || !(delta > 0.0)) throw std::invalid_argument("bad counterexample parameters");
  const ZModel& my = dp.model_y();
  const auto cover = counterexample_cover();
  const Interval c{IntLineModel::embed(-1.0), IntLineModel::embed(1.0)};
  const double pmax = dp.p().range(c).hi;

  CounterexampleReport r;
  r.range = range;
  r.delta = delta;
  r.product_fails_everywhere = true;
  for (std::int64_t n = -range; n <= range; ++n) {
    CounterexampleRow row;
    row.n = n;
    const ExtInterval tx{-1.0, 1.0, false, false};
    const ExtInterval ty{static_cast<double>(n), static_cast<double>(n), false, false};
    for (const auto& u : cover)
      if (u.x.contains(tx) && u.y.contains(ty)) row.product_containing.push_back(u.name);
    if (!row.product_containing.empty()) r.product_fails_everywhere = false;

    const double y = IntLineModel::embed(static_cast<double>(n));
    const double ybar = n >= 0 ? 1.0 : 0.0;
    const double q = dp.q()(y);
    const bool by_range = my.rho_bar(y, ybar) < delta && q > 0.0 && pmax / q < delta;
    // p is largest on the translate at an endpoint of c; both endpoints go through the neighborhood test.
    const JoinPoint center{dp.model_x().basepoint(), ybar, kInf};
    const bool by_nbhd = dp.nbhd_contains(center, delta, ProductPoint{c.lo, y}) &&
                         dp.nbhd_contains(center, delta, ProductPoint{c.hi, y});
    row.join_contained = by_range && by_nbhd;
    r.rows.push_back(row);
  }
  // Smallest n0 >= 0 with every n in [n0, range] contained.
  std::int64_t n0 = -1;
  for (auto it = r.rows.rbegin(); it != r.rows.rend() && it->n >= 0 && it->join_contained; ++it) n0 = it->n;
  r.n0_found = n0 >= 0;
  r.n0 = r.n0_found ? n0 : 0;
  r.pass = r.product_fails_everywhere && r.n0_found;
  return r;
}

// ---------------------------------------------------------------------------
// Product null condition

std::string ProductCoverElement::label() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::Zero: os << "U(<" << format_double(center.xbar) << ",0>," << format_double(eps) << ")"; break;
    case Kind::Infinity: os << "U(<" << format_double(center.ybar) << ",inf>," << format_double(eps) << ")"; break;
    case Kind::Interior:
      os << "U(<" << format_double(center.xbar) << "," << format_double(center.ybar) << "," << format_double(center.mu)
         << ">," << format_double(eps) << ")";
      break;
    case Kind::Box: os << "box " << show_interval(box_x) << "x" << show_interval(box_y); break;
  }
  return os.str();
}

std::vector<ProductCoverElement> product_cover(const DirectProduct& dp, double delta) {
  if (!(delta > 0.0 && delta < 0.5)) throw std::invalid_argument("delta outside (0, 1/2)");
  const auto bx = dp.model_x().boundary_samples();
  const auto by = dp.model_y().boundary_samples();
  std::vector<ProductCoverElement> out;
  for (double xb : bx) {
    ProductCoverElement e;
    e.kind = ProductCoverElement::Kind::Zero;
    e.center = {xb, by.front(), 0.0};
    e.eps = 3.0 * delta;
    out.push_back(e);
  }
  for (double yb : by) {
    ProductCoverElement e;
    e.kind = ProductCoverElement::Kind::Infinity;
    e.center = {bx.front(), yb, kInf};
    e.eps = 3.0 * delta;
    out.push_back(e);
  }
  const double top = 1.0 / (3.0 * delta) + 1.5 * delta;
  for (int k = 0;; ++k) {
    const double m = 2.0 * delta + k * delta / 2.0;
    if (m > top) break;
    for (double xb : bx)
      for (double yb : by) {
        ProductCoverElement e;
        e.kind = ProductCoverElement::Kind::Interior;
        e.center = {xb, yb, m};
        e.eps = 1.5 * delta;
        out.push_back(e);
      }
  }
  std::vector<double> centers;
  for (int k = 1; k * delta < 1.0; ++k) centers.push_back(k * delta);
  for (double a : centers)
    for (double b : centers) {
      ProductCoverElement e;
      e.kind = ProductCoverElement::Kind::Box;
      e.box_x = {a - delta, a + delta};
      e.box_y = {b - delta, b + delta};
      out.push_back(e);
    }
  return out;
}

double TranslateBox::mu_lo() const { return p.hi == 0.0 ? kInf : q.lo / p.hi; }
double TranslateBox::mu_hi() const { return p.lo == 0.0 ? kInf : q.hi / p.lo; }

TranslateBox translate_box(const DirectProduct& dp, std::int64_t g, Interval c, std::int64_t h, Interval d) {
  TranslateBox b;
  b.x = dp.model_x().act_interval(g, c);
  b.y = dp.model_y().act_interval(h, d);
  b.p = dp.p().range(b.x);
  b.q = dp.q().range(b.y);
  return b;
}

bool fits(const DirectProduct& dp, const ProductCoverElement& e, const TranslateBox& b) {
  using K = ProductCoverElement::Kind;
  switch (e.kind) {
    case K::Zero: return sup_rho(dp.model_x(), b.x, e.center.xbar) < e.eps && b.mu_hi() < e.eps;
    case K::Infinity: {
      const double inv_hi = b.q.lo == 0.0 ? kInf : b.p.hi / b.q.lo;
      return sup_rho(dp.model_y(), b.y, e.center.ybar) < e.eps && inv_hi < e.eps;
    }
    case K::Interior:
      return sup_rho(dp.model_x(), b.x, e.center.xbar) < e.eps && sup_rho(dp.model_y(), b.y, e.center.ybar) < e.eps &&
             b.mu_lo() > e.center.mu - e.eps && b.mu_hi() < e.center.mu + e.eps;
    case K::Box:
      return e.box_x.lo < b.x.lo && b.x.hi < e.box_x.hi && e.box_y.lo < b.y.lo && b.y.hi < e.box_y.hi;
  }
  return false;
}

int fit_index(const DirectProduct& dp, const std::vector<ProductCoverElement>& cover, const TranslateBox& b) {
  for (std::size_t i = 0; i < cover.size(); ++i)
    if (fits(dp, cover[i], b)) return static_cast<int>(i);
  return -1;
}

namespace {

// Per-element data of one factor.
struct Side {
  const ProperMap& pm;
  Interval c;

  Interval carrier(std::int64_t g) const { return pm.model().act_interval(g, c); }
};

// Largest layer containing an element that fails `bad`, scanning until the
// passing stretch is at least as long as the failing region plus a margin.
template <class Bad>
std::int64_t last_bad_layer(const ZModel& m, Bad bad, std::int64_t& scanned) {
  std::int64_t last = -1;
  std::int64_t k = 0;
  for (; k <= 2 * last + 64; ++k)
    for (std::int64_t g : m.element_layer(static_cast<int>(k)))
      if (bad(g)) last = k;
  scanned = std::max(scanned, k);
  return last;
}

// Largest layer whose translates of c meet the hull of translates in layers <= upto,
// and the largest sup of the proper map over those translates.
struct Meeting {
  Interval region{0.0, 0.0};
  std::int64_t last = -1;
  double max_map = 0.0;
};

Meeting meeting_layer(const Side& s, std::int64_t upto, std::int64_t& scanned) {
  const ZModel& m = s.pm.model();
  Meeting out;
  if (upto < 0) return out;
  bool first = true;
  for (std::int64_t k = 0; k <= upto; ++k)
    for (std::int64_t g : m.element_layer(static_cast<int>(k))) {
      const Interval t = s.carrier(g);
      out.region = first ? t : hull(out.region, t);
      first = false;
    }
  std::int64_t k = 0;
  for (int quiet = 0; quiet < 8; ++k) {
    bool any = false;
    for (std::int64_t g : m.element_layer(static_cast<int>(k))) {
      const Interval t = s.carrier(g);
      if (!overlaps(t, out.region)) continue;
      any = true;
      out.last = k;
      out.max_map = std::max(out.max_map, s.pm.range(t).hi);
    }
    quiet = any ? 0 : quiet + 1;
  }
  scanned = std::max(scanned, k);
  return out;
}

struct Thresholds {
  int k_c = 0, k_d = 0;
  double rp = 0.0, rq = 0.0;
  std::int64_t g_j = -1, h_k = -1, g_q = -1, h_p = -1;
  Meeting j, k, p, q;
  std::int64_t scanned_x = 0, scanned_y = 0;
};

Thresholds thresholds(const DirectProduct& dp, const NullProductConfig& cfg) {
  const ZModel& mx = dp.model_x();
  const ZModel& my = dp.model_y();
  const Side sx{dp.p(), cfg.c};
  const Side sy{dp.q(), cfg.d};
  const double delta = cfg.delta;
  Thresholds th;
  th.k_c = covering_count(mx, cfg.fundamental_x, cfg.c);
  th.k_d = covering_count(my, cfg.fundamental_y, cfg.d);
  th.rp = 2.0 * th.k_c;
  th.rq = 2.0 * th.k_d;

  const double p_floor = (4.0 / delta) * (th.rq + th.rp / delta);
  th.g_j = last_bad_layer(
      mx,
      [&](std::int64_t g) {
        const Interval t = sx.carrier(g);
        return !(diameter(mx, t) < delta / 4 && dp.p().range(t).lo > p_floor &&
                 sup_boundary_distance(mx, t) < delta / 4);
      },
      th.scanned_x);
  th.h_k = last_bad_layer(
      my,
      [&](std::int64_t h) {
        const Interval t = sy.carrier(h);
        return !(diameter(my, t) < delta / 4 && sup_boundary_distance(my, t) < delta / 4);
      },
      th.scanned_y);
  th.j = meeting_layer(sx, th.g_j, th.scanned_x);
  th.k = meeting_layer(sy, th.h_k, th.scanned_y);
  th.h_p = last_bad_layer(
      my,
      [&](std::int64_t h) {
        const Interval t = sy.carrier(h);
        return !(dp.q().range(t).lo > th.j.max_map / delta && sup_boundary_distance(my, t) < delta / 2 &&
                 diameter(my, t) < delta / 2);
      },
      th.scanned_y);
  th.g_q = last_bad_layer(
      mx,
      [&](std::int64_t g) {
        const Interval t = sx.carrier(g);
        return !(dp.p().range(t).lo > th.k.max_map / delta && sup_boundary_distance(mx, t) < delta / 2 &&
                 diameter(mx, t) < delta / 2);
      },
      th.scanned_x);
  th.p = meeting_layer(sy, th.h_p, th.scanned_y);
  th.q = meeting_layer(sx, th.g_q, th.scanned_x);
  return th;
}

double reach_needed(const Side& s, std::int64_t layer) {
  const ZModel& m = s.pm.model();
  double best = 0.0;
  for (std::int64_t g : m.element_layer(static_cast<int>(layer)))
    best = std::max(best, s.pm.metric().range_from_basepoint(s.carrier(g)).hi);
  return best;
}

void require_integer_layers(const ZModel& m) {
  for (int k = 1; k <= 3; ++k) {
    auto layer = m.element_layer(k);
    std::sort(layer.begin(), layer.end());
    if (layer != std::vector<std::int64_t>{-k, k})
      throw std::invalid_argument("product null check needs layers {-k, k}");
  }
}

std::int64_t off_grid_limit(const NullProductConfig& cfg, std::int64_t a, std::int64_t b) {
  return static_cast<std::int64_t>(std::ceil(cfg.off_grid_factor * static_cast<double>(std::max({a, b, std::int64_t{cfg.grid}})))) + 1;
}

}  // namespace

NullProductReport check_null_product(const DirectProduct& dp, const NullProductConfig& cfg, const SweepOptions& opt,
                                     std::vector<int>* grid_fit) {
  require_integer_layers(dp.model_x());
  require_integer_layers(dp.model_y());
  if (cfg.grid < 1) throw std::invalid_argument("grid must be positive");
  const auto cover = product_cover(dp, cfg.delta);
  const Thresholds th = thresholds(dp, cfg);
  const double delta = cfg.delta;

  NullProductReport r;
  r.delta = delta;
  r.grid = cfg.grid;
  r.cover_size = cover.size();
  r.k_c = th.k_c;
  r.k_d = th.k_d;
  r.rp_bound = th.rp;
  r.rq_bound = th.rq;
  r.g_j = th.g_j;
  r.h_k = th.h_k;
  r.g_q = th.g_q;
  r.h_p = th.h_p;
  r.m_j = th.j.max_map;
  r.m_k = th.k.max_map;
  // gC meets J and hD meets P_J, or gC meets Q_K and hD meets K.
  r.gamma_g1 = th.j.last;
  r.gamma_h1 = th.p.last;
  r.gamma_g2 = th.q.last;
  r.gamma_h2 = th.k.last;
  const auto in_gamma = [&](std::int64_t g, std::int64_t h) {
    const std::int64_t a = std::abs(g), b = std::abs(h);
    return (a <= r.gamma_g1 && b <= r.gamma_h1) || (a <= r.gamma_g2 && b <= r.gamma_h2);
  };
  const std::int64_t G = cfg.grid;
  r.grid_inside_gamma = in_gamma(G, G);

  std::vector<std::int64_t> elements;
  for (std::int64_t g = -G; g <= G; ++g) elements.push_back(g);
  r.rp_sampled = dp.p().variation(cfg.c, elements);
  r.rq_sampled = dp.q().variation(cfg.d, elements);

  // Direct fit on the grid, one row per g.
  const std::size_t side = static_cast<std::size_t>(2 * G + 1);
  auto rows = sweep<std::vector<int>>(side, opt.jobs, [&](std::size_t i) {
    const std::int64_t g = static_cast<std::int64_t>(i) - G;
    std::vector<int> row(side);
    for (std::size_t j = 0; j < side; ++j) {
      const std::int64_t h = static_cast<std::int64_t>(j) - G;
      row[j] = fit_index(dp, cover, translate_box(dp, g, cfg.c, h, cfg.d));
    }
    return row;
  });
  r.grid_cells = side * side;
  r.empirical_inside_certified = true;
  r.empirical_off_edge = true;
  if (grid_fit) grid_fit->clear();
  for (std::size_t i = 0; i < side; ++i)
    for (std::size_t j = 0; j < side; ++j) {
      if (grid_fit) grid_fit->push_back(rows[i][j]);
      if (rows[i][j] >= 0) continue;
      const std::int64_t g = static_cast<std::int64_t>(i) - G, h = static_cast<std::int64_t>(j) - G;
      ++r.empirical_exceptional;
      r.empirical_max_g = std::max(r.empirical_max_g, std::abs(g));
      r.empirical_max_h = std::max(r.empirical_max_h, std::abs(h));
      if (!in_gamma(g, h)) r.empirical_inside_certified = false;
      if (std::abs(g) == G || std::abs(h) == G) r.empirical_off_edge = false;
    }

  // Off-grid translates outside the certified set.
  const std::int64_t lim_g = off_grid_limit(cfg, r.gamma_g1, r.gamma_g2);
  const std::int64_t lim_h = off_grid_limit(cfg, r.gamma_h1, r.gamma_h2);
  struct Probe {
    bool fit = true;
    bool case1 = false;
    double diam_mu = 0.0;
    std::int64_t g = 0, h = 0;
  };
  auto draw = [](std::mt19937_64& rng, std::int64_t lim) {
    const double u = unit_double(rng);
    const double mag = (rng() & 1) ? u * static_cast<double>(lim) : std::exp(u * std::log(static_cast<double>(lim)));
    const auto v = std::min<std::int64_t>(lim, static_cast<std::int64_t>(mag));
    return (rng() & 1) ? v : -v;
  };
  auto probes = sweep<Probe>(cfg.off_grid_samples, opt.jobs, [&](std::size_t i) {
    auto rng = stream(opt.seed ^ 0x6e756c6cULL, i);
    Probe pr;
    do {
      pr.g = draw(rng, lim_g);
      pr.h = draw(rng, lim_h);
    } while (in_gamma(pr.g, pr.h));
    const TranslateBox b = translate_box(dp, pr.g, cfg.c, pr.h, cfg.d);
    pr.fit = fit_index(dp, cover, b) >= 0;
    const bool meets = b.mu_hi() >= delta && b.mu_lo() <= 1.0 / delta;
    pr.case1 = std::abs(pr.g) > th.j.last && std::abs(pr.h) > th.k.last && meets;
    if (pr.case1) pr.diam_mu = b.mu_hi() - b.mu_lo();
    return pr;
  });
  r.off_grid = probes.size();
  for (const Probe& pr : probes) {
    if (!pr.fit) {
      if (r.off_grid_failures++ == 0) r.first_failure = "g=" + std::to_string(pr.g) + " h=" + std::to_string(pr.h);
    }
    if (pr.case1) {
      ++r.case1;
      r.case1_max_diam_mu = std::max(r.case1_max_diam_mu, pr.diam_mu);
    }
  }

  // Every evaluated translate must sit inside the constructed shells.
  const std::int64_t far_x = std::max({th.scanned_x, lim_g, G});
  const std::int64_t far_y = std::max({th.scanned_y, lim_h, G});
  r.reach_needed_x = reach_needed({dp.p(), cfg.c}, far_x);
  r.reach_needed_y = reach_needed({dp.q(), cfg.d}, far_y);
  r.reach_ok = r.reach_needed_x <= dp.p().radii().back() && r.reach_needed_y <= dp.q().radii().back();

  const bool finite = r.gamma_g1 >= 0 || r.gamma_g2 >= 0;
  r.pass = finite && r.reach_ok && r.rp_sampled <= r.rp_bound && r.rq_sampled <= r.rq_bound &&
           r.empirical_inside_certified && r.empirical_off_edge && r.off_grid_failures == 0 && r.case1 > 0 &&
           r.case1_max_diam_mu < delta / 2;
  return r;
}

DirectProduct product_for_null(std::shared_ptr<const ZModel> x, std::shared_ptr<const ZModel> y,
                               const NullProductConfig& cfg, const SweepOptions& opt) {
  (void)opt;
  require_integer_layers(*x);
  require_integer_layers(*y);
  ProperMapConfig px;
  px.fundamental = cfg.fundamental_x;
  ProperMapConfig qy;
  qy.fundamental = cfg.fundamental_y;
  DirectProduct dp(x, y, px, qy);
  // The thresholds depend on p and q; rebuild with more reach until they settle.
  for (int round = 0; round < 8; ++round) {
    const Thresholds th = thresholds(dp, cfg);
    const std::int64_t far_x = std::max({th.scanned_x, off_grid_limit(cfg, th.j.last, th.q.last), std::int64_t{cfg.grid}});
    const std::int64_t far_y = std::max({th.scanned_y, off_grid_limit(cfg, th.p.last, th.k.last), std::int64_t{cfg.grid}});
    const double need_x = reach_needed({dp.p(), cfg.c}, far_x);
    const double need_y = reach_needed({dp.q(), cfg.d}, far_y);
    if (need_x <= dp.p().radii().back() && need_y <= dp.q().radii().back()) return dp;
    px.min_reach = std::max(px.min_reach, 1.05 * need_x + 1.0);
    qy.min_reach = std::max(qy.min_reach, 1.05 * need_y + 1.0);
    dp = DirectProduct(x, y, px, qy);
  }
  throw std::runtime_error("proper maps did not reach the evaluated translates");
}

}  // namespace zlab
