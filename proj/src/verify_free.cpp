#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "zlab/verify.hpp"

namespace zlab {

namespace {

// Appends `len` random letters to `base`, keeping the word reduced.
ReducedWord extend_word(const FreeProduct& fp, std::mt19937_64& rng, const ReducedWord& base, std::size_t len) {
  std::vector<Letter> letters = base.letters();
  Factor f = base.is_identity() ? ((rng() & 1) ? Factor::G : Factor::H) : other(base.back().factor);
  for (std::size_t i = 0; i < len; ++i) {
    letters.push_back({f, fp.model(acted_side(f)).sample_element(rng)});
    f = other(f);
  }
  return ReducedWord::unchecked(std::move(letters));
}

double random_local(const ZModel& m, std::mt19937_64& rng) {
  const std::uint64_t kind = rng() % 10;
  if (kind == 0) {
    const auto b = m.boundary_samples();
    return b[rng() % b.size()];
  }
  if (kind == 1) return m.orbit_point(m.sample_element(rng));
  return unit_double(rng);
}

WPoint near_point(const FreeProduct& fp, std::mt19937_64& rng, int depth, const WPoint* near) {
  if (near == nullptr || rng() % 3 == 0) {
    const auto len = static_cast<std::size_t>(rng() % static_cast<std::uint64_t>(depth + 1));
    ReducedWord w = fp.sample_word(rng, len);
    const Side s = w.is_identity() ? ((rng() & 1) ? Side::X : Side::Y) : node_side(w);
    return fp.canonical({std::move(w), s, random_local(fp.model(s), rng)});
  }
  const std::size_t k = rng() % (near->word.length() + 1);
  // canonical() may have pushed `near` one letter past depth.
  const auto room = k <= static_cast<std::size_t>(depth) ? static_cast<std::uint64_t>(depth) - k + 1 : 1;
  const std::size_t extra = k == near->word.length() && rng() % 2 == 0 ? 0 : rng() % room;
  ReducedWord w = extend_word(fp, rng, prefix(near->word, k), extra);
  Side s;
  if (w.is_identity())
    s = (rng() & 1) ? Side::X : Side::Y;
  else
    s = node_side(w);
  double u = random_local(fp.model(s), rng);
  if (w == near->word && s == near->side && rng() % 4 == 0) {
    // A nearby carrier coordinate in the same copy.
    u = std::clamp(near->local + (unit_double(rng) - 0.5) * 1e-3, 0.0, 1.0);
  }
  return fp.canonical({std::move(w), s, u});
}

bool same_located(const Located& a, const Located& b) {
  return a.halfwidth == b.halfwidth && a.point == b.point;
}

}  // namespace

MetricSpace<WPoint> free_product_space(const FreeProduct& fp, int depth) {
  MetricSpace<WPoint> s;
  s.sample = [&fp, depth](std::mt19937_64& rng, const WPoint* near) { return near_point(fp, rng, depth, near); };
  s.dist = [&fp](const WPoint& a, const WPoint& b) { return fp.dist(a, b); };
  s.same = [&fp](const WPoint& a, const WPoint& b) { return fp.canonical(a) == fp.canonical(b); };
  s.show = [](const WPoint& p) { return to_string(p); };
  return s;
}

// ---------------------------------------------------------------------------

ScaleReport check_scale_law(const FreeProduct& fp, std::size_t words, int depth, std::size_t samples,
                            const SweepOptions& opt) {
  struct Cell {
    bool cert_bad = false;
    std::size_t sampled_bad = 0;
    double ratio = 0.0;
    std::string word;
  };
  auto cells = sweep<Cell>(words, opt.jobs, [&](std::size_t i) {
    auto rng = stream(opt.seed, i);
    const auto len = static_cast<std::size_t>(rng() % static_cast<std::uint64_t>(depth + 1));
    const ReducedWord w = fp.sample_word(rng, len);
    const Side s = w.is_identity() ? Side::X : node_side(w);
    const double scale = fp.rstar(w).value();
    Cell c;
    c.word = to_string(w);
    // The carrier endpoints realize the model diameter 1.
    const double cert = fp.dist(WPoint{w, s, 0.0}, WPoint{w, s, 1.0});
    c.cert_bad = !(cert <= scale);
    // Sampled sup over pairs of a point cloud, found by a double sweep
    // (farthest point from a seed, then farthest point from that).
    std::vector<WPoint> cloud;
    cloud.reserve(samples);
    for (std::size_t k = 0; k < samples; ++k) cloud.push_back({w, s, unit_double(rng)});
    auto farthest = [&](const WPoint& from) {
      std::size_t arg = 0;
      double best = -1.0;
      for (std::size_t k = 0; k < cloud.size(); ++k) {
        const double d = fp.dist(from, cloud[k]);
        if (d > scale) ++c.sampled_bad;
        if (d > best) best = d, arg = k;
      }
      return std::make_pair(arg, best);
    };
    double sup = 0.0;
    if (!cloud.empty()) sup = farthest(cloud[farthest(cloud.front()).first]).second;
    c.ratio = sup / scale;
    return c;
  });
  ScaleReport r;
  r.words = words;
  r.min_sampled_ratio = std::numeric_limits<double>::infinity();
  for (const Cell& c : cells) {
    if (c.cert_bad) ++r.certified_violations;
    r.sampled_violations += c.sampled_bad;
    if (c.ratio < r.min_sampled_ratio) {
      r.min_sampled_ratio = c.ratio;
      r.worst_word = c.word;
    }
  }
  r.pass = words > 0 && r.certified_violations == 0 && r.sampled_violations == 0 && r.min_sampled_ratio >= 0.95;
  return r;
}

// ---------------------------------------------------------------------------

double nearest_center_distance(const FreeProduct& fp, const EpsilonNet& net, const WPoint& p) {
  double best = std::numeric_limits<double>::infinity();
  for (const WPoint& c : net.centers) best = std::min(best, fp.dist(c, p));
  return best;
}

CoverageReport check_coverage(const FreeProduct& fp, const EpsilonNet& net, int depth, std::size_t samples,
                              const SweepOptions& opt) {
  struct Cell {
    double gap = 0.0;
    bool end = false;
  };
  auto cells = sweep<Cell>(samples, opt.jobs, [&](std::size_t i) {
    auto rng = stream(opt.seed, i);
    const WBarPoint p = fp.sample_point(rng, depth, 0.2, 0.1);
    Cell c;
    if (const auto* e = std::get_if<EndPoint>(&p)) {
      c.end = true;
      c.gap = nearest_center_distance(fp, net, fp.approximant(*e)) + fp.end_halfwidth(*e);
    } else {
      c.gap = nearest_center_distance(fp, net, std::get<WPoint>(p));
    }
    return c;
  });
  CoverageReport r;
  r.eps = net.eps;
  r.depth = depth;
  r.net_size = net.centers.size();
  r.depth_cap_touched = net.depth_cap_touched;
  r.samples = samples;
  std::size_t worst = samples;
  for (std::size_t i = 0; i < samples; ++i) {
    if (cells[i].end) ++r.end_samples;
    if (cells[i].gap > net.eps) ++r.uncovered;
    if (worst == samples || cells[i].gap > r.max_gap) {
      r.max_gap = std::max(r.max_gap, cells[i].gap);
      worst = i;
    }
  }
  if (worst < samples) {
    auto rng = stream(opt.seed, worst);
    r.worst = to_string(fp.sample_point(rng, depth, 0.2, 0.1));
  }
  r.pass = r.uncovered == 0 && !r.depth_cap_touched;
  return r;
}

CoverageReport check_total_boundedness(const FreeProduct& fp, double eps, int depth, std::size_t samples,
                                       const SweepOptions& opt) {
  if (!(eps > 0.0)) throw std::invalid_argument("epsilon must be positive");
  return check_coverage(fp, fp.epsilon_net(eps, depth), depth, samples, opt);
}

// ---------------------------------------------------------------------------

TrackReport check_homotopy_K(const FreeProduct& fp, const ZEpsilonIndex& idx, int depth, std::size_t samples,
                             std::size_t steps, const SweepOptions& opt) {
  if (steps < 1) throw std::invalid_argument("need at least one time step");
  struct Cell {
    double track = 0.0;
    bool endpoint_bad = false;
  };
  auto cells = sweep<Cell>(samples, opt.jobs, [&](std::size_t i) {
    auto rng = stream(opt.seed, i);
    const WBarPoint p = fp.sample_point(rng, depth, 0.2, 0.1);
    std::vector<Located> track;
    track.reserve(steps + 1);
    for (std::size_t k = 0; k <= steps; ++k)
      track.push_back(fp.homotopy_K(p, static_cast<double>(k) / static_cast<double>(steps), idx));
    Cell c;
    const Located start = std::holds_alternative<WPoint>(p) ? Located{fp.canonical(std::get<WPoint>(p)), 0.0}
                                                             : Located{p, 0.0};
    c.endpoint_bad = !same_located(track.front(), start) || !same_located(track.back(), fp.project_psi(p, idx));
    for (std::size_t a = 0; a < track.size(); ++a)
      for (std::size_t b = a + 1; b < track.size(); ++b) {
        const Certified d = fp.dist(track[a].point, track[b].point);
        c.track = std::max(c.track, d.value + d.halfwidth + track[a].halfwidth + track[b].halfwidth);
      }
    return c;
  });
  TrackReport r;
  r.bound = 2.0 * idx.epsilon();
  r.samples = samples;
  r.steps = steps;
  std::size_t worst = samples;
  for (std::size_t i = 0; i < samples; ++i) {
    if (cells[i].endpoint_bad) ++r.endpoint_failures;
    if (worst == samples || cells[i].track > r.max_track) {
      r.max_track = std::max(r.max_track, cells[i].track);
      worst = i;
    }
  }
  if (worst < samples) {
    auto rng = stream(opt.seed, worst);
    r.worst = to_string(fp.sample_point(rng, depth, 0.2, 0.1));
  }
  r.pass = r.max_track < r.bound && r.endpoint_failures == 0;
  return r;
}

GluingReport check_gluing_fixed(const FreeProduct& fp, const ZEpsilonIndex& idx, int depth, int max_element,
                                int grid_log2) {
  GluingReport r;
  const int grid = 1 << grid_log2;
  std::vector<ReducedWord> stack{ReducedWord{}};
  while (!stack.empty()) {
    const ReducedWord w = std::move(stack.back());
    stack.pop_back();
    ++r.words;
    if (static_cast<int>(w.length()) < depth) {
      for (Factor f : {Factor::G, Factor::H}) {
        if (!w.is_identity() && w.back().factor == f) continue;
        for (int a = -max_element; a <= max_element; ++a)
          if (a != 0) stack.push_back(w.appended({f, a}));
      }
    }
    if (w.is_identity() || idx.j(w) < 2) continue;
    ++r.words_checked;
    const int te = fp.t_of_w(w, idx).exponent();
    const WPoint g = fp.gluing_point(w);
    for (int k = 0; k <= grid; ++k) {
      const double t = std::ldexp(static_cast<double>(k), -te - grid_log2);  // exact, <= t(w)
      ++r.checks;
      const Located out = fp.homotopy_K(g, t, idx);
      if (!(out.exact() && out.point == WBarPoint{g})) {
        if (r.failures++ == 0) r.first_failure = to_string(g) + " at t=" + std::to_string(t);
      }
    }
  }
  r.pass = r.failures == 0 && r.words_checked > 0;
  return r;
}

ZSetReport check_homotopy_P(const FreeProduct& fp, int depth, std::size_t samples, std::size_t steps,
                            const SweepOptions& opt) {
  struct Cell {
    std::size_t id_bad = 0, checks = 0, below = 0, not_interior = 0, final_bad = 0;
    std::string first;
  };
  const WBarPoint x0 = fp.gluing_point({});
  auto cells = sweep<Cell>(samples, opt.jobs, [&](std::size_t i) {
    auto rng = stream(opt.seed, i);
    Cell c;
    // A boundary approximant (an end or a translate boundary point) and an interior point.
    WBarPoint b;
    if (i % 2 == 0) {
      b = EndPoint{fp.sample_word(rng, static_cast<std::size_t>(depth))};
    } else {
      const auto len = static_cast<std::size_t>(rng() % static_cast<std::uint64_t>(depth + 1));
      ReducedWord w = fp.sample_word(rng, len);
      const Side s = w.is_identity() ? ((rng() & 1) ? Side::X : Side::Y) : node_side(w);
      const auto bs = fp.model(s).boundary_samples();
      b = fp.canonical({std::move(w), s, bs[rng() % bs.size()]});
    }
    const WBarPoint q = std::get<WPoint>(fp.sample_point(rng, depth, 0.0, 0.0));
    for (const WBarPoint& p : {b, q}) {
      const Located at0 = fp.homotopy_P(p, 0.0);
      if (!(at0.exact() && at0.point == p)) ++c.id_bad;
    }
    const auto* e = std::get_if<EndPoint>(&b);
    for (std::size_t k = 1; k <= steps; ++k) {
      const double t = static_cast<double>(k) / static_cast<double>(steps);
      if (e != nullptr && t <= FreeProduct::end_apriori_bound(*e)) {
        ++c.below;
        continue;
      }
      ++c.checks;
      const Located out = fp.homotopy_P(b, t);
      const auto* w = std::get_if<WPoint>(&out.point);
      const bool interior = out.exact() && w != nullptr && !fp.model(w->side).is_boundary(w->local);
      if (!interior) {
        if (c.not_interior++ == 0) c.first = to_string(b) + " at t=" + std::to_string(t);
      }
      if (k == steps && !(out.exact() && out.point == x0)) ++c.final_bad;
    }
    return c;
  });
  ZSetReport r;
  r.samples = samples;
  for (const Cell& c : cells) {
    r.identity_failures += c.id_bad;
    r.checks += c.checks;
    r.below_tail += c.below;
    r.not_interior += c.not_interior;
    r.final_failures += c.final_bad;
    if (r.worst.empty() && !c.first.empty()) r.worst = c.first;
  }
  r.pass = r.identity_failures == 0 && r.not_interior == 0 && r.final_failures == 0 && r.checks > 0;
  return r;
}

// ---------------------------------------------------------------------------
// Null condition

namespace {

double carrier_diameter(const ZModel& m, Interval c) { return m.rho_bar(c.lo, c.hi); }

const Interval& part(const BaseCompactum& c, Side s) { return s == Side::X ? c.x : c.y; }

}  // namespace

double translate_diameter_bound(const FreeProduct& fp, const BaseCompactum& c, const ReducedWord& w) {
  if (w.is_identity()) return carrier_diameter(fp.model(Side::X), c.x) + carrier_diameter(fp.model(Side::Y), c.y);
  const Letter a = w.back();
  const Side s = acted_side(a.factor);
  const Interval moved = fp.model(s).act_interval(a.element, part(c, s));
  const int e_parent = fp.rstar(w).exponent() - fp.r(a);
  return std::ldexp(carrier_diameter(fp.model(s), moved), -e_parent) +
         std::ldexp(carrier_diameter(fp.model(other(s)), part(c, other(s))), -fp.rstar(w).exponent());
}

std::vector<ReducedWord> exceptional_words(const FreeProduct& fp, const BaseCompactum& c, double eps, int depth,
                                           bool& cap) {
  if (!(eps > 0.0)) throw std::invalid_argument("epsilon must be positive");
  cap = false;
  std::vector<ReducedWord> gamma;
  std::vector<ReducedWord> stack{ReducedWord{}};
  while (!stack.empty()) {
    const ReducedWord v = std::move(stack.back());
    stack.pop_back();
    if (translate_diameter_bound(fp, c, v) >= eps) gamma.push_back(v);
    const int ev = fp.rstar(v).exponent();
    // Every strict extension u of v has bound <= r*(u') + r*(u) < 2 r*(v).
    if (std::ldexp(2.0, -ev) < eps) continue;
    if (static_cast<int>(v.length()) >= depth) {
      cap = true;
      continue;
    }
    for (Factor f : {Factor::G, Factor::H}) {
      if (!v.is_identity() && v.back().factor == f) continue;
      const Side s = acted_side(f);
      const ZModel& m = fp.model(s);
      const double other_diam = carrier_diameter(fp.model(other(s)), part(c, other(s)));
      // Letters with r(a) > R contribute nothing: neither va nor its extensions reach eps.
      int R = m.r_min() - 1;
      for (;; ++R) {
        if (R > 40) throw std::runtime_error("letter enumeration bound not reached");
        const double head = std::ldexp(m.image_diameter_tail(part(c, s), R), -ev);
        const double tail = std::ldexp(other_diam, -ev - R - 1);
        if (head + tail < eps && std::ldexp(1.0, -ev - R) < eps) break;
      }
      if (R < m.r_min()) continue;
      for (std::int64_t a : m.elements_with_r_at_most(R)) stack.push_back(v.appended({f, a}));
    }
  }
  std::sort(gamma.begin(), gamma.end(), [](const ReducedWord& a, const ReducedWord& b) {
    return a.length() != b.length() ? a.length() < b.length() : a < b;
  });
  return gamma;
}

NullFreeReport check_null_free(const FreeProduct& fp, const BaseCompactum& c, double eps, int depth,
                               std::size_t samples, const SweepOptions& opt) {
  NullFreeReport r;
  r.eps = eps;
  r.depth = depth;
  r.gamma = exceptional_words(fp, c, eps, depth, r.depth_cap_touched);
  // Balls of radius 2 eps around a net certified at eps: any set of diameter < eps fits one.
  const EpsilonNet net = fp.epsilon_net(2.0 * eps, depth);
  r.cover_size = net.centers.size();
  r.lebesgue = net.certified_radius;
  const double ball = net.eps;
  const std::set<ReducedWord> gamma(r.gamma.begin(), r.gamma.end());

  struct Cell {
    bool skipped = false, null_bad = false, cover_bad = false;
    std::string word;
  };
  auto cells = sweep<Cell>(samples, opt.jobs, [&](std::size_t i) {
    auto rng = stream(opt.seed, i);
    Cell cell;
    const auto len = 1 + static_cast<std::size_t>(rng() % static_cast<std::uint64_t>(depth));
    ReducedWord w;
    if (rng() % 2 == 0) {
      std::vector<Letter> letters;
      Factor f = (rng() & 1) ? Factor::G : Factor::H;
      for (std::size_t k = 0; k < len; ++k, f = other(f)) {
        const auto mag = static_cast<std::int64_t>(1 + rng() % 3);
        letters.push_back({f, (rng() & 1) ? mag : -mag});
      }
      w = ReducedWord::unchecked(std::move(letters));
    } else {
      w = fp.sample_word(rng, len);
    }
    cell.word = to_string(w);
    if (gamma.count(w)) {
      cell.skipped = true;
    } else {
      // Distances to a center are convex along each carrier segment of w . C,
      // so the four segment endpoints decide containment.
      const std::array<WPoint, 4> ends{fp.translate(w, {ReducedWord{}, Side::X, c.x.lo}),
                                       fp.translate(w, {ReducedWord{}, Side::X, c.x.hi}),
                                       fp.translate(w, {ReducedWord{}, Side::Y, c.y.lo}),
                                       fp.translate(w, {ReducedWord{}, Side::Y, c.y.hi})};
      bool fit = false;
      for (const WPoint& ctr : net.centers) {
        double far = 0.0;
        for (const WPoint& e : ends) far = std::max(far, fp.dist(ctr, e));
        if (far < ball) {
          fit = true;
          break;
        }
      }
      cell.null_bad = !fit;
    }
    const WBarPoint p = fp.sample_point(rng, depth, 0.2, 0.1);
    double gap;
    if (const auto* e = std::get_if<EndPoint>(&p))
      gap = nearest_center_distance(fp, net, fp.approximant(*e)) + fp.end_halfwidth(*e);
    else
      gap = nearest_center_distance(fp, net, std::get<WPoint>(p));
    cell.cover_bad = gap > net.certified_radius;
    return cell;
  });
  r.cover_points = samples;
  for (const Cell& cell : cells) {
    if (!cell.skipped) ++r.sampled_words;
    if (cell.null_bad && r.null_failures++ == 0) r.first_failure = cell.word;
    if (cell.cover_bad) ++r.cover_defects;
  }
  r.pass = !r.depth_cap_touched && r.null_failures == 0 && r.cover_defects == 0;
  return r;
}

}  // namespace zlab
