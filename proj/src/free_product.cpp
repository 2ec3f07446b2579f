#include "zlab/free_product.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "zlab/rng.hpp"
#include "zlab/text.hpp"

namespace zlab {

// ---------------------------------------------------------------------------
// DyadicScale

double DyadicScale::value() const { return std::ldexp(1.0, -e_); }

bool DyadicScale::at_least(double x) const {
  if (!(x > 0.0)) return true;
  if (std::isinf(x)) return false;
  int E = 0;
  const double m = std::frexp(x, &E);  // x = m 2^E, m in [1/2, 1)
  if (m == 0.5) return -e_ >= E - 1;
  return -e_ >= E;
}

std::string DyadicScale::to_string() const { return "2^-" + std::to_string(e_); }

// ---------------------------------------------------------------------------
// Sides

char side_tag(Side s) { return s == Side::X ? 'X' : 'Y'; }

Side node_side(const ReducedWord& w) {
  if (w.is_identity()) throw std::invalid_argument("the identity word names two base copies");
  return w.back().factor == Factor::G ? Side::Y : Side::X;
}

// ---------------------------------------------------------------------------
// ZEpsilonIndex

ZEpsilonIndex::ZEpsilonIndex(double eps, const std::vector<ReducedWord>& words, bool depth_cap_touched)
    : eps_(eps), cap_touched_(depth_cap_touched) {
  std::set<ReducedWord> uniq(words.begin(), words.end());
  if (!uniq.count(ReducedWord{})) throw std::invalid_argument("Z_eps word set must contain the identity");
  for (const auto& w : uniq) {
    if (!w.is_identity() && !uniq.count(prefix(w, w.length() - 1)))
      throw std::invalid_argument("Z_eps word set must be prefix-closed: " + to_string(w));
  }
  words_.assign(uniq.begin(), uniq.end());
  std::sort(words_.begin(), words_.end(), [](const ReducedWord& a, const ReducedWord& b) {
    return a.length() != b.length() ? a.length() < b.length() : a < b;
  });
  trie_.push_back({});
  trie_[0].member = true;
  for (const auto& w : words_) {
    int node = 0;
    for (std::size_t i = 0; i < w.length(); ++i) {
      int next = child(node, w[i]);
      if (next < 0) {
        next = static_cast<int>(trie_.size());
        trie_[static_cast<std::size_t>(node)].children.emplace_back(w[i], next);
        trie_.push_back({});
      }
      node = next;
    }
    trie_[static_cast<std::size_t>(node)].member = true;
  }
}

int ZEpsilonIndex::child(int node, const Letter& l) const {
  for (const auto& [letter, idx] : trie_[static_cast<std::size_t>(node)].children)
    if (letter == l) return idx;
  return -1;
}

std::size_t ZEpsilonIndex::m(const ReducedWord& w) const {
  int node = 0;
  std::size_t k = 0;
  while (k < w.length()) {
    const int next = child(node, w[k]);
    if (next < 0) break;
    node = next;
    ++k;
  }
  return k;
}

bool ZEpsilonIndex::contains(const ReducedWord& w) const { return m(w) == w.length(); }

// ---------------------------------------------------------------------------
// FreeProduct: geometry

namespace {

ZEpsilonIndex unit_index() { return ZEpsilonIndex(1.0, {ReducedWord{}}); }

}  // namespace

FreeProduct::FreeProduct(std::shared_ptr<const ZModel> x, std::shared_ptr<const ZModel> y)
    : x_(std::move(x)), y_(std::move(y)), tau_{0.0, 0.0}, unit_index_(unit_index()) {
  if (!x_ || !y_) throw std::invalid_argument("both factor models are required");
  const double qg = std::ldexp(1.0, -x_->r_min());
  const double qh = std::ldexp(1.0, -y_->r_min());
  const double bx = x_->basepoint_radius();
  const double by = y_->basepoint_radius();
  // tau_X = bx + qg tau_Y and tau_Y = by + qh tau_X.
  tau_[0] = (bx + qg * by) / (1.0 - qg * qh);
  tau_[1] = (by + qh * bx) / (1.0 - qg * qh);
}

std::string FreeProduct::name() const { return x_->name() + "*" + y_->name(); }

DyadicScale FreeProduct::rstar(const ReducedWord& w) const {
  int e = 0;
  for (const Letter& l : w.letters()) e += r(l);
  return DyadicScale(e);
}

int FreeProduct::tail_exponent(const ReducedWord& w, std::size_t k) const {
  int e = 0;
  for (std::size_t i = w.length() - k; i < w.length(); ++i) e += r(w[i]);
  return e;
}

double FreeProduct::branch_radius(const ReducedWord& w) const {
  if (w.is_identity()) return std::max(tau_[0], tau_[1]);
  return std::ldexp(tau_[static_cast<int>(node_side(w))], -rstar(w).exponent());
}

double FreeProduct::end_apriori_bound(const EndPoint& e) {
  return std::ldexp(1.0, 1 - static_cast<int>(e.prefix.length()));
}

void FreeProduct::validate(const WPoint& p) const {
  if (!(p.local >= 0.0 && p.local <= 1.0)) throw std::invalid_argument("carrier coordinate outside [0,1]");
  if (!p.word.is_identity() && node_side(p.word) != p.side)
    throw std::invalid_argument("side does not match the last letter of the translate word");
  if (!is_reduced(p.word.letters(), groups())) throw std::invalid_argument("translate word is not reduced");
}

WPoint FreeProduct::gluing_point(const ReducedWord& w) const {
  if (w.is_identity()) return {ReducedWord{}, Side::X, x_->basepoint()};
  const Side s = node_side(w);
  return {w, s, model(s).basepoint()};
}

WPoint FreeProduct::canonical(const WPoint& p) const {
  validate(p);
  const ZModel& m = model(p.side);
  if (p.word.is_identity() && p.side == Side::Y && p.local == y_->basepoint()) return gluing_point({});
  if (auto g = m.orbit_element(p.local); g && !m.group().is_identity(*g)) {
    const ReducedWord w = p.word.appended({acting_factor(p.side), *g});
    return gluing_point(w);
  }
  return p;
}

FreeProduct::Entry FreeProduct::ascend(const WPoint& p, std::size_t level) const {
  int e = rstar(p.word).exponent();
  Side side = p.side;
  double local = p.local;
  double sum = 0.0;
  for (std::size_t k = p.word.length(); k > level; --k) {
    const ZModel& m = model(side);
    sum += std::ldexp(m.rho_bar(local, m.basepoint()), -e);
    const Letter& l = p.word[k - 1];
    e -= r(l);
    side = acted_side(l.factor);
    local = model(side).orbit_point(l.element);
  }
  return {sum, side, local, e};
}

double FreeProduct::dist(const WPoint& a, const WPoint& b) const {
  validate(a);
  validate(b);
  const std::size_t c = common_prefix_length(a.word, b.word);
  const Entry ea = ascend(a, c);
  const Entry eb = ascend(b, c);
  double mid;
  if (ea.side == eb.side) {
    mid = std::ldexp(model(ea.side).rho_bar(ea.local, eb.local), -ea.exponent);
  } else {
    // Only possible at the root: the two base copies meet at x0 ~ y0.
    const Entry& ex = ea.side == Side::X ? ea : eb;
    const Entry& ey = ea.side == Side::X ? eb : ea;
    mid = x_->rho_bar(ex.local, x_->basepoint()) + y_->rho_bar(ey.local, y_->basepoint());
  }
  return (ea.sum + eb.sum) + mid;
}

Certified FreeProduct::dist(const WBarPoint& a, const WBarPoint& b) const {
  auto resolve = [this](const WBarPoint& p) -> std::pair<WPoint, double> {
    if (const auto* w = std::get_if<WPoint>(&p)) return {*w, 0.0};
    const auto& e = std::get<EndPoint>(p);
    return {approximant(e), end_halfwidth(e)};
  };
  const auto [pa, ha] = resolve(a);
  const auto [pb, hb] = resolve(b);
  return {dist(pa, pb), ha + hb};
}

std::vector<WPoint> FreeProduct::connecting_sequence(const WPoint& a0, const WPoint& b0) const {
  const WPoint a = canonical(a0);
  const WPoint b = canonical(b0);
  const std::size_t c = common_prefix_length(a.word, b.word);
  std::vector<WPoint> seq;
  for (std::size_t k = a.word.length(); k > c; --k) seq.push_back(gluing_point(prefix(a.word, k)));
  const Side sa = ascend(a, c).side;
  const Side sb = ascend(b, c).side;
  if (sa != sb) seq.push_back(gluing_point({}));
  std::vector<WPoint> tail;
  for (std::size_t k = b.word.length(); k > c; --k) tail.push_back(gluing_point(prefix(b.word, k)));
  seq.insert(seq.end(), tail.rbegin(), tail.rend());
  if (!seq.empty() && seq.front() == a) seq.erase(seq.begin());
  if (!seq.empty() && seq.back() == b) seq.pop_back();
  return seq;
}

WPoint FreeProduct::translate(const ReducedWord& w, const WPoint& p) const {
  validate(p);
  const FactorGroups gr = groups();
  const ReducedWord u = concat(w, p.word, gr);
  if (u.is_identity() || u.back().factor != acting_factor(p.side)) return canonical({u, p.side, p.local});
  // The last letter acts inside the copy: u = u' a and u x = u' (a x).
  const Letter a = u.back();
  const double moved = model(p.side).act(a.element, p.local);
  return canonical({prefix(u, u.length() - 1), p.side, moved});
}

WBarPoint FreeProduct::extend_action_boundary(const ReducedWord& w, const WBarPoint& b) const {
  if (!x_->ez() || !y_->ez()) throw std::domain_error("the action extends to the completion only for EZ models");
  if (const auto* p = std::get_if<WPoint>(&b)) return translate(w, *p);
  const auto& e = std::get<EndPoint>(b);
  ReducedWord moved = concat(w, e.prefix, groups());
  if (moved.length() > e.prefix.length()) moved = prefix(moved, e.prefix.length());
  return EndPoint{moved};
}

// ---------------------------------------------------------------------------
// Z_eps, psi, K, P

std::vector<ReducedWord> FreeProduct::words_with_exponent_at_most(int max_exponent, int depth) const {
  std::vector<ReducedWord> out;
  struct Frame {
    ReducedWord w;
    int e;
  };
  std::vector<Frame> stack{{ReducedWord{}, 0}};
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    out.push_back(f.w);
    if (static_cast<int>(f.w.length()) >= depth) continue;
    for (Factor fac : {Factor::H, Factor::G}) {
      if (!f.w.is_identity() && f.w.back().factor == fac) continue;
      const ZModel& m = model(acted_side(fac));
      const int budget = max_exponent - f.e;
      if (budget < m.r_min()) continue;
      const auto elems = m.elements_with_r_at_most(budget);
      for (auto it = elems.rbegin(); it != elems.rend(); ++it) {
        const Letter l{fac, *it};
        stack.push_back({f.w.appended(l), f.e + r(l)});
      }
    }
  }
  return out;
}

ZEpsilonIndex FreeProduct::build_z_epsilon(double eps, int depth) const {
  if (!(eps > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (depth < 1) throw std::invalid_argument("depth must be at least 1");
  // Branch diameter of w is bounded by 2 tau_side r*(w); w joins M when that bound reaches eps.
  const double tmax = 2.0 * std::max(tau_[0], tau_[1]);
  const int emax = static_cast<int>(std::floor(std::log2(tmax / eps)));
  std::vector<ReducedWord> M;
  bool cap = false;
  auto qualifies = [&](const ReducedWord& w) {
    return w.is_identity() || std::ldexp(2.0 * tau_[static_cast<int>(node_side(w))], -rstar(w).exponent()) >= eps;
  };
  if (emax < 0) return ZEpsilonIndex(eps, {ReducedWord{}}, false);
  for (const auto& w : words_with_exponent_at_most(emax, depth + 1)) {
    if (!qualifies(w)) continue;
    // Prefix-closure holds because the bound decreases along extensions.
    if (static_cast<int>(w.length()) > depth) {
      cap = true;
      continue;
    }
    M.push_back(w);
  }
  return ZEpsilonIndex(eps, M, cap);
}

DyadicScale FreeProduct::t_of_w(const ReducedWord& w, const ZEpsilonIndex& idx) const {
  const std::size_t j = idx.j(w);
  if (j < 2) throw std::domain_error("t(w) is defined only for j(w) >= 2");
  return DyadicScale(tail_exponent(w, j - 1));
}

Located FreeProduct::project_psi(const WBarPoint& p, const ZEpsilonIndex& idx) const {
  if (const auto* w = std::get_if<WPoint>(&p)) {
    const WPoint c = canonical(*w);
    if (idx.contains(c.word)) return {c, 0.0};
    return {gluing_point(prefix(c.word, idx.m(c.word) + 1)), 0.0};
  }
  const auto& e = std::get<EndPoint>(p);
  const std::size_t m = idx.m(e.prefix);
  if (m < e.prefix.length()) return {gluing_point(prefix(e.prefix, m + 1)), 0.0};
  return {approximant(e), end_halfwidth(e)};
}

WPoint FreeProduct::k_point(ReducedWord w, Side s, double u, double t, const ZEpsilonIndex& idx) const {
  for (;;) {
    if (idx.contains(w)) return canonical({w, s, u});
    const std::size_t j = w.length() - idx.m(w);
    if (j == 1) return canonical({w, s, model(s).homotopy(u, t)});
    const int te = tail_exponent(w, j - 1);
    const double scaled = std::ldexp(t, te);  // t / t(w), exact
    if (scaled <= 1.0) return canonical({w, s, model(s).homotopy(u, scaled)});
    // Past t(w) the whole branch sits at w x0 and follows the parent copy.
    const Letter l = w.back();
    w = prefix(w, w.length() - 1);
    s = acted_side(l.factor);
    u = model(s).orbit_point(l.element);
  }
}

Located FreeProduct::homotopy_K(const WBarPoint& p, double t, const ZEpsilonIndex& idx) const {
  if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("time outside [0,1]");
  if (const auto* w = std::get_if<WPoint>(&p)) {
    const WPoint c = canonical(*w);
    return {k_point(c.word, c.side, c.local, t, idx), 0.0};
  }
  const auto& e = std::get<EndPoint>(p);
  if (t == 0.0) return {e, 0.0};
  const std::size_t L = e.prefix.length();
  const std::size_t m = idx.m(e.prefix);
  if (m < L) {
    const std::size_t j = L - m;
    // For t >= t(prefix) every point below the prefix follows K(prefix x0, t).
    const bool settled = j == 1 ? t == 1.0 : std::ldexp(t, tail_exponent(e.prefix, j - 1)) >= 1.0;
    if (settled) {
      const WPoint g = gluing_point(e.prefix);
      return {k_point(g.word, g.side, g.local, t, idx), 0.0};
    }
  }
  return {approximant(e), end_halfwidth(e)};
}

Located FreeProduct::homotopy_P(const WBarPoint& p, double t) const {
  if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("time outside [0,1]");
  if (t == 0.0) {
    if (const auto* w = std::get_if<WPoint>(&p)) return {canonical(*w), 0.0};
    return {p, 0.0};
  }
  const ReducedWord* word = nullptr;
  WPoint c;
  if (const auto* w = std::get_if<WPoint>(&p)) {
    c = canonical(*w);
    word = &c.word;
    if (word->is_identity()) return {canonical({c.word, c.side, model(c.side).homotopy(c.local, t)}), 0.0};
  } else {
    word = &std::get<EndPoint>(p).prefix;
    if (word->is_identity()) throw std::invalid_argument("an end needs a nonempty prefix");
  }
  // First-level branch below a: K (with Z = the base copies) on [0, 2^-r(a)],
  // then the slowed homotopy of the base copy holding a x0.
  const Letter a = (*word)[0];
  const int ra = r(a);
  const Side base = acted_side(a.factor);
  if (std::ldexp(t, ra) <= 1.0) return homotopy_K(p, std::ldexp(t, ra), unit_index_);
  const ZModel& m = model(base);
  return {canonical({ReducedWord{}, base, m.homotopy(m.orbit_point(a.element), t)}), 0.0};
}

// ---------------------------------------------------------------------------
// epsilon-net

void FreeProduct::cover_node(const ReducedWord& v, Side s, double R, int depth, EpsilonNet& net) const {
  const ZModel& m = model(s);
  const int ev = rstar(v).exponent();
  const double scale = std::ldexp(1.0, -ev);
  const double carrier_radius = std::min(1.0, (R / 2.0) / scale);
  const std::vector<double> locals = m.carrier_net(carrier_radius);
  for (double u : locals) net.centers.push_back(canonical({v, s, u}));

  auto nearest = [&](double gl) {
    double best = std::numeric_limits<double>::infinity();
    for (double u : locals) best = std::min(best, scale * m.rho_bar(u, gl));
    return best;
  };

  if (v.is_identity() && s == Side::X) {
    if (nearest(m.basepoint()) + tau_[1] > R) cover_node(v, Side::Y, R, depth, net);
  }

  const Side child_side = other(s);
  const double child_tau = tau_[static_cast<int>(child_side)];
  int rmax = 0;
  while (std::ldexp(scale * child_tau, -(rmax + 1)) > R / 2.0) ++rmax;
  if (rmax < m.r_min()) return;
  const Factor f = acting_factor(s);
  for (std::int64_t a : m.elements_with_r_at_most(rmax)) {
    const int ra = m.r_value(a);
    const double T = std::ldexp(scale * child_tau, -ra);
    if (T <= R / 2.0) continue;
    if (nearest(m.orbit_point(a)) + T <= R) continue;
    if (static_cast<int>(v.length()) + 1 > depth) {
      net.depth_cap_touched = true;
      continue;
    }
    cover_node(v.appended({f, a}), child_side, R, depth, net);
  }
}

EpsilonNet FreeProduct::epsilon_net(double eps, int depth) const {
  if (!(eps > 0.0)) throw std::invalid_argument("epsilon must be positive");
  EpsilonNet net;
  net.eps = eps;
  net.certified_radius = eps / 2.0;
  cover_node(ReducedWord{}, Side::X, net.certified_radius, depth, net);
  std::sort(net.centers.begin(), net.centers.end());
  net.centers.erase(std::unique(net.centers.begin(), net.centers.end()), net.centers.end());
  return net;
}

// ---------------------------------------------------------------------------
// Sampling

ReducedWord FreeProduct::sample_word(std::mt19937_64& rng, std::size_t length) const {
  std::vector<Letter> letters;
  letters.reserve(length);
  Factor f = (rng() & 1) ? Factor::G : Factor::H;
  for (std::size_t i = 0; i < length; ++i) {
    letters.push_back({f, model(acted_side(f)).sample_element(rng)});
    f = zlab::other(f);
  }
  return ReducedWord::unchecked(std::move(letters));
}

WBarPoint FreeProduct::sample_point(std::mt19937_64& rng, int depth, double end_fraction,
                                    double boundary_fraction) const {
  if (depth >= 1 && unit_double(rng) < end_fraction)
    return EndPoint{sample_word(rng, static_cast<std::size_t>(depth))};
  const auto len = static_cast<std::size_t>(rng() % static_cast<std::uint64_t>(depth + 1));
  ReducedWord w = sample_word(rng, len);
  const Side s = w.is_identity() ? ((rng() & 1) ? Side::X : Side::Y) : node_side(w);
  const ZModel& m = model(s);
  double u;
  if (unit_double(rng) < boundary_fraction) {
    const auto bs = m.boundary_samples();
    u = bs[rng() % bs.size()];
  } else {
    u = unit_double(rng);
  }
  return canonical({std::move(w), s, u});
}

// ---------------------------------------------------------------------------
// Text forms


std::string to_string(const WPoint& p) {
  return "word=" + to_string(p.word) + "|side=" + side_tag(p.side) + "|local=" + format_double(p.local);
}

std::string to_string(const EndPoint& e) {
  return "end=" + to_string(e.prefix) + "|depth=" + std::to_string(e.prefix.length());
}

std::string to_string(const WBarPoint& p) {
  return std::visit([](const auto& q) { return to_string(q); }, p);
}

WPoint parse_wpoint(const std::string& text, const FactorGroups& groups) {
  WPoint p;
  bool have_word = false, have_side = false, have_local = false;
  for (const auto& [k, v] : split_fields(text)) {
    if (k == "word") {
      p.word = parse_word(v, groups);
      have_word = true;
    } else if (k == "side") {
      if (v == "X" || v == "x")
        p.side = Side::X;
      else if (v == "Y" || v == "y")
        p.side = Side::Y;
      else
        throw std::invalid_argument("side must be X or Y");
      have_side = true;
    } else if (k == "local") {
      p.local = parse_double(v);
      have_local = true;
    } else {
      throw std::invalid_argument("unknown point field '" + k + "'");
    }
  }
  if (!have_word || !have_local) throw std::invalid_argument("point text needs word= and local=");
  if (!have_side) {
    if (p.word.is_identity()) throw std::invalid_argument("side= is required for the identity word");
    p.side = node_side(p.word);
  }
  if (!(p.local >= 0.0 && p.local <= 1.0)) throw std::invalid_argument("carrier coordinate outside [0,1]");
  if (!p.word.is_identity() && node_side(p.word) != p.side)
    throw std::invalid_argument("side does not match the last letter of the translate word");
  return p;
}

EndPoint parse_endpoint(const std::string& text, const FactorGroups& groups) {
  std::string letters;
  long depth = -1;
  for (const auto& [k, v] : split_fields(text)) {
    if (k == "end")
      letters = v;
    else if (k == "depth")
      depth = static_cast<long>(parse_double(v));
    else
      throw std::invalid_argument("unknown end field '" + k + "'");
  }
  bool repeat = false;
  const std::string dots = ",...";
  if (letters.size() > dots.size() && letters.compare(letters.size() - dots.size(), dots.size(), dots) == 0) {
    repeat = true;
    letters.resize(letters.size() - dots.size());
  }
  ReducedWord w = parse_word(letters, groups);
  if (depth < 0) depth = static_cast<long>(w.length());
  if (depth < 1) throw std::invalid_argument("end depth must be at least 1");
  std::vector<Letter> seq = w.letters();
  if (repeat) {
    if (seq.size() < 2) throw std::invalid_argument("a repeated end pattern needs two letters");
    while (static_cast<long>(seq.size()) < depth) seq.push_back(seq[seq.size() - 2]);
  }
  if (static_cast<long>(seq.size()) < depth) throw std::invalid_argument("end prefix shorter than its depth");
  seq.resize(static_cast<std::size_t>(depth));
  return EndPoint{ReducedWord::from_letters(std::move(seq), groups)};
}

WBarPoint parse_wbar(const std::string& text, const FactorGroups& groups) {
  if (text.rfind("end=", 0) == 0) return parse_endpoint(text, groups);
  return parse_wpoint(text, groups);
}

}  // namespace zlab
