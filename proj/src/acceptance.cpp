#include "zlab/acceptance.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "zlab/text.hpp"

namespace zlab {

TableRModel::TableRModel(std::shared_ptr<const ZModel> base, std::map<std::int64_t, int> r_table)
    : base_(std::move(base)), table_(std::move(r_table)) {
  for (const auto& [g, r] : table_)
    if (g == 0 || r < 1) throw std::invalid_argument("r-table entries need g != 0 and r >= 1");
}

int TableRModel::r_value(std::int64_t g) const {
  const auto it = table_.find(g);
  return it == table_.end() ? base_->r_value(g) : it->second;
}

int TableRModel::r_min() const {
  int best = base_->r_min();
  for (const auto& [g, r] : table_) best = std::min(best, r);
  return best;
}

std::vector<std::int64_t> TableRModel::elements_with_r_at_most(int R) const {
  std::vector<std::int64_t> out;
  for (std::int64_t g : base_->elements_with_r_at_most(std::max(R, base_->r_min())))
    if (r_value(g) <= R) out.push_back(g);
  for (const auto& [g, r] : table_)
    if (r <= R && std::find(out.begin(), out.end(), g) == out.end()) out.push_back(g);
  return out;
}

namespace {

using Clock = std::chrono::steady_clock;

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::shared_ptr<const ZModel> line() { return make_model("int-line"); }

FreeProduct line_free_product() { return FreeProduct(line(), line()); }

// r on the line model from the bit width of |g|; independent of the model code.
int line_r(std::int64_t g) { return 1 + std::bit_width(static_cast<std::uint64_t>(g < 0 ? -g : g)); }

CriterionResult worked_example() {
  CriterionResult c;
  // w = w' g h g' with r(g') = 1, r(h) = 3, r(g) = 2 and w' x0 in Z_eps.
  auto x = std::make_shared<TableRModel>(line(), std::map<std::int64_t, int>{{1, 2}, {2, 1}});
  auto y = std::make_shared<TableRModel>(line(), std::map<std::int64_t, int>{{3, 3}});
  const FreeProduct fp(x, y);
  const ReducedWord w_prime = parse_word("g:5,h:5");
  const ZEpsilonIndex idx(0.5, {ReducedWord{}, parse_word("g:5")});
  const ReducedWord w_g = concat(w_prime, parse_word("g:1"));
  const ReducedWord w_gh = concat(w_g, parse_word("h:3"));
  const ReducedWord w = concat(w_gh, parse_word("g:2"));
  const DyadicScale tw = fp.t_of_w(w, idx), tgh = fp.t_of_w(w_gh, idx), tg = fp.t_of_w(w_g, idx);
  const bool table_ok = idx.j(w) == 4 && tw == DyadicScale(6) && tgh == DyadicScale(5) && tg == DyadicScale(2) &&
                        tw.value() == 1.0 / 64 && tgh.value() == 1.0 / 32 && tg.value() == 1.0 / 4;

  // The same shape on the line model itself, with g' = g:1 since r >= 2 there.
  const FreeProduct lp = line_free_product();
  const ReducedWord lw = concat(w_gh, parse_word("g:1"));
  const int expect_w = line_r(1) + line_r(3) + line_r(1);
  const int expect_gh = line_r(3) + line_r(1);
  const bool line_ok = lp.t_of_w(lw, idx) == DyadicScale(expect_w) && lp.t_of_w(w_gh, idx) == DyadicScale(expect_gh) &&
                       lp.t_of_w(w_g, idx) == DyadicScale(line_r(1));
  c.pass = table_ok && line_ok;
  c.detail = "t(w)=" + tw.to_string() + " t(w'gh)=" + tgh.to_string() + " t(w'g)=" + tg.to_string() +
             "; line model t(w'ghg)=" + lp.t_of_w(lw, idx).to_string();
  c.report = {{"t_w", tw.value()},
              {"t_wgh", tgh.value()},
              {"t_wg", tg.value()},
              {"j_w", idx.j(w)},
              {"line_t_w", lp.t_of_w(lw, idx).value()},
              {"line_expected_exponent", expect_w}};
  return c;
}

CriterionResult metric_axioms(const AcceptanceOptions& opt) {
  const FreeProduct fp = line_free_product();
  const MetricReport r = check_metric_axioms(free_product_space(fp, 8), 10000, 1e-9, opt.sweep);
  CriterionResult c;
  c.pass = r.pass;
  c.detail = std::to_string(r.triples) + " triples, max triangle excess " + fmt(r.max_triangle_violation) +
             ", symmetry " + fmt(r.max_symmetry_violation) + ", identity failures " +
             std::to_string(r.identity_failures);
  c.report = r;
  return c;
}

CriterionResult scale_law(const AcceptanceOptions& opt) {
  const FreeProduct fp = line_free_product();
  const ScaleReport r = check_scale_law(fp, 200, opt.depth, 1000, opt.sweep);
  CriterionResult c;
  c.pass = r.pass;
  c.detail = std::to_string(r.words) + " words, certified violations " + std::to_string(r.certified_violations) +
             ", min sampled sup / r* " + fmt(r.min_sampled_ratio);
  c.report = r;
  return c;
}

CriterionResult total_boundedness(const AcceptanceOptions& opt) {
  const FreeProduct fp = line_free_product();
  CriterionResult c;
  c.pass = true;
  c.report = json::array();
  for (double eps : {0.5, 0.25, 0.125}) {
    const CoverageReport r = check_total_boundedness(fp, eps, opt.depth, 100000, opt.sweep);
    c.pass = c.pass && r.pass;
    c.detail += (c.detail.empty() ? "" : "; ") + std::string("eps=") + fmt(eps) + " net " +
                std::to_string(r.net_size) + " uncovered " + std::to_string(r.uncovered) + " max gap " +
                fmt(r.max_gap);
    c.report.push_back(r);
  }
  return c;
}

CriterionResult homotopy_k(const AcceptanceOptions& opt) {
  const FreeProduct fp = line_free_product();
  const ZEpsilonIndex idx = fp.build_z_epsilon(0.5, opt.depth + 2);
  const TrackReport tr = check_homotopy_K(fp, idx, opt.depth, 10000, 50, opt.sweep);
  const GluingReport gl = check_gluing_fixed(fp, idx, opt.depth, 2, 4);
  CriterionResult c;
  c.pass = tr.pass && gl.pass && tr.max_track < 1.0;
  c.detail = "max track " + fmt(tr.max_track) + " (< 1), endpoint failures " + std::to_string(tr.endpoint_failures) +
             "; gluing " + std::to_string(gl.words_checked) + " words, " + std::to_string(gl.checks) + " checks, " +
             std::to_string(gl.failures) + " failures";
  c.report = {{"tracks", tr}, {"gluing", gl}, {"index_size", idx.size()}};
  return c;
}

CriterionResult homotopy_p(const AcceptanceOptions& opt) {
  const FreeProduct fp = line_free_product();
  const ZSetReport r = check_homotopy_P(fp, opt.depth, 1000, 64, opt.sweep);
  CriterionResult c;
  c.pass = r.pass;
  c.detail = std::to_string(r.samples) + " approximants, " + std::to_string(r.checks) + " interior checks, " +
             std::to_string(r.not_interior) + " not interior, " + std::to_string(r.identity_failures) +
             " identity failures, " + std::to_string(r.below_tail) + " below the tail bound";
  c.report = r;
  return c;
}

CriterionResult proper_map() {
  const auto cfg = line_proper_map_config();
  const ProperMap p = ProperMap::build(line(), cfg);
  const ProperMapReport r = check_proper_map(p, cfg.fundamental, 12, 100, 200);
  CriterionResult c;
  c.pass = r.pass;
  c.detail = "p(x0)=" + fmt(r.p_at_basepoint) + ", dagger " + std::to_string(r.dagger_checks) + " checks " +
             std::to_string(r.dagger_violations) + " violations, R_p(C1)=" + fmt(r.rp_c1) + " over |g|<=200";
  c.report = r;
  return c;
}

CriterionResult brackets() {
  const ProperMap p = ProperMap::build(line(), line_proper_map_config());
  const BracketReport r = check_brackets(p, 100, 100, 0.01);
  CriterionResult c;
  c.pass = r.pass;
  c.detail = "hat " + std::to_string(r.hat_checks) + " checks " + std::to_string(r.hat_violations) +
             " violations; prime " + std::to_string(r.prime_checks) + " checks " +
             std::to_string(r.prime_violations) + " violations";
  c.report = r;
  return c;
}

CriterionResult ray_slopes() {
  const DirectProduct dp(line(), line(), line_proper_map_config(), line_proper_map_config());
  const RaySlopeReport r = check_ray_slopes(dp, {0.1, 1.0, 10.0});
  const Interval ref = ray_slope_interval(1.0, 10.0);
  CriterionResult c;
  c.pass = r.pass;
  std::size_t inside = 0;
  for (const auto& row : r.rows) inside += row.inside ? 1 : 0;
  c.detail = std::to_string(inside) + "/" + std::to_string(r.rows.size()) +
             " slopes inside; mu=1 t=10 interval (" + fmt(ref.lo) + ", " + fmt(ref.hi) +
             ") by direct evaluation, quoted approximation (0.5006, 1.9973)";
  c.report = {{"rows", r.rows}, {"mu1_t10", ref}, {"quoted", {0.5006, 1.9973}}, {"pass", r.pass}};
  return c;
}

CriterionResult counterexample() {
  const DirectProduct dp(line(), line(), line_proper_map_config(), line_proper_map_config());
  const CounterexampleReport r = reproduce_counterexample(dp, 100, 0.1);
  CriterionResult c;
  c.pass = r.pass;
  std::size_t hits = 0;
  for (const auto& row : r.rows) hits += row.product_containing.size();
  c.detail = "product cover hits " + std::to_string(hits) + " over n in [-100,100]; join n0=" +
             (r.n0_found ? std::to_string(r.n0) : std::string("none"));
  c.report = r;
  return c;
}

CriterionResult null_product(const AcceptanceOptions& opt) {
  const NullProductConfig cfg;
  const DirectProduct dp = product_for_null(line(), line(), cfg, opt.sweep);
  const NullProductReport r = check_null_product(dp, cfg, opt.sweep);
  CriterionResult c;
  c.pass = r.pass;
  c.detail = "Gamma |g|<=" + std::to_string(r.gamma_g1) + ",|h|<=" + std::to_string(r.gamma_h1) + " or |g|<=" +
             std::to_string(r.gamma_g2) + ",|h|<=" + std::to_string(r.gamma_h2) + "; grid exceptional " +
             std::to_string(r.empirical_exceptional) + " (max |g| " + std::to_string(r.empirical_max_g) + ", |h| " +
             std::to_string(r.empirical_max_h) + "); off-grid " + std::to_string(r.off_grid) + " failures " +
             std::to_string(r.off_grid_failures) + "; Case 1 " + std::to_string(r.case1) + " max diam_mu " +
             fmt(r.case1_max_diam_mu) + " (< " + fmt(cfg.delta / 2) + ")";
  c.report = r;
  return c;
}

CriterionResult null_free(const AcceptanceOptions& opt) {
  const FreeProduct fp = line_free_product();
  const BaseCompactum base;
  const NullFreeReport a = check_null_free(fp, base, 0.25, 6, 2000, opt.sweep);
  const NullFreeReport b = check_null_free(fp, base, 0.25, 8, 2000, opt.sweep);
  auto sorted = [](std::vector<ReducedWord> v) {
    std::sort(v.begin(), v.end());
    return v;
  };
  const bool stable = sorted(a.gamma) == sorted(b.gamma);
  CriterionResult c;
  c.pass = a.pass && b.pass && stable;
  std::string names;
  for (const auto& w : sorted(a.gamma)) names += (names.empty() ? "" : " ") + to_string(w);
  c.detail = "Gamma {" + names + "} at depth 6, " + (stable ? "same" : "different") + " at depth 8; null failures " +
             std::to_string(a.null_failures + b.null_failures) + ", cover defects " +
             std::to_string(a.cover_defects + b.cover_defects);
  c.report = {{"depth6", a}, {"depth8", b}, {"stable", stable}};
  return c;
}

struct Entry {
  int id;
  const char* name;
  double budget;
  std::function<CriterionResult(const AcceptanceOptions&)> run;
};

const std::vector<Entry>& entries() {
  static const std::vector<Entry> all = {
      {1, "worked-example-t", 1e-3, [](const AcceptanceOptions&) { return worked_example(); }},
      {2, "metric-axioms", 5, metric_axioms},
      {3, "scale-law", 5, scale_law},
      {4, "total-boundedness", 30, total_boundedness},
      {5, "homotopy-K", 60, homotopy_k},
      {6, "zset-homotopy-P", 30, homotopy_p},
      {7, "proper-map-p", 30, [](const AcceptanceOptions&) { return proper_map(); }},
      {8, "alpha-brackets", 10, [](const AcceptanceOptions&) { return brackets(); }},
      {9, "ray-slope-interval", 5, [](const AcceptanceOptions&) { return ray_slopes(); }},
      {10, "counterexample", 10, [](const AcceptanceOptions&) { return counterexample(); }},
      {11, "null-product", 180, null_product},
      {12, "null-free-product", 30, null_free},
  };
  return all;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt) {
  std::vector<CriterionResult> out;
  for (const Entry& e : entries()) {
    if (!opt.only.empty() && std::find(opt.only.begin(), opt.only.end(), e.id) == opt.only.end()) continue;
    const auto start = Clock::now();
    CriterionResult r;
    try {
      r = e.run(opt);
    } catch (const std::exception& ex) {
      r = CriterionResult{};
      r.detail = std::string("error: ") + ex.what();
    }
    r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    r.id = e.id;
    r.name = e.name;
    r.budget_seconds = e.budget;
    if (r.seconds >= r.budget_seconds) {
      r.pass = false;
      r.detail += "; over the runtime budget";
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::string format_line(const CriterionResult& r) {
  char head[96];
  std::snprintf(head, sizeof head, "%s %02d %s (%.3g s / %g s): ", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(),
                r.seconds, r.budget_seconds);
  return head + r.detail;
}

json to_json_results(const std::vector<CriterionResult>& results) {
  json arr = json::array();
  bool all = true;
  for (const auto& r : results) {
    all = all && r.pass;
    // Seconds vary run to run, so they stay out of the deterministic body.
    arr.push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}, {"report", r.report}});
  }
  return {{"criteria", arr}, {"pass", all}};
}

}  // namespace zlab
