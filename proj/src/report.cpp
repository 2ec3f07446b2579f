#include "zlab/report.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <stdexcept>

namespace zlab {

json num(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  return x;
}

void to_json(json& j, const Interval& v) { j = json::array({num(v.lo), num(v.hi)}); }
void to_json(json& j, const JoinPoint& v) { j = {{"xbar", v.xbar}, {"ybar", v.ybar}, {"mu", num(v.mu)}}; }
void to_json(json& j, const ProductPoint& v) { j = {{"x", v.x}, {"y", v.y}}; }

void to_json(json& j, const MetricReport& r) {
  j = {{"triples", r.triples},
       {"tolerance", r.tolerance},
       {"max_triangle_violation", r.max_triangle_violation},
       {"max_symmetry_violation", r.max_symmetry_violation},
       {"identity_failures", r.identity_failures},
       {"worst", r.worst},
       {"pass", r.pass}};
}

void to_json(json& j, const ScaleReport& r) {
  j = {{"words", r.words},
       {"certified_violations", r.certified_violations},
       {"sampled_violations", r.sampled_violations},
       {"min_sampled_ratio", r.min_sampled_ratio},
       {"worst_word", r.worst_word},
       {"pass", r.pass}};
}

void to_json(json& j, const CoverageReport& r) {
  j = {{"eps", r.eps},
       {"depth", r.depth},
       {"net_size", r.net_size},
       {"depth_cap_touched", r.depth_cap_touched},
       {"samples", r.samples},
       {"end_samples", r.end_samples},
       {"uncovered", r.uncovered},
       {"max_gap", r.max_gap},
       {"worst", r.worst},
       {"pass", r.pass}};
}

void to_json(json& j, const TrackReport& r) {
  j = {{"bound", r.bound},
       {"samples", r.samples},
       {"steps", r.steps},
       {"max_track", r.max_track},
       {"endpoint_failures", r.endpoint_failures},
       {"worst", r.worst},
       {"pass", r.pass}};
}

void to_json(json& j, const GluingReport& r) {
  j = {{"words", r.words},
       {"words_checked", r.words_checked},
       {"checks", r.checks},
       {"failures", r.failures},
       {"first_failure", r.first_failure},
       {"pass", r.pass}};
}

void to_json(json& j, const ZSetReport& r) {
  j = {{"samples", r.samples},
       {"identity_failures", r.identity_failures},
       {"checks", r.checks},
       {"below_tail", r.below_tail},
       {"not_interior", r.not_interior},
       {"final_failures", r.final_failures},
       {"worst", r.worst},
       {"pass", r.pass}};
}

void to_json(json& j, const NullFreeReport& r) {
  json gamma = json::array();
  for (const auto& w : r.gamma) gamma.push_back(to_string(w));
  j = {{"eps", r.eps},
       {"depth", r.depth},
       {"gamma", gamma},
       {"depth_cap_touched", r.depth_cap_touched},
       {"cover_size", r.cover_size},
       {"lebesgue", r.lebesgue},
       {"sampled_words", r.sampled_words},
       {"null_failures", r.null_failures},
       {"cover_points", r.cover_points},
       {"cover_defects", r.cover_defects},
       {"first_failure", r.first_failure},
       {"pass", r.pass}};
}

void to_json(json& j, const VariationRow& r) {
  j = {{"name", r.name}, {"compactum", r.compactum}, {"k", r.k}, {"variation", r.variation}, {"bound", r.bound}};
}

void to_json(json& j, const ProperMapReport& r) {
  j = {{"p_at_basepoint", r.p_at_basepoint},
       {"shells", r.shells},
       {"imax", r.imax},
       {"dagger_checks", r.dagger_checks},
       {"dagger_violations", r.dagger_violations},
       {"worst_dagger", r.worst_dagger},
       {"element_range", r.element_range},
       {"rp_c1", r.rp_c1},
       {"variations", r.variations},
       {"pass", r.pass}};
}

void to_json(json& j, const BracketReport& r) {
  j = {{"hat_checks", r.hat_checks},
       {"hat_violations", r.hat_violations},
       {"prime_checks", r.prime_checks},
       {"prime_violations", r.prime_violations},
       {"worst", r.worst},
       {"pass", r.pass}};
}

void to_json(json& j, const RaySlopeRow& r) {
  j = {{"mu", num(r.mu)},     {"t", r.t},           {"xbar", r.xbar},        {"ybar", r.ybar},
       {"slope", num(r.slope)}, {"bounds", r.bounds}, {"inside", r.inside}};
}

void to_json(json& j, const RaySlopeReport& r) { j = {{"rows", r.rows}, {"pass", r.pass}}; }

void to_json(json& j, const GammaReport& r) {
  j = {{"samples", r.samples},
       {"steps", r.steps},
       {"failures", r.failures},
       {"first_failure", r.first_failure},
       {"pass", r.pass}};
}

void to_json(json& j, const CounterexampleRow& r) {
  j = {{"n", r.n}, {"product_containing", r.product_containing}, {"join_contained", r.join_contained}};
}

void to_json(json& j, const CounterexampleReport& r) {
  j = {{"range", r.range},
       {"delta", r.delta},
       {"product_fails_everywhere", r.product_fails_everywhere},
       {"n0_found", r.n0_found},
       {"n0", r.n0},
       {"rows", r.rows},
       {"pass", r.pass}};
}

void to_json(json& j, const NullProductReport& r) {
  j = {{"delta", r.delta},
       {"grid", r.grid},
       {"cover_size", r.cover_size},
       {"k_c", r.k_c},
       {"k_d", r.k_d},
       {"rp_bound", r.rp_bound},
       {"rq_bound", r.rq_bound},
       {"rp_sampled", r.rp_sampled},
       {"rq_sampled", r.rq_sampled},
       {"g_j", r.g_j},
       {"h_k", r.h_k},
       {"g_q", r.g_q},
       {"h_p", r.h_p},
       {"m_j", r.m_j},
       {"m_k", r.m_k},
       {"gamma", {{"g1", r.gamma_g1}, {"h1", r.gamma_h1}, {"g2", r.gamma_g2}, {"h2", r.gamma_h2}}},
       {"grid_inside_gamma", r.grid_inside_gamma},
       {"grid_cells", r.grid_cells},
       {"empirical_exceptional", r.empirical_exceptional},
       {"empirical_max_g", r.empirical_max_g},
       {"empirical_max_h", r.empirical_max_h},
       {"empirical_inside_certified", r.empirical_inside_certified},
       {"empirical_off_edge", r.empirical_off_edge},
       {"off_grid", r.off_grid},
       {"off_grid_failures", r.off_grid_failures},
       {"case1", r.case1},
       {"case1_max_diam_mu", r.case1_max_diam_mu},
       {"first_failure", r.first_failure},
       {"reach_ok", r.reach_ok},
       {"reach_needed_x", r.reach_needed_x},
       {"reach_needed_y", r.reach_needed_y},
       {"pass", r.pass}};
}

json envelope(const std::string& command, json body) {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%FT%TZ", &utc);
  return {{"schema", kReportSchema},
          {"command", command},
          {"result", std::move(body)},
          {"meta", {{"timestamp", stamp}}}};
}

void write_report(const std::string& path, const json& report) {
  const std::string text = report.dump(2) + "\n";
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

}  // namespace zlab
