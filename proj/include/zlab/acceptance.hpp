#ifndef ZLAB_ACCEPTANCE_HPP
#define ZLAB_ACCEPTANCE_HPP

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "zlab/report.hpp"

namespace zlab {

// Delegates to a base model but reports r-values from a table where one is
// given, so that worked examples with prescribed r can be reproduced.
class TableRModel final : public ZModel {
 public:
  TableRModel(std::shared_ptr<const ZModel> base, std::map<std::int64_t, int> r_table);

  std::string name() const override { return base_->name() + "+r-table"; }
  const GroupModel& group() const override { return base_->group(); }
  double rho_bar(double a, double b) const override { return base_->rho_bar(a, b); }
  bool is_boundary(double a) const override { return base_->is_boundary(a); }
  std::vector<double> boundary_samples() const override { return base_->boundary_samples(); }
  double boundary_distance(double a) const override { return base_->boundary_distance(a); }
  double basepoint() const override { return base_->basepoint(); }
  double basepoint_radius() const override { return base_->basepoint_radius(); }
  bool ez() const override { return base_->ez(); }
  double act(std::int64_t g, double a) const override { return base_->act(g, a); }
  double orbit_point(std::int64_t g) const override { return base_->orbit_point(g); }
  std::optional<std::int64_t> orbit_element(double a) const override { return base_->orbit_element(a); }
  Interval act_interval(std::int64_t g, Interval c) const override { return base_->act_interval(g, c); }
  double homotopy(double a, double t) const override { return base_->homotopy(a, t); }
  int r_value(std::int64_t g) const override;
  int r_min() const override;
  std::vector<std::int64_t> elements_with_r_at_most(int R) const override;
  std::vector<std::int64_t> element_layer(int k) const override { return base_->element_layer(k); }
  std::int64_t sample_element(std::mt19937_64& rng) const override { return base_->sample_element(rng); }
  double image_diameter_tail(Interval c, int R) const override { return base_->image_diameter_tail(c, R); }
  std::vector<double> carrier_net(double radius) const override { return base_->carrier_net(radius); }
  double gauge(double a) const override { return base_->gauge(a); }

 private:
  std::shared_ptr<const ZModel> base_;
  std::map<std::int64_t, int> table_;
};

struct AcceptanceOptions {
  SweepOptions sweep;
  // Sample depth for the free-product criteria.
  int depth = 6;
  // Criterion ids to run; empty runs all.
  std::vector<int> only;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
  double budget_seconds = 0.0;
  json report;
};

inline constexpr int kCriteria = 12;

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt);
// "PASS 01 name (1.23 s / 5 s): detail"
std::string format_line(const CriterionResult& r);
json to_json_results(const std::vector<CriterionResult>& results);

}  // namespace zlab

#endif
