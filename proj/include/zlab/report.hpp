#ifndef ZLAB_REPORT_HPP
#define ZLAB_REPORT_HPP

#include <string>

#include "json.hpp"
#include "zlab/verify.hpp"

namespace zlab {

using json = nlohmann::json;

inline constexpr int kReportSchema = 1;

// Finite doubles as numbers, infinities as "inf" / "-inf".
json num(double x);

void to_json(json& j, const Interval& v);
void to_json(json& j, const JoinPoint& v);
void to_json(json& j, const ProductPoint& v);
void to_json(json& j, const MetricReport& r);
void to_json(json& j, const ScaleReport& r);
void to_json(json& j, const CoverageReport& r);
void to_json(json& j, const TrackReport& r);
void to_json(json& j, const GluingReport& r);
void to_json(json& j, const ZSetReport& r);
void to_json(json& j, const NullFreeReport& r);
void to_json(json& j, const VariationRow& r);
void to_json(json& j, const ProperMapReport& r);
void to_json(json& j, const BracketReport& r);
void to_json(json& j, const RaySlopeRow& r);
void to_json(json& j, const RaySlopeReport& r);
void to_json(json& j, const GammaReport& r);
void to_json(json& j, const CounterexampleRow& r);
void to_json(json& j, const CounterexampleReport& r);
void to_json(json& j, const NullProductReport& r);

// {"schema": 1, "command": ..., "result": body, "meta": {"timestamp": ...}}.
// Everything outside "meta" is a function of the inputs.
json envelope(const std::string& command, json body);
// Writes the envelope to `path` ("-" for stdout), two-space indented.
void write_report(const std::string& path, const json& report);

}  // namespace zlab

#endif
