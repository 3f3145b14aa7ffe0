// report.hpp
//
// Serialization of inference reports (JSON) and experiment tables (CSV).

#ifndef TRB_REPORT_HPP
#define TRB_REPORT_HPP

#include "trb/inference.hpp"
#include "trb/simlab.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace trb
{

inline constexpr char const* kToolName = "trb";
inline constexpr char const* kToolVersion = "1.0.0";

nlohmann::json to_json(ClusterPartition const& partition);
nlohmann::json to_json(ConfidenceInterval<double> const& ci);
nlohmann::json to_json(InferenceReport<double> const& report);

/// target,index,side,nominal,lower,upper
std::string intervals_csv(InferenceReport<double> const& report);

/// Coverage table with one row per method: method,tuning,theta1,...,rho2,tau,se.
std::string coverage_csv(std::vector<simlab::CoverageReport> const& reports);

/// Long format: s,method,tuning,target,coverage,se.
std::string sweep_csv(std::vector<simlab::SweepPoint> const& points);

}  // namespace trb

#endif  // TRB_REPORT_HPP
