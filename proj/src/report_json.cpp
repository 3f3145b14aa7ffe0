#include "trb/report.hpp"

#include "trb/dataset_io.hpp"

#include <cmath>
#include <sstream>

namespace trb
{
namespace
{

nlohmann::json number(double v)
{
  if (std::isinf(v))
    return v > 0 ? "inf" : "-inf";
  return v;
}

nlohmann::json vector_json(Eigen::VectorXd const& v)
{
  auto arr = nlohmann::json::array();
  for (Index j = 0; j < v.size(); ++j)
    arr.push_back(v[j]);
  return arr;
}

char const* target_name(TargetKind k)
{
  return k == TargetKind::eigenvalue ? "theta" : "rho";
}

std::string fixed(double v)
{
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.setf(std::ios::fixed);
  os.precision(4);
  os << v;
  return os.str();
}

}  // namespace

nlohmann::json to_json(ClusterPartition const& partition)
{
  nlohmann::json j;
  auto clusters = nlohmann::json::array();
  for (Cluster const& c : partition.clusters)
    clusters.push_back({{"start", c.start}, {"length", c.length}});
  j["clusters"] = std::move(clusters);
  j["tail_cluster"] = partition.tail_index() + 1;
  j["total"] = partition.total;
  return j;
}

nlohmann::json to_json(ConfidenceInterval<double> const& ci)
{
  return {{"target", target_name(ci.target.kind)},
          {"index", ci.target.index},
          {"side", to_string(ci.side)},
          {"nominal", ci.nominal},
          {"lower", number(ci.lower)},
          {"upper", number(ci.upper)}};
}

nlohmann::json to_json(InferenceReport<double> const& report)
{
  nlohmann::json j;
  j["method"] = report.method;
  j["n"] = report.n;
  j["grid_size"] = report.grid_size;
  j["weight"] = report.weight;
  j["theta_hat"] = vector_json(report.estimated);
  if (report.critical_point)
  {
    j["critical_point"] = *report.critical_point;
    j["tie_threshold"] = 2.0 * *report.critical_point;
  }
  if (report.partition)
    j["partition"] = to_json(*report.partition);
  if (report.adjusted)
    j["theta_tilde"] = vector_json(*report.adjusted);
  if (report.m)
    j["m"] = *report.m;
  auto intervals = nlohmann::json::array();
  for (auto const& ci : report.intervals)
    intervals.push_back(to_json(ci));
  j["intervals"] = std::move(intervals);
  j["warnings"] = report.warnings;
  return j;
}

std::string intervals_csv(InferenceReport<double> const& report)
{
  std::string out = "target,index,side,nominal,lower,upper\n";
  for (auto const& ci : report.intervals)
  {
    out += target_name(ci.target.kind);
    out += ',' + std::to_string(ci.target.index) + ',' + to_string(ci.side) + ',' +
           format_number(ci.nominal) + ',' + format_number(ci.lower) + ',' +
           format_number(ci.upper) + '\n';
  }
  return out;
}

std::string coverage_csv(std::vector<simlab::CoverageReport> const& reports)
{
  std::string out = "method,tuning";
  for (char const* name : simlab::kCoverageTargetNames)
    out += std::string(",") + name;
  out += ",tau,se\n";
  for (auto const& r : reports)
  {
    out += r.method.method_name() + ',' + format_number(r.method.tuning());
    for (double c : r.coverage)
      out += ',' + fixed(c);
    out += ',' + (r.tau ? fixed(*r.tau) : std::string());
    out += ',' + fixed(r.max_standard_error()) + '\n';
  }
  return out;
}

std::string sweep_csv(std::vector<simlab::SweepPoint> const& points)
{
  std::string out = "s,method,tuning,target,coverage,se\n";
  for (auto const& p : points)
    for (auto const& r : p.reports)
    {
      auto const se = r.standard_errors();
      for (std::size_t t = 0; t < 3; ++t)
        out += format_number(p.spacing) + ',' + r.method.method_name() + ',' +
               format_number(r.method.tuning()) + ',' + simlab::kCoverageTargetNames[t] + ',' +
               fixed(r.coverage[t]) + ',' + fixed(se[t]) + '\n';
    }
  return out;
}

}  // namespace trb
