#include "support.hpp"

#include "trb/report.hpp"

#include <catch_amalgamated.hpp>

#include <sstream>

using namespace trb;
using Catch::Matchers::ContainsSubstring;

namespace
{

FunctionalSample<double> parse(std::string const& text, DatasetOptions const& options = {})
{
  std::istringstream in(text);
  return parse_dataset(in, options, "data.csv");
}

}  // namespace

TEST_CASE("dataset parsing", "[io]")
{
  auto const s = parse("# comment\n1,2,3\n\n4, 5 ,6\r\n");
  CHECK(s.size() == 2);
  CHECK(s.grid_size() == 3);
  CHECK(s.values(1, 1) == 5.0);
  CHECK(s.grid.weight == 1.0);
  CHECK(s.grid.points == trb::testing::vec({1, 2, 3}));

  auto const f = parse("1,2,3,4\n0,0,0,1e-3\n", {std::pair{-1.0, 1.0}, std::nullopt});
  CHECK(f.grid.weight == 0.5);
  CHECK(f.grid.points[0] == -0.75);

  auto const h = parse("u=0.1,0.2,0.4\n1,2,3\n3,2,1\n", {std::pair{0.0, 1.0}, std::nullopt});
  CHECK(h.grid.points == trb::testing::vec({0.1, 0.2, 0.4}));
  CHECK(h.grid.weight == 1.0 / 3.0);

  auto const w = parse("1,2\n3,4\n", {std::nullopt, 0.25});
  CHECK(w.grid.weight == 0.25);
}

TEST_CASE("dataset errors name the offending cell", "[io]")
{
  CHECK_THROWS_WITH(parse("1,2,3\n4,x,6\n"), ContainsSubstring("row 2, column 2"));
  CHECK_THROWS_WITH(parse("1,2,3\n4,,6\n"), ContainsSubstring("row 2, column 2"));
  CHECK_THROWS_WITH(parse("1,2,3\n4,5,nan\n"), ContainsSubstring("row 2, column 3"));
  CHECK_THROWS_WITH(parse("1,2,3\n4,5\n"), ContainsSubstring("row 2 has 2 columns"));
  CHECK_THROWS_WITH(parse("1,2,3\n"), ContainsSubstring("at least two data rows"));
  CHECK_THROWS_WITH(parse("1\n2\n"), ContainsSubstring("two columns"));
  CHECK_THROWS_WITH(parse("1,2\nu=1,2\n3,4\n"), ContainsSubstring("precede"));
  CHECK_THROWS_WITH(parse("u=1,2,3\n1,2\n3,4\n"), ContainsSubstring("abscissae"));
  CHECK_THROWS_WITH(parse("u=2,1\n1,2\n3,4\n"), ContainsSubstring("increasing"));
  CHECK_THROWS_AS(parse("1,2\n3,4\n", {std::nullopt, -1.0}), DatasetError);
  CHECK_THROWS_WITH(read_dataset("/nonexistent/file.csv", {}), ContainsSubstring("cannot open"));
}

TEST_CASE("number formatting round-trips", "[io]")
{
  for (double v : {0.1, 1.0 / 3.0, -2.5e-17, 123456789.0, 0.0})
    CHECK(std::stod(format_number(v)) == v);
  CHECK(format_number(0.9) == "0.9");
  CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
}

TEST_CASE("report serialization", "[io]")
{
  InferenceReport<double> r;
  r.method = "trb";
  r.n = 10;
  r.grid_size = 4;
  r.estimated = trb::testing::vec({2, 1, 0.5, 0});
  r.critical_point = 0.25;
  r.partition = ClusterPartition{{{0, 2}, {2, 1}}, 3};
  r.adjusted = trb::testing::vec({1.5, 1.5, 0.5, 0});
  ConfidenceInterval<double> ci;
  ci.lower = 0.5;
  ci.upper = std::numeric_limits<double>::infinity();
  ci.side = Side::lower_bound;
  ci.target = {TargetKind::ratio, 2};
  r.intervals.push_back(ci);

  auto const j = to_json(r);
  CHECK(j["tie_threshold"] == 0.5);
  CHECK(j["partition"]["tail_cluster"] == 2);
  CHECK(j["partition"]["clusters"][0]["length"] == 2);
  CHECK(j["intervals"][0]["upper"] == "inf");
  CHECK(j["intervals"][0]["target"] == "rho");
  CHECK(j["intervals"][0]["side"] == "one-sided-lower");
  CHECK(!j.contains("m"));

  CHECK(intervals_csv(r) == "target,index,side,nominal,lower,upper\nrho,2,one-sided-lower,0.9,0.5,inf\n");

  simlab::CoverageReport c;
  c.method = simlab::MethodSpec::trb(Diagnostic::td2, 0.3);
  c.coverage = {0.9, 0.88, 0.5, 1.0, 0.0};
  c.tau = 1.0;
  c.replications = 100;
  CHECK(coverage_csv({c}) ==
        "method,tuning,theta1,theta2,theta3,rho1,rho2,tau,se\n"
        "trb-td2,0.3,0.9000,0.8800,0.5000,1.0000,0.0000,1.0000,0.0500\n");
  c.method = simlab::MethodSpec::m_out_of_n(0.125);
  c.tau.reset();
  CHECK(coverage_csv({c}).find("m-out-of-n,0.125,") != std::string::npos);
  CHECK(coverage_csv({c}).find(",,0.0500\n") != std::string::npos);
}
