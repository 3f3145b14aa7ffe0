#include "cli_commands.hpp"
#include "support.hpp"
#include "trb/report.hpp"

#include <catch_amalgamated.hpp>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace trb;
using Catch::Matchers::ContainsSubstring;
namespace fs = std::filesystem;

namespace
{

struct Result
{
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> const& args)
{
  std::ostringstream out;
  std::ostringstream err;
  int const code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(fs::path const& p)
{
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

class Scratch
{
public:
  Scratch()
  {
    RandomStream rng(static_cast<std::uint64_t>(std::chrono::steady_clock::now().time_since_epoch().count()));
    dir_ = fs::temp_directory_path() / ("trb-cli-" + std::to_string(rng()));
    fs::create_directories(dir_);
  }
  ~Scratch() { fs::remove_all(dir_); }
  std::string operator()(std::string const& name) const { return (dir_ / name).string(); }

  std::string write(std::string const& name, std::string const& text) const
  {
    std::ofstream(dir_ / name, std::ios::binary) << text;
    return (*this)(name);
  }

private:
  fs::path dir_;
};

std::string to_csv(MatrixX<double> const& values)
{
  std::string out;
  for (Index i = 0; i < values.rows(); ++i)
  {
    for (Index k = 0; k < values.cols(); ++k)
      out += (k ? "," : "") + format_number(values(i, k));
    out += '\n';
  }
  return out;
}

}  // namespace

TEST_CASE("ci output is reproducible and replayable", "[cli]")
{
  Scratch tmp;
  auto const data = tmp.write("toy.csv", "1.0,0.5\n-0.2,0.3\n0.4,-1.1\n");
  std::vector<std::string> const args{"ci", "--data", data, "--seed", "7", "--boot", "200",
                                      "--diag-boot", "200"};

  auto a = args;
  a.insert(a.end(), {"--out", tmp("a.json"), "--csv", tmp("a.csv")});
  REQUIRE(run(a).code == 0);
  auto b = args;
  b.insert(b.end(), {"--out", tmp("b.json"), "--csv", tmp("b.csv"), "--threads", "3"});
  REQUIRE(run(b).code == 0);
  CHECK(slurp(tmp("a.json")) == slurp(tmp("b.json")));
  CHECK(slurp(tmp("a.csv")) == slurp(tmp("b.csv")));

  auto const doc = nlohmann::json::parse(slurp(tmp("a.json")));
  CHECK(doc["tool"] == "trb");
  CHECK(doc["version"] == kToolVersion);
  CHECK(doc["seed"] == 7);
  CHECK(doc["config"]["boot"] == 200);
  CHECK(doc["config"]["data"] == data);
  CHECK(doc["report"]["intervals"].size() == 4);  // two columns: no theta_3
  CHECK(doc["report"].contains("tie_threshold"));

  // Replaying the JSON, or the CSV, reproduces the output exactly.
  REQUIRE(run({"ci", "--config", tmp("a.json"), "--out", tmp("c.json"), "--csv", tmp("c.csv")}).code == 0);
  CHECK(slurp(tmp("c.json")) == slurp(tmp("a.json")));
  CHECK(slurp(tmp("c.csv")) == slurp(tmp("a.csv")));
  REQUIRE(run({"ci", "--config", tmp("a.csv"), "--out", tmp("d.json")}).code == 0);
  CHECK(slurp(tmp("d.json")) == slurp(tmp("a.json")));

  // The config file overrides flags.
  REQUIRE(run({"ci", "--seed", "99", "--config", tmp("a.json"), "--out", tmp("e.json")}).code == 0);
  CHECK(slurp(tmp("e.json")) == slurp(tmp("a.json")));

  auto const csv = slurp(tmp("a.csv"));
  CHECK(csv.rfind("# tool: trb ", 0) == 0);
  CHECK(csv.find("\n# config: {") != std::string::npos);
  CHECK(csv.find("target,index,side,nominal,lower,upper\n") != std::string::npos);
}

TEST_CASE("ci flags map onto the pipeline", "[cli]")
{
  Scratch tmp;
  auto const s = trb::testing::random_sample(40, 6, 3, -1.0, 1.0);
  auto const data = tmp.write("s.csv", to_csv(s.values));
  auto const r = run({"ci", "--data", data, "--interval", "-1,1", "--method", "m-out-of-n",
                      "--m-ratio", "0.5", "--boot", "100", "--side", "one-sided-upper",
                      "--eigen", "1,2", "--ratio", "1"});
  REQUIRE(r.code == 0);
  auto const doc = nlohmann::json::parse(r.out);
  CHECK(doc["report"]["m"] == 20);
  CHECK(doc["report"]["weight"] == 1.0 / 3.0);
  REQUIRE(doc["report"]["intervals"].size() == 3);
  CHECK(doc["report"]["intervals"][0]["lower"] == "-inf");
  CHECK(doc["report"]["intervals"][2]["target"] == "rho");

  // Matches the library call on the same stream.
  InferenceConfig config;
  config.bootstrap_replicates = 100;
  config.side = Side::upper_bound;
  config.targets = {{1, 2}, {1}};
  std::istringstream in(to_csv(s.values));
  auto const parsed = parse_dataset(in, {std::pair{-1.0, 1.0}, std::nullopt});
  auto const lib = run_mn_inference(parsed, 20, config, RandomStream(1));
  CHECK(doc["report"]["intervals"][1]["upper"] == lib.intervals[1].upper);
}

TEST_CASE("ci groups the tied leading eigenvalues of model 1", "[cli]")
{
  Scratch tmp;
  bool grouped = false;
  for (std::uint64_t seed : {1u, 2u, 3u})
  {
    RandomStream rng(seed);
    auto const s = simlab::generate_sample(simlab::SimModel::numbered(1, 400, 100), rng);
    auto const data = tmp.write("m1.csv", to_csv(s.values));
    auto const r = run({"ci", "--data", data, "--interval", "-1,1", "--diagnostic", "td1", "--beta",
                        "0.3", "--alpha", "0.1", "--boot", "200", "--diag-boot", "200", "--seed",
                        std::to_string(seed)});
    REQUIRE(r.code == 0);
    auto const p = nlohmann::json::parse(r.out)["report"]["partition"];
    if (p["clusters"][0]["start"] == 0 && p["clusters"][0]["length"] == 3)
    {
      grouped = true;
      break;
    }
  }
  CHECK(grouped);
}

TEST_CASE("ci failures", "[cli]")
{
  Scratch tmp;
  auto r = run({"ci", "--data", tmp("missing.csv"), "--out", tmp("never.json")});
  CHECK(r.code != 0);
  CHECK_THAT(r.err, ContainsSubstring("cannot open"));
  CHECK_FALSE(fs::exists(tmp("never.json")));
  CHECK(r.out.empty());

  auto const bad = tmp.write("bad.csv", "1,2,3\n4,five,6\n");
  r = run({"ci", "--data", bad, "--out", tmp("never.json")});
  CHECK(r.code != 0);
  CHECK_THAT(r.err, ContainsSubstring("row 2, column 2"));
  CHECK_FALSE(fs::exists(tmp("never.json")));

  r = run({"ci"});
  CHECK(r.code != 0);
  CHECK_THAT(r.err, ContainsSubstring("--data"));

  auto const ok = tmp.write("ok.csv", "1,2\n3,5\n0,1\n");
  CHECK(run({"ci", "--data", ok, "--beta", "1.5"}).code != 0);
  CHECK(run({"ci", "--data", ok, "--beta", "abc"}).code != 0);
  CHECK(run({"ci", "--data", ok, "--method", "jackknife"}).code != 0);
  CHECK(run({"ci", "--data", ok, "--side", "sideways"}).code != 0);
  CHECK(run({"ci", "--data", ok, "--boot", "0"}).code != 0);
  CHECK(run({"ci", "--data", ok, "--eigen", "0"}).code != 0);
  CHECK(run({"ci", "--data", ok, "--no-such-flag"}).code != 0);
  auto const cfg = tmp.write("cfg.json", R"({"bogus": 1})");
  r = run({"ci", "--data", ok, "--config", cfg});
  CHECK(r.code != 0);
  CHECK_THAT(r.err, ContainsSubstring("bogus"));
  auto const wrong = tmp.write("wrong.json", R"({"beta": "high"})");
  CHECK(run({"ci", "--data", ok, "--config", wrong}).code != 0);
}

TEST_CASE("ci on constant data", "[cli]")
{
  Scratch tmp;
  auto const flat = tmp.write("flat.csv", "2,2,2\n2,2,2\n2,2,2\n");
  auto const r = run({"ci", "--data", flat, "--boot", "50", "--diag-boot", "50"});
  REQUIRE(r.code == 0);
  CHECK_THAT(r.err, ContainsSubstring("zero total variance"));
  auto const doc = nlohmann::json::parse(r.out);
  CHECK(doc["report"]["critical_point"] == 0.0);
  for (auto const& ci : doc["report"]["intervals"])
  {
    CHECK(ci["target"] == "theta");
    CHECK(ci["lower"] == 0.0);
    CHECK(ci["upper"] == 0.0);
  }
}

TEST_CASE("diagnose", "[cli]")
{
  Scratch tmp;
  auto const flat = tmp.write("flat.csv", "1,1,1\n1,1,1\n");
  auto r = run({"diagnose", "--data", flat, "--diag-boot", "30"});
  REQUIRE(r.code == 0);
  auto doc = nlohmann::json::parse(r.out);
  for (auto const& row : doc["sweep"])
  {
    CHECK(row["critical_point"] == 0.0);
    CHECK(row["partition"]["clusters"].size() == 1);
  }

  auto const s = trb::testing::random_sample(50, 8, 5, 0.0, 1.0);
  auto const data = tmp.write("s.csv", to_csv(s.values));
  r = run({"diagnose", "--data", data, "--interval", "0,1", "--diag-boot", "300", "--betas",
           "0.1,0.3,0.5,0.7,0.9", "--out", tmp("d.json"), "--csv", tmp("d.csv")});
  REQUIRE(r.code == 0);
  doc = nlohmann::json::parse(slurp(tmp("d.json")));
  double prev = std::numeric_limits<double>::infinity();
  for (auto const& row : doc["sweep"])
  {
    double const z = row["critical_point"];
    CHECK(z <= prev);
    CHECK(row["tie_threshold"] == 2.0 * z);
    prev = z;
  }
  CHECK(doc["theta_hat"].size() == 8);
  long long total = 0;
  for (auto const& c : doc["histogram"]["counts"])
    total += c.get<long long>();
  CHECK(total == 300);
  CHECK(doc["histogram"]["edges"].size() == 21);
  CHECK(slurp(tmp("d.csv")).find("beta,critical_point,tie_threshold,clusters\n") != std::string::npos);

  // Same critical point as the ci command at the same seed and level.
  auto const ci = nlohmann::json::parse(
      run({"ci", "--data", data, "--interval", "0,1", "--diag-boot", "300", "--boot", "10"}).out);
  CHECK(ci["report"]["critical_point"] == doc["sweep"][1]["critical_point"]);

  REQUIRE(run({"diagnose", "--config", tmp("d.json"), "--out", tmp("e.json"), "--csv", tmp("e.csv")}).code == 0);
  CHECK(slurp(tmp("e.json")) == slurp(tmp("d.json")));
  CHECK(slurp(tmp("e.csv")) == slurp(tmp("d.csv")));
}

TEST_CASE("simulate", "[cli]")
{
  Scratch tmp;
  std::vector<std::string> const small{"--n", "100", "--grid", "30", "--mc", "4", "--boot", "30",
                                       "--diag-boot", "30"};
  auto args = small;
  args.insert(args.begin(), {"simulate", "--preset", "table1", "--out", tmp("t1.csv")});
  REQUIRE(run(args).code == 0);
  auto const text = slurp(tmp("t1.csv"));
  std::istringstream lines(text);
  std::vector<std::string> rows;
  for (std::string line; std::getline(lines, line);)
    rows.push_back(line);
  REQUIRE(rows.size() == 2 + 1 + 15);
  CHECK(rows[0].rfind("# tool: trb", 0) == 0);
  CHECK(rows[2] == "method,tuning,theta1,theta2,theta3,rho1,rho2,tau,se");
  CHECK(rows[3].rfind("m-out-of-n,1,", 0) == 0);
  CHECK(rows[7].rfind("m-out-of-n,0.125,", 0) == 0);
  CHECK(rows[8].rfind("trb-td1,0.1,", 0) == 0);
  CHECK(rows[17].rfind("trb-td2,0.9,", 0) == 0);

  args[4] = tmp("t1b.csv");
  REQUIRE(run(args).code == 0);
  CHECK(slurp(tmp("t1b.csv")) == text);
  REQUIRE(run({"simulate", "--config", tmp("t1.csv"), "--out", tmp("t1c.csv"), "--threads", "2"}).code == 0);
  CHECK(slurp(tmp("t1c.csv")) == text);

  auto sweep = small;
  sweep.insert(sweep.begin(), {"simulate", "--preset", "spacing", "--spacings", "0,0.5",
                               "--m-ratios", "1", "--betas", "0.3"});
  auto const r = run(sweep);
  REQUIRE(r.code == 0);
  CHECK(r.out.find("s,method,tuning,target,coverage,se\n") != std::string::npos);
  CHECK(r.out.find("\n0.5,trb-td1,0.3,theta2,") != std::string::npos);

  auto model_truth = small;
  model_truth.insert(model_truth.begin(), {"simulate", "--preset", "custom", "--truth", "model"});
  auto const mt = run(model_truth);
  REQUIRE(mt.code == 0);
  CHECK_THAT(mt.out, ContainsSubstring("\"truth\":\"model\""));
  model_truth[4] = "exact";
  CHECK(run(model_truth).code == 2);

  auto const bad = run({"simulate", "--preset", "table9"});
  CHECK(bad.code != 0);
  CHECK_THAT(bad.err, ContainsSubstring("table1, table2, table3, spacing, custom"));
}

TEST_CASE("help and version", "[cli]")
{
  CHECK(run({"--version"}).code == 0);
  CHECK(run({"ci", "--help"}).code == 0);
  CHECK(run({}).code != 0);
}
