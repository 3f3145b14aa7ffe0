#include "cli_commands.hpp"

#include "trb/dataset_io.hpp"
#include "trb/inference.hpp"
#include "trb/report.hpp"
#include "trb/simlab.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace trb::cli
{
namespace
{

using json = nlohmann::json;

/// Bad flag values or config contents; exit code 2.
class UsageError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

enum class Kind
{
  text,
  real,
  count,
  seed,
  reals,
  counts,
  texts,
  interval,       // "a,b" or "none"
  optional_real,  // value or "none"
};

struct Param
{
  std::string key;
  Kind kind;
  json fallback;
  std::string help;

  std::string flag() const
  {
    std::string f = "--" + key;
    std::replace(f.begin(), f.end(), '_', '-');
    return f;
  }
};

std::vector<std::string> const kPresets{"table1", "table2", "table3", "spacing", "custom"};

std::vector<Param> params_for(std::string const& command)
{
  std::vector<Param> p{{"seed", Kind::seed, 1, "Random seed"}};
  auto add = [&](Param q) { p.push_back(std::move(q)); };
  if (command == "ci" || command == "diagnose")
  {
    add({"data", Kind::text, nullptr, "CSV dataset path"});
    add({"interval", Kind::interval, nullptr, "Domain a,b of the curves (weight (b-a)/J)"});
    add({"weight", Kind::optional_real, nullptr, "Quadrature weight (overrides the interval)"});
    add({"diagnostic", Kind::text, "td1", "Tie diagnostic: td1 or td2"});
    add({"diag_boot", Kind::count, 1000, "Bootstrap replicates for the diagnostic"});
  }
  if (command == "ci")
  {
    add({"method", Kind::text, "trb", "trb or m-out-of-n"});
    add({"beta", Kind::real, 0.3, "Diagnostic probability level"});
    add({"m_ratio", Kind::real, 1.0, "m/n for the m-out-of-n bootstrap"});
    add({"boot", Kind::count, 1000, "Bootstrap replicates for the intervals"});
    add({"alpha", Kind::real, 0.1, "Intervals have nominal coverage 1 - alpha"});
    add({"side", Kind::text, "two-sided", "two-sided, one-sided-lower or one-sided-upper"});
    add({"eigen", Kind::counts, json::array({1, 2, 3}), "Eigenvalue indices"});
    add({"ratio", Kind::counts, json::array({1, 2}), "Explained-variance ratio orders"});
  }
  if (command == "diagnose")
  {
    add({"betas", Kind::reals, json::array({0.1, 0.3, 0.5, 0.7, 0.9}), "Probability levels"});
    add({"bins", Kind::count, 20, "Histogram bins for the bootstrap draws"});
  }
  if (command == "simulate")
  {
    add({"preset", Kind::text, "table1", "table1, table2, table3, spacing or custom"});
    add({"model", Kind::count, 1, "Model 1, 2 or 3 (custom preset)"});
    add({"spacing", Kind::optional_real, nullptr, "Spacing s (custom preset; overrides model)"});
    add({"n", Kind::count, 400, "Sample size"});
    add({"grid", Kind::count, 100, "Grid points J"});
    add({"mc", Kind::count, 500, "Monte Carlo pseudo-samples M"});
    add({"boot", Kind::count, 500, "Bootstrap replicates for the intervals"});
    add({"diag_boot", Kind::count, 500, "Bootstrap replicates for the diagnostic"});
    add({"alpha", Kind::real, 0.1, "Nominal coverage 1 - alpha"});
    add({"truth", Kind::text, "grid", "Coverage truth: grid (discretized kernel) or model"});
    add({"betas", Kind::reals, json::array({0.1, 0.3, 0.5, 0.7, 0.9}), "Diagnostic levels"});
    add({"m_ratios", Kind::reals, json::array({1.0, 0.75, 0.5, 0.25, 0.125}), "m/n values"});
    add({"diagnostics", Kind::texts, json::array({"td1", "td2"}), "Diagnostics to run"});
    add({"spacings", Kind::reals, json::array({0.0, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5}),
         "Spacing grid (spacing preset)"});
  }
  return p;
}

std::vector<std::string> split(std::string const& s)
{
  std::vector<std::string> out;
  if (s.empty() || s == "none")
    return out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ','))
    out.push_back(item);
  return out;
}

double to_real(std::string const& key, std::string const& s)
{
  std::size_t used = 0;
  double v = 0;
  try
  {
    v = std::stod(s, &used);
  }
  catch (std::exception const&)
  {
    used = 0;
  }
  if (used != s.size() || s.empty() || !std::isfinite(v))
    throw UsageError("--" + key + ": '" + s + "' is not a number");
  return v;
}

long long to_integer(std::string const& key, std::string const& s)
{
  std::size_t used = 0;
  long long v = 0;
  try
  {
    v = std::stoll(s, &used);
  }
  catch (std::exception const&)
  {
    used = 0;
  }
  if (used != s.size() || s.empty())
    throw UsageError("--" + key + ": '" + s + "' is not an integer");
  return v;
}

json convert(Param const& p, std::string const& raw)
{
  switch (p.kind)
  {
  case Kind::text: return raw;
  case Kind::real: return to_real(p.key, raw);
  case Kind::count: return to_integer(p.key, raw);
  case Kind::seed:
  {
    std::size_t used = 0;
    unsigned long long v = 0;
    try
    {
      v = std::stoull(raw, &used);
    }
    catch (std::exception const&)
    {
      used = 0;
    }
    if (used != raw.size() || raw.empty() || raw.front() == '-')
      throw UsageError("--seed: '" + raw + "' is not a non-negative integer");
    return v;
  }
  case Kind::reals:
  {
    json a = json::array();
    for (auto const& s : split(raw))
      a.push_back(to_real(p.key, s));
    return a;
  }
  case Kind::counts:
  {
    json a = json::array();
    for (auto const& s : split(raw))
      a.push_back(to_integer(p.key, s));
    return a;
  }
  case Kind::texts:
  {
    json a = json::array();
    for (auto const& s : split(raw))
      a.push_back(s);
    return a;
  }
  case Kind::interval:
  {
    auto const parts = split(raw);
    if (parts.empty())
      return nullptr;
    if (parts.size() != 2)
      throw UsageError("--interval expects a,b");
    return json::array({to_real(p.key, parts[0]), to_real(p.key, parts[1])});
  }
  case Kind::optional_real:
    if (raw == "none")
      return nullptr;
    return to_real(p.key, raw);
  }
  return nullptr;
}

/// Config object from a JSON file (bare, or an output with a "config" key)
/// or from the "# config: " line of a CSV output.
json load_config(std::string const& path)
{
  std::ifstream in(path);
  if (!in)
    throw UsageError("cannot open config file '" + path + "'");
  std::string const text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::string const marker = "# config: ";
  json j;
  try
  {
    auto const at = text.find(marker);
    auto const first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{')
      j = json::parse(text);
    else if (at != std::string::npos)
      j = json::parse(text.substr(at + marker.size(), text.find('\n', at) - at - marker.size()));
    else
      throw UsageError("config file '" + path + "' holds neither JSON nor a '# config:' line");
  }
  catch (json::exception const& e)
  {
    throw UsageError("config file '" + path + "': " + e.what());
  }
  if (j.contains("config") && j["config"].is_object())
    j = j["config"];
  if (!j.is_object())
    throw UsageError("config file '" + path + "' must hold a JSON object");
  return j;
}

void check_type(Param const& p, json const& v)
{
  bool ok = false;
  auto all = [&](auto pred) { return v.is_array() && std::all_of(v.begin(), v.end(), pred); };
  switch (p.kind)
  {
  case Kind::text: ok = v.is_string() || (p.key == "data" && v.is_null()); break;
  case Kind::real: ok = v.is_number(); break;
  case Kind::count: ok = v.is_number_integer(); break;
  case Kind::seed: ok = v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0); break;
  case Kind::reals: ok = all([](json const& x) { return x.is_number(); }); break;
  case Kind::counts: ok = all([](json const& x) { return x.is_number_integer(); }); break;
  case Kind::texts: ok = all([](json const& x) { return x.is_string(); }); break;
  case Kind::interval:
    ok = v.is_null() || (all([](json const& x) { return x.is_number(); }) && v.size() == 2);
    break;
  case Kind::optional_real: ok = v.is_null() || v.is_number(); break;
  }
  if (!ok)
    throw UsageError("config key '" + p.key + "' has the wrong type");
}

struct Outputs
{
  std::string out;
  std::string csv;
  unsigned threads{1};
  std::string config;
};

std::string header_lines(json const& config)
{
  return std::string("# tool: ") + kToolName + ' ' + kToolVersion + "\n# config: " + config.dump() + '\n';
}

json envelope(std::string const& command, json const& config)
{
  return {{"tool", kToolName}, {"version", kToolVersion}, {"command", command},
          {"seed", config["seed"]}, {"config", config}};
}

double probability(json const& config, std::string const& key)
{
  double const v = config[key].get<double>();
  if (!(v > 0.0 && v < 1.0))
    throw UsageError(key + " must lie in (0, 1)");
  return v;
}

Index positive(json const& config, std::string const& key)
{
  auto const v = config[key].get<long long>();
  if (v < 1)
    throw UsageError(key + " must be at least 1");
  return static_cast<Index>(v);
}

FunctionalSample<double> load_sample(json const& config)
{
  if (config["data"].is_null())
    throw UsageError("a dataset is required (--data)");
  DatasetOptions options;
  if (!config["interval"].is_null())
    options.interval = {config["interval"][0].get<double>(), config["interval"][1].get<double>()};
  if (!config["weight"].is_null())
    options.weight = config["weight"].get<double>();
  return read_dataset(config["data"].get<std::string>(), options);
}

std::vector<Index> index_list(json const& config, std::string const& key)
{
  std::vector<Index> out;
  for (auto const& v : config[key])
  {
    if (v.get<long long>() < 1)
      throw UsageError(key + " entries must be at least 1");
    out.push_back(static_cast<Index>(v.get<long long>()));
  }
  return out;
}

void write_file(std::string const& path, std::string const& text, std::ostream& out)
{
  if (path.empty() || path == "-")
  {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f)
    throw std::runtime_error("cannot write '" + path + "'");
  f << text;
}

int cmd_ci(json const& config, Outputs const& io, std::ostream& out, std::ostream& err)
{
  auto const sample = load_sample(config);
  InferenceConfig ic;
  ic.diagnostic = diagnostic_from_string(config["diagnostic"].get<std::string>());
  ic.beta = probability(config, "beta");
  ic.diagnostic_replicates = positive(config, "diag_boot");
  ic.bootstrap_replicates = positive(config, "boot");
  ic.alpha = probability(config, "alpha");
  ic.side = side_from_string(config["side"].get<std::string>());
  ic.targets = {index_list(config, "eigen"), index_list(config, "ratio")};
  ic.threads = io.threads;
  RandomStream const rng(config["seed"].get<std::uint64_t>());

  std::string const method = config["method"].get<std::string>();
  InferenceReport<double> report;
  if (method == "trb")
  {
    report = run_trb_inference(sample, ic, rng);
  }
  else if (method == "m-out-of-n" || method == "mn")
  {
    double const ratio = config["m_ratio"].get<double>();
    if (!(ratio > 0.0 && ratio <= 1.0))
      throw UsageError("m_ratio must lie in (0, 1]");
    auto const m = std::max<Index>(1, std::llround(ratio * static_cast<double>(sample.size())));
    report = run_mn_inference(sample, m, ic, rng);
  }
  else
  {
    throw UsageError("unknown method '" + method + "' (expected trb or m-out-of-n)");
  }
  for (auto const& w : report.warnings)
    err << "warning: " << w << '\n';

  json doc = envelope("ci", config);
  doc["report"] = to_json(report);
  std::string const text = doc.dump(2) + '\n';
  std::string const csv = io.csv.empty() ? std::string() : header_lines(config) + intervals_csv(report);
  write_file(io.out, text, out);
  if (!io.csv.empty())
    write_file(io.csv, csv, out);
  return 0;
}

std::string cluster_text(ClusterPartition const& p)
{
  std::string s;
  for (Cluster const& c : p.clusters)
  {
    if (!s.empty())
      s += '|';
    s += std::to_string(c.start + 1);
    if (c.length > 1)
      s += '-' + std::to_string(c.end());
  }
  return s;
}

int cmd_diagnose(json const& config, Outputs const& io, std::ostream& out, std::ostream&)
{
  auto const sample = load_sample(config);
  auto const decomp = spectral_decompose(sample);
  Diagnostic const d = diagnostic_from_string(config["diagnostic"].get<std::string>());
  RandomStream const rng(config["seed"].get<std::uint64_t>());
  // Same stream as `ci`, so both commands agree on the critical point.
  auto const draws = diagnostic_draws(decomp, positive(config, "diag_boot"), rng.child(0),
                                      d == Diagnostic::td1, d == Diagnostic::td2, io.threads);

  json doc = envelope("diagnose", config);
  doc["diagnostic"] = to_string(d);
  doc["theta_hat"] = json::array();
  for (Index j = 0; j < decomp.eigenvalues.size(); ++j)
    doc["theta_hat"].push_back(decomp.eigenvalues[j]);

  std::string csv = header_lines(config) + "beta,critical_point,tie_threshold,clusters\n";
  json sweep = json::array();
  for (auto const& b : config["betas"])
  {
    double const beta = b.get<double>();
    if (!(beta > 0.0 && beta < 1.0))
      throw UsageError("betas must lie in (0, 1)");
    double const z = draws.critical_point(d, beta);
    auto const partition = detect_clusters(diagnosed_spectrum(decomp), z);
    sweep.push_back({{"beta", beta},
                     {"critical_point", z},
                     {"tie_threshold", 2.0 * z},
                     {"partition", to_json(partition)}});
    csv += format_number(beta) + ',' + format_number(z) + ',' + format_number(2.0 * z) + ',' +
           cluster_text(partition) + '\n';
  }
  doc["sweep"] = std::move(sweep);

  auto const values = draws.of(d).draws();
  Index const bins = positive(config, "bins");
  double const lo = values.front();
  double const hi = values.back();
  double const width = hi > lo ? (hi - lo) / static_cast<double>(bins) : 0.0;
  json edges = json::array();
  std::vector<long long> counts(static_cast<std::size_t>(bins), 0);
  for (Index k = 0; k <= bins; ++k)
    edges.push_back(k == bins ? hi : lo + width * static_cast<double>(k));
  for (double v : values)
  {
    auto k = width > 0.0 ? static_cast<Index>((v - lo) / width) : 0;
    ++counts[static_cast<std::size_t>(std::clamp<Index>(k, 0, bins - 1))];
  }
  doc["histogram"] = {{"edges", edges}, {"counts", counts}};

  write_file(io.out, doc.dump(2) + '\n', out);
  if (!io.csv.empty())
    write_file(io.csv, csv, out);
  return 0;
}

int cmd_simulate(json const& config, Outputs const& io, std::ostream& out, std::ostream&)
{
  std::string const preset = config["preset"].get<std::string>();
  if (std::find(kPresets.begin(), kPresets.end(), preset) == kPresets.end())
  {
    std::string list;
    for (auto const& p : kPresets)
      list += (list.empty() ? "" : ", ") + p;
    throw UsageError("unknown preset '" + preset + "'; available presets: " + list);
  }
  simlab::CoverageConfig cc;
  Index const n = positive(config, "n");
  Index const grid = positive(config, "grid");
  if (preset == "custom" && !config["spacing"].is_null())
    cc.model = simlab::SimModel::spacing(config["spacing"].get<double>(), n, grid);
  else
    cc.model = simlab::SimModel::numbered(static_cast<int>(config["model"].get<long long>()), n, grid);
  cc.replications = positive(config, "mc");
  cc.bootstrap_replicates = positive(config, "boot");
  cc.diagnostic_replicates = positive(config, "diag_boot");
  cc.alpha = probability(config, "alpha");
  cc.threads = io.threads;
  std::string const truth = config["truth"].get<std::string>();
  if (truth != "grid" && truth != "model")
    throw UsageError("truth must be 'grid' or 'model', got '" + truth + "'");
  cc.truth = truth == "grid" ? simlab::Truth::grid : simlab::Truth::model;
  for (auto const& r : config["m_ratios"])
    cc.methods.push_back(simlab::MethodSpec::m_out_of_n(r.get<double>()));
  for (auto const& d : config["diagnostics"])
    for (auto const& b : config["betas"])
      cc.methods.push_back(simlab::MethodSpec::trb(diagnostic_from_string(d.get<std::string>()),
                                                   b.get<double>()));

  RandomStream const rng(config["seed"].get<std::uint64_t>());
  std::string table;
  if (preset == "spacing")
  {
    std::vector<double> spacings;
    for (auto const& s : config["spacings"])
      spacings.push_back(s.get<double>());
    table = sweep_csv(simlab::spacing_sweep(spacings, cc, rng));
  }
  else
  {
    table = coverage_csv(simlab::coverage_experiment(cc, rng));
  }
  write_file(io.out, header_lines(config) + table, out);
  return 0;
}

}  // namespace

int run(std::vector<std::string> const& args, std::ostream& out, std::ostream& err)
{
  CLI::App app{"Tie-respecting bootstrap inference for covariance eigenvalues", "trb"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolName) + ' ' + kToolVersion);

  std::vector<std::string> const commands{"ci", "diagnose", "simulate"};
  std::map<std::string, std::map<std::string, std::string>> raw;
  std::map<std::string, std::map<std::string, CLI::Option*>> given;
  std::map<std::string, Outputs> io;
  std::map<std::string, CLI::App*> subs;
  std::map<std::string, std::string> descriptions{
      {"ci", "Confidence intervals for eigenvalues and explained-variance ratios"},
      {"diagnose", "Tie diagnostic critical points and cluster partitions"},
      {"simulate", "Monte Carlo coverage experiments on synthetic curves"}};
  for (auto const& c : commands)
  {
    CLI::App* sub = app.add_subcommand(c, descriptions[c]);
    subs[c] = sub;
    for (Param const& p : params_for(c))
      given[c][p.key] = sub->add_option(p.flag(), raw[c][p.key], p.help);
    sub->add_option("--config", io[c].config, "JSON config, or an earlier output to replay");
    sub->add_option("--out", io[c].out, "Output path (default: stdout)");
    if (c != "simulate")
      sub->add_option("--csv", io[c].csv, "Also write a CSV table here");
    sub->add_option("--threads", io[c].threads, "Worker threads (does not affect results)")
        ->check(CLI::PositiveNumber);
  }

  std::vector<char const*> argv{"trb"};
  for (auto const& a : args)
    argv.push_back(a.c_str());
  try
  {
    app.parse(static_cast<int>(argv.size()), argv.data());
  }
  catch (CLI::ParseError const& e)
  {
    return app.exit(e, out, err);
  }

  std::string command;
  for (auto const& c : commands)
    if (subs[c]->parsed())
      command = c;

  try
  {
    json config = json::object();
    auto const params = params_for(command);
    for (Param const& p : params)
      config[p.key] = given[command][p.key]->count() > 0 ? convert(p, raw[command][p.key]) : p.fallback;
    if (!io[command].config.empty())
    {
      json const file = load_config(io[command].config);
      for (auto const& [key, value] : file.items())
      {
        if (key == "command")
        {
          if (value != command)
            throw UsageError("config file was written by '" + value.dump() + "', not '" + command + "'");
          continue;
        }
        auto it = std::find_if(params.begin(), params.end(), [&](Param const& p) { return p.key == key; });
        if (it == params.end())
          throw UsageError("unknown config key '" + key + "' for " + command);
        check_type(*it, value);
        config[key] = value;
      }
    }
    config["command"] = command;
    if (command == "simulate")
    {
      auto const preset = config["preset"].get<std::string>();
      if (preset.size() == 6 && preset.rfind("table", 0) == 0)
        config["model"] = preset[5] - '0';
      if (preset == "spacing")
        config["diagnostics"] = json::array({"td1"});
    }

    if (command == "ci")
      return cmd_ci(config, io[command], out, err);
    if (command == "diagnose")
      return cmd_diagnose(config, io[command], out, err);
    return cmd_simulate(config, io[command], out, err);
  }
  catch (UsageError const& e)
  {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  catch (DegenerateSample const& e)
  {
    err << "error: degenerate data: " << e.what() << '\n';
    return 1;
  }
  catch (std::exception const& e)
  {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace trb::cli
