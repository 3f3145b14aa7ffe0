#include "trb/simlab.hpp"

#include "trb/parallel.hpp"
#include "trb/resample.hpp"
#include "trb/tie_respecting.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace trb::simlab
{

SimModel SimModel::numbered(int id, Index n, Index grid_size)
{
  SimModel m;
  m.n = n;
  m.grid_size = grid_size;
  switch (id)
  {
  case 1: m.leading = {1.0, 1.0, 1.0}; break;
  case 2: m.leading = {1.6, 0.7, 0.7}; break;
  case 3: m.leading = {1.6, 1.0, 0.4}; break;
  default: throw InvalidInput("unknown model " + std::to_string(id) + " (expected 1, 2 or 3)");
  }
  m.name = "model" + std::to_string(id);
  return m;
}

SimModel SimModel::spacing(double s, Index n, Index grid_size)
{
  if (!(s >= 0.0 && s <= 0.5))
    throw InvalidInput("spacing s must lie in [0, 0.5]");
  SimModel m;
  m.n = n;
  m.grid_size = grid_size;
  m.leading = {1.0 + s, 1.0, 1.0 - s};
  m.name = "spacing";
  return m;
}

void SimModel::validate() const
{
  if (n < 4)
    throw InvalidInput("model needs n >= 4");
  if (grid_size < 2)
    throw InvalidInput("model needs at least two grid points");
  VectorXd const theta = model_eigenvalues(*this);
  for (Index j = 0; j < theta.size(); ++j)
    if (theta[j] < 0.0 || (j > 0 && theta[j] > theta[j - 1]))
      throw InvalidInput("model eigenvalues must be non-negative and non-increasing");
}

VectorXd model_eigenvalues(SimModel const& model)
{
  VectorXd theta = VectorXd::Zero(model.n);
  for (Index j = 0; j < model.n; ++j)
  {
    Index const index = j + 1;
    theta[j] = index <= 3 ? model.leading[static_cast<std::size_t>(j)]
                          : 1.0 / (500.0 + 100.0 * static_cast<double>(index - 4));
  }
  return theta;
}

ClusterPartition true_partition(SimModel const& model)
{
  VectorXd const theta = model_eigenvalues(model);
  ClusterPartition p;
  p.total = theta.size();
  Cluster current{0, 1};
  for (Index j = 1; j < theta.size(); ++j)
  {
    if (theta[j] == theta[j - 1])
    {
      ++current.length;
    }
    else
    {
      p.clusters.push_back(current);
      current = {j, 1};
    }
  }
  p.clusters.push_back(current);
  return p;
}

MatrixXd model_basis(SimModel const& model)
{
  Grid<double> const grid = model.grid();
  MatrixXd basis(grid.size(), model.n);
  for (Index j = 0; j < model.n; ++j)
  {
    double const freq = static_cast<double>(j + 1) * std::numbers::pi;
    for (Index k = 0; k < grid.size(); ++k)
      basis(k, j) = std::numbers::sqrt2 * std::cos(freq * grid.points[k]);
    double const norm_sq = grid.weight * basis.col(j).squaredNorm();
    // Frequencies that alias onto zero at every grid point carry nothing.
    if (norm_sq < 1e-20)
      basis.col(j).setZero();
    else
      basis.col(j) /= std::sqrt(norm_sq);
  }
  return basis;
}

CovarianceKernel<double> population_kernel(SimModel const& model)
{
  MatrixXd const basis = model_basis(model);
  VectorXd const theta = model_eigenvalues(model);
  CovarianceKernel<double> k;
  k.grid = model.grid();
  k.matrix = basis * theta.asDiagonal() * basis.transpose();
  return k;
}

VectorXd grid_eigenvalues(SimModel const& model)
{
  VectorXd const ev = operator_eigenvalues(population_kernel(model));
  VectorXd out = VectorXd::Zero(model.n);
  Index const keep = std::min(ev.size(), model.n);
  for (Index j = 0; j < keep; ++j)
    out[j] = ev[j] > 1e-12 * ev[0] ? ev[j] : 0.0;
  return out;
}

namespace
{

VectorXd truth_eigenvalues(SimModel const& model, Truth truth)
{
  return truth == Truth::grid ? grid_eigenvalues(model) : model_eigenvalues(model);
}

}  // namespace

FunctionalSample<double> generate_sample(SimModel const& model, RandomStream& rng, SampleRoute route)
{
  if (model.law != ScoreLaw::gaussian)
    throw InvalidInput("only Gaussian score laws are supported by the generator");
  FunctionalSample<double> sample;
  sample.grid = model.grid();
  if (route == SampleRoute::karhunen_loeve)
  {
    VectorXd const sd = model_eigenvalues(model).cwiseSqrt();
    MatrixXd scores(model.n, model.n);
    for (Index i = 0; i < model.n; ++i)
      for (Index j = 0; j < model.n; ++j)
        scores(i, j) = sd[j] * rng.normal();
    sample.values = scores * model_basis(model).transpose();
  }
  else
  {
    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(population_kernel(model).matrix);
    MatrixXd const root =
        eig.eigenvectors() * eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
    MatrixXd gauss(model.n, model.grid_size);
    for (Index i = 0; i < model.n; ++i)
      for (Index k = 0; k < model.grid_size; ++k)
        gauss(i, k) = rng.normal();
    sample.values = gauss * root.transpose();
  }
  return sample;
}

bool ties_identified(ClusterPartition const& detected, VectorXd const& truth, Index upto)
{
  Index const last = std::min({upto, truth.size(), detected.total});
  for (Index j = 0; j + 1 < last; ++j)
  {
    bool const tied = truth[j] == truth[j + 1];
    bool const declared = detected.cluster_of(j) == detected.cluster_of(j + 1);
    if (tied != declared)
      return false;
  }
  return true;
}

std::string MethodSpec::method_name() const
{
  if (kind == Kind::m_out_of_n)
    return "m-out-of-n";
  return diagnostic == Diagnostic::td1 ? "trb-td1" : "trb-td2";
}

std::array<double, kCoverageTargets> CoverageReport::standard_errors() const
{
  std::array<double, kCoverageTargets> se{};
  for (std::size_t t = 0; t < kCoverageTargets; ++t)
    se[t] = std::sqrt(coverage[t] * (1.0 - coverage[t]) / static_cast<double>(replications));
  return se;
}

double CoverageReport::max_standard_error() const
{
  auto const se = standard_errors();
  return *std::max_element(se.begin(), se.end());
}

namespace
{

using Hits = std::array<bool, kCoverageTargets>;

struct MethodOutcome
{
  Hits covered{};
  bool ties_ok{false};
};

TargetSet const& coverage_targets()
{
  static TargetSet const targets{{1, 2, 3}, {1, 2}};
  return targets;
}

Hits coverage_hits(std::vector<ConfidenceInterval<double>> const& intervals,
                   std::array<double, kCoverageTargets> const& truth)
{
  Hits hits{};
  for (std::size_t t = 0; t < kCoverageTargets; ++t)
    hits[t] = intervals[t].covers(truth[t]);
  return hits;
}

std::vector<MethodOutcome> run_pseudo_sample(CoverageConfig const& config, VectorXd const& theta,
                                             std::array<double, kCoverageTargets> const& truth,
                                             RandomStream const& stream)
{
  RandomStream data_stream = stream.child(0);
  auto const sample = generate_sample(config.model, data_stream);
  auto const decomp = spectral_decompose(sample);

  bool want_td1 = false;
  bool want_td2 = false;
  for (auto const& m : config.methods)
    if (m.kind == MethodSpec::Kind::trb)
      (m.diagnostic == Diagnostic::td1 ? want_td1 : want_td2) = true;

  std::optional<DiagnosticDraws<double>> draws;
  if (want_td1 || want_td2)
    draws = diagnostic_draws(decomp, config.diagnostic_replicates, stream.child(1), want_td1,
                             want_td2);

  // Methods whose diagnostics land on the same partition share one TRB run.
  std::vector<std::pair<ClusterPartition, Hits>> trb_cache;
  std::vector<MethodOutcome> out;
  for (auto const& method : config.methods)
  {
    MethodOutcome outcome;
    if (method.kind == MethodSpec::Kind::trb)
    {
      double const z = draws->critical_point(method.diagnostic, method.beta);
      ClusterPartition const partition = detect_clusters(diagnosed_spectrum(decomp), z);
      outcome.ties_ok = ties_identified(partition, theta);
      auto cached = std::find_if(trb_cache.begin(), trb_cache.end(),
                                 [&](auto const& e) { return e.first == partition; });
      if (cached == trb_cache.end())
      {
        TieRespectingBootstrap<double> const trb(decomp, partition);
        auto const spectra = trb.replicates(config.bootstrap_replicates, stream.child(2));
        auto const intervals = trb_intervals(trb.adjusted().eigenvalues, spectra,
                                             coverage_targets(), config.alpha, Side::two_sided);
        trb_cache.emplace_back(partition, coverage_hits(intervals, truth));
        cached = std::prev(trb_cache.end());
      }
      outcome.covered = cached->second;
    }
    else
    {
      auto const m = std::max<Index>(
          1, static_cast<Index>(std::llround(method.m_ratio * static_cast<double>(sample.size()))));
      auto const intervals = mn_bootstrap_ci(decomp, m, coverage_targets(), config.alpha,
                                             config.bootstrap_replicates, stream.child(3));
      outcome.covered = coverage_hits(intervals, truth);
    }
    out.push_back(outcome);
  }
  return out;
}

}  // namespace

std::vector<CoverageReport> coverage_experiment(CoverageConfig const& config,
                                                RandomStream const& rng)
{
  config.model.validate();
  if (config.replications < 1)
    throw InvalidInput("coverage experiment needs at least one replication");
  if (config.methods.empty())
    throw InvalidInput("coverage experiment needs at least one method");
  for (auto const& m : config.methods)
  {
    if (m.kind == MethodSpec::Kind::trb && !(m.beta > 0.0 && m.beta < 1.0))
      throw InvalidInput("beta must lie in (0, 1)");
    if (m.kind == MethodSpec::Kind::m_out_of_n && !(m.m_ratio > 0.0 && m.m_ratio <= 1.0))
      throw InvalidInput("m/n must lie in (0, 1]");
  }

  VectorXd const theta = model_eigenvalues(config.model);
  VectorXd const target = truth_eigenvalues(config.model, config.truth);
  double const total = target.sum();
  std::array<double, kCoverageTargets> const truth{
      target[0], target[1], target[2], target[0] / total, (target[0] + target[1]) / total};

  std::vector<std::vector<MethodOutcome>> outcomes(static_cast<std::size_t>(config.replications));
  parallel_for(outcomes.size(), config.threads, [&](std::size_t rep) {
    outcomes[rep] = run_pseudo_sample(config, theta, truth, rng.child(rep));
  });

  std::vector<CoverageReport> reports;
  auto const reps = static_cast<double>(config.replications);
  for (std::size_t k = 0; k < config.methods.size(); ++k)
  {
    CoverageReport report;
    report.method = config.methods[k];
    report.replications = config.replications;
    std::array<Index, kCoverageTargets> hits{};
    Index tie_hits = 0;
    for (auto const& rep : outcomes)
    {
      for (std::size_t t = 0; t < kCoverageTargets; ++t)
        hits[t] += rep[k].covered[t];
      tie_hits += rep[k].ties_ok;
    }
    for (std::size_t t = 0; t < kCoverageTargets; ++t)
      report.coverage[t] = static_cast<double>(hits[t]) / reps;
    if (report.method.kind == MethodSpec::Kind::trb)
      report.tau = static_cast<double>(tie_hits) / reps;
    reports.push_back(report);
  }
  return reports;
}

std::vector<SweepPoint> spacing_sweep(std::vector<double> const& spacings,
                                      CoverageConfig const& base, RandomStream const& rng)
{
  std::vector<SweepPoint> out;
  for (std::size_t k = 0; k < spacings.size(); ++k)
  {
    CoverageConfig config = base;
    config.model = SimModel::spacing(spacings[k], base.model.n, base.model.grid_size);
    config.model.lower = base.model.lower;
    config.model.upper = base.model.upper;
    out.push_back({spacings[k], coverage_experiment(config, rng.child(k))});
  }
  return out;
}

double critical_point_coverage(SimModel const& model, Diagnostic diagnostic, double beta,
                               Index replications, Index diagnostic_replicates,
                               RandomStream const& rng, unsigned threads, Truth truth)
{
  model.validate();
  VectorXd const theta = truth_eigenvalues(model, truth);
  std::vector<char> held(static_cast<std::size_t>(replications), 0);
  parallel_for(held.size(), threads, [&](std::size_t rep) {
    RandomStream stream = rng.child(rep);
    RandomStream data_stream = stream.child(0);
    auto const decomp = spectral_decompose(generate_sample(model, data_stream));
    double const z =
        diagnostic_draws(decomp, diagnostic_replicates, stream.child(1),
                         diagnostic == Diagnostic::td1, diagnostic == Diagnostic::td2)
            .critical_point(diagnostic, beta);
    held[rep] = eigen_sup_distance(decomp.eigenvalues, theta) <= z;
  });
  return static_cast<double>(std::count(held.begin(), held.end(), 1)) /
         static_cast<double>(replications);
}

LimitLawDraw limit_law_sample(LimitLawOracle const& oracle, RandomStream& rng)
{
  if (oracle.law != ScoreLaw::gaussian)
    throw InvalidInput("limit law is available in closed form for Gaussian scores only");
  Index const q = oracle.multiplicity;
  if (q < 1 || oracle.start < 0 || oracle.start + q > oracle.theta.size())
    throw InvalidInput("limit law cluster lies outside the eigenvalue sequence");
  double const common = oracle.theta[oracle.start];
  for (Index j = oracle.start; j < oracle.start + q; ++j)
    if (std::abs(oracle.theta[j] - common) > 1e-12 * std::abs(common))
      throw InvalidInput("limit law cluster must hold equal eigenvalues");

  MatrixXd block(q, q);
  for (Index a = 0; a < q; ++a)
  {
    double const ta = oracle.theta[oracle.start + a];
    block(a, a) = std::numbers::sqrt2 * ta * rng.normal();
    for (Index b = a + 1; b < q; ++b)
    {
      double const tb = oracle.theta[oracle.start + b];
      block(a, b) = block(b, a) = std::sqrt(ta * tb) * rng.normal();
    }
  }
  LimitLawDraw draw;
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(block, Eigen::EigenvaluesOnly);
  draw.eigenvalues = eig.eigenvalues().reverse();
  draw.total = block.trace();
  for (Index j = 0; j < oracle.theta.size(); ++j)
    if (j < oracle.start || j >= oracle.start + q)
      draw.total += std::numbers::sqrt2 * oracle.theta[j] * rng.normal();
  return draw;
}

double ks_distance(std::vector<double> a, std::vector<double> b)
{
  if (a.empty() || b.empty())
    throw InvalidInput("ks_distance needs two non-empty samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double const na = static_cast<double>(a.size());
  double const nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t k = 0;
  double d = 0.0;
  while (i < a.size() && k < b.size())
  {
    double const x = std::min(a[i], b[k]);
    while (i < a.size() && a[i] <= x)
      ++i;
    while (k < b.size() && b[k] <= x)
      ++k;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(k) / nb));
  }
  return d;
}

}  // namespace trb::simlab
