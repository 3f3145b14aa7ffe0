// inference.hpp
//
// End-to-end pipelines: decompose -> diagnose ties -> adjust -> resample ->
// intervals (tie-respecting), and the m-out-of-n baseline.

#ifndef TRB_INFERENCE_HPP
#define TRB_INFERENCE_HPP

#include "trb/interval.hpp"
#include "trb/random_stream.hpp"
#include "trb/resample.hpp"
#include "trb/spectral.hpp"
#include "trb/tie_respecting.hpp"
#include "trb/tiediag.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

namespace trb
{

struct InferenceConfig
{
  Diagnostic diagnostic{Diagnostic::td1};
  double beta{0.3};
  Index diagnostic_replicates{1000};
  Index bootstrap_replicates{1000};
  double alpha{0.1};
  Side side{Side::two_sided};
  TargetSet targets{{1, 2, 3}, {1, 2}};
  unsigned threads{1};
};

template <class Scalar = double>
struct InferenceReport
{
  std::string method;  // "trb" or "m-out-of-n"
  Index n{0};
  Index grid_size{0};
  Scalar weight{1};
  VectorX<Scalar> estimated;  // theta^
  // Tie-respecting runs only.
  std::optional<Scalar> critical_point;
  std::optional<ClusterPartition> partition;
  std::optional<VectorX<Scalar>> adjusted;  // theta~
  // m-out-of-n runs only.
  std::optional<Index> m;
  std::vector<ConfidenceInterval<Scalar>> intervals;
  std::vector<std::string> warnings;
};

namespace detail
{

/// Drop, with a warning, eigenvalue targets past the number of components
/// and ratio targets when the sample has no variance.
template <class Scalar>
TargetSet usable_targets(TargetSet targets, VectorX<Scalar> const& spectrum,
                         std::vector<std::string>& warnings)
{
  auto const beyond = std::remove_if(targets.eigenvalues.begin(), targets.eigenvalues.end(),
                                     [&](Index j) { return j > spectrum.size(); });
  if (beyond != targets.eigenvalues.end())
  {
    warnings.push_back("eigenvalue targets beyond " + std::to_string(spectrum.size()) +
                       " components were dropped");
    targets.eigenvalues.erase(beyond, targets.eigenvalues.end());
  }
  if (!targets.ratios.empty() && !(spectrum.sum() > Scalar(0)))
  {
    warnings.push_back("ratio targets are undefined: the sample has zero total variance");
    targets.ratios.clear();
  }
  return targets;
}

}  // namespace detail

/// Tie-respecting bootstrap inference.
///
/// Streams: rng.child(0) for the diagnostic resamples, rng.child(1) for the
/// tie-respecting replicates.
template <class Scalar>
InferenceReport<Scalar> run_trb_inference(FunctionalSample<Scalar> const& sample,
                                          InferenceConfig const& config, RandomStream const& rng)
{
  auto const decomp = spectral_decompose(sample);
  InferenceReport<Scalar> report;
  report.method = "trb";
  report.n = sample.size();
  report.grid_size = sample.grid_size();
  report.weight = sample.grid.weight;
  report.estimated = decomp.eigenvalues;

  auto const draws =
      diagnostic_draws(decomp, config.diagnostic_replicates, rng.child(0),
                       config.diagnostic == Diagnostic::td1, config.diagnostic == Diagnostic::td2,
                       config.threads);
  Scalar const z = draws.critical_point(config.diagnostic, config.beta);
  ClusterPartition const partition = detect_clusters(diagnosed_spectrum(decomp), z);

  TieRespectingBootstrap<Scalar> const trb(decomp, partition);
  auto const spectra = trb.replicates(config.bootstrap_replicates, rng.child(1), config.threads);
  TargetSet const targets = detail::usable_targets(config.targets, decomp.eigenvalues, report.warnings);

  report.critical_point = z;
  report.partition = partition;
  report.adjusted = trb.adjusted().eigenvalues;
  report.intervals = trb_intervals(trb.adjusted().eigenvalues, spectra, targets, config.alpha,
                                   config.side);
  return report;
}

/// m-out-of-n percentile bootstrap inference (m = n: conventional bootstrap).
template <class Scalar>
InferenceReport<Scalar> run_mn_inference(FunctionalSample<Scalar> const& sample, Index m,
                                         InferenceConfig const& config, RandomStream const& rng)
{
  auto const decomp = spectral_decompose(sample);
  InferenceReport<Scalar> report;
  report.method = "m-out-of-n";
  report.n = sample.size();
  report.grid_size = sample.grid_size();
  report.weight = sample.grid.weight;
  report.estimated = decomp.eigenvalues;
  report.m = m;
  TargetSet const targets = detail::usable_targets(config.targets, decomp.eigenvalues, report.warnings);
  report.intervals = mn_bootstrap_ci(decomp, m, targets, config.alpha, config.bootstrap_replicates,
                                     rng.child(1), config.side, config.threads);
  return report;
}

}  // namespace trb

#endif  // TRB_INFERENCE_HPP
