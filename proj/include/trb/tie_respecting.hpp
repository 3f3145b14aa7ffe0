// tie_respecting.hpp
//
// The tie-respecting bootstrap.  Given a cluster partition of the
// eigenvalue indices, eigenvalue estimates are averaged within clusters,
// principal-component scores are rescaled to the averaged variances, and
// whole score vectors are resampled.  Bootstrap spectra are averaged over
// the same (original) partition before percentile intervals are formed.

#ifndef TRB_TIE_RESPECTING_HPP
#define TRB_TIE_RESPECTING_HPP

#include "trb/interval.hpp"
#include "trb/parallel.hpp"
#include "trb/random_stream.hpp"
#include "trb/ratio.hpp"
#include "trb/resample.hpp"
#include "trb/spectral.hpp"
#include "trb/tiediag.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace trb
{

/// Cluster-averaged eigenvalues with the matching rescaled scores.
template <class Scalar = double>
struct AdjustedSpectrum
{
  VectorX<Scalar> eigenvalues;
  MatrixX<Scalar> scores;
  ClusterPartition partition;
};

/// Replace every eigenvalue in a cluster by the cluster mean.
///
/// Entries past partition.total are left untouched (they are the zero
/// eigenvalues beyond the sample rank).  The tail cluster is averaged like
/// any other, so the total sum is preserved.
template <class Scalar>
VectorX<Scalar> adjust_eigenvalues(VectorX<Scalar> const& eigenvalues,
                                   ClusterPartition const& partition)
{
  partition.validate();
  if (partition.total > eigenvalues.size())
    throw InvalidInput("partition covers " + std::to_string(partition.total) +
                       " indices but only " + std::to_string(eigenvalues.size()) +
                       " eigenvalues were given");
  VectorX<Scalar> out = eigenvalues;
  for (Cluster const& c : partition.clusters)
    out.segment(c.start, c.length).setConstant(eigenvalues.segment(c.start, c.length).mean());
  return out;
}

/// As above; the partition must cover every non-null eigenvalue of `decomp`.
template <class Scalar>
VectorX<Scalar> adjust_eigenvalues(SpectralDecomp<Scalar> const& decomp,
                                   ClusterPartition const& partition)
{
  if (partition.total < decomp.rank() || partition.total > decomp.eigenvalues.size())
    throw InvalidInput("partition length " + std::to_string(partition.total) +
                       " does not match decomposition (rank " + std::to_string(decomp.rank()) +
                       ", " + std::to_string(decomp.eigenvalues.size()) + " components)");
  return adjust_eigenvalues(decomp.eigenvalues, partition);
}

/// xi~_ij = (theta~_j / theta^_j)^{1/2} xi^_ij; null directions stay zero.
template <class Scalar>
MatrixX<Scalar> rescale_scores(SpectralDecomp<Scalar> const& decomp,
                               VectorX<Scalar> const& adjusted)
{
  if (adjusted.size() != decomp.eigenvalues.size())
    throw InvalidInput("rescale_scores: eigenvalue vector length does not match the decomposition");
  MatrixX<Scalar> out(decomp.scores.rows(), decomp.scores.cols());
  for (Index j = 0; j < adjusted.size(); ++j)
  {
    Scalar const base = decomp.eigenvalues[j];
    if (base == Scalar(0))
    {
      if (adjusted[j] > Scalar(0))
        throw InvalidInput("rescale_scores: positive adjusted eigenvalue " + std::to_string(j + 1) +
                           " on a null direction (partition inconsistent with the sample rank)");
      out.col(j).setZero();
    }
    else
    {
      out.col(j) = std::sqrt(adjusted[j] / base) * decomp.scores.col(j);
    }
  }
  return out;
}

template <class Scalar>
AdjustedSpectrum<Scalar> adjust_spectrum(SpectralDecomp<Scalar> const& decomp,
                                         ClusterPartition const& partition)
{
  AdjustedSpectrum<Scalar> a;
  a.eigenvalues = adjust_eigenvalues(decomp, partition);
  a.scores = rescale_scores(decomp, a.eigenvalues);
  a.partition = partition;
  return a;
}

/// n curves X*_i = mean + sum_j xi*_ij psi_j from whole score rows drawn
/// with replacement.
template <class Scalar>
FunctionalSample<Scalar> trb_resample(VectorX<Scalar> const& mean,
                                      MatrixX<Scalar> const& eigenfunctions,
                                      MatrixX<Scalar> const& scores, Grid<Scalar> const& grid,
                                      RandomStream& rng)
{
  if (eigenfunctions.rows() != mean.size() || eigenfunctions.cols() != scores.cols() ||
      grid.size() != mean.size())
    throw InvalidInput("trb_resample: shape mismatch between mean, eigenfunctions and scores");
  Index const n = scores.rows();
  MatrixX<Scalar> drawn(n, scores.cols());
  for (Index i = 0; i < n; ++i)
    drawn.row(i) = scores.row(static_cast<Index>(rng.uniform_index(static_cast<std::size_t>(n))));
  FunctionalSample<Scalar> out;
  out.grid = grid;
  out.values = (drawn * eigenfunctions.transpose()).rowwise() + mean.transpose();
  return out;
}

/// Spectrum of a bootstrap sample, averaged over the original partition.
template <class Scalar>
VectorX<Scalar> trb_spectrum(FunctionalSample<Scalar> const& bootstrap,
                             ClusterPartition const& partition)
{
  auto const decomp = spectral_decompose(bootstrap);
  return adjust_eigenvalues(padded(decomp.eigenvalues, partition.total), partition);
}

/// Score-space replicator for the tie-respecting bootstrap.
///
/// Replicate b uses stream rng.child(b), draws n score rows of the adjusted
/// spectrum and returns the partition-averaged bootstrap spectrum.  This
/// equals trb_spectrum(trb_resample(...)) because resampled curves stay in
/// the span of the eigenfunctions.
template <class Scalar = double>
class TieRespectingBootstrap
{
public:
  TieRespectingBootstrap(SpectralDecomp<Scalar> const& decomp, ClusterPartition const& partition)
      : adjusted_(adjust_spectrum(decomp, partition)),
        boot_(adjusted_.scores.leftCols(partition.total)),
        length_(decomp.eigenvalues.size())
  {
  }

  AdjustedSpectrum<Scalar> const& adjusted() const { return adjusted_; }

  VectorX<Scalar> replicate(RandomStream& stream) const
  {
    Index const n = adjusted_.scores.rows();
    VectorX<Scalar> const raw = padded(boot_.spectrum(resample_counts(n, n, stream)), length_);
    return adjust_eigenvalues(raw, adjusted_.partition);
  }

  std::vector<VectorX<Scalar>> replicates(Index count, RandomStream const& rng,
                                          unsigned threads = 1) const
  {
    if (count < 1)
      throw InvalidInput("bootstrap replicate count must be at least 1");
    std::vector<VectorX<Scalar>> out(static_cast<std::size_t>(count));
    parallel_for(out.size(), threads, [&](std::size_t b) {
      RandomStream stream = rng.child(b);
      out[b] = replicate(stream);
    });
    return out;
  }

private:
  AdjustedSpectrum<Scalar> adjusted_;
  ScoreSpaceBootstrap<Scalar> boot_;
  Index length_;
};

/// Percentile interval for theta_j from bootstrap draws of theta~*_j.
template <class Scalar>
ConfidenceInterval<Scalar> eigenvalue_ci(Scalar adjusted, EmpiricalDistribution<Scalar> const& draws,
                                         double alpha, Side side, Index j = 1)
{
  std::vector<Scalar> raw(draws.draws().begin(), draws.draws().end());
  return centered_percentile_interval(adjusted, std::move(raw), alpha, side,
                                      Target{TargetKind::eigenvalue, j});
}

/// Percentile interval for rho_k from bootstrap draws of rho~*_k.
template <class Scalar>
ConfidenceInterval<Scalar> ratio_ci(Scalar adjusted, EmpiricalDistribution<Scalar> const& draws,
                                    double alpha, Side side, Index k = 1)
{
  std::vector<Scalar> raw(draws.draws().begin(), draws.draws().end());
  return centered_percentile_interval(adjusted, std::move(raw), alpha, side,
                                      Target{TargetKind::ratio, k});
}

/// Intervals for every target from the adjusted spectrum and its replicates.
template <class Scalar>
std::vector<ConfidenceInterval<Scalar>> trb_intervals(VectorX<Scalar> const& adjusted,
                                                      std::vector<VectorX<Scalar>> const& spectra,
                                                      TargetSet const& targets, double alpha,
                                                      Side side)
{
  if (!targets.ratios.empty() && !(adjusted.sum() > Scalar(0)))
    throw DegenerateSample("ratio targets are undefined: the sample has zero total variance");
  std::vector<ConfidenceInterval<Scalar>> out;
  for (Target const& t : targets.all())
  {
    std::vector<Scalar> draws;
    draws.reserve(spectra.size());
    if (t.kind == TargetKind::eigenvalue)
    {
      if (t.index < 1 || t.index > adjusted.size())
        throw InvalidInput("eigenvalue target " + std::to_string(t.index) + " outside 1.." +
                           std::to_string(adjusted.size()));
      for (auto const& s : spectra)
        draws.push_back(s[t.index - 1]);
      out.push_back(eigenvalue_ci(adjusted[t.index - 1], EmpiricalDistribution<Scalar>(draws),
                                  alpha, side, t.index));
    }
    else
    {
      for (auto const& s : spectra)
        draws.push_back(s.sum() > Scalar(0) ? variance_ratio(s, t.index) : Scalar(0));
      out.push_back(ratio_ci(variance_ratio(adjusted, t.index), EmpiricalDistribution<Scalar>(draws),
                             alpha, side, t.index));
    }
  }
  return out;
}

}  // namespace trb

#endif  // TRB_TIE_RESPECTING_HPP
