// tiediag.hpp
//
// Bootstrap tie diagnostics.  A critical point z is calibrated from
// conventional n-out-of-n resamples; adjacent eigenvalue estimates closer
// than 2z are declared tied, and the maximal runs of tied indices form the
// cluster partition.
//
//   TD1: z = (1 - beta)-quantile of |K+ - K|       (Hilbert-Schmidt norm)
//   TD2: z = (1 - beta)-quantile of sup_j |theta+_j - theta_j|
//
// Because sup_j |theta+_j - theta_j| <= |K+ - K| on every resample, the TD2
// critical point never exceeds the TD1 one when both use the same draws.

#ifndef TRB_TIEDIAG_HPP
#define TRB_TIEDIAG_HPP

#include "trb/empirical.hpp"
#include "trb/parallel.hpp"
#include "trb/resample.hpp"
#include "trb/spectral.hpp"

#include <optional>
#include <string>
#include <vector>

namespace trb
{

enum class Diagnostic
{
  td1,
  td2,
};

inline char const* to_string(Diagnostic d)
{
  return d == Diagnostic::td1 ? "td1" : "td2";
}

inline Diagnostic diagnostic_from_string(std::string const& s)
{
  if (s == "td1" || s == "TD1")
    return Diagnostic::td1;
  if (s == "td2" || s == "TD2")
    return Diagnostic::td2;
  throw InvalidInput("unknown diagnostic '" + s + "' (expected td1 or td2)");
}

/// A run of indices p+1, ..., p+q (stored 0-based: start = p, length = q).
struct Cluster
{
  Index start{0};
  Index length{1};

  Index end() const { return start + length; }
  bool operator==(Cluster const&) const = default;
};

/// Consecutive clusters covering indices 1..total; the last one is the
/// open-ended tail cluster.
struct ClusterPartition
{
  std::vector<Cluster> clusters;
  Index total{0};

  /// 0-based position of the tail cluster (nu - 1).
  std::size_t tail_index() const { return clusters.empty() ? 0 : clusters.size() - 1; }
  Cluster const& tail() const { return clusters.back(); }

  /// Cluster holding 0-based index j.
  std::size_t cluster_of(Index j) const
  {
    for (std::size_t k = 0; k < clusters.size(); ++k)
      if (j < clusters[k].end())
        return k;
    return tail_index();
  }

  static ClusterPartition singletons(Index total)
  {
    ClusterPartition p;
    p.total = total;
    for (Index j = 0; j < total; ++j)
      p.clusters.push_back({j, 1});
    return p;
  }

  void validate() const
  {
    if (total < 1 || clusters.empty())
      throw InvalidInput("partition must cover at least one index");
    Index next = 0;
    for (Cluster const& c : clusters)
    {
      if (c.start != next || c.length < 1)
        throw InvalidInput("partition clusters must be consecutive and non-empty");
      next = c.end();
    }
    if (next != total)
      throw InvalidInput("partition does not cover 1.." + std::to_string(total));
  }

  bool operator==(ClusterPartition const&) const = default;
};

/// Adjacent j, j+1 share a cluster iff theta_j - theta_{j+1} < 2 z.
template <class Scalar>
ClusterPartition detect_clusters(VectorX<Scalar> const& eigenvalues, Scalar z)
{
  detail::require_descending(eigenvalues, "detect_clusters: eigenvalues");
  if (eigenvalues.size() < 1)
    throw InvalidInput("detect_clusters: no eigenvalues");
  if (!(z >= Scalar(0)))
    throw InvalidInput("detect_clusters: critical point must be non-negative");
  ClusterPartition p;
  p.total = eigenvalues.size();
  Cluster current{0, 1};
  for (Index j = 1; j < eigenvalues.size(); ++j)
  {
    if (eigenvalues[j - 1] - eigenvalues[j] < Scalar(2) * z)
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

/// Bootstrap draws of both diagnostic statistics from shared resamples.
template <class Scalar = double>
struct DiagnosticDraws
{
  std::optional<EmpiricalDistribution<Scalar>> hs;   // |K+ - K|
  std::optional<EmpiricalDistribution<Scalar>> sup;  // sup_j |theta+_j - theta_j|

  EmpiricalDistribution<Scalar> const& of(Diagnostic d) const
  {
    auto const& dist = d == Diagnostic::td1 ? hs : sup;
    if (!dist)
      throw InvalidInput(std::string("diagnostic draws for ") + to_string(d) + " were not computed");
    return *dist;
  }

  /// (1 - beta)-quantile of the chosen statistic.
  Scalar critical_point(Diagnostic d, double beta) const
  {
    if (!(beta > 0.0 && beta < 1.0))
      throw InvalidInput("beta must lie in (0, 1)");
    return of(d).quantile(1.0 - beta);
  }
};

/// Draw B conventional resamples (stream rng.child(b)) and record the
/// requested diagnostic statistics for each.
template <class Scalar>
DiagnosticDraws<Scalar> diagnostic_draws(SpectralDecomp<Scalar> const& decomp, Index replicates,
                                         RandomStream const& rng, bool want_td1, bool want_td2,
                                         unsigned threads = 1)
{
  if (replicates < 1)
    throw InvalidInput("bootstrap replicate count must be at least 1");
  Index const n = decomp.size();
  Index const r = decomp.eigenvalues.size();
  ScoreSpaceBootstrap<Scalar> const boot(active_scores(decomp));
  std::vector<Scalar> hs(want_td1 ? replicates : 0);
  std::vector<Scalar> sup(want_td2 ? replicates : 0);
  parallel_for(static_cast<std::size_t>(replicates), threads, [&](std::size_t b) {
    RandomStream stream = rng.child(b);
    auto const counts = resample_counts(n, n, stream);
    if (want_td1)
      hs[b] = boot.hs_deviation(counts);
    if (want_td2)
      sup[b] = eigen_sup_distance(padded(boot.spectrum(counts), r), decomp.eigenvalues);
  });
  DiagnosticDraws<Scalar> out;
  if (want_td1)
    out.hs.emplace(std::move(hs));
  if (want_td2)
    out.sup.emplace(std::move(sup));
  return out;
}

/// TD1 critical point z_beta from B resamples.  A constant sample gives 0.
template <class Scalar>
Scalar td1_critical(FunctionalSample<Scalar> const& sample, double beta, Index replicates,
                    RandomStream const& rng, unsigned threads = 1)
{
  auto const decomp = spectral_decompose(sample);
  return diagnostic_draws(decomp, replicates, rng, true, false, threads)
      .critical_point(Diagnostic::td1, beta);
}

/// TD2 critical point from B resamples of `sample`, whose decomposition is `decomp`.
template <class Scalar>
Scalar td2_critical(FunctionalSample<Scalar> const& sample, SpectralDecomp<Scalar> const& decomp,
                    double beta, Index replicates, RandomStream const& rng, unsigned threads = 1)
{
  if (decomp.size() != sample.size())
    throw InvalidInput("td2_critical: decomposition does not belong to the sample");
  return diagnostic_draws(decomp, replicates, rng, false, true, threads)
      .critical_point(Diagnostic::td2, beta);
}

/// Positive part of the spectrum, the range the diagnostic partitions.
template <class Scalar>
VectorX<Scalar> diagnosed_spectrum(SpectralDecomp<Scalar> const& decomp)
{
  Index const rank = decomp.rank();
  return decomp.eigenvalues.head(std::max<Index>(rank, 1));
}

}  // namespace trb

#endif  // TRB_TIEDIAG_HPP
