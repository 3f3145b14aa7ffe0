// resample.hpp
//
// Conventional i.i.d. resampling of observations and the m-out-of-n
// percentile bootstrap for eigenvalues and explained-variance ratios.
//
// Bootstrap spectra are computed in score coordinates: the centered data
// equal scores * psi^T with psi orthonormal under the grid quadrature, so
// resampling score rows and resampling curves give the same covariance
// operator up to an isometry.

#ifndef TRB_RESAMPLE_HPP
#define TRB_RESAMPLE_HPP

#include "trb/interval.hpp"
#include "trb/parallel.hpp"
#include "trb/random_stream.hpp"
#include "trb/ratio.hpp"
#include "trb/spectral.hpp"

#include <cmath>
#include <vector>

namespace trb
{

/// Multiplicities of each of n rows in a with-replacement draw of m rows.
inline std::vector<Index> resample_counts(Index n, Index m, RandomStream& rng)
{
  if (m < 1)
    throw InvalidInput("resample size m must be at least 1");
  std::vector<Index> counts(static_cast<std::size_t>(n), 0);
  for (Index i = 0; i < m; ++i)
    ++counts[rng.uniform_index(static_cast<std::size_t>(n))];
  return counts;
}

/// m rows drawn uniformly with replacement, in draw order.
template <class Scalar>
FunctionalSample<Scalar> iid_resample(FunctionalSample<Scalar> const& sample, Index m,
                                      RandomStream& rng)
{
  if (m < 1)
    throw InvalidInput("resample size m must be at least 1");
  FunctionalSample<Scalar> out;
  out.grid = sample.grid;
  out.values.resize(m, sample.values.cols());
  auto const n = static_cast<std::size_t>(sample.size());
  for (Index i = 0; i < m; ++i)
    out.values.row(i) = sample.values.row(static_cast<Index>(rng.uniform_index(n)));
  return out;
}

/// Covariance, spectrum and Hilbert-Schmidt deviation of weighted
/// resamples of the rows of a score matrix.
template <class Scalar = double>
class ScoreSpaceBootstrap
{
public:
  explicit ScoreSpaceBootstrap(MatrixX<Scalar> const& scores)
      : y_(scores.rowwise() - scores.colwise().mean())
  {
    Index const n = y_.rows();
    Index const q = y_.cols();
    reference_ = (y_.transpose() * y_) / static_cast<Scalar>(n);
    // O(n^2) Gram route when it beats the O(n q^2) covariance route.
    use_gram_ = q > 0 && 6 * n <= q * q;
    if (use_gram_)
    {
      gram_ = y_ * y_.transpose();
      gram_sq_ = gram_.array().square().matrix();
    }
  }

  Index size() const { return y_.rows(); }
  Index dimension() const { return y_.cols(); }
  MatrixX<Scalar> const& reference_covariance() const { return reference_; }

  /// (1/m) sum_i c_i (y_i - ybar_c)(y_i - ybar_c)^T for counts c summing to m.
  MatrixX<Scalar> covariance(std::vector<Index> const& counts) const
  {
    Index const q = y_.cols();
    Scalar const m = total(counts);
    Index rows = 0;
    for (Index c : counts)
      rows += c > 0;
    MatrixX<Scalar> weighted(q, rows);
    VectorX<Scalar> mean = VectorX<Scalar>::Zero(q);
    Index at = 0;
    for (Index i = 0; i < y_.rows(); ++i)
    {
      Index const c = counts[static_cast<std::size_t>(i)];
      if (c == 0)
        continue;
      Scalar const share = static_cast<Scalar>(c) / m;
      weighted.col(at++) = std::sqrt(share) * y_.row(i).transpose();
      mean.noalias() += share * y_.row(i).transpose();
    }
    MatrixX<Scalar> cov = MatrixX<Scalar>::Zero(q, q);
    cov.template selfadjointView<Eigen::Lower>().rankUpdate(weighted);
    cov.template selfadjointView<Eigen::Lower>().rankUpdate(mean, Scalar(-1));
    return cov.template selfadjointView<Eigen::Lower>();
  }

  /// Descending, null-clamped eigenvalues of covariance(counts).
  VectorX<Scalar> spectrum(std::vector<Index> const& counts) const
  {
    if (y_.cols() == 0)
      return VectorX<Scalar>();
    Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> eig(covariance(counts), Eigen::EigenvaluesOnly);
    VectorX<Scalar> ev = eig.eigenvalues().reverse();
    detail::clamp_null(ev);
    return ev;
  }

  /// Frobenius distance between covariance(counts) and the full-sample covariance.
  Scalar hs_deviation(std::vector<Index> const& counts) const
  {
    if (y_.cols() == 0)
      return Scalar(0);
    if (!use_gram_)
      return (covariance(counts) - reference_).norm();
    // With e_i = c_i/m - 1/n, g = Y ybar_c:
    // |Y^T diag(e) Y - ybar ybar^T|^2 = e^T (G o G) e - 2 sum_i e_i g_i^2 + |ybar|^4.
    Index const n = y_.rows();
    Scalar const m = total(counts);
    VectorX<Scalar> c(n);
    for (Index i = 0; i < n; ++i)
      c[i] = static_cast<Scalar>(counts[static_cast<std::size_t>(i)]);
    VectorX<Scalar> const e = c / m - VectorX<Scalar>::Constant(n, Scalar(1) / static_cast<Scalar>(n));
    VectorX<Scalar> const g = gram_ * c / m;
    Scalar const quad = e.dot(gram_sq_ * e);
    Scalar const cross = (e.array() * g.array().square()).sum();
    Scalar const mean_sq = c.dot(g) / m;
    Scalar const sq = quad - Scalar(2) * cross + mean_sq * mean_sq;
    return std::sqrt(std::max(sq, Scalar(0)));
  }

private:
  static Scalar total(std::vector<Index> const& counts)
  {
    Index m = 0;
    for (Index c : counts)
      m += c;
    if (m < 1)
      throw InvalidInput("resample counts must sum to at least 1");
    return static_cast<Scalar>(m);
  }

  MatrixX<Scalar> y_;
  MatrixX<Scalar> reference_;
  bool use_gram_{false};
  MatrixX<Scalar> gram_;
  MatrixX<Scalar> gram_sq_;
};

/// Leading columns of the score matrix that carry non-null eigenvalues.
template <class Scalar>
MatrixX<Scalar> active_scores(SpectralDecomp<Scalar> const& decomp)
{
  return decomp.scores.leftCols(decomp.rank());
}

/// Zero-pad a descending spectrum to `length`.
template <class Scalar>
VectorX<Scalar> padded(VectorX<Scalar> const& v, Index length)
{
  VectorX<Scalar> out = VectorX<Scalar>::Zero(std::max(length, v.size()));
  out.head(v.size()) = v;
  return out;
}

/// m-out-of-n percentile bootstrap intervals for eigenvalues and ratios.
///
/// Each replicate draws m rows with replacement (stream rng.child(b)); the
/// centered draws theta+_{j,m} - theta_j have their quantiles scaled by
/// (m/n)^{1/2}.  Ratio targets use the same construction and scaling.
/// m = n is the conventional percentile bootstrap.
template <class Scalar>
std::vector<ConfidenceInterval<Scalar>> mn_bootstrap_ci(SpectralDecomp<Scalar> const& decomp,
                                                        Index m, TargetSet const& targets,
                                                        double alpha, Index replicates,
                                                        RandomStream const& rng,
                                                        Side side = Side::two_sided,
                                                        unsigned threads = 1)
{
  Index const n = decomp.size();
  Index const r = decomp.eigenvalues.size();
  if (m < 1 || m > n)
    throw InvalidInput("m-out-of-n bootstrap needs 1 <= m <= n");
  if (replicates < 1)
    throw InvalidInput("bootstrap replicate count must be at least 1");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw InvalidInput("alpha must lie in (0, 1)");
  for (Index j : targets.eigenvalues)
    if (j < 1 || j > r)
      throw InvalidInput("eigenvalue target " + std::to_string(j) + " outside 1.." +
                         std::to_string(r));
  if (!targets.ratios.empty() && !(decomp.eigenvalues.sum() > Scalar(0)))
    throw DegenerateSample("ratio targets are undefined: the sample has zero total variance");

  ScoreSpaceBootstrap<Scalar> const boot(active_scores(decomp));
  std::vector<VectorX<Scalar>> spectra(static_cast<std::size_t>(replicates));
  parallel_for(spectra.size(), threads, [&](std::size_t b) {
    RandomStream stream = rng.child(b);
    spectra[b] = padded(boot.spectrum(resample_counts(n, m, stream)), r);
  });

  Scalar const scale = std::sqrt(static_cast<Scalar>(m) / static_cast<Scalar>(n));
  std::vector<ConfidenceInterval<Scalar>> out;
  for (Target const& t : targets.all())
  {
    std::vector<Scalar> draws;
    draws.reserve(spectra.size());
    Scalar estimate;
    if (t.kind == TargetKind::eigenvalue)
    {
      estimate = decomp.eigenvalues[t.index - 1];
      for (auto const& s : spectra)
        draws.push_back(s[t.index - 1]);
    }
    else
    {
      estimate = variance_ratio(decomp.eigenvalues, t.index);
      for (auto const& s : spectra)
        draws.push_back(s.sum() > Scalar(0) ? variance_ratio(s, t.index) : Scalar(0));
    }
    out.push_back(centered_percentile_interval(estimate, std::move(draws), alpha, side, t, scale));
  }
  return out;
}

/// Convenience overload decomposing the sample first.
template <class Scalar>
std::vector<ConfidenceInterval<Scalar>> mn_bootstrap_ci(FunctionalSample<Scalar> const& sample,
                                                        Index m, TargetSet const& targets,
                                                        double alpha, Index replicates,
                                                        RandomStream const& rng,
                                                        Side side = Side::two_sided,
                                                        unsigned threads = 1)
{
  return mn_bootstrap_ci(spectral_decompose(sample), m, targets, alpha, replicates, rng, side,
                         threads);
}

}  // namespace trb

#endif  // TRB_RESAMPLE_HPP
