// spectral.hpp
//
// Discretized covariance operators: grids, samples of curves (or vectors),
// the empirical covariance kernel and its spectral decomposition.
//
// Every function here is a pure function of its arguments.

#ifndef TRB_SPECTRAL_HPP
#define TRB_SPECTRAL_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace trb
{

template <class Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
using Index = Eigen::Index;

/// Raised for inputs that violate a documented precondition.
class InvalidInput : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a sample carries no variability where some is required.
class DegenerateSample : public std::domain_error
{
public:
  using std::domain_error::domain_error;
};

/// Eigenvalues below this fraction of the largest are numerically null.
inline constexpr double kNullEigenvalueFraction = 1e-12;

/// Abscissae u_1 < ... < u_J and the quadrature weight w attached to each.
///
/// The vector case is a grid with weight 1; integrals then become sums.
template <class Scalar = double>
struct Grid
{
  VectorX<Scalar> points;
  Scalar weight{1};

  Index size() const { return points.size(); }

  /// Cell midpoints of J equal cells on [a, b], weight (b - a) / J.
  static Grid equispaced(Index count, Scalar a, Scalar b)
  {
    if (count < 2 || !(b > a))
      throw InvalidInput("equispaced grid needs J >= 2 and a < b");
    Grid g;
    g.weight = (b - a) / static_cast<Scalar>(count);
    g.points.resize(count);
    for (Index k = 0; k < count; ++k)
      g.points[k] = a + (static_cast<Scalar>(k) + Scalar(0.5)) * g.weight;
    return g;
  }

  /// Coordinates 1..p with unit weight (multivariate data).
  static Grid coordinates(Index count)
  {
    Grid g;
    g.weight = Scalar(1);
    g.points = VectorX<Scalar>::LinSpaced(count, Scalar(1), static_cast<Scalar>(count));
    g.validate();
    return g;
  }

  void validate() const
  {
    if (points.size() < 2)
      throw InvalidInput("grid needs at least two points");
    if (!(weight > 0) || !std::isfinite(static_cast<double>(weight)))
      throw InvalidInput("grid weight must be positive and finite");
    for (Index k = 1; k < points.size(); ++k)
      if (!(points[k] > points[k - 1]))
        throw InvalidInput("grid points must be strictly increasing (position " +
                           std::to_string(k) + ")");
  }

  bool operator==(Grid const& other) const
  {
    return weight == other.weight && points.size() == other.points.size() &&
           points == other.points;
  }
};

/// n observations on a common grid; row i holds X_i(u_1), ..., X_i(u_J).
template <class Scalar = double>
struct FunctionalSample
{
  MatrixX<Scalar> values;
  Grid<Scalar> grid;

  Index size() const { return values.rows(); }
  Index grid_size() const { return values.cols(); }

  void validate() const
  {
    grid.validate();
    if (values.rows() < 2)
      throw InvalidInput("sample needs at least two observations");
    if (values.cols() != grid.size())
      throw InvalidInput("sample has " + std::to_string(values.cols()) +
                         " columns but the grid has " + std::to_string(grid.size()) + " points");
    for (Index i = 0; i < values.rows(); ++i)
      for (Index k = 0; k < values.cols(); ++k)
        if (!std::isfinite(static_cast<double>(values(i, k))))
          throw InvalidInput("non-finite value at row " + std::to_string(i + 1) + ", column " +
                             std::to_string(k + 1));
  }
};

/// Kernel values K(u_a, u_b) on a grid.
template <class Scalar = double>
struct CovarianceKernel
{
  MatrixX<Scalar> matrix;
  Grid<Scalar> grid;

  /// Symmetric to 1e-10 of the largest entry and PSD to -1e-8 of the top eigenvalue.
  void validate() const
  {
    if (matrix.rows() != matrix.cols() || matrix.rows() != grid.size())
      throw InvalidInput("kernel shape does not match its grid");
    Scalar const scale = matrix.cwiseAbs().maxCoeff();
    if ((matrix - matrix.transpose()).cwiseAbs().maxCoeff() > Scalar(1e-10) * scale)
      throw InvalidInput("kernel is not symmetric");
    Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> eig(matrix, Eigen::EigenvaluesOnly);
    auto const& ev = eig.eigenvalues();
    if (ev.size() > 0 && ev[0] < Scalar(-1e-8) * std::max(ev[ev.size() - 1], Scalar(0)))
      throw InvalidInput("kernel is not positive semi-definite");
  }
};

/// Mean, descending eigenvalues, eigenfunctions and principal-component scores.
///
/// Eigenfunction columns are orthonormal under the grid's quadrature, so
/// w * psi_j . psi_k = delta_jk.  Scores are centered and have mean square
/// equal to the matching eigenvalue.
template <class Scalar = double>
struct SpectralDecomp
{
  VectorX<Scalar> mean;
  VectorX<Scalar> eigenvalues;
  MatrixX<Scalar> eigenfunctions;
  MatrixX<Scalar> scores;
  Grid<Scalar> grid;

  Index size() const { return scores.rows(); }

  /// Number of eigenvalues that are not numerically null.
  Index rank() const
  {
    Index r = 0;
    while (r < eigenvalues.size() && eigenvalues[r] > Scalar(0))
      ++r;
    return r;
  }
};

namespace detail
{

template <class Scalar>
MatrixX<Scalar> centered(FunctionalSample<Scalar> const& sample, VectorX<Scalar>& mean)
{
  mean = sample.values.colwise().mean().transpose();
  return sample.values.rowwise() - mean.transpose();
}

template <class Scalar>
void require_descending(VectorX<Scalar> const& v, char const* what)
{
  for (Index j = 1; j < v.size(); ++j)
    if (v[j] > v[j - 1])
      throw InvalidInput(std::string(what) + " must be in descending order");
}

/// Zero out entries below the null fraction of the leading one.
template <class Scalar>
void clamp_null(VectorX<Scalar>& descending)
{
  if (descending.size() == 0)
    return;
  Scalar const floor = std::max(descending[0], Scalar(0)) * Scalar(kNullEigenvalueFraction);
  for (Index j = 0; j < descending.size(); ++j)
    if (!(descending[j] > floor))
      descending[j] = Scalar(0);
}

}  // namespace detail

/// Empirical covariance kernel (1/n) sum_i (X_i - Xbar)(X_i - Xbar)^T.
template <class Scalar>
CovarianceKernel<Scalar> covariance_kernel(FunctionalSample<Scalar> const& sample)
{
  sample.validate();
  VectorX<Scalar> mean;
  MatrixX<Scalar> const z = detail::centered(sample, mean);
  CovarianceKernel<Scalar> k;
  k.grid = sample.grid;
  k.matrix = (z.transpose() * z) / static_cast<Scalar>(sample.size());
  return k;
}

/// Spectral decomposition of the empirical covariance operator through the
/// SVD of the centered data matrix Z.
///
/// theta_j = w * s_j^2 / n and psi_j = v_j / sqrt(w), where s_j and v_j are
/// the singular values and right singular vectors of Z.  Each psi_j is
/// sign-fixed so that its entry of largest magnitude is positive.  Returns
/// r = min(n, J) components; numerically null eigenvalues are set to zero
/// together with their scores.
template <class Scalar>
SpectralDecomp<Scalar> spectral_decompose(FunctionalSample<Scalar> const& sample)
{
  sample.validate();
  SpectralDecomp<Scalar> out;
  out.grid = sample.grid;
  MatrixX<Scalar> const z = detail::centered(sample, out.mean);

  Index const n = sample.size();
  Index const r = std::min(n, sample.grid_size());
  Scalar const w = sample.grid.weight;

  Eigen::BDCSVD<MatrixX<Scalar>> svd(z, Eigen::ComputeThinV);
  MatrixX<Scalar> v = svd.matrixV().leftCols(r);
  out.eigenvalues = svd.singularValues().head(r).array().square() * (w / static_cast<Scalar>(n));
  detail::clamp_null(out.eigenvalues);

  for (Index j = 0; j < r; ++j)
  {
    Index at = 0;
    v.col(j).cwiseAbs().maxCoeff(&at);
    if (v(at, j) < Scalar(0))
      v.col(j) = -v.col(j);
  }
  Scalar const root_w = std::sqrt(w);
  out.eigenfunctions = v / root_w;
  out.scores = (z * v) * root_w;
  for (Index j = 0; j < r; ++j)
    if (out.eigenvalues[j] == Scalar(0))
      out.scores.col(j).setZero();
  return out;
}

/// Descending eigenvalues of the integral operator with kernel K, i.e. of w*K.
///
/// Dense symmetric eigensolve of the J x J kernel; the independent route to
/// the spectrum used to check the SVD route and for population kernels.
template <class Scalar>
VectorX<Scalar> operator_eigenvalues(CovarianceKernel<Scalar> const& kernel)
{
  Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> eig(kernel.matrix * kernel.grid.weight,
                                                     Eigen::EigenvaluesOnly);
  VectorX<Scalar> ev = eig.eigenvalues().reverse();
  return ev;
}

/// Hilbert-Schmidt distance sqrt(w^2 sum_ab (K1_ab - K2_ab)^2).
template <class Scalar>
Scalar hs_distance(CovarianceKernel<Scalar> const& k1, CovarianceKernel<Scalar> const& k2)
{
  if (!(k1.grid == k2.grid) || k1.matrix.rows() != k2.matrix.rows() ||
      k1.matrix.cols() != k2.matrix.cols())
    throw InvalidInput("hs_distance: kernels live on different grids");
  return k1.grid.weight * (k1.matrix - k2.matrix).norm();
}

/// sup_j |a_j - b_j| for two descending sequences, the shorter zero-padded.
template <class Scalar>
Scalar eigen_sup_distance(VectorX<Scalar> const& a, VectorX<Scalar> const& b)
{
  detail::require_descending(a, "eigen_sup_distance: first sequence");
  detail::require_descending(b, "eigen_sup_distance: second sequence");
  Index const len = std::max(a.size(), b.size());
  Scalar sup(0);
  for (Index j = 0; j < len; ++j)
  {
    Scalar const x = j < a.size() ? a[j] : Scalar(0);
    Scalar const y = j < b.size() ? b[j] : Scalar(0);
    sup = std::max(sup, std::abs(x - y));
  }
  return sup;
}

}  // namespace trb

#endif  // TRB_SPECTRAL_HPP
