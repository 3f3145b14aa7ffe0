// simlab.hpp
//
// Synthetic functional data with a prescribed spectrum, Monte Carlo coverage
// experiments for the tie-respecting and m-out-of-n bootstraps, and the
// Gaussian-ensemble limit law of tied eigenvalue estimators.
//
// Model curves are X(u) = sum_{j<=n} xi_j psi_j(u) on [-1, 1] with
// psi_j(u) proportional to cos(j pi u), normalized to unit norm under the
// grid quadrature, and xi_j ~ N(0, theta_j) independent.  The leading
// triple (theta_1, theta_2, theta_3) is model-specific; the tail is
// theta_j = 1 / (500 + 100 (j - 4)) for 4 <= j <= n.

#ifndef TRB_SIMLAB_HPP
#define TRB_SIMLAB_HPP

#include "trb/random_stream.hpp"
#include "trb/spectral.hpp"
#include "trb/tiediag.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace trb::simlab
{

using Eigen::MatrixXd;
using Eigen::VectorXd;

enum class ScoreLaw
{
  gaussian,
  // Non-Gaussian laws are not implemented; the limit law needs fourth moments.
  student_t,
};

struct SimModel
{
  std::array<double, 3> leading{1.0, 1.0, 1.0};
  Index n{400};
  Index grid_size{100};
  double lower{-1.0};
  double upper{1.0};
  ScoreLaw law{ScoreLaw::gaussian};
  std::string name{"model1"};

  /// Models 1-3: (1, 1, 1), (1.6, 0.7, 0.7), (1.6, 1, 0.4).
  static SimModel numbered(int id, Index n = 400, Index grid_size = 100);
  /// Leading triple (1 + s, 1, 1 - s), 0 <= s <= 0.5.
  static SimModel spacing(double s, Index n = 400, Index grid_size = 100);

  Grid<double> grid() const { return Grid<double>::equispaced(grid_size, lower, upper); }
  void validate() const;
};

/// Full truth theta_1..theta_n.
VectorXd model_eigenvalues(SimModel const& model);

/// Maximal runs of exactly equal model eigenvalues over 1..n.
ClusterPartition true_partition(SimModel const& model);

/// J x n matrix whose column j is psi_{j+1} on the grid (zero if it vanishes there).
MatrixXd model_basis(SimModel const& model);

/// Discretized population covariance sum_j theta_j psi_j psi_j^T.
CovarianceKernel<double> population_kernel(SimModel const& model);

/// Eigenvalues of population_kernel(model), padded with zeros to length n.
/// High frequencies alias onto low ones on the grid (every model curve is
/// even, so a symmetric grid of J points carries J/2 directions), which moves
/// these slightly away from model_eigenvalues.
VectorXd grid_eigenvalues(SimModel const& model);

/// What coverage is measured against.
enum class Truth
{
  grid,   // grid_eigenvalues: the quantities the grid estimators converge to
  model,  // model_eigenvalues
};

enum class SampleRoute
{
  karhunen_loeve,     // explicit scores times basis functions
  covariance_factor,  // Gaussian draws through a square root of the grid kernel
};

/// n curves from the model; both routes have the same law on the grid.
FunctionalSample<double> generate_sample(SimModel const& model, RandomStream& rng,
                                         SampleRoute route = SampleRoute::karhunen_loeve);

/// Does the detected partition agree with the truth on every adjacent pair
/// among indices 1..upto?  (tau event: P(p2 = 3) for model 1, etc.)
bool ties_identified(ClusterPartition const& detected, VectorXd const& truth, Index upto = 4);

struct MethodSpec
{
  enum class Kind
  {
    trb,
    m_out_of_n,
  };

  Kind kind{Kind::trb};
  Diagnostic diagnostic{Diagnostic::td1};
  double beta{0.3};
  double m_ratio{1.0};

  static MethodSpec trb(Diagnostic d, double beta) { return {Kind::trb, d, beta, 1.0}; }
  static MethodSpec m_out_of_n(double ratio) { return {Kind::m_out_of_n, Diagnostic::td1, 0.0, ratio}; }

  /// "m-out-of-n" / "trb-td1" / "trb-td2".
  std::string method_name() const;
  /// Tuning value: m/n or beta.
  double tuning() const { return kind == Kind::trb ? beta : m_ratio; }
};

/// Targets reported by coverage experiments: theta_1..3, rho_1, rho_2.
inline constexpr std::size_t kCoverageTargets = 5;
inline constexpr std::array<char const*, kCoverageTargets> kCoverageTargetNames{
    "theta1", "theta2", "theta3", "rho1", "rho2"};

struct CoverageConfig
{
  SimModel model;
  std::vector<MethodSpec> methods;
  Index replications{500};
  Index bootstrap_replicates{500};
  Index diagnostic_replicates{500};
  double alpha{0.1};
  unsigned threads{1};
  Truth truth{Truth::grid};
};

struct CoverageReport
{
  MethodSpec method;
  std::array<double, kCoverageTargets> coverage{};
  std::optional<double> tau;  // tie-respecting methods only
  Index replications{0};

  /// sqrt(c (1 - c) / M) for each target.
  std::array<double, kCoverageTargets> standard_errors() const;
  double max_standard_error() const;
};

/// Coverage of nominal (1 - alpha) two-sided intervals over M pseudo-samples.
///
/// Pseudo-sample m uses stream rng.child(m) with sub-streams 0 (data),
/// 1 (diagnostic resamples), 2 (tie-respecting replicates) and
/// 3 (m-out-of-n replicates).  All methods share those streams.
std::vector<CoverageReport> coverage_experiment(CoverageConfig const& config,
                                                RandomStream const& rng);

struct SweepPoint
{
  double spacing{0};
  std::vector<CoverageReport> reports;
};

/// Coverage as a function of the spacing s; point k uses stream rng.child(k).
/// Only base.model's n, grid and interval are used.
std::vector<SweepPoint> spacing_sweep(std::vector<double> const& spacings,
                                      CoverageConfig const& base, RandomStream const& rng);

/// Frequency over M pseudo-samples of sup_j |theta^_j - theta_j| <= z_beta.
double critical_point_coverage(SimModel const& model, Diagnostic diagnostic, double beta,
                               Index replications, Index diagnostic_replicates,
                               RandomStream const& rng, unsigned threads = 1,
                               Truth truth = Truth::grid);

/// Gaussian limit of n^{1/2}(theta^_j - theta_j) over one tied cluster.
struct LimitLawOracle
{
  VectorXd theta;       // population eigenvalues, truncated
  Index start{0};       // 0-based first index of the cluster
  Index multiplicity{1};
  ScoreLaw law{ScoreLaw::gaussian};
};

struct LimitLawDraw
{
  VectorXd eigenvalues;  // descending eigenvalues of the cluster block N
  double total{0};       // Z_0 = sum_j N_jj over all of theta
};

/// One draw of the symmetric Gaussian matrix N with var(N_jj) = 2 theta_j^2
/// and var(N_jk) = theta_j theta_k (j != k), distinct entries independent.
LimitLawDraw limit_law_sample(LimitLawOracle const& oracle, RandomStream& rng);

/// Two-sample Kolmogorov-Smirnov statistic sup_x |F_a(x) - F_b(x)|.
double ks_distance(std::vector<double> a, std::vector<double> b);

}  // namespace trb::simlab

#endif  // TRB_SIMLAB_HPP
