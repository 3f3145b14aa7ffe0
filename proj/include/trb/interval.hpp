// interval.hpp
//
// Percentile-method confidence intervals built from centered bootstrap draws.

#ifndef TRB_INTERVAL_HPP
#define TRB_INTERVAL_HPP

#include "trb/empirical.hpp"

#include <limits>
#include <string>
#include <vector>

namespace trb
{

enum class Side
{
  two_sided,
  lower_bound,  // (c - x_{1-alpha}, +inf)
  upper_bound,  // (-inf, c - x_alpha)
};

enum class TargetKind
{
  eigenvalue,
  ratio,
};

/// Eigenvalue theta_j (index j, 1-based) or explained-variance ratio rho_k.
struct Target
{
  TargetKind kind{TargetKind::eigenvalue};
  Index index{1};

  bool operator==(Target const&) const = default;
};

struct TargetSet
{
  std::vector<Index> eigenvalues;
  std::vector<Index> ratios;

  std::vector<Target> all() const
  {
    std::vector<Target> out;
    for (Index j : eigenvalues)
      out.push_back({TargetKind::eigenvalue, j});
    for (Index k : ratios)
      out.push_back({TargetKind::ratio, k});
    return out;
  }
};

template <class Scalar = double>
struct ConfidenceInterval
{
  Scalar lower{-std::numeric_limits<Scalar>::infinity()};
  Scalar upper{std::numeric_limits<Scalar>::infinity()};
  double nominal{0.9};
  Side side{Side::two_sided};
  Target target;

  bool covers(Scalar value) const { return lower <= value && value <= upper; }
};

inline char const* to_string(Side side)
{
  switch (side)
  {
  case Side::two_sided: return "two-sided";
  case Side::lower_bound: return "one-sided-lower";
  case Side::upper_bound: return "one-sided-upper";
  }
  return "?";
}

inline Side side_from_string(std::string const& s)
{
  if (s == "two-sided" || s == "two")
    return Side::two_sided;
  if (s == "one-sided-lower" || s == "lower")
    return Side::lower_bound;
  if (s == "one-sided-upper" || s == "upper")
    return Side::upper_bound;
  throw InvalidInput("unknown interval side '" + s + "'");
}

/// Percentile interval around `center` from the law of centered draws
/// (statistic* - center), each quantile multiplied by `scale`.
template <class Scalar>
ConfidenceInterval<Scalar> percentile_interval(Scalar center,
                                               EmpiricalDistribution<Scalar> const& centered,
                                               double alpha, Side side, Target target,
                                               Scalar scale = Scalar(1))
{
  if (!(alpha > 0.0 && alpha < 1.0))
    throw InvalidInput("alpha must lie in (0, 1)");
  ConfidenceInterval<Scalar> ci;
  ci.nominal = 1.0 - alpha;
  ci.side = side;
  ci.target = target;
  switch (side)
  {
  case Side::two_sided:
    ci.lower = center - scale * centered.quantile(1.0 - alpha / 2.0);
    ci.upper = center - scale * centered.quantile(alpha / 2.0);
    break;
  case Side::lower_bound:
    ci.lower = center - scale * centered.quantile(1.0 - alpha);
    break;
  case Side::upper_bound:
    ci.upper = center - scale * centered.quantile(alpha);
    break;
  }
  return ci;
}

/// Percentile interval from raw draws of statistic*, centered at `estimate`.
template <class Scalar>
ConfidenceInterval<Scalar> centered_percentile_interval(Scalar estimate,
                                                        std::vector<Scalar> raw_draws,
                                                        double alpha, Side side, Target target,
                                                        Scalar scale = Scalar(1))
{
  for (auto& d : raw_draws)
    d -= estimate;
  return percentile_interval(estimate, EmpiricalDistribution<Scalar>(std::move(raw_draws)), alpha,
                             side, target, scale);
}

}  // namespace trb

#endif  // TRB_INTERVAL_HPP
