// empirical.hpp
//
// Sorted bootstrap draws of a scalar statistic and their quantiles.

#ifndef TRB_EMPIRICAL_HPP
#define TRB_EMPIRICAL_HPP

#include "trb/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace trb
{

template <class Scalar = double>
class EmpiricalDistribution
{
public:
  explicit EmpiricalDistribution(std::vector<Scalar> draws) : draws_(std::move(draws))
  {
    if (draws_.empty())
      throw InvalidInput("empirical distribution needs at least one draw");
    std::sort(draws_.begin(), draws_.end());
  }

  std::size_t size() const { return draws_.size(); }
  std::span<Scalar const> draws() const { return draws_; }

  /// Order statistic of rank ceil(p B): the smallest draw q with
  /// #{draws <= q} / B >= p.
  ///
  /// p B within 1e-9 of an integer is taken as that integer, so that e.g.
  /// 0.95 * 500 selects rank 475 despite rounding in 1 - 0.1/2.
  Scalar quantile(double p) const
  {
    if (!(p > 0.0 && p < 1.0))
      throw InvalidInput("quantile level must lie in (0, 1)");
    double const x = p * static_cast<double>(draws_.size());
    double const nearest = std::round(x);
    double const rank = std::abs(x - nearest) <= 1e-9 * std::max(1.0, x) ? nearest : std::ceil(x);
    auto const k = std::clamp<std::size_t>(static_cast<std::size_t>(rank), 1, draws_.size());
    return draws_[k - 1];
  }

private:
  std::vector<Scalar> draws_;
};

}  // namespace trb

#endif  // TRB_EMPIRICAL_HPP
