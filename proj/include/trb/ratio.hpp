// ratio.hpp

#ifndef TRB_RATIO_HPP
#define TRB_RATIO_HPP

#include "trb/spectral.hpp"

namespace trb
{

/// Share of total variance carried by the first k eigenvalues,
/// (sum_{j<=k} theta_j) / (sum_j theta_j).
template <class Scalar>
Scalar variance_ratio(VectorX<Scalar> const& theta, Index k)
{
  if (k < 1)
    throw InvalidInput("variance_ratio: k must be at least 1");
  Scalar const total = theta.sum();
  if (!(total > Scalar(0)))
    throw DegenerateSample("variance_ratio: spectrum has zero total variance");
  if (k >= theta.size())
    return Scalar(1);
  return theta.head(k).sum() / total;
}

}  // namespace trb

#endif  // TRB_RATIO_HPP
