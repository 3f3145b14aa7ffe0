// Shared fixtures for the unit tests.

#ifndef TRB_TESTS_SUPPORT_HPP
#define TRB_TESTS_SUPPORT_HPP

#include "trb/trb.hpp"

#include <cstdint>

namespace trb::testing
{

inline MatrixX<double> gaussian_matrix(Index rows, Index cols, RandomStream& rng)
{
  MatrixX<double> m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index k = 0; k < cols; ++k)
      m(i, k) = rng.normal();
  return m;
}

/// n curves on J midpoints of [0, 1] with a decaying random spectrum.
inline FunctionalSample<double> random_sample(Index n, Index J, std::uint64_t seed,
                                              double a = 0.0, double b = 1.0)
{
  RandomStream rng(seed);
  FunctionalSample<double> s;
  s.grid = Grid<double>::equispaced(J, a, b);
  MatrixX<double> mix = gaussian_matrix(J, J, rng);
  for (Index k = 0; k < J; ++k)
    mix.row(k) /= static_cast<double>(k + 1);
  s.values = gaussian_matrix(n, J, rng) * mix;
  return s;
}

inline FunctionalSample<double> vector_sample(MatrixX<double> values)
{
  FunctionalSample<double> s;
  s.grid = Grid<double>::coordinates(values.cols());
  s.values = std::move(values);
  return s;
}

inline CovarianceKernel<double> random_psd_kernel(Grid<double> const& grid, Index rank,
                                                  RandomStream& rng)
{
  MatrixX<double> const f = gaussian_matrix(grid.size(), rank, rng);
  return {f * f.transpose(), grid};
}

inline VectorX<double> vec(std::initializer_list<double> values)
{
  VectorX<double> v(static_cast<Index>(values.size()));
  Index k = 0;
  for (double x : values)
    v[k++] = x;
  return v;
}

}  // namespace trb::testing

#endif
