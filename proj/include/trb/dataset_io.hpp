// dataset_io.hpp
//
// CSV datasets: one observation per row, J numeric columns, '.' decimals.
// An optional first line "u=<v1>,<v2>,...,<vJ>" gives the grid abscissae.
// Blank lines and lines starting with '#' are ignored.

#ifndef TRB_DATASET_IO_HPP
#define TRB_DATASET_IO_HPP

#include "trb/spectral.hpp"

#include <istream>
#include <optional>
#include <string>
#include <utility>

namespace trb
{

class DatasetError : public InvalidInput
{
public:
  using InvalidInput::InvalidInput;
};

/// Grid resolution: an explicit weight wins; otherwise an interval [a, b]
/// gives w = (b - a) / J (and midpoint abscissae when there is no header);
/// otherwise the data are vectors with w = 1.
struct DatasetOptions
{
  std::optional<std::pair<double, double>> interval;
  std::optional<double> weight;
};

FunctionalSample<double> parse_dataset(std::istream& in, DatasetOptions const& options,
                                       std::string const& source = "<input>");

FunctionalSample<double> read_dataset(std::string const& path, DatasetOptions const& options);

/// Shortest round-trip decimal text for a double, independent of locale.
std::string format_number(double value);

}  // namespace trb

#endif  // TRB_DATASET_IO_HPP
