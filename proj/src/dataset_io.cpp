#include "trb/dataset_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <vector>

namespace trb
{
namespace
{

std::string trim(std::string const& s)
{
  auto const b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos)
    return {};
  auto const e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<double> parse_row(std::string const& line, std::string const& source, std::size_t row)
{
  std::vector<double> out;
  std::size_t pos = 0;
  std::size_t column = 1;
  while (true)
  {
    auto const comma = line.find(',', pos);
    std::string const cell = trim(line.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
    double value = 0.0;
    auto const [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (cell.empty() || ec != std::errc() || end != cell.data() + cell.size() || !std::isfinite(value))
      throw DatasetError(source + ": row " + std::to_string(row) + ", column " +
                         std::to_string(column) + ": '" + cell + "' is not a finite number");
    out.push_back(value);
    if (comma == std::string::npos)
      break;
    pos = comma + 1;
    ++column;
  }
  return out;
}

}  // namespace

FunctionalSample<double> parse_dataset(std::istream& in, DatasetOptions const& options,
                                       std::string const& source)
{
  std::vector<std::vector<double>> rows;
  std::optional<std::vector<double>> abscissae;
  std::string line;
  std::size_t line_no = 0;
  std::size_t data_row = 0;
  while (std::getline(in, line))
  {
    ++line_no;
    std::string const t = trim(line);
    if (t.empty() || t.front() == '#')
      continue;
    if (t.rfind("u=", 0) == 0)
    {
      if (abscissae || !rows.empty())
        throw DatasetError(source + ": line " + std::to_string(line_no) +
                           ": the 'u=' header must precede all data rows");
      abscissae = parse_row(t.substr(2), source, 0);
      continue;
    }
    ++data_row;
    auto values = parse_row(t, source, data_row);
    if (!rows.empty() && values.size() != rows.front().size())
      throw DatasetError(source + ": row " + std::to_string(data_row) + " has " +
                         std::to_string(values.size()) + " columns, expected " +
                         std::to_string(rows.front().size()));
    rows.push_back(std::move(values));
  }
  if (rows.size() < 2)
    throw DatasetError(source + ": need at least two data rows, found " + std::to_string(rows.size()));
  auto const cols = static_cast<Index>(rows.front().size());
  if (abscissae && static_cast<Index>(abscissae->size()) != cols)
    throw DatasetError(source + ": header lists " + std::to_string(abscissae->size()) +
                       " abscissae but rows have " + std::to_string(cols) + " columns");
  if (cols < 2)
    throw DatasetError(source + ": need at least two columns");

  FunctionalSample<double> sample;
  sample.values.resize(static_cast<Index>(rows.size()), cols);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (Index k = 0; k < cols; ++k)
      sample.values(static_cast<Index>(i), k) = rows[i][static_cast<std::size_t>(k)];

  if (options.interval)
    sample.grid = Grid<double>::equispaced(cols, options.interval->first, options.interval->second);
  else
    sample.grid = Grid<double>::coordinates(cols);
  if (abscissae)
    sample.grid.points = Eigen::Map<Eigen::VectorXd const>(abscissae->data(), cols);
  if (options.weight)
    sample.grid.weight = *options.weight;
  try
  {
    sample.validate();
  }
  catch (InvalidInput const& e)
  {
    throw DatasetError(source + ": " + e.what());
  }
  return sample;
}

FunctionalSample<double> read_dataset(std::string const& path, DatasetOptions const& options)
{
  std::ifstream in(path);
  if (!in)
    throw DatasetError("cannot open dataset '" + path + "'");
  return parse_dataset(in, options, path);
}

std::string format_number(double value)
{
  if (std::isnan(value))
    return "nan";
  if (std::isinf(value))
    return value > 0 ? "inf" : "-inf";
  char buf[64];
  auto const [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, end);
}

}  // namespace trb
