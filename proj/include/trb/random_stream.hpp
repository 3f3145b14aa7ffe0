// random_stream.hpp
//
// Seedable random streams addressed by (seed, path).  A path names a
// replicate, e.g. {monte-carlo rep, stage, bootstrap rep}; the same
// (seed, path) always yields the same draws, whichever thread consumes it.

#ifndef TRB_RANDOM_STREAM_HPP
#define TRB_RANDOM_STREAM_HPP

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace trb
{

class RandomStream
{
public:
  using result_type = std::mt19937_64::result_type;

  explicit RandomStream(std::uint64_t seed, std::vector<std::uint64_t> path = {});

  /// Stream for the sub-replicate `index` below this one.
  RandomStream child(std::uint64_t index) const;

  std::uint64_t seed() const { return seed_; }
  std::span<std::uint64_t const> path() const { return path_; }

  /// Uniform integer in [0, n).
  std::size_t uniform_index(std::size_t n);
  /// Standard normal deviate.
  double normal();
  double uniform();

  // UniformRandomBitGenerator
  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

private:
  std::uint64_t seed_;
  std::vector<std::uint64_t> path_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> gauss_{0.0, 1.0};
};

}  // namespace trb

#endif  // TRB_RANDOM_STREAM_HPP
