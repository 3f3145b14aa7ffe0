#include "trb/random_stream.hpp"

namespace trb
{
namespace
{

std::uint64_t splitmix64(std::uint64_t x)
{
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::mt19937_64 make_engine(std::uint64_t seed, std::vector<std::uint64_t> const& path)
{
  // Two independent lanes of the path hash feed the seed sequence.
  std::uint64_t a = splitmix64(seed);
  std::uint64_t b = splitmix64(seed ^ 0x5851f42d4c957f2dULL);
  for (std::uint64_t p : path)
  {
    a = splitmix64(a ^ splitmix64(p));
    b = splitmix64(b + splitmix64(~p));
  }
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32),
                    static_cast<std::uint32_t>(path.size())};
  return std::mt19937_64(seq);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed, std::vector<std::uint64_t> path)
    : seed_(seed), path_(std::move(path)), engine_(make_engine(seed_, path_))
{
}

RandomStream RandomStream::child(std::uint64_t index) const
{
  std::vector<std::uint64_t> p = path_;
  p.push_back(index);
  return RandomStream(seed_, std::move(p));
}

std::size_t RandomStream::uniform_index(std::size_t n)
{
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  return pick(engine_);
}

double RandomStream::normal()
{
  return gauss_(engine_);
}

double RandomStream::uniform()
{
  return std::generate_canonical<double, 53>(engine_);
}

}  // namespace trb
