// parallel.hpp

#ifndef TRB_PARALLEL_HPP
#define TRB_PARALLEL_HPP

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace trb
{

/// Run body(i) for i in [0, count) on up to `threads` workers.
///
/// Indices are dealt out in contiguous blocks; body must write only to
/// slot i of its outputs, which makes results independent of `threads`.
/// The first exception thrown by any body is rethrown after all joins.
template <class Body>
void parallel_for(std::size_t count, unsigned threads, Body&& body)
{
  unsigned const workers =
      static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), std::max<std::size_t>(count, 1)));
  if (workers <= 1)
  {
    for (std::size_t i = 0; i < count; ++i)
      body(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex guard;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned t = 0; t < workers; ++t)
  {
    std::size_t const begin = count * t / workers;
    std::size_t const end = count * (t + 1) / workers;
    pool.emplace_back([&, begin, end] {
      try
      {
        for (std::size_t i = begin; i < end; ++i)
          body(i);
      }
      catch (...)
      {
        std::lock_guard lock(guard);
        if (!failure)
          failure = std::current_exception();
      }
    });
  }
  for (auto& th : pool)
    th.join();
  if (failure)
    std::rethrow_exception(failure);
}

}  // namespace trb

#endif  // TRB_PARALLEL_HPP
