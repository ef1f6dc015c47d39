#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace steklov
{
/// Runs fn(i) for i in [0, n) on up to `jobs` threads (0 = hardware concurrency).
/// The first exception thrown by any task is rethrown after all threads join.
template < typename Fn >
void parallel_for(std::size_t n, unsigned jobs, Fn&& fn)
{
    if (jobs == 0)
        jobs = std::max(1u, std::thread::hardware_concurrency());
    jobs = static_cast< unsigned >(std::min< std::size_t >(jobs, n));
    if (jobs <= 1)
    {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::atomic< std::size_t > next{0};
    std::atomic< bool >        failed{false};
    std::vector< std::thread > pool;
    std::vector< std::exception_ptr > errors(jobs);
    for (unsigned t = 0; t < jobs; ++t)
        pool.emplace_back([&, t] {
            try
            {
                for (std::size_t i = next++; i < n && !failed; i = next++)
                    fn(i);
            }
            catch (...)
            {
                errors[t] = std::current_exception();
                failed    = true;
            }
        });
    for (auto& th : pool)
        th.join();
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
}

} // namespace steklov
