#pragma once

#include <atomic>
#include <cmath>
#include <cstddef>
#include <exception>
#include <span>
#include <vector>

#include <omp.h>

namespace smt {

/// Pool size for a `threads` request; 0 means the OpenMP default.
inline int resolve_threads(int threads)
{
    return threads > 0 ? threads : omp_get_max_threads();
}

/// Evaluates fn(r) for r in [0, reps) on an OpenMP team and returns the results
/// indexed by replicate. Each replicate must derive its randomness from r alone,
/// which makes the output independent of the team size and the schedule.
/// The first exception thrown by any replicate is rethrown on the caller.
template <class T, class Fn>
std::vector<T> run_replicates(std::size_t reps, int threads, Fn&& fn)
{
    std::vector<T> out(reps);
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    const auto total = static_cast<long long>(reps);
#pragma omp parallel for schedule(dynamic, 1) num_threads(resolve_threads(threads))
    for (long long r = 0; r < total; ++r) {
        if (failed.load(std::memory_order_relaxed)) {
            continue;
        }
        try {
            out[static_cast<std::size_t>(r)] = fn(static_cast<std::size_t>(r));
        } catch (...) {
#pragma omp critical(smt_replicate_failure)
            if (!failure) {
                failure = std::current_exception();
            }
            failed.store(true, std::memory_order_relaxed);
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return out;
}

/// Pairwise (cascade) summation; the association order depends only on the
/// length, so results do not depend on how the values were produced.
inline double pairwise_sum(std::span<const double> v)
{
    if (v.size() <= 8) {
        double s = 0.0;
        for (double x : v) {
            s += x;
        }
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

/// Mean and standard error (unbiased sample SD / sqrt(count)) with pairwise sums.
struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
};

inline MeanSe mean_and_se(std::span<const double> v)
{
    MeanSe out;
    if (v.empty()) {
        return out;
    }
    const double n = static_cast<double>(v.size());
    out.mean = pairwise_sum(v) / n;
    if (v.size() < 2) {
        return out;
    }
    std::vector<double> sq(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double d = v[i] - out.mean;
        sq[i] = d * d;
    }
    out.se = std::sqrt(pairwise_sum(sq) / (n - 1.0) / n);
    return out;
}

} // namespace smt
