#pragma once

#include "sconv/distribution.hpp"

#include <cstdint>
#include <vector>

#include <omp.h>

namespace sconv {

/// Worker count used when a caller passes jobs <= 0.
int default_jobs();

/// Calls body(r) for r in [0, reps) and stores the results by replicate
/// index, so any reduction over the returned vector is independent of the
/// worker count. jobs == 1 runs the plain loop.
template <class T, class F>
std::vector<T> map_replicates(std::int64_t reps, int jobs, F&& body) {
    std::vector<T> out(static_cast<std::size_t>(reps));
    if (jobs <= 0) jobs = default_jobs();
    if (jobs == 1) {
        for (std::int64_t r = 0; r < reps; ++r) out[static_cast<std::size_t>(r)] = body(r);
        return out;
    }
#pragma omp parallel for schedule(dynamic, 4) num_threads(jobs)
    for (std::int64_t r = 0; r < reps; ++r) out[static_cast<std::size_t>(r)] = body(r);
    return out;
}

/// Centered partial sums S_n - n*mu of iid draws from `law`, recorded at the
/// grid points; row r (stream stream_base + r) holds one replicate.
struct SumMatrix {
    std::vector<std::int64_t> grid;
    std::int64_t reps = 0;
    std::vector<double> values;  // reps x grid.size(), row-major

    double at(std::int64_t r, std::size_t j) const { return values[static_cast<std::size_t>(r) * grid.size() + j]; }
};

SumMatrix centered_sums_serial(const DistributionSpec& law, double mu, const std::vector<std::int64_t>& grid,
                               std::int64_t reps, std::uint64_t seed, std::uint64_t stream_base);
SumMatrix centered_sums_parallel(const DistributionSpec& law, double mu, const std::vector<std::int64_t>& grid,
                                 std::int64_t reps, std::uint64_t seed, std::uint64_t stream_base, int jobs);

/// Running totals T_n = sum_{m<=n} |S_m/m - mu|^alpha at the checkpoints, one
/// row per replicate.
SumMatrix path_totals_serial(const DistributionSpec& law, double mu, double alpha,
                             const std::vector<std::int64_t>& checkpoints, std::int64_t reps, std::uint64_t seed,
                             std::uint64_t stream_base);
SumMatrix path_totals_parallel(const DistributionSpec& law, double mu, double alpha,
                               const std::vector<std::int64_t>& checkpoints, std::int64_t reps, std::uint64_t seed,
                               std::uint64_t stream_base, int jobs);

}  // namespace sconv
