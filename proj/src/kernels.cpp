#include "sconv/kernels.hpp"

#include "sconv/errors.hpp"
#include "sconv/rng.hpp"

#include <cmath>

namespace sconv {

int default_jobs() { return omp_get_max_threads(); }

namespace {

void check_grid(const std::vector<std::int64_t>& grid) {
    if (grid.empty()) throw PreconditionError("grid must not be empty");
    if (grid.front() < 1) throw PreconditionError("grid points must be >= 1");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (grid[i] <= grid[i - 1]) throw PreconditionError("grid must be strictly increasing");
}

void sums_row(const DistributionSpec& law, double mu, const std::vector<std::int64_t>& grid, std::uint64_t seed,
              std::uint64_t stream, double* row) {
    RngStream rng(seed, stream);
    double s = 0.0;
    std::int64_t n = 0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        for (; n < grid[j]; ++n) s += law.sample(rng) - mu;
        row[j] = s;
    }
}

void totals_row(const DistributionSpec& law, double mu, double alpha, const std::vector<std::int64_t>& checkpoints,
                std::uint64_t seed, std::uint64_t stream, double* row) {
    RngStream rng(seed, stream);
    double s = 0.0;
    double t = 0.0;
    std::int64_t n = 0;
    const bool square = alpha == 2.0;
    for (std::size_t j = 0; j < checkpoints.size(); ++j) {
        for (; n < checkpoints[j];) {
            s += law.sample(rng) - mu;
            ++n;
            const double d = std::abs(s / static_cast<double>(n));
            t += square ? d * d : std::pow(d, alpha);
        }
        row[j] = t;
    }
}

SumMatrix make(const std::vector<std::int64_t>& grid, std::int64_t reps) {
    check_grid(grid);
    if (reps < 1) throw PreconditionError("reps must be >= 1");
    SumMatrix m;
    m.grid = grid;
    m.reps = reps;
    m.values.assign(static_cast<std::size_t>(reps) * grid.size(), 0.0);
    return m;
}

}  // namespace

SumMatrix centered_sums_serial(const DistributionSpec& law, double mu, const std::vector<std::int64_t>& grid,
                               std::int64_t reps, std::uint64_t seed, std::uint64_t stream_base) {
    SumMatrix m = make(grid, reps);
    for (std::int64_t r = 0; r < reps; ++r)
        sums_row(law, mu, grid, seed, stream_base + static_cast<std::uint64_t>(r),
                 m.values.data() + static_cast<std::size_t>(r) * grid.size());
    return m;
}

SumMatrix centered_sums_parallel(const DistributionSpec& law, double mu, const std::vector<std::int64_t>& grid,
                                 std::int64_t reps, std::uint64_t seed, std::uint64_t stream_base, int jobs) {
    SumMatrix m = make(grid, reps);
    if (jobs <= 0) jobs = default_jobs();
    double* data = m.values.data();
    const std::size_t width = grid.size();
#pragma omp parallel for schedule(dynamic, 4) num_threads(jobs)
    for (std::int64_t r = 0; r < reps; ++r)
        sums_row(law, mu, grid, seed, stream_base + static_cast<std::uint64_t>(r), data + static_cast<std::size_t>(r) * width);
    return m;
}

SumMatrix path_totals_serial(const DistributionSpec& law, double mu, double alpha,
                             const std::vector<std::int64_t>& checkpoints, std::int64_t reps, std::uint64_t seed,
                             std::uint64_t stream_base) {
    SumMatrix m = make(checkpoints, reps);
    for (std::int64_t r = 0; r < reps; ++r)
        totals_row(law, mu, alpha, checkpoints, seed, stream_base + static_cast<std::uint64_t>(r),
                   m.values.data() + static_cast<std::size_t>(r) * checkpoints.size());
    return m;
}

SumMatrix path_totals_parallel(const DistributionSpec& law, double mu, double alpha,
                               const std::vector<std::int64_t>& checkpoints, std::int64_t reps, std::uint64_t seed,
                               std::uint64_t stream_base, int jobs) {
    SumMatrix m = make(checkpoints, reps);
    if (jobs <= 0) jobs = default_jobs();
    double* data = m.values.data();
    const std::size_t width = checkpoints.size();
#pragma omp parallel for schedule(dynamic, 4) num_threads(jobs)
    for (std::int64_t r = 0; r < reps; ++r)
        totals_row(law, mu, alpha, checkpoints, seed, stream_base + static_cast<std::uint64_t>(r),
                   data + static_cast<std::size_t>(r) * width);
    return m;
}

}  // namespace sconv
