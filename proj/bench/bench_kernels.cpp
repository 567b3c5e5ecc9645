// Serial reference kernels against their OpenMP versions: wall time and
// bitwise agreement of the outputs.
#include "sconv/kernels.hpp"
#include "sconv/series.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <cstring>

namespace {

template <class F>
double seconds(F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool same_bits(const sconv::SumMatrix& a, const sconv::SumMatrix& b) {
    return a.values.size() == b.values.size() &&
           std::memcmp(a.values.data(), b.values.data(), a.values.size() * sizeof(double)) == 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Serial vs parallel Monte Carlo kernels"};
    std::int64_t reps = 2000, horizon = 100000;
    int jobs = sconv::default_jobs();
    app.add_option("--reps", reps)->capture_default_str();
    app.add_option("--horizon", horizon)->capture_default_str();
    app.add_option("--jobs", jobs)->capture_default_str();
    CLI11_PARSE(app, argc, argv);

    const auto law = sconv::DistributionSpec::rademacher();
    const auto grid = sconv::geometric_grid(horizon, 2.0);
    const std::vector<std::int64_t> checkpoints{horizon / 10, horizon};
    bool ok = true;

    sconv::SumMatrix s1, s2;
    const double ts1 = seconds([&] { s1 = sconv::centered_sums_serial(law, 0.0, grid, reps, 7, 0); });
    const double ts2 = seconds([&] { s2 = sconv::centered_sums_parallel(law, 0.0, grid, reps, 7, 0, jobs); });
    ok &= same_bits(s1, s2);
    std::printf("centered_sums  reps=%lld N=%lld  serial %.3fs  parallel(%d) %.3fs  speedup %.2fx  %s\n",
                static_cast<long long>(reps), static_cast<long long>(horizon), ts1, jobs, ts2, ts1 / ts2,
                same_bits(s1, s2) ? "identical" : "MISMATCH");

    sconv::SumMatrix p1, p2;
    const double tp1 = seconds([&] { p1 = sconv::path_totals_serial(law, 0.0, 2.0, checkpoints, reps, 7, 0); });
    const double tp2 =
        seconds([&] { p2 = sconv::path_totals_parallel(law, 0.0, 2.0, checkpoints, reps, 7, 0, jobs); });
    ok &= same_bits(p1, p2);
    std::printf("path_totals    reps=%lld N=%lld  serial %.3fs  parallel(%d) %.3fs  speedup %.2fx  %s\n",
                static_cast<long long>(reps), static_cast<long long>(horizon), tp1, jobs, tp2, tp1 / tp2,
                same_bits(p1, p2) ? "identical" : "MISMATCH");
    return ok ? 0 : 1;
}
