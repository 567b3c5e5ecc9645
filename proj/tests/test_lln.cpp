#include "sconv/errors.hpp"
#include "sconv/kernels.hpp"
#include "sconv/lln.hpp"
#include "sconv/special.hpp"

#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <cstring>

using namespace sconv;

namespace {

McConfig mc(std::int64_t reps, std::uint64_t seed = 1, int jobs = 1) { return McConfig{reps, seed, 0, jobs}; }

// E|Z| for standard normal Z by direct quadrature of |x| phi(x).
double abs_normal_oracle() {
    auto f = [](double x) { return x * std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi); };
    return 2.0 * boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, 50.0, 15, 1e-13);
}

}  // namespace

TEST_CASE("point mass moments are exactly zero") {
    const auto m = SequenceModel::iid_mean(DistributionSpec::point_mass(4.0));
    const auto c = estimate_pth_moment_of_mean(m, 1.7, {1, 10, 100}, mc(50));
    for (std::size_t i = 0; i < c.grid.size(); ++i) {
        CHECK(c.estimates[i] == 0.0);
        CHECK(c.std_errors[i] == 0.0);
    }
}

TEST_CASE("second moment of the normal mean is 1/n") {
    const auto m = SequenceModel::iid_mean(DistributionSpec::normal());
    const auto c = estimate_pth_moment_of_mean(m, 2.0, {100}, mc(4000));
    CHECK(std::abs(c.estimates[0] - 0.01) <= 3.0 * c.std_errors[0]);
}

TEST_CASE("first absolute moment of the normal mean") {
    const auto m = SequenceModel::iid_mean(DistributionSpec::normal());
    const auto c = estimate_pth_moment_of_mean(m, 1.0, {10000}, mc(1000));
    const double exact = abs_normal_oracle() * 1e-2;
    CHECK(exact == doctest::Approx(std::sqrt(2.0 / kPi) * 1e-2).epsilon(1e-12));
    CHECK(std::abs(c.estimates[0] - exact) <= 3.0 * c.std_errors[0]);
}

TEST_CASE("moment curves scale between mean and sum") {
    const auto m = SequenceModel::iid_mean(DistributionSpec::normal());
    const double p = 2.5;
    const auto a = estimate_pth_moment_of_mean(m, p, {1, 8, 64}, mc(200, 9));
    const auto b = estimate_abs_moment_of_sum(m, p, {1, 8, 64}, mc(200, 9));
    for (std::size_t i = 0; i < a.grid.size(); ++i)
        CHECK(b.estimates[i] == doctest::Approx(a.estimates[i] * std::pow(double(a.grid[i]), p)).epsilon(1e-12));
}

TEST_CASE("heavy tails raise a moment warning") {
    const auto m = SequenceModel::iid_mean(DistributionSpec::cauchy());
    const auto c = estimate_pth_moment_of_mean(m, 1.0, {1, 10}, mc(20));
    CHECK(c.flags.has(Flag::MomentWarning));
}

TEST_CASE("strong Lp series of the normal mean") {
    CHECK(strong_lp_series_normal(1.0, 2.0, 1 << 20).verdict == SeriesVerdict::Divergent);
    CHECK(strong_lp_series_normal(1.0, 3.0, 1 << 20).verdict == SeriesVerdict::Convergent);
    const auto zero = strong_lp_series([](std::int64_t) { return 0.0; }, {}, 1 << 12);
    CHECK(zero.verdict == SeriesVerdict::Convergent);
    const auto d = strong_lp_series_normal(1.0, 3.0, 1 << 12);
    CHECK(d.final_partial_sum() ==
          doctest::Approx(normal_abs_moment(3.0) * generalized_harmonic(1 << 12, 1.5)).epsilon(1e-12));
}

TEST_CASE("empirical strong Lp series on an all-zero curve is degenerate") {
    const auto m = SequenceModel::iid_mean(DistributionSpec::point_mass(0.0));
    const auto d = strong_lp_series(estimate_pth_moment_of_mean(m, 2.0, geometric_grid(1024, 2.0), mc(10)));
    CHECK(d.verdict == SeriesVerdict::Convergent);
    CHECK(d.flags.has(Flag::Degenerate));
}

TEST_CASE("path series of a point mass vanishes") {
    const auto m = SequenceModel::iid_mean(DistributionSpec::point_mass(2.0));
    const auto t = strong_as_path_series(sample_path(m, 100, make_rng_stream(1, 0)), 2.0, 2.0);
    for (double v : t) CHECK(v == 0.0);
}

TEST_CASE("path series are nondecreasing") {
    const auto m = SequenceModel::iid_mean(DistributionSpec::normal());
    const auto t = strong_as_path_series(sample_path(m, 1000, make_rng_stream(1, 0)), 1.5, 0.0);
    for (std::size_t i = 1; i < t.size(); ++i) CHECK(t[i] >= t[i - 1]);
}

TEST_CASE("rademacher squared path totals average the harmonic number") {
    const std::int64_t N = 10000;
    const auto tot = path_totals_parallel(DistributionSpec::rademacher(), 0.0, 2.0, {N}, 2000, 3, 0, 2);
    double s = 0.0, sq = 0.0;
    for (std::int64_t r = 0; r < tot.reps; ++r) {
        s += tot.at(r, 0);
        sq += tot.at(r, 0) * tot.at(r, 0);
    }
    const double mean = s / tot.reps;
    const double se = std::sqrt((sq / tot.reps - mean * mean) / tot.reps);
    double h = 0.0;
    for (std::int64_t n = N; n >= 1; --n) h += 1.0 / double(n);
    CHECK(h == doctest::Approx(9.7876).epsilon(1e-4));
    CHECK(std::abs(mean - h) <= 3.0 * se);
}

TEST_CASE("path totals agree with the path series") {
    const auto law = DistributionSpec::normal();
    const auto tot = path_totals_serial(law, 0.0, 1.5, {10, 500}, 3, 4, 0);
    const auto m = SequenceModel::iid_mean(law);
    for (std::int64_t r = 0; r < 3; ++r) {
        const auto t = strong_as_path_series(sample_path(m, 500, make_rng_stream(4, r)), 1.5, 0.0);
        CHECK(tot.at(r, 0) == doctest::Approx(t[9]).epsilon(1e-12));
        CHECK(tot.at(r, 1) == doctest::Approx(t[499]).epsilon(1e-12));
    }
}

TEST_CASE("serial and parallel kernels are bitwise identical") {
    const auto law = DistributionSpec::student_t(3.0);
    const auto grid = geometric_grid(5000, 2.0);
    const auto a = centered_sums_serial(law, 0.0, grid, 64, 8, 5);
    for (int jobs : {1, 2, 3}) {
        const auto b = centered_sums_parallel(law, 0.0, grid, 64, 8, 5, jobs);
        REQUIRE(a.values.size() == b.values.size());
        CHECK(std::memcmp(a.values.data(), b.values.data(), a.values.size() * sizeof(double)) == 0);
    }
    const auto p = path_totals_serial(law, 0.0, 2.0, {100, 5000}, 16, 8, 5);
    const auto q = path_totals_parallel(law, 0.0, 2.0, {100, 5000}, 16, 8, 5, 3);
    CHECK(std::memcmp(p.values.data(), q.values.data(), p.values.size() * sizeof(double)) == 0);
}

TEST_CASE("baum-katz series") {
    const auto normal = SequenceModel::iid_mean(DistributionSpec::normal());
    const auto d = baum_katz_series(normal, 2.0, 1.0, 1 << 16, mc(100));
    CHECK(d.verdict == SeriesVerdict::Convergent);
    CHECK(d.source == TermSource::Analytic);
    // term n is 2(1 - Phi(sqrt n))
    for (const auto& pt : d.points)
        if (pt.n <= 64) CHECK(pt.term == doctest::Approx(2.0 * normal_sf(std::sqrt(double(pt.n)))).epsilon(1e-10));

    const auto cauchy = SequenceModel::iid_mean(DistributionSpec::cauchy());
    CHECK(baum_katz_series(cauchy, 2.0, 1.0, 1 << 16, mc(100)).verdict == SeriesVerdict::Divergent);

    const auto point = SequenceModel::iid_mean(DistributionSpec::point_mass(0.0));
    const auto z = baum_katz_series(point, 3.0, 0.5, 1 << 10, mc(10));
    CHECK(z.verdict == SeriesVerdict::Convergent);
    for (const auto& pt : z.points) CHECK(pt.term == 0.0);
}

TEST_CASE("chow complete moment series") {
    const auto normal = SequenceModel::iid_mean(DistributionSpec::normal());
    CHECK(chow_complete_moment_series(normal, 1.0, 1.0, 1.0, 1 << 16, mc(100)).verdict ==
          SeriesVerdict::Convergent);
    const auto point = SequenceModel::iid_mean(DistributionSpec::point_mass(0.0));
    CHECK(chow_complete_moment_series(point, 1.5, 1.0, 1.0, 1 << 10, mc(10)).verdict == SeriesVerdict::Convergent);
    CHECK_THROWS_AS(chow_complete_moment_series(normal, 0.5, 1.0, 1.0, 1 << 10, mc(10)), PreconditionError);
    CHECK_THROWS_AS(chow_complete_moment_series(normal, 1.0, 1.0, -1.0, 1 << 10, mc(10)), PreconditionError);
}

TEST_CASE("chow moment series for a t law with 1.5 degrees of freedom") {
    // E|X|^1.2 log+|X| is finite: the tail integrand decays like x^-1.3 log x
    const auto t = DistributionSpec::student_t(1.5);
    auto f = [&](double x) { return std::pow(x, 1.2) * std::log(x) * 2.0 * t.pdf(x); };
    const double head = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 1.0, 1e6, 15, 1e-10);
    CHECK(std::isfinite(head));
    const auto m = SequenceModel::iid_mean(t);
    const auto d = chow_moment_series(m, 1.2, 1 << 14, mc(400, 2));
    CHECK(d.verdict == SeriesVerdict::Convergent);
}

TEST_CASE("moment growth exponents") {
    const auto normal = SequenceModel::iid_mean(DistributionSpec::normal());
    // E S_n^4 = 3n^2 for normal summands; 3n^2 - 2n for rademacher ones
    const std::vector<std::int64_t> grid{100, 1000, 10000};
    std::vector<double> lx, ly;
    for (auto n : grid) {
        lx.push_back(std::log(double(n)));
        ly.push_back(std::log(3.0 * double(n) * double(n)));
    }
    CHECK(least_squares(lx, ly).slope == doctest::Approx(2.0));
    lx.clear();
    ly.clear();
    for (auto n : grid) {
        lx.push_back(std::log(double(n)));
        ly.push_back(std::log(3.0 * double(n) * double(n) - 2.0 * double(n)));
    }
    CHECK(std::abs(least_squares(lx, ly).slope - 2.0) < 0.01);
    const auto rad = SequenceModel::iid_mean(DistributionSpec::rademacher());
    CHECK(std::abs(bdg_slope_check(rad, 4.0, grid, mc(1000, 1)).exponent - 2.0) <= 0.1);
    const auto f4 = bdg_slope_check(normal, 4.0, grid, mc(1000, 1));
    CHECK(std::abs(f4.exponent - 2.0) <= 0.1);
    const auto f3 = bdg_slope_check(normal, 3.0, grid, mc(1000, 1));
    CHECK(std::abs(f3.exponent - 1.5) <= 0.1);

    const auto point = SequenceModel::iid_mean(DistributionSpec::point_mass(0.0));
    CHECK_THROWS(bdg_slope_check(point, 4.0, grid, mc(10)));
}

TEST_CASE("results depend only on the seed, not on the worker count") {
    const auto m = SequenceModel::iid_mean(DistributionSpec::uniform());
    const auto a = estimate_pth_moment_of_mean(m, 1.5, {3, 30, 300}, mc(100, 5, 1));
    const auto b = estimate_pth_moment_of_mean(m, 1.5, {3, 30, 300}, mc(100, 5, 3));
    CHECK(a.estimates == b.estimates);
    CHECK(a.std_errors == b.std_errors);
    const auto c = estimate_pth_moment_of_mean(m, 1.5, {3, 30, 300}, mc(100, 6, 1));
    CHECK(a.estimates != c.estimates);
}
