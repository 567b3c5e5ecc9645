#include "sconv/errors.hpp"
#include "sconv/explicit_space.hpp"
#include "sconv/special.hpp"

#include <doctest.h>

#include <cmath>

using namespace sconv;

TEST_CASE("pointwise values") {
    const auto e1 = parse_example("exa-3.1");
    CHECK(eval_example(e1, 3, 0.05) == 1.0);
    CHECK(eval_example(e1, 3, 0.2) == 0.0);
    CHECK(eval_example(parse_example("exa-3.3", 2.0), 4, 0.5) == doctest::Approx(0.5));
    CHECK_THROWS_AS(eval_example(e1, 3, 0.0), DomainError);
    CHECK_THROWS_AS(eval_example(e1, 3, 1.0), DomainError);
    CHECK_THROWS_AS(eval_example(parse_example("exa-3.4"), 3, 0.5), UnsupportedQuery);
}

TEST_CASE("series terms") {
    const auto e1 = parse_example("exa-3.1");
    CHECK(example_series_term(e1, SeriesQuantity::pth_moment(5), 10) == doctest::Approx(0.01));
    CHECK(example_series_term(e1, SeriesQuantity::sup_norm(), 7) == 1.0);
    CHECK(example_series_term(parse_example("exa-3.3", 1.0), SeriesQuantity::alpha_path_term(1.0, 0.9), 5) ==
          doctest::Approx(0.2));
    CHECK(example_series_term(parse_example("exa-3.2"), SeriesQuantity::tail_prob(0.5), 8) == doctest::Approx(0.125));
}

TEST_CASE("third example tail switches at its threshold") {
    const auto e3 = parse_example("exa-3.3", 2.0);
    const double eps = 0.1;
    const auto n0 = exa33_threshold(2.0, eps);
    CHECK(std::pow(double(n0), -0.5) < eps);
    CHECK(std::pow(double(n0 - 1), -0.5) >= eps);
    CHECK(example_series_term(e3, SeriesQuantity::tail_prob(eps), n0 - 1) == 1.0);
    CHECK(example_series_term(e3, SeriesQuantity::tail_prob(eps), n0) ==
          doctest::Approx(1.0 / (double(n0) * n0)));
}

TEST_CASE("first example moment partial sums are generalized harmonic numbers") {
    const auto e1 = parse_example("exa-3.1");
    for (double p : {0.5, 1.0, 2.0, 7.0}) {
        double s = 0.0;
        for (int n = 1; n <= 2000; ++n) {
            s += example_series_term(e1, SeriesQuantity::pth_moment(p), n);
            REQUIRE(s <= kPi * kPi / 6.0);
        }
        double oracle = 0.0;
        for (int n = 2000; n >= 1; --n) oracle += 1.0 / (double(n) * n);
        CHECK(s == doctest::Approx(oracle).epsilon(1e-13));
    }
}

TEST_CASE("terms agree with Monte Carlo over omega") {
    auto rng = make_rng_stream(77, 0);
    constexpr int samples = 100000;
    const ExampleSpec specs[] = {parse_example("exa-3.1"), parse_example("exa-3.2"), parse_example("exa-3.3", 1.5)};
    const SeriesQuantity qs[] = {SeriesQuantity::pth_moment(1), SeriesQuantity::pth_moment(2.5),
                                 SeriesQuantity::tail_prob(0.4)};
    for (const auto& e : specs) {
        for (const auto& q : qs) {
            for (std::int64_t n : {1, 2, 3, 5}) {
                double sum = 0.0, sq = 0.0;
                for (int i = 0; i < samples; ++i) {
                    const double x = std::abs(eval_example(e, n, rng.next_uniform()));
                    const double v = q.kind == SeriesQuantity::Kind::TailProb ? (x >= q.epsilon ? 1.0 : 0.0)
                                                                               : std::pow(x, q.order);
                    sum += v;
                    sq += v * v;
                }
                const double mean = sum / samples;
                const double se = std::sqrt(std::max(sq / samples - mean * mean, 0.0) / samples);
                const double exact = example_series_term(e, q, n);
                CAPTURE(e.id());
                CAPTURE(n);
                CHECK(std::abs(mean - exact) <= 3.0 * se + 1e-12);
            }
        }
    }
}

TEST_CASE("certificates admit the exact terms") {
    const ExampleSpec specs[] = {parse_example("exa-3.1"), parse_example("exa-3.2"), parse_example("exa-3.3", 2.0)};
    const SeriesQuantity qs[] = {SeriesQuantity::pth_moment(2), SeriesQuantity::sup_norm(),
                                 SeriesQuantity::tail_prob(0.5)};
    for (const auto& e : specs)
        for (const auto& q : qs)
            for (const auto& c : example_certificates(e, q))
                for (std::int64_t n = 1; n <= 5000; ++n) REQUIRE(c.admits(n, example_series_term(e, q, n)));
}

TEST_CASE("expected verdicts carry the stated claims") {
    auto has = [](const ExampleSpec& e, ConvergenceMode m, Expectation x) {
        for (const auto& v : example_expected_verdicts(e))
            if (v.mode == m && v.verdict == x) return !v.citation.empty();
        return false;
    };
    CHECK(has(parse_example("exa-3.1"), ConvergenceMode::s_lp(1), Expectation::Holds));
    CHECK(has(parse_example("exa-3.3"), ConvergenceMode::s_alpha_as(1), Expectation::Fails));
    CHECK(has(parse_example("exa-3.4"), ConvergenceMode::in_prob(), Expectation::Fails));
    std::size_t total = 0;
    for (const char* id : {"exa-3.1", "exa-3.2", "exa-3.3", "exa-3.4"})
        total += example_expected_verdicts(parse_example(id)).size();
    CHECK(total == 10);
}

TEST_CASE("indicator cutoff") {
    CHECK(indicator_cutoff(0.3, 1.0) == 4);
    CHECK(indicator_cutoff(0.05, 2.0) == 5);
}
