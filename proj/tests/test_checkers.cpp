#include "sconv/checkers.hpp"
#include "sconv/errors.hpp"
#include "sconv/special.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace sconv;

namespace {

CheckOptions quick() {
    CheckOptions o;
    o.horizon = 1 << 16;
    return o;
}

SequenceModel normal_plus(ScaleSequence a) {
    return SequenceModel::deterministic(DistributionSpec::normal(), a);
}

}  // namespace

TEST_CASE("mode verdicts on the first two examples") {
    const auto e1 = SequenceModel::explicit_space(parse_example("exa-3.1"));
    CHECK(check_mode(e1, ConvergenceMode::s_lp(1)).verdict == Verdict::Holds);
    CHECK(check_mode(e1, ConvergenceMode::s_l_inf()).verdict == Verdict::Fails);
    const auto e2 = SequenceModel::explicit_space(parse_example("exa-3.2"));
    CHECK(check_mode(e2, ConvergenceMode::s_alpha_as(1)).verdict == Verdict::Holds);
    CHECK(check_mode(e2, ConvergenceMode::cc()).verdict == Verdict::Fails);
}

TEST_CASE("strong sup norm needs an analytic bound") {
    const auto m = SequenceModel::iid_mean(DistributionSpec::student_t(3));
    CHECK_THROWS_AS(check_mode(m, ConvergenceMode::s_l_inf(), quick()), UnsupportedQuery);
}

TEST_CASE("the definition chain holds on the analytic corpus") {
    // strong sup norm => strong Lp => complete => almost sure, wherever decided
    const SequenceModel models[] = {
        SequenceModel::explicit_space(parse_example("exa-3.1")),
        SequenceModel::explicit_space(parse_example("exa-3.2")),
        SequenceModel::explicit_space(parse_example("exa-3.3")),
        normal_plus(ScaleSequence::pow(1, 2)),
        normal_plus(ScaleSequence::pow(1, 1)),
        SequenceModel::perturbed(DistributionSpec::point_mass(1), ScaleSequence::pow(1, 2), DistributionSpec::uniform()),
    };
    const ConvergenceMode chain[] = {ConvergenceMode::s_l_inf(), ConvergenceMode::s_lp(1), ConvergenceMode::cc(),
                                     ConvergenceMode::as()};
    for (const auto& m : models) {
        for (std::size_t i = 0; i + 1 < std::size(chain); ++i) {
            const auto a = check_mode(m, chain[i], quick());
            if (a.verdict != Verdict::Holds) continue;
            const auto b = check_mode(m, chain[i + 1], quick());
            CAPTURE(m.id());
            CAPTURE(chain[i].id());
            CHECK(b.verdict != Verdict::Fails);
        }
    }
}

TEST_CASE("extraction solves n >= k^8 for a 1/(t sqrt n) tail") {
    const TailProbe probe = [](std::int64_t n, double t) { return std::min(1.0, 1.0 / (t * std::sqrt(double(n)))); };
    const auto idx = extract_strong_subsequence(probe, 6);
    std::int64_t prev = 0;
    for (int k = 1; k <= 6; ++k) {
        std::int64_t want = 1;
        for (int j = 0; j < 8; ++j) want *= k;
        want = std::max(want, prev + 1);
        CHECK(idx[k - 1] == want);
        prev = want;
    }
}

TEST_CASE("extraction on the second example gives squares") {
    const auto m = SequenceModel::explicit_space(parse_example("exa-3.2"));
    const auto idx = extract_strong_subsequence(model_probe(m, 1.0), 30);
    std::int64_t prev = 0;
    for (int k = 1; k <= 30; ++k) {
        const std::int64_t want = std::max<std::int64_t>(std::int64_t(k) * k, prev + 1);
        CHECK(idx[k - 1] == want);
        prev = want;
    }
}

TEST_CASE("extraction on a degenerate model takes every index") {
    const auto m = SequenceModel::iid_mean(DistributionSpec::point_mass(2.0));
    const auto idx = extract_strong_subsequence(model_probe(m, 1.0), 10);
    for (int k = 1; k <= 10; ++k) CHECK(idx[k - 1] == k);
}

TEST_CASE("extraction stalls under a probe that never drops") {
    // k = 1 qualifies since the bound is 1
    const TailProbe probe = [](std::int64_t, double) { return 1.0; };
    ExtractOptions o;
    o.cap = 1 << 20;
    try {
        extract_strong_subsequence(probe, 3, o);
        FAIL("expected a stall");
    } catch (const ExtractionStalled& e) {
        CHECK(e.stalled_at() == 2);
    }
}

TEST_CASE("subsequence of the second example settles") {
    const auto m = SequenceModel::explicit_space(parse_example("exa-3.2"));
    const auto idx = extract_strong_subsequence(model_probe(m, 1.0), 30);
    CHECK(subsequence_cauchy_rate(m, idx, 1.0, 200, 5) >= 0.95);
}

TEST_CASE("first weak mode on iid copies and small shifts") {
    const auto e4 = SequenceModel::explicit_space(parse_example("exa-3.4"));
    const auto fam4 = TestFunctionFamily::for_limit(limit_law(e4));
    const auto s4 = s1d_series(e4, fam4, 1 << 12);
    CHECK(s4.verdict == SeriesVerdict::Convergent);
    for (const auto& mem : s4.members)
        for (const auto& p : mem.series.points) CHECK(p.term == 0.0);

    // |E f(X + 1/n^2) - E f(X)| <= Lip(f) / n^2
    const auto m = normal_plus(ScaleSequence::pow(1, 2));
    const auto fam = TestFunctionFamily::for_limit(limit_law(m));
    const auto s = s1d_series(m, fam, 1 << 12);
    CHECK(s.verdict == SeriesVerdict::Convergent);
    const auto members = fam.members();
    REQUIRE(members.size() == s.members.size());
    for (std::size_t i = 0; i < members.size(); ++i)
        for (const auto& p : s.members[i].series.points)
            CHECK(p.term <= 1.0 / members[i].second / (double(p.n) * p.n) * (1 + 1e-9));
}

TEST_CASE("first weak mode fails for 1/sqrt(n) shifts") {
    const auto m = normal_plus(ScaleSequence::pow(1, 0.5));
    const auto limit = limit_law(m);
    // scale-1 ramp centered at 0: d/dc E f(Z + c) at c = 0 equals P(|Z| < 1)
    const double slope = 1.0 - 2.0 * normal_sf(1.0);
    const double t = ramp_gap(marginal_law(m, 10000), limit, 0.0, 1.0);
    CHECK(t == doctest::Approx(slope * 0.01).epsilon(0.01));
    TestFunctionFamily fam;
    fam.centers = {0.0};
    fam.scales = {1.0};
    CHECK(s1d_series(m, fam, 1 << 16).verdict == SeriesVerdict::Divergent);
}

TEST_CASE("enlarging the test family never turns a failure into success") {
    const SequenceModel models[] = {normal_plus(ScaleSequence::pow(1, 1)), normal_plus(ScaleSequence::pow(1, 2)),
                                    SequenceModel::explicit_space(parse_example("exa-3.3")),
                                    SequenceModel::explicit_space(parse_example("exa-3.2"))};
    for (const auto& m : models) {
        const auto full = TestFunctionFamily::for_limit(limit_law(m));
        TestFunctionFamily part = full;
        part.centers.resize(std::max<std::size_t>(1, full.centers.size() / 2));
        part.scales = {full.scales.front()};
        const auto small = s1d_series(m, part, 1 << 14).verdict;
        const auto big = s1d_series(m, full, 1 << 14).verdict;
        CAPTURE(m.id());
        if (small == SeriesVerdict::Divergent) CHECK(big == SeriesVerdict::Divergent);
        if (big == SeriesVerdict::Convergent) CHECK(small == SeriesVerdict::Convergent);
    }
}

TEST_CASE("second weak mode on deterministic sequences") {
    const auto c = SequenceModel::deterministic(DistributionSpec::point_mass(2.0), ScaleSequence::zero());
    const auto s0 = s2d_series(c, {1.0, 2.5, 3.0}, 1 << 10);
    CHECK(s0.verdict == SeriesVerdict::Convergent);
    for (const auto& mem : s0.members)
        for (const auto& p : mem.series.points) CHECK(p.term == 0.0);

    const auto m = SequenceModel::deterministic(DistributionSpec::point_mass(2.0), ScaleSequence::pow(1, 1));
    const auto s = s2d_series(m, {2.25}, 1 << 12);
    CHECK(s.verdict == SeriesVerdict::Convergent);
    // F_n(2.25) = 1 once 1/n <= 0.25
    for (const auto& p : s.members[0].series.points) CHECK(p.term == (p.n < 4 ? 1.0 : 0.0));

    CHECK_THROWS_AS(s2d_series(m, {2.0}, 1 << 10), PreconditionError);
}

TEST_CASE("second weak mode fails for cauchy noise over sqrt n") {
    const double C = 1.0;
    const auto m =
        SequenceModel::perturbed(DistributionSpec::point_mass(C), ScaleSequence::pow(1, 0.5), DistributionSpec::cauchy());
    const double x = 1.5;
    for (std::int64_t n : {1, 10, 1000, 100000}) {
        // F_n(x) = 1/2 + arctan((x - C) sqrt n)/pi, F(x) = 1
        const double oracle = 0.5 - std::atan((x - C) * std::sqrt(double(n))) / kPi;
        CHECK(std::abs(cdf_gap(marginal_law(m, n), limit_law(m), x)) == doctest::Approx(oracle).epsilon(1e-9));
    }
    CHECK(s2d_series(m, {x}, 1 << 16).verdict == SeriesVerdict::Divergent);
    CHECK(check_mode(m, ConvergenceMode::s2_d(), quick()).verdict == Verdict::Fails);
}

TEST_CASE("default evaluation points avoid atoms") {
    const auto pts = default_eval_points(Law::point(3.0));
    CHECK(std::find(pts.begin(), pts.end(), 3.0) == pts.end());
    CHECK(pts.size() == 8);
    CHECK(default_eval_points(Law::of(DistributionSpec::normal())).size() == 21);
}

TEST_CASE("rate condition series") {
    const auto cubic = normal_plus(ScaleSequence::pow(1, 3));
    const auto a = prop37_condition2_series(cubic, 1.0, 1.0, 1 << 14);
    CHECK(a.verdict == SeriesVerdict::Convergent);
    // n (ln n)^2 / n^3 < 1 from n = 2 on
    for (const auto& p : a.points)
        if (p.n >= 2) CHECK(p.term == 0.0);

    const auto slow = normal_plus(ScaleSequence::inv_log(1.0));
    CHECK(prop37_condition2_series(slow, 1.0, 0.5, 1 << 14).verdict == SeriesVerdict::Divergent);

    const auto unif =
        SequenceModel::perturbed(DistributionSpec::normal(), ScaleSequence::pow(1, 2), DistributionSpec::uniform());
    const auto u = prop37_condition2_series(unif, 1.0, 1.0, 1 << 14);
    CHECK(u.verdict == SeriesVerdict::Convergent);
    // oracle: the smallest n >= 3 with n / (ln n)^2 >= 1 ends the nonzero terms
    std::int64_t stop = 3;
    while (double(stop) / std::pow(std::log(double(stop)), 2) < 1.0) ++stop;
    for (const auto& p : u.points)
        if (p.n >= std::max<std::int64_t>(stop, 13)) CHECK(p.term == 0.0);

    CHECK_THROWS_AS(prop37_condition2_series(unif, 0.0, 1.0, 10), PreconditionError);
    CHECK_THROWS_AS(prop37_condition2_series(unif, 1.0, -1.0, 10), PreconditionError);
}

TEST_CASE("monte carlo route for strong almost sure convergence") {
    const auto m = SequenceModel::iid_mean(DistributionSpec::rademacher());
    CheckOptions o = quick();
    o.mc = McConfig{100, 3, 0, 1};
    o.mc_horizon = 1 << 14;
    const auto v = check_mode(m, ConvergenceMode::s_alpha_as(4), o);
    CHECK(v.method == Method::MonteCarlo);
    CHECK(v.verdict == Verdict::Holds);
}
