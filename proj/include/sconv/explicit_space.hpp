#pragma once

#include "sconv/distribution.hpp"
#include "sconv/mode.hpp"
#include "sconv/series.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sconv {

enum class ExampleName { Exa31, Exa32, Exa33, Exa34 };

/// One of the four counterexamples. `alpha` is the example's order
/// (the p of the first, the alpha of the second and third); `iid` is the law
/// of the fourth.
struct ExampleSpec {
    ExampleName name = ExampleName::Exa31;
    double alpha = 1.0;
    DistributionSpec iid = DistributionSpec::normal();

    void validate() const;
    /// "exa-3.1", ...
    std::string id() const;
    friend bool operator==(const ExampleSpec&, const ExampleSpec&) = default;
};

ExampleSpec parse_example(std::string_view name, double alpha = 1.0);

/// X_n(omega) on Omega = (0,1). Throws DomainError for omega outside (0,1) and
/// UnsupportedQuery for the iid example.
double eval_example(const ExampleSpec& spec, std::int64_t n, double omega);

struct SeriesQuantity {
    enum class Kind { PthMoment, SupNorm, TailProb, AlphaPathTerm };
    Kind kind = Kind::PthMoment;
    double order = 1.0;   // p for moments, alpha for path terms
    double epsilon = 1.0; // tail threshold
    double omega = 0.5;   // path terms only

    static SeriesQuantity pth_moment(double p) { return {Kind::PthMoment, p, 1.0, 0.5}; }
    static SeriesQuantity sup_norm() { return {Kind::SupNorm, 1.0, 1.0, 0.5}; }
    static SeriesQuantity tail_prob(double eps) { return {Kind::TailProb, 1.0, eps, 0.5}; }
    static SeriesQuantity alpha_path_term(double alpha, double omega) { return {Kind::AlphaPathTerm, alpha, 1.0, omega}; }
};

/// Exact n-th term of E|X_n|^p, ||X_n||_inf, P(|X_n| >= eps) or |X_n(omega)|^alpha
/// (the limit is 0 for the first three examples; X_n - X for the iid one).
double example_series_term(const ExampleSpec& spec, const SeriesQuantity& q, std::int64_t n);

/// Closed-form comparisons for the same series.
std::vector<Comparison> example_certificates(const ExampleSpec& spec, const SeriesQuantity& q);

/// Smallest n with n^(-1/alpha) < eps.
std::int64_t exa33_threshold(double alpha, double eps);

/// Smallest n >= 1 with omega >= n^-power (the index after which the
/// indicator branches of the first three examples vanish).
std::int64_t indicator_cutoff(double omega, double power);

enum class Expectation { Holds, Fails };

struct ExpectedVerdict {
    ConvergenceMode mode;
    Expectation verdict;
    std::string citation;
};

std::vector<ExpectedVerdict> example_expected_verdicts(const ExampleSpec& spec);

}  // namespace sconv
