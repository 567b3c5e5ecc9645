#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sconv {

enum class SeriesVerdict { Convergent, Divergent, Inconclusive };
enum class TermSource { Analytic, Empirical };

std::string_view to_string(SeriesVerdict v);
std::string_view to_string(TermSource s);

enum class Flag : std::uint32_t {
    Degenerate = 1u << 0,
    InsufficientData = 1u << 1,
    HarmonicRule = 1u << 2,
    FitDisagrees = 1u << 3,
    CertificateRejected = 1u << 4,
    InfiniteTerm = 1u << 5,
    NoiseFloor = 1u << 6,
    Interpolated = 1u << 7,
    MomentWarning = 1u << 8,
    LowCount = 1u << 9,
};

class FlagSet {
public:
    FlagSet() = default;
    FlagSet(Flag f) : bits_(static_cast<std::uint32_t>(f)) {}
    void set(Flag f) noexcept { bits_ |= static_cast<std::uint32_t>(f); }
    bool has(Flag f) const noexcept { return (bits_ & static_cast<std::uint32_t>(f)) != 0; }
    FlagSet& operator|=(FlagSet o) noexcept {
        bits_ |= o.bits_;
        return *this;
    }
    bool empty() const noexcept { return bits_ == 0; }
    std::uint32_t bits() const noexcept { return bits_; }
    /// "degenerate|noise-floor", or "" when empty.
    std::string str() const;
    std::vector<std::string> names() const;
    friend bool operator==(FlagSet, FlagSet) = default;

private:
    std::uint32_t bits_ = 0;
};

struct SlopeFit {
    double exponent = 0.0;    // fitted decay exponent of the terms
    double half_width = 0.0;  // 95% confidence half-width
    double residual = 0.0;    // residual norm of the log-log regression
    int points = 0;
};

/// A recognized comparison series, valid for n >= n0:
///   ExactPower:     a_n == coef * n^-power
///   UpperPower:     a_n <= coef * n^-power
///   LowerPower:     a_n >= coef * n^-power
///   UpperGeometric: a_n <= coef * power^n   (0 < power < 1)
///   FiniteSupport:  a_n == 0
struct Comparison {
    enum class Kind { ExactPower, UpperPower, LowerPower, UpperGeometric, FiniteSupport };
    Kind kind = Kind::UpperPower;
    double coef = 0.0;
    double power = 0.0;
    std::int64_t n0 = 1;

    static Comparison exact(double c, double q, std::int64_t n0 = 1) { return {Kind::ExactPower, c, q, n0}; }
    static Comparison upper(double c, double q, std::int64_t n0 = 1) { return {Kind::UpperPower, c, q, n0}; }
    static Comparison lower(double c, double q, std::int64_t n0 = 1) { return {Kind::LowerPower, c, q, n0}; }
    static Comparison geometric(double c, double r, std::int64_t n0 = 1) { return {Kind::UpperGeometric, c, r, n0}; }
    static Comparison finite(std::int64_t n0) { return {Kind::FiniteSupport, 0.0, 0.0, n0}; }

    /// Whether the comparison alone settles the series.
    std::optional<SeriesVerdict> decides() const;
    /// Checks the comparison against a computed term (relative slack 1e-9).
    bool admits(std::int64_t n, double term) const;
    std::string describe() const;
};

struct SeriesPoint {
    std::int64_t n;
    double term;
    double partial_sum;
    double std_err;
    FlagSet flags;
};

struct SeriesDiagnostic {
    TermSource source = TermSource::Analytic;
    std::vector<SeriesPoint> points;
    SeriesVerdict verdict = SeriesVerdict::Inconclusive;
    std::optional<SlopeFit> fit;
    std::string closed_form;  // recognized comparison, empty if none
    FlagSet flags;
    std::int64_t horizon = 0;

    double final_partial_sum() const { return points.empty() ? 0.0 : points.back().partial_sum; }
};

/// Geometric grid ceil(ratio^j) from 1 to horizon (both included), deduplicated.
std::vector<std::int64_t> geometric_grid(std::int64_t horizon, double ratio);

/// Sum of a_n over n in (n0, n1] when only a_{n0} and a_{n1} are known,
/// assuming a_n follows the power law through the two endpoints (linear when
/// either endpoint is zero). Exactly a1 when n1 == n0 + 1.
double interpolate_block(std::int64_t n0, double a0, std::int64_t n1, double a1);

/// Least-squares slope of y on x with its standard error.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_se = 0.0;
    double residual = 0.0;
};
LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y);

struct TailFitResult {
    std::optional<SlopeFit> fit;
    SeriesVerdict verdict = SeriesVerdict::Inconclusive;
    FlagSet flags;
};

/// Decay exponent of a nonnegative series from its block sums: blocks run
/// between consecutive grid points, and ln(block sum) is regressed on ln(n)
/// over the tail half of the positive blocks. Terms given as (n, a_n) on an
/// increasing grid; dense input (every n) uses exact dyadic blocks.
TailFitResult fit_tail_exponent(const std::vector<std::int64_t>& ns, const std::vector<double>& terms);

struct SeriesOptions {
    std::int64_t horizon = std::int64_t{1} << 20;
    /// Dense evaluation limit for cheap terms; beyond it, grid + interpolation.
    std::int64_t dense_limit = std::int64_t{1} << 20;
    /// Ratio of the evaluation grid for expensive terms.
    double eval_ratio = 1.189207115002721;  // 2^(1/4)
    /// Ratio of the reported points.
    double report_ratio = 2.0;
    bool expensive = false;
};

using TermFn = std::function<double(std::int64_t)>;

/// Analytic series: terms evaluated exactly (densely when cheap), partial
/// sums compensated, verdict from certificates first and the fit second.
SeriesDiagnostic analyze_analytic(const TermFn& term, const std::vector<Comparison>& certificates,
                                  const SeriesOptions& opt = {});

struct EmpiricalTerm {
    std::int64_t n;
    double value;
    double std_err;
    double events = -1.0;  // Monte Carlo event count, < 0 when not a count
};

/// Empirical series on a grid; partial sums by block interpolation.
SeriesDiagnostic analyze_empirical(const std::vector<EmpiricalTerm>& terms);

/// Combines verdicts: any Divergent wins, then Inconclusive, else Convergent.
SeriesVerdict worst_case(SeriesVerdict a, SeriesVerdict b);

}  // namespace sconv
