#pragma once

#include "sconv/rng.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sconv {

enum class Family { Normal, Rademacher, Uniform, StudentT, Pareto, Cauchy, PointMass };

std::string_view family_name(Family f);

/// A one-dimensional law from one of the built-in families, written as
/// location + scale * D for a standardized D:
///
///   Normal      D ~ N(0,1)
///   Rademacher  D uniform on {-1, +1}
///   Uniform     D ~ U[0,1]            (support [location, location + scale])
///   StudentT    D ~ t(shape)
///   Pareto      D with P(D > x) = x^-shape on [1, inf)
///   Cauchy      D standard Cauchy
///   PointMass   X = location
///
/// Continuous families may be truncated to [lo, hi]; sampling then stays an
/// inverse-CDF map of one uniform.
struct DistributionSpec {
    Family family = Family::Normal;
    double location = 0.0;
    double scale = 1.0;
    double shape = 0.0;
    std::optional<std::pair<double, double>> truncation;

    static DistributionSpec normal(double mean = 0.0, double sd = 1.0);
    static DistributionSpec rademacher(double location = 0.0, double scale = 1.0);
    static DistributionSpec uniform(double lo = 0.0, double width = 1.0);
    static DistributionSpec student_t(double dof, double location = 0.0, double scale = 1.0);
    static DistributionSpec pareto(double tail_index, double x_min = 1.0, double location = 0.0);
    static DistributionSpec cauchy(double location = 0.0, double scale = 1.0);
    static DistributionSpec point_mass(double value);

    DistributionSpec truncated(double lo, double hi) const;

    /// Throws PreconditionError when parameters are inconsistent.
    void validate() const;

    bool is_discrete() const noexcept { return family == Family::Rademacher || family == Family::PointMass; }
    bool is_degenerate() const noexcept;
    bool is_symmetric_about_zero() const noexcept;

    /// Largest alpha with E|X|^alpha < infinity (the bound itself excluded for
    /// heavy-tailed families); +inf when all moments exist.
    double moment_order_finite() const noexcept;

    std::optional<double> mean() const;
    std::optional<double> variance() const;
    /// Mean when it exists, otherwise the location of a symmetric family.
    std::optional<double> center() const;

    double cdf(double x) const;
    /// P(X > x)
    double sf(double x) const;
    /// P(X < x)
    double cdf_left(double x) const;
    /// P(lo < X <= hi), accurate for short intervals and far tails.
    double prob_between(double lo, double hi) const;
    /// P(x < X <= x + width), accurate for tiny widths.
    double prob_interval(double x, double width) const;
    /// Density of the continuous part; 0 for discrete families.
    double pdf(double x) const;
    double quantile(double u) const;
    double sample(RngStream& rng) const { return quantile(rng.next_uniform()); }

    /// E|X|^p about zero; +inf when it does not exist.
    double abs_moment(double p) const;
    /// ess sup |X|
    double ess_sup_abs() const;
    double support_min() const;
    double support_max() const;

    /// (min, max) of the density over [lo, hi]; continuous families only.
    std::pair<double, double> density_bounds(double lo, double hi) const;

    /// Atoms of a discrete family as (value, weight).
    std::vector<std::pair<double, double>> atoms() const;

    std::string label() const;

    friend bool operator==(const DistributionSpec&, const DistributionSpec&) = default;
};

/// Parses "normal", "normal(0,2)", "rademacher", "uniform(0,1)", "t(1.5)",
/// "pareto(2.5)", "cauchy", "point(3)", optionally suffixed with
/// "[lo,hi]" for truncation.
DistributionSpec parse_distribution(std::string_view text);

}  // namespace sconv
