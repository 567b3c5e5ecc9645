#pragma once

#include "sconv/distribution.hpp"

#include <vector>

namespace sconv {

/// A finite mixture of atoms and affine images shift + scale * D of
/// continuous built-in laws. Closed under affine maps and mixing, which is
/// all the marginal-law algebra in this library needs.
class Law {
public:
    struct Atom {
        double value;
        double weight;
    };
    struct Piece {
        double weight;
        double shift;
        double scale;  // nonzero, may be negative
        DistributionSpec base;
    };

    Law() = default;
    static Law of(const DistributionSpec& d);
    static Law point(double value);
    static Law mixture(const std::vector<std::pair<double, Law>>& parts);

    /// Law of a + b * X.
    Law affine(double a, double b) const;

    const std::vector<Atom>& atoms() const noexcept { return atoms_; }
    const std::vector<Piece>& pieces() const noexcept { return pieces_; }
    bool is_point() const noexcept { return pieces_.empty() && atoms_.size() == 1; }
    bool has_atoms() const noexcept { return !atoms_.empty(); }
    bool is_continuous() const noexcept { return atoms_.empty(); }

    double cdf(double x) const;
    double cdf_left(double x) const;
    double sf(double x) const;
    double quantile(double u) const;
    double support_min() const;
    double support_max() const;
    double ess_sup_abs() const;
    /// E f(X) for f(x) = clamp((x - center)/width, -1, 1).
    double ramp_expectation(double center, double width) const;
    /// sup of the density of the continuous part over [lo, hi].
    double density_max(double lo, double hi) const;
    bool is_bounded_density() const;

    std::string label() const;

private:
    std::vector<Atom> atoms_;
    std::vector<Piece> pieces_;
};

/// F_A(x) - F_B(x), computed without cancellation when A and B are built
/// from the same pieces with shifted or rescaled parameters.
double cdf_gap(const Law& a, const Law& b, double x);

/// E f(A) - E f(B) for the clamped ramp with the given center and width.
double ramp_gap(const Law& a, const Law& b, double center, double width);

inline double ramp(double x, double center, double width) {
    const double t = (x - center) / width;
    return t < -1.0 ? -1.0 : (t > 1.0 ? 1.0 : t);
}

}  // namespace sconv
