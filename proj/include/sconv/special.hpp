#pragma once

#include <cstdint>
#include <functional>
#include <span>

namespace sconv {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kInf = __builtin_huge_val();

double normal_pdf(double x);
double normal_cdf(double x);
/// Upper tail P(Z > x), accurate far into the tail.
double normal_sf(double x);
double normal_quantile(double u);

/// exp(x^2) * erfc(x), finite for large positive x.
double erfcx(double x);

/// E|Z|^p for standard normal Z.
double normal_abs_moment(double p);

/// E[(Y - b)^+] for Y ~ N(mean, sd^2).
double normal_partial_expectation(double mean, double sd, double b);

/// E[(|Y| - c)^+] for Y ~ N(0, sd^2), c >= 0.
double centered_normal_excess(double sd, double c);

/// sup_{u>0} u^m e^{-u^2/2} = (m/e)^{m/2}.
double gaussian_power_envelope(double m);

/// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double x) noexcept;
    double value() const noexcept { return sum_ + carry_; }

private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

double compensated_sum(std::span<const double> xs);

/// H_N^{(s)} = sum_{n<=N} n^{-s}, summed from the small terms up.
double generalized_harmonic(std::int64_t n, double s);

/// Adaptive Gauss-Kronrod integral of f over [a, b]; finite intervals are
/// mapped onto [0, 1] first.
double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-12,
                 unsigned depth = 15);

/// Two-sided Student-t quantile with df degrees of freedom.
double student_t_quantile(double level, double df);

}  // namespace sconv
