#include "sconv/special.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/erf.hpp>

#include <cmath>

namespace sconv {

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi); }

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_sf(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

double normal_quantile(double u) { return -std::sqrt(2.0) * boost::math::erfc_inv(2.0 * u); }

double erfcx(double x) {
    if (x < 25.0) return std::exp(x * x) * std::erfc(x);
    // Asymptotic series; at x >= 25 the fifth term is below 1e-16 relative.
    const double inv2 = 1.0 / (2.0 * x * x);
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k <= 6; ++k) {
        term *= -(2.0 * k - 1.0) * inv2;
        sum += term;
    }
    return sum / (x * std::sqrt(kPi));
}

double normal_abs_moment(double p) {
    return std::exp(0.5 * p * std::log(2.0) + std::lgamma(0.5 * (p + 1.0)) - 0.5 * std::log(kPi));
}

double normal_partial_expectation(double mean, double sd, double b) {
    if (sd <= 0.0) return std::max(mean - b, 0.0);
    const double z = (mean - b) / sd;
    if (z > -8.0) return (mean - b) * normal_cdf(z) + sd * normal_pdf(z);
    // sd * [phi(z) + z Phi(z)] with Phi(z) = phi(z) * erfcx(-z/sqrt2) * sqrt(pi/2)
    const double u = -z;
    const double mills = erfcx(u / std::sqrt(2.0)) * std::sqrt(kPi / 2.0);
    return sd * normal_pdf(u) * (1.0 - u * mills);
}

double centered_normal_excess(double sd, double c) {
    if (sd <= 0.0) return 0.0;
    const double u = c / sd;
    // 2 sd [phi(u) - u Q(u)], Q(u) = phi(u) * sqrt(pi/2) * erfcx(u/sqrt2)
    const double mills = erfcx(u / std::sqrt(2.0)) * std::sqrt(kPi / 2.0);
    return 2.0 * sd * normal_pdf(u) * (1.0 - u * mills);
}

double gaussian_power_envelope(double m) {
    if (m <= 0.0) return 1.0;
    return std::pow(m / std::exp(1.0), 0.5 * m);
}

void CompensatedSum::add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
        carry_ += (sum_ - t) + x;
    else
        carry_ += (x - t) + sum_;
    sum_ = t;
}

double compensated_sum(std::span<const double> xs) {
    CompensatedSum acc;
    for (double x : xs) acc.add(x);
    return acc.value();
}

double generalized_harmonic(std::int64_t n, double s) {
    CompensatedSum acc;
    for (std::int64_t k = n; k >= 1; --k) acc.add(std::pow(static_cast<double>(k), -s));
    return acc.value();
}

double student_t_quantile(double level, double df) {
    boost::math::students_t_distribution<double> dist(df);
    return boost::math::quantile(dist, level);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol, unsigned depth) {
    using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
    if (!(b > a)) return 0.0;
    if (!std::isfinite(a) || !std::isfinite(b)) return GK::integrate(f, a, b, depth, tol);
    // Boost 1.74 compares an unscaled error estimate with a tolerance scaled by
    // the half-width; on [0, 1] the two agree up to a factor of two.
    const double w = b - a;
    return GK::integrate([&](double t) { return f(a + w * t) * w; }, 0.0, 1.0, depth, tol);
}

}  // namespace sconv
