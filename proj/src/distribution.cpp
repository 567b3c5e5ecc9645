#include "sconv/distribution.hpp"

#include "sconv/errors.hpp"
#include "sconv/special.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <sstream>

namespace sconv {

namespace {

// Standardized (location 0, scale 1, untruncated) continuous pieces.

double std_cdf(Family f, double shape, double z) {
    switch (f) {
        case Family::Normal: return normal_cdf(z);
        case Family::Uniform: return std::clamp(z, 0.0, 1.0);
        case Family::StudentT: return boost::math::cdf(boost::math::students_t_distribution<double>(shape), z);
        case Family::Pareto: return z <= 1.0 ? 0.0 : -std::expm1(-shape * std::log(z));
        case Family::Cauchy: return z > 0 ? 1.0 - std::atan(1.0 / z) / kPi : 0.5 + std::atan(z) / kPi;
        default: break;
    }
    throw std::logic_error("std_cdf on discrete family");
}

double std_sf(Family f, double shape, double z) {
    switch (f) {
        case Family::Normal: return normal_sf(z);
        case Family::Uniform: return std::clamp(1.0 - z, 0.0, 1.0);
        case Family::StudentT:
            return boost::math::cdf(boost::math::complement(boost::math::students_t_distribution<double>(shape), z));
        case Family::Pareto: return z <= 1.0 ? 1.0 : std::exp(-shape * std::log(z));
        case Family::Cauchy: return z > 0 ? std::atan(1.0 / z) / kPi : 0.5 - std::atan(z) / kPi;
        default: break;
    }
    throw std::logic_error("std_sf on discrete family");
}

double std_pdf(Family f, double shape, double z) {
    switch (f) {
        case Family::Normal: return normal_pdf(z);
        case Family::Uniform: return (z >= 0.0 && z <= 1.0) ? 1.0 : 0.0;
        case Family::StudentT: return boost::math::pdf(boost::math::students_t_distribution<double>(shape), z);
        case Family::Pareto: return z < 1.0 ? 0.0 : shape * std::exp(-(shape + 1.0) * std::log(z));
        case Family::Cauchy: return 1.0 / (kPi * (1.0 + z * z));
        default: break;
    }
    throw std::logic_error("std_pdf on discrete family");
}

double std_quantile(Family f, double shape, double u) {
    switch (f) {
        case Family::Normal: return normal_quantile(u);
        case Family::Uniform: return u;
        case Family::StudentT:
            return boost::math::quantile(boost::math::students_t_distribution<double>(shape), u);
        case Family::Pareto: return std::exp(-std::log1p(-u) / shape);
        case Family::Cauchy: return std::tan(kPi * (u - 0.5));
        default: break;
    }
    throw std::logic_error("std_quantile on discrete family");
}

double std_median(Family f, double shape) {
    switch (f) {
        case Family::Uniform: return 0.5;
        case Family::Pareto: return std::exp(std::log(2.0) / shape);
        default: return 0.0;
    }
}

// P(a < Z <= a + w); w is passed separately so a tiny width keeps its bits.
double std_interval(Family f, double shape, double a, double w) {
    const double b = a + w;
    if (!(w > 0.0)) return 0.0;
    if (std::isfinite(a) && std::isfinite(w) && w < 1e-3 && f != Family::Uniform) {
        // Five-point Gauss-Legendre on the density keeps relative accuracy
        // where a difference of CDF values would cancel.
        static constexpr std::array<double, 5> nodes{0.0, -0.5384693101056831, 0.5384693101056831,
                                                     -0.9061798459386640, 0.9061798459386640};
        static constexpr std::array<double, 5> weights{0.5688888888888889, 0.4786286704993665,
                                                       0.4786286704993665, 0.2369268850561891,
                                                       0.2369268850561891};
        const double half = 0.5 * w;
        const double mid = a + half;
        if (f != Family::Pareto || a >= 1.0) {
            double acc = 0.0;
            for (std::size_t i = 0; i < nodes.size(); ++i) acc += weights[i] * std_pdf(f, shape, mid + half * nodes[i]);
            return acc * half;
        }
    }
    if (a >= std_median(f, shape)) return std::max(0.0, std_sf(f, shape, a) - std_sf(f, shape, b));
    return std::max(0.0, std_cdf(f, shape, b) - std_cdf(f, shape, a));
}

double std_between(Family f, double shape, double a, double b) {
    if (!(b > a)) return 0.0;
    if (std::isfinite(a) && std::isfinite(b)) return std_interval(f, shape, a, b - a);
    if (a >= std_median(f, shape)) return std::max(0.0, std_sf(f, shape, a) - std_sf(f, shape, b));
    return std::max(0.0, std_cdf(f, shape, b) - std_cdf(f, shape, a));
}

std::string fmt(double x) {
    std::ostringstream os;
    os << x;
    return os.str();
}

}  // namespace

std::string_view family_name(Family f) {
    switch (f) {
        case Family::Normal: return "normal";
        case Family::Rademacher: return "rademacher";
        case Family::Uniform: return "uniform";
        case Family::StudentT: return "student_t";
        case Family::Pareto: return "pareto";
        case Family::Cauchy: return "cauchy";
        case Family::PointMass: return "point";
    }
    return "?";
}

DistributionSpec DistributionSpec::normal(double mean, double sd) { return {Family::Normal, mean, sd, 0.0, {}}; }
DistributionSpec DistributionSpec::rademacher(double location, double scale) {
    return {Family::Rademacher, location, scale, 0.0, {}};
}
DistributionSpec DistributionSpec::uniform(double lo, double width) { return {Family::Uniform, lo, width, 0.0, {}}; }
DistributionSpec DistributionSpec::student_t(double dof, double location, double scale) {
    return {Family::StudentT, location, scale, dof, {}};
}
DistributionSpec DistributionSpec::pareto(double tail_index, double x_min, double location) {
    return {Family::Pareto, location, x_min, tail_index, {}};
}
DistributionSpec DistributionSpec::cauchy(double location, double scale) {
    return {Family::Cauchy, location, scale, 0.0, {}};
}
DistributionSpec DistributionSpec::point_mass(double value) { return {Family::PointMass, value, 0.0, 0.0, {}}; }

DistributionSpec DistributionSpec::truncated(double lo, double hi) const {
    DistributionSpec out = *this;
    out.truncation = std::make_pair(lo, hi);
    out.validate();
    return out;
}

void DistributionSpec::validate() const {
    if (!std::isfinite(location)) throw PreconditionError("distribution location must be finite");
    if (family != Family::PointMass && !(scale > 0.0 && std::isfinite(scale)))
        throw PreconditionError("distribution scale must be positive and finite");
    if ((family == Family::StudentT || family == Family::Pareto) && !(shape > 0.0 && std::isfinite(shape)))
        throw PreconditionError("shape parameter must be positive");
    if (truncation) {
        if (is_discrete()) throw PreconditionError("truncation applies to continuous families only");
        const auto [lo, hi] = *truncation;
        if (!(lo < hi)) throw PreconditionError("truncation interval must satisfy lo < hi");
        const double mass = prob_between(lo, hi);
        if (!(mass > 0.0)) throw PreconditionError("truncation interval carries no probability");
    }
}

bool DistributionSpec::is_degenerate() const noexcept { return family == Family::PointMass; }

bool DistributionSpec::is_symmetric_about_zero() const noexcept {
    if (location != 0.0) return false;
    if (truncation && truncation->first != -truncation->second) return false;
    switch (family) {
        case Family::Normal:
        case Family::Rademacher:
        case Family::StudentT:
        case Family::Cauchy:
        case Family::PointMass: return true;
        default: return false;
    }
}

double DistributionSpec::moment_order_finite() const noexcept {
    if (truncation && std::isfinite(truncation->first) && std::isfinite(truncation->second)) return kInf;
    switch (family) {
        case Family::StudentT:
        case Family::Pareto: return shape;
        case Family::Cauchy: return 1.0;
        default: return kInf;
    }
}

std::optional<double> DistributionSpec::mean() const {
    if (truncation) {
        if (moment_order_finite() <= 1.0) return std::nullopt;
        const auto [lo, hi] = *truncation;
        return integrate([&](double x) { return x * pdf(x); }, lo, hi);
    }
    switch (family) {
        case Family::Normal:
        case Family::Rademacher:
        case Family::PointMass: return location;
        case Family::Uniform: return location + 0.5 * scale;
        case Family::StudentT:
            if (shape > 1.0) return location;
            return std::nullopt;
        case Family::Pareto:
            if (shape > 1.0) return location + scale * shape / (shape - 1.0);
            return std::nullopt;
        case Family::Cauchy: return std::nullopt;
    }
    return std::nullopt;
}

std::optional<double> DistributionSpec::variance() const {
    if (moment_order_finite() <= 2.0) return std::nullopt;
    const auto m = mean();
    if (!m) return std::nullopt;
    switch (family) {
        case Family::Normal:
            if (!truncation) return scale * scale;
            break;
        case Family::Rademacher: return scale * scale;
        case Family::PointMass: return 0.0;
        case Family::Uniform: return scale * scale / 12.0;
        case Family::StudentT:
            if (!truncation) return scale * scale * shape / (shape - 2.0);
            break;
        case Family::Pareto:
            if (!truncation) return scale * scale * shape / ((shape - 1.0) * (shape - 1.0) * (shape - 2.0));
            break;
        default: break;
    }
    const auto [lo, hi] = *truncation;
    auto integrand = [&](double x) { return (x - *m) * (x - *m) * pdf(x); };
    return integrate(integrand, lo, hi);
}

std::optional<double> DistributionSpec::center() const {
    if (auto m = mean()) return m;
    if ((family == Family::Cauchy || family == Family::StudentT) && !truncation) return location;
    return std::nullopt;
}

double DistributionSpec::cdf(double x) const {
    switch (family) {
        case Family::PointMass: return x >= location ? 1.0 : 0.0;
        case Family::Rademacher: return x >= location + scale ? 1.0 : (x >= location - scale ? 0.5 : 0.0);
        default: break;
    }
    if (truncation) {
        const auto [lo, hi] = *truncation;
        if (x <= lo) return 0.0;
        if (x >= hi) return 1.0;
        return std::clamp(prob_between(lo, x) / prob_between(lo, hi), 0.0, 1.0);
    }
    return std_cdf(family, shape, (x - location) / scale);
}

double DistributionSpec::sf(double x) const {
    switch (family) {
        case Family::PointMass:
        case Family::Rademacher: return 1.0 - cdf(x);
        default: break;
    }
    if (truncation) {
        const auto [lo, hi] = *truncation;
        if (x <= lo) return 1.0;
        if (x >= hi) return 0.0;
        return std::clamp(prob_between(x, hi) / prob_between(lo, hi), 0.0, 1.0);
    }
    return std_sf(family, shape, (x - location) / scale);
}

double DistributionSpec::cdf_left(double x) const {
    switch (family) {
        case Family::PointMass: return x > location ? 1.0 : 0.0;
        case Family::Rademacher: return x > location + scale ? 1.0 : (x > location - scale ? 0.5 : 0.0);
        default: return cdf(x);
    }
}

double DistributionSpec::prob_between(double lo, double hi) const {
    if (!(hi > lo)) return 0.0;
    if (is_discrete()) return std::max(0.0, cdf(hi) - cdf(lo));
    if (truncation) {
        const auto [tlo, thi] = *truncation;
        const double a = std::max(lo, tlo);
        const double b = std::min(hi, thi);
        if (!(b > a)) return 0.0;
        const double mass = std_between(family, shape, (tlo - location) / scale, (thi - location) / scale);
        return std_between(family, shape, (a - location) / scale, (b - location) / scale) / mass;
    }
    return std_between(family, shape, (lo - location) / scale, (hi - location) / scale);
}

double DistributionSpec::prob_interval(double x, double width) const {
    if (!(width > 0.0)) return 0.0;
    if (is_discrete() || truncation) return prob_between(x, x + width);
    return std_interval(family, shape, (x - location) / scale, width / scale);
}

double DistributionSpec::pdf(double x) const {
    if (is_discrete()) return 0.0;
    if (truncation) {
        const auto [lo, hi] = *truncation;
        if (x < lo || x > hi) return 0.0;
        const double mass = std_between(family, shape, (lo - location) / scale, (hi - location) / scale);
        return std_pdf(family, shape, (x - location) / scale) / (scale * mass);
    }
    return std_pdf(family, shape, (x - location) / scale) / scale;
}

double DistributionSpec::quantile(double u) const {
    switch (family) {
        case Family::PointMass: return location;
        case Family::Rademacher: return u < 0.5 ? location - scale : location + scale;
        default: break;
    }
    if (truncation) {
        const auto [lo, hi] = *truncation;
        const double a = (lo - location) / scale;
        const double b = (hi - location) / scale;
        const double fa = std_cdf(family, shape, a);
        const double mass = std_between(family, shape, a, b);
        const double z = std_quantile(family, shape, std::clamp(fa + u * mass, 0.0, 1.0));
        return std::clamp(location + scale * z, lo, hi);
    }
    return location + scale * std_quantile(family, shape, u);
}

double DistributionSpec::abs_moment(double p) const {
    if (p == 0.0) return 1.0;
    switch (family) {
        case Family::PointMass: return std::pow(std::abs(location), p);
        case Family::Rademacher:
            return 0.5 * (std::pow(std::abs(location - scale), p) + std::pow(std::abs(location + scale), p));
        default: break;
    }
    if (!truncation && location == 0.0) {
        switch (family) {
            case Family::Normal: return std::pow(scale, p) * normal_abs_moment(p);
            case Family::Cauchy:
                if (p >= 1.0) return kInf;
                return std::pow(scale, p) / std::cos(kPi * p / 2.0);
            case Family::StudentT: {
                if (p >= shape) return kInf;
                const double lg = 0.5 * p * std::log(shape) + std::lgamma(0.5 * (p + 1.0)) +
                                  std::lgamma(0.5 * (shape - p)) - 0.5 * std::log(kPi) - std::lgamma(0.5 * shape);
                return std::pow(scale, p) * std::exp(lg);
            }
            case Family::Pareto:
                if (p >= shape) return kInf;
                return shape * std::pow(scale, p) / (shape - p);
            default: break;
        }
    }
    if (family == Family::Uniform && !truncation) {
        const double l = location, h = location + scale;
        auto prim = [p](double x) {  // integral of |t|^p from 0 to x, signed
            return std::copysign(std::pow(std::abs(x), p + 1.0) / (p + 1.0), x);
        };
        return (prim(h) - prim(l)) / scale;
    }
    if (p >= moment_order_finite()) return kInf;
    const double lo = support_min();
    const double hi = support_max();
    auto integrand = [&](double x) { return std::pow(std::abs(x), p) * pdf(x); };
    if (lo < 0.0 && hi > 0.0) return integrate(integrand, lo, 0.0) + integrate(integrand, 0.0, hi);
    return integrate(integrand, lo, hi);
}

double DistributionSpec::support_min() const {
    if (truncation) return truncation->first;
    switch (family) {
        case Family::PointMass: return location;
        case Family::Rademacher: return location - scale;
        case Family::Uniform: return location;
        case Family::Pareto: return location + scale;
        default: return -kInf;
    }
}

double DistributionSpec::support_max() const {
    if (truncation) return truncation->second;
    switch (family) {
        case Family::PointMass: return location;
        case Family::Rademacher:
        case Family::Uniform: return location + scale;
        default: return kInf;
    }
}

double DistributionSpec::ess_sup_abs() const { return std::max(std::abs(support_min()), std::abs(support_max())); }

std::pair<double, double> DistributionSpec::density_bounds(double lo, double hi) const {
    if (is_discrete()) throw UnsupportedQuery("density bounds requested for a discrete family");
    double mode = location;
    if (family == Family::Uniform) mode = location + 0.5 * scale;
    if (family == Family::Pareto) mode = location + scale;
    if (truncation) mode = std::clamp(mode, truncation->first, truncation->second);
    const double a = pdf(lo);
    const double b = pdf(hi);
    const double c = pdf(std::clamp(mode, lo, hi));
    double dmin = std::min(a, b);
    // Inside a bounded support, the flat uniform density has no dip.
    if (lo < support_min() || hi > support_max()) dmin = 0.0;
    return {dmin, std::max({a, b, c})};
}

std::vector<std::pair<double, double>> DistributionSpec::atoms() const {
    switch (family) {
        case Family::PointMass: return {{location, 1.0}};
        case Family::Rademacher: return {{location - scale, 0.5}, {location + scale, 0.5}};
        default: return {};
    }
}

std::string DistributionSpec::label() const {
    std::string out;
    switch (family) {
        case Family::Normal: out = "normal(" + fmt(location) + "," + fmt(scale) + ")"; break;
        case Family::Rademacher: out = "rademacher(" + fmt(location) + "," + fmt(scale) + ")"; break;
        case Family::Uniform: out = "uniform(" + fmt(location) + "," + fmt(location + scale) + ")"; break;
        case Family::StudentT: out = "t(" + fmt(shape) + "," + fmt(location) + "," + fmt(scale) + ")"; break;
        case Family::Pareto: out = "pareto(" + fmt(shape) + "," + fmt(scale) + "," + fmt(location) + ")"; break;
        case Family::Cauchy: out = "cauchy(" + fmt(location) + "," + fmt(scale) + ")"; break;
        case Family::PointMass: out = "point(" + fmt(location) + ")"; break;
    }
    if (truncation) out += "[" + fmt(truncation->first) + "," + fmt(truncation->second) + "]";
    return out;
}

DistributionSpec parse_distribution(std::string_view text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(static_cast<char>(std::tolower(c)));
    std::optional<std::pair<double, double>> trunc;
    if (auto lb = s.find('['); lb != std::string::npos) {
        const auto rb = s.find(']', lb);
        const auto comma = s.find(',', lb);
        if (rb == std::string::npos || comma == std::string::npos || comma > rb)
            throw PreconditionError("malformed truncation in distribution '" + std::string(text) + "'");
        trunc = std::make_pair(std::stod(s.substr(lb + 1, comma - lb - 1)), std::stod(s.substr(comma + 1, rb - comma - 1)));
        s.erase(lb);
    }
    std::string name = s;
    std::vector<double> args;
    if (auto lp = s.find('('); lp != std::string::npos) {
        const auto rp = s.rfind(')');
        if (rp == std::string::npos || rp < lp) throw PreconditionError("malformed distribution '" + std::string(text) + "'");
        name = s.substr(0, lp);
        std::stringstream ss(s.substr(lp + 1, rp - lp - 1));
        std::string item;
        while (std::getline(ss, item, ','))
            if (!item.empty()) args.push_back(std::stod(item));
    }
    auto arg = [&](std::size_t i, double def) { return i < args.size() ? args[i] : def; };
    DistributionSpec d;
    if (name == "normal" || name == "gaussian") {
        d = DistributionSpec::normal(arg(0, 0.0), arg(1, 1.0));
    } else if (name == "rademacher") {
        d = DistributionSpec::rademacher(arg(0, 0.0), arg(1, 1.0));
    } else if (name == "uniform") {
        const double lo = arg(0, 0.0), hi = arg(1, lo + 1.0);
        d = DistributionSpec::uniform(lo, hi - lo);
    } else if (name == "t" || name == "student-t" || name == "student_t" || name == "studentt") {
        if (args.empty()) throw PreconditionError("student-t needs degrees of freedom, e.g. t(1.5)");
        d = DistributionSpec::student_t(args[0], arg(1, 0.0), arg(2, 1.0));
    } else if (name == "pareto") {
        if (args.empty()) throw PreconditionError("pareto needs a tail index, e.g. pareto(2.5)");
        d = DistributionSpec::pareto(args[0], arg(1, 1.0), arg(2, 0.0));
    } else if (name == "cauchy") {
        d = DistributionSpec::cauchy(arg(0, 0.0), arg(1, 1.0));
    } else if (name == "point" || name == "point_mass" || name == "point-mass" || name == "constant") {
        d = DistributionSpec::point_mass(arg(0, 0.0));
    } else {
        throw PreconditionError("unknown distribution family '" + name + "'");
    }
    if (trunc) d.truncation = trunc;
    d.validate();
    return d;
}

}  // namespace sconv
