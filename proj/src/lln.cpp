#include "sconv/lln.hpp"

#include "sconv/errors.hpp"
#include "sconv/kernels.hpp"
#include "sconv/special.hpp"

#include <cmath>
#include <string>

namespace sconv {

namespace {

double require_center(const SequenceModel& m) {
    if (m.kind != ModelKind::IidMean) throw PreconditionError("model must be an iid mean process");
    const auto c = m.base.center();
    if (!c) throw PreconditionError("summand law " + m.base.label() + " has no mean to center at");
    return *c;
}

bool analytic_family(const DistributionSpec& d, Family f) { return d.family == f && !d.truncation; }

SumMatrix sums(const SequenceModel& m, const std::vector<std::int64_t>& grid, const McConfig& mc) {
    const double mu = require_center(m);
    if (mc.jobs == 1) return centered_sums_serial(m.base, mu, grid, mc.reps, mc.seed, mc.stream_base);
    return centered_sums_parallel(m.base, mu, grid, mc.reps, mc.seed, mc.stream_base, mc.jobs);
}

MomentCurve moment_curve(const SequenceModel& m, double p, const std::vector<std::int64_t>& grid,
                         const McConfig& mc, bool of_mean) {
    if (!(p > 0.0)) throw PreconditionError("moment order p must be positive");
    if (mc.reps < 2) throw PreconditionError("reps must be >= 2");
    const SumMatrix s = sums(m, grid, mc);
    MomentCurve c;
    c.grid = grid;
    c.reps = mc.reps;
    c.p = p;
    c.seed = mc.seed;
    if (m.base.moment_order_finite() <= p) c.flags.set(Flag::MomentWarning);
    const auto reps = static_cast<double>(mc.reps);
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double scale = of_mean ? 1.0 / static_cast<double>(grid[j]) : 1.0;
        CompensatedSum sum, sq;
        for (std::int64_t r = 0; r < mc.reps; ++r) {
            const double v = std::pow(std::abs(s.at(r, j) * scale), p);
            sum.add(v);
            sq.add(v * v);
        }
        const double mean = sum.value() / reps;
        const double var = std::max(0.0, (sq.value() - reps * mean * mean) / (reps - 1.0));
        c.estimates.push_back(mean);
        c.std_errors.push_back(std::sqrt(var / reps));
    }
    return c;
}

SeriesOptions analytic_options(std::int64_t horizon) {
    SeriesOptions o;
    o.horizon = horizon;
    return o;
}

}  // namespace

MomentCurve estimate_pth_moment_of_mean(const SequenceModel& model, double p, const std::vector<std::int64_t>& grid,
                                        const McConfig& mc) {
    return moment_curve(model, p, grid, mc, true);
}

MomentCurve estimate_abs_moment_of_sum(const SequenceModel& model, double p, const std::vector<std::int64_t>& grid,
                                       const McConfig& mc) {
    return moment_curve(model, p, grid, mc, false);
}

SeriesDiagnostic strong_lp_series(const MomentCurve& curve) {
    std::vector<EmpiricalTerm> terms;
    for (std::size_t j = 0; j < curve.grid.size(); ++j)
        terms.push_back({curve.grid[j], curve.estimates[j], curve.std_errors[j], -1.0});
    SeriesDiagnostic d = analyze_empirical(terms);
    d.flags |= curve.flags;
    return d;
}

SeriesDiagnostic strong_lp_series(const TermFn& terms, const std::vector<Comparison>& certificates,
                                  std::int64_t horizon) {
    return analyze_analytic(terms, certificates, analytic_options(horizon));
}

SeriesDiagnostic strong_lp_series_normal(double sd, double p, std::int64_t horizon) {
    if (!(p > 0.0)) throw PreconditionError("moment order p must be positive");
    const double c = std::pow(sd, p) * normal_abs_moment(p);
    auto term = [c, p](std::int64_t n) { return c * std::pow(static_cast<double>(n), -p / 2.0); };
    return strong_lp_series(term, {Comparison::exact(c, p / 2.0)}, horizon);
}

std::vector<double> strong_as_path_series(const PathSample& path, double alpha, double mu) {
    if (!(alpha > 0.0)) throw PreconditionError("alpha must be positive");
    std::vector<double> t(path.values.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        acc += std::pow(std::abs(path.values[i] - mu), alpha);
        t[i] = acc;
    }
    return t;
}

SeriesDiagnostic baum_katz_series(const SequenceModel& model, double alpha, double eps, std::int64_t horizon,
                                  const McConfig& mc, double grid_ratio) {
    if (!(alpha >= 1.0)) throw PreconditionError("Baum-Katz series needs alpha >= 1");
    if (!(eps > 0.0)) throw PreconditionError("epsilon must be positive");
    require_center(model);
    const auto& d = model.base;
    const double w = alpha - 2.0;
    if (d.is_degenerate()) return analyze_analytic([](std::int64_t) { return 0.0; }, {}, analytic_options(horizon));
    if (analytic_family(d, Family::Normal)) {
        const double sd = d.scale;
        auto term = [=](std::int64_t n) {
            const double x = static_cast<double>(n);
            return std::pow(x, w) * 2.0 * normal_sf(eps * std::sqrt(x) / sd);
        };
        // 2(1 - Phi(u)) <= K_m u^-m with m = 2 alpha
        const double m = 2.0 * alpha;
        const Comparison c = Comparison::upper(gaussian_power_envelope(m) * std::pow(sd / eps, m), 2.0);
        return analyze_analytic(term, {c}, analytic_options(horizon));
    }
    if (analytic_family(d, Family::Cauchy)) {
        const double tau = 2.0 / kPi * std::atan(d.scale / eps);
        auto term = [=](std::int64_t n) { return tau * std::pow(static_cast<double>(n), w); };
        return analyze_analytic(term, {Comparison::exact(tau, -w)}, analytic_options(horizon));
    }
    const auto grid = geometric_grid(horizon, grid_ratio);
    const SumMatrix s = sums(model, grid, mc);
    std::vector<EmpiricalTerm> terms;
    const auto reps = static_cast<double>(mc.reps);
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double n = static_cast<double>(grid[j]);
        std::int64_t count = 0;
        for (std::int64_t r = 0; r < mc.reps; ++r)
            if (std::abs(s.at(r, j)) > n * eps) ++count;
        const double ph = static_cast<double>(count) / reps;
        const double wt = std::pow(n, w);
        terms.push_back({grid[j], wt * ph, wt * std::sqrt(ph * (1.0 - ph) / reps), static_cast<double>(count)});
    }
    SeriesDiagnostic out = analyze_empirical(terms);
    if (d.moment_order_finite() <= alpha) out.flags.set(Flag::MomentWarning);
    return out;
}

SeriesDiagnostic chow_complete_moment_series(const SequenceModel& model, double alpha, double p, double eps,
                                             std::int64_t horizon, const McConfig& mc, double grid_ratio) {
    if (!(alpha >= 1.0)) throw PreconditionError("complete moment series needs alpha >= 1");
    if (!(p > 0.0 && p <= alpha && p < 2.0)) throw PreconditionError("complete moment series needs 0 < p <= alpha, p < 2");
    if (!(eps > 0.0)) throw PreconditionError("epsilon must be positive");
    require_center(model);
    const auto& d = model.base;
    const double w = alpha / p - 1.0 / p - 2.0;
    if (d.is_degenerate()) return analyze_analytic([](std::int64_t) { return 0.0; }, {}, analytic_options(horizon));
    if (analytic_family(d, Family::Normal)) {
        const double sd = d.scale;
        auto term = [=](std::int64_t n) {
            const double x = static_cast<double>(n);
            return std::pow(x, w) * centered_normal_excess(sd * std::sqrt(x), eps * std::pow(x, 1.0 / p));
        };
        // E(|S|-c)^+ = int_c^inf P(|S|>t) dt <= K_m (sd sqrt n)^m c^(1-m) / (m-1), m = 2 alpha/(2-p)
        const double m = 2.0 * alpha / (2.0 - p);
        const double coef = gaussian_power_envelope(m) * std::pow(sd, m) * std::pow(eps, 1.0 - m) / (m - 1.0);
        return analyze_analytic(term, {Comparison::upper(coef, 2.0)}, analytic_options(horizon));
    }
    if (analytic_family(d, Family::Cauchy)) {
        return analyze_analytic([](std::int64_t) { return kInf; }, {}, analytic_options(horizon));
    }
    const auto grid = geometric_grid(horizon, grid_ratio);
    const SumMatrix s = sums(model, grid, mc);
    std::vector<EmpiricalTerm> terms;
    const auto reps = static_cast<double>(mc.reps);
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double n = static_cast<double>(grid[j]);
        const double c = eps * std::pow(n, 1.0 / p);
        CompensatedSum sum, sq;
        std::int64_t count = 0;
        for (std::int64_t r = 0; r < mc.reps; ++r) {
            const double v = std::max(0.0, std::abs(s.at(r, j)) - c);
            if (v > 0.0) ++count;
            sum.add(v);
            sq.add(v * v);
        }
        const double mean = sum.value() / reps;
        const double var = std::max(0.0, (sq.value() - reps * mean * mean) / (reps - 1.0));
        const double wt = std::pow(n, w);
        terms.push_back({grid[j], wt * mean, wt * std::sqrt(var / reps), static_cast<double>(count)});
    }
    SeriesDiagnostic out = analyze_empirical(terms);
    if (d.moment_order_finite() <= alpha) out.flags.set(Flag::MomentWarning);
    return out;
}

SeriesDiagnostic chow_moment_series(const SequenceModel& model, double alpha, std::int64_t horizon,
                                    const McConfig& mc, double grid_ratio) {
    if (!(alpha > 1.0 && alpha < 2.0)) throw PreconditionError("moment series needs 1 < alpha < 2");
    require_center(model);
    const auto& d = model.base;
    if (d.is_degenerate()) return analyze_analytic([](std::int64_t) { return 0.0; }, {}, analytic_options(horizon));
    if (analytic_family(d, Family::Normal)) {
        const double c = std::pow(d.scale, alpha) * normal_abs_moment(alpha);
        auto term = [=](std::int64_t n) { return c * std::pow(static_cast<double>(n), alpha / 2.0 - 2.0); };
        return analyze_analytic(term, {Comparison::exact(c, 2.0 - alpha / 2.0)}, analytic_options(horizon));
    }
    if (analytic_family(d, Family::Cauchy))
        return analyze_analytic([](std::int64_t) { return kInf; }, {}, analytic_options(horizon));
    const auto grid = geometric_grid(horizon, grid_ratio);
    const MomentCurve curve = estimate_abs_moment_of_sum(model, alpha, grid, mc);
    std::vector<EmpiricalTerm> terms;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double wt = std::pow(static_cast<double>(grid[j]), -2.0);
        terms.push_back({grid[j], wt * curve.estimates[j], wt * curve.std_errors[j], -1.0});
    }
    SeriesDiagnostic out = analyze_empirical(terms);
    out.flags |= curve.flags;
    return out;
}

SlopeFit bdg_slope_check(const SequenceModel& model, double alpha, const std::vector<std::int64_t>& grid,
                         const McConfig& mc) {
    if (!(alpha > 2.0)) throw PreconditionError("growth check needs alpha > 2");
    require_center(model);
    if (model.base.is_degenerate()) throw PreconditionError("degenerate summands: E|S_n|^alpha = 0, slope undefined");
    if (!(model.base.moment_order_finite() > alpha))
        throw PreconditionError("growth check needs E|X|^alpha < infinity");
    if (grid.size() < 2) throw PreconditionError("growth check needs at least two grid points");
    const MomentCurve c = estimate_abs_moment_of_sum(model, alpha, grid, mc);
    std::vector<double> x, y;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double e = c.estimates[j];
        if (!std::isfinite(e) || !(e > 0.0))
            throw NumericalError("non-finite or zero moment estimate at n = " + std::to_string(grid[j]));
        x.push_back(std::log(static_cast<double>(grid[j])));
        y.push_back(std::log(e));
    }
    const LineFit lf = least_squares(x, y);
    SlopeFit f;
    f.exponent = lf.slope;
    f.residual = lf.residual;
    f.points = static_cast<int>(x.size());
    // Delta-method width from the per-point relative errors when the fit is exact.
    double rel = 0.0;
    for (std::size_t j = 0; j < grid.size(); ++j) rel = std::max(rel, c.std_errors[j] / c.estimates[j]);
    const double span = x.back() - x.front();
    const double se = grid.size() > 2 ? lf.slope_se : 0.0;
    f.half_width = std::max(1.96 * se, 1.96 * std::sqrt(2.0) * rel / span);
    return f;
}

}  // namespace sconv
