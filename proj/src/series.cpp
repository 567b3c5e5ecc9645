#include "sconv/series.hpp"

#include "sconv/errors.hpp"
#include "sconv/special.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sconv {

namespace {

constexpr double kConvergentAt = 1.1;
constexpr double kDivergentAt = 0.9;
constexpr double kHarmonicDrop = 0.05;  // log of the tolerated decay of n * a_n
constexpr int kMinFitPoints = 6;
constexpr double kLowCount = 10.0;

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

SeriesVerdict verdict_from_exponent(double beta) {
    if (beta >= kConvergentAt) return SeriesVerdict::Convergent;
    if (beta <= kDivergentAt) return SeriesVerdict::Divergent;
    return SeriesVerdict::Inconclusive;
}

bool is_dense(const std::vector<std::int64_t>& ns) {
    for (std::size_t i = 0; i < ns.size(); ++i)
        if (ns[i] != static_cast<std::int64_t>(i) + 1) return false;
    return true;
}

}  // namespace

std::string_view to_string(SeriesVerdict v) {
    switch (v) {
        case SeriesVerdict::Convergent: return "CONVERGENT";
        case SeriesVerdict::Divergent: return "DIVERGENT";
        case SeriesVerdict::Inconclusive: return "INCONCLUSIVE";
    }
    return "?";
}

std::string_view to_string(TermSource s) { return s == TermSource::Analytic ? "ANALYTIC" : "EMPIRICAL"; }

std::vector<std::string> FlagSet::names() const {
    static const std::pair<Flag, const char*> table[] = {
        {Flag::Degenerate, "degenerate"},
        {Flag::InsufficientData, "insufficient-data"},
        {Flag::HarmonicRule, "harmonic-rule"},
        {Flag::FitDisagrees, "fit-disagrees"},
        {Flag::CertificateRejected, "certificate-rejected"},
        {Flag::InfiniteTerm, "infinite-term"},
        {Flag::NoiseFloor, "noise-floor"},
        {Flag::Interpolated, "interpolated"},
        {Flag::MomentWarning, "moment-warning"},
        {Flag::LowCount, "low-count"},
    };
    std::vector<std::string> out;
    for (auto [f, name] : table)
        if (has(f)) out.emplace_back(name);
    return out;
}

std::string FlagSet::str() const {
    std::string out;
    for (const auto& n : names()) {
        if (!out.empty()) out += '|';
        out += n;
    }
    return out;
}

std::optional<SeriesVerdict> Comparison::decides() const {
    switch (kind) {
        case Kind::FiniteSupport: return SeriesVerdict::Convergent;
        case Kind::UpperGeometric:
            if (power < 1.0 || coef == 0.0) return SeriesVerdict::Convergent;
            return std::nullopt;
        case Kind::UpperPower:
            if (power > 1.0 || coef == 0.0) return SeriesVerdict::Convergent;
            return std::nullopt;
        case Kind::LowerPower:
            if (power <= 1.0 && coef > 0.0) return SeriesVerdict::Divergent;
            return std::nullopt;
        case Kind::ExactPower:
            if (coef == 0.0 || power > 1.0) return SeriesVerdict::Convergent;
            return SeriesVerdict::Divergent;
    }
    return std::nullopt;
}

bool Comparison::admits(std::int64_t n, double term) const {
    if (n < n0) return true;
    const double x = static_cast<double>(n);
    constexpr double slack = 1e-9;
    switch (kind) {
        case Kind::FiniteSupport: return term == 0.0;
        case Kind::UpperGeometric: return term <= coef * std::pow(power, x) * (1.0 + slack) + 1e-300;
        case Kind::UpperPower: return term <= coef * std::pow(x, -power) * (1.0 + slack) + 1e-300;
        case Kind::LowerPower: return term >= coef * std::pow(x, -power) * (1.0 - slack);
        case Kind::ExactPower: {
            const double ref = coef * std::pow(x, -power);
            return std::abs(term - ref) <= slack * ref + 1e-300;
        }
    }
    return false;
}

std::string Comparison::describe() const {
    const std::string from = n0 > 1 ? " for n>=" + std::to_string(n0) : "";
    switch (kind) {
        case Kind::FiniteSupport: return "finite support: a_n = 0" + from;
        case Kind::UpperGeometric: return "a_n <= " + fmt(coef) + "*" + fmt(power) + "^n" + from;
        case Kind::UpperPower: return "a_n <= " + fmt(coef) + "*n^-" + fmt(power) + from;
        case Kind::LowerPower: return "a_n >= " + fmt(coef) + "*n^-" + fmt(power) + from;
        case Kind::ExactPower: return "a_n = " + fmt(coef) + "*n^-" + fmt(power) + from;
    }
    return "";
}

std::vector<std::int64_t> geometric_grid(std::int64_t horizon, double ratio) {
    if (horizon < 1) throw PreconditionError("grid horizon must be >= 1");
    if (!(ratio > 1.0)) throw PreconditionError("grid ratio must exceed 1");
    std::vector<std::int64_t> out;
    for (int j = 0;; ++j) {
        const double v = std::ceil(std::pow(ratio, j) - 1e-9);
        if (v > static_cast<double>(horizon)) break;
        const auto n = static_cast<std::int64_t>(v);
        if (out.empty() || n > out.back()) out.push_back(n);
    }
    if (out.back() != horizon) out.push_back(horizon);
    return out;
}

double interpolate_block(std::int64_t n0, double a0, std::int64_t n1, double a1) {
    if (n1 <= n0) return 0.0;
    if (n1 == n0 + 1) return a1;
    const double m = static_cast<double>(n1 - n0);
    if (!(a0 > 0.0) || !(a1 > 0.0)) return m * a0 + (a1 - a0) * (m + 1.0) / 2.0;
    const double x0 = static_cast<double>(n0), x1 = static_cast<double>(n1);
    const double gamma = -std::log(a1 / a0) / std::log(x1 / x0);
    double integral;
    if (std::abs(1.0 - gamma) < 1e-12) {
        integral = a0 * x0 * std::log(x1 / x0);
    } else {
        integral = a0 * x0 * (std::pow(x1 / x0, 1.0 - gamma) - 1.0) / (1.0 - gamma);
    }
    return integral + (a1 - a0) / 2.0;
}

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t k = x.size();
    if (k < 2 || y.size() != k) throw PreconditionError("least squares needs at least two points");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(k);
    my /= static_cast<double>(k);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (!(sxx > 0.0)) throw PreconditionError("least squares needs distinct abscissae");
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double rss = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        const double r = y[i] - f.intercept - f.slope * x[i];
        rss += r * r;
    }
    f.residual = std::sqrt(rss);
    f.slope_se = k > 2 ? std::sqrt(rss / static_cast<double>(k - 2) / sxx) : 0.0;
    return f;
}

TailFitResult fit_tail_exponent(const std::vector<std::int64_t>& ns, const std::vector<double>& terms) {
    if (ns.size() != terms.size()) throw PreconditionError("grid and terms differ in length");
    for (std::size_t i = 1; i < ns.size(); ++i)
        if (ns[i] <= ns[i - 1]) throw PreconditionError("grid must be strictly increasing");
    TailFitResult out;
    bool all_zero = true;
    for (double t : terms) {
        if (std::isnan(t) || t < 0.0) throw NumericalError("series terms must be nonnegative numbers");
        if (std::isinf(t)) {
            out.verdict = SeriesVerdict::Divergent;
            out.flags.set(Flag::InfiniteTerm);
            return out;
        }
        if (t != 0.0) all_zero = false;
    }
    if (all_zero) {
        out.verdict = SeriesVerdict::Convergent;
        out.flags.set(Flag::Degenerate);
        return out;
    }

    struct Block {
        double start, width, sum;
    };
    std::vector<Block> blocks;
    if (is_dense(ns) && ns.size() >= 2) {
        for (std::int64_t lo = 1; 2 * lo <= static_cast<std::int64_t>(ns.size()); lo *= 2) {
            CompensatedSum acc;
            for (std::int64_t n = lo + 1; n <= 2 * lo; ++n) acc.add(terms[static_cast<std::size_t>(n - 1)]);
            blocks.push_back({static_cast<double>(lo), static_cast<double>(lo), acc.value()});
        }
    } else {
        for (std::size_t i = 0; i + 1 < ns.size(); ++i) {
            const double s = interpolate_block(ns[i], terms[i], ns[i + 1], terms[i + 1]);
            blocks.push_back({static_cast<double>(ns[i]), static_cast<double>(ns[i + 1] - ns[i]), s});
        }
    }

    std::vector<std::size_t> positive;
    for (std::size_t i = 0; i < blocks.size(); ++i)
        if (blocks[i].sum > 0.0) positive.push_back(i);
    if (static_cast<int>(positive.size()) < kMinFitPoints) {
        // Terms that vanish identically over the later half of the range.
        if (!positive.empty() && positive.back() < blocks.size() / 2 && blocks.size() >= 2 * kMinFitPoints) {
            out.verdict = SeriesVerdict::Convergent;
            return out;
        }
        out.flags.set(Flag::InsufficientData);
        out.verdict = SeriesVerdict::Inconclusive;
        return out;
    }
    const std::size_t take = std::max<std::size_t>(kMinFitPoints, (positive.size() + 1) / 2);
    std::vector<double> x, y;
    for (std::size_t j = positive.size() - take; j < positive.size(); ++j) {
        const auto& b = blocks[positive[j]];
        x.push_back(std::log(b.start));
        y.push_back(std::log(b.sum * b.start / b.width));
    }
    const LineFit lf = least_squares(x, y);
    SlopeFit fit;
    fit.exponent = 1.0 - lf.slope;
    fit.half_width = student_t_quantile(0.975, static_cast<double>(x.size() - 2)) * lf.slope_se;
    fit.residual = lf.residual;
    fit.points = static_cast<int>(x.size());
    out.fit = fit;
    out.verdict = verdict_from_exponent(fit.exponent);
    // Harmonic band: n * a_n that does not decay over the window is bounded
    // below by c/n, so the series diverges by comparison.
    if (out.verdict == SeriesVerdict::Inconclusive) {
        const double floor = *std::min_element(y.begin(), y.end());
        if (floor >= y.front() - kHarmonicDrop && y.back() >= y.front() - kHarmonicDrop) {
            out.verdict = SeriesVerdict::Divergent;
            out.flags.set(Flag::HarmonicRule);
        }
    }
    // Terms that stop early are convergent whatever the shape of the early part.
    if (positive.back() < blocks.size() / 2 && blocks.size() >= 2 * kMinFitPoints) out.verdict = SeriesVerdict::Convergent;
    return out;
}

SeriesVerdict worst_case(SeriesVerdict a, SeriesVerdict b) {
    if (a == SeriesVerdict::Divergent || b == SeriesVerdict::Divergent) return SeriesVerdict::Divergent;
    if (a == SeriesVerdict::Inconclusive || b == SeriesVerdict::Inconclusive) return SeriesVerdict::Inconclusive;
    return SeriesVerdict::Convergent;
}

namespace {

void apply_certificates(SeriesDiagnostic& d, const std::vector<Comparison>& certs,
                        const std::vector<std::int64_t>& ns, const std::vector<double>& terms,
                        const TailFitResult& fit) {
    d.fit = fit.fit;
    d.flags |= fit.flags;
    if (fit.flags.has(Flag::InfiniteTerm)) {
        d.verdict = SeriesVerdict::Divergent;
        return;
    }
    for (const auto& c : certs) {
        bool ok = true;
        for (std::size_t i = 0; i < ns.size() && ok; ++i) ok = c.admits(ns[i], terms[i]);
        if (!ok) {
            d.flags.set(Flag::CertificateRejected);
            continue;
        }
        const auto v = c.decides();
        if (!v) continue;
        d.verdict = *v;
        d.closed_form = c.describe();
        if (*v == SeriesVerdict::Divergent && c.power >= kDivergentAt) d.flags.set(Flag::HarmonicRule);
        if (fit.verdict != *v && !fit.flags.has(Flag::Degenerate)) d.flags.set(Flag::FitDisagrees);
        return;
    }
    d.verdict = fit.verdict;
}

}  // namespace

SeriesDiagnostic analyze_analytic(const TermFn& term, const std::vector<Comparison>& certificates,
                                  const SeriesOptions& opt) {
    if (opt.horizon < 1) throw PreconditionError("series horizon must be >= 1");
    SeriesDiagnostic d;
    d.source = TermSource::Analytic;
    d.horizon = opt.horizon;
    const std::int64_t n_max = opt.horizon;
    std::vector<std::int64_t> ns;
    std::vector<double> terms;
    if (!opt.expensive && n_max <= opt.dense_limit) {
        ns.resize(static_cast<std::size_t>(n_max));
        terms.resize(ns.size());
        for (std::int64_t n = 1; n <= n_max; ++n) {
            ns[static_cast<std::size_t>(n - 1)] = n;
            terms[static_cast<std::size_t>(n - 1)] = term(n);
        }
        const auto report = geometric_grid(n_max, opt.report_ratio);
        CompensatedSum acc;
        std::size_t r = 0;
        for (std::int64_t n = 1; n <= n_max; ++n) {
            const double t = terms[static_cast<std::size_t>(n - 1)];
            acc.add(t);
            if (r < report.size() && report[r] == n) {
                d.points.push_back({n, t, acc.value(), 0.0, {}});
                ++r;
            }
        }
    } else {
        const std::int64_t dense = std::min<std::int64_t>(64, n_max);
        for (std::int64_t n = 1; n <= dense; ++n) ns.push_back(n);
        for (std::int64_t n : geometric_grid(n_max, opt.eval_ratio))
            if (n > dense) ns.push_back(n);
        terms.reserve(ns.size());
        for (std::int64_t n : ns) terms.push_back(term(n));
        CompensatedSum acc;
        for (std::size_t i = 0; i < ns.size(); ++i) {
            FlagSet f;
            if (i == 0) {
                acc.add(terms[0] * static_cast<double>(ns[0]));
            } else {
                acc.add(interpolate_block(ns[i - 1], terms[i - 1], ns[i], terms[i]));
                if (ns[i] > ns[i - 1] + 1) f.set(Flag::Interpolated);
            }
            if (f.has(Flag::Interpolated)) d.flags.set(Flag::Interpolated);
            d.points.push_back({ns[i], terms[i], acc.value(), 0.0, f});
        }
    }
    for (double t : terms)
        if (std::isnan(t)) throw NumericalError("analytic series term is NaN");
    apply_certificates(d, certificates, ns, terms, fit_tail_exponent(ns, terms));
    return d;
}

SeriesDiagnostic analyze_empirical(const std::vector<EmpiricalTerm>& terms) {
    if (terms.empty()) throw PreconditionError("empirical series needs at least one term");
    SeriesDiagnostic d;
    d.source = TermSource::Empirical;
    d.horizon = terms.back().n;
    std::vector<std::int64_t> ns;
    std::vector<double> vals;
    CompensatedSum acc;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const auto& t = terms[i];
        if (t.value < 0.0 || std::isnan(t.value)) throw NumericalError("empirical term must be nonnegative");
        FlagSet f;
        if (i == 0) {
            acc.add(t.value * static_cast<double>(t.n));
            if (t.n > 1) f.set(Flag::Interpolated);
        } else {
            acc.add(interpolate_block(terms[i - 1].n, terms[i - 1].value, t.n, t.value));
            if (t.n > terms[i - 1].n + 1) f.set(Flag::Interpolated);
        }
        if (t.events >= 0.0 && t.events < kLowCount) f.set(Flag::LowCount);
        d.flags |= f;
        d.points.push_back({t.n, t.value, acc.value(), t.std_err, f});
        ns.push_back(t.n);
        vals.push_back(t.value);
    }
    const bool counted = terms.front().events >= 0.0;
    bool all_zero = std::all_of(vals.begin(), vals.end(), [](double v) { return v == 0.0; });
    if (all_zero && counted) {
        d.flags.set(Flag::NoiseFloor);
        d.verdict = SeriesVerdict::Inconclusive;
        return d;
    }
    const TailFitResult fit = fit_tail_exponent(ns, vals);
    d.fit = fit.fit;
    d.flags |= fit.flags;
    d.verdict = fit.verdict;
    if (counted) {
        const std::size_t half = d.points.size() / 2;
        std::size_t low = 0;
        for (std::size_t i = half; i < d.points.size(); ++i)
            if (d.points[i].flags.has(Flag::LowCount)) ++low;
        const bool dominated = 2 * low > d.points.size() - half;
        if (dominated && (d.verdict == SeriesVerdict::Convergent || fit.flags.has(Flag::InsufficientData))) {
            d.flags.set(Flag::NoiseFloor);
            d.verdict = SeriesVerdict::Inconclusive;
        }
    }
    return d;
}

}  // namespace sconv
