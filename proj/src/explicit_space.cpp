#include "sconv/explicit_space.hpp"

#include "sconv/errors.hpp"
#include "sconv/special.hpp"


#include <cmath>

namespace sconv {

namespace {

double inv_sq(std::int64_t n) {
    const double x = static_cast<double>(n);
    return 1.0 / (x * x);
}

// Law of X_n - X for independent copies.
double iid_gap_tail(const DistributionSpec& d, double eps) {
    if (d.is_degenerate()) return 0.0;
    if (d.family == Family::Normal && !d.truncation) return 2.0 * normal_sf(eps / (d.scale * std::sqrt(2.0)));
    if (d.is_discrete()) {
        double p = 0.0;
        for (auto [x, wx] : d.atoms())
            for (auto [y, wy] : d.atoms())
                if (std::abs(x - y) >= eps) p += wx * wy;
        return p;
    }
    auto f = [&](double x) { return d.pdf(x) * (d.cdf(x - eps) + d.sf(x + eps)); };
    return integrate(f, d.support_min(), d.support_max(), 1e-10);
}

double iid_gap_moment(const DistributionSpec& d, double p) {
    if (d.is_degenerate()) return 0.0;
    if (d.family == Family::Normal && !d.truncation) return std::pow(d.scale * std::sqrt(2.0), p) * normal_abs_moment(p);
    if (d.is_discrete()) {
        double m = 0.0;
        for (auto [x, wx] : d.atoms())
            for (auto [y, wy] : d.atoms()) m += wx * wy * std::pow(std::abs(x - y), p);
        return m;
    }
    if (p >= d.moment_order_finite()) return kInf;
    throw UnsupportedQuery("moments of X_n - X are implemented for normal and discrete laws only");
}

double iid_gap_sup(const DistributionSpec& d) { return d.support_max() - d.support_min(); }

}  // namespace

void ExampleSpec::validate() const {
    if (!(alpha > 0.0 && std::isfinite(alpha))) throw PreconditionError("example order must be positive");
    if (name == ExampleName::Exa34) iid.validate();
}

std::string ExampleSpec::id() const {
    switch (name) {
        case ExampleName::Exa31: return "exa-3.1";
        case ExampleName::Exa32: return "exa-3.2";
        case ExampleName::Exa33: return "exa-3.3";
        case ExampleName::Exa34: return "exa-3.4";
    }
    return "?";
}

ExampleSpec parse_example(std::string_view name, double alpha) {
    ExampleSpec s;
    s.alpha = alpha;
    if (name == "exa-3.1" || name == "exa31") s.name = ExampleName::Exa31;
    else if (name == "exa-3.2" || name == "exa32") s.name = ExampleName::Exa32;
    else if (name == "exa-3.3" || name == "exa33") s.name = ExampleName::Exa33;
    else if (name == "exa-3.4" || name == "exa34") s.name = ExampleName::Exa34;
    else throw PreconditionError("unknown example '" + std::string(name) + "'");
    s.validate();
    return s;
}

double eval_example(const ExampleSpec& spec, std::int64_t n, double omega) {
    if (n < 1) throw PreconditionError("index n must be >= 1");
    if (!(omega > 0.0 && omega < 1.0)) throw DomainError("omega must lie in (0,1)");
    switch (spec.name) {
        case ExampleName::Exa31: return omega < inv_sq(n) ? 1.0 : 0.0;
        case ExampleName::Exa32: return omega < 1.0 / static_cast<double>(n) ? 1.0 : 0.0;
        case ExampleName::Exa33:
            return omega < inv_sq(n) ? 1.0 : std::pow(static_cast<double>(n), -1.0 / spec.alpha);
        case ExampleName::Exa34: break;
    }
    throw UnsupportedQuery("the iid example is not a function of a single omega");
}

std::int64_t exa33_threshold(double alpha, double eps) {
    if (!(eps > 0.0)) throw PreconditionError("epsilon must be positive");
    const double bound = std::pow(eps, -alpha);
    if (bound >= 9e18) throw PreconditionError("threshold index overflows");
    auto n = static_cast<std::int64_t>(std::floor(bound)) + 1;
    auto below = [&](std::int64_t m) { return std::pow(static_cast<double>(m), -1.0 / alpha) < eps; };
    while (n > 1 && below(n - 1)) --n;
    while (!below(n)) ++n;
    return n;
}

std::int64_t indicator_cutoff(double omega, double power) {
    if (!(omega > 0.0 && omega < 1.0)) throw DomainError("omega must lie in (0,1)");
    auto n = static_cast<std::int64_t>(std::floor(std::pow(omega, -1.0 / power)));
    if (n < 1) n = 1;
    auto ok = [&](std::int64_t m) { return !(omega < std::pow(static_cast<double>(m), -power)); };
    while (n > 1 && ok(n - 1)) --n;
    while (!ok(n)) ++n;
    return n;
}

double example_series_term(const ExampleSpec& spec, const SeriesQuantity& q, std::int64_t n) {
    if (n < 1) throw PreconditionError("index n must be >= 1");
    using K = SeriesQuantity::Kind;
    if (q.kind == K::PthMoment && !(q.order > 0.0)) throw PreconditionError("moment order must be positive");
    if (q.kind == K::TailProb && !(q.epsilon > 0.0)) throw PreconditionError("epsilon must be positive");
    if (q.kind == K::AlphaPathTerm) {
        if (!(q.order > 0.0)) throw PreconditionError("path order must be positive");
        return std::pow(std::abs(eval_example(spec, n, q.omega)), q.order);
    }
    const double x = static_cast<double>(n);
    switch (spec.name) {
        case ExampleName::Exa31:
            switch (q.kind) {
                case K::PthMoment: return inv_sq(n);
                case K::SupNorm: return 1.0;
                case K::TailProb: return q.epsilon <= 1.0 ? inv_sq(n) : 0.0;
                default: break;
            }
            break;
        case ExampleName::Exa32:
            switch (q.kind) {
                case K::PthMoment: return 1.0 / x;
                case K::SupNorm: return 1.0;
                case K::TailProb: return q.epsilon <= 1.0 ? 1.0 / x : 0.0;
                default: break;
            }
            break;
        case ExampleName::Exa33: {
            const double small = std::pow(x, -1.0 / spec.alpha);
            switch (q.kind) {
                case K::PthMoment: return inv_sq(n) + (1.0 - inv_sq(n)) * std::pow(small, q.order);
                case K::SupNorm: return 1.0;
                case K::TailProb:
                    if (q.epsilon > 1.0) return 0.0;
                    return n >= exa33_threshold(spec.alpha, q.epsilon) ? inv_sq(n) : 1.0;
                default: break;
            }
            break;
        }
        case ExampleName::Exa34:
            switch (q.kind) {
                case K::PthMoment: return iid_gap_moment(spec.iid, q.order);
                case K::SupNorm: return iid_gap_sup(spec.iid);
                case K::TailProb: return iid_gap_tail(spec.iid, q.epsilon);
                default: break;
            }
            break;
    }
    throw UnsupportedQuery("series quantity not defined for " + spec.id());
}

std::vector<Comparison> example_certificates(const ExampleSpec& spec, const SeriesQuantity& q) {
    using K = SeriesQuantity::Kind;
    switch (spec.name) {
        case ExampleName::Exa31:
            switch (q.kind) {
                case K::PthMoment: return {Comparison::exact(1.0, 2.0)};
                case K::SupNorm: return {Comparison::exact(1.0, 0.0)};
                case K::TailProb: return {q.epsilon <= 1.0 ? Comparison::exact(1.0, 2.0) : Comparison::finite(1)};
                case K::AlphaPathTerm: return {Comparison::finite(indicator_cutoff(q.omega, 2.0))};
            }
            break;
        case ExampleName::Exa32:
            switch (q.kind) {
                case K::PthMoment: return {Comparison::exact(1.0, 1.0)};
                case K::SupNorm: return {Comparison::exact(1.0, 0.0)};
                case K::TailProb: return {q.epsilon <= 1.0 ? Comparison::exact(1.0, 1.0) : Comparison::finite(1)};
                case K::AlphaPathTerm: return {Comparison::finite(indicator_cutoff(q.omega, 1.0))};
            }
            break;
        case ExampleName::Exa33:
            switch (q.kind) {
                case K::PthMoment: {
                    const double r = q.order / spec.alpha;
                    return {Comparison::upper(2.0, std::min(2.0, r)), Comparison::lower(0.75, r, 2)};
                }
                case K::SupNorm: return {Comparison::exact(1.0, 0.0)};
                case K::TailProb:
                    if (q.epsilon > 1.0) return {Comparison::finite(1)};
                    return {Comparison::exact(1.0, 2.0, exa33_threshold(spec.alpha, q.epsilon))};
                case K::AlphaPathTerm:
                    return {Comparison::exact(1.0, q.order / spec.alpha, indicator_cutoff(q.omega, 2.0))};
            }
            break;
        case ExampleName::Exa34: {
            if (q.kind == K::AlphaPathTerm) break;
            const double c = example_series_term(spec, q, 1);
            if (!std::isfinite(c)) return {};
            return {Comparison::exact(c, 0.0)};
        }
    }
    return {};
}

std::vector<ExpectedVerdict> example_expected_verdicts(const ExampleSpec& spec) {
    const double a = spec.alpha;
    switch (spec.name) {
        case ExampleName::Exa31:
            return {{ConvergenceMode::s_lp(a), Expectation::Holds, "E|X_n|^p = 1/n^2 is summable for every p > 0"},
                    {ConvergenceMode::s_l_inf(), Expectation::Fails, "||X_n||_inf = 1 for every n"}};
        case ExampleName::Exa32:
            return {{ConvergenceMode::s_alpha_as(a), Expectation::Holds, "each path is nonzero only for n < 1/omega"},
                    {ConvergenceMode::cc(), Expectation::Fails, "P(X_n >= eps) = 1/n is not summable"},
                    {ConvergenceMode::s_lp(a), Expectation::Fails, "E|X_n|^alpha = 1/n is not summable"}};
        case ExampleName::Exa33:
            return {{ConvergenceMode::cc(), Expectation::Holds, "P(|X_n| >= eps) = 1/n^2 once n^(-1/alpha) < eps"},
                    {ConvergenceMode::s_alpha_as(a), Expectation::Fails, "X_n^alpha = 1/n eventually on every path"}};
        case ExampleName::Exa34:
            return {{ConvergenceMode::s1_d(), Expectation::Holds, "X_n has the law of X, so every term vanishes"},
                    {ConvergenceMode::s2_d(), Expectation::Holds, "F_n = F for every n"},
                    {ConvergenceMode::in_prob(), Expectation::Fails, "P(|X_n - X| >= c1) is a positive constant"}};
    }
    return {};
}

}  // namespace sconv
