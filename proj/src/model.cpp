#include "sconv/model.hpp"

#include "sconv/errors.hpp"
#include "sconv/special.hpp"

#include <cmath>
#include <sstream>

namespace sconv {

namespace {

std::string fmt(double x) {
    std::ostringstream os;
    os << x;
    return os.str();
}

bool untruncated_centered(const DistributionSpec& d, Family f) {
    return d.family == f && !d.truncation && d.location == 0.0;
}

bool bounded(const DistributionSpec& d) { return std::isfinite(d.ess_sup_abs()); }

// P(W >= t), P(W > t), P(W <= t), P(W < t)
double p_ge(const DistributionSpec& w, double t) { return w.is_discrete() ? 1.0 - w.cdf_left(t) : w.sf(t); }
double p_gt(const DistributionSpec& w, double t) { return w.is_discrete() ? 1.0 - w.cdf(t) : w.sf(t); }
double p_le(const DistributionSpec& w, double t) { return w.cdf(t); }
double p_lt(const DistributionSpec& w, double t) { return w.cdf_left(t); }

// Smallest n0 with |a_n| * b < bound for all n >= n0, when |a_n| is nonincreasing.
std::optional<std::int64_t> first_below(const ScaleSequence& a, double b, double bound) {
    if (a.vanishes() || b == 0.0) return 1;
    const double cb = std::abs(a.coef) * b;
    double guess = 1.0;
    switch (a.kind) {
        case ScaleSequence::Kind::Power:
            if (a.power <= 0.0) return cb < bound ? std::optional<std::int64_t>(1) : std::nullopt;
            guess = std::pow(cb / bound, 1.0 / a.power);
            break;
        case ScaleSequence::Kind::InvLog:
            if (cb / bound > 34.0) return std::nullopt;
            guess = std::exp(cb / bound) - 1.0;
            break;
        case ScaleSequence::Kind::Constant: return cb < bound ? std::optional<std::int64_t>(1) : std::nullopt;
        case ScaleSequence::Kind::Zero: return 1;
    }
    if (!(guess < 1e15)) return std::nullopt;
    auto n = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(guess)));
    auto ok = [&](std::int64_t m) { return std::abs(a.at(m)) * b < bound; };
    while (n > 1 && ok(n - 1)) --n;
    while (!ok(n)) ++n;
    return n;
}

std::vector<Comparison> one_sided(std::vector<Comparison> certs, bool keep_lower) {
    std::vector<Comparison> out;
    for (auto c : certs) {
        if (c.kind == Comparison::Kind::ExactPower) c.kind = Comparison::Kind::UpperPower;
        if (c.kind == Comparison::Kind::LowerPower && !keep_lower) continue;
        out.push_back(c);
    }
    return out;
}

}  // namespace

std::string_view to_string(ModelKind k) {
    switch (k) {
        case ModelKind::IidMean: return "IID_MEAN";
        case ModelKind::ExplicitSpace: return "EXPLICIT_SPACE";
        case ModelKind::Deterministic: return "DETERMINISTIC";
        case ModelKind::Perturbed: return "PERTURBED";
        case ModelKind::Composed: return "COMPOSED";
    }
    return "?";
}

std::string_view to_string(ComposeOp op) {
    switch (op) {
        case ComposeOp::Sum: return "SUM";
        case ComposeOp::Product: return "PRODUCT";
        case ComposeOp::Quotient: return "QUOTIENT";
    }
    return "?";
}

double ScaleSequence::at(std::int64_t n) const {
    const double x = static_cast<double>(n);
    switch (kind) {
        case Kind::Power: return coef * std::pow(x, -power);
        case Kind::InvLog: return coef / std::log1p(x);
        case Kind::Constant: return coef;
        case Kind::Zero: return 0.0;
    }
    return 0.0;
}

double ScaleSequence::sup_abs() const {
    switch (kind) {
        case Kind::Power: return power >= 0.0 ? std::abs(coef) : kInf;
        case Kind::InvLog: return std::abs(coef) / std::log(2.0);
        case Kind::Constant: return std::abs(coef);
        case Kind::Zero: return 0.0;
    }
    return 0.0;
}

std::string ScaleSequence::label() const {
    switch (kind) {
        case Kind::Power: return fmt(coef) + "/n^" + fmt(power);
        case Kind::InvLog: return fmt(coef) + "/ln(n+1)";
        case Kind::Constant: return fmt(coef);
        case Kind::Zero: return "0";
    }
    return "?";
}

SequenceModel SequenceModel::iid_mean(const DistributionSpec& d) {
    SequenceModel m;
    m.kind = ModelKind::IidMean;
    m.base = d;
    m.validate();
    return m;
}

SequenceModel SequenceModel::explicit_space(const ExampleSpec& e) {
    SequenceModel m;
    m.kind = ModelKind::ExplicitSpace;
    m.example = e;
    m.validate();
    return m;
}

SequenceModel SequenceModel::perturbed(const DistributionSpec& limit, const ScaleSequence& a,
                                       const DistributionSpec& noise) {
    SequenceModel m;
    m.kind = ModelKind::Perturbed;
    m.base = limit;
    m.scale = a;
    m.noise = noise;
    m.validate();
    return m;
}

SequenceModel SequenceModel::deterministic(const DistributionSpec& limit, const ScaleSequence& a) {
    return perturbed(limit, a, DistributionSpec::point_mass(1.0));
}

SequenceModel SequenceModel::composed(ComposeOp op, const SequenceModel& x, const SequenceModel& y) {
    SequenceModel m;
    m.kind = ModelKind::Composed;
    m.op = op;
    m.x = std::make_shared<SequenceModel>(x);
    m.y = std::make_shared<SequenceModel>(y);
    m.validate();
    return m;
}

namespace {

// Lower bound on inf_n |Y_n| for a model with a constant limit.
double lower_abs_bound(const SequenceModel& y) {
    const Law lim = limit_law(y);
    if (!lim.is_point()) return 0.0;
    const double c = std::abs(lim.atoms()[0].value);
    switch (y.kind) {
        case ModelKind::Perturbed: {
            const double w = y.scale.vanishes() ? 0.0 : y.scale.sup_abs() * y.noise.ess_sup_abs();
            return std::max(0.0, c - w);
        }
        case ModelKind::IidMean:
            return y.base.is_degenerate() ? c : 0.0;
        default: return 0.0;
    }
}

}  // namespace

void SequenceModel::validate() const {
    switch (kind) {
        case ModelKind::IidMean:
            base.validate();
            break;
        case ModelKind::ExplicitSpace:
            example.validate();
            break;
        case ModelKind::Deterministic:
        case ModelKind::Perturbed:
            base.validate();
            noise.validate();
            if (scale.kind == ScaleSequence::Kind::Power && scale.power < 0.0)
                throw PreconditionError("perturbation exponent must be nonnegative");
            if (!std::isfinite(scale.coef)) throw PreconditionError("perturbation coefficient must be finite");
            break;
        case ModelKind::Composed: {
            if (!x || !y) throw PreconditionError("composed model needs both operands");
            x->validate();
            y->validate();
            const Law ly = limit_law(*y);
            if (!ly.is_point()) throw PreconditionError("composition: y must converge to a constant C");
            const double c = ly.atoms()[0].value;
            if (op == ComposeOp::Product && !std::isfinite(model_ess_bound(*x)))
                throw PreconditionError("PRODUCT requires x bounded (truncate its law)");
            if (op == ComposeOp::Quotient) {
                if (c == 0.0) throw PreconditionError("QUOTIENT requires C != 0");
                if (!std::isfinite(model_ess_bound(*x)))
                    throw PreconditionError("QUOTIENT requires x bounded (truncate its law)");
                if (!(lower_abs_bound(*y) > 0.0))
                    throw PreconditionError("QUOTIENT requires y bounded away from zero");
            }
            break;
        }
    }
}

ModelKind SequenceModel::reported_kind() const {
    if (kind == ModelKind::Perturbed && (noise.is_degenerate() || scale.vanishes())) return ModelKind::Deterministic;
    return kind;
}

bool SequenceModel::is_degenerate() const {
    switch (kind) {
        case ModelKind::IidMean: return base.is_degenerate();
        case ModelKind::ExplicitSpace: return example.name == ExampleName::Exa34 && example.iid.is_degenerate();
        case ModelKind::Deterministic:
        case ModelKind::Perturbed:
            return scale.vanishes() || (noise.is_degenerate() && noise.location == 0.0);
        case ModelKind::Composed: return x->is_degenerate() && y->is_degenerate();
    }
    return false;
}

std::string SequenceModel::id() const {
    if (!name.empty()) return name;
    switch (kind) {
        case ModelKind::IidMean: return "iid-mean(" + base.label() + ")";
        case ModelKind::ExplicitSpace: {
            std::string s = example.id();
            if (example.name == ExampleName::Exa34) return s + "(" + example.iid.label() + ")";
            if (example.name != ExampleName::Exa31) s += "(alpha=" + fmt(example.alpha) + ")";
            return s;
        }
        case ModelKind::Deterministic:
        case ModelKind::Perturbed:
            if (noise.is_degenerate())
                return base.label() + "+" + fmt(noise.location) + "*" + scale.label();
            return base.label() + "+" + noise.label() + "*" + scale.label();
        case ModelKind::Composed: {
            const char* sym = op == ComposeOp::Sum ? "+" : (op == ComposeOp::Product ? "*" : "/");
            return "(" + x->id() + ")" + sym + "(" + y->id() + ")";
        }
    }
    return "?";
}

std::optional<double> iid_center(const SequenceModel& m) {
    if (m.kind != ModelKind::IidMean) return std::nullopt;
    return m.base.center();
}

// ---- deviation ----------------------------------------------------------------

bool deviation_is_analytic(const SequenceModel& m) {
    switch (m.kind) {
        case ModelKind::IidMean:
            return !m.base.truncation && (m.base.family == Family::Normal || m.base.family == Family::Cauchy ||
                                          m.base.family == Family::PointMass);
        case ModelKind::ExplicitSpace: return true;
        case ModelKind::Deterministic:
        case ModelKind::Perturbed: return true;
        case ModelKind::Composed: return false;
    }
    return false;
}

bool deviation_is_cheap(const SequenceModel& m) {
    if (m.kind == ModelKind::ExplicitSpace && m.example.name == ExampleName::Exa34)
        return m.example.iid.is_discrete() || (m.example.iid.family == Family::Normal && !m.example.iid.truncation);
    if (m.kind == ModelKind::Perturbed) return m.noise.family != Family::StudentT;
    return true;
}

namespace {

void require_analytic(const SequenceModel& m) {
    if (!deviation_is_analytic(m))
        throw UnsupportedQuery("no closed form for X_n - X in model " + m.id());
}

}  // namespace

double deviation_moment(const SequenceModel& m, double p, std::int64_t n) {
    if (!(p > 0.0)) throw PreconditionError("moment order must be positive");
    if (n < 1) throw PreconditionError("index n must be >= 1");
    require_analytic(m);
    const double x = static_cast<double>(n);
    switch (m.kind) {
        case ModelKind::IidMean:
            switch (m.base.family) {
                case Family::PointMass: return 0.0;
                case Family::Normal: return std::pow(m.base.scale / std::sqrt(x), p) * normal_abs_moment(p);
                case Family::Cauchy: return DistributionSpec::cauchy(0.0, m.base.scale).abs_moment(p);
                default: break;
            }
            break;
        case ModelKind::ExplicitSpace:
            return example_series_term(m.example, SeriesQuantity::pth_moment(p), n);
        case ModelKind::Deterministic:
        case ModelKind::Perturbed: {
            const double a = std::abs(m.scale.at(n));
            if (a == 0.0) return 0.0;
            return std::pow(a, p) * m.noise.abs_moment(p);
        }
        default: break;
    }
    throw UnsupportedQuery("moment not available");
}

double deviation_sup(const SequenceModel& m, std::int64_t n) {
    if (n < 1) throw PreconditionError("index n must be >= 1");
    require_analytic(m);
    switch (m.kind) {
        case ModelKind::IidMean: return m.base.is_degenerate() ? 0.0 : kInf;
        case ModelKind::ExplicitSpace: return example_series_term(m.example, SeriesQuantity::sup_norm(), n);
        case ModelKind::Deterministic:
        case ModelKind::Perturbed: {
            const double a = std::abs(m.scale.at(n));
            if (a == 0.0) return 0.0;
            return a * m.noise.ess_sup_abs();
        }
        default: break;
    }
    throw UnsupportedQuery("sup norm not available");
}

double deviation_tail(const SequenceModel& m, double eps, std::int64_t n, TailSide side) {
    if (!(eps > 0.0)) throw PreconditionError("epsilon must be positive");
    if (n < 1) throw PreconditionError("index n must be >= 1");
    require_analytic(m);
    const double x = static_cast<double>(n);
    switch (m.kind) {
        case ModelKind::IidMean: {
            const double half = [&] {
                switch (m.base.family) {
                    case Family::PointMass: return 0.0;
                    case Family::Normal: return normal_sf(eps * std::sqrt(x) / m.base.scale);
                    case Family::Cauchy: return std::atan(m.base.scale / eps) / kPi;
                    default: return 0.0;
                }
            }();
            return side == TailSide::Abs ? 2.0 * half : half;
        }
        case ModelKind::ExplicitSpace: {
            const auto& e = m.example;
            if (side == TailSide::Abs || e.name == ExampleName::Exa34) {
                const double abs = example_series_term(e, SeriesQuantity::tail_prob(eps), n);
                if (side == TailSide::Abs) return abs;
                // X_n - X is symmetric; split the two-sided mass, correcting for atoms at +-eps.
                if (e.iid.is_discrete()) {
                    double p = 0.0;
                    for (auto [u, wu] : e.iid.atoms())
                        for (auto [v, wv] : e.iid.atoms())
                            if (side == TailSide::Above ? (u - v > eps) : (u - v <= -eps)) p += wu * wv;
                    return p;
                }
                return 0.5 * abs;
            }
            if (side == TailSide::Below) return 0.0;
            const double sq = 1.0 / (x * x);
            switch (e.name) {
                case ExampleName::Exa31: return eps < 1.0 ? sq : 0.0;
                case ExampleName::Exa32: return eps < 1.0 ? 1.0 / x : 0.0;
                case ExampleName::Exa33:
                    if (eps >= 1.0) return 0.0;
                    return sq + (1.0 - sq) * (std::pow(x, -1.0 / e.alpha) > eps ? 1.0 : 0.0);
                default: break;
            }
            break;
        }
        case ModelKind::Deterministic:
        case ModelKind::Perturbed: {
            const double a = m.scale.at(n);
            if (a == 0.0) return 0.0;
            const auto& w = m.noise;
            const double t = eps / std::abs(a);
            switch (side) {
                case TailSide::Abs: return std::min(1.0, p_ge(w, t) + p_le(w, -t));
                case TailSide::Above: return a > 0 ? p_gt(w, t) : p_lt(w, -t);
                case TailSide::Below: return a > 0 ? p_le(w, -t) : p_ge(w, t);
            }
            break;
        }
        default: break;
    }
    throw UnsupportedQuery("tail probability not available");
}

namespace {

// Comparisons for sum_n |a_n|^p * mass.
std::vector<Comparison> scale_power_certificates(const ScaleSequence& a, double p, double mass) {
    if (mass == 0.0 || a.vanishes()) return {Comparison::finite(1)};
    if (!std::isfinite(mass)) return {};
    const double c = std::pow(std::abs(a.coef), p) * mass;
    switch (a.kind) {
        case ScaleSequence::Kind::Power: return {Comparison::exact(c, a.power * p)};
        case ScaleSequence::Kind::InvLog: {
            // ln(n+1)^p <= (2p/e)^p * sqrt(2n)
            const double k = std::pow(std::exp(1.0) / (2.0 * p), p) / std::sqrt(2.0);
            return {Comparison::lower(c * k, 0.5)};
        }
        case ScaleSequence::Kind::Constant: return {Comparison::exact(c, 0.0)};
        case ScaleSequence::Kind::Zero: return {Comparison::finite(1)};
    }
    return {};
}

std::vector<Comparison> perturbed_tail_certificates(const SequenceModel& m, double eps, TailSide side) {
    const auto& a = m.scale;
    const auto& w = m.noise;
    if (a.vanishes()) return {Comparison::finite(1)};
    if (a.kind == ScaleSequence::Kind::Constant || (a.kind == ScaleSequence::Kind::Power && a.power == 0.0))
        return {Comparison::exact(deviation_tail(m, eps, 1, side), 0.0)};
    std::vector<Comparison> out;
    if (bounded(w)) {
        if (auto n0 = first_below(a, w.ess_sup_abs(), eps)) out.push_back(Comparison::finite(*n0));
        return out;
    }
    if (a.kind != ScaleSequence::Kind::Power) return out;
    const double c = std::abs(a.coef);
    const double q = a.power;
    const double half = side == TailSide::Abs ? 1.0 : 0.5;
    if (untruncated_centered(w, Family::Cauchy)) {
        const double s = w.scale;
        double n0d = std::ceil(std::pow(s * c / eps, 1.0 / q));
        std::int64_t n0 = n0d < 1e15 ? std::max<std::int64_t>(1, static_cast<std::int64_t>(n0d)) : 0;
        out.push_back(Comparison::upper(half * 2.0 * s * c / (kPi * eps), q));
        if (n0 > 0) out.push_back(Comparison::lower(half * s * c / (2.0 * eps), q, n0));
        return out;
    }
    if (untruncated_centered(w, Family::Normal)) {
        const double mexp = 2.0 / q;
        out.push_back(Comparison::upper(half * gaussian_power_envelope(mexp) * std::pow(w.scale * c / eps, mexp), 2.0));
        return out;
    }
    if (untruncated_centered(w, Family::Pareto)) {
        const bool upper_side = (a.coef > 0) == (side != TailSide::Below);
        if (side != TailSide::Abs && !upper_side) return {Comparison::finite(1)};
        double n0d = std::ceil(std::pow(w.scale * c / eps, 1.0 / q));
        const auto n0 = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::min(n0d, 1e15)));
        out.push_back(Comparison::exact(std::pow(w.scale * c / eps, w.shape), q * w.shape, n0));
        return out;
    }
    // Markov with a finite moment.
    const double order = w.moment_order_finite();
    const double k = order > 2.0 ? 2.0 : 0.9 * order;
    const double mk = w.abs_moment(k);
    if (std::isfinite(mk)) out.push_back(Comparison::upper(mk * std::pow(c / eps, k), q * k));
    return out;
}

}  // namespace

std::vector<Comparison> deviation_moment_certificates(const SequenceModel& m, double p) {
    require_analytic(m);
    switch (m.kind) {
        case ModelKind::IidMean:
            if (m.base.is_degenerate()) return {Comparison::finite(1)};
            if (m.base.family == Family::Normal)
                return {Comparison::exact(std::pow(m.base.scale, p) * normal_abs_moment(p), p / 2.0)};
            if (m.base.family == Family::Cauchy && p < 1.0) return {Comparison::exact(deviation_moment(m, p, 1), 0.0)};
            return {};
        case ModelKind::ExplicitSpace:
            return example_certificates(m.example, SeriesQuantity::pth_moment(p));
        case ModelKind::Deterministic:
        case ModelKind::Perturbed:
            return scale_power_certificates(m.scale, p, m.noise.abs_moment(p));
        default: return {};
    }
}

std::vector<Comparison> deviation_sup_certificates(const SequenceModel& m) {
    require_analytic(m);
    switch (m.kind) {
        case ModelKind::IidMean:
            if (m.base.is_degenerate()) return {Comparison::finite(1)};
            return {};
        case ModelKind::ExplicitSpace: return example_certificates(m.example, SeriesQuantity::sup_norm());
        case ModelKind::Deterministic:
        case ModelKind::Perturbed: return scale_power_certificates(m.scale, 1.0, m.noise.ess_sup_abs());
        default: return {};
    }
}

std::vector<Comparison> deviation_tail_certificates(const SequenceModel& m, double eps, TailSide side) {
    require_analytic(m);
    switch (m.kind) {
        case ModelKind::IidMean: {
            if (m.base.is_degenerate()) return {Comparison::finite(1)};
            const double half = side == TailSide::Abs ? 1.0 : 0.5;
            if (m.base.family == Family::Normal) {
                // 2(1 - Phi(u)) <= exp(-u^2/2) <= K_4 u^-4 with u = eps sqrt(n) / sd
                return {Comparison::upper(half * gaussian_power_envelope(4.0) * std::pow(m.base.scale / eps, 4.0), 2.0)};
            }
            if (m.base.family == Family::Cauchy) return {Comparison::exact(deviation_tail(m, eps, 1, side), 0.0)};
            return {};
        }
        case ModelKind::ExplicitSpace: {
            const auto& e = m.example;
            if (e.name == ExampleName::Exa34) return {Comparison::exact(deviation_tail(m, eps, 1, side), 0.0)};
            if (side == TailSide::Below) return {Comparison::finite(1)};
            auto certs = example_certificates(e, SeriesQuantity::tail_prob(eps));
            if (side == TailSide::Abs) return certs;
            if (eps >= 1.0) return {Comparison::finite(1)};
            return certs;  // nonnegative X_n: P(X_n > eps) matches P(X_n >= eps) past the threshold
        }
        case ModelKind::Deterministic:
        case ModelKind::Perturbed: {
            auto certs = perturbed_tail_certificates(m, eps, side);
            if (side == TailSide::Abs) return certs;
            const bool symmetric = m.noise.is_symmetric_about_zero();
            return one_sided(certs, symmetric);
        }
        default: return {};
    }
}

// ---- marginal laws ------------------------------------------------------------

bool marginal_is_analytic(const SequenceModel& m) {
    switch (m.kind) {
        case ModelKind::IidMean: return deviation_is_analytic(m);
        case ModelKind::ExplicitSpace: return true;
        case ModelKind::Deterministic:
        case ModelKind::Perturbed:
            return m.noise.is_degenerate() || m.base.is_degenerate() || m.scale.vanishes() ||
                   (untruncated_centered(m.noise, Family::Normal) && m.base.family == Family::Normal &&
                    !m.base.truncation);
        case ModelKind::Composed: {
            if (!marginal_is_analytic(*m.x) || !marginal_is_analytic(*m.y)) return false;
            return true;
        }
    }
    return false;
}

Law limit_law(const SequenceModel& m) {
    switch (m.kind) {
        case ModelKind::IidMean: {
            const auto c = m.base.center();
            if (!c) throw UnsupportedQuery("the summand law has no center");
            return Law::point(*c);
        }
        case ModelKind::ExplicitSpace:
            if (m.example.name == ExampleName::Exa34) return Law::of(m.example.iid);
            return Law::point(0.0);
        case ModelKind::Deterministic:
        case ModelKind::Perturbed: return Law::of(m.base);
        case ModelKind::Composed: {
            const Law lx = limit_law(*m.x);
            const double c = limit_law(*m.y).atoms().at(0).value;
            switch (m.op) {
                case ComposeOp::Sum: return lx.affine(c, 1.0);
                case ComposeOp::Product: return lx.affine(0.0, c);
                case ComposeOp::Quotient: return lx.affine(0.0, 1.0 / c);
            }
        }
    }
    throw UnsupportedQuery("limit law not available");
}

Law marginal_law(const SequenceModel& m, std::int64_t n) {
    if (n < 1) throw PreconditionError("index n must be >= 1");
    if (!marginal_is_analytic(m)) throw UnsupportedQuery("no closed-form marginal law for " + m.id());
    const double x = static_cast<double>(n);
    switch (m.kind) {
        case ModelKind::IidMean:
            switch (m.base.family) {
                case Family::PointMass: return Law::point(m.base.location);
                case Family::Normal: return Law::of(DistributionSpec::normal(m.base.location, m.base.scale / std::sqrt(x)));
                case Family::Cauchy: return Law::of(m.base);
                default: break;
            }
            break;
        case ModelKind::ExplicitSpace: {
            const double sq = 1.0 / (x * x);
            Law l;
            switch (m.example.name) {
                case ExampleName::Exa31:
                    return Law::mixture({{sq, Law::point(1.0)}, {1.0 - sq, Law::point(0.0)}});
                case ExampleName::Exa32:
                    return Law::mixture({{1.0 / x, Law::point(1.0)}, {1.0 - 1.0 / x, Law::point(0.0)}});
                case ExampleName::Exa33:
                    return Law::mixture({{sq, Law::point(1.0)},
                                         {1.0 - sq, Law::point(std::pow(x, -1.0 / m.example.alpha))}});
                case ExampleName::Exa34: return Law::of(m.example.iid);
            }
            break;
        }
        case ModelKind::Deterministic:
        case ModelKind::Perturbed: {
            const double a = m.scale.at(n);
            if (a == 0.0) return Law::of(m.base);
            if (m.noise.is_degenerate()) return Law::of(m.base).affine(a * m.noise.location, 1.0);
            if (m.base.is_degenerate()) return Law::of(m.noise).affine(m.base.location, a);
            const double sd = std::hypot(m.base.scale, a * m.noise.scale);
            return Law::of(DistributionSpec::normal(m.base.location, sd));
        }
        case ModelKind::Composed: {
            const Law lx = marginal_law(*m.x, n);
            const Law ly = marginal_law(*m.y, n);
            if (!ly.pieces().empty()) throw UnsupportedQuery("composition needs a discrete y_n");
            std::vector<std::pair<double, Law>> parts;
            for (const auto& at : ly.atoms()) {
                switch (m.op) {
                    case ComposeOp::Sum: parts.emplace_back(at.weight, lx.affine(at.value, 1.0)); break;
                    case ComposeOp::Product: parts.emplace_back(at.weight, lx.affine(0.0, at.value)); break;
                    case ComposeOp::Quotient: parts.emplace_back(at.weight, lx.affine(0.0, 1.0 / at.value)); break;
                }
            }
            return Law::mixture(parts);
        }
    }
    throw UnsupportedQuery("marginal law not available");
}

double model_ess_bound(const SequenceModel& m) {
    switch (m.kind) {
        case ModelKind::IidMean: return m.base.ess_sup_abs();
        case ModelKind::ExplicitSpace:
            return m.example.name == ExampleName::Exa34 ? m.example.iid.ess_sup_abs() : 1.0;
        case ModelKind::Deterministic:
        case ModelKind::Perturbed: {
            const double w = m.scale.vanishes() ? 0.0 : m.scale.sup_abs() * m.noise.ess_sup_abs();
            return m.base.ess_sup_abs() + w;
        }
        case ModelKind::Composed: {
            const double bx = model_ess_bound(*m.x), by = model_ess_bound(*m.y);
            switch (m.op) {
                case ComposeOp::Sum: return bx + by;
                case ComposeOp::Product: return bx * by;
                case ComposeOp::Quotient: {
                    const double lo = lower_abs_bound(*m.y);
                    return lo > 0.0 ? bx / lo : kInf;
                }
            }
        }
    }
    return kInf;
}

namespace {

std::vector<Comparison> scaled_upper(const std::vector<Comparison>& certs, double k) {
    std::vector<Comparison> out;
    for (auto c : certs) {
        if (c.kind == Comparison::Kind::LowerPower) continue;
        if (c.kind == Comparison::Kind::ExactPower) c.kind = Comparison::Kind::UpperPower;
        c.coef *= k;
        out.push_back(c);
    }
    return out;
}

std::int64_t index_from(double x) {
    return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(std::min(x, 1e15))));
}

// E f(X_n) - f(0) for the first three examples, f nondecreasing:
//   w_n (f(1) - f(0)) + (1 - w_n)(f(v_n) - f(0)), with v_n = 0 except in the third.
std::vector<Comparison> explicit_ramp_certificates(const ExampleSpec& e, double a, double s) {
    const double jump = ramp(1.0, a, s) - ramp(0.0, a, s);
    auto atom_only = [jump](double q, std::int64_t n0) {
        return jump == 0.0 ? Comparison::finite(n0) : Comparison::exact(jump, q, n0);
    };
    switch (e.name) {
        case ExampleName::Exa31: return {atom_only(2.0, 1)};
        case ExampleName::Exa32: return {atom_only(1.0, 1)};
        case ExampleName::Exa33: {
            const double q = 1.0 / e.alpha;
            std::vector<Comparison> out{Comparison::upper(jump + 1.0 / s, std::min(2.0, q))};
            if (a - s <= 0.0 && 0.0 < a + s) {
                // f rises with slope 1/s just right of 0, once v_n <= a + s.
                const auto n0 = std::max<std::int64_t>(2, index_from(std::pow(a + s, -e.alpha)));
                out.push_back(Comparison::lower(0.75 / s, q, n0));
            } else if (0.0 >= a + s) {
                out.push_back(Comparison::finite(1));
            } else {
                // f is flat at -1 below a - s > 0, which v_n enters eventually.
                out.push_back(atom_only(2.0, index_from(std::pow(a - s, -e.alpha))));
            }
            return out;
        }
        case ExampleName::Exa34: return {Comparison::finite(1)};
    }
    return {};
}

bool marginal_equals_limit(const SequenceModel& m) {
    return m.is_degenerate() || (m.kind == ModelKind::ExplicitSpace && m.example.name == ExampleName::Exa34);
}

}  // namespace

std::vector<Comparison> ramp_gap_certificates(const SequenceModel& m, double center, double width) {
    if (!(width > 0.0)) throw PreconditionError("ramp width must be positive");
    if (marginal_equals_limit(m)) return {Comparison::finite(1)};
    if (m.kind == ModelKind::Composed) {
        // |E f(x_n op y_n) - E f(X op C)| <= K E|y_n - C| when x_n has the law of X.
        if (!marginal_equals_limit(*m.x) || !deviation_is_analytic(*m.y)) return {};
        const double c = limit_law(*m.y).atoms().at(0).value;
        const double bx = model_ess_bound(*m.x);
        double k = 1.0 / width;
        if (m.op == ComposeOp::Product) k *= bx;
        if (m.op == ComposeOp::Quotient) k *= bx / (lower_abs_bound(*m.y) * std::abs(c));
        return scaled_upper(deviation_moment_certificates(*m.y, 1.0), k);
    }
    if (!deviation_is_analytic(m)) return {};
    if (m.kind == ModelKind::ExplicitSpace) return explicit_ramp_certificates(m.example, center, width);
    // Lipschitz: |E f(X_n) - E f(X)| <= E|X_n - X| / width.
    auto out = scaled_upper(deviation_moment_certificates(m, 1.0), 1.0 / width);
    if ((m.kind == ModelKind::Perturbed || m.kind == ModelKind::Deterministic) && m.noise.is_degenerate() &&
        m.scale.kind == ScaleSequence::Kind::Power) {
        const double cw = std::abs(m.scale.coef * m.noise.location);
        if (auto n0 = first_below(m.scale, std::abs(m.noise.location), 0.5 * width)) {
            const double dmax = std::abs(m.scale.at(*n0) * m.noise.location);
            const Law lim = limit_law(m);
            const double lo = center - width + dmax, hi = center + width - dmax;
            const double mass = lim.cdf(hi) - lim.cdf_left(lo);
            if (mass > 0.0) out.push_back(Comparison::lower(cw / width * mass, m.scale.power, *n0));
        }
    }
    return out;
}

std::vector<Comparison> cdf_gap_certificates(const SequenceModel& m, double x) {
    if (marginal_equals_limit(m)) return {Comparison::finite(1)};
    if (m.kind == ModelKind::Composed || !deviation_is_analytic(m)) return {};
    const Law lim = limit_law(m);
    if (lim.is_point()) {
        const double c = lim.atoms()[0].value;
        if (x == c) throw PreconditionError("evaluation point is the atom of the limit");
        return x > c ? deviation_tail_certificates(m, x - c, TailSide::Above)
                     : deviation_tail_certificates(m, c - x, TailSide::Below);
    }
    if ((m.kind == ModelKind::Perturbed || m.kind == ModelKind::Deterministic) && m.noise.is_degenerate()) {
        const double w = std::abs(m.noise.location);
        if (lim.is_continuous()) {
            if (m.scale.kind != ScaleSequence::Kind::Power) return {};
            const double cw = std::abs(m.scale.coef) * w;
            const double dmax = lim.density_max(x - cw, x + cw);
            std::vector<Comparison> out{Comparison::upper(cw * dmax, m.scale.power)};
            // Lower bound from the smallest density on the window.
            double dmin = kInf;
            for (const auto& p : lim.pieces()) {
                double zl = (x - cw - p.shift) / p.scale, zh = (x + cw - p.shift) / p.scale;
                if (zl > zh) std::swap(zl, zh);
                dmin = std::min(dmin, p.weight * p.base.density_bounds(zl, zh).first / std::abs(p.scale));
            }
            if (lim.pieces().size() == 1 && dmin > 0.0) out.push_back(Comparison::lower(cw * dmin, m.scale.power));
            return out;
        }
        if (lim.pieces().empty()) {
            double dist = kInf;
            for (const auto& at : lim.atoms()) dist = std::min(dist, std::abs(x - at.value));
            if (dist == 0.0) throw PreconditionError("evaluation point is an atom of the limit");
            if (auto n0 = first_below(m.scale, w, dist)) return {Comparison::finite(*n0)};
        }
    }
    return {};
}

}  // namespace sconv
