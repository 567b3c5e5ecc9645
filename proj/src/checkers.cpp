#include "sconv/checkers.hpp"

#include "sconv/errors.hpp"
#include "sconv/kernels.hpp"
#include "sconv/path.hpp"
#include "sconv/special.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sconv {

namespace {

constexpr double kTrendZero = 1e-6;
constexpr double kTrendFloor = 1e-3;
constexpr double kTrendDecay = -0.05;
constexpr double kTrendFlat = -0.01;
constexpr double kPathTol = 0.01;

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

Verdict from_series(SeriesVerdict v) {
    switch (v) {
        case SeriesVerdict::Convergent: return Verdict::Holds;
        case SeriesVerdict::Divergent: return Verdict::Fails;
        default: return Verdict::Inconclusive;
    }
}

SeriesOptions options(std::int64_t horizon, bool expensive) {
    SeriesOptions o;
    o.horizon = horizon;
    o.expensive = expensive;
    return o;
}

std::string describe(const SeriesDiagnostic& d) {
    std::string s = "series " + std::string(to_string(d.verdict));
    if (!d.closed_form.empty()) s += " by " + d.closed_form;
    if (d.fit) s += "; fitted exponent " + fmt(d.fit->exponent) + " +- " + fmt(d.fit->half_width);
    s += "; partial sum " + fmt(d.final_partial_sum()) + " at n=" + std::to_string(d.horizon);
    return s;
}

void take_series(ModeVerdict& v, SeriesDiagnostic d, Method method) {
    v.verdict = from_series(d.verdict);
    v.method = method;
    v.flags |= d.flags;
    v.evidence = describe(d);
    v.series = std::move(d);
}

// Worst of several series; the first one carrying the worst verdict decides.
SeriesDiagnostic worst_of(std::vector<SeriesDiagnostic> all) {
    SeriesVerdict w = SeriesVerdict::Convergent;
    FlagSet flags;
    for (const auto& d : all) {
        w = worst_case(w, d.verdict);
        flags |= d.flags;
    }
    for (auto& d : all)
        if (d.verdict == w) {
            d.flags |= flags;
            return std::move(d);
        }
    return std::move(all.front());
}

Verdict trend(double v_end, double v_start, double ratio, std::string& evidence) {
    if (!std::isfinite(v_end)) {
        evidence = "term is infinite at the horizon";
        return Verdict::Fails;
    }
    const double slope = v_start > 0.0 && v_end > 0.0 ? std::log(v_end / v_start) / std::log(ratio)
                                                      : (v_end == 0.0 ? -kInf : 0.0);
    evidence = "value " + fmt(v_end) + " at the horizon, log-log slope " + fmt(slope) + " over the last span";
    if (v_end <= kTrendZero || slope <= kTrendDecay) return Verdict::Holds;
    if (v_end > kTrendFloor && slope >= kTrendFlat) return Verdict::Fails;
    return Verdict::Inconclusive;
}

std::string member_name(double a, double s) { return "ramp(a=" + fmt(a) + ",s=" + fmt(s) + ")"; }

bool scale_vanishes_at_infinity(const ScaleSequence& a) {
    switch (a.kind) {
        case ScaleSequence::Kind::Zero: return true;
        case ScaleSequence::Kind::Constant: return a.coef == 0.0;
        case ScaleSequence::Kind::Power: return a.coef == 0.0 || a.power > 0.0;
        case ScaleSequence::Kind::InvLog: return true;
    }
    return false;
}

double median(std::vector<double> v) {
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    double m = v[mid];
    if (v.size() % 2 == 0) m = 0.5 * (m + *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid)));
    return m;
}

// ---- per-mode routes ------------------------------------------------------------

bool analytic(const SequenceModel& m) { return deviation_is_analytic(m); }
bool cheap(const SequenceModel& m) { return deviation_is_cheap(m); }

void check_slp(const SequenceModel& m, double p, const CheckOptions& opt, ModeVerdict& v) {
    if (analytic(m)) {
        auto term = [&m, p](std::int64_t n) { return deviation_moment(m, p, n); };
        take_series(v, analyze_analytic(term, deviation_moment_certificates(m, p), options(opt.horizon, !cheap(m))),
                    Method::Analytic);
        return;
    }
    if (m.kind == ModelKind::IidMean) {
        const auto curve = estimate_pth_moment_of_mean(m, p, geometric_grid(opt.mc_horizon, 2.0), opt.mc);
        take_series(v, strong_lp_series(curve), Method::MonteCarlo);
        return;
    }
    throw UnsupportedQuery("S-Lp needs closed-form moments of X_n - X for " + m.id());
}

void check_sl_inf(const SequenceModel& m, const CheckOptions& opt, ModeVerdict& v) {
    if (!analytic(m))
        throw UnsupportedQuery("essential suprema are not estimable from samples; no analytic bound for " + m.id());
    auto term = [&m](std::int64_t n) { return deviation_sup(m, n); };
    take_series(v, analyze_analytic(term, deviation_sup_certificates(m), options(opt.horizon, !cheap(m))),
                Method::Analytic);
}

void check_cc(const SequenceModel& m, const CheckOptions& opt, ModeVerdict& v) {
    std::vector<SeriesDiagnostic> all;
    if (analytic(m)) {
        for (double eps : opt.epsilons) {
            auto term = [&m, eps](std::int64_t n) { return deviation_tail(m, eps, n); };
            all.push_back(
                analyze_analytic(term, deviation_tail_certificates(m, eps), options(opt.horizon, !cheap(m))));
        }
        take_series(v, worst_of(std::move(all)), Method::Analytic);
        return;
    }
    if (m.kind == ModelKind::IidMean) {
        for (double eps : opt.epsilons) all.push_back(baum_katz_series(m, 2.0, eps, opt.mc_horizon, opt.mc));
        take_series(v, worst_of(std::move(all)), Method::MonteCarlo);
        return;
    }
    throw UnsupportedQuery("c.c. needs tail probabilities of X_n - X for " + m.id());
}

// Value of the trend statistic at n, and the method used.
struct TrendProbe {
    std::function<double(std::int64_t)> at;
    std::int64_t end;
    std::int64_t start;
    Method method;
};

TrendProbe monte_carlo_probe(const SequenceModel& m, const CheckOptions& opt,
                             std::function<double(const SumMatrix&, std::size_t)> stat) {
    const std::int64_t end = opt.mc_horizon;
    const std::int64_t start = std::max<std::int64_t>(1, end / 16);
    const auto mu = iid_center(m);
    if (!mu) throw PreconditionError("summand law " + m.base.label() + " has no center");
    auto sums = std::make_shared<SumMatrix>(
        opt.mc.jobs == 1
            ? centered_sums_serial(m.base, *mu, {start, end}, opt.mc.reps, opt.mc.seed, opt.mc.stream_base)
            : centered_sums_parallel(m.base, *mu, {start, end}, opt.mc.reps, opt.mc.seed, opt.mc.stream_base,
                                     opt.mc.jobs));
    return {[sums, stat, start](std::int64_t n) { return stat(*sums, n == start ? 0 : 1); }, end, start,
            Method::MonteCarlo};
}

void run_trend(const TrendProbe& p, ModeVerdict& v) {
    const double ve = p.at(p.end);
    const double vs = p.at(p.start);
    v.method = p.method;
    v.verdict = trend(ve, vs, static_cast<double>(p.end) / static_cast<double>(p.start), v.evidence);
    v.params.emplace_back("trend_start", static_cast<double>(p.start));
    v.params.emplace_back("trend_end", static_cast<double>(p.end));
}

TrendProbe analytic_probe(const CheckOptions& opt, std::function<double(std::int64_t)> f) {
    return {std::move(f), opt.horizon, std::max<std::int64_t>(1, opt.horizon / 10), Method::Analytic};
}

void check_in_prob(const SequenceModel& m, const CheckOptions& opt, ModeVerdict& v) {
    if (analytic(m)) {
        run_trend(analytic_probe(opt,
                                 [&](std::int64_t n) {
                                     double w = 0.0;
                                     for (double eps : opt.epsilons) w = std::max(w, deviation_tail(m, eps, n));
                                     return w;
                                 }),
                  v);
        return;
    }
    if (m.kind == ModelKind::IidMean) {
        const auto eps = opt.epsilons;
        run_trend(monte_carlo_probe(m, opt,
                                    [eps](const SumMatrix& s, std::size_t j) {
                                        const double n = static_cast<double>(s.grid[j]);
                                        double w = 0.0;
                                        for (double e : eps) {
                                            std::int64_t c = 0;
                                            for (std::int64_t r = 0; r < s.reps; ++r)
                                                if (std::abs(s.at(r, j)) >= n * e) ++c;
                                            w = std::max(w, static_cast<double>(c) / static_cast<double>(s.reps));
                                        }
                                        return w;
                                    }),
                  v);
        return;
    }
    throw UnsupportedQuery("convergence in probability needs tails of X_n - X for " + m.id());
}

void check_lp(const SequenceModel& m, double p, const CheckOptions& opt, ModeVerdict& v) {
    if (analytic(m)) {
        run_trend(analytic_probe(opt, [&m, p](std::int64_t n) { return deviation_moment(m, p, n); }), v);
        return;
    }
    if (m.kind == ModelKind::IidMean) {
        run_trend(monte_carlo_probe(m, opt,
                                    [p](const SumMatrix& s, std::size_t j) {
                                        const double n = static_cast<double>(s.grid[j]);
                                        CompensatedSum acc;
                                        for (std::int64_t r = 0; r < s.reps; ++r)
                                            acc.add(std::pow(std::abs(s.at(r, j) / n), p));
                                        return acc.value() / static_cast<double>(s.reps);
                                    }),
                  v);
        if (m.base.moment_order_finite() <= p) v.flags.set(Flag::MomentWarning);
        return;
    }
    throw UnsupportedQuery("Lp convergence needs moments of X_n - X for " + m.id());
}

void check_l_inf(const SequenceModel& m, const CheckOptions& opt, ModeVerdict& v) {
    if (!analytic(m))
        throw UnsupportedQuery("essential suprema are not estimable from samples; no analytic bound for " + m.id());
    run_trend(analytic_probe(opt, [&m](std::int64_t n) { return deviation_sup(m, n); }), v);
}

void check_in_dist(const SequenceModel& m, const CheckOptions& opt, ModeVerdict& v) {
    if (!marginal_is_analytic(m)) throw UnsupportedQuery("no closed-form marginal laws for " + m.id());
    const Law lim = limit_law(m);
    const auto members = TestFunctionFamily::for_limit(lim).members();
    run_trend(analytic_probe(opt,
                             [&](std::int64_t n) {
                                 const Law ln = marginal_law(m, n);
                                 double w = 0.0;
                                 for (auto [a, s] : members) w = std::max(w, std::abs(ramp_gap(ln, lim, a, s)));
                                 return w;
                             }),
              v);
}

void take_family(ModeVerdict& v, const FamilySeries& f) {
    const auto& d = f.deciding();
    v.verdict = from_series(f.verdict);
    v.method = Method::Analytic;
    for (const auto& m : f.members) v.flags |= m.series.flags;
    v.evidence = d.member + ": " + describe(d.series) + " (" + std::to_string(f.members.size()) + " members)";
    v.series = d.series;
}

void check_as(const SequenceModel& m, const CheckOptions& opt, ModeVerdict& v) {
    v.method = Method::Analytic;
    switch (m.kind) {
        case ModelKind::ExplicitSpace:
            if (m.example.name == ExampleName::Exa34) {
                v.verdict = Verdict::Fails;
                v.evidence = "X_n - X is a nondegenerate iid difference; it does not shrink";
            } else {
                v.verdict = Verdict::Holds;
                v.evidence = "X_n(omega) -> 0 for every omega in (0,1)";
            }
            return;
        case ModelKind::IidMean:
            if (m.base.moment_order_finite() > 1.0) {
                v.verdict = Verdict::Holds;
                v.evidence = "finite mean: strong law of large numbers";
            } else {
                v.verdict = Verdict::Fails;
                v.evidence = "E|X| infinite: S_n/n diverges almost surely";
            }
            return;
        case ModelKind::Deterministic:
        case ModelKind::Perturbed: {
            if (!scale_vanishes_at_infinity(m.scale)) {
                v.verdict = Verdict::Fails;
                v.evidence = "perturbation scale " + m.scale.label() + " does not vanish";
                return;
            }
            if (m.noise.is_degenerate()) {
                v.verdict = Verdict::Holds;
                v.evidence = "deterministic shift " + m.scale.label() + " -> 0";
                return;
            }
            ModeVerdict cc = v;
            check_cc(m, opt, cc);
            v.verdict = cc.verdict;
            v.flags |= cc.flags;
            v.evidence = "independent deviations, so a.s. is equivalent to c.c. (Borel-Cantelli): " + cc.evidence;
            v.series = cc.series;
            return;
        }
        case ModelKind::Composed: {
            const ModeVerdict vx = check_mode(*m.x, ConvergenceMode::as(), opt);
            const ModeVerdict vy = check_mode(*m.y, ConvergenceMode::as(), opt);
            const double c = limit_law(*m.y).atoms().at(0).value;
            v.flags |= vx.flags;
            v.flags |= vy.flags;
            if (vy.verdict != Verdict::Holds) {
                v.verdict = Verdict::Inconclusive;
                v.evidence = "y operand: " + vy.evidence;
                return;
            }
            if (m.op == ComposeOp::Product && c == 0.0) {
                v.verdict = Verdict::Holds;
                v.evidence = "bounded x times y_n -> 0";
                return;
            }
            v.verdict = vx.verdict;
            v.evidence = "y_n -> C a.s., so the composition follows x: " + vx.evidence;
            return;
        }
    }
}

void check_s_alpha_iid(const SequenceModel& m, double alpha, const CheckOptions& opt, ModeVerdict& v) {
    const auto mu = iid_center(m);
    if (!mu) throw PreconditionError("summand law " + m.base.label() + " has no center");
    const auto checkpoints = geometric_grid(opt.mc_horizon, 2.0);
    if (checkpoints.size() < 3) throw PreconditionError("Monte Carlo horizon too short for a path series");
    const SumMatrix t =
        opt.mc.jobs == 1
            ? path_totals_serial(m.base, *mu, alpha, checkpoints, opt.mc.reps, opt.mc.seed, opt.mc.stream_base)
            : path_totals_parallel(m.base, *mu, alpha, checkpoints, opt.mc.reps, opt.mc.seed, opt.mc.stream_base,
                                   opt.mc.jobs);
    const std::size_t k = checkpoints.size();
    std::int64_t small = 0;
    std::vector<std::vector<double>> block(k, std::vector<double>(static_cast<std::size_t>(t.reps)));
    for (std::int64_t r = 0; r < t.reps; ++r) {
        for (std::size_t j = 0; j < k; ++j) {
            const double prev = j == 0 ? 0.0 : t.at(r, j - 1);
            const double width = static_cast<double>(checkpoints[j] - (j == 0 ? 0 : checkpoints[j - 1]));
            block[j][static_cast<std::size_t>(r)] = (t.at(r, j) - prev) / width;
        }
        if (t.at(r, k - 1) - t.at(r, k - 2) < kPathTol) ++small;
    }
    std::vector<double> med;
    for (auto& b : block) med.push_back(median(b));
    const TailFitResult fit = fit_tail_exponent(checkpoints, med);
    const double frac = static_cast<double>(small) / static_cast<double>(t.reps);
    v.method = Method::MonteCarlo;
    v.flags |= fit.flags;
    if (m.base.moment_order_finite() <= alpha) v.flags.set(Flag::MomentWarning);
    v.params.emplace_back("paths", static_cast<double>(t.reps));
    v.params.emplace_back("cauchy_fraction", frac);
    switch (fit.verdict) {
        case SeriesVerdict::Convergent: v.verdict = Verdict::Holds; break;
        case SeriesVerdict::Divergent: v.verdict = Verdict::Fails; break;
        case SeriesVerdict::Inconclusive:
            v.verdict = frac >= 0.95 ? Verdict::Holds : (frac <= 0.5 ? Verdict::Fails : Verdict::Inconclusive);
            break;
    }
    v.evidence = "median path block terms " + std::string(to_string(fit.verdict));
    if (fit.fit) v.evidence += " (fitted exponent " + fmt(fit.fit->exponent) + ")";
    v.evidence += "; last-half increment below " + fmt(kPathTol) + " on " + fmt(100.0 * frac) + "% of " +
                  std::to_string(t.reps) + " paths";
}

void check_s_alpha(const SequenceModel& m, double alpha, const CheckOptions& opt, ModeVerdict& v) {
    v.method = Method::Analytic;
    switch (m.kind) {
        case ModelKind::ExplicitSpace: {
            if (m.example.name == ExampleName::Exa34) {
                v.verdict = Verdict::Fails;
                v.evidence = "|X_n - X| does not shrink for a nondegenerate iid sequence";
                return;
            }
            // Per-omega series on a fixed grid of omegas.
            std::vector<SeriesDiagnostic> all;
            int divergent = 0, convergent = 0;
            constexpr int kOmegas = 19;
            for (int i = 1; i <= kOmegas; ++i) {
                const auto q = SeriesQuantity::alpha_path_term(alpha, i / 20.0);
                auto term = [&m, q](std::int64_t n) { return example_series_term(m.example, q, n); };
                all.push_back(analyze_analytic(term, example_certificates(m.example, q), options(opt.horizon, false)));
                if (all.back().verdict == SeriesVerdict::Divergent) ++divergent;
                if (all.back().verdict == SeriesVerdict::Convergent) ++convergent;
            }
            SeriesDiagnostic d = worst_of(std::move(all));
            v.flags |= d.flags;
            v.verdict = convergent == kOmegas ? Verdict::Holds : (divergent > 0 ? Verdict::Fails : Verdict::Inconclusive);
            v.evidence = "per-omega series over omega = k/20: " + std::to_string(convergent) + " convergent, " +
                         std::to_string(divergent) + " divergent; worst " + describe(d);
            v.series = std::move(d);
            return;
        }
        case ModelKind::Deterministic:
        case ModelKind::Perturbed: {
            auto moment = [&m, alpha](std::int64_t n) { return deviation_moment(m, alpha, n); };
            SeriesDiagnostic mean =
                analyze_analytic(moment, deviation_moment_certificates(m, alpha), options(opt.horizon, !cheap(m)));
            if (m.noise.is_degenerate() || mean.verdict == SeriesVerdict::Convergent) {
                // Deterministic terms, or E sum < infinity.
                take_series(v, std::move(mean), Method::Analytic);
                if (!m.noise.is_degenerate()) v.evidence = "expected path sum finite: " + v.evidence;
                return;
            }
            // Independent |a_n W_n|^alpha: if P(|D_n| >= 1) is not summable, infinitely many terms exceed 1.
            auto tail = [&m](std::int64_t n) { return deviation_tail(m, 1.0, n); };
            SeriesDiagnostic big =
                analyze_analytic(tail, deviation_tail_certificates(m, 1.0), options(opt.horizon, !cheap(m)));
            if (big.verdict == SeriesVerdict::Divergent) {
                take_series(v, std::move(big), Method::Analytic);
                v.verdict = Verdict::Fails;
                v.evidence = "terms exceed 1 infinitely often (Borel-Cantelli): " + v.evidence;
                return;
            }
            auto scale = [&m, alpha](std::int64_t n) { return std::pow(std::abs(m.scale.at(n)), alpha); };
            SeriesDiagnostic s = analyze_analytic(scale, {}, options(opt.horizon, false));
            if (s.verdict == SeriesVerdict::Divergent) {
                take_series(v, std::move(s), Method::Analytic);
                v.verdict = Verdict::Fails;
                v.evidence = "sum |a_n|^alpha diverges with nondegenerate iid noise (three-series): " + v.evidence;
                return;
            }
            take_series(v, std::move(mean), Method::Analytic);
            v.verdict = Verdict::Inconclusive;
            return;
        }
        case ModelKind::IidMean: check_s_alpha_iid(m, alpha, opt, v); return;
        case ModelKind::Composed: throw UnsupportedQuery("S_alpha-a.s. is not available for composed models");
    }
}

}  // namespace

std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::Holds: return "HOLDS";
        case Verdict::Fails: return "FAILS";
        case Verdict::Inconclusive: return "INCONCLUSIVE";
    }
    return "?";
}

std::string_view to_string(Method m) { return m == Method::Analytic ? "ANALYTIC" : "MONTE_CARLO"; }

// ---- test families --------------------------------------------------------------

TestFunctionFamily TestFunctionFamily::for_limit(const Law& limit) {
    TestFunctionFamily f;
    if (limit.is_continuous()) {
        for (int i = 0; i < 21; ++i) f.centers.push_back(limit.quantile(0.025 + 0.0475 * i));
        return f;
    }
    for (const auto& at : limit.atoms())
        for (double s : f.scales) {
            f.centers.push_back(at.value - s);
            f.centers.push_back(at.value + s);
        }
    if (!limit.pieces().empty())
        for (int i = 0; i < 21; ++i) f.centers.push_back(limit.quantile(0.025 + 0.0475 * i));
    std::sort(f.centers.begin(), f.centers.end());
    f.centers.erase(std::unique(f.centers.begin(), f.centers.end()), f.centers.end());
    return f;
}

std::vector<std::pair<double, double>> TestFunctionFamily::members() const {
    std::vector<std::pair<double, double>> out;
    for (double s : scales)
        for (double a : centers) out.emplace_back(a, s);
    return out;
}

const MemberSeries& FamilySeries::deciding() const {
    if (members.empty()) throw PreconditionError("empty family");
    for (const auto& m : members)
        if (m.series.verdict == verdict) return m;
    return members.front();
}

FamilySeries s1d_series(const SequenceModel& model, const TestFunctionFamily& family, std::int64_t horizon) {
    if (!marginal_is_analytic(model)) throw UnsupportedQuery("no closed-form marginal laws for " + model.id());
    for (double s : family.scales)
        if (!(s > 0.0)) throw PreconditionError("ramp scales must be positive");
    const Law lim = limit_law(model);
    FamilySeries out;
    for (auto [a, s] : family.members()) {
        auto term = [&model, &lim, a = a, s = s](std::int64_t n) {
            return std::abs(ramp_gap(marginal_law(model, n), lim, a, s));
        };
        out.members.push_back(
            {member_name(a, s), analyze_analytic(term, ramp_gap_certificates(model, a, s), options(horizon, true))});
        out.verdict = worst_case(out.verdict, out.members.back().series.verdict);
    }
    return out;
}

std::vector<double> default_eval_points(const Law& limit) {
    std::vector<double> pts;
    if (limit.is_continuous()) {
        for (int i = 0; i < 21; ++i) pts.push_back(limit.quantile(0.025 + 0.0475 * i));
        return pts;
    }
    for (const auto& at : limit.atoms())
        for (double d : {0.05, 0.25, 0.5, 2.0}) {
            pts.push_back(at.value - d);
            pts.push_back(at.value + d);
        }
    if (!limit.pieces().empty())
        for (int i = 0; i < 21; ++i) pts.push_back(limit.quantile(0.025 + 0.0475 * i));
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    std::erase_if(pts, [&](double x) {
        for (const auto& at : limit.atoms())
            if (std::abs(x - at.value) <= 1e-12 * std::max(1.0, std::abs(x))) return true;
        return false;
    });
    return pts;
}

FamilySeries s2d_series(const SequenceModel& model, const std::vector<double>& points, std::int64_t horizon) {
    if (!marginal_is_analytic(model)) throw UnsupportedQuery("no closed-form marginal laws for " + model.id());
    if (points.empty()) throw PreconditionError("S2-d needs at least one evaluation point");
    const Law lim = limit_law(model);
    for (double x : points)
        if (lim.cdf(x) - lim.cdf_left(x) > 0.0)
            throw PreconditionError("evaluation point x = " + fmt(x) + " is a discontinuity of the limit CDF");
    FamilySeries out;
    for (double x : points) {
        auto term = [&model, &lim, x](std::int64_t n) { return std::abs(cdf_gap(marginal_law(model, n), lim, x)); };
        out.members.push_back(
            {"x=" + fmt(x), analyze_analytic(term, cdf_gap_certificates(model, x), options(horizon, true))});
        out.verdict = worst_case(out.verdict, out.members.back().series.verdict);
    }
    return out;
}

SeriesDiagnostic prop37_condition2_series(const SequenceModel& model, double beta, double delta,
                                          std::int64_t horizon) {
    if (!(beta > 0.0)) throw PreconditionError("beta must be positive");
    if (!(delta > 0.0)) throw PreconditionError("delta must be positive");
    if (!deviation_is_analytic(model)) throw UnsupportedQuery("no closed-form tails for " + model.id());
    auto term = [&model, beta, delta](std::int64_t n) {
        if (n == 1) return 0.0;  // ln 1 = 0: the event is empty
        const double x = static_cast<double>(n);
        const double eps = delta / (x * std::pow(std::log(x), 1.0 + beta));
        return deviation_tail(model, eps, n);
    };
    return analyze_analytic(term, {}, options(horizon, !deviation_is_cheap(model)));
}

ModeVerdict check_mode(const SequenceModel& model, const ConvergenceMode& mode, const CheckOptions& opt) {
    mode.validate();
    model.validate();
    ModeVerdict v;
    v.mode = mode;
    v.seed = opt.mc.seed;
    if (mode.parameterized()) v.params.emplace_back(mode.tag == ModeTag::SAlphaAS ? "alpha" : "p", mode.param);
    if (model.is_degenerate()) {
        v.verdict = Verdict::Holds;
        v.flags.set(Flag::Degenerate);
        v.evidence = "X_n - X vanishes identically";
        return v;
    }
    switch (mode.tag) {
        case ModeTag::SLP: check_slp(model, mode.param, opt, v); break;
        case ModeTag::SLInf: check_sl_inf(model, opt, v); break;
        case ModeTag::CC: check_cc(model, opt, v); break;
        case ModeTag::S1D: {
            if (!marginal_is_analytic(model)) throw UnsupportedQuery("no closed-form marginal laws for " + model.id());
            take_family(v, s1d_series(model, TestFunctionFamily::for_limit(limit_law(model)), opt.horizon));
            break;
        }
        case ModeTag::S2D: {
            if (!marginal_is_analytic(model)) throw UnsupportedQuery("no closed-form marginal laws for " + model.id());
            auto pts = default_eval_points(limit_law(model));
            pts.insert(pts.end(), opt.extra_points.begin(), opt.extra_points.end());
            take_family(v, s2d_series(model, pts, opt.horizon));
            break;
        }
        case ModeTag::AS: check_as(model, opt, v); break;
        case ModeTag::InProb: check_in_prob(model, opt, v); break;
        case ModeTag::LP: check_lp(model, mode.param, opt, v); break;
        case ModeTag::LInf: check_l_inf(model, opt, v); break;
        case ModeTag::InDist: check_in_dist(model, opt, v); break;
        case ModeTag::SAlphaAS: check_s_alpha(model, mode.param, opt, v); break;
    }
    return v;
}

// ---- subsequence extraction ------------------------------------------------------

TailProbe model_probe(const SequenceModel& model, double alpha) {
    if (!(alpha > 0.0)) throw PreconditionError("alpha must be positive");
    if (!deviation_is_analytic(model)) throw UnsupportedQuery("no closed-form tails for " + model.id());
    return [model, alpha](std::int64_t n, double t) {
        if (model.is_degenerate()) return 0.0;
        return deviation_tail(model, std::pow(t, 1.0 / alpha), n);
    };
}

std::vector<std::int64_t> extract_strong_subsequence(const TailProbe& probe, int k_max, const ExtractOptions& opt) {
    if (k_max < 1) throw PreconditionError("k_max must be >= 1");
    std::vector<std::int64_t> out;
    std::int64_t prev = 0;
    for (int k = 1; k <= k_max; ++k) {
        const double t = 1.0 / (static_cast<double>(k) * static_cast<double>(k));
        const double bound = t * (1.0 + opt.precision);
        auto ok = [&](std::int64_t n) { return probe(n, t) <= bound; };
        auto stalled = [&] {
            return ExtractionStalled(k, "no index below " + std::to_string(opt.cap) + " meets the bound for k = " +
                                            std::to_string(k));
        };
        std::int64_t lo = prev + 1;
        if (lo > opt.cap) throw stalled();
        std::int64_t pick = 0;
        if (ok(lo)) {
            pick = lo;
        } else if (opt.monotone) {
            // lo fails; gallop to a passing index, then bisect.
            std::int64_t bad = lo, step = 1, good = 0;
            while (good == 0) {
                const std::int64_t cand = bad > opt.cap - step ? opt.cap : bad + step;
                if (ok(cand)) {
                    good = cand;
                } else {
                    if (cand == opt.cap) throw stalled();
                    bad = cand;
                    step *= 2;
                }
            }
            while (good - bad > 1) {
                const std::int64_t mid = bad + (good - bad) / 2;
                (ok(mid) ? good : bad) = mid;
            }
            pick = good;
        } else {
            for (std::int64_t n = lo + 1; n <= opt.cap; ++n)
                if (ok(n)) {
                    pick = n;
                    break;
                }
            if (pick == 0) throw stalled();
        }
        out.push_back(pick);
        prev = pick;
    }
    return out;
}

double subsequence_cauchy_rate(const SequenceModel& model, const std::vector<std::int64_t>& indices, double alpha,
                               int paths, std::uint64_t seed, double tol) {
    if (indices.empty()) throw PreconditionError("empty index sequence");
    if (paths < 1) throw PreconditionError("paths must be >= 1");
    const std::size_t half = indices.size() / 2;
    int pass = 0;
    for (int r = 0; r < paths; ++r) {
        const PathSample p = sample_path(model, indices.back(), RngStream(seed, static_cast<std::uint64_t>(r)));
        double late = 0.0;
        for (std::size_t k = half; k < indices.size(); ++k) late += std::pow(std::abs(p.at(indices[k]) - p.limit), alpha);
        if (late < tol) ++pass;
    }
    return static_cast<double>(pass) / static_cast<double>(paths);
}

}  // namespace sconv
