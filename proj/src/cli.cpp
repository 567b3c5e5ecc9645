#include "sconv/cli.hpp"

#include "sconv/checkers.hpp"
#include "sconv/errors.hpp"
#include "sconv/explicit_space.hpp"
#include "sconv/kernels.hpp"
#include "sconv/lln.hpp"
#include "sconv/relations.hpp"
#include "sconv/report.hpp"
#include "sconv/special.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

namespace sconv {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

constexpr std::int64_t kDefaultHorizon = 100000;

struct Common {
    std::uint64_t seed = 1;
    std::int64_t reps = 1000;
    std::optional<std::int64_t> horizon;
    double grid_ratio = 2.0;
    std::string out = ".";
    std::string format = "both";
    int jobs = 1;
    std::string config;

    std::int64_t horizon_or(std::int64_t d) const { return horizon.value_or(d); }
    McConfig mc() const { return {reps, seed, 0, jobs}; }
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--seed", c.seed, "RNG seed")->capture_default_str();
    sub->add_option("--reps", c.reps, "Monte Carlo replicates")->capture_default_str()->check(CLI::PositiveNumber);
    sub->add_option("--horizon", c.horizon, "Series horizon N")->check(CLI::PositiveNumber);
    sub->add_option("--grid-ratio", c.grid_ratio, "Ratio of geometric grids")->capture_default_str()
        ->check(CLI::Range(1.01, 1e6));
    sub->add_option("--out", c.out, "Output directory")->envname("SCONV_OUT_DIR")->capture_default_str();
    sub->add_option("--format", c.format, "Artifact format")->capture_default_str()
        ->check(CLI::IsMember({"csv", "json", "both"}));
    sub->add_option("--jobs", c.jobs, "Worker threads (results do not depend on it)")->capture_default_str()
        ->check(CLI::Range(1, 1024));
    sub->add_option("--config", c.config, "key = value file; flags win");
}

// Writes artifacts and remembers what it wrote.
class Emitter {
public:
    Emitter(const Common& c, std::string command, ConfigEcho echo)
        : dir_(c.out), format_(c.format), command_(std::move(command)), seed_(c.seed), echo_(std::move(echo)) {}

    bool wants_json() const { return format_ != "csv"; }
    bool wants_csv() const { return format_ != "json"; }

    std::string json_file(const std::string& stem, json result) {
        return write(stem + ".json", dump(envelope(command_, seed_, echo_, std::move(result))));
    }
    std::string csv_file(const std::string& stem, const std::string& body) {
        std::string head = "# strongconv " + std::string(tool_version()) + "\n# command=" + command_ +
                           "\n# seed=" + std::to_string(seed_) + "\n";
        for (const auto& [k, v] : echo_)
            if (k != "seed") head += "# " + k + "=" + v + "\n";
        return write(stem + ".csv", head + body);
    }
    std::string text_file(const std::string& name, const std::string& body) { return write(name, body); }
    const std::vector<std::string>& written() const { return written_; }

private:
    std::string write(const std::string& name, const std::string& content) {
        const fs::path p = fs::path(dir_) / name;
        write_atomic(p, content);
        written_.push_back(p.string());
        return p.string();
    }

    std::string dir_, format_, command_;
    std::uint64_t seed_;
    ConfigEcho echo_;
    std::vector<std::string> written_;
};

std::string num(double x) { return format_number(x); }

ConfigEcho common_echo(const Common& c, std::int64_t horizon) {
    return {{"seed", std::to_string(c.seed)},
            {"reps", std::to_string(c.reps)},
            {"horizon", std::to_string(horizon)},
            {"grid-ratio", num(c.grid_ratio)}};
}

std::vector<std::int64_t> parse_grid(const std::string& text) {
    std::vector<std::int64_t> g;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t pos = 0;
            const double v = std::stod(item, &pos);
            if (v < 1 || v != std::floor(v)) throw std::invalid_argument("");
            g.push_back(static_cast<std::int64_t>(v));
        } catch (const std::exception&) {
            throw PreconditionError("grid entries must be positive integers: '" + item + "'");
        }
    }
    if (g.empty()) throw PreconditionError("empty grid");
    for (std::size_t i = 1; i < g.size(); ++i)
        if (g[i] <= g[i - 1]) throw PreconditionError("grid must be strictly increasing");
    return g;
}

std::string verdict_outcome(std::optional<SeriesVerdict> predicted, SeriesVerdict got) {
    if (!predicted) return "NO_PREDICTION";
    if (got == SeriesVerdict::Inconclusive) return "INCONCLUSIVE";
    return got == *predicted ? "PASS" : "FAIL";
}

// ---- verify-lln ----------------------------------------------------------

struct LlnArgs {
    std::string check = "strong-lp";
    std::string dist = "normal";
    std::string route = "analytic";
    double p = 2.0;
    double alpha = 2.0;
    std::string grid;
    int paths = 200;
    double tol = 0.01;
};

bool plain_normal(const DistributionSpec& d) { return d.family == Family::Normal && !d.truncation; }

int verify_lln(const Common& c, const LlnArgs& a, std::ostream& out, std::ostream& err) {
    const DistributionSpec dist = parse_distribution(a.dist);
    dist.validate();
    const SequenceModel model = SequenceModel::iid_mean(dist);
    const std::int64_t horizon = c.horizon_or(kDefaultHorizon);
    ConfigEcho echo = common_echo(c, horizon);
    echo.insert(echo.end(), {{"check", a.check}, {"dist", dist.label()}});
    const bool finite_var = dist.moment_order_finite() > 2.0 && !dist.is_degenerate();
    json res;
    std::string outcome = "NO_PREDICTION";
    const std::string stem = "verify_lln_" + a.check;

    if (a.check == "strong-lp") {
        echo.insert(echo.end(), {{"route", a.route}, {"p", num(a.p)}});
        if (!(a.p > 0)) throw PreconditionError("p must be positive");
        std::optional<SeriesVerdict> predicted;
        if (finite_var && a.p <= 2.0) predicted = SeriesVerdict::Divergent;
        if (finite_var && a.p > 2.0 && dist.moment_order_finite() > a.p) predicted = SeriesVerdict::Convergent;
        if (dist.is_degenerate()) predicted = SeriesVerdict::Convergent;
        SeriesDiagnostic d;
        if (a.route == "analytic") {
            if (!plain_normal(dist))
                throw PreconditionError("the analytic route covers untruncated normal summands; use --route mc");
            d = strong_lp_series_normal(dist.scale, a.p, horizon);
        } else {
            const auto grid = a.grid.empty() ? geometric_grid(horizon, c.grid_ratio) : parse_grid(a.grid);
            echo.emplace_back("grid", a.grid.empty() ? "geometric" : a.grid);
            const MomentCurve curve = estimate_pth_moment_of_mean(model, a.p, grid, c.mc());
            d = strong_lp_series(curve);
            std::vector<double> x, y;
            for (std::size_t i = 0; i < curve.grid.size(); ++i) {
                if (!(curve.estimates[i] > 0.0)) continue;
                x.push_back(std::log(static_cast<double>(curve.grid[i])));
                y.push_back(std::log(curve.estimates[i]));
            }
            json mexp = nullptr;
            if (x.size() >= 2) {
                const LineFit f = least_squares(x, y);
                mexp = {{"slope", f.slope}, {"half_width", 1.96 * f.slope_se}, {"expected", -a.p / 2.0}};
            }
            res["moment_curve"] = to_json(curve);
            res["moment_exponent"] = std::move(mexp);
            if (c.format != "json") {
                Emitter e(c, "verify-lln", echo);
                e.csv_file(stem + "_curve", moment_curve_csv(curve));
            }
        }
        outcome = verdict_outcome(predicted, d.verdict);
        res["series"] = to_json(d);
        res["predicted"] = predicted ? json(to_string(*predicted)) : json(nullptr);
        Emitter e(c, "verify-lln", echo);
        if (e.wants_csv()) e.csv_file(stem + "_series", series_csv(d));
        out << "strong-lp p=" << num(a.p) << ": " << to_string(d.verdict) << " (" << outcome << ")\n";
    } else if (a.check == "strong-as") {
        echo.insert(echo.end(), {{"alpha", num(a.alpha)}, {"paths", std::to_string(a.paths)}, {"tol", num(a.tol)}});
        if (!(a.alpha > 0)) throw PreconditionError("alpha must be positive");
        if (a.paths < 1) throw PreconditionError("paths must be >= 1");
        const auto mu = dist.center();
        if (!mu) throw PreconditionError("the summand law has no center");
        const std::int64_t low = std::max<std::int64_t>(1, horizon / 10);
        std::vector<std::int64_t> cps{low};
        if (horizon > low) cps.push_back(horizon);
        const SumMatrix t = c.jobs == 1
                                ? path_totals_serial(dist, *mu, a.alpha, cps, a.paths, c.seed, 0)
                                : path_totals_parallel(dist, *mu, a.alpha, cps, a.paths, c.seed, 0, c.jobs);
        const std::size_t last = cps.size() - 1;
        CompensatedSum sum, sum2;
        int above = 0, settled = 0;
        std::string csv = "path,T_low,T_N,increment\n";
        const double lnN = std::log(static_cast<double>(horizon));
        for (std::int64_t r = 0; r < a.paths; ++r) {
            const double tl = t.at(r, 0), tn = t.at(r, last);
            sum.add(tn);
            sum2.add(tn * tn);
            if (tn >= 0.5 * lnN) ++above;
            if (tn - tl < a.tol) ++settled;
            csv += std::to_string(r) + ',' + num(tl) + ',' + num(tn) + ',' + num(tn - tl) + '\n';
        }
        const double n = a.paths;
        const double mean = sum.value() / n;
        const double var = a.paths > 1 ? std::max(0.0, (sum2.value() - n * mean * mean) / (n - 1)) : 0.0;
        const double settled_frac = settled / n;
        res["checkpoints"] = cps;
        res["mean_T_N"] = mean;
        res["std_err_T_N"] = std::sqrt(var / n);
        res["fraction_T_N_above_half_log_N"] = above / n;
        res["fraction_settled"] = settled_frac;
        if (a.alpha == 2.0 && dist.variance())
            res["expected_mean_T_N"] = *dist.variance() * generalized_harmonic(horizon, 1.0);
        std::optional<SeriesVerdict> predicted;
        if (finite_var) predicted = a.alpha <= 2.0 ? SeriesVerdict::Divergent : SeriesVerdict::Convergent;
        if (predicted) {
            const bool conv = *predicted == SeriesVerdict::Convergent;
            if (settled_frac >= 0.95) outcome = conv ? "PASS" : "FAIL";
            else if (settled_frac <= 0.05) outcome = conv ? "FAIL" : "PASS";
            else outcome = "INCONCLUSIVE";
        }
        res["predicted"] = predicted ? json(to_string(*predicted)) : json(nullptr);
        Emitter e(c, "verify-lln", echo);
        if (e.wants_csv()) e.csv_file(stem + "_paths", csv);
        out << "strong-as alpha=" << num(a.alpha) << ": settled fraction " << num(settled_frac) << " (" << outcome
            << ")\n";
    } else if (a.check == "bdg") {
        echo.insert(echo.end(), {{"alpha", num(a.alpha)}, {"grid", a.grid.empty() ? "100,1000,10000" : a.grid}});
        const auto grid = a.grid.empty() ? std::vector<std::int64_t>{100, 1000, 10000} : parse_grid(a.grid);
        const SlopeFit f = bdg_slope_check(model, a.alpha, grid, c.mc());
        res["fit"] = to_json(f);
        res["bound_exponent"] = a.alpha / 2.0;
        outcome = f.exponent <= a.alpha / 2.0 + 0.1 ? "PASS" : "FAIL";
        out << "bdg alpha=" << num(a.alpha) << ": exponent " << num(f.exponent) << " (" << outcome << ")\n";
    } else {
        throw PreconditionError("unknown check '" + a.check + "'");
    }
    res["outcome"] = outcome;
    Emitter e(c, "verify-lln", echo);
    std::string path;
    if (e.wants_json()) path = e.json_file(stem, res);
    if (outcome == "FAIL") {
        err << "FAIL: see " << (path.empty() ? c.out : path) << "\n";
        return 1;
    }
    return 0;
}

// ---- estimate-series -----------------------------------------------------

struct SeriesArgs {
    std::string family = "baum-katz";
    std::string dist = "normal";
    double alpha = 2.0;
    double p = 1.0;
    double eps = 1.0;
};

int estimate_series(const Common& c, const SeriesArgs& a, std::ostream& out) {
    const DistributionSpec dist = parse_distribution(a.dist);
    dist.validate();
    const SequenceModel model = SequenceModel::iid_mean(dist);
    const std::int64_t horizon = c.horizon_or(kDefaultHorizon);
    ConfigEcho echo = common_echo(c, horizon);
    echo.insert(echo.end(), {{"family", a.family}, {"dist", dist.label()}, {"alpha", num(a.alpha)},
                             {"p", num(a.p)}, {"eps", num(a.eps)}});
    SeriesDiagnostic d;
    if (a.family == "baum-katz") {
        d = baum_katz_series(model, a.alpha, a.eps, horizon, c.mc(), c.grid_ratio);
    } else if (a.family == "chow") {
        d = chow_complete_moment_series(model, a.alpha, a.p, a.eps, horizon, c.mc(), c.grid_ratio);
    } else if (a.family == "chow-moment") {
        d = chow_moment_series(model, a.alpha, horizon, c.mc(), c.grid_ratio);
    } else if (a.family == "strong-lp") {
        if (plain_normal(dist))
            d = strong_lp_series_normal(dist.scale, a.p, horizon);
        else
            d = strong_lp_series(estimate_pth_moment_of_mean(model, a.p, geometric_grid(horizon, c.grid_ratio), c.mc()));
    } else {
        throw PreconditionError("unknown series family '" + a.family + "'");
    }
    Emitter e(c, "estimate-series", echo);
    const std::string stem = "series_" + a.family;
    if (e.wants_csv()) e.csv_file(stem, series_csv(d));
    if (e.wants_json()) e.json_file(stem, to_json(d));
    out << a.family << ": " << to_string(d.verdict) << "\n";
    return 0;
}

// ---- counterexample ------------------------------------------------------

struct ExampleArgs {
    std::string name;
    std::optional<double> alpha;
    std::string mode;
    std::optional<double> p;
    std::string quantity;
    double eps = 0.5;
    double omega = 0.5;
    std::string iid = "normal";
};

int counterexample(const Common& c, const ExampleArgs& a, std::ostream& out, std::ostream& err) {
    const double param = a.alpha.value_or(a.p.value_or(1.0));
    ExampleSpec spec = parse_example(a.name, param);
    spec.iid = parse_distribution(a.iid);
    spec.validate();
    const SequenceModel model = SequenceModel::explicit_space(spec);
    const std::int64_t horizon = c.horizon_or(kDefaultHorizon);
    ConfigEcho echo = common_echo(c, horizon);
    echo.insert(echo.end(), {{"example", spec.id()}, {"alpha", num(spec.alpha)}});
    if (spec.name == ExampleName::Exa34) echo.emplace_back("iid", spec.iid.label());
    CheckOptions opt;
    opt.horizon = horizon;
    opt.mc = c.mc();
    std::string stem = spec.id();
    json res;
    bool failed = false;

    if (!a.quantity.empty()) {
        const double order = a.p.value_or(param);
        SeriesQuantity q;
        if (a.quantity == "pth-moment") q = SeriesQuantity::pth_moment(order);
        else if (a.quantity == "sup-norm") q = SeriesQuantity::sup_norm();
        else if (a.quantity == "tail-prob") q = SeriesQuantity::tail_prob(a.eps);
        else if (a.quantity == "path-term") q = SeriesQuantity::alpha_path_term(order, a.omega);
        else throw PreconditionError("unknown quantity '" + a.quantity + "'");
        echo.insert(echo.end(), {{"quantity", a.quantity}, {"order", num(order)}, {"eps", num(a.eps)},
                                 {"omega", num(a.omega)}});
        SeriesOptions so;
        so.horizon = horizon;
        const SeriesDiagnostic d =
            analyze_analytic([&](std::int64_t n) { return example_series_term(spec, q, n); },
                             example_certificates(spec, q), so);
        res["quantity"] = a.quantity;
        res["series"] = to_json(d);
        stem += "_" + a.quantity;
        Emitter e(c, "counterexample", echo);
        if (e.wants_csv()) e.csv_file(stem, series_csv(d));
        out << spec.id() << " " << a.quantity << ": partial sum " << num(d.final_partial_sum()) << ", "
            << to_string(d.verdict) << "\n";
    } else {
        std::vector<ExpectedVerdict> checks;
        const auto expected = example_expected_verdicts(spec);
        if (!a.mode.empty()) {
            const ConvergenceMode mode = parse_mode(a.mode, a.p.value_or(param));
            echo.emplace_back("mode", mode.id());
            ExpectedVerdict ev{mode, Expectation::Holds, ""};
            auto it = std::find_if(expected.begin(), expected.end(),
                                   [&](const ExpectedVerdict& x) { return x.mode == mode; });
            checks.push_back(it != expected.end() ? *it : ev);
            if (it == expected.end()) checks.back().citation.clear();
            stem += "_" + std::string(tag_name(mode.tag));
        } else {
            checks = expected;
            stem += "_expected";
        }
        json arr = json::array();
        std::string csv;
        for (const auto& ev : checks) {
            const ModeVerdict v = check_mode(model, ev.mode, opt);
            json j = to_json(v);
            if (!ev.citation.empty()) {
                const Verdict want = ev.verdict == Expectation::Holds ? Verdict::Holds : Verdict::Fails;
                const bool ok = v.verdict == want;
                failed |= !ok;
                j["expected"] = to_string(want);
                j["claim"] = ev.citation;
                j["outcome"] = ok ? "PASS" : "FAIL";
            }
            if (checks.size() == 1 && v.series) csv = series_csv(*v.series);
            out << spec.id() << " " << v.mode.id() << ": " << to_string(v.verdict);
            if (!ev.citation.empty()) out << " (" << j["outcome"].get<std::string>() << ")";
            out << "\n";
            arr.push_back(std::move(j));
        }
        res["verdicts"] = std::move(arr);
        Emitter e(c, "counterexample", echo);
        if (e.wants_csv() && !csv.empty()) e.csv_file(stem, csv);
    }
    res["outcome"] = failed ? "FAIL" : "PASS";
    Emitter e(c, "counterexample", echo);
    std::string path;
    if (e.wants_json()) path = e.json_file(stem, res);
    if (failed) {
        err << "FAIL: see " << (path.empty() ? c.out : path) << "\n";
        return 1;
    }
    return 0;
}

// ---- relations -----------------------------------------------------------

int relations(const Common& c, const std::string& corpus, std::ostream& out, std::ostream& err) {
    if (corpus != "default") throw PreconditionError("unknown corpus '" + corpus + "'");
    RelationConfig cfg;
    cfg.seed = c.seed;
    cfg.jobs = c.jobs;
    cfg.horizon = c.horizon_or(cfg.horizon);
    ConfigEcho echo = common_echo(c, cfg.horizon);
    echo.emplace_back("corpus", corpus);
    const RelationReport rep = full_relation_matrix(cfg);
    Emitter e(c, "relations", echo);
    std::string path;
    if (e.wants_json()) path = e.json_file("relation_matrix", to_json(rep));
    if (e.wants_csv()) {
        std::string csv = "edge,status,outcome,witnesses\n";
        for (const auto& o : rep.edges)
            csv += '"' + o.edge.id + "\"," + std::string(to_string(o.edge.status)) + ',' +
                   std::string(to_string(o.outcome)) + ',' + std::to_string(o.witnesses.size()) + '\n';
        const std::string p = e.csv_file("relation_matrix", csv);
        if (path.empty()) path = p;
    }
    const std::string table = rep.matrix_table();
    e.text_file("relation_matrix.txt", table);
    out << table;
    int pass = 0, fail = 0, skip = 0;
    for (const auto& o : rep.edges) {
        if (o.outcome == Outcome::Pass) ++pass;
        else if (o.outcome == Outcome::Fail) ++fail;
        else ++skip;
    }
    out << pass << " PASS, " << fail << " FAIL, " << skip << " SKIPPED\n";
    if (!rep.passed()) {
        err << "FAIL: see " << path << "\n";
        return 1;
    }
    return 0;
}

// ---- extract-subseq ------------------------------------------------------

struct SubseqArgs {
    std::string model = "exa-3.2";
    double alpha = 1.0;
    int k_max = 30;
    int paths = 200;
    double tol = 0.01;
};

int extract_subseq(const Common& c, const SubseqArgs& a, std::ostream& out) {
    SequenceModel model;
    if (a.model == "inv-sqrt") {
        // P(|X_n| >= t) = min(1, 1/(t sqrt n))
        model = SequenceModel::perturbed(DistributionSpec::point_mass(0.0), ScaleSequence::pow(1.0, 0.5),
                                         DistributionSpec::pareto(1.0));
    } else {
        model = SequenceModel::explicit_space(parse_example(a.model, a.alpha));
    }
    model.validate();
    ConfigEcho echo{{"seed", std::to_string(c.seed)}, {"model", a.model},          {"alpha", num(a.alpha)},
                    {"k-max", std::to_string(a.k_max)}, {"paths", std::to_string(a.paths)}, {"tol", num(a.tol)}};
    const auto idx = extract_strong_subsequence(model_probe(model, a.alpha), a.k_max);
    json res;
    res["indices"] = idx;
    std::optional<double> rate;
    if (a.paths > 0) rate = subsequence_cauchy_rate(model, idx, a.alpha, a.paths, c.seed, a.tol);
    res["cauchy_rate"] = rate ? json(*rate) : json(nullptr);
    std::string csv = "k,index\n";
    for (std::size_t k = 0; k < idx.size(); ++k) csv += std::to_string(k + 1) + ',' + std::to_string(idx[k]) + '\n';
    Emitter e(c, "extract-subseq", echo);
    const std::string stem = "subseq_" + a.model;
    if (e.wants_csv()) e.csv_file(stem, csv);
    if (e.wants_json()) e.json_file(stem, res);
    out << "extracted " << idx.size() << " indices, last " << (idx.empty() ? 0 : idx.back());
    if (rate) out << ", Cauchy rate " << num(*rate);
    out << "\n";
    return 0;
}

// Appends config-file entries not already present as flags.
std::vector<std::string> merge_config(const std::vector<std::string>& args) {
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
    }
    if (path.empty()) return args;
    std::vector<std::string> merged = args;
    for (const auto& [k, v] : read_config_file(path)) {
        const std::string flag = "--" + k;
        const bool given = std::any_of(args.begin(), args.end(), [&](const std::string& s) {
            return s == flag || s.rfind(flag + "=", 0) == 0;
        });
        if (!given) merged.push_back(flag + "=" + v);
    }
    return merged;
}

}  // namespace

int run_command(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Strong convergence modes and law-of-large-numbers rates", "strongconv"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(tool_version()));

    Common common;
    LlnArgs lln;
    auto* s_lln = app.add_subcommand("verify-lln", "Rate theorems for iid sample means");
    add_common(s_lln, common);
    s_lln->add_option("--check", lln.check, "strong-lp | strong-as | bdg")->capture_default_str()
        ->check(CLI::IsMember({"strong-lp", "strong-as", "bdg"}));
    s_lln->add_option("--dist", lln.dist, "Summand law, e.g. normal, t(3), pareto(2.5)")->capture_default_str();
    s_lln->add_option("--route", lln.route, "analytic | mc")->capture_default_str()
        ->check(CLI::IsMember({"analytic", "mc"}));
    s_lln->add_option("--p", lln.p, "Moment order")->capture_default_str();
    s_lln->add_option("--alpha", lln.alpha, "Path exponent or moment order")->capture_default_str();
    s_lln->add_option("--grid", lln.grid, "Comma-separated grid");
    s_lln->add_option("--paths", lln.paths, "Paths for strong-as")->capture_default_str();
    s_lln->add_option("--tol", lln.tol, "Settling threshold for strong-as")->capture_default_str();

    ExampleArgs ex;
    auto* s_ex = app.add_subcommand("counterexample", "Verdicts and exact series of the explicit examples");
    add_common(s_ex, common);
    s_ex->add_option("example", ex.name, "exa-3.1 | exa-3.2 | exa-3.3 | exa-3.4")->required();
    s_ex->add_option("--alpha", ex.alpha, "Example order");
    s_ex->add_option("--mode", ex.mode, "Mode to check, e.g. s-lp, cc, s2-d");
    s_ex->add_option("--p", ex.p, "Order of the mode or quantity");
    s_ex->add_option("--quantity", ex.quantity, "pth-moment | sup-norm | tail-prob | path-term");
    s_ex->add_option("--eps", ex.eps, "Tail threshold")->capture_default_str();
    s_ex->add_option("--omega", ex.omega, "Sample point for path-term")->capture_default_str();
    s_ex->add_option("--iid", ex.iid, "Law of the iid example")->capture_default_str();

    std::string corpus = "default";
    auto* s_rel = app.add_subcommand("relations", "Implication matrix over the model corpus");
    add_common(s_rel, common);
    s_rel->add_option("--corpus", corpus, "Corpus name")->capture_default_str();

    SeriesArgs ser;
    auto* s_ser = app.add_subcommand("estimate-series", "Baum-Katz, Chow and S-Lp series for iid sums");
    add_common(s_ser, common);
    s_ser->add_option("--family", ser.family, "baum-katz | chow | chow-moment | strong-lp")->capture_default_str()
        ->check(CLI::IsMember({"baum-katz", "chow", "chow-moment", "strong-lp"}));
    s_ser->add_option("--dist", ser.dist, "Summand law")->capture_default_str();
    s_ser->add_option("--alpha", ser.alpha, "Rate exponent")->capture_default_str();
    s_ser->add_option("--p", ser.p, "Moment order (chow, strong-lp)")->capture_default_str();
    s_ser->add_option("--eps", ser.eps, "Threshold")->capture_default_str();

    SubseqArgs sub;
    auto* s_sub = app.add_subcommand("extract-subseq", "Greedy subsequence with summable tails");
    add_common(s_sub, common);
    s_sub->add_option("--model", sub.model, "exa-3.1 | exa-3.2 | exa-3.3 | inv-sqrt")->capture_default_str();
    s_sub->add_option("--alpha", sub.alpha, "Path exponent (and order of the third example)")->capture_default_str();
    s_sub->add_option("--k-max", sub.k_max, "Number of indices")->capture_default_str()->check(CLI::PositiveNumber);
    s_sub->add_option("--paths", sub.paths, "Paths for the Cauchy check (0 skips it)")->capture_default_str();
    s_sub->add_option("--tol", sub.tol, "Settling threshold for the Cauchy check")->capture_default_str();

    try {
        std::vector<std::string> args = merge_config(raw_args);
        std::reverse(args.begin(), args.end());  // CLI11 consumes from the back
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? 0 : 2;
    } catch (const PreconditionError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (*s_lln) return verify_lln(common, lln, out, err);
        if (*s_ex) return counterexample(common, ex, out, err);
        if (*s_rel) return relations(common, corpus, out, err);
        if (*s_ser) return estimate_series(common, ser, out);
        if (*s_sub) return extract_subseq(common, sub, out);
    } catch (const PreconditionError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const UnsupportedQuery& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "FAIL: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

int run_command(const std::vector<std::string>& args) { return run_command(args, std::cout, std::cerr); }

}  // namespace sconv
