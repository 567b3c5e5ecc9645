// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include "sconv/checkers.hpp"
#include "sconv/cli.hpp"
#include "sconv/kernels.hpp"
#include "sconv/lln.hpp"
#include "sconv/relations.hpp"
#include "sconv/special.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace sconv;
namespace fs = std::filesystem;

namespace {

double elapsed(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Line {
    int id;
    bool ok;
    std::string detail;
};

std::string fmt(const char* f, double a = 0, double b = 0, double c = 0, double d = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

Line criterion1() {
    const auto t0 = std::chrono::steady_clock::now();
    const std::int64_t N = 1000000;
    bool ok = true;
    std::string d;
    for (double p : {1.0, 2.0, 2.5, 3.0}) {
        const auto s = strong_lp_series_normal(1.0, p, N);
        const auto want = p <= 2.0 ? SeriesVerdict::Divergent : SeriesVerdict::Convergent;
        ok &= s.verdict == want;
        d += "p=" + fmt("%g", p) + " " + std::string(to_string(s.verdict)) + "; ";
    }
    const double t = elapsed(t0);
    ok &= t < 5.0;
    return {1, ok, d + fmt("%.2fs", t)};
}

Line criterion2() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto m = SequenceModel::iid_mean(DistributionSpec::normal());
    const auto c = estimate_pth_moment_of_mean(m, 3.0, {100, 1000, 10000}, McConfig{1000, 1, 0, 1});
    std::vector<double> x, y;
    for (std::size_t i = 0; i < c.grid.size(); ++i) {
        x.push_back(std::log(double(c.grid[i])));
        y.push_back(std::log(c.estimates[i]));
    }
    const double slope = least_squares(x, y).slope;
    const double t = elapsed(t0);
    return {2, std::abs(slope + 1.5) <= 0.1 && t < 60.0, fmt("slope %.4f (target -1.5 +- 0.1), %.2fs", slope, t)};
}

Line criterion3() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto law = DistributionSpec::rademacher();
    const std::int64_t N = 100000, paths = 200;
    const double lnN = std::log(double(N));
    const double H = generalized_harmonic(N, 1.0);

    const auto t2 = path_totals_serial(law, 0.0, 2.0, {N}, paths, 1, 0);
    int above = 0;
    double sum = 0.0;
    for (std::int64_t r = 0; r < paths; ++r) {
        above += t2.at(r, 0) >= 0.5 * lnN;
        sum += t2.at(r, 0);
    }
    const double frac_above = above / double(paths);
    const double mean = sum / paths;

    const auto t4 = path_totals_serial(law, 0.0, 4.0, {N / 10, N}, paths, 1, 0);
    int settled = 0;
    for (std::int64_t r = 0; r < paths; ++r) settled += t4.at(r, 1) - t4.at(r, 0) < 0.01;
    const double frac_settled = settled / double(paths);
    const double t = elapsed(t0);

    const bool a = frac_above >= 0.95;
    const bool b = std::abs(mean - H) <= 0.1 * H;
    const bool c = frac_settled >= 0.95;
    std::string d = fmt("alpha=2: T_N >= ln(N)/2 in %.3f of paths (need 0.95) ", frac_above) +
                    (a ? "ok" : "MISSED") + fmt("; mean T_N %.3f vs H_N %.3f ", mean, H) + (b ? "ok" : "MISSED") +
                    fmt("; alpha=4: settled %.3f ", frac_settled) + (c ? "ok" : "MISSED") + fmt("; %.2fs", t);
    return {3, a && b && c && t < 120.0, d};
}

Line criterion4() {
    const auto e1 = parse_example("exa-3.1");
    const std::int64_t N = 100000;
    CompensatedSum s;
    for (std::int64_t n = 1; n <= N; ++n) s.add(example_series_term(e1, SeriesQuantity::pth_moment(2.0), n));
    double oracle = 0.0;
    for (std::int64_t n = N; n >= 1; --n) oracle += 1.0 / (double(n) * double(n));
    const double gap = std::abs(s.value() - oracle);

    int claims = 0, misses = 0;
    CheckOptions opt;
    for (const char* id : {"exa-3.1", "exa-3.2", "exa-3.3", "exa-3.4"}) {
        const auto spec = parse_example(id);
        const auto model = SequenceModel::explicit_space(spec);
        for (const auto& ev : example_expected_verdicts(spec)) {
            ++claims;
            const auto v = check_mode(model, ev.mode, opt);
            const Verdict want = ev.verdict == Expectation::Holds ? Verdict::Holds : Verdict::Fails;
            if (v.verdict != want) {
                ++misses;
                std::printf("  mismatch: %s %s\n", id, ev.mode.id().c_str());
            }
        }
    }
    return {4, gap <= 1e-12 && misses == 0,
            fmt("|sum - H2| = %.3g; %g claims, %g mismatches", gap, claims, misses)};
}

Line criterion5() {
    const TailProbe probe = [](std::int64_t n, double t) { return std::min(1.0, 1.0 / (t * std::sqrt(double(n)))); };
    const auto a = extract_strong_subsequence(probe, 5);
    bool ok_a = true;
    std::int64_t prev = 0;
    for (int k = 1; k <= 5; ++k) {
        std::int64_t want = 1;
        for (int j = 0; j < 8; ++j) want *= k;
        want = std::max(want, prev + 1);
        ok_a &= a[k - 1] == want;
        prev = want;
    }
    const auto m = SequenceModel::explicit_space(parse_example("exa-3.2"));
    const auto b = extract_strong_subsequence(model_probe(m, 1.0), 30);
    bool ok_b = true;
    prev = 0;
    for (int k = 1; k <= 30; ++k) {
        const std::int64_t want = std::max<std::int64_t>(std::int64_t(k) * k, prev + 1);
        ok_b &= b[k - 1] == want;
        prev = want;
    }
    const double rate = subsequence_cauchy_rate(m, b, 1.0, 200, 1);
    return {5, ok_a && ok_b && rate >= 0.95,
            std::string("k^8 indices ") + (ok_a ? "exact" : "WRONG") + ", k^2 indices " + (ok_b ? "exact" : "WRONG") +
                fmt(", Cauchy rate %.3f", rate)};
}

Line criterion6() {
    const auto t0 = std::chrono::steady_clock::now();
    VerdictCache cache;
    const auto unif = SequenceModel::perturbed(DistributionSpec::point_mass(1.0), ScaleSequence::pow(1, 2),
                                               DistributionSpec::uniform());
    const auto cauchy = SequenceModel::perturbed(DistributionSpec::point_mass(1.0), ScaleSequence::pow(1, 0.5),
                                                 DistributionSpec::cauchy());
    const auto a = constant_limit_equivalence(unif, cache);
    const auto b = constant_limit_equivalence(cauchy, cache);
    const double t = elapsed(t0);
    const bool ok = a.s2d == Verdict::Holds && a.cc == Verdict::Holds && b.s2d == Verdict::Fails &&
                    b.cc == Verdict::Fails && t < 10.0;
    return {6, ok,
            "uniform/n^2 " + std::string(to_string(a.s2d)) + "/" + std::string(to_string(a.cc)) + ", Cauchy/sqrt(n) " +
                std::string(to_string(b.s2d)) + "/" + std::string(to_string(b.cc)) + fmt(", %.2fs", t)};
}

Line criterion7() {
    const auto m = SequenceModel::iid_mean(DistributionSpec::normal());
    const std::vector<std::int64_t> grid{100, 1000, 10000};
    std::vector<double> x, y;
    for (auto n : grid) {
        x.push_back(std::log(double(n)));
        y.push_back(std::log(3.0 * double(n) * double(n) - 2.0 * double(n)));
    }
    const double oracle = least_squares(x, y).slope;
    const auto f4 = bdg_slope_check(m, 4.0, grid, McConfig{1000, 1, 0, 1});
    const auto f3 = bdg_slope_check(m, 3.0, grid, McConfig{1000, 1, 0, 1});
    const bool ok = std::abs(f4.exponent - 2.0) <= 0.1 && std::abs(oracle - 2.0) <= 0.1 &&
                    std::abs(f3.exponent - 1.5) <= 0.1;
    return {7, ok, fmt("alpha=4 %.4f (oracle slope %.4f), alpha=3 %.4f", f4.exponent, oracle, f3.exponent)};
}

Line criterion8() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = full_relation_matrix(RelationConfig{});
    const double t = elapsed(t0);
    int pass = 0, bad = 0, open = 0;
    for (const auto& e : r.edges) {
        switch (e.edge.status) {
            case EdgeStatus::Implies:
                if (e.outcome == Outcome::Pass && !e.witnesses.empty()) ++pass;
                else ++bad, std::printf("  edge %s: %s\n", e.edge.id.c_str(), std::string(to_string(e.outcome)).c_str());
                break;
            case EdgeStatus::NotImplies:
                if (e.outcome == Outcome::Pass) ++pass;
                else ++bad, std::printf("  edge %s: %s\n", e.edge.id.c_str(), std::string(to_string(e.outcome)).c_str());
                break;
            case EdgeStatus::Open:
                if (e.outcome == Outcome::Skipped) ++open;
                else ++bad;
                break;
        }
    }
    const bool ok = r.passed() && bad == 0 && r.closure_conflicts.empty() && t < 120.0;
    return {8, ok, fmt("%g confirmed, %g open/skipped, %g problems, %.2fs", pass, open, bad, t)};
}

// Runs each command twice with different worker counts and compares every file.
Line criterion9() {
    const fs::path root = fs::temp_directory_path() / "sconv_acceptance_jobs";
    fs::remove_all(root);
    const std::vector<std::vector<std::string>> cmds = {
        {"verify-lln", "--check", "strong-lp", "--p", "1", "--horizon", "1000000"},
        {"verify-lln", "--check", "strong-lp", "--p", "2.5", "--horizon", "1000000"},
        {"verify-lln", "--check", "strong-lp", "--route", "mc", "--p", "3", "--grid", "100,1000,10000"},
        {"verify-lln", "--check", "strong-as", "--dist", "rademacher", "--alpha", "2", "--paths", "200"},
        {"verify-lln", "--check", "strong-as", "--dist", "rademacher", "--alpha", "4", "--paths", "200"},
        {"counterexample", "exa-3.1", "--quantity", "pth-moment", "--p", "2"},
        {"counterexample", "exa-3.2"},
        {"counterexample", "exa-3.3"},
        {"counterexample", "exa-3.4"},
        {"extract-subseq", "--model", "exa-3.2", "--k-max", "30", "--paths", "200"},
        {"extract-subseq", "--model", "inv-sqrt", "--k-max", "5", "--paths", "50"},
        {"verify-lln", "--check", "bdg", "--alpha", "4"},
        {"verify-lln", "--check", "bdg", "--alpha", "3"},
        {"relations"},
    };
    int files = 0, differ = 0, failed_runs = 0;
    for (std::size_t i = 0; i < cmds.size(); ++i) {
        fs::path dirs[2];
        for (int j = 0; j < 2; ++j) {
            dirs[j] = root / (std::to_string(i) + (j == 0 ? "_jobs1" : "_jobs2"));
            auto args = cmds[i];
            args.insert(args.end(), {"--seed", "1", "--jobs", j == 0 ? "1" : "2", "--out", dirs[j].string()});
            std::ostringstream out, err;
            const int rc = run_command(args, out, err);
            if (rc == 2) {
                ++failed_runs;
                std::printf("  usage error in command %zu: %s", i, err.str().c_str());
            }
        }
        for (const auto& e : fs::directory_iterator(dirs[0])) {
            ++files;
            const fs::path other = dirs[1] / e.path().filename();
            std::ifstream a(e.path(), std::ios::binary), b(other, std::ios::binary);
            std::stringstream sa, sb;
            sa << a.rdbuf();
            sb << b.rdbuf();
            if (!b || sa.str() != sb.str()) {
                ++differ;
                std::printf("  differs: %s\n", e.path().filename().string().c_str());
            }
        }
    }
    fs::remove_all(root);
    return {9, files > 0 && differ == 0 && failed_runs == 0,
            fmt("%g artifact files compared, %g differ", files, differ)};
}

}  // namespace

int main() {
    const std::function<Line()> runs[] = {criterion1, criterion2, criterion3, criterion4, criterion5,
                                          criterion6, criterion7, criterion8, criterion9};
    int failures = 0;
    for (const auto& run : runs) {
        Line l;
        try {
            l = run();
        } catch (const std::exception& e) {
            l = {0, false, std::string("exception: ") + e.what()};
        }
        if (!l.ok) ++failures;
        std::printf("criterion %d: %s  %s\n", l.id, l.ok ? "PASS" : "FAIL", l.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of 9 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
