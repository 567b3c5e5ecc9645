#include "sconv/cli.hpp"
#include "sconv/errors.hpp"
#include "sconv/report.hpp"

#include <doctest.h>

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

using namespace sconv;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("sconv_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run(std::vector<std::string> args, std::string* out_text = nullptr) {
    std::ostringstream out, err;
    const int rc = run_command(args, out, err);
    if (out_text) *out_text = out.str() + err.str();
    return rc;
}

}  // namespace

TEST_CASE("numbers round-trip through their text form") {
    auto rng = make_rng_stream(12, 0);
    for (int i = 0; i < 10000; ++i) {
        const double x = (rng.next_uniform() - 0.5) * std::pow(10.0, 40.0 * rng.next_uniform() - 20.0);
        const std::string s = format_number(x);
        double back = 0.0;
        std::from_chars(s.data(), s.data() + s.size(), back);
        REQUIRE(back == x);
    }
    CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
    CHECK(format_number(std::nan("")) == "nan");
    CHECK(format_number(0.25) == "0.25");
}

TEST_CASE("atomic writes replace the target and leave no temp file") {
    const auto dir = scratch("atomic");
    const auto target = dir / "sub" / "a.txt";
    write_atomic(target, "first");
    write_atomic(target, "second");
    CHECK(slurp(target) == "second");
    int entries = 0;
    for ([[maybe_unused]] const auto& e : fs::directory_iterator(target.parent_path())) ++entries;
    CHECK(entries == 1);
}

TEST_CASE("config text") {
    const auto m = parse_config_text("# comment\nseed = 7\n--reps=20  # trailing\n\n  format =json \n");
    CHECK(m.at("seed") == "7");
    CHECK(m.at("reps") == "20");
    CHECK(m.at("format") == "json");
    CHECK(m.size() == 3);
    CHECK_THROWS_AS(parse_config_text("seed 7\n"), PreconditionError);
    CHECK_THROWS_AS(parse_config_text(" = 7\n"), PreconditionError);
}

TEST_CASE("envelope layout") {
    const auto j = envelope("relations", 3, {{"seed", "3"}, {"horizon", "10"}}, nlohmann::ordered_json{{"x", 1}});
    std::vector<std::string> keys;
    for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
    CHECK(keys == std::vector<std::string>{"tool", "version", "command", "seed", "config", "result"});
    const std::string text = dump(j);
    CHECK(text.back() == '\n');
    CHECK(nlohmann::json::parse(text)["config"]["horizon"] == "10");
}

TEST_CASE("non-finite values serialize as strings") {
    SlopeFit f;
    f.exponent = std::numeric_limits<double>::infinity();
    CHECK(to_json(f)["exponent"] == "inf");
}

TEST_CASE("usage errors exit with 2") {
    CHECK(run({}) == 2);
    CHECK(run({"no-such-command"}) == 2);
    CHECK(run({"verify-lln", "--check", "nope"}) == 2);
    CHECK(run({"counterexample", "exa-9.9"}) == 2);
    CHECK(run({"counterexample", "exa-3.1", "--reps", "abc"}) == 2);
    CHECK(run({"--help"}) == 0);
}

TEST_CASE("counterexample moment series writes its artifacts") {
    const auto dir = scratch("cx");
    std::string text;
    const int rc = run({"counterexample", "exa-3.1", "--quantity", "pth-moment", "--p", "2", "--horizon", "100000",
                        "--out", dir.string()},
                       &text);
    CHECK(rc == 0);
    const auto j = nlohmann::json::parse(slurp(dir / "exa-3.1_pth-moment.json"));
    CHECK(j["tool"] == "strongconv");
    CHECK(j["command"] == "counterexample");
    double h = 0.0;
    for (int n = 100000; n >= 1; --n) h += 1.0 / (double(n) * n);
    CHECK(std::abs(j["result"]["series"]["partial_sum"].get<double>() - h) <= 1e-12);
    const std::string csv = slurp(dir / "exa-3.1_pth-moment.csv");
    CHECK(csv.rfind("# ", 0) == 0);
    CHECK(csv.find("n,term,partial_sum,std_err,flags") != std::string::npos);
}

TEST_CASE("counterexample expected verdicts pass") {
    const auto dir = scratch("cx_expected");
    CHECK(run({"counterexample", "exa-3.3", "--horizon", "65536", "--out", dir.string(), "--format", "json"}) == 0);
    const auto j = nlohmann::json::parse(slurp(dir / "exa-3.3_expected.json"));
    CHECK(j["result"]["outcome"] == "PASS");
    CHECK_FALSE(fs::exists(dir / "exa-3.3_expected.csv"));
}

TEST_CASE("estimate-series verdicts") {
    const auto dir = scratch("series");
    CHECK(run({"estimate-series", "--family", "baum-katz", "--dist", "normal", "--alpha", "2", "--eps", "1",
               "--out", dir.string()}) == 0);
    const auto j = nlohmann::json::parse(slurp(dir / "series_baum-katz.json"));
    CHECK(j["result"]["verdict"] == "CONVERGENT");
}

TEST_CASE("flags win over the config file, which wins over defaults") {
    const auto dir = scratch("config");
    const auto cfg = dir / "run.cfg";
    write_atomic(cfg, "seed = 9\nhorizon = 4096\nformat = json\n");
    CHECK(run({"counterexample", "exa-3.2", "--quantity", "tail-prob", "--config", cfg.string(), "--seed", "4",
               "--out", dir.string()}) == 0);
    const auto j = nlohmann::json::parse(slurp(dir / "exa-3.2_tail-prob.json"));
    CHECK(j["seed"] == 4);
    CHECK(j["config"]["horizon"] == "4096");
    CHECK_FALSE(fs::exists(dir / "exa-3.2_tail-prob.csv"));
}

TEST_CASE("the output directory can come from the environment") {
    const auto dir = scratch("env");
    ::setenv("SCONV_OUT_DIR", dir.string().c_str(), 1);
    const int rc = run({"counterexample", "exa-3.1", "--quantity", "sup-norm", "--horizon", "64"});
    ::unsetenv("SCONV_OUT_DIR");
    CHECK(rc == 0);
    CHECK(fs::exists(dir / "exa-3.1_sup-norm.json"));
}

TEST_CASE("artifacts do not depend on the worker count") {
    const auto a = scratch("jobs1"), b = scratch("jobs2");
    for (const auto& [dir, jobs] : {std::pair{a, "1"}, std::pair{b, "2"}}) {
        CHECK(run({"verify-lln", "--check", "strong-lp", "--route", "mc", "--dist", "normal", "--p", "3", "--reps",
                   "200", "--horizon", "4096", "--jobs", jobs, "--out", dir.string()}) == 0);
    }
    int files = 0;
    for (const auto& e : fs::directory_iterator(a)) {
        ++files;
        CAPTURE(e.path().filename().string());
        CHECK(slurp(e.path()) == slurp(b / e.path().filename()));
    }
    CHECK(files >= 2);
}
