#include "sconv/report.hpp"

#include "sconv/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#ifndef SCONV_VERSION
#define SCONV_VERSION "0.0.0"
#endif

namespace sconv {

using json = nlohmann::ordered_json;

std::string_view tool_version() { return SCONV_VERSION; }

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

void write_atomic(const std::filesystem::path& path, std::string_view content) {
    namespace fs = std::filesystem;
    const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
    fs::create_directories(dir);
    fs::path tmp = dir / ("." + path.filename().string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp);
        throw std::runtime_error("cannot rename onto " + path.string() + ": " + ec.message());
    }
}

std::string series_csv(const SeriesDiagnostic& d) {
    std::string out = "n,term,partial_sum,std_err,flags\n";
    for (const auto& p : d.points) {
        out += std::to_string(p.n) + ',' + format_number(p.term) + ',' + format_number(p.partial_sum) + ',' +
               format_number(p.std_err) + ',' + p.flags.str() + '\n';
    }
    return out;
}

std::string moment_curve_csv(const MomentCurve& c) {
    std::string out = "n,estimate,std_err,flags\n";
    for (std::size_t i = 0; i < c.grid.size(); ++i) {
        out += std::to_string(c.grid[i]) + ',' + format_number(c.estimates[i]) + ',' +
               format_number(c.std_errors[i]) + ',' + c.flags.str() + '\n';
    }
    return out;
}

namespace {

json num(double x) {
    if (std::isfinite(x)) return x;
    return format_number(x);
}

json flags_json(FlagSet f) {
    json a = json::array();
    for (const auto& n : f.names()) a.push_back(n);
    return a;
}

json record_json(const ModelRecord& r) {
    json j;
    j["model"] = r.model;
    if (!r.from_verdict.empty()) j["antecedent"] = r.from_verdict;
    if (!r.to_verdict.empty()) j["consequent"] = r.to_verdict;
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

}  // namespace

json to_json(const SlopeFit& f) {
    json j;
    j["exponent"] = num(f.exponent);
    j["half_width"] = num(f.half_width);
    j["residual"] = num(f.residual);
    j["points"] = f.points;
    return j;
}

json to_json(const SeriesDiagnostic& d, bool with_points) {
    json j;
    j["source"] = to_string(d.source);
    j["verdict"] = to_string(d.verdict);
    j["closed_form"] = d.closed_form;
    j["tail_exponent"] = d.fit ? to_json(*d.fit) : json(nullptr);
    j["flags"] = flags_json(d.flags);
    j["horizon"] = d.horizon;
    j["partial_sum"] = num(d.final_partial_sum());
    if (with_points) {
        json pts = json::array();
        for (const auto& p : d.points)
            pts.push_back({{"n", p.n}, {"term", num(p.term)}, {"partial_sum", num(p.partial_sum)},
                           {"std_err", num(p.std_err)}, {"flags", p.flags.str()}});
        j["points"] = std::move(pts);
    }
    return j;
}

json to_json(const ModeVerdict& v) {
    json j;
    j["mode"] = v.mode.id();
    json params = json::object();
    for (const auto& [k, x] : v.params) params[k] = num(x);
    j["params"] = std::move(params);
    j["verdict"] = to_string(v.verdict);
    j["method"] = to_string(v.method);
    j["evidence"] = v.evidence;
    j["flags"] = flags_json(v.flags);
    j["seed"] = v.seed;
    if (v.series) j["series"] = to_json(*v.series);
    return j;
}

json to_json(const MomentCurve& c) {
    json j;
    j["p"] = num(c.p);
    j["reps"] = c.reps;
    j["seed"] = c.seed;
    j["grid"] = c.grid;
    json est = json::array(), se = json::array();
    for (double x : c.estimates) est.push_back(num(x));
    for (double x : c.std_errors) se.push_back(num(x));
    j["estimates"] = std::move(est);
    j["std_errors"] = std::move(se);
    j["flags"] = flags_json(c.flags);
    return j;
}

json to_json(const EdgeOutcome& e) {
    json j;
    j["edge"] = e.edge.id;
    j["from"] = e.edge.from.id();
    j["to"] = e.edge.to.id();
    j["status"] = to_string(e.edge.status);
    if (e.edge.premise != Premise::None) j["premise"] = to_string(e.edge.premise);
    j["citation"] = e.edge.citation;
    if (e.edge.counterexample) j["counterexample"] = e.edge.counterexample->id();
    if (e.edge.question) j["question"] = e.edge.question;
    j["outcome"] = to_string(e.outcome);
    j["evidence"] = e.evidence;
    j["witnesses"] = e.witnesses;
    json sk = json::array(), va = json::array();
    for (const auto& r : e.skipped) sk.push_back(record_json(r));
    for (const auto& r : e.vacuous) va.push_back(record_json(r));
    j["skipped"] = std::move(sk);
    j["vacuous"] = std::move(va);
    j["violation"] = e.violation ? record_json(*e.violation) : json(nullptr);
    return j;
}

json to_json(const RelationReport& r) {
    json j;
    j["passed"] = r.passed();
    j["aborted"] = r.aborted;
    j["seed"] = r.seed;
    j["corpus"] = r.corpus;
    j["closure_conflicts"] = r.closure_conflicts;
    json edges = json::array();
    for (const auto& e : r.edges) edges.push_back(to_json(e));
    j["edges"] = std::move(edges);
    json eq = json::array();
    for (const auto& q : r.equivalence)
        eq.push_back({{"model", q.model}, {"s2_d", to_string(q.s2d)}, {"cc", to_string(q.cc)},
                      {"outcome", to_string(q.outcome)}});
    j["constant_limit_equivalence"] = std::move(eq);
    return j;
}

json envelope(std::string_view command, std::uint64_t seed, const ConfigEcho& config, json result) {
    json j;
    j["tool"] = "strongconv";
    j["version"] = tool_version();
    j["command"] = command;
    j["seed"] = seed;
    json cfg = json::object();
    for (const auto& [k, v] : config) cfg[k] = v;
    j["config"] = std::move(cfg);
    j["result"] = std::move(result);
    return j;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::map<std::string, std::string> parse_config_text(std::string_view text) {
    std::map<std::string, std::string> out;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        if (b == std::string::npos) return std::string();
        const auto e = s.find_last_not_of(" \t\r");
        return s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw PreconditionError("config line " + std::to_string(lineno) + ": expected key = value");
        std::string k = trim(line.substr(0, eq));
        std::string v = trim(line.substr(eq + 1));
        if (k.rfind("--", 0) == 0) k.erase(0, 2);
        if (k.empty()) throw PreconditionError("config line " + std::to_string(lineno) + ": empty key");
        out[k] = v;
    }
    return out;
}

std::map<std::string, std::string> read_config_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw PreconditionError("cannot read config file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

}  // namespace sconv
