#include "sconv/relations.hpp"

#include "sconv/errors.hpp"

#include <algorithm>
#include <iomanip>
#include <set>
#include <sstream>

namespace sconv {

std::string_view to_string(EdgeStatus s) {
    switch (s) {
        case EdgeStatus::Implies: return "IMPLIES";
        case EdgeStatus::NotImplies: return "NOT_IMPLIES";
        case EdgeStatus::Open: return "OPEN";
    }
    return "?";
}

std::string_view to_string(Outcome o) {
    switch (o) {
        case Outcome::Pass: return "PASS";
        case Outcome::Fail: return "FAIL";
        case Outcome::Skipped: return "SKIPPED";
    }
    return "?";
}

std::string_view to_string(Premise p) {
    switch (p) {
        case Premise::None: return "none";
        case Premise::ConstantLimit: return "constant limit";
        case Premise::DiscreteLimit: return "discrete limit with finitely many atoms";
        case Premise::DensityWithRate: return "bounded limit density and summable P(n (ln n)^2 |X_n - X| >= 1)";
    }
    return "?";
}

namespace {

using M = ConvergenceMode;

ImplicationEdge implies(M from, M to, std::string citation, Premise premise = Premise::None) {
    ImplicationEdge e;
    e.from = from;
    e.to = to;
    e.status = EdgeStatus::Implies;
    e.premise = premise;
    e.citation = std::move(citation);
    e.id = from.id() + " => " + to.id();
    if (premise != Premise::None) e.id += " [" + std::string(to_string(premise)) + "]";
    return e;
}

ImplicationEdge not_implies(M from, M to, const char* example, std::string citation,
                            std::optional<M> via = std::nullopt) {
    ImplicationEdge e;
    e.from = from;
    e.to = to;
    e.status = EdgeStatus::NotImplies;
    e.citation = std::move(citation);
    e.counterexample = parse_example(example, 1.0);
    e.via = via;
    e.id = from.id() + " =/=> " + to.id();
    return e;
}

ImplicationEdge open_edge(M from, M to, int question, std::string citation) {
    ImplicationEdge e;
    e.from = from;
    e.to = to;
    e.status = EdgeStatus::Open;
    e.question = question;
    e.citation = std::move(citation);
    e.id = from.id() + " ?=> " + to.id();
    return e;
}

std::vector<ImplicationEdge> build_registry() {
    const M as = M::as(), pr = M::in_prob(), l1 = M::lp(1), linf = M::l_inf(), d = M::in_dist(), cc = M::cc(),
            sl1 = M::s_lp(1), slinf = M::s_l_inf(), sa = M::s_alpha_as(1), s1 = M::s1_d(), s2 = M::s2_d();
    return {
        // classical chain
        implies(sl1, cc, "Markov's inequality turns summable moments into summable tails"),
        implies(cc, as, "Borel-Cantelli lemma"),
        implies(as, pr, "almost sure convergence implies convergence in probability"),
        implies(pr, d, "convergence in probability implies convergence in distribution"),
        implies(linf, as, "uniform convergence off a null set"),
        implies(linf, l1, "E|D| <= ||D||_inf"),
        implies(l1, pr, "Markov's inequality"),
        implies(d, pr, "weak convergence to a point is convergence in probability", Premise::ConstantLimit),
        // strong modes
        implies(slinf, sl1, "E|D_n| <= ||D_n||_inf term by term"),
        implies(sl1, sa, "E sum |D_n| < infinity forces the path sum to be finite almost surely"),
        implies(slinf, sa, "|D_n|^a <= ||D_n||_inf^a and the norms eventually drop below 1 (a >= 1)"),
        implies(sa, as, "terms of a convergent series tend to zero"),
        implies(sl1, s1, "|E f(X_n) - E f(X)| <= Lip(f) E|X_n - X|"),
        implies(s1, d, "bounded Lipschitz functions determine weak convergence"),
        implies(s2, cc, "F_n(C - e) + 1 - F_n(C + e) bounds the tail at C", Premise::ConstantLimit),
        implies(cc, s2, "away from C, |F_n(x) - F(x)| is at most a tail probability", Premise::ConstantLimit),
        implies(cc, s2, "the non-atoms form an open set, so each continuity point has a margin",
                Premise::DiscreteLimit),
        implies(cc, s2, "the density bound controls the band of width d / (n (ln n)^2)", Premise::DensityWithRate),
        // counterexamples
        not_implies(sl1, slinf, "exa-3.1", "E|X_n|^p = 1/n^2 while ||X_n||_inf = 1"),
        not_implies(sa, cc, "exa-3.2", "paths vanish after n >= 1/omega while P(X_n = 1) = 1/n"),
        not_implies(sa, sl1, "exa-3.2", "E|X_n|^a = 1/n is not summable"),
        not_implies(sa, slinf, "exa-3.2", "S-L_inf implies S-L1, which fails on this example"),
        not_implies(cc, sa, "exa-3.3", "the tails are 1/n^2 eventually, yet X_n^a = 1/n on every path"),
        not_implies(sa, s2, "exa-3.2", "the limit is the constant 0 and c.c. fails, so S2-d fails by the equivalence",
                    M::cc()),
        not_implies(s1, pr, "exa-3.4", "identically distributed copies never approach X"),
        not_implies(s2, pr, "exa-3.4", "identically distributed copies never approach X"),
        // open questions
        open_edge(s1, s2, 1, "Question 1: what is the relation between S1-d and S2-d convergence?"),
        open_edge(s2, s1, 1, "Question 1: what is the relation between S1-d and S2-d convergence?"),
        open_edge(slinf, s2, 2, "Question 2: does S-L_inf convergence imply S2-d convergence?"),
        open_edge(sl1, s2, 3, "Question 3: does S-L1 convergence imply S2-d convergence?"),
        open_edge(sa, s1, 4, "Question 4: does S_a-a.s. convergence (a>0) imply S1-d convergence?"),
        open_edge(cc, s1, 5, "Question 5: does c.c. convergence (α>0) imply S_i-d convergence for i in {1,2}?"),
        open_edge(cc, s2, 5, "Question 5: does c.c. convergence (α>0) imply S_i-d convergence for i in {1,2}?"),
    };
}

std::string verdict_name(const std::optional<ModeVerdict>& v) {
    return v ? std::string(to_string(v->verdict)) : "UNAVAILABLE";
}

std::string key(const SequenceModel& m) { return m.name.empty() ? m.id() : m.name; }

}  // namespace

const std::vector<ImplicationEdge>& edge_registry() {
    static const std::vector<ImplicationEdge> reg = build_registry();
    return reg;
}

std::vector<std::string> closure_conflicts(const std::vector<ImplicationEdge>& edges) {
    std::set<std::pair<std::string, std::string>> reach;
    std::set<std::string> nodes;
    for (const auto& e : edges) {
        nodes.insert(e.from.id());
        nodes.insert(e.to.id());
        if (e.status == EdgeStatus::Implies && e.premise == Premise::None) reach.insert({e.from.id(), e.to.id()});
    }
    for (const auto& n : nodes) reach.insert({n, n});
    // Floyd-Warshall on a handful of nodes.
    for (const auto& k : nodes)
        for (const auto& i : nodes)
            if (reach.count({i, k}))
                for (const auto& j : nodes)
                    if (reach.count({k, j})) reach.insert({i, j});
    std::vector<std::string> out;
    for (const auto& e : edges) {
        if (e.status == EdgeStatus::Implies) continue;
        if (reach.count({e.from.id(), e.to.id()}))
            out.push_back(e.id + " is derivable from the IMPLIES edges");
    }
    return out;
}

std::vector<SequenceModel> default_corpus() {
    using D = DistributionSpec;
    using S = ScaleSequence;
    return {
        SequenceModel::explicit_space(parse_example("exa-3.1", 1.0)),
        SequenceModel::explicit_space(parse_example("exa-3.2", 1.0)),
        SequenceModel::explicit_space(parse_example("exa-3.3", 1.0)),
        SequenceModel::explicit_space(parse_example("exa-3.4", 1.0)),
        SequenceModel::iid_mean(D::point_mass(0.0)),
        SequenceModel::iid_mean(D::normal(0.0, 1.0)),
        SequenceModel::deterministic(D::normal(0.0, 1.0), S::pow(1.0, 2.0)),
        SequenceModel::deterministic(D::normal(0.0, 1.0), S::pow(1.0, 1.0)),
        SequenceModel::deterministic(D::normal(0.0, 1.0), S::pow(1.0, 0.5)),
        SequenceModel::deterministic(D::normal(0.0, 1.0), S::inv_log(1.0)),
        SequenceModel::perturbed(D::point_mass(1.0), S::pow(1.0, 2.0), D::uniform(0.0, 1.0)),
        SequenceModel::perturbed(D::point_mass(1.0), S::pow(1.0, 0.5), D::cauchy(0.0, 1.0)),
        SequenceModel::deterministic(D::rademacher(0.0, 1.0), S::pow(1.0, 2.0)),
    };
}

std::optional<ModeVerdict> VerdictCache::get(const SequenceModel& m, const ConvergenceMode& mode, std::string* why) {
    auto k = std::make_pair(key(m), mode.id());
    auto it = memo_.find(k);
    if (it == memo_.end()) {
        Entry e;
        try {
            ModeVerdict v = check_mode(m, mode, opt_);
            if (v.method == Method::Analytic)
                e.verdict = std::move(v);
            else
                e.why = "only a Monte Carlo verdict is available (" + std::string(to_string(v.verdict)) + ")";
        } catch (const UnsupportedQuery& ex) {
            e.why = ex.what();
        }
        it = memo_.emplace(k, std::move(e)).first;
    }
    if (why) *why = it->second.why;
    return it->second.verdict;
}

bool has_constant_limit(const SequenceModel& m) {
    try {
        return limit_law(m).is_point();
    } catch (const UnsupportedQuery&) {
        return false;
    }
}

namespace {

bool has_discrete_limit(const SequenceModel& m) {
    try {
        const Law l = limit_law(m);
        return l.pieces().empty() && !l.atoms().empty();
    } catch (const UnsupportedQuery&) {
        return false;
    }
}

bool has_density_limit(const SequenceModel& m) {
    try {
        return limit_law(m).is_bounded_density();
    } catch (const UnsupportedQuery&) {
        return false;
    }
}

bool premise_holds(Premise p, const SequenceModel& m) {
    switch (p) {
        case Premise::None: return true;
        case Premise::DensityWithRate: return has_density_limit(m);
        case Premise::ConstantLimit: return has_constant_limit(m);
        case Premise::DiscreteLimit: return has_discrete_limit(m);
    }
    return false;
}

// The rate series stands in for the antecedent under DensityWithRate.
std::optional<ModeVerdict> antecedent(const ImplicationEdge& e, const SequenceModel& m, VerdictCache& cache,
                                      std::string* why) {
    if (e.premise != Premise::DensityWithRate) return cache.get(m, e.from, why);
    ModeVerdict v;
    v.mode = e.from;
    v.params = {{"beta", 1.0}, {"delta", 1.0}};
    try {
        const auto d = prop37_condition2_series(m, 1.0, 1.0, cache.options().horizon);
        v.verdict = d.verdict == SeriesVerdict::Convergent ? Verdict::Holds
                    : d.verdict == SeriesVerdict::Divergent ? Verdict::Fails
                                                            : Verdict::Inconclusive;
        v.evidence = "rate series " + std::string(to_string(d.verdict));
        v.series = d;
    } catch (const UnsupportedQuery& ex) {
        if (why) *why = ex.what();
        return std::nullopt;
    }
    return v;
}

}  // namespace

EdgeOutcome verify_implication(const ImplicationEdge& edge, const std::vector<SequenceModel>& corpus,
                               VerdictCache& cache) {
    if (edge.status != EdgeStatus::Implies) throw PreconditionError("verify_implication needs an IMPLIES edge");
    EdgeOutcome out;
    out.edge = edge;
    int evaluated = 0;
    for (const auto& m : corpus) {
        ModelRecord rec{key(m), "", "", ""};
        if (!premise_holds(edge.premise, m)) {
            rec.note = "premise not met";
            out.vacuous.push_back(rec);
            continue;
        }
        std::string why;
        const auto from = antecedent(edge, m, cache, &why);
        rec.from_verdict = verdict_name(from);
        if (!from) {
            rec.note = why;
            out.skipped.push_back(rec);
            continue;
        }
        ++evaluated;
        if (from->verdict != Verdict::Holds) {
            rec.note = "antecedent " + rec.from_verdict;
            out.vacuous.push_back(rec);
            continue;
        }
        const auto to = cache.get(m, edge.to, &why);
        rec.to_verdict = verdict_name(to);
        if (!to) {
            rec.note = why;
            out.skipped.push_back(rec);
            continue;
        }
        if (to->verdict == Verdict::Fails) {
            rec.note = "antecedent: " + from->evidence + " | consequent: " + to->evidence;
            out.violation = rec;
            out.outcome = Outcome::Fail;
            out.evidence = "violated on " + rec.model;
            return out;
        }
        if (to->verdict == Verdict::Inconclusive) {
            rec.note = "consequent inconclusive: " + to->evidence;
            out.skipped.push_back(rec);
            continue;
        }
        if (!m.is_degenerate()) out.witnesses.push_back(rec.model);
    }
    out.outcome = evaluated > 0 ? Outcome::Pass : Outcome::Skipped;
    out.evidence = std::to_string(out.witnesses.size()) + " witness(es), " + std::to_string(out.vacuous.size()) +
                   " vacuous, " + std::to_string(out.skipped.size()) + " skipped";
    return out;
}

EdgeOutcome confirm_counterexample(const ExampleSpec& spec, const ImplicationEdge& edge, VerdictCache& cache) {
    if (edge.status != EdgeStatus::NotImplies) throw PreconditionError("confirm_counterexample needs a NOT_IMPLIES edge");
    if (!edge.counterexample || !(*edge.counterexample == spec))
        throw PreconditionError("example " + spec.id() + " is not the registered counterexample of " + edge.id);
    EdgeOutcome out;
    out.edge = edge;
    const SequenceModel m = SequenceModel::explicit_space(spec);
    std::vector<std::string> problems;
    std::ostringstream dump;
    auto need = [&](const ConvergenceMode& mode, Verdict want, const std::string& role) {
        std::string why;
        const auto v = cache.get(m, mode, &why);
        dump << role << ' ' << mode.id() << '=' << verdict_name(v) << " (" << (v ? v->evidence : why) << "); ";
        if (!v || v->verdict != want)
            problems.push_back(role + " " + mode.id() + " expected " + std::string(to_string(want)) + ", got " +
                               verdict_name(v));
        return v;
    };
    const auto from = need(edge.from, Verdict::Holds, "antecedent");
    const auto to = need(edge.to, Verdict::Fails, "consequent");
    if (edge.via) need(*edge.via, Verdict::Fails, "route");
    for (const auto& ev : example_expected_verdicts(spec))
        need(ev.mode, ev.verdict == Expectation::Holds ? Verdict::Holds : Verdict::Fails, "expected");
    ModelRecord rec{key(m), verdict_name(from), verdict_name(to), ""};
    if (problems.empty()) {
        out.outcome = Outcome::Pass;
        out.witnesses.push_back(rec.model);
        out.evidence = dump.str();
    } else {
        out.outcome = Outcome::Fail;
        std::string msg;
        for (const auto& p : problems) msg += p + "; ";
        rec.note = msg;
        out.violation = rec;
        out.evidence = msg + "evidence: " + dump.str();
    }
    return out;
}

ComposeResult slutsky_compose(const SequenceModel& x, const SequenceModel& y, ComposeOp op, const CheckOptions& opt) {
    SequenceModel composed = SequenceModel::composed(op, x, y);
    composed.validate();  // boundedness and C != 0 clauses
    const ModeVerdict vx = check_mode(x, ConvergenceMode::s1_d(), opt);
    if (vx.verdict != Verdict::Holds)
        throw PreconditionError("x is not S1-d convergent (" + std::string(to_string(vx.verdict)) + ")");
    const ModeVerdict vy = check_mode(y, ConvergenceMode::s_lp(1.0), opt);
    if (vy.verdict != Verdict::Holds)
        throw PreconditionError("y is not S-L1 convergent (" + std::string(to_string(vy.verdict)) + ")");
    return {composed, check_mode(composed, ConvergenceMode::s1_d(), opt)};
}

EquivalenceRecord constant_limit_equivalence(const SequenceModel& m, VerdictCache& cache) {
    EquivalenceRecord r;
    r.model = key(m);
    if (!has_constant_limit(m) || !marginal_is_analytic(m)) return r;
    const auto s2 = cache.get(m, ConvergenceMode::s2_d());
    const auto cc = cache.get(m, ConvergenceMode::cc());
    if (!s2 || !cc) return r;
    r.s2d = s2->verdict;
    r.cc = cc->verdict;
    if (r.s2d == Verdict::Inconclusive || r.cc == Verdict::Inconclusive) return r;
    r.outcome = r.s2d == r.cc ? Outcome::Pass : Outcome::Fail;
    return r;
}

bool RelationReport::passed() const {
    if (aborted || !closure_conflicts.empty()) return false;
    for (const auto& e : edges)
        if (e.outcome == Outcome::Fail) return false;
    for (const auto& q : equivalence)
        if (q.outcome == Outcome::Fail) return false;
    return true;
}

std::string RelationReport::matrix_table() const {
    const std::vector<M> modes{M::as(),     M::in_prob(), M::lp(1),           M::l_inf(), M::in_dist(), M::cc(),
                               M::s_lp(1),  M::s_l_inf(), M::s_alpha_as(1), M::s1_d(),  M::s2_d()};
    auto cell = [&](const M& a, const M& b) -> std::string {
        if (a == b) return "-";
        std::string s;
        for (const auto& e : edges) {
            if (!(e.edge.from == a && e.edge.to == b)) continue;
            std::string c;
            switch (e.edge.status) {
                case EdgeStatus::Implies: c = e.edge.premise == Premise::None ? "=>" : "=>*"; break;
                case EdgeStatus::NotImplies: c = "X"; break;
                case EdgeStatus::Open: c = "?Q" + std::to_string(e.edge.question); break;
            }
            if (e.outcome == Outcome::Fail) c += "!";
            if (s.find(c) == std::string::npos) s += (s.empty() ? "" : ",") + c;
        }
        return s.empty() ? "." : s;
    };
    std::size_t w = 0;
    for (const auto& m : modes) w = std::max(w, m.id().size());
    std::ostringstream os;
    os << std::left << std::setw(static_cast<int>(w) + 2) << "from\\to";
    for (const auto& m : modes) os << std::setw(static_cast<int>(w) + 2) << m.id();
    os << '\n';
    for (const auto& a : modes) {
        os << std::setw(static_cast<int>(w) + 2) << a.id();
        for (const auto& b : modes) os << std::setw(static_cast<int>(w) + 2) << cell(a, b);
        os << '\n';
    }
    os << "\n=> implies   =>* implies under a premise   X does not imply   ?Qk open question k   ! failed\n";
    return os.str();
}

RelationReport full_relation_matrix(const RelationConfig& cfg) {
    CheckOptions opt;
    opt.horizon = cfg.horizon;
    opt.mc.seed = cfg.seed;
    opt.mc.jobs = cfg.jobs;
    VerdictCache cache(opt);
    RelationReport rep;
    rep.seed = cfg.seed;
    for (const auto& m : cfg.corpus) rep.corpus.push_back(key(m));
    const auto& reg = edge_registry();
    rep.closure_conflicts = closure_conflicts(reg);
    for (const auto& e : reg) {
        EdgeOutcome o;
        switch (e.status) {
            case EdgeStatus::Implies: o = verify_implication(e, cfg.corpus, cache); break;
            case EdgeStatus::NotImplies: o = confirm_counterexample(*e.counterexample, e, cache); break;
            case EdgeStatus::Open:
                o.edge = e;
                o.outcome = Outcome::Skipped;
                o.evidence = "open question " + std::to_string(e.question) + "; not tested";
                break;
        }
        rep.edges.push_back(std::move(o));
        if (e.status == EdgeStatus::Implies && rep.edges.back().outcome == Outcome::Fail) {
            rep.aborted = true;
            return rep;
        }
    }
    for (const auto& m : cfg.corpus) {
        auto r = constant_limit_equivalence(m, cache);
        if (r.outcome != Outcome::Skipped) rep.equivalence.push_back(std::move(r));
    }
    return rep;
}

}  // namespace sconv
