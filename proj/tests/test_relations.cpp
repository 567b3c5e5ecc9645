#include "sconv/errors.hpp"
#include "sconv/relations.hpp"

#include <doctest.h>

#include <cmath>

using namespace sconv;
using M = ConvergenceMode;

namespace {

const ImplicationEdge& find_edge(M from, M to, EdgeStatus status, Premise premise = Premise::None) {
    for (const auto& e : edge_registry())
        if (e.from == from && e.to == to && e.status == status && e.premise == premise) return e;
    throw std::logic_error("edge not registered: " + from.id() + " -> " + to.id());
}

SequenceModel example(const char* id) { return SequenceModel::explicit_space(parse_example(id)); }

CheckOptions quick() {
    CheckOptions o;
    o.horizon = 1 << 16;
    return o;
}

}  // namespace

TEST_CASE("registry invariants") {
    int implies = 0, refuted = 0, open = 0;
    for (const auto& e : edge_registry()) {
        CAPTURE(e.id);
        CHECK_FALSE(e.citation.empty());
        switch (e.status) {
            case EdgeStatus::Implies:
                ++implies;
                CHECK_FALSE(e.counterexample);
                break;
            case EdgeStatus::NotImplies:
                ++refuted;
                CHECK(e.counterexample.has_value());
                CHECK(e.premise == Premise::None);
                break;
            case EdgeStatus::Open:
                ++open;
                CHECK(e.question >= 1);
                CHECK(e.question <= 5);
                break;
        }
    }
    CHECK(implies == 18);
    CHECK(refuted == 8);
    CHECK(open == 7);
}

TEST_CASE("the implication closure contradicts no registered edge") {
    CHECK(closure_conflicts(edge_registry()).empty());
}

TEST_CASE("a planted contradiction is caught by the closure") {
    auto edges = edge_registry();
    ImplicationEdge bad;
    bad.id = "planted";
    bad.from = M::s_l_inf();
    bad.to = M::as();
    bad.status = EdgeStatus::NotImplies;
    bad.counterexample = parse_example("exa-3.1");
    edges.push_back(bad);
    const auto c = closure_conflicts(edges);
    REQUIRE(c.size() == 1);
    CHECK(c[0].rfind("planted", 0) == 0);
}

TEST_CASE("the fifth question keeps its parameter note") {
    const auto& e = find_edge(M::cc(), M::s1_d(), EdgeStatus::Open);
    CHECK(e.question == 5);
    CHECK(e.citation.find("(α>0)") != std::string::npos);
}

TEST_CASE("implications on single examples") {
    VerdictCache cache(quick());
    const auto a = verify_implication(find_edge(M::s_lp(1), M::cc(), EdgeStatus::Implies), {example("exa-3.1")}, cache);
    CHECK(a.outcome == Outcome::Pass);
    CHECK(a.witnesses.size() == 1);

    const auto b =
        verify_implication(find_edge(M::s_l_inf(), M::s_lp(1), EdgeStatus::Implies), {example("exa-3.1")}, cache);
    CHECK(b.outcome == Outcome::Pass);
    CHECK(b.witnesses.empty());
    CHECK(b.vacuous.size() == 1);

    const auto c = verify_implication(find_edge(M::cc(), M::as(), EdgeStatus::Implies), {example("exa-3.3")}, cache);
    CHECK(c.outcome == Outcome::Pass);
    CHECK(c.witnesses.size() == 1);
}

TEST_CASE("a corpus that only has unsupported models skips the edge") {
    VerdictCache cache(quick());
    const auto m = SequenceModel::iid_mean(DistributionSpec::student_t(3));
    const auto e = verify_implication(find_edge(M::s_l_inf(), M::s_lp(1), EdgeStatus::Implies), {m}, cache);
    CHECK(e.outcome == Outcome::Skipped);
    CHECK(e.skipped.size() == 1);
}

TEST_CASE("counterexamples are reproduced") {
    VerdictCache cache(quick());
    const auto a = confirm_counterexample(parse_example("exa-3.1"),
                                          find_edge(M::s_lp(1), M::s_l_inf(), EdgeStatus::NotImplies), cache);
    CHECK(a.outcome == Outcome::Pass);
    const auto b = confirm_counterexample(parse_example("exa-3.3"),
                                          find_edge(M::cc(), M::s_alpha_as(1), EdgeStatus::NotImplies), cache);
    CHECK(b.outcome == Outcome::Pass);
    const auto c =
        confirm_counterexample(parse_example("exa-3.4"), find_edge(M::s1_d(), M::in_prob(), EdgeStatus::NotImplies), cache);
    CHECK(c.outcome == Outcome::Pass);
}

TEST_CASE("a counterexample registered against the wrong edge fails") {
    VerdictCache cache(quick());
    ImplicationEdge e = find_edge(M::s_lp(1), M::s_l_inf(), EdgeStatus::NotImplies);
    e.counterexample = parse_example("exa-3.2");
    const auto out = confirm_counterexample(parse_example("exa-3.2"), e, cache);
    CHECK(out.outcome == Outcome::Fail);
}

TEST_CASE("composition with a constant sequence") {
    const auto x = SequenceModel::explicit_space(ExampleSpec{ExampleName::Exa34, 1.0, DistributionSpec::normal().truncated(-3, 3)});
    const auto y = SequenceModel::deterministic(DistributionSpec::point_mass(2.0), ScaleSequence::pow(1, 2));
    const auto sum = slutsky_compose(x, y, ComposeOp::Sum, quick());
    CHECK(sum.verdict.verdict == Verdict::Holds);
    const auto prod = slutsky_compose(x, y, ComposeOp::Product, quick());
    CHECK(prod.verdict.verdict == Verdict::Holds);

    // the limit of the product is 2X: compare against the truncated normal scaled by 2
    const Law lim = limit_law(prod.model);
    const auto tn = DistributionSpec::normal().truncated(-3, 3);
    for (double t : {-5.0, -1.0, 0.4, 5.9})
        CHECK(lim.cdf(t) == doctest::Approx(tn.cdf(t / 2.0)).epsilon(1e-12));

    // per-member terms stay below Lip(f) * sup|x| / n^2 for the product
    for (const auto& mem : prod.verdict.series ? std::vector<SeriesPoint>(prod.verdict.series->points)
                                               : std::vector<SeriesPoint>{})
        CHECK(mem.term <= 16.0 * 3.0 / (double(mem.n) * mem.n) * (1 + 1e-9));

    const auto zero = SequenceModel::deterministic(DistributionSpec::point_mass(0.0), ScaleSequence::pow(1, 2));
    CHECK_THROWS_AS(slutsky_compose(x, zero, ComposeOp::Quotient, quick()), PreconditionError);
    const auto unbounded = SequenceModel::explicit_space(parse_example("exa-3.4"));
    CHECK_THROWS_AS(slutsky_compose(unbounded, y, ComposeOp::Product, quick()), PreconditionError);
}

TEST_CASE("constant-limit equivalence in both directions") {
    VerdictCache cache(quick());
    const auto cauchy = SequenceModel::perturbed(DistributionSpec::point_mass(1.0), ScaleSequence::pow(1, 0.5),
                                                 DistributionSpec::cauchy());
    const auto a = constant_limit_equivalence(cauchy, cache);
    CHECK(a.s2d == Verdict::Fails);
    CHECK(a.cc == Verdict::Fails);
    CHECK(a.outcome == Outcome::Pass);

    const auto unif = SequenceModel::perturbed(DistributionSpec::point_mass(1.0), ScaleSequence::pow(1, 2),
                                               DistributionSpec::uniform());
    const auto b = constant_limit_equivalence(unif, cache);
    CHECK(b.s2d == Verdict::Holds);
    CHECK(b.cc == Verdict::Holds);
    CHECK(b.outcome == Outcome::Pass);

    CHECK(has_constant_limit(unif));
    CHECK_FALSE(has_constant_limit(example("exa-3.4")));
}

TEST_CASE("strong L1 bounds every test-function series by its Lipschitz multiple") {
    CheckOptions o = quick();
    o.horizon = 1 << 12;
    for (const auto& m : default_corpus()) {
        if (!deviation_is_analytic(m) || !marginal_is_analytic(m)) continue;
        const auto v = check_mode(m, M::s_lp(1), o);
        if (v.verdict != Verdict::Holds) continue;
        const auto fam = TestFunctionFamily::for_limit(limit_law(m));
        const auto s = s1d_series(m, fam, o.horizon);
        CAPTURE(m.id());
        CHECK(s.verdict == SeriesVerdict::Convergent);
        const auto members = fam.members();
        for (std::size_t i = 0; i < members.size(); ++i)
            for (const auto& p : s.members[i].series.points)
                CHECK(p.term <= deviation_moment(m, 1.0, p.n) / members[i].second * (1 + 1e-9) + 1e-15);
    }
}

TEST_CASE("the full matrix passes on the default corpus") {
    const auto r = full_relation_matrix(RelationConfig{});
    CHECK(r.passed());
    CHECK_FALSE(r.aborted);
    CHECK(r.closure_conflicts.empty());
    for (const auto& e : r.edges) {
        CAPTURE(e.edge.id);
        if (e.edge.status == EdgeStatus::Open) {
            CHECK(e.outcome == Outcome::Skipped);
        } else {
            CHECK(e.outcome == Outcome::Pass);
        }
        if (e.edge.status == EdgeStatus::Implies) CHECK_FALSE(e.witnesses.empty());
    }
    for (const auto& q : r.equivalence) CHECK(q.outcome != Outcome::Fail);
    CHECK_FALSE(r.matrix_table().empty());
}
