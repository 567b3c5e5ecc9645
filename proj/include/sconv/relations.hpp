#pragma once

#include "sconv/checkers.hpp"
#include "sconv/explicit_space.hpp"
#include "sconv/mode.hpp"
#include "sconv/model.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sconv {

enum class EdgeStatus { Implies, NotImplies, Open };
enum class Outcome { Pass, Fail, Skipped };

std::string_view to_string(EdgeStatus s);
std::string_view to_string(Outcome o);

/// Extra hypothesis an implication needs besides the antecedent mode.
enum class Premise {
    None,
    ConstantLimit,     // X is a constant
    DiscreteLimit,     // X has finitely many atoms and the rest of the line carries no mass
    DensityWithRate,   // X has a bounded density and the rate series converges (antecedent replaced)
};

std::string_view to_string(Premise p);

struct ImplicationEdge {
    std::string id;
    ConvergenceMode from;
    ConvergenceMode to;
    EdgeStatus status = EdgeStatus::Implies;
    Premise premise = Premise::None;
    std::string citation;
    std::optional<ExampleSpec> counterexample;  // NotImplies only
    /// NotImplies: the consequent's failure is argued through this mode, which
    /// must fail on the example as well.
    std::optional<ConvergenceMode> via;
    int question = 0;  // Open only
};

/// Both diagrams, the conditional implications and every claimed non-implication.
const std::vector<ImplicationEdge>& edge_registry();

/// NOT_IMPLIES or OPEN edges that the transitive closure of the unconditional
/// IMPLIES edges would contradict. Empty for a consistent registry.
std::vector<std::string> closure_conflicts(const std::vector<ImplicationEdge>& edges);

/// Corpus used by the relation matrix: the four examples, a point mass, a
/// normal iid mean, perturbations X + d_n of a normal limit, and constant
/// limits approached by uniform and Cauchy noise.
std::vector<SequenceModel> default_corpus();

struct ModelRecord {
    std::string model;
    std::string from_verdict;
    std::string to_verdict;
    std::string note;
};

struct EdgeOutcome {
    ImplicationEdge edge;
    Outcome outcome = Outcome::Skipped;
    std::vector<std::string> witnesses;  // non-degenerate models with both ends HOLDS
    std::vector<ModelRecord> skipped;
    std::vector<ModelRecord> vacuous;
    std::optional<ModelRecord> violation;
    std::string evidence;
};

/// Memoized analytic verdicts for (model, mode); Monte Carlo verdicts count as
/// unsupported here.
class VerdictCache {
public:
    explicit VerdictCache(CheckOptions opt = {}) : opt_(std::move(opt)) {}
    /// Nullopt with `why` filled when no analytic verdict exists.
    std::optional<ModeVerdict> get(const SequenceModel& m, const ConvergenceMode& mode, std::string* why = nullptr);
    const CheckOptions& options() const noexcept { return opt_; }

private:
    struct Entry {
        std::optional<ModeVerdict> verdict;
        std::string why;
    };
    CheckOptions opt_;
    std::map<std::pair<std::string, std::string>, Entry> memo_;
};

/// PASS unless some corpus model has the antecedent HOLDS and the consequent FAILS.
EdgeOutcome verify_implication(const ImplicationEdge& edge, const std::vector<SequenceModel>& corpus,
                               VerdictCache& cache);

/// PASS when the registered example has the antecedent HOLDS, the consequent
/// FAILS, and every expected verdict of the example is reproduced.
EdgeOutcome confirm_counterexample(const ExampleSpec& spec, const ImplicationEdge& edge, VerdictCache& cache);

struct ComposeResult {
    SequenceModel model;
    ModeVerdict verdict;
};

/// Builds X_n op Y_n after checking that x is S1-d convergent, y is S-L1
/// convergent to a constant and the boundedness clauses of the operation hold.
ComposeResult slutsky_compose(const SequenceModel& x, const SequenceModel& y, ComposeOp op,
                              const CheckOptions& opt = {});

/// Whether the model's limit is a single point (computed from the limit law).
bool has_constant_limit(const SequenceModel& m);

struct EquivalenceRecord {
    std::string model;
    Verdict s2d = Verdict::Inconclusive;
    Verdict cc = Verdict::Inconclusive;
    Outcome outcome = Outcome::Skipped;
};

/// S2-d (at points other than the constant) against c.c. for a constant-limit model.
EquivalenceRecord constant_limit_equivalence(const SequenceModel& m, VerdictCache& cache);

struct RelationConfig {
    std::uint64_t seed = 1;
    int jobs = 1;
    std::int64_t horizon = std::int64_t{1} << 20;
    std::vector<SequenceModel> corpus = default_corpus();
};

struct RelationReport {
    std::uint64_t seed = 0;
    std::vector<std::string> corpus;
    std::vector<EdgeOutcome> edges;
    std::vector<EquivalenceRecord> equivalence;
    std::vector<std::string> closure_conflicts;
    bool aborted = false;  // an IMPLIES edge failed; later edges were not run

    bool passed() const;
    /// Rows and columns are modes; cells show the registered status.
    std::string matrix_table() const;
};

RelationReport full_relation_matrix(const RelationConfig& cfg);

}  // namespace sconv
