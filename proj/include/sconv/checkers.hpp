#pragma once

#include "sconv/law.hpp"
#include "sconv/lln.hpp"
#include "sconv/mode.hpp"
#include "sconv/model.hpp"
#include "sconv/series.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace sconv {

enum class Verdict { Holds, Fails, Inconclusive };
enum class Method { Analytic, MonteCarlo };

std::string_view to_string(Verdict v);
std::string_view to_string(Method m);

struct ModeVerdict {
    ConvergenceMode mode;
    Verdict verdict = Verdict::Inconclusive;
    Method method = Method::Analytic;
    std::vector<std::pair<std::string, double>> params;
    std::string evidence;
    FlagSet flags;
    std::uint64_t seed = 0;
    std::optional<SeriesDiagnostic> series;  // the deciding series, when there is one
};

/// Ramps f(x) = clamp((x - a)/s, -1, 1) over a grid of centers and scales.
struct TestFunctionFamily {
    std::vector<double> centers;
    std::vector<double> scales{1.0, 0.25, 0.0625};

    /// 21 quantile anchors (levels 0.025..0.975) of a continuous limit; for
    /// limits with atoms, every atom shifted by +-s for each scale.
    static TestFunctionFamily for_limit(const Law& limit);
    std::vector<std::pair<double, double>> members() const;
};

struct MemberSeries {
    std::string member;
    SeriesDiagnostic series;
};

/// Per-member series; the overall verdict is the worst member's.
struct FamilySeries {
    SeriesVerdict verdict = SeriesVerdict::Convergent;
    std::vector<MemberSeries> members;
    /// First member carrying the overall verdict.
    const MemberSeries& deciding() const;
};

struct CheckOptions {
    std::int64_t horizon = std::int64_t{1} << 20;
    std::vector<double> epsilons{1.0, 0.5, 0.1};
    McConfig mc{200, 0, 0, 1};
    std::int64_t mc_horizon = std::int64_t{1} << 16;
    std::vector<double> extra_points;  // added to the default S2-d points
};

/// Sum_n |E f(X_n) - E f(X)| for every member of the family.
FamilySeries s1d_series(const SequenceModel& model, const TestFunctionFamily& family, std::int64_t horizon);

/// Default S2-d evaluation points: 21 quantiles of a continuous limit, or
/// atom +- {0.05, 0.25, 0.5, 2} for limits with atoms (atoms themselves dropped).
std::vector<double> default_eval_points(const Law& limit);

/// Sum_n |F_n(x) - F(x)| per point. Throws PreconditionError naming the
/// point when it is an atom of the limit.
FamilySeries s2d_series(const SequenceModel& model, const std::vector<double>& points, std::int64_t horizon);

/// Sum_n P(n (ln n)^(1+beta) |X_n - X| >= delta).
SeriesDiagnostic prop37_condition2_series(const SequenceModel& model, double beta, double delta,
                                          std::int64_t horizon);

ModeVerdict check_mode(const SequenceModel& model, const ConvergenceMode& mode, const CheckOptions& opt = {});

/// probe(n, t) = P(|X_n - X|^alpha >= t).
using TailProbe = std::function<double(std::int64_t, double)>;

/// Probe built from the model's analytic tails.
TailProbe model_probe(const SequenceModel& model, double alpha);

struct ExtractOptions {
    bool monotone = true;  // probe nonincreasing in n: gallop and bisect
    std::int64_t cap = std::int64_t{1} << 40;
    double precision = 1e-12;  // relative slack on the bound
};

/// n'_k = smallest n > n'_(k-1) with probe(n, 1/k^2) <= 1/k^2, for k = 1..k_max.
/// Throws ExtractionStalled(k) when no index below the cap qualifies.
std::vector<std::int64_t> extract_strong_subsequence(const TailProbe& probe, int k_max, const ExtractOptions& opt = {});

/// Fraction of seeded paths whose partial sums of |X_(n'_k) - X|^alpha move by
/// less than `tol` over the last half of the indices.
double subsequence_cauchy_rate(const SequenceModel& model, const std::vector<std::int64_t>& indices, double alpha,
                               int paths, std::uint64_t seed, double tol = 0.01);

}  // namespace sconv
