#pragma once

#include "sconv/distribution.hpp"
#include "sconv/explicit_space.hpp"
#include "sconv/law.hpp"
#include "sconv/series.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace sconv {

enum class ModelKind { IidMean, ExplicitSpace, Deterministic, Perturbed, Composed };
enum class ComposeOp { Sum, Product, Quotient };

std::string_view to_string(ModelKind k);
std::string_view to_string(ComposeOp op);

/// a_n for the perturbation X_n = X + a_n * W_n.
struct ScaleSequence {
    enum class Kind { Power, InvLog, Constant, Zero };
    Kind kind = Kind::Zero;
    double coef = 0.0;
    double power = 0.0;

    static ScaleSequence pow(double c, double q) { return {Kind::Power, c, q}; }
    /// c / ln(n + 1)
    static ScaleSequence inv_log(double c) { return {Kind::InvLog, c, 0.0}; }
    static ScaleSequence constant(double c) { return {Kind::Constant, c, 0.0}; }
    static ScaleSequence zero() { return {Kind::Zero, 0.0, 0.0}; }

    double at(std::int64_t n) const;
    /// sup_n |a_n|
    double sup_abs() const;
    bool vanishes() const noexcept { return kind == Kind::Zero || coef == 0.0; }
    std::string label() const;
    friend bool operator==(const ScaleSequence&, const ScaleSequence&) = default;
};

/// Declarative description of a random sequence {X_n} and its limit X.
///
///   IidMean        X_n = S_n / n for iid summands, limit the center of the law
///   ExplicitSpace  one of the four counterexamples
///   Perturbed      X_n = X + a_n W_n with W_n iid, independent of X; reported
///                  as Deterministic when W is a point mass
///   Composed       X_n op Y_n against X op C, where Y_n -> C
struct SequenceModel {
    ModelKind kind = ModelKind::IidMean;
    DistributionSpec base = DistributionSpec::normal();  // summand law, or the limit X
    ExampleSpec example;
    ScaleSequence scale;
    DistributionSpec noise = DistributionSpec::point_mass(0.0);
    ComposeOp op = ComposeOp::Sum;
    std::shared_ptr<const SequenceModel> x;
    std::shared_ptr<const SequenceModel> y;
    std::string name;  // optional display name

    static SequenceModel iid_mean(const DistributionSpec& d);
    static SequenceModel explicit_space(const ExampleSpec& e);
    static SequenceModel perturbed(const DistributionSpec& limit, const ScaleSequence& a, const DistributionSpec& noise);
    /// X_n = X + delta_n, delta_n = a_n
    static SequenceModel deterministic(const DistributionSpec& limit, const ScaleSequence& a);
    static SequenceModel composed(ComposeOp op, const SequenceModel& x, const SequenceModel& y);

    /// Throws PreconditionError when the model is malformed, including the
    /// boundedness hypotheses of PRODUCT and QUOTIENT compositions.
    void validate() const;
    ModelKind reported_kind() const;
    /// X_n - X vanishes identically.
    bool is_degenerate() const;
    std::string id() const;
};

// ---- deviation D_n = X_n - X ------------------------------------------------

enum class TailSide { Abs, Above, Below };  // P(|D| >= e), P(D > e), P(D <= -e)

/// True when moments, sup norms and tails of D_n have closed forms.
bool deviation_is_analytic(const SequenceModel& m);
/// Whether a single term is cheap enough for dense evaluation.
bool deviation_is_cheap(const SequenceModel& m);

double deviation_moment(const SequenceModel& m, double p, std::int64_t n);
double deviation_sup(const SequenceModel& m, std::int64_t n);
double deviation_tail(const SequenceModel& m, double eps, std::int64_t n, TailSide side = TailSide::Abs);

std::vector<Comparison> deviation_moment_certificates(const SequenceModel& m, double p);
std::vector<Comparison> deviation_sup_certificates(const SequenceModel& m);
std::vector<Comparison> deviation_tail_certificates(const SequenceModel& m, double eps, TailSide side = TailSide::Abs);

/// The centered iid mean of the model, if it is one (mu used for centering).
std::optional<double> iid_center(const SequenceModel& m);

// ---- marginal laws ----------------------------------------------------------

bool marginal_is_analytic(const SequenceModel& m);
Law marginal_law(const SequenceModel& m, std::int64_t n);
Law limit_law(const SequenceModel& m);
/// sup_n ess sup |X_n| together with ess sup |X|; +inf when unbounded.
double model_ess_bound(const SequenceModel& m);

/// Certificates for sum_n |E f(X_n) - E f(X)| with f the ramp (center, width).
std::vector<Comparison> ramp_gap_certificates(const SequenceModel& m, double center, double width);
/// Certificates for sum_n |F_n(x) - F(x)|.
std::vector<Comparison> cdf_gap_certificates(const SequenceModel& m, double x);

}  // namespace sconv
