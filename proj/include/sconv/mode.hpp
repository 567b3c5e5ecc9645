#pragma once

#include <string>
#include <string_view>

namespace sconv {

enum class ModeTag { AS, InProb, LP, LInf, InDist, CC, SLP, SLInf, SAlphaAS, S1D, S2D };

/// A convergence mode; LP, SLP and SAlphaAS carry their order in `param`.
struct ConvergenceMode {
    ModeTag tag = ModeTag::AS;
    double param = 0.0;

    static ConvergenceMode as() { return {ModeTag::AS, 0.0}; }
    static ConvergenceMode in_prob() { return {ModeTag::InProb, 0.0}; }
    static ConvergenceMode lp(double p) { return {ModeTag::LP, p}; }
    static ConvergenceMode l_inf() { return {ModeTag::LInf, 0.0}; }
    static ConvergenceMode in_dist() { return {ModeTag::InDist, 0.0}; }
    static ConvergenceMode cc() { return {ModeTag::CC, 0.0}; }
    static ConvergenceMode s_lp(double p) { return {ModeTag::SLP, p}; }
    static ConvergenceMode s_l_inf() { return {ModeTag::SLInf, 0.0}; }
    static ConvergenceMode s_alpha_as(double a) { return {ModeTag::SAlphaAS, a}; }
    static ConvergenceMode s1_d() { return {ModeTag::S1D, 0.0}; }
    static ConvergenceMode s2_d() { return {ModeTag::S2D, 0.0}; }

    bool parameterized() const noexcept {
        return tag == ModeTag::LP || tag == ModeTag::SLP || tag == ModeTag::SAlphaAS;
    }
    /// Throws PreconditionError unless parameterized tags carry a positive order.
    void validate() const;
    /// "S_LP(2)", "CC", ...
    std::string id() const;

    friend bool operator==(const ConvergenceMode&, const ConvergenceMode&) = default;
    friend bool operator<(const ConvergenceMode& a, const ConvergenceMode& b) {
        return a.tag != b.tag ? a.tag < b.tag : a.param < b.param;
    }
};

std::string_view tag_name(ModeTag t);

/// Accepts "s-lp", "S_LP", "cc", "s2-d", "as", "p", ... (case-insensitive);
/// `param` fills the order of parameterized tags.
ConvergenceMode parse_mode(std::string_view text, double param = 1.0);

}  // namespace sconv
