#include "sconv/mode.hpp"

#include "sconv/errors.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

namespace sconv {

std::string_view tag_name(ModeTag t) {
    switch (t) {
        case ModeTag::AS: return "AS";
        case ModeTag::InProb: return "IN_PROB";
        case ModeTag::LP: return "LP";
        case ModeTag::LInf: return "L_INF";
        case ModeTag::InDist: return "IN_DIST";
        case ModeTag::CC: return "CC";
        case ModeTag::SLP: return "S_LP";
        case ModeTag::SLInf: return "S_L_INF";
        case ModeTag::SAlphaAS: return "S_ALPHA_AS";
        case ModeTag::S1D: return "S1_D";
        case ModeTag::S2D: return "S2_D";
    }
    return "?";
}

void ConvergenceMode::validate() const {
    if (parameterized() && !(param > 0.0 && std::isfinite(param)))
        throw PreconditionError(std::string(tag_name(tag)) + " needs a positive order");
}

std::string ConvergenceMode::id() const {
    std::string out(tag_name(tag));
    if (parameterized()) {
        std::ostringstream os;
        os << param;
        out += "(" + os.str() + ")";
    }
    return out;
}

ConvergenceMode parse_mode(std::string_view text, double param) {
    std::string s;
    for (char c : text) {
        if (c == '-' || c == ' ' || c == '.') c = '_';
        s.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    }
    if (auto lp = s.find('('); lp != std::string::npos) {
        const auto rp = s.find(')', lp);
        if (rp == std::string::npos) throw PreconditionError("malformed mode '" + std::string(text) + "'");
        param = std::stod(s.substr(lp + 1, rp - lp - 1));
        s.erase(lp);
    }
    ConvergenceMode m;
    if (s == "AS" || s == "A_S_") m = ConvergenceMode::as();
    else if (s == "IN_PROB" || s == "P" || s == "PROB") m = ConvergenceMode::in_prob();
    else if (s == "LP" || s == "L_P") m = ConvergenceMode::lp(param);
    else if (s == "L_INF" || s == "LINF") m = ConvergenceMode::l_inf();
    else if (s == "IN_DIST" || s == "D" || s == "DIST") m = ConvergenceMode::in_dist();
    else if (s == "CC" || s == "C_C_") m = ConvergenceMode::cc();
    else if (s == "S_LP" || s == "SLP" || s == "S_L_P") m = ConvergenceMode::s_lp(param);
    else if (s == "S_L_INF" || s == "SLINF" || s == "S_LINF") m = ConvergenceMode::s_l_inf();
    else if (s == "S_ALPHA_AS" || s == "SALPHA_AS" || s == "S_ALPHA_A_S_") m = ConvergenceMode::s_alpha_as(param);
    else if (s == "S1_D" || s == "S1D") m = ConvergenceMode::s1_d();
    else if (s == "S2_D" || s == "S2D") m = ConvergenceMode::s2_d();
    else throw PreconditionError("unknown convergence mode '" + std::string(text) + "'");
    m.validate();
    return m;
}

}  // namespace sconv
