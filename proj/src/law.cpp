#include "sconv/law.hpp"

#include "sconv/errors.hpp"
#include "sconv/special.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sconv {

namespace {

double piece_cdf(const Law::Piece& p, double x) {
    const double z = (x - p.shift) / p.scale;
    return p.scale > 0 ? p.base.cdf(z) : p.base.sf(z);
}

double piece_sf(const Law::Piece& p, double x) {
    const double z = (x - p.shift) / p.scale;
    return p.scale > 0 ? p.base.sf(z) : p.base.cdf(z);
}

bool aligned(const Law& a, const Law& b) {
    if (a.atoms().size() != b.atoms().size() || a.pieces().size() != b.pieces().size()) return false;
    for (std::size_t i = 0; i < a.pieces().size(); ++i) {
        const auto& pa = a.pieces()[i];
        const auto& pb = b.pieces()[i];
        if (!(pa.base == pb.base) || (pa.scale > 0) != (pb.scale > 0)) return false;
    }
    return true;
}

// F_pa(x) - F_pb(x) for two affine images of one base law.
double paired_piece_gap(const Law::Piece& pa, const Law::Piece& pb, double x) {
    const double zb = (x - pb.shift) / pb.scale;
    if (pa.scale == pb.scale) {
        // Equal scales: the interval width is the shift difference, exactly.
        const double dz = (pb.shift - pa.shift) / pa.scale;
        if (dz == 0.0) return 0.0;
        const double mass = dz > 0 ? pa.base.prob_interval(zb, dz) : pa.base.prob_interval(zb + dz, -dz);
        return (dz > 0) == (pa.scale > 0) ? mass : -mass;
    }
    const double za = (x - pa.shift) / pa.scale;
    if (za == zb) return 0.0;
    const double mass = pa.base.prob_between(std::min(za, zb), std::max(za, zb));
    const double sign = (za > zb) == (pa.scale > 0) ? 1.0 : -1.0;
    return sign * mass;
}

template <class F>
double integrate_split(F&& f, double lo, double hi, std::vector<double> cuts) {
    cuts.push_back(lo);
    cuts.push_back(hi);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    CompensatedSum acc;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double a = cuts[i], b = cuts[i + 1];
        if (a < lo || b > hi || !(b > a)) continue;
        acc.add(integrate(f, a, b, 1e-11, 12));
    }
    return acc.value();
}

void add_cuts(const Law& l, double lo, double hi, std::vector<double>& cuts) {
    for (const auto& at : l.atoms())
        if (at.value > lo && at.value < hi) cuts.push_back(at.value);
    for (const auto& p : l.pieces()) {
        for (double k : {-10.0, -1.0, 0.0, 1.0, 10.0}) {
            const double c = p.shift + p.scale * k;
            if (c > lo && c < hi) cuts.push_back(c);
        }
        for (double e : {p.base.support_min(), p.base.support_max()}) {
            if (!std::isfinite(e)) continue;
            const double c = p.shift + p.scale * e;
            if (c > lo && c < hi) cuts.push_back(c);
        }
    }
}

std::string fmt(double x) {
    std::ostringstream os;
    os << x;
    return os.str();
}

}  // namespace

Law Law::of(const DistributionSpec& d) {
    Law out;
    if (d.is_discrete()) {
        for (auto [v, w] : d.atoms()) out.atoms_.push_back({v, w});
    } else {
        out.pieces_.push_back({1.0, 0.0, 1.0, d});
    }
    return out;
}

Law Law::point(double value) {
    Law out;
    out.atoms_.push_back({value, 1.0});
    return out;
}

Law Law::mixture(const std::vector<std::pair<double, Law>>& parts) {
    Law out;
    for (const auto& [w, l] : parts) {
        if (w < 0.0) throw PreconditionError("mixture weights must be nonnegative");
        if (w == 0.0) continue;
        for (auto a : l.atoms_) out.atoms_.push_back({a.value, a.weight * w});
        for (auto p : l.pieces_) {
            p.weight *= w;
            out.pieces_.push_back(p);
        }
    }
    return out;
}

Law Law::affine(double a, double b) const {
    Law out;
    if (b == 0.0) return point(a);
    for (auto at : atoms_) out.atoms_.push_back({a + b * at.value, at.weight});
    for (auto p : pieces_) out.pieces_.push_back({p.weight, a + b * p.shift, b * p.scale, p.base});
    return out;
}

double Law::cdf(double x) const {
    CompensatedSum acc;
    for (const auto& a : atoms_)
        if (a.value <= x) acc.add(a.weight);
    for (const auto& p : pieces_) acc.add(p.weight * piece_cdf(p, x));
    return std::clamp(acc.value(), 0.0, 1.0);
}

double Law::cdf_left(double x) const {
    CompensatedSum acc;
    for (const auto& a : atoms_)
        if (a.value < x) acc.add(a.weight);
    for (const auto& p : pieces_) acc.add(p.weight * piece_cdf(p, x));
    return std::clamp(acc.value(), 0.0, 1.0);
}

double Law::sf(double x) const {
    CompensatedSum acc;
    for (const auto& a : atoms_)
        if (a.value > x) acc.add(a.weight);
    for (const auto& p : pieces_) acc.add(p.weight * piece_sf(p, x));
    return std::clamp(acc.value(), 0.0, 1.0);
}

double Law::support_min() const {
    double m = kInf;
    for (const auto& a : atoms_) m = std::min(m, a.value);
    for (const auto& p : pieces_) {
        const double e = p.scale > 0 ? p.base.support_min() : p.base.support_max();
        m = std::min(m, p.shift + p.scale * e);
    }
    return m;
}

double Law::support_max() const {
    double m = -kInf;
    for (const auto& a : atoms_) m = std::max(m, a.value);
    for (const auto& p : pieces_) {
        const double e = p.scale > 0 ? p.base.support_max() : p.base.support_min();
        m = std::max(m, p.shift + p.scale * e);
    }
    return m;
}

double Law::ess_sup_abs() const { return std::max(std::abs(support_min()), std::abs(support_max())); }

double Law::quantile(double u) const {
    if (!(u > 0.0 && u < 1.0)) throw DomainError("quantile level must lie in (0,1)");
    if (atoms_.empty() && pieces_.size() == 1) {
        const auto& p = pieces_[0];
        return p.shift + p.scale * p.base.quantile(p.scale > 0 ? u : 1.0 - u);
    }
    double lo = support_min(), hi = support_max();
    if (!std::isfinite(lo)) {
        lo = -1.0;
        while (cdf(lo) > u) lo *= 2.0;
    }
    if (!std::isfinite(hi)) {
        hi = 1.0;
        while (cdf(hi) < u) hi *= 2.0;
    }
    for (int i = 0; i < 200 && hi - lo > 1e-14 * std::max(1.0, std::abs(lo)); ++i) {
        const double mid = 0.5 * (lo + hi);
        (cdf(mid) >= u ? hi : lo) = mid;
    }
    return hi;
}

double Law::ramp_expectation(double center, double width) const {
    if (!(width > 0.0)) throw PreconditionError("ramp width must be positive");
    CompensatedSum acc;
    for (const auto& a : atoms_) acc.add(a.weight * ramp(a.value, center, width));
    if (!pieces_.empty()) {
        const double lo = center - width, hi = center + width;
        Law cont;
        cont.pieces_ = pieces_;
        double wsum = 0.0;
        for (const auto& p : pieces_) wsum += p.weight;
        std::vector<double> cuts;
        add_cuts(cont, lo, hi, cuts);
        auto f = [&](double y) {
            double s = 0.0;
            for (const auto& p : pieces_) s += p.weight * piece_sf(p, y);
            return s;
        };
        // E f(Y) = -P(Y in R) + (1/w) * int_{c-w}^{c+w} P(Y > y) dy for the continuous part.
        acc.add(-wsum + integrate_split(f, lo, hi, cuts) / width);
    }
    return acc.value();
}

double Law::density_max(double lo, double hi) const {
    double m = 0.0;
    for (const auto& p : pieces_) {
        double zl = (lo - p.shift) / p.scale, zh = (hi - p.shift) / p.scale;
        if (zl > zh) std::swap(zl, zh);
        m += p.weight * p.base.density_bounds(zl, zh).second / std::abs(p.scale);
    }
    return m;
}

bool Law::is_bounded_density() const { return atoms_.empty() && !pieces_.empty(); }

std::string Law::label() const {
    if (is_point()) return "point(" + fmt(atoms_[0].value) + ")";
    if (atoms_.empty() && pieces_.size() == 1 && pieces_[0].shift == 0.0 && pieces_[0].scale == 1.0)
        return pieces_[0].base.label();
    std::string out = "mix{";
    bool first = true;
    for (const auto& a : atoms_) {
        out += (first ? "" : ";") + fmt(a.weight) + "@" + fmt(a.value);
        first = false;
    }
    for (const auto& p : pieces_) {
        out += (first ? "" : ";") + fmt(p.weight) + "*(" + fmt(p.shift) + "+" + fmt(p.scale) + "*" + p.base.label() + ")";
        first = false;
    }
    return out + "}";
}

double cdf_gap(const Law& a, const Law& b, double x) {
    if (aligned(a, b)) {
        CompensatedSum acc;
        for (std::size_t i = 0; i < a.atoms().size(); ++i) {
            const auto& aa = a.atoms()[i];
            const auto& ab = b.atoms()[i];
            const double ia = aa.value <= x ? 1.0 : 0.0;
            const double ib = ab.value <= x ? 1.0 : 0.0;
            acc.add(aa.weight * (ia - ib) + (aa.weight - ab.weight) * ib);
        }
        for (std::size_t i = 0; i < a.pieces().size(); ++i) {
            const auto& pa = a.pieces()[i];
            const auto& pb = b.pieces()[i];
            acc.add(pa.weight * paired_piece_gap(pa, pb, x));
            if (pa.weight != pb.weight) acc.add((pa.weight - pb.weight) * piece_cdf(pb, x));
        }
        return acc.value();
    }
    const double fa = a.cdf(x), fb = b.cdf(x);
    if (fa + fb > 1.0) return b.sf(x) - a.sf(x);
    return fa - fb;
}

double ramp_gap(const Law& a, const Law& b, double center, double width) {
    if (!(width > 0.0)) throw PreconditionError("ramp width must be positive");
    const double lo = center - width, hi = center + width;
    std::vector<double> cuts;
    add_cuts(a, lo, hi, cuts);
    add_cuts(b, lo, hi, cuts);
    auto f = [&](double y) { return cdf_gap(a, b, y); };
    return -integrate_split(f, lo, hi, cuts) / width;
}

}  // namespace sconv
