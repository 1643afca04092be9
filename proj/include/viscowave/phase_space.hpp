#pragma once

// Zone geometry of the extended phase space (t, r), r = |xi|, for
// u_tt - Lap(u) + g(t)(-Lap)u_t = 0.
//
// Each regime splits [0,inf) x (0,inf) into zones whose boundaries are the
// separating lines t_xi(r):
//
//   A    Z_pd  { G_half(t) r^2 <  N }   Z_ell { >= N }             curve t_xi
//   B/C  Z_hyp { g(t) r <  eps }        Z_red { eps <= g r < N }
//        Z_ell { g(t) r >= N }          curves t_xi1 (=N), t_xi2 (=eps)
//   D    Theta := 1 - g^2 r^2 / (4h), h = 1 - g'/2 >= 1:
//        Z_ell { Theta <= -1/4 }  Z_red { -1/4 < Theta <= 1/4 }
//        Z_hyp { Theta > 1/4 }          curves t_xi1 (-1/4), t_xi2 (+1/4)
//   E    h in [1/2, 1]:
//        Z_ell { Theta <= -N }  Z_pd { -N < Theta <= -1/4 }
//        Z_red { -1/4 < Theta <= 1/4 }  Z_hyp { Theta > 1/4 }
//        curves t_xi1 (-N), t_xi2 (-1/4), t_xi3 (+1/4)
//
// Boundary ties resolve to the more dissipative (elliptic-ward) side. Under
// the regime conditions the defining functions are monotone in t, so each
// curve is found by bracketed bisection; a curve "starting at the axis"
// (already past the threshold at t = 0) reports t_xi = 0, and a threshold
// never reached inside [0, t_max] reports NoRootError.

#include <string_view>

#include "coefficients.hpp"

namespace vw {

enum class ZoneLabel { Hyperbolic, Reduced, PseudoDifferential, Elliptic };

inline const char* to_string(ZoneLabel z) {
    switch (z) {
        case ZoneLabel::Hyperbolic: return "hyperbolic";
        case ZoneLabel::Reduced: return "reduced";
        case ZoneLabel::PseudoDifferential: return "pseudodifferential";
        case ZoneLabel::Elliptic: return "elliptic";
    }
    return "?";
}

struct ZoneConstants {
    double N = 100.0;    // large zone constant (elliptic-side threshold)
    double eps = 0.1;    // small zone constant (B/C hyperbolic-side threshold)
    double t_max = 1e6;  // horizon for separating-line root searches

    void validate() const {
        if (!(N > 0.0)) throw ZoneError("zone constant N must be positive");
        if (!(eps > 0.0 && eps < 1.0)) throw ZoneError("zone constant eps must lie in (0,1)");
        if (!(eps < N)) throw ZoneError("zone constants require eps < N");
        if (!(t_max > 0.0)) throw ZoneError("zone horizon t_max must be positive");
    }
};

// Theta(t, r) = 1 - g(t)^2 r^2 / (4 h(t)) with h = 1 - g'/2; the zone
// indicator for regimes D and E. Written with the g-underflow-safe square.
inline double theta(const Coefficient& c, double t, double r) {
    const double h = c.one_minus_half_g1(t);
    const double gr = c.g(t) * r;
    return 1.0 - gr * gr / (4.0 * h);
}

namespace detail {

inline void require_zone_inputs(double t, double r) {
    if (!(t >= 0.0)) throw ZoneError("zone classification requires t >= 0");
    if (!(r > 0.0)) throw ZoneError("zone classification requires r > 0");
}

inline void require_zone_regime(Regime requested, const Coefficient& c) {
    if (c.regime == Regime::Custom || c.regime == Regime::ScaleInvariant) return;
    const bool integrable_pair = (requested == Regime::B || requested == Regime::C) &&
                                 (c.regime == Regime::B || c.regime == Regime::C);
    if (c.regime != requested && !integrable_pair) {
        throw ZoneError(std::string("coefficient '") + c.id + "' (regime " +
                        to_string(c.regime) + ") does not match requested zone regime " +
                        to_string(requested));
    }
}

}  // namespace detail

// True for the regimes that carry a zone decomposition of the (t, r) plane.
inline bool has_zone_geometry(Regime rg) {
    switch (rg) {
        case Regime::A:
        case Regime::B:
        case Regime::C:
        case Regime::D:
        case Regime::E: return true;
        default: return false;
    }
}

inline ZoneLabel classify(Regime regime, const Coefficient& c, double t, double r,
                          const ZoneConstants& k = {}) {
    k.validate();
    detail::require_zone_inputs(t, r);
    detail::require_zone_regime(regime, c);
    switch (regime) {
        case Regime::A: {
            const double x = c.G_half(t) * r * r;
            return x >= k.N ? ZoneLabel::Elliptic : ZoneLabel::PseudoDifferential;
        }
        case Regime::B:
        case Regime::C: {
            const double x = c.g(t) * r;
            if (x >= k.N) return ZoneLabel::Elliptic;
            if (x >= k.eps) return ZoneLabel::Reduced;
            return ZoneLabel::Hyperbolic;
        }
        case Regime::D: {
            const double th = theta(c, t, r);
            if (th <= -0.25) return ZoneLabel::Elliptic;
            if (th <= 0.25) return ZoneLabel::Reduced;
            return ZoneLabel::Hyperbolic;
        }
        case Regime::E: {
            const double th = theta(c, t, r);
            if (th <= -k.N) return ZoneLabel::Elliptic;
            if (th <= -0.25) return ZoneLabel::PseudoDifferential;
            if (th <= 0.25) return ZoneLabel::Reduced;
            return ZoneLabel::Hyperbolic;
        }
        default:
            throw ZoneError(std::string("no zone decomposition for regime ") +
                            to_string(regime));
    }
}

namespace detail {

// Bracketed bisection for the monotone indicator phi (phi < 0 before the
// crossing, phi >= 0 after). Returns 0 when already past at t = 0, throws
// NoRootError when the threshold is not reached by t_max.
template <class Phi>
double boundary_bisect(Phi&& phi, double t_max, std::string_view curve) {
    double lo = 0.0, hi = t_max;
    const double p0 = phi(lo);
    if (p0 >= 0.0) return 0.0;
    if (phi(hi) < 0.0) {
        throw NoRootError(std::string("separating line ") + std::string(curve) +
                          ": threshold not reached in [0, " + std::to_string(t_max) + "]");
    }
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (phi(mid) < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo <= 1e-15 * std::max(1.0, hi)) break;
    }
    return hi;  // first point at/past the threshold: classification tie side
}

}  // namespace detail

// Solves the named boundary curve for its crossing time at frequency r.
// Curve names per regime:
//   A:    "t_xi"   G_half(t) r^2 = N
//   B/C:  "t_xi1"  g(t) r = N        (elliptic | reduced)
//         "t_xi2"  g(t) r = eps      (reduced  | hyperbolic)
//   D:    "t_xi1"  Theta = -1/4      (elliptic | reduced)
//         "t_xi2"  Theta = +1/4      (reduced  | hyperbolic)
//   E:    "t_xi1"  Theta = -N        (elliptic | pseudodifferential)
//         "t_xi2"  Theta = -1/4      (pseudodifferential | reduced)
//         "t_xi3"  Theta = +1/4      (reduced  | hyperbolic)
inline double separating_line(Regime regime, const Coefficient& c, std::string_view name,
                              double r, const ZoneConstants& k = {}) {
    k.validate();
    detail::require_zone_inputs(0.0, r);
    detail::require_zone_regime(regime, c);
    auto unknown = [&]() -> double {
        throw ZoneError(std::string("regime ") + to_string(regime) +
                        " has no separating line named '" + std::string(name) + "'");
    };
    switch (regime) {
        case Regime::A: {
            if (name != "t_xi") return unknown();
            // G_half increasing from 0: phi crosses upward.
            return detail::boundary_bisect(
                [&](double t) { return c.G_half(t) * r * r - k.N; }, k.t_max, name);
        }
        case Regime::B:
        case Regime::C: {
            double thr;
            if (name == "t_xi1") {
                thr = k.N;
            } else if (name == "t_xi2") {
                thr = k.eps;
            } else {
                return unknown();
            }
            // g decreasing: g(t) r falls through thr; phi = thr - g r rises.
            return detail::boundary_bisect(
                [&](double t) { return thr - c.g(t) * r; }, k.t_max, name);
        }
        case Regime::D: {
            double thr;
            if (name == "t_xi1") {
                thr = -0.25;
            } else if (name == "t_xi2") {
                thr = +0.25;
            } else {
                return unknown();
            }
            // f = g^2/h decreasing => Theta increasing.
            return detail::boundary_bisect(
                [&](double t) { return theta(c, t, r) - thr; }, k.t_max, name);
        }
        case Regime::E: {
            double thr;
            if (name == "t_xi1") {
                thr = -k.N;
            } else if (name == "t_xi2") {
                thr = -0.25;
            } else if (name == "t_xi3") {
                thr = +0.25;
            } else {
                return unknown();
            }
            // f = g^2/h increasing => Theta decreasing: phi = thr - Theta rises.
            return detail::boundary_bisect(
                [&](double t) { return thr - theta(c, t, r); }, k.t_max, name);
        }
        default:
            throw ZoneError(std::string("no zone decomposition for regime ") +
                            to_string(regime));
    }
}

inline std::vector<std::string> curve_names(Regime regime) {
    switch (regime) {
        case Regime::A: return {"t_xi"};
        case Regime::B:
        case Regime::C:
        case Regime::D: return {"t_xi1", "t_xi2"};
        case Regime::E: return {"t_xi1", "t_xi2", "t_xi3"};
        default: return {};
    }
}

// A named boundary solver r |-> t_xi(r) with its threshold baked in.
struct BoundaryCurve {
    std::string name;
    double threshold = 0.0;  // N, eps, or the Theta level
    std::function<double(double)> t_of_r;
};

// The regime's boundary curves ordered elliptic-side first (the order the
// zones are traversed with growing t at fixed r reverses this for E/D).
struct SeparatingLines {
    Regime regime = Regime::Custom;
    std::vector<BoundaryCurve> curves;
};

inline SeparatingLines make_separating_lines(Regime regime, const Coefficient& c,
                                             const ZoneConstants& k = {}) {
    k.validate();
    detail::require_zone_regime(regime, c);
    SeparatingLines lines;
    lines.regime = regime;
    auto threshold_of = [&](const std::string& name) {
        switch (regime) {
            case Regime::A: return k.N;
            case Regime::B:
            case Regime::C: return name == "t_xi1" ? k.N : k.eps;
            case Regime::D: return name == "t_xi1" ? -0.25 : 0.25;
            default:
                return name == "t_xi1" ? -k.N : (name == "t_xi2" ? -0.25 : 0.25);
        }
    };
    for (const auto& name : curve_names(regime)) {
        BoundaryCurve curve;
        curve.name = name;
        curve.threshold = threshold_of(name);
        curve.t_of_r = [regime, c, name, k](double r) {
            return separating_line(regime, c, name, r, k);
        };
        lines.curves.push_back(std::move(curve));
    }
    return lines;
}

// Diagnostic only: crossing times of 1 - g(t)^2 r^2/4 - g'(t)/2 = 0, the
// dashed hyperbolic/elliptic region boundary of the zone sketches. The
// indicator need not be monotone, so every sign change on a scan grid is
// bisected; no estimate consumes this curve.
inline std::vector<double> region_boundary_times(const Coefficient& c, double r,
                                                 const ZoneConstants& k = {},
                                                 int scan_samples = 4096) {
    k.validate();
    detail::require_zone_inputs(0.0, r);
    if (scan_samples < 2) throw ZoneError("region_boundary_times: need >= 2 scan samples");
    auto q = [&](double t) {
        const double gr = c.g(t) * r;
        return 1.0 - 0.25 * gr * gr - 0.5 * c.g1(t);
    };
    std::vector<double> roots;
    const double log_span = std::log1p(k.t_max);
    double t_prev = 0.0, q_prev = q(0.0);
    for (int i = 1; i < scan_samples; ++i) {
        const double t = std::expm1(double(i) / double(scan_samples - 1) * log_span);
        const double qt = q(t);
        if ((q_prev < 0.0 && qt >= 0.0) || (q_prev > 0.0 && qt <= 0.0)) {
            double lo = t_prev, hi = t;
            const bool rising = q_prev < 0.0;
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                const bool below = q(mid) < 0.0;
                if (below == rising) {
                    lo = mid;
                } else {
                    hi = mid;
                }
                if (hi - lo <= 1e-15 * std::max(1.0, hi)) break;
            }
            roots.push_back(0.5 * (lo + hi));
        }
        t_prev = t;
        q_prev = qt;
    }
    return roots;
}

}  // namespace vw
