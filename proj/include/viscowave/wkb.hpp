#pragma once

// Constructive WKB objects for the mode equation u'' + g(t) r^2 u' + r^2 u = 0
// and its transformed companion v'' + q(t, r) v = 0:
//
//   - eigenvalues of the first-order system on the elliptic side, with the
//     exact sum/product identities and sandwich bounds they satisfy;
//   - zone-wise phase and amplitude weights (hyperbolic p, elliptic d, the
//     elliptic decay exponent beta, the dissipation weight gamma = g r^2/2);
//   - Liouville-Green surrogates: an oscillatory pair built from phase
//     integrals in the hyperbolic zone, and a micro-energy growth factor in
//     the elliptic zone of the exponential-dissipation regimes;
//   - empirical symbol-class constants: max over a sample grid of
//     |d_t^k f| / weight for the named symbols of the analysis;
//   - the constant diagonalizer M and the first corrector N1, exposed only
//     as far as the invertibility-margin checks need them.
//
// Everything here is closed-form plus quadrature; the direct ODE integration
// in mode_solver.hpp is the oracle these surrogates are compared against.

#include "coefficients.hpp"
#include "mode_solver.hpp"
#include "phase_space.hpp"
#include "quadrature.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <sstream>

namespace vw {

// Evaluating an elliptic-side object where g(t) r < 2: the two characteristic
// roots are complex conjugates there and the mode oscillates. Callers should
// use hyperbolic_p / the hyperbolic surrogate instead.
struct HyperbolicSideError : NumericError {
    using NumericError::NumericError;
};

// Converse: the hyperbolic phase p is evaluated where h r^2 <= g^2 r^4 / 4 and
// the mode is exponentially sorted, not oscillatory.
struct EllipticSideError : NumericError {
    using NumericError::NumericError;
};

// ---------------------------------------------------------------------------
// Eigenvalues of the elliptic-side system matrix.
// ---------------------------------------------------------------------------

struct EigenPair {
    cplx lambda1;  // larger:  Im lambda1 in [g r^2 / 2, g r^2]
    cplx lambda2;  // smaller: Im lambda2 in [1/g, 2/g] once g r >= 2

    // Exact identities: Im l1 + Im l2 = g r^2, Im l1 * Im l2 = r^2.
};

// Both roots lambda = i (g r^2 +- sqrt(g^2 r^4 - 4 r^2)) / 2. The small root
// is evaluated through the product identity (2 r^2 over the large root's
// modulus) so deep in the elliptic region no cancellation occurs.
inline EigenPair eigen(const Coefficient& c, double t, double r) {
    if (!(t >= 0.0) || !std::isfinite(t) || !(r > 0.0) || !std::isfinite(r))
        throw UsageError("eigen requires finite t >= 0 and r > 0");
    const double g = c.g(t);
    const double gr2 = g * r * r;
    const double disc = (g * r - 2.0) * (g * r + 2.0) * r * r;  // g^2 r^4 - 4 r^2
    if (disc < 0.0) {
        std::ostringstream os;
        os << "eigen: complex-conjugate roots at t = " << t << ", r = " << r << " (g r = "
           << g * r << " < 2): hyperbolic side, use hyperbolic_p";
        throw HyperbolicSideError(os.str());
    }
    const double root = std::sqrt(disc);
    EigenPair ep;
    ep.lambda1 = cplx(0.0, 0.5 * (gr2 + root));
    ep.lambda2 = cplx(0.0, 2.0 * r * r / (gr2 + root));
    return ep;
}

// ---------------------------------------------------------------------------
// Phase / amplitude weights.
// ---------------------------------------------------------------------------

// Oscillation frequency in the hyperbolic zone: p = sqrt(h r^2 - g^2 r^4 / 4),
// h = 1 - g'/2. Positive strictly inside the zone.
inline double hyperbolic_p(const Coefficient& c, double t, double r) {
    const double h = c.one_minus_half_g1(t);
    const double half_gr2 = 0.5 * c.g(t) * r * r;
    const double rad = h * r * r - half_gr2 * half_gr2;
    if (!(rad > 0.0)) {
        std::ostringstream os;
        os << "hyperbolic_p: nonpositive radicand at t = " << t << ", r = " << r
           << ": elliptic side";
        throw EllipticSideError(os.str());
    }
    return std::sqrt(rad);
}

// Elliptic sorting rate: d = sqrt(g^2 r^4 / 4 - r^2). Real and positive where
// g r > 2; inside the elliptic zone d^2 is within [1/4 - 1/N^2, 1/4] g^2 r^4.
inline double elliptic_d(const Coefficient& c, double t, double r) {
    const double half_gr2 = 0.5 * c.g(t) * r * r;
    const double rad = (half_gr2 - r) * (half_gr2 + r);
    if (!(rad > 0.0)) {
        std::ostringstream os;
        os << "elliptic_d: nonpositive radicand at t = " << t << ", r = " << r << " (g r = "
           << c.g(t) * r << " <= 2): hyperbolic side, use hyperbolic_p";
        throw HyperbolicSideError(os.str());
    }
    return std::sqrt(rad);
}

// Dissipation weight gamma = g r^2 / 2.
inline double gamma_weight(const Coefficient& c, double t, double r) {
    return 0.5 * c.g(t) * r * r;
}

// Curvature term m = g' r^2 / 2 entering the transformed potential.
inline double mass_weight(const Coefficient& c, double t, double r) {
    return 0.5 * c.g1(t) * r * r;
}

// Decay exponent of the slow elliptic mode:
//   beta = (1/2) (1 + g' r^2 / (g^2 r^4 - 4 r^2)) (sqrt(g^2 r^4 - 4 r^2) - g r^2),
// evaluated through sqrt(D) - g r^2 = -4 r^2 / (sqrt(D) + g r^2) so the
// leading digits survive when g r >> 2. Strictly negative in the elliptic
// zone (there |g'| r^2 / D <= 2/5, so the first factor stays positive).
inline double elliptic_beta(const Coefficient& c, double t, double r) {
    const double g = c.g(t);
    const double r2 = r * r;
    const double disc = (g * r - 2.0) * (g * r + 2.0) * r2;
    if (!(disc > 0.0)) {
        std::ostringstream os;
        os << "elliptic_beta: g r <= 2 at t = " << t << ", r = " << r
           << ": hyperbolic side, use hyperbolic_p";
        throw HyperbolicSideError(os.str());
    }
    const double root = std::sqrt(disc);
    const double tail = -4.0 * r2 / (root + g * r2);
    return 0.5 * (1.0 + c.g1(t) * r2 / disc) * tail;
}

enum class PhaseWeightKind { EllipticBeta, EllipticD, HyperbolicP, GammaHalfG };

inline const char* to_string(PhaseWeightKind k) {
    switch (k) {
        case PhaseWeightKind::EllipticBeta: return "elliptic_beta";
        case PhaseWeightKind::EllipticD: return "elliptic_d";
        case PhaseWeightKind::HyperbolicP: return "hyperbolic_p";
        case PhaseWeightKind::GammaHalfG: return "gamma";
    }
    return "?";
}

// A named weight bound to a coefficient; value-at is (t, r) -> real.
struct PhaseWeight {
    PhaseWeightKind kind = PhaseWeightKind::GammaHalfG;
    Coefficient coeff;

    double operator()(double t, double r) const {
        switch (kind) {
            case PhaseWeightKind::EllipticBeta: return elliptic_beta(coeff, t, r);
            case PhaseWeightKind::EllipticD: return elliptic_d(coeff, t, r);
            case PhaseWeightKind::HyperbolicP: return hyperbolic_p(coeff, t, r);
            case PhaseWeightKind::GammaHalfG: return gamma_weight(coeff, t, r);
        }
        throw UsageError("unknown phase weight kind");
    }
};

inline PhaseWeight make_phase_weight(PhaseWeightKind kind, const Coefficient& c) {
    return PhaseWeight{kind, c};
}

// ---------------------------------------------------------------------------
// Zone guards shared by the quadrature-based objects.
// ---------------------------------------------------------------------------

namespace detail {

// Endpoint membership check. Coefficients without a zone decomposition
// (custom / scale-invariant) fall through to the pointwise radicand guards.
inline void require_label(const Coefficient& c, double t, double r, const ZoneConstants& zc,
                          ZoneLabel want, std::string_view what) {
    if (!has_zone_geometry(c.regime)) return;
    const ZoneLabel got = classify(c.regime, c, t, r, zc);
    if (got != want) {
        std::ostringstream os;
        os << what << " requires the " << to_string(want) << " zone, but (t = " << t
           << ", r = " << r << ") lies in " << to_string(got) << " for coefficient " << c.id;
        throw ZoneError(os.str());
    }
}

inline void require_window(double s, double t, std::string_view what) {
    if (!(s >= 0.0) || !(t >= s) || !std::isfinite(t))
        throw UsageError(std::string(what) + " requires a window 0 <= s <= t < inf");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Elliptic amplitude: the integrated slow-mode decay factor exp(int_s^t beta).
// ---------------------------------------------------------------------------

// Bound on the fundamental-solution magnitude across an elliptic window
// [s, t]: exp of the adaptively integrated beta exponent (absolute tolerance
// 1e-10 on the exponent). Endpoints must lie in the elliptic zone; a point
// with g r <= 2 anywhere inside the window raises ZoneError.
inline double elliptic_amplitude(const Coefficient& c, double r, double s, double t,
                                 const ZoneConstants& zc = {}, double exponent_abs_tol = 1e-10) {
    detail::require_window(s, t, "elliptic_amplitude");
    if (s == t) return 1.0;
    detail::require_label(c, s, r, zc, ZoneLabel::Elliptic, "elliptic_amplitude");
    detail::require_label(c, t, r, zc, ZoneLabel::Elliptic, "elliptic_amplitude");
    auto beta = [&](double tau) {
        try {
            return elliptic_beta(c, tau, r);
        } catch (const HyperbolicSideError&) {
            std::ostringstream os;
            os << "elliptic_amplitude: window [" << s << ", " << t
               << "] leaves the elliptic region at tau = " << tau << " (r = " << r << ")";
            throw ZoneError(os.str());
        }
    };
    QuadOptions opt;
    opt.abs_tol = exponent_abs_tol;
    opt.rel_tol = 1e-12;
    return std::exp(integrate(beta, s, t, opt));
}

// ---------------------------------------------------------------------------
// Liouville-Green surrogates.
// ---------------------------------------------------------------------------

enum class LgKind { Hyperbolic, EllipticSec3 };

inline const char* to_string(LgKind k) {
    return k == LgKind::Hyperbolic ? "hyperbolic" : "elliptic_sec3";
}

inline LgKind parse_lg_kind(std::string_view s) {
    if (s == "hyperbolic") return LgKind::Hyperbolic;
    if (s == "elliptic_sec3" || s == "elliptic") return LgKind::EllipticSec3;
    throw UsageError("unknown surrogate kind '" + std::string(s) +
                     "' (expected hyperbolic or elliptic_sec3)");
}

struct LgPair {
    cplx v;    // surrogate value of the transformed variable at time t
    cplx v_t;  // surrogate derivative (hyperbolic) or micro-energy bound (elliptic)
};

// log of the elliptic micro-energy growth factor (d(t)/d(s)) exp(int_s^t d),
// for windows long enough that the factor itself overflows.
inline double elliptic_growth_log(const Coefficient& c, double r, double s, double t,
                                  const ZoneConstants& zc = {}) {
    detail::require_window(s, t, "elliptic growth factor");
    if (s == t) return 0.0;
    switch (c.regime) {
        case Regime::B:
        case Regime::C:
            detail::require_label(c, s, r, zc, ZoneLabel::Elliptic, "elliptic growth factor");
            detail::require_label(c, t, r, zc, ZoneLabel::Elliptic, "elliptic growth factor");
            break;
        case Regime::Custom:
        case Regime::ScaleInvariant:
            break;  // no zone decomposition: pointwise radicand guards apply
        default:
            throw ZoneError(
                "the micro-energy growth factor applies to the decaying-dissipation regimes "
                "(B, C); use elliptic_amplitude for coefficient " +
                c.id);
    }
    auto dval = [&](double tau) {
        try {
            return elliptic_d(c, tau, r);
        } catch (const HyperbolicSideError&) {
            std::ostringstream os;
            os << "elliptic growth factor: window [" << s << ", " << t
               << "] leaves the elliptic region at tau = " << tau << " (r = " << r << ")";
            throw ZoneError(os.str());
        }
    };
    QuadOptions opt;
    opt.abs_tol = 1e-10;
    opt.rel_tol = 1e-12;
    return std::log(dval(t) / dval(s)) + integrate(dval, s, t, opt);
}

// Growth factor itself; +inf once past double range.
inline double elliptic_growth_factor(const Coefficient& c, double r, double s, double t,
                                     const ZoneConstants& zc = {}) {
    return std::exp(elliptic_growth_log(c, r, s, t, zc));
}

// Liouville-Green surrogate for the transformed variable across [s, t],
// normalized to the initial state (v_s, vt_s) — default the fundamental pair
// (1, 0).
//
//   hyperbolic:    v = p(t)^{-1/2} (A e^{i theta} + B e^{-i theta}),
//                  v_t = i p(t)^{1/2} (A e^{i theta} - B e^{-i theta}),
//                  theta = int_s^t p, with A, B matching the state at s.
//                  Exact whenever p is constant in time.
//   elliptic_sec3: scales the micro-energy |V(s)|, V = (d v, v_t), by the
//                  growth factor (d(t)/d(s)) exp(int_s^t d); returns
//                  v = bound/d(t), v_t = bound. For the fundamental pair this
//                  makes |v| = exp(int_s^t d).
inline LgPair lg_surrogate(const Coefficient& c, double r, double s, double t, LgKind kind,
                           cplx v_s = 1.0, cplx vt_s = 0.0, const ZoneConstants& zc = {}) {
    detail::require_window(s, t, "lg_surrogate");
    if (!(r > 0.0)) throw UsageError("lg_surrogate requires r > 0");
    if (kind == LgKind::EllipticSec3) {
        const double growth = elliptic_growth_factor(c, r, s, t, zc);
        const double micro = std::hypot(elliptic_d(c, s, r) * std::abs(v_s), std::abs(vt_s));
        const double bound = growth * micro;
        return {cplx(bound / elliptic_d(c, t, r), 0.0), cplx(bound, 0.0)};
    }
    if (has_zone_geometry(c.regime)) {
        detail::require_label(c, s, r, zc, ZoneLabel::Hyperbolic, "hyperbolic surrogate");
        detail::require_label(c, t, r, zc, ZoneLabel::Hyperbolic, "hyperbolic surrogate");
    }
    auto pval = [&](double tau) {
        try {
            return hyperbolic_p(c, tau, r);
        } catch (const EllipticSideError&) {
            std::ostringstream os;
            os << "hyperbolic surrogate: window [" << s << ", " << t
               << "] leaves the oscillatory region at tau = " << tau << " (r = " << r << ")";
            throw ZoneError(os.str());
        }
    };
    const double ps = pval(s), pt = s == t ? ps : pval(t);
    QuadOptions opt;
    opt.abs_tol = 1e-12;
    opt.rel_tol = 1e-12;
    const double theta = s == t ? 0.0 : integrate(pval, s, t, opt);
    const double sps = std::sqrt(ps), spt = std::sqrt(pt);
    const cplx i1(0.0, 1.0);
    const cplx A = 0.5 * (sps * v_s - i1 * vt_s / sps);
    const cplx B = 0.5 * (sps * v_s + i1 * vt_s / sps);
    const cplx eip = std::exp(i1 * theta);
    const cplx eim = std::conj(eip);
    return {(A * eip + B * eim) / spt, i1 * spt * (A * eip - B * eim)};
}

// ---------------------------------------------------------------------------
// Empirical symbol-class constants.
// ---------------------------------------------------------------------------

enum class SymbolName { Gamma, MassTerm, EllipticD, DiagR12, DiagR21 };

inline const char* to_string(SymbolName s) {
    switch (s) {
        case SymbolName::Gamma: return "gamma";
        case SymbolName::MassTerm: return "m";
        case SymbolName::EllipticD: return "d";
        case SymbolName::DiagR12: return "r12";
        case SymbolName::DiagR21: return "r21";
    }
    return "?";
}

inline SymbolName parse_symbol_name(std::string_view s) {
    if (s == "gamma") return SymbolName::Gamma;
    if (s == "m") return SymbolName::MassTerm;
    if (s == "d") return SymbolName::EllipticD;
    if (s == "r12") return SymbolName::DiagR12;
    if (s == "r21") return SymbolName::DiagR21;
    throw UsageError("unknown symbol name '" + std::string(s) +
                     "' (expected gamma, m, d, r12, or r21)");
}

// The named symbols as functions of (t, r). The diagonalizer remainder
// entries are r12 = i (g' - 1) / (2 g) and r21 = i / (2 g).
inline std::function<cplx(double, double)> symbol_function(const Coefficient& c, SymbolName name) {
    switch (name) {
        case SymbolName::Gamma:
            return [c](double t, double r) { return cplx(gamma_weight(c, t, r), 0.0); };
        case SymbolName::MassTerm:
            return [c](double t, double r) { return cplx(mass_weight(c, t, r), 0.0); };
        case SymbolName::EllipticD:
            return [c](double t, double r) { return cplx(elliptic_d(c, t, r), 0.0); };
        case SymbolName::DiagR12:
            return [c](double t, double) { return cplx(0.0, (c.g1(t) - 1.0) / (2.0 * c.g(t))); };
        case SymbolName::DiagR21:
            return [c](double t, double) { return cplx(0.0, 1.0 / (2.0 * c.g(t))); };
    }
    throw UsageError("unknown symbol name");
}

// Class exponents: the strongly-dissipative family weighs a k-th derivative by
// (r^2 g)^{m1} (g / G_half)^{m2 + k}; the time-decay family by
// r^{m1} g^{m2} (1 + t)^{-(m3 + k)}.
struct SymbolClass {
    double m1 = 0.0, m2 = 0.0, m3 = 0.0;
};

enum class SymbolFamily { EllipticAG, TimeDecay };

inline std::function<double(double, double)> symbol_weight(const Coefficient& c, SymbolFamily fam,
                                                           const SymbolClass& cls, unsigned k) {
    if (fam == SymbolFamily::EllipticAG)
        return [c, cls, k](double t, double r) {
            const double g = c.g(t);
            return std::pow(r * r * g, cls.m1) * std::pow(g / c.G_half(t), cls.m2 + k);
        };
    return [c, cls, k](double t, double r) {
        return std::pow(r, cls.m1) * std::pow(c.g(t), cls.m2) *
               std::pow(1.0 + t, -(cls.m3 + k));
    };
}

struct SymbolGrid {
    std::vector<double> ts, rs;  // sampled as the full product
};

namespace detail {

// 4th-order central time difference; step 1e-4 max(1, t).
template <class F>
cplx dt_k(const F& f, double t, unsigned k) {
    if (k == 0) return f(t);
    const double h = 1e-4 * std::max(1.0, t);
    if (t - 2.0 * h < 0.0)
        throw UsageError("symbol_constant: sample too close to t = 0 for central differences");
    const cplx fm2 = f(t - 2.0 * h), fm1 = f(t - h), fp1 = f(t + h), fp2 = f(t + 2.0 * h);
    if (k == 1) return (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h);
    return (-fm2 + 16.0 * fm1 - 30.0 * f(t) + 16.0 * fp1 - fp2) / (12.0 * h * h);
}

}  // namespace detail

// Max over the sampled zone of |d_t^k f| / weight: the empirical constant
// certifying the symbol-class membership of f on the grid. Derivatives use
// 4th-order central stencils; k <= 2. Throws ZoneError when no grid point
// lies in the requested zone and NumericError when the weight degenerates at
// a sample.
inline double symbol_constant(const Coefficient& c, const std::function<cplx(double, double)>& f,
                              unsigned k, const std::function<double(double, double)>& weight,
                              std::optional<ZoneLabel> zone, const SymbolGrid& grid,
                              const ZoneConstants& zc = {}) {
    if (k > 2) throw UsageError("symbol_constant supports k <= 2");
    if (grid.ts.empty() || grid.rs.empty())
        throw UsageError("symbol_constant requires a nonempty sample grid");
    std::vector<std::pair<double, double>> kept;
    kept.reserve(grid.ts.size() * grid.rs.size());
    for (double t : grid.ts)
        for (double r : grid.rs) {
            if (zone && classify(c.regime, c, t, r, zc) != *zone) continue;
            kept.emplace_back(t, r);
        }
    if (kept.empty()) throw ZoneError("symbol_constant: no grid samples inside the zone");

    std::vector<double> ratio(kept.size());
    parallel_for(kept.size(), [&](std::size_t i) {
        const auto [t, r] = kept[i];
        const double w = weight(t, r);
        if (!(w > 0.0) || !std::isfinite(w)) {
            std::ostringstream os;
            os << "symbol weight degenerates at sample (t = " << t << ", r = " << r << ")";
            throw NumericError(os.str());
        }
        auto ft = [&](double tau) { return f(tau, r); };
        ratio[i] = std::abs(detail::dt_k(ft, t, k)) / w;
    });
    return *std::max_element(ratio.begin(), ratio.end());
}

inline double symbol_constant(const Coefficient& c, SymbolName name, unsigned k, SymbolFamily fam,
                              const SymbolClass& cls, std::optional<ZoneLabel> zone,
                              const SymbolGrid& grid, const ZoneConstants& zc = {}) {
    return symbol_constant(c, symbol_function(c, name), k, symbol_weight(c, fam, cls, k), zone,
                           grid, zc);
}

// ---------------------------------------------------------------------------
// Constant diagonalizer and first corrector.
// ---------------------------------------------------------------------------

struct Mat2 {
    cplx a11, a12, a21, a22;
};

// M maps the micro-energy (r u-ish, D_t u) pair onto characteristic variables;
// M_inv * M = I exactly.
inline const Mat2 diag_m{cplx(0.0, 1.0), cplx(0.0, -1.0), cplx(1.0, 0.0), cplx(1.0, 0.0)};
inline const Mat2 diag_m_inv{cplx(0.0, -0.5), cplx(0.5, 0.0), cplx(0.0, 0.5), cplx(0.5, 0.0)};

// First corrector N1 = I + [[0, -r12/delta], [r21/delta, 0]] of the two-step
// diagonalization, with remainder entries r12 = i (g'-1)/(2g), r21 = i/(2g)
// and diagonal gap i delta = g r^2 + (g' - 2)/g. Meaningful where the gap
// dominates the remainder (the strongly-dissipative elliptic zone).
inline Mat2 n1_matrix(const Coefficient& c, double t, double r) {
    const double g = c.g(t);
    const double g1 = c.g1(t);
    if (!(g > 0.0)) throw NumericError("n1_matrix requires g(t) > 0");
    const double gap = g * r * r + (g1 - 2.0) / g;  // equals i (lambda1 - lambda2)
    if (std::abs(gap) < 1e-300) throw NumericError("n1_matrix: diagonalizer gap vanishes");
    const cplx delta(0.0, -gap);
    const cplx r12(0.0, (g1 - 1.0) / (2.0 * g));
    const cplx r21(0.0, 1.0 / (2.0 * g));
    return {cplx(1.0, 0.0), -r12 / delta, r21 / delta, cplx(1.0, 0.0)};
}

// Max-entry distance |N1 - I|: the invertibility margin. Inside the
// strongly-dissipative elliptic zone it is O(1 / (G_half r^2)) <= O(1/N).
inline double n1_deviation(const Coefficient& c, double t, double r) {
    const Mat2 n1 = n1_matrix(c, t, r);
    return std::max(std::abs(n1.a12), std::abs(n1.a21));
}

}  // namespace vw
