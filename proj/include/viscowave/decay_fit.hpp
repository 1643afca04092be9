#pragma once

// Least-squares decay-rate extraction from energy curves and the
// order-sweep detector that separates diffusion-like ("parabolic") decay
// from order-independent behaviour.

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "viscowave/bounds.hpp"
#include "viscowave/coefficients.hpp"
#include "viscowave/common.hpp"
#include "viscowave/energy.hpp"

namespace vw {

// Fit abscissas: the decay clock log G_one(t), plain log(1+t), and an
// iterated-log scale for coefficients whose clock itself is a double
// logarithm (log G is equivalent there but ill-conditioned).
enum class Abscissa { LogGOne, LogT, LogLogG };

inline const char* to_string(Abscissa a) {
    switch (a) {
        case Abscissa::LogGOne: return "log_G_one";
        case Abscissa::LogT: return "log_t";
        case Abscissa::LogLogG: return "loglog";
    }
    return "?";
}

inline Abscissa parse_abscissa(const std::string& s) {
    if (s == "log_G_one") return Abscissa::LogGOne;
    if (s == "log_t") return Abscissa::LogT;
    if (s == "loglog") return Abscissa::LogLogG;
    throw ConfigError("unknown abscissa '" + s + "' (known: log_G_one log_t loglog)");
}

inline Abscissa default_abscissa(Regime r) {
    return (r == Regime::D || r == Regime::E) ? Abscissa::LogGOne : Abscissa::LogT;
}

struct FitResult {
    double slope = 0.0;
    double stderr_slope = 0.0;
    double r2 = 1.0;
    double t_lo = 0.0, t_hi = 0.0;  // fit window actually used
    std::size_t n = 0;              // samples in the window
};

namespace detail {

inline double fit_abscissa_value(Abscissa a, const Coefficient& c, double t) {
    switch (a) {
        case Abscissa::LogGOne: return std::log(c.G_one(t));
        case Abscissa::LogT: return std::log1p(t);
        case Abscissa::LogLogG:
            // log of the iterated-log clock; e-1 keeps the inner log positive
            // at t = 0 where G_one = 1.
            return std::log(std::log(std::exp(1.0) - 1.0 + c.G_one(t)));
    }
    throw UsageError("unreachable abscissa");
}

inline FitResult ols_loglog(const std::vector<double>& xs, const std::vector<double>& ys,
                            double t_lo, double t_hi) {
    FitResult fr;
    fr.t_lo = t_lo;
    fr.t_hi = t_hi;
    fr.n = xs.size();
    const std::size_t n = xs.size();
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) mx += xs[i], my += ys[i];
    mx /= double(n);
    my /= double(n);
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += sq(xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += sq(ys[i] - my);
    }
    if (sxx < 1e-24)
        throw FitError("fit_rate: degenerate abscissa range (all samples at one clock value)");
    fr.slope = sxy / sxx;
    double ssr = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        ssr += sq(ys[i] - my - fr.slope * (xs[i] - mx));
    if (n > 2) fr.stderr_slope = std::sqrt(std::max(ssr, 0.0) / (double(n - 2) * sxx));
    fr.r2 = syy > 1e-300 ? std::max(0.0, 1.0 - ssr / syy) : 1.0;
    return fr;
}

}  // namespace detail

inline FitResult fit_rate(const EnergyCurve& curve, const Coefficient& c, Abscissa abscissa,
                          double t_lo, double t_hi, CurveSide side = CurveSide::U) {
    if (curve.coefficient_id != c.id)
        throw ConfigError("fit_rate: curve was computed for coefficient " +
                          curve.coefficient_id + ", not " + c.id);
    if (!(t_lo < t_hi)) throw FitError("fit_rate: empty window");
    const std::vector<double>& vals = side == CurveSide::U ? curve.e_u : curve.e_ut;
    std::vector<double> xs, ys;
    for (std::size_t j = 0; j < curve.times.size(); ++j) {
        const double t = curve.times[j];
        if (t < t_lo || t > t_hi) continue;
        const double v = vals[j];
        if (!(v > 0.0))
            throw FitError("fit_rate: nonpositive curve value " + std::to_string(v) +
                           " at t = " + std::to_string(t) + " inside the fit window");
        xs.push_back(detail::fit_abscissa_value(abscissa, c, t));
        ys.push_back(std::log(v));
    }
    if (xs.size() < 10)
        throw FitError("fit_rate: window holds " + std::to_string(xs.size()) +
                       " samples; need at least 10");
    return detail::ols_loglog(xs, ys, t_lo, t_hi);
}

// ---------------------------------------------------------------------------
// Order sweep: fitted slopes across beta decide between diffusion-like decay
// (strictly faster with increasing order) and order-flat behaviour.
// ---------------------------------------------------------------------------

enum class Verdict { Parabolic, NonParabolic, Inconclusive };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Parabolic: return "Parabolic";
        case Verdict::NonParabolic: return "NonParabolic";
        case Verdict::Inconclusive: return "Inconclusive";
    }
    return "?";
}

struct ParabolicReport {
    std::vector<double> betas;    // ascending
    std::vector<FitResult> fits;  // aligned with betas
    double margin = 0.0;          // slope separation required for a verdict
    Verdict verdict = Verdict::Inconclusive;
    std::string note;
};

// Slope comparisons use max(2 x pooled stderr, margin_floor): the OLS banding
// alone is optimistic on smooth curves, and the catalog's genuine order
// spacings are far above the default floor.
inline ParabolicReport parabolic_effect(const std::vector<EnergyCurve>& curves,
                                        const Coefficient& c, Abscissa abscissa, double t_lo,
                                        double t_hi, double margin_floor = 0.05,
                                        CurveSide side = CurveSide::U) {
    if (curves.size() < 2)
        throw ConfigError("parabolic_effect: need at least two orders to compare");
    for (const auto& cv : curves) {
        if (cv.coefficient_id != curves.front().coefficient_id ||
            cv.profile_id != curves.front().profile_id)
            throw ConfigError("parabolic_effect: curves mix coefficients or data profiles");
    }

    std::vector<std::size_t> order(curves.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return curves[a].beta < curves[b].beta; });

    ParabolicReport rep;
    double pooled = 0.0;
    for (std::size_t i : order) {
        FitResult fr = fit_rate(curves[i], c, abscissa, t_lo, t_hi, side);
        rep.betas.push_back(curves[i].beta);
        rep.fits.push_back(fr);
        pooled += sq(fr.stderr_slope);
    }
    for (std::size_t i = 1; i < rep.betas.size(); ++i)
        if (!(rep.betas[i] > rep.betas[i - 1] + 1e-12))
            throw ConfigError("parabolic_effect: orders must be distinct");
    pooled = std::sqrt(pooled / double(rep.fits.size()));
    rep.margin = std::max(2.0 * pooled, margin_floor);

    bool strictly_down = true;
    double spread = 0.0;
    for (std::size_t i = 1; i < rep.fits.size(); ++i) {
        const double d = rep.fits[i].slope - rep.fits[i - 1].slope;
        if (!(d <= -rep.margin)) strictly_down = false;
    }
    double s_min = rep.fits.front().slope, s_max = s_min;
    for (const auto& f : rep.fits) {
        s_min = std::min(s_min, f.slope);
        s_max = std::max(s_max, f.slope);
    }
    spread = s_max - s_min;

    if (strictly_down) {
        rep.verdict = Verdict::Parabolic;
    } else if (spread <= rep.margin) {
        rep.verdict = Verdict::NonParabolic;
    } else {
        rep.verdict = Verdict::Inconclusive;
    }
    std::ostringstream os;
    os << "slopes:";
    for (std::size_t i = 0; i < rep.betas.size(); ++i)
        os << " s(" << rep.betas[i] << ")=" << rep.fits[i].slope;
    os << "; margin=" << rep.margin;
    rep.note = os.str();
    return rep;
}

}  // namespace vw
