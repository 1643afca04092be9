#pragma once

// One-dimensional quadrature: Gauss-Legendre rules with runtime node
// generation, an adaptive panel-bisection integrator, a checkpointed
// cumulative-primitive cache, and log-spaced Gauss-Legendre panel grids.

#include <limits>
#include <map>
#include <memory>

#include "common.hpp"

namespace vw {

// ---------------------------------------------------------------------------
// Gauss-Legendre nodes/weights on [-1, 1], generated by Newton iteration on
// P_n. Accurate to ~1e-15 for the orders used here (<= 64).
// ---------------------------------------------------------------------------

struct GaussRule {
    std::vector<double> x;  // nodes in (-1, 1)
    std::vector<double> w;  // positive weights, sum = 2
};

inline GaussRule gauss_legendre(unsigned n) {
    if (n == 0 || n > 256) throw UsageError("gauss_legendre: order out of range");
    GaussRule r;
    r.x.resize(n);
    r.w.resize(n);
    for (unsigned i = 0; i < (n + 1) / 2; ++i) {
        // Chebyshev-based initial guess for the i-th positive-side root.
        double x = std::cos(pi * (double(i) + 0.75) / (double(n) + 0.5));
        double pp = 0;
        for (int it = 0; it < 100; ++it) {
            // Recurrence for P_n(x) and P_{n-1}(x).
            double p0 = 1.0, p1 = x;
            for (unsigned k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / double(k);
                p0 = p1;
                p1 = p2;
            }
            pp = double(n) * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        r.x[i] = -x;
        r.x[n - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * pp * pp);
        r.w[i] = w;
        r.w[n - 1 - i] = w;
    }
    return r;
}

inline const GaussRule& cached_rule(unsigned n) {
    static std::mutex mx;
    static std::map<unsigned, GaussRule> rules;
    std::lock_guard<std::mutex> lk(mx);
    auto it = rules.find(n);
    if (it == rules.end()) it = rules.emplace(n, gauss_legendre(n)).first;
    return it->second;
}

template <class F>
double gauss_panel(F&& f, double a, double b, const GaussRule& r) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double s = 0;
    for (std::size_t i = 0; i < r.x.size(); ++i) s += r.w[i] * f(c + h * r.x[i]);
    return s * h;
}

// ---------------------------------------------------------------------------
// Adaptive integrator: bisects panels until |GL16 - GL8| meets the local
// share of the tolerance. Suitable for the smooth integrands used here
// (coefficient primitives, Sobolev weights, phase exponents).
// ---------------------------------------------------------------------------

struct QuadOptions {
    double abs_tol = 1e-12;
    double rel_tol = 1e-12;
    int max_depth = 48;
};

namespace detail {

template <class F>
double adapt_rec(F& f, double a, double b, double tol, const GaussRule& lo,
                 const GaussRule& hi, int depth, double whole_scale) {
    const double coarse = gauss_panel(f, a, b, lo);
    const double fine = gauss_panel(f, a, b, hi);
    if (!std::isfinite(fine) || !std::isfinite(coarse))
        throw QuadratureError("adaptive quadrature: non-finite integrand on ["
                              + std::to_string(a) + ", " + std::to_string(b) + "]");
    const double err = std::abs(fine - coarse);
    if (err <= tol + 1e-16 * whole_scale || depth <= 0) {
        if (depth <= 0 && err > 1e3 * (tol + 1e-16 * whole_scale))
            throw QuadratureError("adaptive quadrature: panel failed to converge");
        return fine;
    }
    const double m = 0.5 * (a + b);
    return adapt_rec(f, a, m, 0.5 * tol, lo, hi, depth - 1, whole_scale) +
           adapt_rec(f, m, b, 0.5 * tol, lo, hi, depth - 1, whole_scale);
}

}  // namespace detail

template <class F>
double integrate(F&& f, double a, double b, const QuadOptions& opt = {}) {
    if (a == b) return 0.0;
    const GaussRule& lo = cached_rule(8);
    const GaussRule& hi = cached_rule(16);
    double rough = std::abs(gauss_panel(f, a, b, hi));
    double tol = std::max(opt.abs_tol, opt.rel_tol * rough);
    return detail::adapt_rec(f, a, b, tol, lo, hi, opt.max_depth, rough);
}

// ---------------------------------------------------------------------------
// Checkpointed primitive: F(t) = int_0^t f. Checkpoints sit on a geometric
// ladder so an evaluation integrates at most one ladder gap adaptively and
// reuses everything before it. Thread-safe; values past the overflow horizon
// saturate to +inf.
// ---------------------------------------------------------------------------

class PrimitiveCache {
  public:
    PrimitiveCache(std::function<double(double)> f, double t0 = 0.0625)
        : f_(std::move(f)), t0_(t0) {}

    double operator()(double t) const {
        if (t == 0) return 0.0;
        if (t < 0) throw UsageError("PrimitiveCache: negative time");
        std::lock_guard<std::mutex> lk(mx_);
        // anchor = largest checkpoint <= t (checkpoint k sits at t0*2^k).
        double anchor_t = 0.0, anchor_v = 0.0;
        if (t >= t0_) {
            std::size_t k = std::size_t(std::floor(std::log2(t / t0_)));
            extend(k);
            if (!std::isfinite(vals_[k])) return vals_[k];
            anchor_t = t0_ * std::pow(2.0, double(k));
            anchor_v = vals_[k];
        }
        double tail = integrate(f_, anchor_t, t, opt_);
        return anchor_v + tail;
    }

  private:
    void extend(std::size_t k) const {
        while (vals_.size() <= k) {
            std::size_t j = vals_.size();
            double lo = (j == 0) ? 0.0 : t0_ * std::pow(2.0, double(j - 1));
            double hi = t0_ * std::pow(2.0, double(j));
            double base = (j == 0) ? 0.0 : vals_[j - 1];
            if (!std::isfinite(base)) {
                vals_.push_back(base);
                continue;
            }
            double inc;
            try {
                inc = integrate(f_, lo, hi, opt_);
            } catch (const QuadratureError&) {
                inc = std::numeric_limits<double>::infinity();
            }
            double v = base + inc;
            if (!std::isfinite(v) || v > 1e300) v = std::numeric_limits<double>::infinity();
            vals_.push_back(v);
        }
    }

    std::function<double(double)> f_;
    double t0_;
    QuadOptions opt_{};
    mutable std::mutex mx_;
    mutable std::vector<double> vals_;  // vals_[k] = F(t0 * 2^k)
};

// ---------------------------------------------------------------------------
// Log-spaced Gauss-Legendre panel grid over a frequency interval. Nodes and
// weights are in the linear variable, ready for sum_i w_i * F(r_i).
// ---------------------------------------------------------------------------

struct PanelGrid {
    std::vector<double> nodes;
    std::vector<double> weights;
    double r_min = 0, r_max = 0;
    unsigned panels = 0, nodes_per_panel = 0;

    std::size_t size() const { return nodes.size(); }

    // Doubled panel count over the same interval (for convergence checks).
    PanelGrid refined() const { return make_log(r_min, r_max, panels * 2, nodes_per_panel); }

    static PanelGrid make_log(double r_min, double r_max, unsigned panels,
                              unsigned nodes_per_panel) {
        if (!(r_min > 0) || !(r_max > r_min)) throw UsageError("PanelGrid: need 0 < r_min < r_max");
        if (panels == 0 || nodes_per_panel == 0) throw UsageError("PanelGrid: empty grid");
        PanelGrid g;
        g.r_min = r_min;
        g.r_max = r_max;
        g.panels = panels;
        g.nodes_per_panel = nodes_per_panel;
        const GaussRule& rule = cached_rule(nodes_per_panel);
        auto edges = logspace(r_min, r_max, panels + 1);
        for (unsigned p = 0; p < panels; ++p) {
            double a = edges[p], b = edges[p + 1];
            double c = 0.5 * (a + b), h = 0.5 * (b - a);
            for (std::size_t i = 0; i < rule.x.size(); ++i) {
                g.nodes.push_back(c + h * rule.x[i]);
                g.weights.push_back(h * rule.w[i]);
            }
        }
        return g;
    }
};

}  // namespace vw
