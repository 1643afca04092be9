#pragma once

// Shared small utilities: error taxonomy, grids, hashing, parallel sweep.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace vw {

using cplx = std::complex<double>;

inline constexpr double pi = 3.141592653589793238462643383279502884;

// ---------------------------------------------------------------------------
// Errors. UsageError-derived conditions are caller mistakes (bad ids, bad
// parameters, mismatched inputs); NumericError-derived conditions are runtime
// numerical failures (no bracket, divergent integral, step collapse).
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct UsageError : Error {
    using Error::Error;
};
struct NumericError : Error {
    using Error::Error;
};

struct CoefficientError : UsageError {
    using UsageError::UsageError;
};
struct ZoneError : UsageError {
    using UsageError::UsageError;
};
// Separating line never crosses the boundary inside the search window.
struct NoRootError : NumericError {
    using NumericError::NumericError;
};
struct SolverError : NumericError {
    using NumericError::NumericError;
};
struct QuadratureError : NumericError {
    using NumericError::NumericError;
};
struct DivergentNormError : QuadratureError {
    using QuadratureError::QuadratureError;
};
struct FitError : UsageError {
    using UsageError::UsageError;
};
struct ConfigError : UsageError {
    using UsageError::UsageError;
};

inline double sq(double x) { return x * x; }

// ---------------------------------------------------------------------------
// Grids.
// ---------------------------------------------------------------------------

inline std::vector<double> linspace(double a, double b, std::size_t n) {
    if (n == 0) return {};
    if (n == 1) return {a};
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = a + (b - a) * double(i) / double(n - 1);
    v.back() = b;
    return v;
}

// n points log-spaced in [a, b], 0 < a < b.
inline std::vector<double> logspace(double a, double b, std::size_t n) {
    if (a <= 0 || b <= a) throw UsageError("logspace: need 0 < a < b");
    auto v = linspace(std::log(a), std::log(b), n);
    for (auto& x : v) x = std::exp(x);
    if (!v.empty()) v.back() = b;
    return v;
}

// ---------------------------------------------------------------------------
// FNV-1a 64-bit hash (stable across runs; used for config-derived artifact
// names).
// ---------------------------------------------------------------------------

inline std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

// ---------------------------------------------------------------------------
// Deterministic parallel sweep: f(i) for i in [0, n). Results must be written
// by index into caller-owned storage, so the reduction order never depends on
// the thread count. Thread count: VISCOWAVE_THREADS if set, else hardware.
// ---------------------------------------------------------------------------

inline unsigned default_thread_count() {
    if (const char* env = std::getenv("VISCOWAVE_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1 && v <= 1024) return unsigned(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1u;
}

template <class F>
void parallel_for(std::size_t n, F&& f, unsigned threads = 0) {
    if (threads == 0) threads = default_thread_count();
    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    threads = unsigned(std::min<std::size_t>(threads, n));
    std::vector<std::thread> pool;
    std::exception_ptr first_error;
    std::mutex err_mx;
    std::atomic<std::size_t> next{0};
    for (unsigned w = 0; w < threads; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    f(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lk(err_mx);
                    if (!first_error) first_error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace vw
