#ifndef TCDLR_SURROGATE_HPP
#define TCDLR_SURROGATE_HPP

//
// Increasing nonnegative penalties g on [0, inf) applied to singular values,
// and the scalar proximal operator
//
//     prox_{tau*g}(sigma) = argmin_{x >= 0} 0.5*(x - sigma)^2 + tau*g(x),
//
// which is the building block of generalized singular value thresholding.
// The penalties are non-convex (except identity), so the prox is computed by
// collecting every interior stationary point of the objective plus the
// boundary candidates and taking the argmin. Ties resolve toward 0.
//

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace tcdlr {

enum class SurrogateKind { Identity, Lp, Geman, Laplace, Log, Logarithm, Etp };

struct SurrogateSpec {
    SurrogateKind kind = SurrogateKind::Identity;
    double p = 0.8;      // Lp exponent, in (0, 1]
    double gamma = 1.0;  // scale for the gamma-parameterized kinds

    static SurrogateSpec identity() { return {SurrogateKind::Identity}; }
    static SurrogateSpec lp(double p_) { return {SurrogateKind::Lp, p_}; }
    static SurrogateSpec geman(double g) { return {SurrogateKind::Geman, 0.8, g}; }
    static SurrogateSpec laplace(double g) { return {SurrogateKind::Laplace, 0.8, g}; }
    static SurrogateSpec log_kind(double g) { return {SurrogateKind::Log, 0.8, g}; }
    static SurrogateSpec logarithm(double g) { return {SurrogateKind::Logarithm, 0.8, g}; }
    static SurrogateSpec etp(double g) { return {SurrogateKind::Etp, 0.8, g}; }
};

inline void validate(const SurrogateSpec& s)
{
    if (s.kind == SurrogateKind::Lp && !(s.p > 0.0 && s.p <= 1.0))
        throw std::invalid_argument("SurrogateSpec: p must be in (0, 1]");
    if (s.kind != SurrogateKind::Identity && s.kind != SurrogateKind::Lp && !(s.gamma > 0.0))
        throw std::invalid_argument("SurrogateSpec: gamma must be positive");
}

inline double g_eval(const SurrogateSpec& s, double x)
{
    if (x < 0.0) throw std::domain_error("g_eval: negative argument");
    switch (s.kind) {
        case SurrogateKind::Identity: return x;
        case SurrogateKind::Lp: return std::pow(x, s.p);
        case SurrogateKind::Geman: return x / (x + s.gamma);
        case SurrogateKind::Laplace: return 1.0 - std::exp(-x / s.gamma);
        case SurrogateKind::Log: return std::log(s.gamma + x);
        case SurrogateKind::Logarithm: return std::log(s.gamma * x + 1.0) / std::log(s.gamma + 1.0);
        case SurrogateKind::Etp: return (1.0 - std::exp(-s.gamma * x)) / (1.0 - std::exp(-s.gamma));
    }
    return 0.0;
}

inline double g_deriv(const SurrogateSpec& s, double x)
{
    if (x < 0.0) throw std::domain_error("g_deriv: negative argument");
    switch (s.kind) {
        case SurrogateKind::Identity: return 1.0;
        case SurrogateKind::Lp: return s.p * std::pow(x, s.p - 1.0);
        case SurrogateKind::Geman: {
            double d = x + s.gamma;
            return s.gamma / (d * d);
        }
        case SurrogateKind::Laplace: return std::exp(-x / s.gamma) / s.gamma;
        case SurrogateKind::Log: return 1.0 / (s.gamma + x);
        case SurrogateKind::Logarithm:
            return s.gamma / ((s.gamma * x + 1.0) * std::log(s.gamma + 1.0));
        case SurrogateKind::Etp:
            return s.gamma * std::exp(-s.gamma * x) / (1.0 - std::exp(-s.gamma));
    }
    return 0.0;
}

namespace detail {

inline double prox_objective(const SurrogateSpec& s, double sigma, double tau, double x)
{
    const double d = x - sigma;
    return 0.5 * d * d + tau * g_eval(s, x);
}

// stationarity residual of the prox objective on (0, inf)
inline double prox_grad(const SurrogateSpec& s, double sigma, double tau, double x)
{
    return x - sigma + tau * g_deriv(s, x);
}

// safeguarded bisection with Newton acceleration on a bracket [lo, hi] where
// prox_grad changes sign
inline double polish_root(const SurrogateSpec& s, double sigma, double tau,
                          double lo, double hi)
{
    double flo = prox_grad(s, sigma, tau, lo);
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        double fx = prox_grad(s, sigma, tau, x);
        if ((fx < 0.0) == (flo < 0.0)) { lo = x; flo = fx; } else { hi = x; }
        // Newton step from the current midpoint, clipped to the bracket
        double h = 1e-7 * (1.0 + std::abs(x));
        double fpx = (prox_grad(s, sigma, tau, x + h) - fx) / h;
        double xn = (fpx != 0.0) ? x - fx / fpx : 0.5 * (lo + hi);
        x = (xn > lo && xn < hi) ? xn : 0.5 * (lo + hi);
        if (hi - lo < 1e-12 * (1.0 + hi)) break;
    }
    return x;
}

}  // namespace detail

inline double prox(const SurrogateSpec& s, double sigma, double tau)
{
    if (!std::isfinite(sigma) || !std::isfinite(tau) || sigma < 0.0 || tau < 0.0)
        throw std::invalid_argument("prox: inputs must be finite and nonnegative");
    if (tau == 0.0 || sigma == 0.0) return sigma;
    if (s.kind == SurrogateKind::Identity) return std::max(sigma - tau, 0.0);

    // candidates: the boundary points and every sign change of the gradient
    // located on a log-spaced grid over (0, sigma]
    double best_x = 0.0;
    double best_f = detail::prox_objective(s, sigma, tau, 0.0);
    auto consider = [&](double x) {
        double f = detail::prox_objective(s, sigma, tau, x);
        if (f < best_f - 1e-15 * (1.0 + std::abs(best_f))) { best_f = f; best_x = x; }
    };
    consider(sigma);

    constexpr int grid_n = 128;
    const double lo = sigma * 1e-14;
    const double ratio = std::pow(sigma / lo, 1.0 / (grid_n - 1));
    double xprev = lo;
    double fprev = detail::prox_grad(s, sigma, tau, xprev);
    for (int i = 1; i < grid_n; ++i) {
        double x = lo * std::pow(ratio, i);
        double f = detail::prox_grad(s, sigma, tau, x);
        if ((fprev <= 0.0 && f >= 0.0) || (fprev >= 0.0 && f <= 0.0))
            consider(detail::polish_root(s, sigma, tau, xprev, x));
        xprev = x;
        fprev = f;
    }
    return best_x;
}

inline const char* to_string(SurrogateKind k)
{
    switch (k) {
        case SurrogateKind::Identity: return "identity";
        case SurrogateKind::Lp: return "lp";
        case SurrogateKind::Geman: return "geman";
        case SurrogateKind::Laplace: return "laplace";
        case SurrogateKind::Log: return "log";
        case SurrogateKind::Logarithm: return "logarithm";
        case SurrogateKind::Etp: return "etp";
    }
    return "?";
}

inline SurrogateKind surrogate_kind_from_string(const std::string& name)
{
    if (name == "identity") return SurrogateKind::Identity;
    if (name == "lp") return SurrogateKind::Lp;
    if (name == "geman") return SurrogateKind::Geman;
    if (name == "laplace") return SurrogateKind::Laplace;
    if (name == "log") return SurrogateKind::Log;
    if (name == "logarithm") return SurrogateKind::Logarithm;
    if (name == "etp") return SurrogateKind::Etp;
    throw std::invalid_argument("unknown surrogate kind: " + name);
}

}  // namespace tcdlr

#endif
