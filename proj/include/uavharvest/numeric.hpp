#pragma once

#include "errors.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace uavh::numeric {

inline constexpr double pi = std::numbers::pi;
inline constexpr double sqrt2 = std::numbers::sqrt2;
inline constexpr double inv_sqrt_2pi = 0.3989422804014326779399460599343818684758586311649;

// Scaled complementary error function exp(x^2) * erfc(x).
inline double erfcx(double x) {
    if (x < 26.0) return std::exp(x * x) * std::erfc(x);
    // Asymptotic expansion; relative error below 1e-13 for x >= 26.
    const double inv2 = 1.0 / (x * x);
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k <= 6; ++k) {
        term *= -(2.0 * k - 1.0) * 0.5 * inv2;
        sum += term;
    }
    return sum / (x * std::sqrt(pi));
}

// erfc(x) * exp(log_scale), evaluated without intermediate overflow or underflow.
inline double scaled_erfc(double x, double log_scale) {
    if (x <= 0.0) return std::erfc(x) * std::exp(log_scale);
    return erfcx(x) * std::exp(log_scale - x * x);
}

inline double normal_pdf(double z) { return inv_sqrt_2pi * std::exp(-0.5 * z * z); }

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / sqrt2); }

// Phi(hi) - Phi(lo) for lo <= hi, using the tail that avoids cancellation.
inline double normal_interval(double lo, double hi) {
    if (hi <= lo) return 0.0;
    if (lo >= 0.0) return 0.5 * (std::erfc(lo / sqrt2) - std::erfc(hi / sqrt2));
    if (hi <= 0.0) return 0.5 * (std::erfc(-hi / sqrt2) - std::erfc(-lo / sqrt2));
    return 1.0 - 0.5 * std::erfc(hi / sqrt2) - 0.5 * std::erfc(-lo / sqrt2);
}

// exp(log_scale) * (Phi(hi) - Phi(lo)) with the scale folded into each tail term.
inline double scaled_normal_interval(double lo, double hi, double log_scale) {
    if (hi <= lo) return 0.0;
    if (lo >= 0.0)
        return 0.5 * (scaled_erfc(lo / sqrt2, log_scale) - scaled_erfc(hi / sqrt2, log_scale));
    if (hi <= 0.0)
        return 0.5 * (scaled_erfc(-hi / sqrt2, log_scale) - scaled_erfc(-lo / sqrt2, log_scale));
    return normal_interval(lo, hi) * std::exp(log_scale);
}

// Non-regularized lower incomplete gamma gamma(s, x).
inline double lower_gamma(double s, double x) {
    if (x <= 0.0) return 0.0;
    return boost::math::tgamma_lower(s, x);
}

// gamma(s, x_hi) - gamma(s, x_lo) as a difference of regularized functions.
// The s == 1 case uses the exponential identity exactly.
inline double lower_gamma_diff(double s, double x_lo, double x_hi) {
    if (x_hi <= x_lo) return 0.0;
    if (s == 1.0) return std::exp(-x_lo) - std::exp(-x_hi);
    const double lo = x_lo > 0.0 ? boost::math::gamma_p(s, x_lo) : 0.0;
    const double hi = boost::math::gamma_p(s, x_hi);
    if (lo > 0.5) {
        // both in the upper tail: subtract complements instead
        const double qlo = boost::math::gamma_q(s, x_lo);
        const double qhi = boost::math::gamma_q(s, x_hi);
        return std::tgamma(s) * (qlo - qhi);
    }
    return std::tgamma(s) * (hi - lo);
}

struct QuadratureTolerance {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    unsigned max_depth = 12;  // bisection levels; 2^12 leaf panels at most
};

// Adaptive Gauss-Kronrod integration. The error estimate is the difference
// between independent 15- and 31-point adaptive runs; Boost reports its own
// estimate on the reference interval, which is not usable as an absolute
// bound. Throws ConvergenceError when the estimate exceeds
// max(abs_tol, rel_tol * |result|).
template <class F>
double integrate(F&& f, double a, double b, const QuadratureTolerance& tol = {}) {
    if (b == a) return 0.0;
    const double inner = std::max(std::min(tol.rel_tol, 1e-9) * 1e-2, 1e-12);
    const double coarse =
        boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, tol.max_depth, inner);
    const double result =
        boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, tol.max_depth, inner);
    const double error = std::abs(result - coarse);
    if (!std::isfinite(result) || error > std::max(tol.abs_tol, tol.rel_tol * std::abs(result)))
        throw ConvergenceError("adaptive quadrature did not converge on [" + std::to_string(a) + ", " +
                               std::to_string(b) + "], error estimate " + std::to_string(error));
    return result;
}

// Integrate over consecutive breakpoints [x0, x1], [x1, x2], ...
template <class F>
double integrate_pieces(F&& f, const std::vector<double>& breaks, const QuadratureTolerance& tol = {}) {
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) sum += integrate(f, breaks[i], breaks[i + 1], tol);
    return sum;
}

// Nodes and weights of a composite 10-point Gauss-Legendre rule on [a, b]
// split into `panels` equal panels.
struct Node {
    double x;
    double w;
};

inline std::vector<Node> gauss_legendre_panels(double a, double b, std::size_t panels) {
    using rule = boost::math::quadrature::gauss<double, 10>;
    const auto& abscissa = rule::abscissa();
    const auto& weights = rule::weights();
    std::vector<Node> out;
    out.reserve(panels * 10);
    const double width = (b - a) / static_cast<double>(panels);
    for (std::size_t p = 0; p < panels; ++p) {
        const double lo = a + width * static_cast<double>(p);
        const double mid = lo + 0.5 * width;
        const double half = 0.5 * width;
        for (std::size_t k = 0; k < abscissa.size(); ++k) {
            out.push_back({mid - half * abscissa[k], half * weights[k]});
            out.push_back({mid + half * abscissa[k], half * weights[k]});
        }
    }
    return out;
}

inline double clamp01(double p) { return p < 0.0 ? 0.0 : (p > 1.0 ? 1.0 : p); }

}  // namespace uavh::numeric
