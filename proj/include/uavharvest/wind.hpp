#pragma once

// Harvested wind power: Weibull wind speed pushed through a cut-in / rated /
// cut-off turbine power curve. The resulting law is mixed: a continuous part
// on (a V_ci^3, a V_r^3] plus point masses at zero and at rated power.

#include "errors.hpp"
#include "numeric.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

namespace uavh {

struct WindClimate {
    double shape_k = 2.0;  // Weibull shape
    double scale_c = 4.0;  // Weibull scale, m/s

    void validate() const {
        detail::require(shape_k > 0.0, "wind.shape_k must be > 0");
        detail::require(scale_c > 0.0, "wind.scale_c must be > 0");
    }
};

struct WindTurbine {
    double v_cutin = 1.0;
    double v_rated = 8.0;
    double v_cutoff = 12.0;
    double rho_air = 1.225;
    double rotor_area = numeric::pi * 0.2 * 0.2 * 4.0;
    double power_coeff = 0.45;

    // 0.5 * rho * A * C
    double a_coef() const { return 0.5 * rho_air * rotor_area * power_coeff; }
    double p_rated() const { return a_coef() * v_rated * v_rated * v_rated; }

    void validate() const {
        detail::require(v_cutin > 0.0 && v_cutin <= v_rated && v_rated <= v_cutoff,
                        "wind turbine speeds must satisfy 0 < v_cutin <= v_rated <= v_cutoff");
        detail::require(rho_air > 0.0 && rotor_area > 0.0 && power_coeff > 0.0,
                        "wind turbine rho_air, rotor_area and power_coeff must be > 0");
    }
};

inline double weibull_mean(const WindClimate& w) { return w.scale_c * std::tgamma(1.0 + 1.0 / w.shape_k); }

inline double weibull_std(const WindClimate& w) {
    const double g1 = std::tgamma(1.0 + 1.0 / w.shape_k);
    const double g2 = std::tgamma(1.0 + 2.0 / w.shape_k);
    return w.scale_c * std::sqrt(std::max(0.0, g2 - g1 * g1));
}

// Empirical fit k = (sigma/mu)^-1.086, c = mu / Gamma(1 + 1/k).
inline WindClimate weibull_from_stats(double mean_speed, double std_speed) {
    if (!(mean_speed > 0.0) || !(std_speed > 0.0))
        throw DomainError("weibull_from_stats requires positive mean and std");
    const double k = std::pow(std_speed / mean_speed, -1.086);
    return {k, mean_speed / std::tgamma(1.0 + 1.0 / k)};
}

inline double wind_speed_cdf(double v, const WindClimate& w) {
    if (v <= 0.0) return 0.0;
    return -std::expm1(-std::pow(v / w.scale_c, w.shape_k));
}

// exp(-(v/c)^k), the Weibull survival function
inline double wind_speed_sf(double v, const WindClimate& w) {
    if (v <= 0.0) return 1.0;
    return std::exp(-std::pow(v / w.scale_c, w.shape_k));
}

inline double power_curve(double v, const WindTurbine& t) {
    if (v > t.v_cutin && v <= t.v_rated) return t.a_coef() * v * v * v;
    if (v > t.v_rated && v <= t.v_cutoff) return t.p_rated();
    return 0.0;
}

struct PointMass {
    double location = 0.0;
    double mass = 0.0;
};

struct MixedDistribution {
    double lo = 0.0;  // continuous support (lo, hi]
    double hi = 0.0;
    std::function<double(double)> density;
    std::vector<PointMass> point_masses;

    double point_mass_total() const {
        double s = 0.0;
        for (const auto& pm : point_masses) s += pm.mass;
        return s;
    }
};

inline double wind_mass_at_zero(const WindClimate& w, const WindTurbine& t) {
    return wind_speed_cdf(t.v_cutin, w) + wind_speed_sf(t.v_cutoff, w);
}

inline double wind_mass_at_rated(const WindClimate& w, const WindTurbine& t) {
    return wind_speed_sf(t.v_rated, w) - wind_speed_sf(t.v_cutoff, w);
}

// F_V(V_r) - F_V(V_ci), the continuous branch mass
inline double wind_continuous_mass(const WindClimate& w, const WindTurbine& t) {
    return wind_speed_sf(t.v_cutin, w) - wind_speed_sf(t.v_rated, w);
}

// Density of the continuous branch at power p (zero outside the branch).
inline double wind_power_density(double p, const WindClimate& w, const WindTurbine& t) {
    const double a = t.a_coef();
    const double lo = a * t.v_cutin * t.v_cutin * t.v_cutin;
    const double hi = t.p_rated();
    if (!(p > lo && p <= hi)) return 0.0;
    const double k = w.shape_k;
    const double ck = std::pow(w.scale_c, k);
    const double ak3 = std::pow(a, k / 3.0);
    return k * std::pow(p, k / 3.0 - 1.0) * std::exp(-std::pow(p, k / 3.0) / (ak3 * ck)) / (3.0 * ck * ak3);
}

inline MixedDistribution wind_power_distribution(const WindClimate& w, const WindTurbine& t) {
    w.validate();
    t.validate();
    MixedDistribution d;
    const double a = t.a_coef();
    d.lo = a * t.v_cutin * t.v_cutin * t.v_cutin;
    d.hi = t.p_rated();
    d.density = [w, t](double p) { return wind_power_density(p, w, t); };
    d.point_masses = {{0.0, wind_mass_at_zero(w, t)}, {t.p_rated(), wind_mass_at_rated(w, t)}};
    return d;
}

// Right-continuous CDF of the harvested wind power.
inline double wind_power_cdf(double p, const WindClimate& w, const WindTurbine& t) {
    if (p < 0.0) return 0.0;
    const double p_rated = t.p_rated();
    if (p >= p_rated) return 1.0;
    const double mass0 = wind_mass_at_zero(w, t);
    const double a = t.a_coef();
    const double lo = a * t.v_cutin * t.v_cutin * t.v_cutin;
    if (p <= lo) return mass0;
    // gamma(1, x) = 1 - exp(-x); speed-equivalent of p is (p / a)^(1/3)
    const double x_p = std::pow(p / a, w.shape_k / 3.0) / std::pow(w.scale_c, w.shape_k);
    const double x_ci = std::pow(t.v_cutin / w.scale_c, w.shape_k);
    return numeric::clamp01(mass0 + numeric::lower_gamma_diff(1.0, x_ci, x_p));
}

enum class LaplaceMode { numeric, series };

// Series sum_n (-s a c^3)^n Gamma(3n/k + 1) / n! for the
// untruncated Weibull power law. Only defined for k >= 3 and |s a c^3| < 1.
inline double wind_laplace_series(double s, const WindClimate& w, const WindTurbine& t) {
    const double x = s * t.a_coef() * std::pow(w.scale_c, 3.0);
    if (w.shape_k < 3.0) throw DomainError("series Laplace transform requires shape_k >= 3");
    if (!(std::abs(x) < 1.0)) throw DomainError("series Laplace transform requires |s a c^3| < 1");
    double sum = 1.0;
    double prev = 1.0;
    int growing = 0;
    for (int n = 1; n < 100000; ++n) {
        const double log_mag = n * std::log(std::abs(x)) + std::lgamma(3.0 * n / w.shape_k + 1.0) - std::lgamma(n + 1.0);
        const double mag = std::exp(log_mag);
        const double term = (n % 2 == 0) ? mag : -mag;
        sum += term;
        if (mag < 1e-12) return sum;
        growing = mag > prev ? growing + 1 : 0;
        if (growing >= 3) throw ConvergenceError("wind Laplace series terms are growing");
        prev = mag;
    }
    throw ConvergenceError("wind Laplace series did not reach 1e-12");
}

inline double wind_laplace(double s, const WindClimate& w, const WindTurbine& t,
                           LaplaceMode mode = LaplaceMode::numeric) {
    if (!(s >= 0.0)) throw DomainError("wind_laplace requires s >= 0");
    if (mode == LaplaceMode::series) return wind_laplace_series(s, w, t);
    const double a = t.a_coef();
    double value = wind_mass_at_zero(w, t) + std::exp(-s * t.p_rated()) * wind_mass_at_rated(w, t);
    if (t.v_rated > t.v_cutin) {
        // integrate over wind speed: the p-density has p^(k/3 - 1) behaviour
        auto f = [&](double v) {
            const double z = v / w.scale_c;
            const double pdf = w.shape_k / w.scale_c * std::pow(z, w.shape_k - 1.0) * std::exp(-std::pow(z, w.shape_k));
            return std::exp(-s * a * v * v * v) * pdf;
        };
        value += numeric::integrate(f, t.v_cutin, t.v_rated, {1e-12, 1e-10, 12});
    }
    return value;
}

// Continuous-branch contribution a^i c^(3i) [gamma(1 + 3i/k, (V_r/c)^k) - gamma(1 + 3i/k, (V_ci/c)^k)].
inline double wind_moment_continuous(int order, const WindClimate& w, const WindTurbine& t) {
    if (order < 1) throw DomainError("wind_moment requires order >= 1");
    const double k = w.shape_k;
    const double x_r = std::pow(t.v_rated / w.scale_c, k);
    const double x_ci = std::pow(t.v_cutin / w.scale_c, k);
    return std::pow(t.a_coef(), order) * std::pow(w.scale_c, 3.0 * order) *
           numeric::lower_gamma_diff(1.0 + 3.0 * order / k, x_ci, x_r);
}

// E[P_w^order], including the rated-power point mass.
inline double wind_moment(int order, const WindClimate& w, const WindTurbine& t) {
    return wind_moment_continuous(order, w, t) + std::pow(t.p_rated(), order) * wind_mass_at_rated(w, t);
}

}  // namespace uavh
