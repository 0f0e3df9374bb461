#pragma once

// Harvested solar power: a quadratic/linear PV power map applied to a normally
// perturbed irradiance I = I_d(t) + dI, dI ~ N(0, sigma_di^2).
//
// The analytic density ignores the clamp of I at zero. The omitted mass
// Phi(-i_d / sigma_di) is reported by solar_validity() and is below 3e-7
// whenever i_d >= 5 sigma_di.

#include "errors.hpp"
#include "numeric.hpp"

#include <cmath>
#include <optional>
#include <vector>

namespace uavh {

struct SolarParams {
    double i_max = 2000.0;   // peak irradiance
    double k_c = 150.0;      // threshold intensity
    double eta_c = 0.02;     // PV efficiency beyond the threshold
    double sigma_di = 1.0;   // std-dev of the stochastic attenuation

    void validate() const {
        detail::require(i_max > 0.0, "solar.i_max must be > 0");
        detail::require(k_c > 0.0, "solar.k_c must be > 0");
        detail::require(eta_c > 0.0 && eta_c <= 1.0, "solar.eta_c must be in (0, 1]");
        detail::require(sigma_di > 0.0, "solar.sigma_di must be > 0");
    }
};

struct SolarState {
    double t_hours = 12.0;
    double i_d = 0.0;  // deterministic fundamental intensity at t_hours
};

inline double deterministic_intensity(double t_hours, const SolarParams& params) {
    if (!(t_hours >= 0.0 && t_hours < 24.0)) throw DomainError("time of day must lie in [0, 24) hours");
    if (t_hours < 6.0 || t_hours >= 18.0) return 0.0;
    const double shape = -t_hours * t_hours / 36.0 + 2.0 * t_hours / 3.0 - 3.0;
    return std::max(0.0, params.i_max * shape);
}

inline SolarState solar_state_at(double t_hours, const SolarParams& params) {
    return {t_hours, deterministic_intensity(t_hours, params)};
}

// PV output for intensity i; negative intensities are clamped to zero.
inline double power_of_intensity(double i, const SolarParams& params) {
    if (i <= 0.0) return 0.0;
    if (i < params.k_c) return params.eta_c / params.k_c * i * i;
    return params.eta_c * i;
}

// Inverse of power_of_intensity on p >= 0.
inline double intensity_of_power(double p, const SolarParams& params) {
    if (p <= 0.0) return 0.0;
    if (p < params.eta_c * params.k_c) return std::sqrt(params.k_c * p / params.eta_c);
    return p / params.eta_c;
}

struct SolarValidity {
    bool in_regime = true;        // i_d >= 5 sigma_di
    double truncated_mass = 0.0;  // P(I <= 0), absent from the analytic law
};

inline SolarValidity solar_validity(const SolarState& state, const SolarParams& params) {
    return {state.i_d >= 5.0 * params.sigma_di, numeric::normal_cdf(-state.i_d / params.sigma_di)};
}

inline double solar_pdf(double p, const SolarState& state, const SolarParams& params) {
    if (!(p > 0.0)) throw DomainError("solar_pdf requires p > 0");
    const double sigma = params.sigma_di;
    auto f_i = [&](double i) { return numeric::normal_pdf((i - state.i_d) / sigma) / sigma; };
    if (p < params.eta_c * params.k_c) {
        const double root = std::sqrt(params.k_c * p / params.eta_c);
        return 0.5 * std::sqrt(params.k_c / (params.eta_c * p)) * f_i(root);
    }
    return f_i(p / params.eta_c) / params.eta_c;
}

// Integral of solar_pdf over (0, p]. Continuous at p = eta_c * k_c.
inline double solar_cdf(double p, const SolarState& state, const SolarParams& params) {
    if (p < 0.0) throw DomainError("solar_cdf requires p >= 0");
    if (std::isinf(p)) return numeric::clamp01(1.0 - solar_validity(state, params).truncated_mass);
    const double sigma = params.sigma_di;
    const double i = intensity_of_power(p, params);
    return numeric::clamp01(numeric::normal_interval(-state.i_d / sigma, (i - state.i_d) / sigma));
}

// Laplace transform E[exp(-s P)] of the analytic density, in closed form.
inline double solar_laplace(double s, const SolarState& state, const SolarParams& params) {
    if (!(s >= 0.0)) throw DomainError("solar_laplace requires s >= 0");
    const double eta = params.eta_c;
    const double kc = params.k_c;
    const double sigma = params.sigma_di;
    const double id = state.i_d;

    // linear branch, I >= K_c
    const double log1 = -s * eta * id + 0.5 * s * s * eta * eta * sigma * sigma;
    const double z1 = (kc - id + s * eta * sigma * sigma) / sigma;
    const double linear = 0.5 * numeric::scaled_erfc(z1 / numeric::sqrt2, log1);

    // quadratic branch, 0 < I < K_c
    const double alpha = s * eta / kc;
    const double beta = 1.0 + 2.0 * alpha * sigma * sigma;
    const double root_beta = std::sqrt(beta);
    const double log2 = -id * id * alpha / beta;
    const double lo = -id / (root_beta * sigma);
    const double hi = (beta * kc - id) / (root_beta * sigma);
    const double quadratic = numeric::scaled_normal_interval(lo, hi, log2) / root_beta;

    return linear + quadratic;
}

// Quadrature partition covering the analytic density: the intensity window
// [i_d - 10 sigma, i_d + 10 sigma] mapped to power, split at eta_c * k_c.
struct SolarPartition {
    double quad_lo = 0.0, quad_hi = 0.0;  // quadratic branch, in sqrt(p)
    double lin_lo = 0.0, lin_hi = 0.0;    // linear branch, in p
};

inline SolarPartition solar_partition(const SolarState& state, const SolarParams& params, double width = 10.0) {
    const double i_lo = std::max(0.0, state.i_d - width * params.sigma_di);
    const double i_hi = state.i_d + width * params.sigma_di;
    SolarPartition part;
    if (i_lo < params.k_c) {
        part.quad_lo = std::sqrt(power_of_intensity(i_lo, params));
        part.quad_hi = std::sqrt(power_of_intensity(std::min(i_hi, params.k_c), params));
    }
    if (i_hi > params.k_c) {
        part.lin_lo = params.eta_c * std::max(i_lo, params.k_c);
        part.lin_hi = params.eta_c * i_hi;
    }
    return part;
}

// E[h(P)] under the analytic density.
template <class F>
double solar_expectation(F&& h, const SolarState& state, const SolarParams& params,
                         const numeric::QuadratureTolerance& tol = {}) {
    const SolarPartition part = solar_partition(state, params);
    // one piece per sigma of intensity keeps each panel resolved
    auto breaks = [&](double lo, double hi, auto&& map) {
        std::vector<double> out{lo};
        for (int k = -10; k <= 10; ++k) {
            const double x = map(state.i_d + k * params.sigma_di);
            if (x > out.back() && x < hi) out.push_back(x);
        }
        out.push_back(hi);
        return out;
    };
    double sum = 0.0;
    if (part.quad_hi > part.quad_lo) {
        // p = u^2 removes the 1/sqrt(p) endpoint behaviour
        auto g = [&](double u) {
            if (u <= 0.0) return 0.0;
            const double p = u * u;
            return h(p) * solar_pdf(p, state, params) * 2.0 * u;
        };
        auto to_u = [&](double i) { return std::sqrt(power_of_intensity(i, params)); };
        sum += numeric::integrate_pieces(g, breaks(part.quad_lo, part.quad_hi, to_u), tol);
    }
    if (part.lin_hi > part.lin_lo) {
        auto g = [&](double p) { return h(p) * solar_pdf(p, state, params); };
        auto to_p = [&](double i) { return params.eta_c * i; };
        sum += numeric::integrate_pieces(g, breaks(part.lin_lo, part.lin_hi, to_p), tol);
    }
    return sum;
}

struct SolarMoment {
    double value = 0.0;                 // quadrature over the analytic density
    std::optional<double> closed_form;  // orders 1 and 2 only
    double rel_disagreement = 0.0;
};

// Closed forms of the first two moments, term by term.
// They assume sigma_di = 1.
inline std::optional<double> solar_moment_closed_form(int order, const SolarState& state,
                                                      const SolarParams& params) {
    if (params.sigma_di != 1.0 || (order != 1 && order != 2)) return std::nullopt;
    const double eta = params.eta_c;
    const double kc = params.k_c;
    const double id = state.i_d;
    const double tau = 1.0 + std::erf((id - kc) / numeric::sqrt2);
    const double nu = tau - 1.0 - std::erf(id / numeric::sqrt2);
    const double e_shift = std::exp(-0.5 * (id - kc) * (id - kc));
    const double e_zero = std::exp(-0.5 * id * id);
    const double root_2pi = std::sqrt(2.0 * numeric::pi);
    if (order == 1) {
        return 0.5 * eta * id * tau - id * eta * (e_shift - e_zero) / (root_2pi * kc) -
               0.5 * eta / kc * (1.0 + id * id) * nu;
    }
    const double eta2 = eta * eta;
    const double kc2 = kc * kc;
    return eta2 * e_zero * id * (5.0 + id * id) / (kc2 * root_2pi) + eta2 * (1.0 + id * id) * tau / 2.0 -
           eta2 * (3.0 + 6.0 * id + std::pow(id, 4)) * nu / (2.0 * kc2) +
           eta2 / root_2pi * e_shift *
               (id - id * id * id / kc2 - 3.0 / kc - id * id / kc - 5.0 * id / kc2 - 1.0);
}

inline SolarMoment solar_moment(int order, const SolarState& state, const SolarParams& params) {
    if (order < 1) throw DomainError("solar_moment requires order >= 1");
    SolarMoment out;
    out.value = solar_expectation([order](double p) { return std::pow(p, order); }, state, params);
    out.closed_form = solar_moment_closed_form(order, state, params);
    if (out.closed_form) {
        const double denom = std::max(std::abs(out.value), 1e-300);
        out.rel_disagreement = std::abs(*out.closed_form - out.value) / denom;
    }
    return out;
}

}  // namespace uavh
