#pragma once

// Air-to-ground link: S-curve LOS probability, mean path loss, Nakagami
// (Gamma power) fading, SNR outage and the two closed-form optimizers.

#include "errors.hpp"
#include "mission.hpp"
#include "numeric.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>

namespace uavh {

// Elevation angle in degrees. The S-curve is fitted in degrees, so radians
// must never reach it.
class Degrees {
public:
    constexpr explicit Degrees(double value) : value_(value) {}
    static Degrees from_radians(double rad) { return Degrees(rad * 180.0 / numeric::pi); }
    constexpr double value() const { return value_; }

private:
    double value_;
};

struct LinkParams {
    double f_c = 2.5e9;
    double c_light = 3e8;
    double s_a = 12.08;
    double s_b = 0.11;
    double eta_los_db = 1.6;
    double eta_nlos_db = 23.0;
    double noise_w = 1e-9;
    double fading_shape_m = 1.0;
    double fading_scale_theta = 1.0;
    double cell_radius = 200.0;

    void validate() const {
        detail::require(f_c > 0.0 && c_light > 0.0, "link.f_c and link.c_light must be > 0");
        detail::require(s_a > 0.0 && s_b > 0.0, "link S-curve parameters must be > 0");
        detail::require(eta_nlos_db >= eta_los_db, "link.eta_nlos_db must be >= link.eta_los_db");
        detail::require(noise_w > 0.0, "link.noise_w must be > 0");
        detail::require(fading_shape_m >= 0.5, "link.fading_shape_m must be >= 0.5");
        detail::require(fading_scale_theta > 0.0, "link.fading_scale_theta must be > 0");
        detail::require(cell_radius > 0.0, "link.cell_radius must be > 0");
    }
};

struct Geometry {
    double altitude = 200.0;
    double ground_range = 0.0;

    void validate() const {
        detail::require(altitude > 0.0, "geometry altitude must be > 0");
        detail::require(ground_range >= 0.0, "geometry ground_range must be >= 0");
    }
    double distance_sq() const { return altitude * altitude + ground_range * ground_range; }
    Degrees elevation() const {
        if (ground_range == 0.0) return Degrees(90.0);
        return Degrees::from_radians(std::atan(altitude / ground_range));
    }
};

inline double los_probability(Degrees elevation, const LinkParams& link) {
    return 1.0 / (1.0 + link.s_a * std::exp(-link.s_b * (elevation.value() - link.s_a)));
}

inline double los_probability(const Geometry& geom, const LinkParams& link) {
    geom.validate();
    return los_probability(geom.elevation(), link);
}

inline double free_space_db(double distance, const LinkParams& link) {
    return 20.0 * std::log10(distance) + 20.0 * std::log10(4.0 * numeric::pi * link.f_c / link.c_light);
}

inline double path_loss_db(const Geometry& geom, const LinkParams& link) {
    const double p_los = los_probability(geom, link);
    return free_space_db(std::sqrt(geom.distance_sq()), link) + link.eta_nlos_db +
           (link.eta_los_db - link.eta_nlos_db) * p_los;
}

// c^2 / (y (4 pi f_c)^2 d^2) * (y / x)^P_LOS, the reciprocal of path_loss_db in linear scale.
inline double path_gain_linear(const Geometry& geom, const LinkParams& link) {
    const double p_los = los_probability(geom, link);
    const double x = std::pow(10.0, link.eta_los_db / 10.0);
    const double y = std::pow(10.0, link.eta_nlos_db / 10.0);
    const double four_pi_f = 4.0 * numeric::pi * link.f_c;
    return link.c_light * link.c_light / (y * four_pi_f * four_pi_f * geom.distance_sq()) * std::pow(y / x, p_los);
}

// 2^(t_b R / (t_b - t_f)) - 1
inline double snr_threshold(double rate_th, double t_b, double t_f) {
    if (!(rate_th > 0.0)) throw DomainError("snr_threshold requires rate_th > 0");
    if (!(t_f >= 0.0 && t_f < t_b)) throw DomainError("snr_threshold requires 0 <= t_f < t_b");
    return std::exp2(t_b * rate_th / (t_b - t_f)) - 1.0;
}

inline double snr_outage_conditional(const Geometry& geom, double p_d, const LinkParams& link, double snr_th) {
    if (!(p_d > 0.0)) throw DomainError("snr_outage_conditional requires p_d > 0");
    if (!(snr_th >= 0.0)) throw DomainError("snr_outage_conditional requires snr_th >= 0");
    if (snr_th == 0.0) return 0.0;
    const double arg = snr_th * link.noise_w / (link.fading_scale_theta * path_gain_linear(geom, link) * p_d);
    if (link.fading_shape_m == 1.0) return -std::expm1(-arg);
    return boost::math::gamma_p(link.fading_shape_m, arg);
}

// Outage averaged over a user uniform on the disc of radius cell_radius.
inline double snr_outage_avg(double p_d, double altitude, const LinkParams& link, double snr_th) {
    link.validate();
    if (!(p_d > 0.0)) throw DomainError("snr_outage_avg requires p_d > 0");
    if (!(altitude > 0.0)) throw DomainError("snr_outage_avg requires altitude > 0");
    if (snr_th == 0.0) return 0.0;
    const double radius = link.cell_radius;
    const bool rayleigh = link.fading_shape_m == 1.0 && link.fading_scale_theta == 1.0;
    const double x = std::pow(10.0, link.eta_los_db / 10.0);
    const double y = std::pow(10.0, link.eta_nlos_db / 10.0);
    const double four_pi_f = 4.0 * numeric::pi * link.f_c;
    const double c_coef = snr_th * link.noise_w * y * four_pi_f * four_pi_f / (link.c_light * link.c_light * p_d);
    auto integrand = [&](double r) {
        const Geometry g{altitude, r};
        double outage;
        if (rayleigh) {
            // 1 - exp(-C d^2 (x/y)^P_LOS)
            outage = -std::expm1(-c_coef * g.distance_sq() * std::pow(x / y, los_probability(g, link)));
        } else {
            outage = snr_outage_conditional(g, p_d, link, snr_th);
        }
        return outage * 2.0 * r / (radius * radius);
    };
    return numeric::clamp01(numeric::integrate(integrand, 0.0, radius, {1e-9, 1e-7, 12}));
}

// Energy constraint used by both optimizers, P_d (T_b - T_f) + (P_hov +
// gamma_d) T_f - (P_b T_b + H T_f). Transmit-phase energy here is P_d alone;
// energy_budget additionally charges hover power during transmission.
inline double optimization_constraint_slack(const MissionProfile& m, double h_bar) {
    return m.p_d * (m.t_b - m.t_f) + m.drain_flight() * m.t_f - (m.p_b * m.t_b + h_bar * m.t_f);
}

// Largest p_d that the energy constraint allows:
// ((P_b T_b + H T_f) - (P_hov + gamma_d) T_f) / (T_b - T_f).
inline Clamped optimal_transmit_power(const MissionProfile& m, double h_bar) {
    if (!(m.t_f < m.t_b)) throw DomainError("optimal_transmit_power requires t_f < t_b");
    const double value = ((m.p_b * m.t_b + h_bar * m.t_f) - m.drain_flight() * m.t_f) / (m.t_b - m.t_f);
    if (value < 0.0) return {0.0, true};
    return {value, false};
}

// min(T_b, (P_d - P_b) T_b / (H - (P_hov + gamma_d) + P_d))
inline Clamped optimal_flight_time(const MissionProfile& m, double h_bar) {
    const double denom = h_bar - m.drain_flight() + m.p_d;
    if (denom == 0.0) throw DomainError("optimal_flight_time denominator H - (P_hov + gamma_d) + P_d is zero");
    const double candidate = (m.p_d - m.p_b) * m.t_b / denom;
    if (candidate < 0.0) return {0.0, true};
    return {std::min(m.t_b, candidate), false};
}

}  // namespace uavh
