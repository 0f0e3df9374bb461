#pragma once

#include "errors.hpp"
#include "numeric.hpp"

#include <cmath>

namespace uavh {

struct Airframe {
    double mass = 0.75;              // kg
    double gravity = 9.8;            // m/s^2
    int n_propellers = 4;
    double propeller_radius = 0.2;   // m
    double air_density = 1.225;      // kg/m^3
    double activation_power = 2.9;  // gamma_d, W

    void validate() const {
        detail::require(mass > 0.0 && gravity > 0.0 && propeller_radius > 0.0 && air_density > 0.0 &&
                            activation_power > 0.0,
                        "airframe fields must be > 0");
        detail::require(n_propellers >= 1, "airframe.n_propellers must be >= 1");
    }
};

// sqrt((m g)^3 / (2 pi r_p^2 n_p rho))
inline double hover_power(const Airframe& f) {
    const double thrust = f.mass * f.gravity;
    return std::sqrt(thrust * thrust * thrust /
                     (2.0 * numeric::pi * f.propeller_radius * f.propeller_radius * f.n_propellers * f.air_density));
}

// One block: fly for t_f, then hover and transmit for t_b - t_f.
// p_hov and gamma_d are copied from the airframe so that the energy and
// link closed forms can be evaluated from the profile alone.
struct MissionProfile {
    double t_b = 20.0;
    double t_f = 4.0;
    double p_d = 40.0;
    double p_b = 0.0;
    double p_hov = 0.0;
    double gamma_d = 2.9;
    double speed = 10.0;
    double r_max = 200.0;
    double altitude = 200.0;

    double drain_flight() const { return p_hov + gamma_d; }
    double drain_transmit() const { return p_hov + p_d; }

    void validate() const {
        detail::require(t_b > 0.0 && t_f >= 0.0 && t_f < t_b, "mission requires 0 <= t_f < t_b");
        detail::require(p_d >= 0.0 && p_b >= 0.0 && p_hov >= 0.0 && gamma_d >= 0.0, "mission powers must be >= 0");
        detail::require(speed > 0.0 && r_max > 0.0 && altitude > 0.0, "mission speed, r_max and altitude must be > 0");
    }
};

// Profile with t_b = r_max / speed, t_f = t_f_fraction * t_b,
// p_b = 2 + p_hov + gamma_d.
inline MissionProfile make_profile(const Airframe& frame, double p_d = 40.0, double t_f_fraction = 0.2,
                                   double speed = 10.0, double r_max = 200.0, double altitude = 200.0) {
    frame.validate();
    MissionProfile m;
    m.p_hov = hover_power(frame);
    m.gamma_d = frame.activation_power;
    m.p_b = 2.0 + m.p_hov + m.gamma_d;
    m.p_d = p_d;
    m.speed = speed;
    m.r_max = r_max;
    m.altitude = altitude;
    m.t_b = r_max / speed;
    m.t_f = t_f_fraction * m.t_b;
    m.validate();
    return m;
}

// Value produced by a closed form that had to be clamped into its domain.
struct Clamped {
    double value = 0.0;
    bool clamped = false;
};

}  // namespace uavh
