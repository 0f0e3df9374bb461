#pragma once

// Block energy accounting and the energy-outage probability P[H < theta].

#include "errors.hpp"
#include "hybrid.hpp"
#include "mission.hpp"
#include "solar.hpp"
#include "wind.hpp"

#include <type_traits>
#include <variant>

namespace uavh {

struct EnergyBudget {
    double e_t = 0.0;  // hover + transmit phase
    double e_f = 0.0;  // flight phase
    double e_h = 0.0;  // harvested
    double e_c = 0.0;  // drawn from the battery
};

inline EnergyBudget energy_budget(const MissionProfile& m, double e_h) {
    if (!(e_h >= 0.0)) throw DomainError("energy_budget requires e_h >= 0");
    EnergyBudget b;
    b.e_t = m.drain_transmit() * (m.t_b - m.t_f);
    b.e_f = m.drain_flight() * m.t_f;
    b.e_h = e_h;
    const double e_b = m.p_b * m.t_b;
    const double need = b.e_t + b.e_f;
    if (e_h > need)
        b.e_c = 0.0;
    else if (e_h + e_b > need)
        b.e_c = need - e_h;
    else
        b.e_c = std::max(0.0, b.e_f - e_h);  // no transmission, return flight only
    return b;
}

// theta = (E_t + E_f - P_b T_b) / T_f: outage iff harvested power H < theta.
inline double outage_threshold(const MissionProfile& m) {
    if (!(m.t_f > 0.0)) throw DomainError("outage_threshold requires t_f > 0");
    const EnergyBudget b = energy_budget(m, 0.0);
    return (b.e_t + b.e_f - m.p_b * m.t_b) / m.t_f;
}

struct SolarSource {
    SolarState state;
    SolarParams params;
};

struct WindSource {
    WindClimate climate;
    WindTurbine turbine;
};

struct HybridSource {
    SolarSource solar;
    WindSource wind;
};

using HarvestSource = std::variant<SolarSource, WindSource, HybridSource>;

// E[H], the planning value of the harvested power.
inline double harvest_mean(const HarvestSource& source) {
    return std::visit(
        [](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, SolarSource>) {
                return solar_moment(1, s.state, s.params).value;
            } else if constexpr (std::is_same_v<T, WindSource>) {
                return wind_moment(1, s.climate, s.turbine);
            } else {
                return solar_moment(1, s.solar.state, s.solar.params).value +
                       wind_moment(1, s.wind.climate, s.wind.turbine);
            }
        },
        source);
}

// P[H < theta] for the given source.
inline double outage_at_threshold(double theta, const HarvestSource& source, const InversionConfig& cfg = {}) {
    if (theta <= 0.0) return 0.0;
    return std::visit(
        [&](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, SolarSource>) {
                // the clamp atom at zero power lies below any positive threshold
                const double clamp_mass = solar_validity(s.state, s.params).truncated_mass;
                return numeric::clamp01(clamp_mass + solar_cdf(theta, s.state, s.params));
            } else if constexpr (std::is_same_v<T, WindSource>) {
                return wind_power_cdf(theta, s.climate, s.turbine);
            } else {
                return hybrid_cdf(theta, s.solar.state, s.solar.params, s.wind.climate, s.wind.turbine, cfg);
            }
        },
        source);
}

inline double energy_outage(const HarvestSource& source, const MissionProfile& m, const InversionConfig& cfg = {}) {
    return outage_at_threshold(outage_threshold(m), source, cfg);
}

}  // namespace uavh
