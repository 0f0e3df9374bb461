#pragma once

// Seeded Monte-Carlo counterparts of the analytic quantities. Every
// estimator draws from one Philox substream sequentially, so results are a
// pure function of (inputs, RngConfig).

#include "battery.hpp"
#include "energy.hpp"
#include "errors.hpp"
#include "link.hpp"
#include "rng.hpp"
#include "solar.hpp"
#include "wind.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace uavh {

struct EstimateCI {
    double estimate = 0.0;
    double std_error = 0.0;
    std::size_t n_trials = 0;
};

// Running mean and sample variance.
class Accumulator {
public:
    void add(double x) {
        ++n_;
        const double d = x - mean_;
        mean_ += d / static_cast<double>(n_);
        m2_ += d * (x - mean_);
    }
    EstimateCI result() const {
        EstimateCI r;
        r.n_trials = n_;
        r.estimate = mean_;
        if (n_ > 1) r.std_error = std::sqrt(m2_ / static_cast<double>(n_ - 1) / static_cast<double>(n_));
        return r;
    }

private:
    std::size_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

inline EstimateCI mean_ci(const std::vector<double>& xs) {
    Accumulator acc;
    for (double x : xs) acc.add(x);
    return acc.result();
}

inline double draw_solar_power(const SolarState& state, const SolarParams& params, Philox4x32& rng) {
    std::normal_distribution<double> noise(0.0, params.sigma_di);
    return power_of_intensity(std::max(0.0, state.i_d + noise(rng)), params);
}

// Inverse-CDF Weibull draw pushed through the power curve.
inline double draw_wind_power(const WindClimate& w, const WindTurbine& t, Philox4x32& rng) {
    const double v = w.scale_c * std::pow(-std::log(rng.uniform_open()), 1.0 / w.shape_k);
    return power_curve(v, t);
}

inline double draw_harvest(const HarvestSource& source, Philox4x32& rng) {
    return std::visit(
        [&](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, SolarSource>) {
                return draw_solar_power(s.state, s.params, rng);
            } else if constexpr (std::is_same_v<T, WindSource>) {
                return draw_wind_power(s.climate, s.turbine, rng);
            } else {
                const double p = draw_solar_power(s.solar.state, s.solar.params, rng);
                return p + draw_wind_power(s.wind.climate, s.wind.turbine, rng);
            }
        },
        source);
}

inline double draw_packet(const ArrivalProcess& proc, Philox4x32& rng) {
    return std::visit(
        [&](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, SolarSource>) {
                return draw_solar_power(s.state, s.params, rng);
            } else if constexpr (std::is_same_v<T, WindSource>) {
                return draw_wind_power(s.climate, s.turbine, rng);
            } else {
                throw DomainError("packet sampling needs a solar or wind packet source");
            }
        },
        proc.packet_source);
}

inline std::vector<double> sample_solar_power(std::size_t n, const SolarState& state, const SolarParams& params,
                                              const RngConfig& cfg) {
    if (n < 1) throw DomainError("sample count must be >= 1");
    Philox4x32 rng(cfg);
    std::vector<double> out(n);
    for (auto& x : out) x = draw_solar_power(state, params, rng);
    return out;
}

inline std::vector<double> sample_wind_power(std::size_t n, const WindClimate& w, const WindTurbine& t,
                                             const RngConfig& cfg) {
    if (n < 1) throw DomainError("sample count must be >= 1");
    Philox4x32 rng(cfg);
    std::vector<double> out(n);
    for (auto& x : out) x = draw_wind_power(w, t, rng);
    return out;
}

// Fraction of trials with sampled H < theta.
inline EstimateCI estimate_outage_at_threshold(double theta, const HarvestSource& source, std::size_t n,
                                               const RngConfig& cfg) {
    if (n < 1000) throw DomainError("Monte-Carlo outage estimates need n >= 1000");
    Philox4x32 rng(cfg);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (draw_harvest(source, rng) < theta) ++hits;
    const double p = static_cast<double>(hits) / static_cast<double>(n);
    return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(n - 1)), n};
}

inline EstimateCI estimate_energy_outage(const HarvestSource& source, const MissionProfile& m, std::size_t n,
                                         const RngConfig& cfg) {
    return estimate_outage_at_threshold(outage_threshold(m), source, n, cfg);
}

// Users uniform on the disc (r = R sqrt(U)), Gamma(m, Theta) power fading.
inline EstimateCI estimate_snr_outage(double p_d, double altitude, const LinkParams& link, double snr_th,
                                      std::size_t n, const RngConfig& cfg) {
    if (n < 1000) throw DomainError("Monte-Carlo outage estimates need n >= 1000");
    link.validate();
    Philox4x32 rng(cfg);
    std::gamma_distribution<double> fading(link.fading_shape_m, link.fading_scale_theta);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = link.cell_radius * std::sqrt(rng.uniform_open());
        const double chi = fading(rng);
        const double snr = p_d * chi * path_gain_linear({altitude, r}, link) / link.noise_w;
        if (snr < snr_th) ++hits;
    }
    const double p = static_cast<double>(hits) / static_cast<double>(n);
    return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(n - 1)), n};
}

enum class SurplusMode {
    two_phase,     // harvest and drain_flight until t_f, then drain_transmit with no harvesting
    single_phase,  // harvest and drain_flight for the whole horizon
};

struct SurplusSimulation {
    EstimateCI ruin_frequency;
    std::vector<double> charge_times;  // min(tau(u0), t_f), tau = first time packets total >= u0
};

inline SurplusSimulation simulate_surplus(const SurplusConfig& cfg, const ArrivalProcess& proc, double horizon,
                                          std::size_t n, const RngConfig& rng_cfg,
                                          SurplusMode mode = SurplusMode::two_phase) {
    if (n < 1) throw DomainError("trial count must be >= 1");
    detail::require(cfg.u0 >= 0.0 && cfg.drain_flight >= 0.0 && cfg.drain_transmit >= 0.0 && cfg.t_f < cfg.t_b,
                    "surplus config requires u0 >= 0, drains >= 0 and t_f < t_b");
    if (mode == SurplusMode::two_phase && horizon < cfg.t_b)
        throw DomainError("two-phase surplus simulation needs horizon >= t_b");
    Philox4x32 rng(rng_cfg);
    std::exponential_distribution<double> gap(proc.rate_lambda);
    SurplusSimulation out;
    out.charge_times.reserve(n);
    std::size_t ruined = 0;
    for (std::size_t trial = 0; trial < n; ++trial) {
        double t = 0.0;
        double level = cfg.u0;  // surplus at time t
        double harvested = 0.0;
        double charge_time = cfg.t_f;
        bool charged = cfg.u0 <= 0.0;
        if (charged) charge_time = 0.0;
        bool ruin = cfg.u0 <= 0.0 && cfg.drain_flight > 0.0;
        while (!ruin) {
            const double next = t + gap(rng);
            const double harvest_end = mode == SurplusMode::two_phase ? std::min(cfg.t_f, horizon) : horizon;
            if (next > harvest_end) {
                // no more packets: surplus only drains from here on
                if (mode == SurplusMode::two_phase) {
                    const double at_tf = level - cfg.drain_flight * (cfg.t_f - t);
                    const double at_end = at_tf - cfg.drain_transmit * (horizon - cfg.t_f);
                    ruin = at_tf <= 0.0 || at_end <= 0.0;
                } else {
                    ruin = level - cfg.drain_flight * (horizon - t) <= 0.0;
                }
                break;
            }
            level -= cfg.drain_flight * (next - t);
            if (level <= 0.0) {
                ruin = true;
                break;
            }
            t = next;
            const double x = draw_packet(proc, rng);
            level += x;
            harvested += x;
            if (!charged && harvested >= cfg.u0) {
                charged = true;
                charge_time = std::min(t, cfg.t_f);
            }
            // ruin no longer reachable before the horizon
            const double remaining = mode == SurplusMode::two_phase
                                         ? cfg.drain_flight * (cfg.t_f - t) + cfg.drain_transmit * (horizon - cfg.t_f)
                                         : cfg.drain_flight * (horizon - t);
            if (level > remaining && (charged || t >= cfg.t_f)) break;
        }
        if (ruin) ++ruined;
        out.charge_times.push_back(charge_time);
    }
    const double p = static_cast<double>(ruined) / static_cast<double>(n);
    out.ruin_frequency = {p, n > 1 ? std::sqrt(p * (1.0 - p) / static_cast<double>(n - 1)) : 0.0, n};
    return out;
}

}  // namespace uavh
