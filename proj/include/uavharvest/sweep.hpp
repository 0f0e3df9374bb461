#pragma once

// One-axis parameter sweeps over a scenario. Every metric is evaluated
// analytically; metrics with a Monte-Carlo counterpart optionally get
// "<metric>_mc" and "<metric>_mc_se" columns. Each (point, metric) pair
// draws from its own Philox substream, so columns do not depend on which
// other metrics were requested.

#include "battery.hpp"
#include "energy.hpp"
#include "errors.hpp"
#include "link.hpp"
#include "scenario.hpp"
#include "sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace uavh {

inline const std::vector<std::string>& sweep_axes() {
    static const std::vector<std::string> axes = {"time_of_day", "p_d", "t_f", "altitude", "u0", "threshold_power"};
    return axes;
}

inline const std::vector<std::string>& sweep_metrics() {
    static const std::vector<std::string> metrics = {
        "solar_pdf",      "wind_pmf_pdf",    "energy_outage_solar", "energy_outage_wind",
        "energy_outage_hybrid", "snr_outage", "snr_outage_channel", "e_consumed",
        "charge_prob",    "mean_charge_time", "eventual_outage",    "steady_outage",
        "steady_outage_transmit"};
    return metrics;
}

struct SweepSpec {
    std::string axis;
    std::vector<double> values;
    std::vector<std::string> metrics;
    bool monte_carlo = false;
    std::size_t mc_trials = 100000;  // per probability; trajectories use a tenth
};

inline std::vector<double> linspace_step(double from, double to, double step) {
    if (!(step > 0.0) || !(to >= from)) throw ConfigError("sweep range needs step > 0 and to >= from");
    std::vector<double> out;
    const auto n = static_cast<std::size_t>(std::floor((to - from) / step + 1e-9));
    if (n > 100000) throw ConfigError("sweep range has too many points");
    for (std::size_t i = 0; i <= n; ++i) out.push_back(from + step * static_cast<double>(i));
    return out;
}

struct SweepColumn {
    std::string name;
    std::vector<double> values;
};

struct SweepResult {
    std::string axis_name;
    std::vector<double> axis_values;
    std::vector<SweepColumn> series;
    std::string scenario_hash;
    std::uint64_t seed = 0;
};

namespace detail {

inline Scenario scenario_at(const Scenario& base, const std::string& axis, double v) {
    Scenario s = base;
    if (axis == "time_of_day") s.time_of_day = v;
    else if (axis == "p_d") s.p_d = v;
    else if (axis == "t_f") s.t_f_seconds = v;
    else if (axis == "altitude") s.altitude = v;
    else if (axis == "u0") s.u0 = v;
    else if (axis != "threshold_power") throw ConfigError("unknown sweep axis '" + axis + "'");
    s.finalize();
    return s;
}

inline bool has_mc(const std::string& metric) {
    return metric.rfind("energy_outage_", 0) == 0 || metric == "snr_outage" || metric == "snr_outage_channel" ||
           metric == "charge_prob" || metric == "mean_charge_time" || metric == "eventual_outage";
}

struct PointContext {
    const Scenario& s;
    std::optional<double> threshold;  // set by the threshold_power axis

    double theta() const { return threshold ? *threshold : outage_threshold(s.mission); }
};

inline double energy_outage_for(const PointContext& ctx, SourceKind kind) {
    return outage_at_threshold(ctx.theta(), ctx.s.harvest_source(kind), ctx.s.inversion());
}

inline double channel_outage(const Scenario& s) {
    return snr_outage_avg(s.mission.p_d, s.mission.altitude, s.link, s.snr_th);
}

inline double analytic_metric(const std::string& m, const PointContext& ctx) {
    const Scenario& s = ctx.s;
    if (m == "solar_pdf" || m == "wind_pmf_pdf") {
        if (!ctx.threshold) throw ConfigError("metric '" + m + "' needs the threshold_power axis");
        const double p = *ctx.threshold;
        if (m == "solar_pdf") return p > 0.0 ? solar_pdf(p, s.solar_state, s.solar) : 0.0;
        return wind_power_density(p, s.wind, s.turbine);
    }
    if (m == "energy_outage_solar") return energy_outage_for(ctx, SourceKind::solar);
    if (m == "energy_outage_wind") return energy_outage_for(ctx, SourceKind::wind);
    if (m == "energy_outage_hybrid") return energy_outage_for(ctx, SourceKind::hybrid);
    if (m == "snr_outage_channel") return channel_outage(s);
    if (m == "snr_outage") {
        // a block without enough energy transmits nothing
        const double e = energy_outage_for(ctx, s.harvest);
        return e + (1.0 - e) * channel_outage(s);
    }
    if (m == "e_consumed") return energy_budget(s.mission, harvest_mean(s.harvest_source()) * s.mission.t_f).e_c;
    if (m == "charge_prob") return charge_within(s.u0, s.mission.t_f, s.arrivals()).value;
    if (m == "mean_charge_time") return mean_charge_time(s.u0, s.mission.t_f, s.arrivals()).value;
    if (m == "eventual_outage")
        return eventual_outage(surplus_config(s.mission, s.u0), s.arrivals(), Phase::flight).value;
    if (m == "steady_outage") return steady_state_outage(s.arrivals(), s.mission, Phase::flight);
    if (m == "steady_outage_transmit") return steady_state_outage(s.arrivals(), s.mission, Phase::transmit);
    throw ConfigError("unknown metric '" + m + "'");
}

inline EstimateCI mc_metric(const std::string& m, const PointContext& ctx, std::size_t trials, const RngConfig& rng) {
    const Scenario& s = ctx.s;
    const std::size_t trajectories = std::max<std::size_t>(1000, trials / 10);
    auto energy_mc = [&](SourceKind kind) {
        return estimate_outage_at_threshold(ctx.theta(), s.harvest_source(kind), trials, rng);
    };
    auto channel_mc = [&](const RngConfig& r) {
        return estimate_snr_outage(s.mission.p_d, s.mission.altitude, s.link, s.snr_th, trials, r);
    };
    if (m == "energy_outage_solar") return energy_mc(SourceKind::solar);
    if (m == "energy_outage_wind") return energy_mc(SourceKind::wind);
    if (m == "energy_outage_hybrid") return energy_mc(SourceKind::hybrid);
    if (m == "snr_outage_channel") return channel_mc(rng);
    if (m == "snr_outage") {
        const EstimateCI e = energy_mc(s.harvest);
        const EstimateCI c = channel_mc({rng.seed, rng.stream_id ^ 0x5bd1e995u});
        const double se = std::hypot((1.0 - c.estimate) * e.std_error, (1.0 - e.estimate) * c.std_error);
        return {e.estimate + (1.0 - e.estimate) * c.estimate, se, trials};
    }
    if (m == "charge_prob" || m == "mean_charge_time") {
        const auto sim = simulate_surplus(surplus_config(s.mission, s.u0), s.arrivals(), s.mission.t_b, trajectories,
                                          rng, SurplusMode::two_phase);
        if (m == "mean_charge_time") return mean_ci(sim.charge_times);
        Accumulator acc;
        for (double t : sim.charge_times) acc.add(t < s.mission.t_f ? 1.0 : 0.0);
        return acc.result();
    }
    if (m == "eventual_outage") {
        const auto sim = simulate_surplus(surplus_config(s.mission, s.u0), s.arrivals(), 50.0 * s.mission.t_f,
                                          trajectories, rng, SurplusMode::single_phase);
        return sim.ruin_frequency;
    }
    throw ConfigError("metric '" + m + "' has no Monte-Carlo estimator");
}

}  // namespace detail

inline SweepResult run_sweep(const Scenario& base, const SweepSpec& spec) {
    if (std::find(sweep_axes().begin(), sweep_axes().end(), spec.axis) == sweep_axes().end())
        throw ConfigError("unknown sweep axis '" + spec.axis + "'");
    if (spec.metrics.empty()) throw ConfigError("sweep needs at least one metric");
    for (const auto& m : spec.metrics)
        if (std::find(sweep_metrics().begin(), sweep_metrics().end(), m) == sweep_metrics().end())
            throw ConfigError("unknown metric '" + m + "'");
    if (spec.values.empty()) throw ConfigError("sweep axis has no values");

    SweepResult out;
    out.axis_name = spec.axis;
    out.axis_values = spec.values;
    out.scenario_hash = hex64(scenario_hash(base));
    out.seed = base.rng.seed;
    for (const auto& m : spec.metrics) {
        out.series.push_back({m, {}});
        if (spec.monte_carlo && detail::has_mc(m)) {
            out.series.push_back({m + "_mc", {}});
            out.series.push_back({m + "_mc_se", {}});
        }
    }
    for (std::size_t i = 0; i < spec.values.size(); ++i) {
        const double v = spec.values[i];
        const Scenario s = detail::scenario_at(base, spec.axis, v);
        detail::PointContext ctx{s, spec.axis == "threshold_power" ? std::optional<double>(v) : std::nullopt};
        std::size_t col = 0;
        for (std::size_t k = 0; k < spec.metrics.size(); ++k) {
            const auto& m = spec.metrics[k];
            out.series[col++].values.push_back(detail::analytic_metric(m, ctx));
            if (spec.monte_carlo && detail::has_mc(m)) {
                const std::size_t metric_index =
                    std::find(sweep_metrics().begin(), sweep_metrics().end(), m) - sweep_metrics().begin();
                const RngConfig rng{base.rng.seed, base.rng.stream_id + 4096 * (i + 1) + metric_index};
                const EstimateCI est = detail::mc_metric(m, ctx, spec.mc_trials, rng);
                out.series[col++].values.push_back(est.estimate);
                out.series[col++].values.push_back(est.std_error);
            }
        }
    }
    return out;
}

}  // namespace uavh
