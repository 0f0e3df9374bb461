#pragma once

// Analytic-vs-oracle validation report for one scenario. Each check records
// the measured deviation and the tolerance it was held to.

#include "battery.hpp"
#include "energy.hpp"
#include "hybrid.hpp"
#include "link.hpp"
#include "scenario.hpp"
#include "sim.hpp"
#include "solar.hpp"
#include "wind.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace uavh {

struct ValidationCheck {
    std::string name;
    double measured = 0.0;   // deviation, in the units of the tolerance
    double tolerance = 0.0;
    bool passed = false;
    std::string note;
};

struct ValidateOptions {
    std::size_t mc_trials = 1000000;
    std::size_t trajectory_trials = 100000;
    GilPelaezSign gp_sign = GilPelaezSign::standard;
};

// sup |F_n - F| over the sorted sample.
template <class Cdf>
double ks_distance(std::vector<double> xs, Cdf&& cdf) {
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = cdf(xs[i]);
        d = std::max({d, std::abs(static_cast<double>(i + 1) / n - f), std::abs(f - static_cast<double>(i) / n)});
    }
    return d;
}

inline std::vector<ValidationCheck> validate_scenario(const Scenario& s, const ValidateOptions& opt = {}) {
    std::vector<ValidationCheck> out;
    auto check = [&](std::string name, double measured, double tol, std::string note = {}) {
        out.push_back({std::move(name), measured, tol, measured <= tol, std::move(note)});
    };
    auto stream = [&](std::uint64_t k) { return RngConfig{s.rng.seed, s.rng.stream_id + 7919 * (k + 1)}; };

    const SolarState& st = s.solar_state;
    const SolarValidity validity = solar_validity(st, s.solar);
    if (validity.in_regime) {
        const double mass = solar_expectation([](double) { return 1.0; }, st, s.solar);
        check("solar.pdf_normalization", std::abs(mass - 1.0), 1e-6);

        double worst = 0.0;
        for (double sv : {0.0, 0.01, 0.1, 1.0}) {
            const double quad = solar_expectation([sv](double p) { return std::exp(-sv * p); }, st, s.solar,
                                                  {1e-14, 1e-12, 12});
            worst = std::max(worst, std::abs(solar_laplace(sv, st, s.solar) - quad) / quad);
        }
        check("solar.laplace_vs_quadrature", worst, 1e-6, "relative, s in {0, 0.01, 0.1, 1}");

        const auto samples = sample_solar_power(opt.mc_trials, st, s.solar, stream(0));
        check("solar.ks_vs_monte_carlo",
              ks_distance(samples, [&](double p) { return solar_cdf(std::max(0.0, p), st, s.solar); }), 0.005);
    } else {
        check("solar.analytic_regime", 0.0, 0.0, "skipped: i_d below 5 sigma, analytic law not applicable");
    }

    {
        const auto d = wind_power_distribution(s.wind, s.turbine);
        double cont = 0.0;
        if (d.hi > d.lo) cont = numeric::integrate(d.density, d.lo, d.hi, {1e-13, 1e-12, 12});
        check("wind.total_mass", std::abs(cont + d.point_mass_total() - 1.0), 1e-9);

        const auto samples = sample_wind_power(opt.mc_trials, s.wind, s.turbine, stream(1));
        const double sv = 0.05;
        std::vector<double> e(samples.size());
        std::transform(samples.begin(), samples.end(), e.begin(), [sv](double p) { return std::exp(-sv * p); });
        const EstimateCI mc = mean_ci(e);
        check("wind.laplace_vs_monte_carlo",
              std::abs(wind_laplace(sv, s.wind, s.turbine) - mc.estimate) / std::max(mc.std_error, 1e-300), 3.0,
              "standard errors, s = 0.05");

        const double p_rated = s.turbine.p_rated();
        const double n = static_cast<double>(samples.size());
        const double zero = static_cast<double>(std::count(samples.begin(), samples.end(), 0.0)) / n;
        const double rated = static_cast<double>(std::count(samples.begin(), samples.end(), p_rated)) / n;
        const double m0 = wind_mass_at_zero(s.wind, s.turbine), mr = wind_mass_at_rated(s.wind, s.turbine);
        const double z0 = std::abs(zero - m0) / std::sqrt(std::max(m0 * (1 - m0), 1e-12) / n);
        const double zr = std::abs(rated - mr) / std::sqrt(std::max(mr * (1 - mr), 1e-12) / n);
        check("wind.point_masses_vs_monte_carlo", std::max(z0, zr), 3.5, "standard errors, worse of the two atoms");
    }

    InversionConfig inv = s.inversion();
    inv.sign = opt.gp_sign;
    {
        const auto hybrid = HarvestSource{HybridSource{s.solar_source(), s.wind_source()}};
        const double mean = harvest_mean(hybrid);
        const double var = std::max(0.0, solar_moment(2, st, s.solar).value -
                                             std::pow(solar_moment(1, st, s.solar).value, 2)) +
                           wind_moment(2, s.wind, s.turbine) - std::pow(wind_moment(1, s.wind, s.turbine), 2);
        double worst = 0.0;
        int k = 0;
        for (double theta : {mean - std::sqrt(var), mean + std::sqrt(var)}) {
            const double analytic = hybrid_cdf(theta, st, s.solar, s.wind, s.turbine, inv);
            const EstimateCI mc = estimate_outage_at_threshold(theta, hybrid, opt.mc_trials, stream(2 + k++));
            worst = std::max(worst, std::abs(analytic - mc.estimate));
        }
        check("hybrid.gil_pelaez_vs_monte_carlo", worst, 0.01, "thresholds E[H] -/+ sd(H)");
    }
    if (validity.in_regime) {
        const auto phi = make_solar_characteristic(st, s.solar);
        const double centre = power_of_intensity(st.i_d, s.solar);
        const double spread = s.solar.eta_c * s.solar.sigma_di;
        double worst = 0.0;
        for (double z : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
            const double theta = centre + z * spread;
            worst = std::max(worst, std::abs(gil_pelaez_cdf(theta, phi, inv) - solar_cdf(theta, st, s.solar)));
        }
        check("hybrid.solar_inversion_vs_cdf", worst, 1e-3, "five thresholds within 2 sd of the mode");
    }

    {
        double worst = 0.0;
        for (double h : {50.0, 200.0, 800.0})
            for (double r : {0.0, 100.0, 1000.0}) {
                const Geometry g{h, r};
                worst = std::max(worst, std::abs(path_gain_linear(g, s.link) * std::pow(10.0, path_loss_db(g, s.link) / 10.0) - 1.0));
            }
        check("link.gain_loss_reciprocity", worst, 1e-12);

        const double analytic = snr_outage_avg(s.mission.p_d, s.mission.altitude, s.link, s.snr_th);
        const EstimateCI mc = estimate_snr_outage(s.mission.p_d, s.mission.altitude, s.link, s.snr_th, opt.mc_trials,
                                                  stream(4));
        check("link.snr_outage_avg_vs_monte_carlo", std::abs(analytic - mc.estimate), 0.003);
    }

    {
        const double h_bar = harvest_mean(s.harvest_source());
        MissionProfile m = s.mission;
        const Clamped pd = optimal_transmit_power(m, h_bar);
        if (!pd.clamped) {
            m.p_d = pd.value;
            check("link.optimal_power_constraint",
                  std::abs(optimization_constraint_slack(m, h_bar)) / (m.p_b * m.t_b), 1e-9, "relative slack");
        }
    }

    {
        const ArrivalProcess proc = s.arrivals();
        const SurplusConfig cfg = surplus_config(s.mission, s.u0);
        const auto sim = simulate_surplus(cfg, proc, s.mission.t_b, opt.trajectory_trials, stream(5));
        double charged = 0.0;
        for (double t : sim.charge_times) charged += t < s.mission.t_f ? 1.0 : 0.0;
        charged /= static_cast<double>(sim.charge_times.size());
        check("battery.charge_within_vs_monte_carlo", std::abs(charge_within(s.u0, s.mission.t_f, proc).value - charged),
              0.02);
        const double mean_mc = mean_ci(sim.charge_times).estimate;
        const double mean_an = mean_charge_time(s.u0, s.mission.t_f, proc).value;
        check("battery.mean_charge_time_vs_monte_carlo", std::abs(mean_an - mean_mc) / std::max(mean_mc, 1e-12), 0.05,
              "relative");

        const OutageResult ev = eventual_outage(cfg, proc, Phase::flight);
        const auto ruin = simulate_surplus(cfg, proc, 50.0 * s.mission.t_f, opt.trajectory_trials, stream(6),
                                           SurplusMode::single_phase);
        check("battery.eventual_outage_vs_monte_carlo", std::abs(ev.value - ruin.ruin_frequency.estimate), 0.03,
              "flight phase, horizon 50 t_f");

        const AdjustmentResult adj = adjustment_coefficient(proc, cfg.drain_flight);
        if (!adj.certain_ruin) {
            const double residual =
                std::abs(packet_laplace(adj.r, proc) - (1.0 - cfg.drain_flight * adj.r / proc.rate_lambda));
            check("battery.adjustment_coefficient_residual", residual, 1e-10);
        }
        const double sf = steady_state_outage(proc, s.mission, Phase::flight);
        const double stx = steady_state_outage(proc, s.mission, Phase::transmit);
        if (s.mission.p_d > s.mission.gamma_d) check("battery.steady_outage_ordering", std::max(0.0, sf - stx), 0.0);
    }
    return out;
}

inline bool all_passed(const std::vector<ValidationCheck>& checks) {
    return std::all_of(checks.begin(), checks.end(), [](const ValidationCheck& c) { return c.passed; });
}

}  // namespace uavh
