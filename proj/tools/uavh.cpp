// uavh: command-line front end for the harvesting / outage models.
//
// Exit codes: 0 ok, 2 configuration error, 3 validation failure,
// 4 numerical convergence failure.

#include <uavharvest/uavharvest.hpp>

#include <CLI11.hpp>

#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

constexpr int exit_ok = 0;
constexpr int exit_config = 2;
constexpr int exit_validation = 3;
constexpr int exit_convergence = 4;

struct GlobalOptions {
    std::string config;
    std::vector<std::string> sets;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string format = "csv";
    std::optional<std::size_t> mc_trials;
    bool no_mc = false;
    bool timestamp = false;
};

uavh::Scenario load(const GlobalOptions& g) {
    auto s = uavh::load_scenario(g.config.empty() ? std::nullopt : std::optional<std::string>(g.config), g.sets);
    if (g.seed) s.rng.seed = *g.seed;
    return s;
}

void emit(const GlobalOptions& g, uavh::Table t) {
    if (g.timestamp) {
        const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        char buf[32];
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
        t.metadata["timestamp"] = buf;
    }
    std::ostringstream os;
    if (g.format == "json")
        uavh::write_json(os, t);
    else
        uavh::write_csv(os, t);
    if (g.out.empty()) {
        std::cout << os.str();
        return;
    }
    std::ofstream f(g.out, std::ios::binary);
    if (!f) throw uavh::ConfigError("cannot write output file '" + g.out + "'");
    f << os.str();
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, ',');)
        if (!uavh::detail::trim(item).empty()) out.push_back(uavh::detail::trim(item));
    return out;
}

uavh::Table key_value_table(const std::string& kind, const uavh::Scenario& s,
                            const std::vector<std::pair<std::string, uavh::Cell>>& entries) {
    uavh::Table t;
    t.kind = kind;
    t.columns = {"quantity", "value"};
    for (const auto& [k, v] : entries) t.rows.push_back({k, v});
    t.metadata["scenario_hash"] = uavh::hex64(uavh::scenario_hash(s));
    t.metadata["seed"] = std::to_string(s.rng.seed);
    return t;
}

uavh::SourceKind source_or_default(const std::string& name, uavh::SourceKind fallback) {
    if (name.empty()) return fallback;
    auto k = uavh::parse_source_kind(name);
    if (!k) throw uavh::ConfigError("unknown source '" + name + "'");
    return *k;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Harvested-energy, outage and battery models for energy-harvesting UAVs"};
    app.require_subcommand(1);
    app.fallthrough();
    GlobalOptions g;
    app.add_option("--config", g.config, "Scenario file (sectioned key = value)");
    app.add_option("--set", g.sets, "Override section.key=value (repeatable)");
    app.add_option("--seed", g.seed, "Random seed (overrides rng.seed)");
    app.add_option("--out", g.out, "Output file (default stdout)");
    app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--mc-trials", g.mc_trials, "Monte-Carlo trials per probability estimate")
        ->check(CLI::Range(std::size_t{1000}, std::size_t{100000000}));
    app.add_flag("--no-mc", g.no_mc, "Skip Monte-Carlo columns");
    app.add_flag("--timestamp", g.timestamp, "Add a wall-clock timestamp to the metadata");

    auto* dist = app.add_subcommand("dist", "PDF/CDF table of harvested power");
    std::string dist_source;
    std::size_t dist_points = 101;
    std::optional<double> dist_pmax;
    dist->add_option("--source", dist_source, "solar, wind or hybrid (default mission.harvest)");
    dist->add_option("--points", dist_points, "Grid points")->check(CLI::Range(std::size_t{2}, std::size_t{100000}));
    dist->add_option("--p-max", dist_pmax, "Upper end of the power grid, W");

    auto* sweep = app.add_subcommand("sweep", "One-axis parameter sweep");
    uavh::SweepSpec spec;
    std::string sweep_values, sweep_metrics;
    std::optional<double> from, to, step;
    sweep->add_option("--axis", spec.axis, "Sweep axis")->required()->check(CLI::IsMember(uavh::sweep_axes()));
    sweep->add_option("--from", from, "First axis value");
    sweep->add_option("--to", to, "Last axis value");
    sweep->add_option("--step", step, "Axis step");
    sweep->add_option("--values", sweep_values, "Comma-separated axis values (instead of a range)");
    sweep->add_option("--metrics", sweep_metrics, "Comma-separated metrics")->required();

    auto* optimize = app.add_subcommand("optimize", "Closed-form transmit power and flight time");
    std::optional<double> h_bar_opt;
    optimize->add_option("--harvest-power", h_bar_opt, "Harvested power H, W (default E[H])");

    auto* battery = app.add_subcommand("battery", "Charging and eventual-outage metrics");

    auto* validate = app.add_subcommand("validate", "Analytic-vs-Monte-Carlo validation report");
    std::string gp_sign = "standard";
    validate->add_option("--gp-sign", gp_sign, "Gil-Pelaez sign (as_printed is a fault-injection fixture)")
        ->check(CLI::IsMember({"standard", "as_printed"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? exit_ok : exit_config;
    }

    try {
        const uavh::Scenario s = load(g);

        if (*dist) {
            const auto kind = source_or_default(dist_source, s.harvest);
            double p_max = s.turbine.p_rated() * 1.05;
            if (kind != uavh::SourceKind::wind) {
                const double solar_hi = uavh::power_of_intensity(s.solar_state.i_d + 6.0 * s.solar.sigma_di, s.solar);
                p_max = kind == uavh::SourceKind::solar ? solar_hi * 1.05 + 0.1 : p_max + solar_hi;
            }
            if (dist_pmax) p_max = *dist_pmax;
            if (!(p_max > 0.0)) throw uavh::ConfigError("--p-max must be > 0");
            uavh::Table t;
            t.kind = "dist";
            t.columns = {"p", "pdf", "cdf"};
            t.metadata["source"] = uavh::to_string(kind);
            t.metadata["scenario_hash"] = uavh::hex64(uavh::scenario_hash(s));
            t.metadata["seed"] = std::to_string(s.rng.seed);
            std::optional<uavh::CharacteristicFn> phi;
            if (kind == uavh::SourceKind::hybrid)
                phi = uavh::make_hybrid_characteristic(s.solar_state, s.solar, s.wind, s.turbine);
            for (std::size_t i = 0; i < dist_points; ++i) {
                const double p = p_max * static_cast<double>(i) / static_cast<double>(dist_points - 1);
                double pdf = std::nan(""), cdf;
                if (kind == uavh::SourceKind::solar) {
                    pdf = p > 0.0 ? uavh::solar_pdf(p, s.solar_state, s.solar) : 0.0;
                    cdf = uavh::solar_cdf(p, s.solar_state, s.solar);
                } else if (kind == uavh::SourceKind::wind) {
                    pdf = uavh::wind_power_density(p, s.wind, s.turbine);
                    cdf = uavh::wind_power_cdf(p, s.wind, s.turbine);
                } else {
                    cdf = p > 0.0 ? uavh::gil_pelaez_cdf(p, *phi, s.inversion()) : 0.0;
                }
                t.rows.push_back({p, pdf, cdf});
            }
            emit(g, t);
            return exit_ok;
        }

        if (*sweep) {
            if (!sweep_values.empty()) {
                for (const auto& v : split_list(sweep_values)) {
                    auto d = uavh::detail::parse_double(v);
                    if (!d) throw uavh::ConfigError("invalid sweep value '" + v + "'");
                    spec.values.push_back(*d);
                }
            } else {
                if (!from || !to || !step) throw uavh::ConfigError("sweep needs --values or --from/--to/--step");
                spec.values = uavh::linspace_step(*from, *to, *step);
            }
            spec.metrics = split_list(sweep_metrics);
            spec.monte_carlo = !g.no_mc;
            if (g.mc_trials) spec.mc_trials = *g.mc_trials;
            emit(g, uavh::sweep_table(uavh::run_sweep(s, spec)));
            return exit_ok;
        }

        if (*optimize) {
            const double h_bar = h_bar_opt ? *h_bar_opt : uavh::harvest_mean(s.harvest_source());
            const auto pd = uavh::optimal_transmit_power(s.mission, h_bar);
            const auto tf = uavh::optimal_flight_time(s.mission, h_bar);
            emit(g, key_value_table("optimize", s,
                                    {{"harvest_power", h_bar},
                                     {"p_hov", s.mission.p_hov},
                                     {"p_b", s.mission.p_b},
                                     {"t_b", s.mission.t_b},
                                     {"t_f", s.mission.t_f},
                                     {"p_d", s.mission.p_d},
                                     {"theta", uavh::outage_threshold(s.mission)},
                                     {"snr_th", s.snr_th},
                                     {"p_d_star", pd.value},
                                     {"p_d_star_clamped", pd.clamped},
                                     {"t_f_star", tf.value},
                                     {"t_f_star_clamped", tf.clamped}}));
            return exit_ok;
        }

        if (*battery) {
            const auto proc = s.arrivals();
            const auto cfg = uavh::surplus_config(s.mission, s.u0);
            const auto cw = uavh::charge_within(s.u0, s.mission.t_f, proc);
            const auto mt = uavh::mean_charge_time(s.u0, s.mission.t_f, proc);
            const auto r_exact = uavh::adjustment_coefficient(proc, cfg.drain_flight, uavh::AdjustmentMode::exact);
            const auto r_approx = uavh::adjustment_coefficient(proc, cfg.drain_flight, uavh::AdjustmentMode::approx);
            const auto ev_f = uavh::eventual_outage(cfg, proc, uavh::Phase::flight);
            const auto ev_t = uavh::eventual_outage(cfg, proc, uavh::Phase::transmit);
            emit(g, key_value_table("battery", s,
                                    {{"u0", s.u0},
                                     {"rate_lambda", proc.rate_lambda},
                                     {"packet_mean", proc.mean_x},
                                     {"packet_std", proc.std_x()},
                                     {"charge_prob", cw.value},
                                     {"charge_prob_tail_ok", cw.tail_ok},
                                     {"mean_charge_time", mt.value},
                                     {"adjustment_exact", r_exact.r},
                                     {"adjustment_approx", r_approx.r},
                                     {"certain_ruin_flight", r_exact.certain_ruin},
                                     {"eventual_outage_flight", ev_f.value},
                                     {"eventual_outage_transmit", ev_t.value},
                                     {"ruin_exact_flight", uavh::dual_ruin_probability(cfg, proc, uavh::Phase::flight).value},
                                     {"ruin_exact_transmit",
                                      uavh::dual_ruin_probability(cfg, proc, uavh::Phase::transmit).value},
                                     {"steady_outage_flight", uavh::steady_state_outage(proc, s.mission, uavh::Phase::flight)},
                                     {"steady_outage_transmit",
                                      uavh::steady_state_outage(proc, s.mission, uavh::Phase::transmit)}}));
            return exit_ok;
        }

        if (*validate) {
            uavh::ValidateOptions opt;
            if (g.mc_trials) {
                opt.mc_trials = *g.mc_trials;
                opt.trajectory_trials = std::max<std::size_t>(1000, *g.mc_trials / 10);
            }
            opt.gp_sign = gp_sign == "as_printed" ? uavh::GilPelaezSign::as_printed : uavh::GilPelaezSign::standard;
            const auto checks = uavh::validate_scenario(s, opt);
            emit(g, uavh::validation_table(checks, s));
            return uavh::all_passed(checks) ? exit_ok : exit_validation;
        }
    } catch (const uavh::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return exit_config;
    } catch (const uavh::DomainError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return exit_config;
    } catch (const uavh::ConvergenceError& e) {
        std::cerr << "convergence failure: " << e.what() << "\n";
        return exit_convergence;
    }
    return exit_ok;
}
