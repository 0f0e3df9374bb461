#include "support.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace uavh;

namespace {

Scenario from_text(const std::string& text, const std::vector<std::string>& overrides = {}) {
    Scenario s;
    std::istringstream in(text);
    apply_ini(s, in, "test.ini");
    for (const auto& o : overrides) apply_override(s, o);
    s.finalize();
    return s;
}

std::string config_error(const std::string& text) {
    try {
        from_text(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

const std::vector<double>& column(const SweepResult& r, const std::string& name) {
    for (const auto& c : r.series)
        if (c.name == name) return c.values;
    throw std::out_of_range(name);
}

}  // namespace

TEST(Scenario, EmptyFileGivesDefaults) {
    const Scenario s = from_text("");
    EXPECT_NEAR(s.mission.p_hov, 17.956, 1e-3);
    EXPECT_DOUBLE_EQ(s.mission.t_b, 20.0);
    EXPECT_DOUBLE_EQ(s.mission.t_f, 4.0);
    EXPECT_NEAR(s.mission.p_b, 22.856, 1e-3);
    EXPECT_NEAR(s.snr_th, 4.6569, 1e-4);
    EXPECT_DOUBLE_EQ(s.solar_state.i_d, deterministic_intensity(12.0, s.solar));
    EXPECT_EQ(scenario_hash(s), scenario_hash(default_scenario()));
}

TEST(Scenario, SectionsCommentsAndOverrides) {
    const Scenario s = from_text(
        "# comment\n"
        "[mission]\n"
        "p_d = 10   ; trailing comment\n"
        "t_f_fraction = 0.25\n"
        "\n"
        "[solar]\n"
        "time_of_day = 9\n",
        {"mission.p_d=15", "rng.seed = 7"});
    EXPECT_EQ(s.mission.p_d, 15.0);
    EXPECT_DOUBLE_EQ(s.mission.t_f, 5.0);
    EXPECT_EQ(s.rng.seed, 7u);
    EXPECT_DOUBLE_EQ(s.solar_state.i_d, deterministic_intensity(9.0, s.solar));
}

TEST(Scenario, FlightTimeInSecondsOverridesFraction) {
    const Scenario s = from_text("[mission]\nt_f = 7.5\n");
    EXPECT_EQ(s.mission.t_f, 7.5);
    EXPECT_NEAR(s.snr_th, snr_threshold(2.0, 20.0, 7.5), 1e-15);
}

TEST(Scenario, DiagnosticsNameLineAndKey) {
    EXPECT_NE(config_error("[mission]\nbogus = 1\n").find("test.ini:2"), std::string::npos);
    EXPECT_NE(config_error("[mission]\nbogus = 1\n").find("mission.bogus"), std::string::npos);
    EXPECT_NE(config_error("[mission]\np_d = abc\n").find("invalid value"), std::string::npos);
    EXPECT_NE(config_error("p_d = 1\n").find("outside of a section"), std::string::npos);
    EXPECT_NE(config_error("[mission\n").find("unterminated"), std::string::npos);
    EXPECT_NE(config_error("[mission]\np_d\n").find("key = value"), std::string::npos);
    EXPECT_NE(config_error("[mission]\np_hov = 3\n").find("derived"), std::string::npos);
}

TEST(Scenario, InvariantViolationsNameTheField) {
    EXPECT_NE(config_error("[mission]\nt_f = 25\n").find("t_f"), std::string::npos);
    EXPECT_NE(config_error("[airframe]\nmass = -1\n").find("airframe"), std::string::npos);
    EXPECT_NE(config_error("[arrivals]\nsource = hybrid\n").find("arrivals.source"), std::string::npos);
    EXPECT_NE(config_error("[inversion]\nmax_nodes = 64\n").find("inversion.max_nodes"), std::string::npos);
    EXPECT_THROW(from_text("", {"mission.p_d"}), ConfigError);
    EXPECT_THROW(load_scenario(std::string("/nonexistent/uavh.ini")), ConfigError);
}

TEST(Scenario, CanonicalFormRoundTrips) {
    const Scenario a = from_text("", {"wind.shape_k=2.25", "link.noise_w=3.3e-10", "mission.harvest=hybrid"});
    std::istringstream lines(canonical_form(a));
    Scenario b;
    for (std::string line; std::getline(lines, line);) apply_override(b, line);
    b.finalize();
    EXPECT_EQ(canonical_form(a), canonical_form(b));
    EXPECT_EQ(scenario_hash(a), scenario_hash(b));
    EXPECT_NE(scenario_hash(a), scenario_hash(default_scenario()));
}

TEST(Report, CsvQuotingAndPrecision) {
    Table t;
    t.columns = {"name", "x", "flag"};
    t.rows.push_back({std::string("a,b"), 0.1, true});
    t.rows.push_back({std::string("say \"hi\""), std::nan(""), false});
    std::ostringstream os;
    write_csv(os, t);
    EXPECT_EQ(os.str(),
              "name,x,flag\r\n"
              "\"a,b\",0.10000000000000001,true\r\n"
              "\"say \"\"hi\"\"\",,false\r\n");
}

TEST(Report, NumbersRoundTripThroughCsv) {
    gen::Gen g(61);
    for (int i = 0; i < 1000; ++i) {
        const double v = g.uniform(-1.0, 1.0) * std::pow(10.0, g.integer(-300, 300));
        EXPECT_EQ(*detail::parse_double(detail::format_double(v)), v);
    }
}

TEST(Report, JsonEnvelope) {
    Table t;
    t.kind = "demo";
    t.columns = {"x", "y"};
    t.rows.push_back({1.5, std::nan("")});
    t.metadata["seed"] = "3";
    const auto j = to_json(t);
    EXPECT_EQ(j["schema_version"], 1);
    EXPECT_EQ(j["kind"], "demo");
    EXPECT_EQ(j["metadata"]["seed"], "3");
    EXPECT_EQ(j["rows"][0]["x"], 1.5);
    EXPECT_TRUE(j["rows"][0]["y"].is_null());
}

TEST(Sweep, RangeValidation) {
    EXPECT_EQ(linspace_step(6.0, 18.0, 0.5).size(), 25u);
    EXPECT_THROW(linspace_step(1.0, 0.0, 0.5), ConfigError);
    EXPECT_THROW(linspace_step(0.0, 1.0, 0.0), ConfigError);
    SweepSpec spec{"p_d", {10.0}, {"nonsense"}, false, 1000};
    EXPECT_THROW(run_sweep(default_scenario(), spec), ConfigError);
    spec = {"threshold_power", {1.0}, {"solar_pdf"}, false, 1000};
    EXPECT_NO_THROW(run_sweep(default_scenario(), spec));
    spec = {"p_d", {10.0}, {"solar_pdf"}, false, 1000};
    EXPECT_THROW(run_sweep(default_scenario(), spec), ConfigError);
}

TEST(Sweep, TimeOfDayPlateau) {
    const Scenario s = from_text("", {"mission.p_d=10"});
    const SweepResult r = run_sweep(s, {"time_of_day", linspace_step(6.0, 18.0, 0.5), {"energy_outage_solar"}, false, 0});
    ASSERT_EQ(r.axis_values.size(), 25u);
    const auto& v = column(r, "energy_outage_solar");
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double h = r.axis_values[i];
        if (h >= 8.0 && h <= 16.0) {
            EXPECT_LT(v[i], 0.01) << "hour " << h;
        }
    }
}

TEST(Sweep, FlightTimeTradeOff) {
    const Scenario s = from_text("", {"mission.p_d=10"});
    const SweepResult r =
        run_sweep(s, {"t_f", linspace_step(1.0, 10.0, 1.0), {"snr_outage", "energy_outage_solar"}, false, 0});
    const auto& snr = column(r, "snr_outage");
    const auto it = std::min_element(snr.begin(), snr.end());
    EXPECT_NE(it, snr.begin());
    EXPECT_NE(it, snr.end() - 1);
    const auto& energy = column(r, "energy_outage_solar");
    for (std::size_t i = 1; i < energy.size(); ++i) EXPECT_LE(energy[i], energy[i - 1]);
}

TEST(Sweep, EnergyOutageNonDecreasingInTransmitPower) {
    const Scenario s = from_text("", {"solar.time_of_day=7.5"});
    const SweepResult r = run_sweep(s, {"p_d", linspace_step(5.0, 40.0, 2.5), {"energy_outage_solar"}, false, 0});
    const auto& v = column(r, "energy_outage_solar");
    for (std::size_t i = 1; i < v.size(); ++i) EXPECT_GE(v[i], v[i - 1]);
    EXPECT_GT(v.back(), v.front());
}

TEST(Sweep, MonteCarloColumnsAreDeterministicAndIndependentOfOtherMetrics) {
    const Scenario s = from_text("", {"solar.time_of_day=7"});
    SweepSpec one{"p_d", {10.0, 20.0}, {"energy_outage_solar"}, true, 2000};
    SweepSpec two{"p_d", {10.0, 20.0}, {"snr_outage_channel", "energy_outage_solar"}, true, 2000};
    const SweepResult a = run_sweep(s, one), b = run_sweep(s, one), c = run_sweep(s, two);
    EXPECT_EQ(column(a, "energy_outage_solar_mc"), column(b, "energy_outage_solar_mc"));
    EXPECT_EQ(column(a, "energy_outage_solar_mc"), column(c, "energy_outage_solar_mc"));
    EXPECT_EQ(column(a, "energy_outage_solar_mc_se").size(), 2u);
    EXPECT_EQ(a.scenario_hash, c.scenario_hash);
}
