#pragma once

// Scenario: every model parameter in one value, loaded from a sectioned
// key = value file with --set style overrides layered on top. Derived
// quantities (hover power, block duration, backup power, SNR threshold,
// solar intensity) are recomputed after every load and cannot be set.

#include "battery.hpp"
#include "energy.hpp"
#include "errors.hpp"
#include "hybrid.hpp"
#include "link.hpp"
#include "mission.hpp"
#include "rng.hpp"
#include "solar.hpp"
#include "wind.hpp"

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace uavh {

enum class SourceKind { solar, wind, hybrid };

inline const char* to_string(SourceKind k) {
    switch (k) {
        case SourceKind::solar: return "solar";
        case SourceKind::wind: return "wind";
        case SourceKind::hybrid: return "hybrid";
    }
    return "?";
}

inline std::optional<SourceKind> parse_source_kind(const std::string& s) {
    if (s == "solar") return SourceKind::solar;
    if (s == "wind") return SourceKind::wind;
    if (s == "hybrid") return SourceKind::hybrid;
    return std::nullopt;
}

struct Scenario {
    // inputs
    SolarParams solar;
    double time_of_day = 12.0;
    WindClimate wind;
    WindTurbine turbine;
    Airframe airframe;
    double p_d = 40.0;
    double t_f_fraction = 0.2;
    double t_f_seconds = 0.0;  // > 0 overrides t_f_fraction
    double speed = 10.0;
    double r_max = 200.0;
    double altitude = 200.0;
    double rate_th = 2.0;
    double backup_margin = 2.0;  // p_b = margin + p_hov + gamma_d
    SourceKind harvest = SourceKind::solar;
    LinkParams link;
    double rate_lambda = 2.0;
    SourceKind packets = SourceKind::solar;
    double u0 = 200.0;
    RngConfig rng;
    double inversion_tol = 1e-3;
    std::uint64_t inversion_max_nodes = std::uint64_t{1} << 23;

    // derived
    SolarState solar_state;
    MissionProfile mission;
    double snr_th = 0.0;

    // Recompute derived fields and check every invariant.
    void finalize() {
        try {
            solar.validate();
            wind.validate();
            turbine.validate();
            airframe.validate();
            link.validate();
            detail::require(t_f_fraction >= 0.0 && t_f_fraction < 1.0, "mission.t_f_fraction must be in [0, 1)");
            detail::require(rate_th > 0.0, "mission.rate_th must be > 0");
            detail::require(backup_margin >= 0.0, "mission.backup_margin must be >= 0");
            detail::require(rate_lambda > 0.0, "arrivals.rate_lambda must be > 0");
            detail::require(u0 >= 0.0, "arrivals.u0 must be >= 0");
            detail::require(packets != SourceKind::hybrid, "arrivals.source must be solar or wind");
            detail::require(inversion_tol > 0.0 && inversion_tol <= 1e-2, "inversion.tol must be in (0, 1e-2]");
            detail::require(inversion_max_nodes >= 128, "inversion.max_nodes must be >= 128");
            solar_state = solar_state_at(time_of_day, solar);
            mission = make_profile(airframe, p_d, t_f_fraction, speed, r_max, altitude);
            mission.p_b = backup_margin + mission.p_hov + mission.gamma_d;
            if (t_f_seconds > 0.0) mission.t_f = t_f_seconds;
            detail::require(mission.t_f < mission.t_b, "mission.t_f must be < t_b = r_max / speed");
            mission.validate();
            snr_th = snr_threshold(rate_th, mission.t_b, mission.t_f);
        } catch (const DomainError& e) {
            throw ConfigError(std::string("invalid scenario: ") + e.what());
        }
    }

    SolarSource solar_source() const { return {solar_state, solar}; }
    WindSource wind_source() const { return {wind, turbine}; }

    HarvestSource harvest_source(SourceKind kind) const {
        switch (kind) {
            case SourceKind::solar: return solar_source();
            case SourceKind::wind: return wind_source();
            case SourceKind::hybrid: return HybridSource{solar_source(), wind_source()};
        }
        throw DomainError("unknown source kind");
    }

    HarvestSource harvest_source() const { return harvest_source(harvest); }

    ArrivalProcess arrivals() const {
        if (packets == SourceKind::wind) return wind_arrivals(rate_lambda, wind, turbine);
        return solar_arrivals(rate_lambda, solar_state, solar);
    }

    InversionConfig inversion() const {
        InversionConfig cfg;
        cfg.tol = inversion_tol;
        cfg.max_nodes = static_cast<std::size_t>(inversion_max_nodes);
        return cfg;
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::optional<double> parse_double(const std::string& s) {
    double v = 0.0;
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || ptr != end || !std::isfinite(v)) return std::nullopt;
    return v;
}

inline std::optional<std::uint64_t> parse_u64(const std::string& s) {
    std::uint64_t v = 0;
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || ptr != end) return std::nullopt;
    return v;
}

struct Binding {
    std::string key;  // section.name
    std::function<bool(Scenario&, const std::string&)> set;
    std::function<std::string(const Scenario&)> get;
};

template <class Get>
Binding real_binding(std::string key, Get get) {
    return {std::move(key),
            [get](Scenario& s, const std::string& text) {
                auto v = parse_double(text);
                if (!v) return false;
                get(s) = *v;
                return true;
            },
            [get](const Scenario& s) { return format_double(get(const_cast<Scenario&>(s))); }};
}

inline const std::vector<Binding>& bindings() {
    static const std::vector<Binding> table = [] {
        std::vector<Binding> b;
        auto real = [&b](std::string key, auto get) { b.push_back(real_binding(std::move(key), get)); };
        real("solar.i_max", [](Scenario& s) -> double& { return s.solar.i_max; });
        real("solar.k_c", [](Scenario& s) -> double& { return s.solar.k_c; });
        real("solar.eta_c", [](Scenario& s) -> double& { return s.solar.eta_c; });
        real("solar.sigma_di", [](Scenario& s) -> double& { return s.solar.sigma_di; });
        real("solar.time_of_day", [](Scenario& s) -> double& { return s.time_of_day; });
        real("wind.shape_k", [](Scenario& s) -> double& { return s.wind.shape_k; });
        real("wind.scale_c", [](Scenario& s) -> double& { return s.wind.scale_c; });
        real("wind.v_cutin", [](Scenario& s) -> double& { return s.turbine.v_cutin; });
        real("wind.v_rated", [](Scenario& s) -> double& { return s.turbine.v_rated; });
        real("wind.v_cutoff", [](Scenario& s) -> double& { return s.turbine.v_cutoff; });
        real("wind.rho_air", [](Scenario& s) -> double& { return s.turbine.rho_air; });
        real("wind.rotor_area", [](Scenario& s) -> double& { return s.turbine.rotor_area; });
        real("wind.power_coeff", [](Scenario& s) -> double& { return s.turbine.power_coeff; });
        real("airframe.mass", [](Scenario& s) -> double& { return s.airframe.mass; });
        real("airframe.gravity", [](Scenario& s) -> double& { return s.airframe.gravity; });
        b.push_back({"airframe.n_propellers",
                     [](Scenario& s, const std::string& text) {
                         auto v = parse_u64(text);
                         if (!v || *v > 1000) return false;
                         s.airframe.n_propellers = static_cast<int>(*v);
                         return true;
                     },
                     [](const Scenario& s) { return std::to_string(s.airframe.n_propellers); }});
        real("airframe.propeller_radius", [](Scenario& s) -> double& { return s.airframe.propeller_radius; });
        real("airframe.air_density", [](Scenario& s) -> double& { return s.airframe.air_density; });
        real("airframe.activation_power", [](Scenario& s) -> double& { return s.airframe.activation_power; });
        real("mission.p_d", [](Scenario& s) -> double& { return s.p_d; });
        real("mission.t_f_fraction", [](Scenario& s) -> double& { return s.t_f_fraction; });
        real("mission.t_f", [](Scenario& s) -> double& { return s.t_f_seconds; });
        real("mission.speed", [](Scenario& s) -> double& { return s.speed; });
        real("mission.r_max", [](Scenario& s) -> double& { return s.r_max; });
        real("mission.altitude", [](Scenario& s) -> double& { return s.altitude; });
        real("mission.rate_th", [](Scenario& s) -> double& { return s.rate_th; });
        real("mission.backup_margin", [](Scenario& s) -> double& { return s.backup_margin; });
        b.push_back({"mission.harvest",
                     [](Scenario& s, const std::string& text) {
                         auto k = parse_source_kind(text);
                         if (!k) return false;
                         s.harvest = *k;
                         return true;
                     },
                     [](const Scenario& s) { return std::string(to_string(s.harvest)); }});
        real("link.f_c", [](Scenario& s) -> double& { return s.link.f_c; });
        real("link.c_light", [](Scenario& s) -> double& { return s.link.c_light; });
        real("link.s_a", [](Scenario& s) -> double& { return s.link.s_a; });
        real("link.s_b", [](Scenario& s) -> double& { return s.link.s_b; });
        real("link.eta_los_db", [](Scenario& s) -> double& { return s.link.eta_los_db; });
        real("link.eta_nlos_db", [](Scenario& s) -> double& { return s.link.eta_nlos_db; });
        real("link.noise_w", [](Scenario& s) -> double& { return s.link.noise_w; });
        real("link.fading_shape_m", [](Scenario& s) -> double& { return s.link.fading_shape_m; });
        real("link.fading_scale_theta", [](Scenario& s) -> double& { return s.link.fading_scale_theta; });
        real("link.cell_radius", [](Scenario& s) -> double& { return s.link.cell_radius; });
        real("arrivals.rate_lambda", [](Scenario& s) -> double& { return s.rate_lambda; });
        b.push_back({"arrivals.source",
                     [](Scenario& s, const std::string& text) {
                         auto k = parse_source_kind(text);
                         if (!k || *k == SourceKind::hybrid) return false;
                         s.packets = *k;
                         return true;
                     },
                     [](const Scenario& s) { return std::string(to_string(s.packets)); }});
        real("arrivals.u0", [](Scenario& s) -> double& { return s.u0; });
        b.push_back({"rng.seed",
                     [](Scenario& s, const std::string& text) {
                         auto v = parse_u64(text);
                         if (!v) return false;
                         s.rng.seed = *v;
                         return true;
                     },
                     [](const Scenario& s) { return std::to_string(s.rng.seed); }});
        b.push_back({"rng.stream_id",
                     [](Scenario& s, const std::string& text) {
                         auto v = parse_u64(text);
                         if (!v) return false;
                         s.rng.stream_id = *v;
                         return true;
                     },
                     [](const Scenario& s) { return std::to_string(s.rng.stream_id); }});
        real("inversion.tol", [](Scenario& s) -> double& { return s.inversion_tol; });
        b.push_back({"inversion.max_nodes",
                     [](Scenario& s, const std::string& text) {
                         auto v = parse_u64(text);
                         if (!v) return false;
                         s.inversion_max_nodes = *v;
                         return true;
                     },
                     [](const Scenario& s) { return std::to_string(s.inversion_max_nodes); }});
        return b;
    }();
    return table;
}

inline const char* const derived_keys[] = {"mission.p_hov", "mission.t_b", "mission.p_b", "mission.snr_th",
                                           "solar.i_d"};

}  // namespace detail

// Assign one "section.key" = value; `where` prefixes diagnostics.
inline void apply_setting(Scenario& s, const std::string& key, const std::string& value, const std::string& where) {
    for (const char* derived : detail::derived_keys)
        if (key == derived) throw ConfigError(where + "key '" + key + "' is derived and cannot be set");
    for (const auto& b : detail::bindings()) {
        if (b.key != key) continue;
        if (!b.set(s, value)) throw ConfigError(where + "invalid value '" + value + "' for key '" + key + "'");
        return;
    }
    throw ConfigError(where + "unknown key '" + key + "'");
}

// Apply "key=value" with a dotted section.key name.
inline void apply_override(Scenario& s, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) throw ConfigError("override '" + assignment + "' is not of the form key=value");
    apply_setting(s, detail::trim(assignment.substr(0, eq)), detail::trim(assignment.substr(eq + 1)),
                  "override: ");
}

// Sectioned key = value text; '#' and ';' start comments.
inline void apply_ini(Scenario& s, std::istream& in, const std::string& origin = "config") {
    std::string line, section;
    for (int lineno = 1; std::getline(in, line); ++lineno) {
        const std::string where = origin + ":" + std::to_string(lineno) + ": ";
        const auto hash = line.find_first_of("#;");
        std::string text = detail::trim(hash == std::string::npos ? line : line.substr(0, hash));
        if (text.empty()) continue;
        if (text.front() == '[') {
            if (text.back() != ']') throw ConfigError(where + "unterminated section header");
            section = detail::trim(text.substr(1, text.size() - 2));
            if (section.empty()) throw ConfigError(where + "empty section name");
            continue;
        }
        const auto eq = text.find('=');
        if (eq == std::string::npos) throw ConfigError(where + "expected key = value");
        const std::string key = detail::trim(text.substr(0, eq));
        if (key.empty()) throw ConfigError(where + "missing key");
        if (section.empty()) throw ConfigError(where + "key '" + key + "' outside of a section");
        apply_setting(s, section + "." + key, detail::trim(text.substr(eq + 1)), where);
    }
}

inline Scenario load_scenario(const std::optional<std::string>& path, const std::vector<std::string>& overrides = {}) {
    Scenario s;
    if (path) {
        std::ifstream in(*path);
        if (!in) throw ConfigError("cannot open config file '" + *path + "'");
        apply_ini(s, in, *path);
    }
    for (const auto& o : overrides) apply_override(s, o);
    s.finalize();
    return s;
}

inline Scenario default_scenario() {
    Scenario s;
    s.finalize();
    return s;
}

// Canonical "key=value" lines for every input field, in table order.
inline std::string canonical_form(const Scenario& s) {
    std::string out;
    for (const auto& b : detail::bindings()) out += b.key + "=" + b.get(s) + "\n";
    return out;
}

// 64-bit FNV-1a of the canonical form.
inline std::uint64_t scenario_hash(const Scenario& s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : canonical_form(s)) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

}  // namespace uavh
