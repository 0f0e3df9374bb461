#pragma once

// Battery fed by a compound-Poisson stream of energy packets: packets arrive
// at rate lambda with i.i.d. sizes X (harvested power over one second).
// Charging uses the CLT for the n-fold convolution of X; ruin uses the dual
// risk model with linear drain.

#include "energy.hpp"
#include "errors.hpp"
#include "mission.hpp"
#include "numeric.hpp"
#include "solar.hpp"
#include "wind.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <optional>
#include <variant>

namespace uavh {

using PacketSource = std::variant<std::monostate, SolarSource, WindSource>;

struct ArrivalProcess {
    double rate_lambda = 2.0;
    double mean_x = 0.0;
    double second_moment_x = 0.0;
    PacketSource packet_source;  // monostate: moments only, no exact MGF or sampler

    double std_x() const { return std::sqrt(std::max(0.0, second_moment_x - mean_x * mean_x)); }

    void validate() const {
        detail::require(rate_lambda > 0.0, "arrivals.rate_lambda must be > 0");
        detail::require(mean_x > 0.0, "packet mean must be > 0");
        // relative slack: E[X^2] and E[X]^2 come from separate quadratures
        detail::require(second_moment_x >= mean_x * mean_x * (1.0 - 1e-12), "packet moments need E[X^2] >= E[X]^2");
    }
};

inline ArrivalProcess solar_arrivals(double rate_lambda, const SolarState& state, const SolarParams& params) {
    ArrivalProcess p;
    p.rate_lambda = rate_lambda;
    p.mean_x = solar_moment(1, state, params).value;
    p.second_moment_x = solar_moment(2, state, params).value;
    p.packet_source = SolarSource{state, params};
    p.validate();
    return p;
}

inline ArrivalProcess wind_arrivals(double rate_lambda, const WindClimate& w, const WindTurbine& t) {
    ArrivalProcess p;
    p.rate_lambda = rate_lambda;
    p.mean_x = wind_moment(1, w, t);
    p.second_moment_x = wind_moment(2, w, t);
    p.packet_source = WindSource{w, t};
    p.validate();
    return p;
}

struct SurplusConfig {
    double u0 = 100.0;
    double drain_flight = 0.0;    // P_hov + gamma_d
    double drain_transmit = 0.0;  // P_hov + P_d
    double t_f = 4.0;
    double t_b = 20.0;

    void validate() const {
        detail::require(u0 >= 0.0, "surplus u0 must be >= 0");
        detail::require(drain_flight > 0.0 && drain_transmit > 0.0, "surplus drains must be > 0");
        detail::require(t_f < t_b, "surplus requires t_f < t_b");
    }
};

inline SurplusConfig surplus_config(const MissionProfile& m, double u0) {
    return {u0, m.drain_flight(), m.drain_transmit(), m.t_f, m.t_b};
}

// P(X_1 + ... + X_n <= u0) under the CLT; n = 0 is the unit step at 0.
inline double n_fold_cdf_clt(double u0, int n, const ArrivalProcess& proc) {
    if (n < 0) throw DomainError("n_fold_cdf_clt requires n >= 0");
    if (n == 0) return u0 >= 0.0 ? 1.0 : 0.0;
    const double centre = n * proc.mean_x;
    const double sigma = proc.std_x();
    if (sigma == 0.0) return u0 >= centre ? 1.0 : 0.0;
    return numeric::normal_cdf((u0 - centre) / (sigma * std::sqrt(static_cast<double>(n))));
}

struct SeriesResult {
    double value = 0.0;
    int n_terms = 0;
    bool tail_ok = true;  // Poisson tail beyond n_terms below 1e-10
    bool clamped = false;
};

namespace detail {

// Smallest n with P(Poisson(mu) > n) = gamma_p(n + 1, mu) < 1e-10, capped.
inline std::pair<int, bool> poisson_cutoff(double mu, int cap) {
    for (int n = 0; n <= cap; ++n)
        if (boost::math::gamma_p(n + 1.0, mu) < 1e-10) return {n, true};
    return {cap, false};
}

}  // namespace detail

// P(tau(u0) <= t_f): the battery gains u0 within t_f.
inline SeriesResult charge_within(double u0, double t_f, const ArrivalProcess& proc,
                                  std::optional<int> n_max = std::nullopt) {
    if (!(t_f > 0.0)) throw DomainError("charge_within requires t_f > 0");
    const double mu = proc.rate_lambda * t_f;
    auto [cut, ok] = detail::poisson_cutoff(mu, n_max.value_or(100000));
    if (n_max) cut = *n_max;
    double sum = 0.0;
    for (int n = 0; n <= cut; ++n) {
        const double log_pmf = -mu + (n == 0 ? 0.0 : n * std::log(mu)) - std::lgamma(n + 1.0);
        sum += std::exp(log_pmf) * n_fold_cdf_clt(u0, n, proc);
    }
    SeriesResult r;
    r.n_terms = cut + 1;
    r.tail_ok = ok && boost::math::gamma_p(cut + 1.0, mu) < 1e-10;
    const double raw = 1.0 - sum;
    r.value = numeric::clamp01(raw);
    r.clamped = r.value != raw;
    return r;
}

// E[min(tau(u0), t_f)] = sum_n F^(n)(u0) gamma_p(n + 1, lambda t_f) / lambda.
inline SeriesResult mean_charge_time(double u0, double t_f, const ArrivalProcess& proc,
                                     std::optional<int> n_max = std::nullopt) {
    if (!(t_f > 0.0)) throw DomainError("mean_charge_time requires t_f > 0");
    const double lambda = proc.rate_lambda;
    const double mu = lambda * t_f;
    auto [cut, ok] = detail::poisson_cutoff(mu, n_max.value_or(100000));
    if (n_max) cut = *n_max;
    double sum = 0.0;
    for (int n = 0; n <= cut; ++n) sum += n_fold_cdf_clt(u0, n, proc) * boost::math::gamma_p(n + 1.0, mu) / lambda;
    SeriesResult r;
    r.n_terms = cut + 1;
    r.tail_ok = ok && boost::math::gamma_p(cut + 1.0, mu) < 1e-10;
    const double raw = sum;
    r.value = std::clamp(raw, 0.0, t_f);
    r.clamped = r.value != raw;
    return r;
}

enum class AdjustmentMode { approx, exact };

struct AdjustmentResult {
    double r = 0.0;
    bool certain_ruin = false;  // non-positive safety loading
    int iterations = 0;
};

// E[exp(-r X)] for the packet source, including the solar clamp atom at 0.
inline double packet_laplace(double r, const ArrivalProcess& proc) {
    return std::visit(
        [&](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, SolarSource>) {
                return solar_laplace(r, s.state, s.params) + solar_validity(s.state, s.params).truncated_mass;
            } else if constexpr (std::is_same_v<T, WindSource>) {
                return wind_laplace(r, s.climate, s.turbine);
            } else {
                throw DomainError("exact adjustment coefficient needs a solar or wind packet source");
            }
        },
        proc.packet_source);
}

// Positive root r of M_X(-r) = 1 - drain r / lambda, or its quadratic
// approximation (2 drain / (lambda E[X^2])) (lambda E[X] / drain - 1).
inline AdjustmentResult adjustment_coefficient(const ArrivalProcess& proc, double drain,
                                               AdjustmentMode mode = AdjustmentMode::exact) {
    if (!(drain > 0.0)) throw DomainError("adjustment_coefficient requires drain > 0");
    const double lambda = proc.rate_lambda;
    AdjustmentResult out;
    if (lambda * proc.mean_x <= drain) {
        out.certain_ruin = true;
        return out;
    }
    const double approx = 2.0 * drain / (lambda * proc.second_moment_x) * (lambda * proc.mean_x / drain - 1.0);
    if (mode == AdjustmentMode::approx) {
        out.r = approx;
        return out;
    }
    // g is convex with g(0) = 0, g'(0) < 0 and g(lambda / drain) > 0.
    auto g = [&](double r) { return packet_laplace(r, proc) - 1.0 + drain * r / lambda; };
    double hi = lambda / drain;
    double lo = std::min(approx, hi) * 0.5;
    int it = 0;
    while (g(lo) >= 0.0 && it < 200) {
        lo *= 0.5;
        ++it;
    }
    if (g(lo) >= 0.0) throw ConvergenceError("adjustment coefficient: no sign change near zero");
    double g_lo = g(lo), g_hi = g(hi);
    while (it < 200 && (hi - lo) > 1e-12 * hi) {
        const double mid = 0.5 * (lo + hi);
        const double gm = g(mid);
        if (gm < 0.0) {
            lo = mid;
            g_lo = gm;
        } else {
            hi = mid;
            g_hi = gm;
        }
        ++it;
    }
    // secant polish inside the bracket
    double r = g_hi - g_lo != 0.0 ? lo - g_lo * (hi - lo) / (g_hi - g_lo) : 0.5 * (lo + hi);
    if (!(r >= lo && r <= hi)) r = 0.5 * (lo + hi);
    const double g_r = g(r);
    if (std::abs(g_lo) < std::abs(g_r) && std::abs(g_lo) <= std::abs(g_hi)) r = lo;
    else if (std::abs(g_hi) < std::abs(g_r)) r = hi;
    out.r = r;
    out.iterations = it + 1;
    return out;
}

enum class Phase { flight, transmit };

struct OutageResult {
    double value = 0.0;
    double r = 0.0;
    bool certain_ruin = false;
    bool clamped = false;
};

// Eventual-outage probability for one phase:
//   flight:   (1 - r p_f / lambda) exp(-r u0)
//   transmit: (1 - r p_t / lambda) exp(-r (u0 + p_d t_f - gamma_d t_f))
// with p_t - p_f = p_d - gamma_d.
inline OutageResult eventual_outage(const SurplusConfig& cfg, const ArrivalProcess& proc, Phase phase,
                                    AdjustmentMode mode = AdjustmentMode::exact) {
    cfg.validate();
    const double drain = phase == Phase::flight ? cfg.drain_flight : cfg.drain_transmit;
    const AdjustmentResult adj = adjustment_coefficient(proc, drain, mode);
    OutageResult out;
    out.r = adj.r;
    if (adj.certain_ruin) {
        out.value = 1.0;
        out.certain_ruin = true;
        return out;
    }
    double level = cfg.u0;
    if (phase == Phase::transmit) level += (cfg.drain_transmit - cfg.drain_flight) * cfg.t_f;
    const double raw = (1.0 - adj.r * drain / proc.rate_lambda) * std::exp(-adj.r * level);
    out.value = numeric::clamp01(raw);
    out.clamped = out.value != raw;
    return out;
}

// exp(-r level): exact infinite-horizon ruin for linear drain with upward
// jumps, since the surplus can only reach zero continuously. The prefactor
// in eventual_outage makes that form an underestimate by the same factor.
inline OutageResult dual_ruin_probability(const SurplusConfig& cfg, const ArrivalProcess& proc, Phase phase) {
    cfg.validate();
    const double drain = phase == Phase::flight ? cfg.drain_flight : cfg.drain_transmit;
    const AdjustmentResult adj = adjustment_coefficient(proc, drain, AdjustmentMode::exact);
    OutageResult out;
    out.r = adj.r;
    if (adj.certain_ruin) {
        out.value = 1.0;
        out.certain_ruin = true;
        return out;
    }
    double level = cfg.u0;
    if (phase == Phase::transmit) level += (cfg.drain_transmit - cfg.drain_flight) * cfg.t_f;
    out.value = std::exp(-adj.r * level);
    return out;
}

// max(0, 1 - lambda E[X] / drain)
inline double steady_state_outage(const ArrivalProcess& proc, const MissionProfile& m, Phase phase) {
    const double drain = phase == Phase::flight ? m.drain_flight() : m.drain_transmit();
    return numeric::clamp01(1.0 - proc.rate_lambda * proc.mean_x / drain);
}

}  // namespace uavh
