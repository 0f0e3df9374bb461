#pragma once

// Test-only oracles and generators. Nothing here calls into the library's
// quadrature, so comparisons against it are independent.

#include <uavharvest/uavharvest.hpp>

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace oracle {

// Composite Simpson on [a, b] with n (even) panels.
template <class F>
double simpson(F&& f, double a, double b, int n = 20000) {
    if (n % 2) ++n;
    const double h = (b - a) / n;
    double sum = f(a) + f(b);
    for (int i = 1; i < n; ++i) sum += f(a + h * i) * (i % 2 ? 4.0 : 2.0);
    return sum * h / 3.0;
}

// Composite Simpson over consecutive breakpoints.
template <class F>
double simpson_pieces(F&& f, const std::vector<double>& breaks, int n = 4000) {
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) sum += simpson(f, breaks[i], breaks[i + 1], n);
    return sum;
}

// Solar power density by change of variables from the Gaussian intensity.
inline double solar_density(double p, const uavh::SolarState& st, const uavh::SolarParams& sp) {
    const double kc = sp.k_c, eta = sp.eta_c, s = sp.sigma_di;
    auto gauss = [&](double i) { return std::exp(-0.5 * std::pow((i - st.i_d) / s, 2)) / (s * std::sqrt(2.0 * M_PI)); };
    if (p <= 0.0) return 0.0;
    if (p < eta * kc) {
        const double i = std::sqrt(kc * p / eta);
        return gauss(i) * kc / (2.0 * eta * i);
    }
    return gauss(p / eta) / eta;
}

// E[g(P)] over the positive part of the solar law, integrating in
// intensity space, where the integrand is a plain Gaussian.
template <class G>
double solar_expect(G&& g, const uavh::SolarState& st, const uavh::SolarParams& sp) {
    auto power = [&](double i) { return i < sp.k_c ? sp.eta_c / sp.k_c * i * i : sp.eta_c * i; };
    auto f = [&](double i) {
        return g(power(i)) * std::exp(-0.5 * std::pow((i - st.i_d) / sp.sigma_di, 2)) /
               (sp.sigma_di * std::sqrt(2.0 * M_PI));
    };
    const double lo = std::max(0.0, st.i_d - 14.0 * sp.sigma_di), hi = st.i_d + 14.0 * sp.sigma_di;
    std::vector<double> br{lo};
    if (sp.k_c > lo && sp.k_c < hi) br.push_back(sp.k_c);
    br.push_back(hi);
    return simpson_pieces(f, br, 20000);
}

// Wind power density from the Weibull speed density and the cubic curve.
inline double wind_density(double p, const uavh::WindClimate& w, const uavh::WindTurbine& t) {
    const double a = t.a_coef();
    const double v = std::cbrt(p / a);
    if (v <= t.v_cutin || v >= t.v_rated) return 0.0;
    const double k = w.shape_k, c = w.scale_c;
    const double fv = k / c * std::pow(v / c, k - 1.0) * std::exp(-std::pow(v / c, k));
    return fv / (3.0 * a * v * v);
}

inline double weibull_cdf(double v, const uavh::WindClimate& w) {
    return v <= 0.0 ? 0.0 : 1.0 - std::exp(-std::pow(v / w.scale_c, w.shape_k));
}

}  // namespace oracle

namespace gen {

// Hand-rolled generator for property tests; fixed seed per test.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : eng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }

    uavh::WindClimate climate() {
        uavh::WindClimate w;
        w.shape_k = uniform(1.2, 3.5);
        w.scale_c = uniform(2.5, 9.0);
        return w;
    }

    uavh::WindTurbine turbine() {
        uavh::WindTurbine t;
        t.v_cutin = uniform(0.5, 3.0);
        t.v_rated = t.v_cutin + uniform(3.0, 9.0);
        t.v_cutoff = t.v_rated + uniform(1.0, 10.0);
        t.power_coeff = uniform(0.2, 0.55);
        t.rotor_area = uniform(0.2, 1.5);
        return t;
    }

    uavh::MissionProfile profile() {
        uavh::MissionProfile m;
        m.t_b = uniform(10.0, 60.0);
        m.t_f = uniform(0.5, 0.9 * m.t_b);
        m.p_hov = uniform(5.0, 40.0);
        m.gamma_d = uniform(0.5, 5.0);
        m.p_d = uniform(1.0, 60.0);
        m.p_b = m.p_hov + m.gamma_d + uniform(0.0, 10.0);
        return m;
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace gen
