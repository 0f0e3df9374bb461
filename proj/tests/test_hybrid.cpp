#include "support.hpp"

#include <gtest/gtest.h>

using namespace uavh;

namespace {

// E[exp(j w P)] over the positive solar part, in intensity space.
cplx solar_cf_oracle(double w, const SolarState& s, const SolarParams& p) {
    const double re = oracle::solar_expect([w](double x) { return std::cos(w * x); }, s, p);
    const double im = oracle::solar_expect([w](double x) { return std::sin(w * x); }, s, p);
    return {re, im};
}

// P(S + W < theta) by direct convolution over the wind speed.
double hybrid_cdf_oracle(double theta, const SolarState& s, const SolarParams& sp, const WindClimate& w,
                         const WindTurbine& t) {
    const double clamp = numeric::normal_cdf(-s.i_d / sp.sigma_di);
    auto solar_below = [&](double x) { return x <= 0.0 ? 0.0 : clamp + solar_cdf(x, s, sp); };
    double v = wind_mass_at_zero(w, t) * solar_below(theta) +
               wind_mass_at_rated(w, t) * solar_below(theta - t.p_rated());
    v += oracle::simpson(
        [&](double speed) {
            const double k = w.shape_k, c = w.scale_c;
            const double f = k / c * std::pow(speed / c, k - 1.0) * std::exp(-std::pow(speed / c, k));
            return f * solar_below(theta - t.a_coef() * speed * speed * speed);
        },
        t.v_cutin, t.v_rated, 200000);
    return v;
}

}  // namespace

TEST(Hybrid, NormalInversionMatchesClosedForm) {
    const auto phi = normal_characteristic(5.0, 2.0);
    for (double x : {-1.0, 3.0, 5.0, 6.3, 11.0})
        EXPECT_NEAR(gil_pelaez_cdf(x, phi), numeric::normal_cdf((x - 5.0) / 2.0), 1e-6) << "x = " << x;
}

TEST(Hybrid, SumOfNormalsInvertsToNormal) {
    const auto phi = normal_characteristic(1.0, 1.0) * normal_characteristic(2.0, 2.0);
    EXPECT_NEAR(gil_pelaez_cdf(4.0, phi), numeric::normal_cdf((4.0 - 3.0) / std::sqrt(5.0)), 1e-6);
}

TEST(Hybrid, GridPathMatchesPointwiseEvaluation) {
    const SolarParams p;
    const SolarState s{9.0, deterministic_intensity(9.0, p)};
    const auto phi = make_solar_characteristic(s, p) * make_wind_characteristic(WindClimate{}, WindTurbine{});
    std::vector<cplx> g(1000);
    phi.grid(0.25, 0.37, g);
    for (std::size_t k = 0; k < g.size(); k += 37) EXPECT_LT(std::abs(g[k] - phi(0.25 + 0.37 * k)), 1e-10);
}

TEST(Hybrid, SolarCharacteristicMatchesQuadrature) {
    SolarParams p;
    p.sigma_di = 40.0;
    const SolarState s{8.0, 140.0};
    const double clamp = numeric::normal_cdf(-s.i_d / p.sigma_di);
    for (double w : {0.0, 0.3, 1.7, 6.0, 25.0}) {
        const cplx expected = clamp + solar_cf_oracle(w, s, p);
        EXPECT_LT(std::abs(characteristic_solar(w, s, p) - expected), 1e-9) << "w = " << w;
        EXPECT_LT(std::abs(make_solar_characteristic(s, p, false)(w) - solar_cf_oracle(w, s, p)), 1e-9);
    }
    EXPECT_THROW(characteristic_solar(std::nan(""), s, p), DomainError);
}

TEST(Hybrid, WindFilonTableReproducesContinuousTransform) {
    const WindClimate w;
    const WindTurbine t;
    const WindFilonTable table(w, t);
    EXPECT_LE(table.l1_error(), 1e-5);
    EXPECT_NEAR(table.continuous(0.0).real(), wind_continuous_mass(w, t), 1e-12);
    for (double om : {0.05, 0.5, 2.0, 10.0}) {
        auto part = [&](bool imag) {
            return oracle::simpson(
                [&](double v) {
                    const double k = w.shape_k, c = w.scale_c;
                    const double f = k / c * std::pow(v / c, k - 1.0) * std::exp(-std::pow(v / c, k));
                    const double x = om * t.a_coef() * v * v * v;
                    return f * (imag ? std::sin(x) : std::cos(x));
                },
                t.v_cutin, t.v_rated, 400000);
        };
        const cplx expected(part(false), part(true));
        // L1 distance between densities bounds the transform error
        EXPECT_LT(std::abs(table.continuous(om) - expected), 2e-5) << "w = " << om;
    }
    const cplx atoms = table.atoms(1.3);
    EXPECT_LT(std::abs(atoms - (wind_mass_at_zero(w, t) + wind_mass_at_rated(w, t) * std::polar(1.0, 1.3 * t.p_rated()))),
              1e-15);
}

TEST(Hybrid, LinearWeightsSeriesAndClosedFormAgreeAtSwitch) {
    const auto [a0, b0] = WindFilonTable::linear_weights(std::nextafter(0.5, 0.0));
    const auto [a1, b1] = WindFilonTable::linear_weights(0.5);
    EXPECT_LT(std::abs(a0 - a1), 1e-13);
    EXPECT_LT(std::abs(b0 - b1), 1e-13);
    const auto [az, bz] = WindFilonTable::linear_weights(0.0);
    EXPECT_NEAR(az.real(), 0.5, 1e-15);
    EXPECT_NEAR(bz.real(), 0.5, 1e-15);
}

TEST(Hybrid, SolarOnlyInversionReproducesCdfAtTwentyThresholds) {
    const SolarParams p;
    for (double hour : {9.0, 12.0}) {
        const SolarState s = solar_state_at(hour, p);
        const auto phi = make_solar_characteristic(s, p);
        const double centre = power_of_intensity(s.i_d, p), spread = p.eta_c * p.sigma_di;
        for (int k = 0; k < 20; ++k) {
            const double theta = centre + spread * (-3.0 + 6.0 * k / 19.0);
            EXPECT_NEAR(gil_pelaez_cdf(theta, phi), solar_cdf(theta, s, p), 1e-3);
        }
    }
}

TEST(Hybrid, HybridCdfMatchesConvolutionOracle) {
    const SolarParams p;
    const WindClimate w;
    const WindTurbine t;
    for (double hour : {6.0, 6.5, 7.0, 9.0, 12.0})
        for (double theta : {5.0, 18.4, 30.0}) {
            const SolarState s = solar_state_at(hour, p);
            EXPECT_NEAR(hybrid_cdf(theta, s, p, w, t), hybrid_cdf_oracle(theta, s, p, w, t), 1e-3)
                << "hour " << hour << " theta " << theta;
        }
}

TEST(Hybrid, HybridCdfWithWideSolarNoise) {
    SolarParams p;
    p.sigma_di = 60.0;
    const WindClimate w{2.0, 6.0};
    const WindTurbine t;
    for (double id : {100.0, 300.0}) {
        const SolarState s{10.0, id};
        for (double theta : {3.0, 8.0, 15.0})
            EXPECT_NEAR(hybrid_cdf(theta, s, p, w, t), hybrid_cdf_oracle(theta, s, p, w, t), 1e-3);
    }
}

TEST(Hybrid, HybridCdfMatchesMonteCarlo) {
    const SolarParams p;
    const WindClimate w;
    const WindTurbine t;
    const SolarState s = solar_state_at(7.0, p);
    const HarvestSource src = HybridSource{SolarSource{s, p}, WindSource{w, t}};
    const EstimateCI mc = estimate_outage_at_threshold(18.4, src, 200000, {1, 2});
    EXPECT_LT(std::abs(hybrid_cdf(18.4, s, p, w, t) - mc.estimate), 3.0 * mc.std_error + 1e-3);
}

TEST(Hybrid, HybridCdfIsMonotoneInThreshold) {
    const SolarParams p;
    const SolarState s = solar_state_at(7.0, p);
    double prev = 0.0;
    for (double theta = 1.0; theta < 60.0; theta += 5.0) {
        const double f = hybrid_cdf(theta, s, p, WindClimate{}, WindTurbine{});
        EXPECT_GE(f, prev - 2e-3);
        prev = f;
    }
    EXPECT_EQ(hybrid_cdf(0.0, s, p, WindClimate{}, WindTurbine{}), 0.0);
}

TEST(Hybrid, AsPrintedSignIsDetectablyWrong) {
    const SolarParams p;
    const SolarState s = solar_state_at(7.0, p);
    InversionConfig bad;
    bad.sign = GilPelaezSign::as_printed;
    const double good = hybrid_cdf(18.4, s, p, WindClimate{}, WindTurbine{});
    const double wrong = hybrid_cdf(18.4, s, p, WindClimate{}, WindTurbine{}, bad);
    EXPECT_GT(std::abs(good - wrong), 0.02);
}

TEST(Hybrid, InversionReportsDiagnostics) {
    const auto r = gil_pelaez(0.3, normal_characteristic(0.0, 1.0));
    EXPECT_GT(r.omega_max, 0.0);
    EXPECT_GE(r.n_intervals, 64u);
    EXPECT_LT(r.refinement_change, 5e-4);
    EXPECT_LT(r.tail_estimate, 1e-3);
}

TEST(Hybrid, InversionConfigValidated) {
    InversionConfig cfg;
    cfg.tol = 0.5;
    EXPECT_THROW(gil_pelaez(0.0, normal_characteristic(0.0, 1.0), cfg), DomainError);
    cfg = {};
    cfg.n_nodes = 8;
    EXPECT_THROW(gil_pelaez(0.0, normal_characteristic(0.0, 1.0), cfg), DomainError);
}

TEST(Hybrid, NonDecayingTransformIsRejected) {
    // a lone atom never decays, so no frequency cut-off can be chosen
    EXPECT_THROW(gil_pelaez(1.0, point_mass_characteristic(0.0)), InversionAccuracyError);
}

TEST(Hybrid, NodeBudgetIsEnforced) {
    InversionConfig cfg;
    cfg.max_nodes = 128;
    cfg.omega_max = 1e4;
    EXPECT_THROW(gil_pelaez(1.0, normal_characteristic(0.0, 50.0), cfg), InversionAccuracyError);
}
