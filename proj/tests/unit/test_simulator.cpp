#include <cmath>

#include <gtest/gtest.h>

#include "mlring/simulator.hpp"

using namespace mlring;

TEST(Simulator, EquilibriumStaysPut) {
    const LaserParams p;
    const NetworkState x = trivial_equilibrium(p, 0.03);
    const Trajectory tr = integrate(p, 0.03, constant_history(x), 10 * p.T, p.T / 50);
    EXPECT_LT(max_abs_difference(tr.final_state(), x), 1e-12);
    EXPECT_NEAR(tr.times.back(), 10 * p.T, 1e-12);
    EXPECT_EQ(tr.states.size(), tr.rates.size());
}

TEST(Simulator, RejectsBadSteps) {
    const LaserParams p;
    const auto h = constant_history(trivial_equilibrium(p, 0.03));
    EXPECT_THROW(integrate(p, 0.03, h, 10.0, p.T / 10), ConfigError);
    EXPECT_THROW(integrate(p, 0.03, h, -1.0, p.T / 50), ConfigError);
    EXPECT_THROW(integrate(p, 0.03, h, 10.0, 0.0), ConfigError);
}

TEST(Simulator, FourthOrderConvergence) {
    LaserParams p;
    p.eta = 0.0;
    const NetworkState x0 = trivial_equilibrium(p, 0.04);
    const auto hist = perturbed_equilibrium_history(p, 0.04, 1e-2, 7);
    const double t_end = 4 * p.T;
    const Trajectory ref = integrate(p, 0.04, hist, t_end, p.T / 800);
    const double e1 = max_abs_difference(integrate(p, 0.04, hist, t_end, p.T / 100).final_state(),
                                         ref.final_state());
    const double e2 = max_abs_difference(integrate(p, 0.04, hist, t_end, p.T / 200).final_state(),
                                         ref.final_state());
    EXPECT_GT(e1 / e2, 8.0);
    (void)x0;
}

TEST(Simulator, HermiteInterpolantHitsGridPoints) {
    const LaserParams p;
    const Trajectory tr = integrate(p, 0.04, perturbed_equilibrium_history(p, 0.04, 1e-3, 1),
                                    3 * p.T, p.T / 40);
    for (std::size_t i = 0; i < tr.times.size(); i += 13) {
        EXPECT_LT(max_abs_difference(tr.at(tr.times[i]), tr.states[i]), 1e-13);
    }
    EXPECT_THROW(tr.at(10 * p.T), NumericalError);
}

TEST(Simulator, PerturbationIsSeededAndBounded) {
    const LaserParams p;
    const auto h1 = perturbed_equilibrium_history(p, 0.035, 1e-3, 42);
    const auto h2 = perturbed_equilibrium_history(p, 0.035, 1e-3, 42);
    const auto h3 = perturbed_equilibrium_history(p, 0.035, 1e-3, 43);
    EXPECT_EQ(max_abs_difference(h1(-1.0), h2(-1.0)), 0.0);
    EXPECT_GT(max_abs_difference(h1(-1.0), h3(-1.0)), 0.0);
    EXPECT_LE(max_abs_difference(h1(-1.0), trivial_equilibrium(p, 0.035)), std::sqrt(2.0) * 1e-3);
}

TEST(Simulator, FitRecoversSyntheticWave) {
    Trajectory tr;
    tr.dt = 0.01;
    const double w = -2.5;
    for (int i = 0; i <= 4000; ++i) {
        const double t = i * tr.dt;
        NetworkState x(8);
        for (int k = 0; k < 8; ++k) {
            x[k] = {3.0, 2.0, std::polar(0.7, w * t + 2.0 * 3.141592653589793 * 3 * k / 8)};
        }
        tr.times.push_back(t);
        tr.states.push_back(x);
    }
    const WaveFitResult fit = fit_rotating_wave(tr, 5.0);
    EXPECT_NEAR(fit.fitted_w, w, 1e-9);
    EXPECT_LT(fit.residual, 1e-9);
    ASSERT_TRUE(fit.twist_estimate.has_value());
    EXPECT_EQ(*fit.twist_estimate, 3);
}

TEST(Simulator, FitOfDarkStateHasNoTwist) {
    const LaserParams p;
    const Trajectory tr = integrate(p, 0.03, constant_history(trivial_equilibrium(p, 0.03)),
                                    5 * p.T, p.T / 40);
    const WaveFitResult fit = fit_rotating_wave(tr, p.T);
    EXPECT_FALSE(fit.twist_estimate.has_value());
    EXPECT_LT(fit.residual, 1e-12);
}
