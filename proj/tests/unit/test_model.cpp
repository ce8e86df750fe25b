#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "mlring/model.hpp"
#include "mlring/symmetry.hpp"

using namespace mlring;

namespace {

NetworkState random_state(int n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    NetworkState x(static_cast<std::size_t>(n));
    for (auto& s : x) {
        s.g = 3.0 + u(rng);
        s.q = 2.0 + u(rng);
        s.a = {u(rng), u(rng)};
    }
    return x;
}

}  // namespace

TEST(Model, TrivialEquilibriumIsStationary) {
    LaserParams p;
    for (double alpha : {0.0, 0.035, 0.07}) {
        const NetworkState x = trivial_equilibrium(p, alpha);
        ASSERT_EQ(x.size(), 8u);
        const NetworkState f = network_rhs(p, alpha, x, x);
        for (const auto& s : f) {
            EXPECT_NEAR(s.g, 0.0, 1e-15);
            EXPECT_NEAR(s.q, 0.0, 1e-15);
            EXPECT_EQ(std::abs(s.a), 0.0);
        }
    }
}

TEST(Model, FieldGainClosedForm) {
    LaserParams p;
    p.eta_g = 1.5;
    p.eta_q = 0.5;
    const double g = 3.2, q = 1.7;
    const cplx expect = std::exp(0.5 * (g - q)) * std::polar(1.0, 0.5 * (-1.5 * g + 0.5 * q));
    EXPECT_NEAR(std::abs(field_gain(p, g, q) - expect), 0.0, 1e-14);
}

TEST(Model, NodeRhsByHand) {
    LaserParams p;
    NodeState now{3.0, 2.0, {0.3, -0.4}};
    NodeState del{2.5, 1.5, {0.1, 0.2}};
    const double alpha = 0.04;
    const NodeState f = node_rhs(p, alpha, now, del);
    const double P = 0.25;
    EXPECT_NEAR(f.g, alpha - 0.01 * 3.0 - std::exp(-2.0) * (std::exp(3.0) - 1.0) * P, 1e-13);
    EXPECT_NEAR(f.q, 2.0 - 2.0 - (1.0 - std::exp(-2.0)) * P / 0.1, 1e-13);
    const cplx expect = -15.0 * now.a + 15.0 * std::sqrt(0.2) * field_gain(p, 2.5, 1.5) * del.a;
    EXPECT_NEAR(std::abs(f.a - expect), 0.0, 1e-13);
}

TEST(Model, CouplingMatrixMatchesApplyCoupling) {
    LaserParams p;
    p.psi = 0.7;
    std::mt19937_64 rng(3);
    const NetworkState x = random_state(p.n, rng);
    const Eigen::VectorXd y = coupling_matrix(p) * to_chart(x);
    const Eigen::VectorXd z = to_chart(apply_coupling(p, x));
    EXPECT_LT((y - z).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Model, ChartRoundTrip) {
    std::mt19937_64 rng(5);
    const NetworkState x = random_state(8, rng);
    EXPECT_EQ(max_abs_difference(network_from_chart(to_chart(x)), x), 0.0);
    const Eigen::Matrix4d J = generator_J();
    const Eigen::Matrix4d R = phase_rotation(0.3);
    const Eigen::Matrix4d series = Eigen::Matrix4d::Identity() + 0.3 * J + 0.045 * J * J;
    EXPECT_LT((R - series).cwiseAbs().maxCoeff(), 5e-3);
    EXPECT_LT((phase_rotation(0.3) * phase_rotation(-0.3) - Eigen::Matrix4d::Identity()).norm(), 1e-15);
}

TEST(Model, JacobianMatchesFiniteDifferences) {
    LaserParams p;
    p.eta_g = 1.3;
    const NodeState now{3.1, 1.9, {0.4, 0.2}};
    const NodeState del{2.9, 2.1, {-0.3, 0.5}};
    const double alpha = 0.05;
    const NodeJacobian J = node_jacobian(p, alpha, now, del);
    const double h = 1e-6;
    for (int c = 0; c < 4; ++c) {
        Eigen::Vector4d e = Eigen::Vector4d::Zero();
        e(c) = h;
        const Eigen::Vector4d fd_now =
            (to_chart(node_rhs(p, alpha, node_from_chart(to_chart(now) + e), del)) -
             to_chart(node_rhs(p, alpha, node_from_chart(to_chart(now) - e), del))) / (2 * h);
        const Eigen::Vector4d fd_del =
            (to_chart(node_rhs(p, alpha, now, node_from_chart(to_chart(del) + e))) -
             to_chart(node_rhs(p, alpha, now, node_from_chart(to_chart(del) - e)))) / (2 * h);
        EXPECT_LT((J.now.col(c) - fd_now).cwiseAbs().maxCoeff(), 1e-6) << c;
        EXPECT_LT((J.delayed.col(c) - fd_del).cwiseAbs().maxCoeff(), 1e-6) << c;
    }
}

TEST(Model, RhsIsEquivariant) {
    LaserParams p;
    p.psi = 0.4;
    std::mt19937_64 rng(11);
    const NetworkState x = random_state(p.n, rng);
    const NetworkState y = random_state(p.n, rng);
    for (int r = 0; r < p.n; ++r) {
        for (bool refl : {false, true}) {
            const DihedralElement h{r, refl};
            const double tau = 0.37 * (r + 1);
            const NetworkState lhs = network_rhs(p, 0.04, act(h, tau, x), act(h, tau, y));
            const NetworkState rhs = act(h, tau, network_rhs(p, 0.04, x, y));
            EXPECT_LT(max_abs_difference(lhs, rhs), 1e-12) << r << refl;
        }
    }
}

TEST(Model, CouplingNeedsThreeNodes) {
    LaserParams p;
    p.n = 2;
    EXPECT_THROW(coupling_matrix(p), ConfigError);
}
