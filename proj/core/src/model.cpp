#include "mlring/model.hpp"

#include <algorithm>
#include <cmath>

namespace mlring {

cplx field_gain(const LaserParams& p, double g, double q) {
    const cplx one_g(1.0, -p.eta_g);
    const cplx one_q(1.0, -p.eta_q);
    return std::exp((one_g * g - one_q * q) / 2.0);
}

NodeState node_rhs(const LaserParams& p, double alpha, const NodeState& now,
                   const NodeState& delayed) {
    const double power = std::norm(now.a);
    const double emq = std::exp(-now.q);
    NodeState d;
    d.g = alpha - p.gamma_g * now.g - emq * std::expm1(now.g) * power / p.E_g;
    d.q = p.q0 - p.gamma_q * now.q - (-std::expm1(-now.q)) * power / p.E_q;
    d.a = -p.gamma * now.a +
          p.gamma * std::sqrt(p.kappa) * field_gain(p, delayed.g, delayed.q) * delayed.a;
    return d;
}

NetworkState apply_coupling(const LaserParams& p, const NetworkState& x) {
    const int n = static_cast<int>(x.size());
    const cplx c = std::polar(1.0, p.psi);
    NetworkState out(x.size());
    for (int k = 0; k < n; ++k) {
        const auto& left = x[(k + n - 1) % n];
        const auto& right = x[(k + 1) % n];
        out[k].a = c * (left.a + right.a);
    }
    return out;
}

Eigen::MatrixXd coupling_matrix(const LaserParams& p) {
    if (p.n < 3) throw ConfigError("coupling_matrix requires n >= 3");
    const int n = p.n;
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(4 * n, 4 * n);
    Eigen::Matrix2d rot;
    rot << std::cos(p.psi), -std::sin(p.psi), std::sin(p.psi), std::cos(p.psi);
    for (int k = 0; k < n; ++k) {
        for (int nb : {(k + n - 1) % n, (k + 1) % n}) {
            m.block<2, 2>(4 * k + 2, 4 * nb + 2) += rot;
        }
    }
    return m;
}

NetworkState network_rhs(const LaserParams& p, double alpha, const NetworkState& now,
                         const NetworkState& delayed) {
    NetworkState out(now.size());
    for (std::size_t k = 0; k < now.size(); ++k) {
        out[k] = node_rhs(p, alpha, now[k], delayed[k]);
    }
    if (p.eta != 0.0) {
        const NetworkState c = apply_coupling(p, now);
        for (std::size_t k = 0; k < now.size(); ++k) out[k].a += p.eta * c[k].a;
    }
    return out;
}

NetworkState network_rhs(const LaserParams& p, double alpha, const NetworkState& now,
                         const HistorySegment& history) {
    return network_rhs(p, alpha, now, history(-p.T));
}

NetworkState trivial_equilibrium(const LaserParams& p, double alpha) {
    NodeState x;
    x.g = alpha / p.gamma_g;
    x.q = p.q0 / p.gamma_q;
    return NetworkState(static_cast<std::size_t>(p.n), x);
}

Eigen::Vector4d to_chart(const NodeState& x) {
    return {x.g, x.q, x.a.real(), x.a.imag()};
}

NodeState node_from_chart(const Eigen::Vector4d& v) {
    return {v(0), v(1), cplx(v(2), v(3))};
}

Eigen::VectorXd to_chart(const NetworkState& x) {
    Eigen::VectorXd v(4 * static_cast<Eigen::Index>(x.size()));
    for (std::size_t k = 0; k < x.size(); ++k) v.segment<4>(4 * k) = to_chart(x[k]);
    return v;
}

NetworkState network_from_chart(const Eigen::VectorXd& v) {
    NetworkState x(static_cast<std::size_t>(v.size() / 4));
    for (std::size_t k = 0; k < x.size(); ++k) {
        x[k] = node_from_chart(v.segment<4>(4 * k));
    }
    return x;
}

Eigen::Matrix4d phase_rotation(double tau) {
    Eigen::Matrix4d r = Eigen::Matrix4d::Identity();
    r(2, 2) = std::cos(tau);
    r(2, 3) = -std::sin(tau);
    r(3, 2) = std::sin(tau);
    r(3, 3) = std::cos(tau);
    return r;
}

Eigen::Matrix4d generator_J() {
    Eigen::Matrix4d j = Eigen::Matrix4d::Zero();
    j(2, 3) = -1.0;
    j(3, 2) = 1.0;
    return j;
}

NodeJacobian node_jacobian(const LaserParams& p, double alpha, const NodeState& now,
                           const NodeState& delayed) {
    (void)alpha;  // enters only additively
    NodeJacobian jac;
    jac.now.setZero();
    jac.delayed.setZero();

    const double u = now.a.real();
    const double v = now.a.imag();
    const double power = u * u + v * v;
    const double emq = std::exp(-now.q);
    const double eg1 = std::expm1(now.g);

    // gain row
    jac.now(0, 0) = -p.gamma_g - emq * std::exp(now.g) * power / p.E_g;
    jac.now(0, 1) = emq * eg1 * power / p.E_g;
    jac.now(0, 2) = -2.0 * emq * eg1 * u / p.E_g;
    jac.now(0, 3) = -2.0 * emq * eg1 * v / p.E_g;
    // absorber row
    const double one_m_emq = -std::expm1(-now.q);
    jac.now(1, 1) = -p.gamma_q - emq * power / p.E_q;
    jac.now(1, 2) = -2.0 * one_m_emq * u / p.E_q;
    jac.now(1, 3) = -2.0 * one_m_emq * v / p.E_q;
    // field rows
    jac.now(2, 2) = -p.gamma;
    jac.now(3, 3) = -p.gamma;

    const cplx c = p.gamma * std::sqrt(p.kappa) * field_gain(p, delayed.g, delayed.q);
    const cplx dg = c * cplx(1.0, -p.eta_g) / 2.0 * delayed.a;
    const cplx dq = -c * cplx(1.0, -p.eta_q) / 2.0 * delayed.a;
    jac.delayed(2, 0) = dg.real();
    jac.delayed(3, 0) = dg.imag();
    jac.delayed(2, 1) = dq.real();
    jac.delayed(3, 1) = dq.imag();
    jac.delayed(2, 2) = c.real();
    jac.delayed(2, 3) = -c.imag();
    jac.delayed(3, 2) = c.imag();
    jac.delayed(3, 3) = c.real();
    return jac;
}

double max_abs_difference(const NetworkState& x, const NetworkState& y) {
    double m = 0.0;
    for (std::size_t k = 0; k < std::min(x.size(), y.size()); ++k) {
        m = std::max({m, std::abs(x[k].g - y[k].g), std::abs(x[k].q - y[k].q),
                      std::abs(x[k].a - y[k].a)});
    }
    return m;
}

}  // namespace mlring
