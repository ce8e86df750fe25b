#pragma once

#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "mlring/params.hpp"

namespace mlring {

using cplx = std::complex<double>;

/// State of one laser: saturable gain g, saturable loss q, complex field a.
struct NodeState {
    double g = 0.0;
    double q = 0.0;
    cplx a{0.0, 0.0};
};

using NetworkState = std::vector<NodeState>;

/// Past of the network on [-T, 0]; called with theta in that interval.
using HistorySegment = std::function<NetworkState(double theta)>;

/// Right-hand side of the single-laser delay equations with g0 replaced by alpha.
NodeState node_rhs(const LaserParams& p, double alpha, const NodeState& now,
                   const NodeState& delayed);

/// Node k receives C (x^{k-1} + x^{k+1}), C = diag(0, 0, e^{i psi}). No eta factor.
NetworkState apply_coupling(const LaserParams& p, const NetworkState& x);

/// Matrix of apply_coupling in the real chart (4n x 4n). Requires n >= 3.
Eigen::MatrixXd coupling_matrix(const LaserParams& p);

NetworkState network_rhs(const LaserParams& p, double alpha, const NetworkState& now,
                         const NetworkState& delayed);

/// Uses history(-T) as the delayed argument of every node.
NetworkState network_rhs(const LaserParams& p, double alpha, const NetworkState& now,
                         const HistorySegment& history);

/// Every node at (alpha/gamma_g, q0/gamma_q, 0).
NetworkState trivial_equilibrium(const LaserParams& p, double alpha);

// Real chart (g, q, Re a, Im a).
Eigen::Vector4d to_chart(const NodeState& x);
NodeState node_from_chart(const Eigen::Vector4d& v);
Eigen::VectorXd to_chart(const NetworkState& x);
NetworkState network_from_chart(const Eigen::VectorXd& v);

/// e^{tau J} in the real chart: identity on (g, q), rotation by tau on (Re a, Im a).
Eigen::Matrix4d phase_rotation(double tau);
/// The generator J itself.
Eigen::Matrix4d generator_J();

/// Partial derivatives of node_rhs in the real chart.
struct NodeJacobian {
    Eigen::Matrix4d now;      ///< with respect to the instantaneous state
    Eigen::Matrix4d delayed;  ///< with respect to the delayed state
};

NodeJacobian node_jacobian(const LaserParams& p, double alpha, const NodeState& now,
                           const NodeState& delayed);

/// exp(((1 - i eta_g) g - (1 - i eta_q) q) / 2), the gain/loss factor of the field equation.
cplx field_gain(const LaserParams& p, double g, double q);

double max_abs_difference(const NetworkState& x, const NetworkState& y);

}  // namespace mlring
