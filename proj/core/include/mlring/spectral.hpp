#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mlring/model.hpp"
#include "mlring/symmetry.hpp"

namespace mlring {

/// Delta(lambda) = det(M0 + M1 exp(-lambda delay) - lambda I).
struct CharMatrix {
    Eigen::MatrixXcd M0;
    Eigen::MatrixXcd M1;
    double delay = 1.0;

    int d() const { return static_cast<int>(M0.rows()); }
    Eigen::MatrixXcd matrix(cplx lambda) const;
    cplx det(cplx lambda) const;
    /// Delta'(lambda) / Delta(lambda), from the LU factors.
    cplx log_derivative(cplx lambda) const;
};

struct Rect {
    double re_lo = 0.0;
    double re_hi = 0.0;
    double im_lo = 0.0;
    double im_hi = 0.0;
};

struct RootCountResult {
    int count = 0;
    Rect region;
    double winding_residual = 0.0;
};

/// Upper bound on |lambda| for every root with Re lambda >= 0.
double apriori_bound(const CharMatrix& cm);

/// Zeros of Delta inside the rectangle, by the argument principle. With deflate_radius > 0
/// and re_lo == 0 the left edge detours around the origin through the right half-plane,
/// so roots within that radius of 0 are not counted. Throws NumericalError when the
/// contour passes through a root.
RootCountResult count_roots_in_rect(const CharMatrix& cm, const Rect& rect,
                                    double deflate_radius = 0.0);

/// Roots in (0, re_max) x (-im_max, im_max); zero bounds mean the a-priori bound.
/// A contour that hits a root is retried with slightly shifted edges before giving up.
RootCountResult count_rhp_roots(const CharMatrix& cm, double re_max = 0.0, double im_max = 0.0,
                                double deflate_radius = 0.0);

/// Newton iteration on Delta from lambda0. Returns false if it fails to converge.
bool polish_root(const CharMatrix& cm, cplx& lambda, int max_iter = 60, double tol = 1e-13);

// Helpers for the equilibrium quasi-polynomials.
double x_alpha(const LaserParams& p, double alpha);
double y_alpha(const LaserParams& p, double alpha);
/// a_j + i b_j = 2 eta e^{i psi} cos(2 pi j / n).
cplx coupling_coefficient(const LaserParams& p, int j);

/// Scalar field quasi-polynomial of component j at the trivial equilibrium:
/// lambda + gamma - gamma sqrt(kappa) e^{x + iy} e^{-lambda T} - (a_j + i b_j), up to sign.
CharMatrix quasi_poly_equilibrium(const LaserParams& p, double alpha, int j);

/// Residual (max-norm) of the single-node rotating-wave equation with twist l.
double releq_residual(const LaserParams& p, double alpha, double w, const NodeState& x0, int twist_l);

/// 4x4 characteristic matrix of one component at a relative equilibrium, in the
/// complexified real chart. Throws NumericalError if x0 is not a relative equilibrium.
CharMatrix linearization_releq(const LaserParams& p, double alpha, double w, const NodeState& x0,
                               const IsotypicalIndex& idx, double residual_tol = 1e-9);

/// Unreduced 4n x 4n characteristic matrix in the rotating frame.
CharMatrix full_linearization_releq(const LaserParams& p, double alpha, double w,
                                    const NodeState& x0, int twist_l);

enum class Convention { RealDimension, PerComponent };

std::string to_string(Convention c);
Convention parse_convention(const std::string& s);

/// Unstable count of the equilibrium on component j (0..n/2).
/// RealDimension: 2c for j in {0, n/2}, 4c otherwise. PerComponent: c or 2c.
int unstable_dimension(const LaserParams& p, double alpha, int j, Convention convention);

struct CrossingRecord {
    double alpha0 = 0.0;
    double w0 = 0.0;
    IsotypicalIndex component;
    int t = 0;
    double delta = 0.0;  ///< half-width of the alpha bracket used
};

using CharFamily = std::function<CharMatrix(double alpha)>;

/// t = (roots in local box at alpha0 - delta) - (roots at alpha0 + delta), local box
/// (0, window) x (w0 - window, w0 + window). Throws NumericalError if no root near i w0
/// or the root never leaves the axis.
CrossingRecord crossing_number(const CharFamily& family, double alpha0, double w0, double window);

struct SweepRow {
    double alpha = 0.0;
    std::string component;
    int count = 0;
    Convention convention = Convention::RealDimension;
    double winding_residual = 0.0;
};

/// Equilibrium unstable counts for every j at every alpha (parallel over alpha).
std::vector<SweepRow> equilibrium_sweep(const LaserParams& p, const std::vector<double>& alphas,
                                        Convention convention, int threads = 1);

}  // namespace mlring
