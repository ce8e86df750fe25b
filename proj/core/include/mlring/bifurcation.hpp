#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "mlring/model.hpp"
#include "mlring/spectral.hpp"
#include "mlring/symmetry.hpp"

namespace mlring {

// ---------------------------------------------------------------- centers

struct Center {
    double alpha0 = 0.0;
    double w0 = 0.0;
    int j = 0;
    bool transversal = false;
    double r_prime = 0.0;
    bool gamma_condition = false;      ///< gamma > a_j
    bool frequency_condition = false;  ///< w0 > b_j
    double residual = 0.0;             ///< |complex center equation|
};

struct CenterSearch {
    std::vector<Center> centers;
    /// Sub-intervals of the requested range where the frequency square root is not real.
    std::vector<std::pair<double, double>> skipped;
    std::string diagnostic;
};

/// Roots of the center equation for component j in [alpha_lo, alpha_hi], both frequency
/// branches, sorted by alpha. Grid bracketing at `grid_step`, bisection, then a Newton polish
/// of (alpha, w) on the complex equation.
CenterSearch find_centers(const LaserParams& p, double alpha_lo, double alpha_hi, int j,
                          double grid_step = 1e-7);

/// All components j = 0..n/2 merged and sorted by alpha.
std::vector<Center> find_all_centers(const LaserParams& p, double alpha_lo, double alpha_hi,
                                     double grid_step = 1e-7);

/// Closed-form d(Re lambda)/d alpha at a center.
double r_prime(const LaserParams& p, int j, double alpha0, double w0);

/// |i w + gamma - (a_j + i b_j) - gamma sqrt(kappa) e^{x + i(y - wT)}|.
double center_residual(const LaserParams& p, int j, double alpha, double w);

/// Lowest pump value where component j can have a center at all.
double center_threshold(const LaserParams& p, int j);

// ------------------------------------------------------------ predictions

struct OrbitPrediction {
    TwistedOrbitType type;
    int branches = 0;
};

struct ConditionsReport {
    bool maximality = true;        ///< (i), holds by construction of the catalogs
    bool nonzero_crossing = false; ///< (ii)
    bool sign_consistency = true;  ///< (iii)
    std::string note;
};

struct BranchPrediction {
    double alpha0 = 0.0;
    std::string source;  ///< "equilibrium" or the branch id
    IsotypicalIndex component;
    std::vector<OrbitPrediction> orbit_types;
    CrossingRecord crossing;
    ConditionsReport conditions;
    bool withheld = false;
    std::string reason;
};

BranchPrediction classify_equilibrium_hopf(const LaserParams& p, const Center& c);

// ------------------------------------------------------- relative equilibria

struct RelativeEquilibrium {
    double alpha = 0.0;
    double w = 0.0;
    NodeState node;  ///< Im a = 0, a > 0
    int twist_l = 0;
    TwistedOrbitType symmetry;
    double residual = 0.0;
    bool regular = true;
};

struct Branch {
    std::string id;
    int twist_l = 0;
    std::vector<RelativeEquilibrium> points;
    std::string termination;  ///< empty when the requested range was covered
    std::vector<std::string> warnings;
};

struct ContinuationOptions {
    double max_dalpha = 1e-4;  ///< cap on |alpha| change per step
    double initial_step = 1e-3;
    double min_step = 1e-10;
    int max_points = 100000;
    double newton_tol = 1e-11;
};

Branch continue_releq(const LaserParams& p, const Center& seed, int twist_l, double alpha_lo,
                      double alpha_hi, const ContinuationOptions& opt = {});
Branch continue_releq(const LaserParams& p, const RelativeEquilibrium& seed, double alpha_lo,
                      double alpha_hi, const ContinuationOptions& opt = {});

/// Point at a given alpha by Newton from the nearest branch point.
RelativeEquilibrium releq_at(const LaserParams& p, const Branch& branch, double alpha);

/// Point on the arc between points i and i+1 at fraction s in [0, 1].
RelativeEquilibrium releq_between(const LaserParams& p, const Branch& branch, std::size_t i,
                                  double s);

/// Full n-node state x^k = e^{2 pi i l k / n} x^0 (field phase only).
NetworkState reconstruct(const LaserParams& p, const RelativeEquilibrium& re);

/// Max-norm residual of f(x, e^{-wJT} x) + eta C x - w J x over all nodes.
double full_releq_residual(const LaserParams& p, const RelativeEquilibrium& re);

struct RegularityReport {
    bool pass = false;
    Eigen::VectorXd singular_values;
    double ratio = 0.0;          ///< sigma_4 / sigma_1
    double scalar_test = 0.0;    ///< Im[-i T gamma sqrt(kappa) E a e^{-iwT}] - a
    bool scalar_test_pass = false;
};

using RegularityMatrix = Eigen::Matrix<double, 4, 5>;

/// [d/dw | d/dx] of the single-node reduced map in twisted coordinates.
RegularityMatrix regularity_matrix(const LaserParams& p, const RelativeEquilibrium& re);
RegularityReport regularity_from_matrix(const RegularityMatrix& m, double tol = 1e-8);
RegularityReport regularity_check(const LaserParams& p, const RelativeEquilibrium& re,
                                  double tol = 1e-8);

// ---------------------------------------------------------- branch scans

struct BranchEvent {
    double alpha = 0.0;
    IsotypicalIndex component;
    std::string type;  ///< "hopf" or "steady"
    double beta0 = 0.0;
    int t = 0;
    int count_before = 0;
    int count_after = 0;
    std::vector<OrbitPrediction> orbit_types;  ///< empty for steady events
    ConditionsReport conditions;
};

struct ScanOptions {
    double deflate_radius = 1e-5;
    double bisect_tol = 1e-6;
    double steady_radius = 1e-6;
    int threads = 1;
};

/// Per-point counts: counts[i][c] for branch point i and component c (U_0..U_r, halves summed).
struct CountProfile {
    std::vector<double> alpha;
    std::vector<std::vector<int>> counts;
};

/// Roots in the right half-plane of each Fourier block m = 0..n-1 at one relative equilibrium.
std::vector<int> block_counts(const LaserParams& p, const RelativeEquilibrium& re,
                              const Ambient& ambient, double deflate_radius = 1e-5);

/// Collapses block counts to U_0..U_r (blocks j and n-j summed).
std::vector<int> component_counts(const std::vector<int>& blocks);

CountProfile count_profile(const LaserParams& p, const Branch& branch, const Ambient& ambient,
                           const ScanOptions& opt = {});

std::vector<BranchEvent> hopf_scan_releq(const LaserParams& p, const Branch& branch,
                                         const Ambient& ambient, const ScanOptions& opt = {});
std::vector<BranchEvent> hopf_scan_releq(const LaserParams& p, const Branch& branch,
                                         const Ambient& ambient, const CountProfile& profile,
                                         const ScanOptions& opt = {});

/// Ambient symmetry of the branch with twist l, and the reverse map.
Ambient ambient_for_twist(int l, int n);

/// Branch of twist l seeded at the smallest center of component min(l, n-l).
Branch branch_from_center(const LaserParams& p, int twist_l, double alpha_hi,
                          const ContinuationOptions& opt = {});

// ------------------------------------------------------------- tables

struct TableColumn {
    double lo = 0.0;  ///< interval bounds in units of 1e-2 as printed
    double hi = 0.0;
};

struct TableData {
    int which = 0;
    std::vector<TableColumn> columns;
    std::vector<std::string> rows;        ///< V0..V4 or U0..U4
    std::vector<std::vector<int>> counts; ///< counts[row][col], -1 when unavailable
    std::vector<std::vector<char>> markers;  ///< '*' Hopf, '#' steady, ' ' none
    std::vector<int> totals;
    std::string diagnostic;
};

/// Interval grid of table 1..6.
std::vector<TableColumn> table_columns(int which);

/// Computes the table at interval midpoints. `psi_override` replaces p.psi.
TableData reproduce_table(int which, const LaserParams& p, std::optional<double> psi_override = {},
                          const ScanOptions& opt = {});

/// Number of differing integer cells (counts only) and the first few differences.
struct TableDiff {
    int mismatches = 0;
    int compared = 0;
    std::vector<std::string> details;
};

TableDiff diff_tables(const TableData& computed, const TableData& golden);

// -------------------------------------------------------- calibration

struct PsiCalibration {
    double psi = 0.0;
    double max_deviation = 0.0;
    std::vector<double> center_alphas;
};

/// Minimizes the worst deviation of the six smallest centers from `targets` over psi in
/// [lo, hi] with n grid samples followed by golden-section refinement.
PsiCalibration calibrate_psi_centers(const LaserParams& p, const std::vector<double>& targets,
                                     double lo, double hi, int n);

/// Worst deviation for one psi (helper exposed for reporting).
double center_deviation(const LaserParams& p, const std::vector<double>& targets,
                        std::vector<double>* alphas = nullptr);

}  // namespace mlring
