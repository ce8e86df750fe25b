#include "mlring/bifurcation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace mlring {

namespace {

constexpr double kPi = std::numbers::pi;

// Phase mismatch of the center equation on frequency branch s at alpha.
// Returns false where the square root is not real.
struct BranchEval {
    double w = 0.0;
    double mismatch = 0.0;  // wrapped to (-pi, pi]
};

bool eval_branch(const LaserParams& p, int j, int s, double alpha, BranchEval& out) {
    const cplx c = coupling_coefficient(p, j);
    const double A = p.gamma - c.real();
    const double R = p.gamma * std::sqrt(p.kappa) * std::exp(x_alpha(p, alpha));
    const double disc = R * R - A * A;
    if (disc < 0.0) return false;
    const double root = std::sqrt(disc);
    out.w = c.imag() + s * root;
    const double phi = y_alpha(p, alpha) - out.w * p.T;
    const double theta = std::atan2(s * root, A);
    out.mismatch = std::remainder(phi - theta, 2.0 * kPi);
    return true;
}

// Newton on the complex center equation in (alpha, w).
void polish_center(const LaserParams& p, int j, double& alpha, double& w) {
    const cplx c = coupling_coefficient(p, j);
    const double k = p.gamma * std::sqrt(p.kappa);
    const double xp = 1.0 / (2.0 * p.gamma_g);
    const double yp = -p.eta_g / (2.0 * p.gamma_g);
    for (int it = 0; it < 8; ++it) {
        const cplx e = k * std::exp(cplx(x_alpha(p, alpha), y_alpha(p, alpha) - w * p.T));
        const cplx g = cplx(0.0, w) + p.gamma - c - e;
        const cplx da = -e * cplx(xp, yp);
        const cplx dw = cplx(0.0, 1.0) + e * cplx(0.0, p.T);
        Eigen::Matrix2d J;
        J << da.real(), dw.real(), da.imag(), dw.imag();
        const Eigen::Vector2d step = J.partialPivLu().solve(Eigen::Vector2d(g.real(), g.imag()));
        alpha -= step(0);
        w -= step(1);
        if (std::abs(step(0)) < 1e-16 && std::abs(step(1)) < 1e-13) break;
    }
}

}  // namespace

double center_threshold(const LaserParams& p, int j) {
    const double A = std::abs(p.gamma - coupling_coefficient(p, j).real());
    const double x_th = std::log(A / (p.gamma * std::sqrt(p.kappa)));
    return 2.0 * p.gamma_g * (x_th + p.q0 / (2.0 * p.gamma_q));
}

double center_residual(const LaserParams& p, int j, double alpha, double w) {
    const cplx c = coupling_coefficient(p, j);
    const cplx e = p.gamma * std::sqrt(p.kappa) *
                   std::exp(cplx(x_alpha(p, alpha), y_alpha(p, alpha) - w * p.T));
    return std::abs(cplx(0.0, w) + p.gamma - c - e);
}

double r_prime(const LaserParams& p, int j, double alpha0, double w0) {
    (void)alpha0;
    const cplx c = coupling_coefficient(p, j);
    const double A = p.gamma - c.real();
    const double B = w0 - c.imag();
    const double T = p.T;
    const double xp = 1.0 / (2.0 * p.gamma_g);
    const double yp = -p.eta_g / (2.0 * p.gamma_g);
    const double num = (A * A + B * B) * T * xp + A * xp - B * yp;
    const double den = (1.0 + A * T) * (1.0 + A * T) + B * B * T * T;
    return num / den;
}

CenterSearch find_centers(const LaserParams& p, double alpha_lo, double alpha_hi, int j,
                          double grid_step) {
    CenterSearch out;
    if (!(alpha_hi > alpha_lo)) {
        out.diagnostic = "empty alpha range";
        return out;
    }
    const double th = center_threshold(p, j);
    double start = alpha_lo;
    if (th > alpha_lo) {
        out.skipped.push_back({alpha_lo, std::min(th, alpha_hi)});
        start = th;
    }
    if (start >= alpha_hi) {
        out.diagnostic = "frequency square root is not real anywhere in the range";
        return out;
    }
    const cplx c = coupling_coefficient(p, j);
    const long steps = std::max(1L, static_cast<long>(std::ceil((alpha_hi - start) / grid_step)));
    const double h = (alpha_hi - start) / static_cast<double>(steps);

    for (int s : {+1, -1}) {
        BranchEval prev;
        double a_prev = start;
        // nudge off the threshold so the square root is real
        bool have_prev = eval_branch(p, j, s, a_prev, prev) ||
                         eval_branch(p, j, s, a_prev = start + 1e-15, prev);
        for (long i = 1; i <= steps; ++i) {
            const double a = start + h * static_cast<double>(i);
            BranchEval cur;
            if (!eval_branch(p, j, s, a, cur)) {
                have_prev = false;
                continue;
            }
            if (have_prev) {
                const bool crosses = (prev.mismatch <= 0.0 && cur.mismatch > 0.0) ||
                                     (prev.mismatch >= 0.0 && cur.mismatch < 0.0);
                // a jump across +-pi is a wrap, not a root
                if (crosses && std::abs(prev.mismatch - cur.mismatch) < kPi) {
                    double lo = a_prev, hi = a;
                    BranchEval flo = prev;
                    while (hi - lo > 1e-12 * std::max(1.0, std::abs(hi))) {
                        const double mid = 0.5 * (lo + hi);
                        BranchEval fm;
                        if (!eval_branch(p, j, s, mid, fm)) {
                            lo = mid;
                            continue;
                        }
                        if ((fm.mismatch <= 0.0) == (flo.mismatch <= 0.0)) {
                            lo = mid;
                            flo = fm;
                        } else {
                            hi = mid;
                        }
                    }
                    Center cn;
                    cn.j = j;
                    cn.alpha0 = 0.5 * (lo + hi);
                    BranchEval fe;
                    eval_branch(p, j, s, cn.alpha0, fe);
                    cn.w0 = fe.w;
                    polish_center(p, j, cn.alpha0, cn.w0);
                    cn.residual = center_residual(p, j, cn.alpha0, cn.w0);
                    cn.r_prime = r_prime(p, j, cn.alpha0, cn.w0);
                    cn.transversal = std::abs(cn.r_prime) > 1e-12;
                    cn.gamma_condition = p.gamma > c.real();
                    cn.frequency_condition = cn.w0 > c.imag();
                    out.centers.push_back(cn);
                }
            }
            prev = cur;
            a_prev = a;
            have_prev = true;
        }
    }
    std::sort(out.centers.begin(), out.centers.end(),
              [](const Center& a, const Center& b) { return a.alpha0 < b.alpha0; });
    // the two frequency branches meet at the threshold; drop duplicates there
    auto last = std::unique(out.centers.begin(), out.centers.end(), [](const Center& a, const Center& b) {
        return std::abs(a.alpha0 - b.alpha0) < 1e-11 && std::abs(a.w0 - b.w0) < 1e-6;
    });
    out.centers.erase(last, out.centers.end());
    return out;
}

std::vector<Center> find_all_centers(const LaserParams& p, double alpha_lo, double alpha_hi,
                                     double grid_step) {
    std::vector<Center> all;
    for (int j = 0; j <= p.n / 2; ++j) {
        auto cs = find_centers(p, alpha_lo, alpha_hi, j, grid_step).centers;
        all.insert(all.end(), cs.begin(), cs.end());
    }
    std::sort(all.begin(), all.end(),
              [](const Center& a, const Center& b) { return a.alpha0 < b.alpha0; });
    return all;
}

BranchPrediction classify_equilibrium_hopf(const LaserParams& p, const Center& c) {
    BranchPrediction bp;
    bp.alpha0 = c.alpha0;
    bp.source = "equilibrium";
    const int r = p.n / 2;
    bp.component = {Ambient::equilibrium(), c.j, (c.j == 0 || c.j == r) ? Sign::None : Sign::Plus};
    if (!c.transversal) {
        bp.withheld = true;
        bp.reason = "center is not transversal";
        return bp;
    }
    const int j = c.j;
    bp.crossing = crossing_number([&](double a) { return quasi_poly_equilibrium(p, a, j); },
                                  c.alpha0, c.w0, 0.5);
    bp.crossing.component = bp.component;
    bp.conditions.nonzero_crossing = bp.crossing.t != 0;
    if (!bp.conditions.nonzero_crossing) {
        bp.withheld = true;
        bp.reason = "zero crossing number";
        return bp;
    }
    for (auto& t : catalog_types(Ambient::equilibrium(), j)) {
        const int count = branch_count(t);
        bp.orbit_types.push_back({std::move(t), count});
    }
    return bp;
}

double center_deviation(const LaserParams& p, const std::vector<double>& targets,
                        std::vector<double>* alphas) {
    double lo = std::numeric_limits<double>::infinity();
    for (int j = 0; j <= p.n / 2; ++j) lo = std::min(lo, center_threshold(p, j));
    const double hi = std::max(lo, targets.empty() ? lo : targets.back()) + 2e-3;
    const auto cs = find_all_centers(p, lo, hi, 1e-7);
    if (alphas) {
        alphas->clear();
        for (std::size_t i = 0; i < std::min(cs.size(), targets.size()); ++i) {
            alphas->push_back(cs[i].alpha0);
        }
    }
    if (cs.size() < targets.size()) return std::numeric_limits<double>::infinity();
    double dev = 0.0;
    for (std::size_t i = 0; i < targets.size(); ++i) {
        dev = std::max(dev, std::abs(cs[i].alpha0 - targets[i]));
    }
    return dev;
}

PsiCalibration calibrate_psi_centers(const LaserParams& p, const std::vector<double>& targets,
                                     double lo, double hi, int n) {
    LaserParams q = p;
    auto f = [&](double psi) {
        q.psi = psi;
        return center_deviation(q, targets);
    };
    n = std::max(n, 2);
    double best = lo, fbest = std::numeric_limits<double>::infinity();
    const double step = (hi - lo) / (n - 1);
    for (int i = 0; i < n; ++i) {
        const double psi = lo + step * i;
        const double v = f(psi);
        if (v < fbest) {
            fbest = v;
            best = psi;
        }
    }
    // golden-section refinement inside the neighbouring grid cells
    double a = std::max(lo, best - step), b = std::min(hi, best + step);
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double c1 = b - g * (b - a), c2 = a + g * (b - a);
    double f1 = f(c1), f2 = f(c2);
    for (int it = 0; it < 40 && b - a > 1e-6; ++it) {
        if (f1 < f2) {
            b = c2;
            c2 = c1;
            f2 = f1;
            c1 = b - g * (b - a);
            f1 = f(c1);
        } else {
            a = c1;
            c1 = c2;
            f1 = f2;
            c2 = a + g * (b - a);
            f2 = f(c2);
        }
    }
    for (auto [x, fx] : {std::pair{c1, f1}, std::pair{c2, f2}}) {
        if (fx < fbest) {
            fbest = fx;
            best = x;
        }
    }
    PsiCalibration cal;
    cal.psi = best;
    q.psi = best;
    cal.max_deviation = center_deviation(q, targets, &cal.center_alphas);
    return cal;
}

}  // namespace mlring
