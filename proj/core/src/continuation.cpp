#include "mlring/bifurcation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace mlring {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kAlphaScale = 100.0;

using Vec5 = Eigen::Matrix<double, 5, 1>;
using Vec4 = Eigen::Vector4d;
using Jac45 = Eigen::Matrix<double, 4, 5>;

// z = (g, q, P = a^2, w, 100 alpha), a real and positive.
struct Reduced {
    const LaserParams& p;
    cplx c;  // coupling coefficient of the twist

    Reduced(const LaserParams& pp, int l) : p(pp), c(coupling_coefficient(pp, l)) {}

    cplx gain_term(const Vec5& z) const {
        return p.gamma * std::sqrt(p.kappa) * field_gain(p, z(0), z(1)) *
               std::polar(1.0, -z(3) * p.T);
    }

    Vec4 F(const Vec5& z) const {
        const double g = z(0), q = z(1), P = z(2), w = z(3), alpha = z(4) / kAlphaScale;
        const cplx G = gain_term(z);
        const cplx f = -p.gamma - cplx(0.0, w) + G + c;
        Vec4 r;
        r(0) = alpha - p.gamma_g * g - std::exp(-q) * std::expm1(g) * P / p.E_g;
        r(1) = p.q0 - p.gamma_q * q + std::expm1(-q) * P / p.E_q;
        r(2) = f.real();
        r(3) = f.imag();
        return r;
    }

    Jac45 DF(const Vec5& z) const {
        const double g = z(0), q = z(1), P = z(2);
        const cplx G = gain_term(z);
        const cplx dg = G * cplx(1.0, -p.eta_g) / 2.0;
        const cplx dq = -G * cplx(1.0, -p.eta_q) / 2.0;
        const cplx dw = -cplx(0.0, p.T) * G - cplx(0.0, 1.0);
        Jac45 J = Jac45::Zero();
        J(0, 0) = -p.gamma_g - std::exp(g - q) * P / p.E_g;
        J(0, 1) = std::exp(-q) * std::expm1(g) * P / p.E_g;
        J(0, 2) = -std::exp(-q) * std::expm1(g) / p.E_g;
        J(0, 4) = 1.0 / kAlphaScale;
        J(1, 1) = -p.gamma_q - std::exp(-q) * P / p.E_q;
        J(1, 2) = std::expm1(-q) / p.E_q;
        J(2, 0) = dg.real();
        J(3, 0) = dg.imag();
        J(2, 1) = dq.real();
        J(3, 1) = dq.imag();
        J(2, 3) = dw.real();
        J(3, 3) = dw.imag();
        return J;
    }
};

Vec5 tangent(const Jac45& J) {
    Eigen::JacobiSVD<Eigen::Matrix<double, 5, 5>> svd;
    Eigen::Matrix<double, 5, 5> sq = Eigen::Matrix<double, 5, 5>::Zero();
    sq.topRows<4>() = J;
    svd.compute(sq, Eigen::ComputeFullV);
    return svd.matrixV().col(4);
}

// Newton on F = 0 plus one linear constraint n . (z - z_ref) = 0.
bool newton_constrained(const Reduced& red, Vec5& z, const Vec5& nrm, const Vec5& z_ref,
                        double tol, int* iters = nullptr) {
    for (int it = 0; it < 15; ++it) {
        Eigen::Matrix<double, 5, 5> A;
        A.topRows<4>() = red.DF(z);
        A.row(4) = nrm.transpose();
        Vec5 rhs;
        rhs.head<4>() = red.F(z);
        rhs(4) = nrm.dot(z - z_ref);
        const Vec5 dz = A.fullPivLu().solve(rhs);
        if (!dz.allFinite()) return false;
        z -= dz;
        if (dz.cwiseAbs().maxCoeff() < 1e-13 || red.F(z).cwiseAbs().maxCoeff() < tol * 1e-2) {
            if (iters) *iters = it + 1;
            return red.F(z).cwiseAbs().maxCoeff() < tol;
        }
    }
    if (iters) *iters = 15;
    return red.F(z).cwiseAbs().maxCoeff() < tol;
}

Vec5 to_z(const RelativeEquilibrium& re) {
    Vec5 z;
    z << re.node.g, re.node.q, std::norm(re.node.a), re.w, kAlphaScale * re.alpha;
    return z;
}

RelativeEquilibrium from_z(const LaserParams& p, const Vec5& z, int l) {
    RelativeEquilibrium re;
    re.alpha = z(4) / kAlphaScale;
    re.w = z(3);
    re.twist_l = l;
    re.node.g = z(0);
    re.node.q = z(1);
    re.node.a = std::sqrt(std::max(z(2), 0.0));
    re.residual = releq_residual(p, re.alpha, re.w, re.node, l);
    if (std::abs(re.node.a) > 0.0) {
        re.symmetry = classify_relative_equilibrium(reconstruct(p, re));
        re.regular = regularity_check(p, re).pass;
    }
    return re;
}

Vec5 alpha_axis() {
    Vec5 e = Vec5::Zero();
    e(4) = 1.0;
    return e;
}

std::string branch_id(int l, int n) { return ambient_for_twist(l, n).name(); }

Branch run(const LaserParams& p, Vec5 z, Vec5 t, int l, double alpha_lo, double alpha_hi,
           const ContinuationOptions& opt, bool record_first) {
    const Reduced red(p, l);
    Branch br;
    br.id = branch_id(l, p.n);
    br.twist_l = l;
    if (record_first) br.points.push_back(from_z(p, z, l));
    const double s_lo = kAlphaScale * alpha_lo, s_hi = kAlphaScale * alpha_hi;
    const double ds_cap = kAlphaScale * opt.max_dalpha;
    double h = opt.initial_step;
    while (true) {
        if (static_cast<int>(br.points.size()) >= opt.max_points) {
            br.termination = "maximum number of points reached";
            break;
        }
        double hs = h;
        if (std::abs(t(4)) * hs > ds_cap) hs = ds_cap / std::abs(t(4));
        Vec5 pred = z + hs * t;
        // crossing the end of the range: finish exactly on the boundary
        if (pred(4) > s_hi || pred(4) < s_lo) {
            const double target = pred(4) > s_hi ? s_hi : s_lo;
            Vec5 ref = z + ((target - z(4)) / t(4)) * t;
            Vec5 zz = ref;
            if (newton_constrained(red, zz, alpha_axis(), ref, opt.newton_tol) && zz(2) > 0.0) {
                br.points.push_back(from_z(p, zz, l));
            }
            break;
        }
        Vec5 zn = pred;
        int iters = 0;
        const bool ok = newton_constrained(red, zn, t, pred, opt.newton_tol, &iters) &&
                        (zn - z).norm() < 4.0 * hs + 1e-12;
        if (!ok) {
            h *= 0.5;
            if (h < opt.min_step) {
                br.termination = "step size underflow";
                break;
            }
            continue;
        }
        if (zn(2) <= 0.0) {
            br.termination = "branch returned to the equilibrium";
            break;
        }
        Vec5 tn = tangent(red.DF(zn));
        if (tn.dot(t) < 0.0) tn = -tn;
        z = zn;
        t = tn;
        br.points.push_back(from_z(p, z, l));
        if (iters <= 3) h = std::min(h * 1.5, 0.1);
    }
    return br;
}

}  // namespace

Branch continue_releq(const LaserParams& p, const Center& seed, int twist_l, double alpha_lo,
                      double alpha_hi, const ContinuationOptions& opt) {
    const Reduced red(p, twist_l);
    Vec5 z;
    z << seed.alpha0 / p.gamma_g, p.q0 / p.gamma_q, 0.0, seed.w0, kAlphaScale * seed.alpha0;
    // sharpen the center as a point of the reduced system
    newton_constrained(red, z, Vec5::Unit(2), z, opt.newton_tol);
    Vec5 t = tangent(red.DF(z));
    if (t(2) < 0.0) t = -t;
    return run(p, z, t, twist_l, alpha_lo, alpha_hi, opt, false);
}

Branch continue_releq(const LaserParams& p, const RelativeEquilibrium& seed, double alpha_lo,
                      double alpha_hi, const ContinuationOptions& opt) {
    const Reduced red(p, seed.twist_l);
    Vec5 z = to_z(seed);
    Vec5 t = tangent(red.DF(z));
    if (t(4) < 0.0) t = -t;
    return run(p, z, t, seed.twist_l, alpha_lo, alpha_hi, opt, true);
}

RelativeEquilibrium releq_between(const LaserParams& p, const Branch& branch, std::size_t i,
                                  double s) {
    if (i + 1 >= branch.points.size()) throw NumericalError("releq_between: index out of range");
    const int l = branch.twist_l;
    const Reduced red(p, l);
    const Vec5 z0 = to_z(branch.points[i]);
    const Vec5 z1 = to_z(branch.points[i + 1]);
    const Vec5 ref = z0 + s * (z1 - z0);
    Vec5 z = ref;
    if (!newton_constrained(red, z, z1 - z0, ref, 1e-10)) {
        throw NumericalError("releq_between: Newton failed on segment " + std::to_string(i));
    }
    return from_z(p, z, l);
}

RelativeEquilibrium releq_at(const LaserParams& p, const Branch& branch, double alpha) {
    const auto& pts = branch.points;
    if (pts.empty()) throw NumericalError("releq_at: empty branch");
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double a0 = pts[i].alpha, a1 = pts[i + 1].alpha;
        if ((alpha - a0) * (alpha - a1) <= 0.0 && a0 != a1) {
            const Reduced red(p, branch.twist_l);
            const Vec5 z0 = to_z(pts[i]), z1 = to_z(pts[i + 1]);
            const Vec5 ref = z0 + ((alpha - a0) / (a1 - a0)) * (z1 - z0);
            Vec5 z = ref;
            if (newton_constrained(red, z, alpha_axis(), ref, 1e-10)) {
                return from_z(p, z, branch.twist_l);
            }
        }
    }
    throw NumericalError("releq_at: alpha " + std::to_string(alpha) + " is not on the branch");
}

NetworkState reconstruct(const LaserParams& p, const RelativeEquilibrium& re) {
    NetworkState x(static_cast<std::size_t>(p.n), re.node);
    for (int k = 0; k < p.n; ++k) {
        x[k].a *= std::polar(1.0, 2.0 * kPi * re.twist_l * k / p.n);
    }
    return x;
}

double full_releq_residual(const LaserParams& p, const RelativeEquilibrium& re) {
    const NetworkState x = reconstruct(p, re);
    NetworkState d = x;
    for (auto& nd : d) nd.a *= std::polar(1.0, -re.w * p.T);
    const NetworkState f = network_rhs(p, re.alpha, x, d);
    double res = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const cplx fa = f[k].a - cplx(0.0, re.w) * x[k].a;
        res = std::max({res, std::abs(f[k].g), std::abs(f[k].q), std::abs(fa)});
    }
    return res;
}

RegularityMatrix regularity_matrix(const LaserParams& p, const RelativeEquilibrium& re) {
    NodeState delayed = re.node;
    delayed.a *= std::polar(1.0, -re.w * p.T);
    const NodeJacobian jac = node_jacobian(p, re.alpha, re.node, delayed);
    const cplx c = coupling_coefficient(p, re.twist_l);
    Eigen::Matrix4d cm = Eigen::Matrix4d::Zero();
    cm(2, 2) = c.real();
    cm(2, 3) = -c.imag();
    cm(3, 2) = c.imag();
    cm(3, 3) = c.real();
    RegularityMatrix m;
    m.rightCols<4>() = jac.now + jac.delayed * phase_rotation(-re.w * p.T) + cm - re.w * generator_J();
    const cplx dw = -cplx(0.0, p.T) * p.gamma * std::sqrt(p.kappa) *
                        field_gain(p, re.node.g, re.node.q) * re.node.a *
                        std::polar(1.0, -re.w * p.T) -
                    cplx(0.0, 1.0) * re.node.a;
    m.col(0) << 0.0, 0.0, dw.real(), dw.imag();
    return m;
}

RegularityReport regularity_from_matrix(const RegularityMatrix& m, double tol) {
    RegularityReport rep;
    Eigen::JacobiSVD<RegularityMatrix> svd(m);
    rep.singular_values = svd.singularValues();
    const double s1 = rep.singular_values(0);
    rep.ratio = s1 > 0.0 ? rep.singular_values(3) / s1 : 0.0;
    rep.pass = rep.ratio > tol;
    return rep;
}

RegularityReport regularity_check(const LaserParams& p, const RelativeEquilibrium& re, double tol) {
    RegularityReport rep = regularity_from_matrix(regularity_matrix(p, re), tol);
    const cplx a = re.node.a;
    const cplx term = -cplx(0.0, p.T) * p.gamma * std::sqrt(p.kappa) *
                      field_gain(p, re.node.g, re.node.q) * a * std::polar(1.0, -re.w * p.T);
    rep.scalar_test = term.imag() - a.real();
    rep.scalar_test_pass = std::abs(rep.scalar_test) > tol * std::max(1.0, std::abs(a));
    return rep;
}

}  // namespace mlring
