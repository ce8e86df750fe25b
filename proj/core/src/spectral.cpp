#include "mlring/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <thread>

namespace mlring {

namespace {

constexpr double kPi = std::numbers::pi;

// A contour piece parametrized on [0, 1].
struct Piece {
    cplx a, b;         // line from a to b, or arc endpoints
    bool arc = false;  // arc centered at 0 from angle t0 to t1
    double radius = 0.0, t0 = 0.0, t1 = 0.0;

    cplx at(double s) const {
        if (!arc) return a + (b - a) * s;
        return std::polar(radius, t0 + (t1 - t0) * s);
    }
    double length() const { return arc ? radius * std::abs(t1 - t0) : std::abs(b - a); }
};

struct ContourHit {};

double phase_step(cplx from, cplx to) { return std::arg(to / from); }

// Accumulated argument change of Delta along one piece.
double piece_winding(const CharMatrix& cm, const Piece& pc, double h0) {
    const int n0 = std::max(2, static_cast<int>(std::ceil(pc.length() / h0)));
    struct Seg {
        double s0, s1;
        cplx f0, f1;
        int depth;
    };
    auto eval = [&](double s) {
        const cplx v = cm.det(pc.at(s));
        if (!(std::isfinite(v.real()) && std::isfinite(v.imag())) || v == cplx(0.0)) {
            throw ContourHit{};
        }
        return v;
    };
    std::vector<cplx> vals(n0 + 1);
    for (int i = 0; i <= n0; ++i) vals[i] = eval(static_cast<double>(i) / n0);

    double total = 0.0;
    std::vector<Seg> stack;
    for (int i = n0 - 1; i >= 0; --i) {
        stack.push_back({static_cast<double>(i) / n0, static_cast<double>(i + 1) / n0, vals[i],
                         vals[i + 1], 0});
    }
    const double len = pc.length();
    while (!stack.empty()) {
        Seg sg = stack.back();
        stack.pop_back();
        const double sm = 0.5 * (sg.s0 + sg.s1);
        const cplx fm = eval(sm);
        const double d = phase_step(sg.f0, sg.f1);
        const double d1 = phase_step(sg.f0, fm);
        const double d2 = phase_step(fm, sg.f1);
        const bool consistent = std::abs(d1 + d2 - d) < 1e-9;
        if (consistent && std::abs(d) < kPi / 4) {
            total += d;
            continue;
        }
        if (sg.depth > 50 || (sg.s1 - sg.s0) * len < 1e-13) throw ContourHit{};
        stack.push_back({sm, sg.s1, fm, sg.f1, sg.depth + 1});
        stack.push_back({sg.s0, sm, sg.f0, fm, sg.depth + 1});
    }
    return total;
}

}  // namespace

Eigen::MatrixXcd CharMatrix::matrix(cplx lambda) const {
    Eigen::MatrixXcd a = M0 + M1 * std::exp(-lambda * delay);
    a.diagonal().array() -= lambda;
    return a;
}

cplx CharMatrix::det(cplx lambda) const {
    const int n = d();
    const cplx e = std::exp(-lambda * delay);
    if (n == 1) return M0(0, 0) + M1(0, 0) * e - lambda;
    if (n == 4) {
        Eigen::Matrix4cd a = M0 + M1 * e;
        a.diagonal().array() -= lambda;
        return a.determinant();
    }
    return matrix(lambda).partialPivLu().determinant();
}

cplx CharMatrix::log_derivative(cplx lambda) const {
    const cplx e = std::exp(-lambda * delay);
    Eigen::MatrixXcd da = -delay * e * M1;
    da.diagonal().array() -= 1.0;
    const Eigen::MatrixXcd a = matrix(lambda);
    return a.partialPivLu().solve(da).trace();
}

double apriori_bound(const CharMatrix& cm) { return cm.M0.norm() + cm.M1.norm() + 1.0; }

RootCountResult count_roots_in_rect(const CharMatrix& cm, const Rect& r, double deflate_radius) {
    const cplx bl(r.re_lo, r.im_lo), br(r.re_hi, r.im_lo), tr(r.re_hi, r.im_hi), tl(r.re_lo, r.im_hi);
    std::vector<Piece> pieces{{bl, br}, {br, tr}, {tr, tl}};
    const bool indent = deflate_radius > 0.0 && r.re_lo == 0.0 && r.im_lo < -deflate_radius &&
                        r.im_hi > deflate_radius && deflate_radius < r.re_hi;
    if (indent) {
        const cplx top(0.0, deflate_radius), bottom(0.0, -deflate_radius);
        pieces.push_back({tl, top});
        Piece arc;
        arc.arc = true;
        arc.radius = deflate_radius;
        arc.t0 = kPi / 2;
        arc.t1 = -kPi / 2;
        pieces.push_back(arc);
        pieces.push_back({bottom, bl});
    } else {
        pieces.push_back({tl, bl});
    }

    // e^{-lambda T} enters the determinant to the power rank(M1), which bounds the phase
    // rotation per unit length along the imaginary direction
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(cm.M1);
    lu.setThreshold(1e-12);
    const int rank = std::max<int>(1, static_cast<int>(lu.rank()));
    const double h0 = std::min(kPi / (4.0 * cm.delay * rank),
                               0.25 * std::max(r.re_hi - r.re_lo, r.im_hi - r.im_lo));
    double total = 0.0;
    try {
        for (const auto& pc : pieces) {
            const double h = pc.arc ? std::max(pc.length() / 8.0, 1e-300) : h0;
            total += piece_winding(cm, pc, h);
        }
    } catch (const ContourHit&) {
        throw NumericalError("argument principle: contour passes through a root");
    }
    const double turns = total / (2.0 * kPi);
    RootCountResult res;
    res.count = static_cast<int>(std::lround(turns));
    res.region = r;
    res.winding_residual = std::abs(turns - res.count);
    if (res.winding_residual >= 0.1 || res.count < 0) {
        throw NumericalError("argument principle: winding did not converge");
    }
    return res;
}

RootCountResult count_rhp_roots(const CharMatrix& cm, double re_max, double im_max,
                                double deflate_radius) {
    const double bound = apriori_bound(cm);
    if (re_max <= 0.0) re_max = bound;
    if (im_max <= 0.0) im_max = bound;
    Rect r{0.0, re_max, -im_max, im_max};
    for (int attempt = 0; attempt < 4; ++attempt) {
        try {
            return count_roots_in_rect(cm, r, deflate_radius);
        } catch (const NumericalError&) {
            r.re_hi *= 1.0 + 1e-7;
            r.im_lo *= 1.0 + 1.3e-7;
            r.im_hi *= 1.0 + 1.1e-7;
            // the indentation needs the left edge on the axis, so grow the detour instead
            if (deflate_radius > 0.0) deflate_radius *= 1.0 + 0.1 * (attempt + 1);
            else r.re_lo = (attempt + 1) * 1e-9;
        }
    }
    throw NumericalError("count_rhp_roots: a root sits on the contour");
}

bool polish_root(const CharMatrix& cm, cplx& lambda, int max_iter, double tol) {
    for (int it = 0; it < max_iter; ++it) {
        const cplx ld = cm.log_derivative(lambda);
        if (!(std::isfinite(ld.real()) && std::isfinite(ld.imag())) || ld == cplx(0.0)) {
            return std::abs(cm.det(lambda)) == 0.0;
        }
        cplx step = 1.0 / ld;
        const double cap = 1.0;
        if (std::abs(step) > cap) step *= cap / std::abs(step);
        lambda -= step;
        if (std::abs(step) < tol * std::max(1.0, std::abs(lambda))) return true;
    }
    return false;
}

double x_alpha(const LaserParams& p, double alpha) {
    return alpha / (2.0 * p.gamma_g) - p.q0 / (2.0 * p.gamma_q);
}

double y_alpha(const LaserParams& p, double alpha) {
    return p.eta_q * p.q0 / (2.0 * p.gamma_q) - p.eta_g * alpha / (2.0 * p.gamma_g);
}

cplx coupling_coefficient(const LaserParams& p, int j) {
    return 2.0 * p.eta * std::polar(1.0, p.psi) * std::cos(2.0 * kPi * j / p.n);
}

CharMatrix quasi_poly_equilibrium(const LaserParams& p, double alpha, int j) {
    CharMatrix cm;
    cm.M0 = Eigen::MatrixXcd::Constant(1, 1, -p.gamma + coupling_coefficient(p, j));
    cm.M1 = Eigen::MatrixXcd::Constant(
        1, 1, p.gamma * std::sqrt(p.kappa) * std::exp(cplx(x_alpha(p, alpha), y_alpha(p, alpha))));
    cm.delay = p.T;
    return cm;
}

double releq_residual(const LaserParams& p, double alpha, double w, const NodeState& x0,
                      int twist_l) {
    NodeState delayed = x0;
    delayed.a *= std::polar(1.0, -w * p.T);
    NodeState f = node_rhs(p, alpha, x0, delayed);
    f.a += coupling_coefficient(p, twist_l) * x0.a - cplx(0.0, w) * x0.a;
    return std::max({std::abs(f.g), std::abs(f.q), std::abs(f.a)});
}

CharMatrix linearization_releq(const LaserParams& p, double alpha, double w, const NodeState& x0,
                               const IsotypicalIndex& idx, double residual_tol) {
    const int l = idx.ambient.twist(p.n);
    const double res = releq_residual(p, alpha, w, x0, l);
    if (!(res <= residual_tol)) {
        throw NumericalError("linearization_releq: state is not a relative equilibrium (residual " +
                             std::to_string(res) + ")");
    }
    NodeState delayed = x0;
    delayed.a *= std::polar(1.0, -w * p.T);
    const NodeJacobian jac = node_jacobian(p, alpha, x0, delayed);
    CharMatrix cm;
    cm.M0 = (jac.now - w * generator_J()).cast<cplx>() + coupling_block(idx, p);
    cm.M1 = (jac.delayed * phase_rotation(-w * p.T)).cast<cplx>();
    cm.delay = p.T;
    return cm;
}

CharMatrix full_linearization_releq(const LaserParams& p, double alpha, double w,
                                    const NodeState& x0, int twist_l) {
    const int n = p.n;
    const int dim = 4 * n;
    Eigen::MatrixXd m0 = p.eta * coupling_matrix(p);
    Eigen::MatrixXd m1 = Eigen::MatrixXd::Zero(dim, dim);
    const Eigen::Matrix4d back = phase_rotation(-w * p.T);
    for (int k = 0; k < n; ++k) {
        NodeState xk = x0;
        xk.a *= std::polar(1.0, 2.0 * kPi * twist_l * k / n);
        NodeState dk = xk;
        dk.a *= std::polar(1.0, -w * p.T);
        const NodeJacobian jac = node_jacobian(p, alpha, xk, dk);
        m0.block<4, 4>(4 * k, 4 * k) += jac.now - w * generator_J();
        m1.block<4, 4>(4 * k, 4 * k) = jac.delayed * back;
    }
    CharMatrix cm;
    cm.M0 = m0.cast<cplx>();
    cm.M1 = m1.cast<cplx>();
    cm.delay = p.T;
    return cm;
}

std::string to_string(Convention c) {
    return c == Convention::RealDimension ? "real-dim" : "per-component";
}

Convention parse_convention(const std::string& s) {
    if (s == "real-dim") return Convention::RealDimension;
    if (s == "per-component") return Convention::PerComponent;
    throw ConfigError("unknown convention '" + s + "' (expected real-dim or per-component)");
}

int unstable_dimension(const LaserParams& p, double alpha, int j, Convention convention) {
    const int r = p.n / 2;
    if (j < 0 || j > r) throw ConfigError("component index out of range");
    const int c = count_rhp_roots(quasi_poly_equilibrium(p, alpha, j)).count;
    const bool simple = j == 0 || j == r;
    if (convention == Convention::RealDimension) return simple ? 2 * c : 4 * c;
    return simple ? c : 2 * c;
}

CrossingRecord crossing_number(const CharFamily& family, double alpha0, double w0, double window) {
    // the precondition: a root near i w0 at alpha0
    {
        const CharMatrix cm = family(alpha0);
        cplx lam(0.0, w0);
        if (!polish_root(cm, lam) || std::abs(lam - cplx(0.0, w0)) > window) {
            throw NumericalError("crossing_number: no characteristic root near i*" + std::to_string(w0));
        }
    }
    const Rect box{0.0, window, w0 - window, w0 + window};
    for (double delta = 1e-7; delta <= 2e-3; delta *= 2.0) {
        try {
            const int before = count_roots_in_rect(family(alpha0 - delta), box).count;
            const int after = count_roots_in_rect(family(alpha0 + delta), box).count;
            if (before != after) {
                CrossingRecord rec;
                rec.alpha0 = alpha0;
                rec.w0 = w0;
                rec.t = before - after;
                rec.delta = delta;
                return rec;
            }
        } catch (const NumericalError&) {
            // root still on the contour at this delta; widen
        }
    }
    throw NumericalError("crossing_number: root does not leave the imaginary axis near alpha " +
                         std::to_string(alpha0));
}

std::vector<SweepRow> equilibrium_sweep(const LaserParams& p, const std::vector<double>& alphas,
                                        Convention convention, int threads) {
    const int r = p.n / 2;
    std::vector<SweepRow> rows(alphas.size() * static_cast<std::size_t>(r + 1));
    auto work = [&](std::size_t i) {
        for (int j = 0; j <= r; ++j) {
            const auto res = count_rhp_roots(quasi_poly_equilibrium(p, alphas[i], j));
            const bool simple = j == 0 || j == r;
            int c = res.count;
            if (convention == Convention::RealDimension) c *= simple ? 2 : 4;
            else c *= simple ? 1 : 2;
            rows[i * (r + 1) + j] = {alphas[i], "V" + std::to_string(j), c, convention,
                                     res.winding_residual};
        }
    };
    threads = std::max(1, threads);
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            try {
                for (std::size_t i = t; i < alphas.size(); i += threads) work(i);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return rows;
}

}  // namespace mlring
