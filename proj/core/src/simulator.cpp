#include "mlring/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace mlring {

namespace {

constexpr double kPi = std::numbers::pi;

NetworkState axpy(const NetworkState& x, double h, const NetworkState& f) {
    NetworkState y = x;
    for (std::size_t k = 0; k < x.size(); ++k) {
        y[k].g += h * f[k].g;
        y[k].q += h * f[k].q;
        y[k].a += h * f[k].a;
    }
    return y;
}

bool finite(const NetworkState& x) {
    return std::all_of(x.begin(), x.end(), [](const NodeState& s) {
        return std::isfinite(s.g) && std::isfinite(s.q) && std::isfinite(s.a.real()) &&
               std::isfinite(s.a.imag());
    });
}

NetworkState hermite(const NetworkState& x0, const NetworkState& f0, const NetworkState& x1,
                     const NetworkState& f1, double h, double s) {
    const double s2 = s * s, s3 = s2 * s;
    const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s;
    const double h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
    NetworkState y = x0;
    for (std::size_t k = 0; k < x0.size(); ++k) {
        y[k].g = h00 * x0[k].g + h10 * h * f0[k].g + h01 * x1[k].g + h11 * h * f1[k].g;
        y[k].q = h00 * x0[k].q + h10 * h * f0[k].q + h01 * x1[k].q + h11 * h * f1[k].q;
        y[k].a = h00 * x0[k].a + h10 * h * f0[k].a + h01 * x1[k].a + h11 * h * f1[k].a;
    }
    return y;
}

}  // namespace

NetworkState Trajectory::at(double t) const {
    if (states.empty()) throw NumericalError("empty trajectory");
    const double t0 = times.front();
    double u = (t - t0) / dt;
    if (u < 0.0 || t > times.back() + 1e-12 * std::max(1.0, std::abs(t))) {
        throw NumericalError("time outside the trajectory");
    }
    auto i = static_cast<std::size_t>(std::floor(u));
    if (i + 1 >= states.size()) return states.back();
    return hermite(states[i], rates[i], states[i + 1], rates[i + 1], dt, u - static_cast<double>(i));
}

Trajectory integrate(const LaserParams& p, double alpha, const HistorySegment& initial_history,
                     double t_end, double dt) {
    if (!(dt > 0.0) || dt > p.T / 20.0 * (1.0 + 1e-12)) {
        throw ConfigError("time step must be positive and at most T/20");
    }
    if (!(t_end >= 0.0)) throw ConfigError("end time must be non-negative");
    const auto steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
    Trajectory tr;
    tr.dt = steps > 0 ? t_end / static_cast<double>(steps) : dt;
    const double h = tr.dt;
    tr.times.reserve(steps + 1);
    tr.states.reserve(steps + 1);
    tr.rates.reserve(steps + 1);

    auto delayed = [&](double s) -> NetworkState {
        if (s <= 0.0) return initial_history(std::max(s, -p.T));
        const double u = s / h;
        auto i = static_cast<std::size_t>(std::floor(u));
        if (i + 1 >= tr.states.size()) i = tr.states.size() - 2;
        return hermite(tr.states[i], tr.rates[i], tr.states[i + 1], tr.rates[i + 1], h,
                       u - static_cast<double>(i));
    };
    auto rhs = [&](double t, const NetworkState& x) {
        return network_rhs(p, alpha, x, delayed(t - p.T));
    };

    NetworkState x = initial_history(0.0);
    tr.times.push_back(0.0);
    tr.states.push_back(x);
    tr.rates.push_back(rhs(0.0, x));
    for (std::size_t n = 0; n < steps; ++n) {
        const double t = h * static_cast<double>(n);
        const NetworkState& k1 = tr.rates.back();
        const NetworkState k2 = rhs(t + 0.5 * h, axpy(x, 0.5 * h, k1));
        const NetworkState k3 = rhs(t + 0.5 * h, axpy(x, 0.5 * h, k2));
        const NetworkState k4 = rhs(t + h, axpy(x, h, k3));
        for (std::size_t k = 0; k < x.size(); ++k) {
            x[k].g += h / 6.0 * (k1[k].g + 2.0 * k2[k].g + 2.0 * k3[k].g + k4[k].g);
            x[k].q += h / 6.0 * (k1[k].q + 2.0 * k2[k].q + 2.0 * k3[k].q + k4[k].q);
            x[k].a += h / 6.0 * (k1[k].a + 2.0 * k2[k].a + 2.0 * k3[k].a + k4[k].a);
        }
        const double tn = h * static_cast<double>(n + 1);
        if (!finite(x)) {
            std::ostringstream os;
            os.precision(12);
            os << "state is not finite at t = " << tn;
            throw NumericalError(os.str());
        }
        tr.times.push_back(tn);
        tr.states.push_back(x);
        tr.rates.push_back(rhs(tn, x));
    }
    return tr;
}

WaveFitResult fit_rotating_wave(const Trajectory& traj, double transient) {
    WaveFitResult fit;
    std::size_t first = 0;
    while (first < traj.times.size() && traj.times[first] < transient) ++first;
    if (traj.times.size() - first < 4) throw NumericalError("trajectory too short for the fit");
    const std::size_t m = traj.times.size() - first;
    const std::size_t n = traj.states.front().size();

    // reference node: largest mean field amplitude
    std::size_t ref = 0;
    double best = -1.0;
    for (std::size_t k = 0; k < n; ++k) {
        double s = 0.0;
        for (std::size_t i = first; i < traj.times.size(); ++i) s += std::abs(traj.states[i][k].a);
        if (s > best) {
            best = s;
            ref = k;
        }
    }
    const bool dark = best / static_cast<double>(m) < 1e-10;

    if (!dark) {
        // least squares slope of the unwrapped phase
        double prev = std::arg(traj.states[first][ref].a), unwrapped = prev;
        double st = 0, sp = 0, stt = 0, stp = 0;
        for (std::size_t i = first; i < traj.times.size(); ++i) {
            const double ph = std::arg(traj.states[i][ref].a);
            unwrapped += std::remainder(ph - prev, 2.0 * kPi);
            prev = ph;
            const double t = traj.times[i];
            st += t;
            sp += unwrapped;
            stt += t * t;
            stp += t * unwrapped;
        }
        const double dm = static_cast<double>(m);
        const double den = dm * stt - st * st;
        fit.fitted_w = den > 0.0 ? (dm * stp - st * sp) / den : 0.0;
    }
    const double w = fit.fitted_w;

    // rotating-frame average
    fit.mean_state.assign(n, NodeState{0.0, 0.0, {0.0, 0.0}});
    for (std::size_t i = first; i < traj.times.size(); ++i) {
        const cplx back = std::polar(1.0, -w * traj.times[i]);
        for (std::size_t k = 0; k < n; ++k) {
            fit.mean_state[k].g += traj.states[i][k].g / static_cast<double>(m);
            fit.mean_state[k].q += traj.states[i][k].q / static_cast<double>(m);
            fit.mean_state[k].a += back * traj.states[i][k].a / static_cast<double>(m);
        }
    }

    // sup-norm over the last fitted period (or the whole window without rotation)
    const double t_last = traj.times.back();
    const double period = std::abs(w) > 1e-12 ? 2.0 * kPi / std::abs(w) : t_last - transient;
    const double t_from = std::max(transient, t_last - period);
    double res = 0.0;
    for (std::size_t i = first; i < traj.times.size(); ++i) {
        if (traj.times[i] < t_from) continue;
        const cplx rot = std::polar(1.0, w * traj.times[i]);
        for (std::size_t k = 0; k < n; ++k) {
            const auto& s = traj.states[i][k];
            res = std::max({res, std::abs(s.g - fit.mean_state[k].g),
                            std::abs(s.q - fit.mean_state[k].q),
                            std::abs(s.a - rot * fit.mean_state[k].a)});
        }
    }
    fit.residual = res;

    if (!dark && std::abs(w) > 1e-9) {
        // common phase increment between neighbours, rounded to multiples of 2 pi / n
        const auto& xb = fit.mean_state;
        const double step = std::arg(xb[1 % n].a * std::conj(xb[0].a));
        const int l = static_cast<int>(std::lround(step * static_cast<double>(n) / (2.0 * kPi)));
        const int lm = ((l % static_cast<int>(n)) + static_cast<int>(n)) % static_cast<int>(n);
        const cplx inc = std::polar(1.0, 2.0 * kPi * lm / static_cast<double>(n));
        bool ok = true;
        const double scale = std::abs(xb[0].a);
        for (std::size_t k = 0; k < n && ok; ++k) {
            const cplx expect = xb[k].a * inc;
            ok = scale > 0.0 && std::abs(xb[(k + 1) % n].a - expect) < 1e-3 * scale;
        }
        if (ok) fit.twist_estimate = lm;
    }
    return fit;
}

HistorySegment perturbed_equilibrium_history(const LaserParams& p, double alpha, double amplitude,
                                             std::uint64_t seed) {
    NetworkState x = trivial_equilibrium(p, alpha);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-amplitude, amplitude);
    for (auto& s : x) {
        s.g += u(rng);
        s.q += u(rng);
        s.a += cplx(u(rng), u(rng));
    }
    return constant_history(x);
}

HistorySegment rotating_wave_history(const LaserParams& p, const RelativeEquilibrium& re) {
    const NetworkState x = reconstruct(p, re);
    const double w = re.w;
    return [x, w](double theta) {
        NetworkState y = x;
        const cplx rot = std::polar(1.0, w * theta);
        for (auto& s : y) s.a *= rot;
        return y;
    };
}

HistorySegment constant_history(const NetworkState& x) {
    return [x](double) { return x; };
}

}  // namespace mlring
