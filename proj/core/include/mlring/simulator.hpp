#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mlring/bifurcation.hpp"
#include "mlring/model.hpp"

namespace mlring {

/// Uniform-grid solution with the right-hand side stored at every grid point, so that
/// the state between grid points can be recovered by cubic Hermite interpolation.
struct Trajectory {
    double dt = 0.0;
    std::vector<double> times;
    std::vector<NetworkState> states;
    std::vector<NetworkState> rates;

    /// Hermite interpolant on [times.front(), times.back()].
    NetworkState at(double t) const;
    const NetworkState& final_state() const { return states.back(); }
};

/// Fixed-step RK4 on [0, t_end]; delayed values come from `initial_history` for t - T <= 0
/// and from the Hermite interpolant of the computed solution otherwise. The step is shrunk
/// so that t_end is a whole number of steps. Throws ConfigError if dt > T/20 and
/// NumericalError when the state stops being finite.
Trajectory integrate(const LaserParams& p, double alpha, const HistorySegment& initial_history,
                     double t_end, double dt);

struct WaveFitResult {
    double fitted_w = 0.0;
    double residual = 0.0;
    std::optional<int> twist_estimate;
    NetworkState mean_state;  ///< x bar, in the frame of t = 0
};

/// Fits x(t) = e^{w J t} x_bar to the part of the trajectory after `transient`.
WaveFitResult fit_rotating_wave(const Trajectory& traj, double transient);

/// Constant history at the trivial equilibrium plus a uniform random perturbation of
/// the given amplitude in every chart coordinate.
HistorySegment perturbed_equilibrium_history(const LaserParams& p, double alpha, double amplitude,
                                             std::uint64_t seed);

/// Exact past of the rotating wave: theta -> e^{w J theta} x.
HistorySegment rotating_wave_history(const LaserParams& p, const RelativeEquilibrium& re);

/// Constant history equal to x.
HistorySegment constant_history(const NetworkState& x);

}  // namespace mlring
