#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace smstab::num {

using ode_rhs = std::function<void(double t, const std::vector<double>& x, std::vector<double>& dxdt)>;

struct steady_state_options {
    bool enabled = false;
    double tol = 1e-8;       // fire when ||dx/dt||_inf < tol * (1 + ||x||_inf) ...
    double hold_time = 0.0;  // ... continuously for this long. 0 picks 1% of the
                             // span; held duration, not a step count, so the
                             // criterion survives adaptive step growth
    std::vector<std::size_t> ignore_indices;  // components excluded from both
                                              // norms, e.g. an angle that keeps
                                              // advancing at a settled spin
};

struct step_stats {
    std::size_t steps = 0;
    std::size_t rejected = 0;
    std::size_t rhs_evals = 0;
};

struct trajectory {
    std::vector<double> t;
    std::vector<std::vector<double>> x;
    bool steady_state = false;    // stopped early by the steady-state detector
    double end_time = 0.0;        // time actually reached
    step_stats stats;

    const std::vector<double>& final_state() const { return x.back(); }
};

struct rk4_options {
    double dt = 1e-3;
    int sample_stride = 1;        // keep every n-th step (the final state is always kept)
    steady_state_options steady;
};

// classic fixed-step 4th-order Runge-Kutta
trajectory integrate_rk4(const ode_rhs& f, std::vector<double> x0, double t0, double t1,
                         const rk4_options& opts = {});

struct rk45_options {
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    double initial_dt = 0.0;      // 0: choose from the initial slope
    double max_dt = 0.0;          // 0: t1 - t0
    int sample_stride = 1;
    steady_state_options steady;
    std::size_t max_steps = 50'000'000;
};

// adaptive Dormand-Prince 5(4) with PI-free step control; throws numeric_error
// on step underflow or when max_steps is exhausted
trajectory integrate_rk45(const ode_rhs& f, std::vector<double> x0, double t0, double t1,
                          const rk45_options& opts = {});

// the same 5th-order stepper at a fixed step, for convergence studies
trajectory integrate_dp5_fixed(const ode_rhs& f, std::vector<double> x0, double t0, double t1,
                               double dt);

}  // namespace smstab::num
