#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <smstab/numerics/ode.hpp>
#include <smstab/single_machine.hpp>
#include <smstab/two_machine.hpp>

namespace smstab {

struct sim_options {
    double t_end = 200.0;
    double rel_tol = 1.0e-8;
    double abs_tol = 1.0e-10;
    int sample_stride = 1;
    bool stop_at_steady = false;
    double steady_tol = 1.0e-8;
};

// state order (theta, omega, i_d, i_q)
num::trajectory simulate_single_dq(const single_machine& p, const std::vector<double>& x0,
                                   const sim_options& opts = {});

// state order (theta, omega, i_a, i_b, i_c)
num::trajectory simulate_single_abc(const single_machine& p, const std::vector<double>& x0,
                                    const sim_options& opts = {});

// state order (delta, omega1, omega2, i_d1, i_q1, i_d2, i_q2, i_d3, i_q3)
num::trajectory simulate_two_dq(const two_machine& p, const std::vector<double>& x0,
                                const sim_options& opts = {});

// state order (theta1, omega1, theta2, omega2, i1_abc, i2_abc, i3_abc)
num::trajectory simulate_two_abc(const two_machine& p, const std::vector<double>& x0,
                                 const sim_options& opts = {});

// phase-frame state mapped into the rotating frame of the same model
std::vector<double> single_abc_to_dq_state(const std::vector<double>& x);
std::vector<double> single_dq_to_abc_state(const std::vector<double>& x);
std::vector<double> two_abc_to_dq_state(const std::vector<double>& x);
// inverse embedding; theta1 = eta - delta, theta2 = eta + delta
std::vector<double> two_dq_to_abc_state(const std::vector<double>& x, double eta = 0.0);

struct frame_comparison {
    std::vector<double> times;
    double max_mismatch = 0.0;  // max over checkpoints of max_i |dx_i| / (1 + |x_i|)
};

// integrates both formulations over shared checkpoints and compares them in the
// rotating frame; both runs use the same tolerances
frame_comparison compare_frames_single(const single_machine& p, const std::vector<double>& dq0,
                                       double t_end, int checkpoints, const sim_options& opts = {});
frame_comparison compare_frames_two(const two_machine& p, const std::vector<double>& dq0,
                                    double t_end, int checkpoints, const sim_options& opts = {});

struct basin_point {
    double omega0 = 0.0;
    int label = -1;        // index into the equilibrium list, -1 if unresolved
    double omega_end = 0.0;
};

struct basin_scan_result {
    std::vector<basin_point> points;
    std::vector<double> attractors;  // equilibrium speeds the labels refer to
};

// integrates the rotating-frame model from (theta=0, omega0, zero currents) for
// each omega0 in [lo, hi] and labels the endpoint by the nearest equilibrium speed
basin_scan_result basin_scan(const single_machine& p, double lo, double hi, int count,
                             const sim_options& opts = {}, double match_tol = 1.0e-4,
                             bool parallel = true);

void write_csv(const num::trajectory& tr, const std::vector<std::string>& columns,
               const std::string& path);

}  // namespace smstab
