#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <smstab/numerics/linalg.hpp>

namespace smstab::num {

using residual_fn = std::function<void(const std::vector<double>& x, std::vector<double>& r)>;

// central-difference Jacobian, step h_j = step_scale * (1 + |x_j|)
matrix fd_jacobian(const residual_fn& f, const std::vector<double>& x, int n_out,
                   double step_scale = 6.0e-6);

struct newton_options {
    int max_iterations = 60;
    double tol = 1e-12;           // convergence on ||r||_inf
    double step_tol = 1e-14;      // stagnation on ||dx||_inf / (1 + ||x||_inf)
    int max_backtracks = 25;      // halvings of the damping factor per iteration
};

struct newton_result {
    std::vector<double> x;
    bool converged = false;
    double residual_norm = 0.0;
    int iterations = 0;
};

// damped Newton on a square system: finite-difference Jacobian, LU solve,
// backtracking line search on ||r||^2
newton_result newton_solve(const residual_fn& f, std::vector<double> x0,
                           const newton_options& opts = {});

struct multistart_options {
    double dedup_tol = 1e-6;      // per-coordinate, relative to max(1, |value|)
    bool parallel = true;         // OpenMP over starts; results are identical either way
    newton_options inner;
};

// runs newton_solve from every start and returns the deduplicated converged
// solutions, sorted lexicographically. Deterministic: the start list fixes the
// work and the merge is order-independent.
std::vector<std::vector<double>> newton_multistart(const residual_fn& f,
                                                   const std::vector<std::vector<double>>& starts,
                                                   const multistart_options& opts = {});

// convenience: draws `count` starts uniformly from the box [lo, hi] with the
// given seed, then solves as above
std::vector<std::vector<double>> newton_multistart_box(const residual_fn& f,
                                                       const std::vector<double>& lo,
                                                       const std::vector<double>& hi,
                                                       int count, std::uint64_t seed,
                                                       const multistart_options& opts = {});

}  // namespace smstab::num
