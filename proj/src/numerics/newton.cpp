#include <smstab/numerics/newton.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <smstab/error.hpp>
#include <smstab/numerics/rng.hpp>

namespace smstab::num {

namespace {

double inf_norm(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double half_sq_norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return 0.5 * s;
}

bool all_finite(const std::vector<double>& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

}  // namespace

matrix fd_jacobian(const residual_fn& f, const std::vector<double>& x, int n_out,
                   double step_scale) {
    const int n = static_cast<int>(x.size());
    matrix j(n_out, n, 0.0);
    std::vector<double> xp = x, rp(static_cast<std::size_t>(n_out)), rm(static_cast<std::size_t>(n_out));
    for (int col = 0; col < n; ++col) {
        const double h = step_scale * (1.0 + std::abs(x[static_cast<std::size_t>(col)]));
        xp[static_cast<std::size_t>(col)] = x[static_cast<std::size_t>(col)] + h;
        f(xp, rp);
        xp[static_cast<std::size_t>(col)] = x[static_cast<std::size_t>(col)] - h;
        f(xp, rm);
        xp[static_cast<std::size_t>(col)] = x[static_cast<std::size_t>(col)];
        for (int row = 0; row < n_out; ++row)
            j(row, col) = (rp[static_cast<std::size_t>(row)] - rm[static_cast<std::size_t>(row)]) / (2.0 * h);
    }
    return j;
}

newton_result newton_solve(const residual_fn& f, std::vector<double> x0,
                           const newton_options& opts) {
    const int n = static_cast<int>(x0.size());
    newton_result res;
    res.x = std::move(x0);
    std::vector<double> r(static_cast<std::size_t>(n)), rt(static_cast<std::size_t>(n));
    std::vector<double> xt(static_cast<std::size_t>(n));

    f(res.x, r);
    if (!all_finite(r)) return res;
    double phi = half_sq_norm(r);

    for (int it = 0; it < opts.max_iterations; ++it) {
        res.iterations = it;
        res.residual_norm = inf_norm(r);
        if (res.residual_norm <= opts.tol) {
            res.converged = true;
            return res;
        }

        matrix j = fd_jacobian(f, res.x, n);
        std::vector<double> step;
        try {
            std::vector<double> rhs(r.size());
            for (std::size_t i = 0; i < r.size(); ++i) rhs[i] = -r[i];
            step = solve(std::move(j), std::move(rhs));
        } catch (const numeric_error&) {
            return res;  // singular Jacobian: report non-convergence from here
        }
        if (!all_finite(step)) return res;

        // backtracking line search on 1/2 ||r||^2
        double lambda = 1.0;
        bool accepted = false;
        for (int bt = 0; bt <= opts.max_backtracks; ++bt) {
            for (std::size_t i = 0; i < xt.size(); ++i)
                xt[i] = res.x[i] + lambda * step[i];
            f(xt, rt);
            if (all_finite(rt)) {
                const double phit = half_sq_norm(rt);
                if (phit <= phi * (1.0 - 2e-4 * lambda)) {
                    res.x = xt;
                    r = rt;
                    phi = phit;
                    accepted = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if (!accepted) {
            res.residual_norm = inf_norm(r);
            res.converged = res.residual_norm <= opts.tol;
            return res;
        }
        const double rel_step = lambda * inf_norm(step) / (1.0 + inf_norm(res.x));
        if (rel_step < opts.step_tol) {
            res.residual_norm = inf_norm(r);
            res.converged = res.residual_norm <= opts.tol;
            res.iterations = it + 1;
            return res;
        }
    }
    res.residual_norm = inf_norm(r);
    res.converged = res.residual_norm <= opts.tol;
    res.iterations = opts.max_iterations;
    return res;
}

std::vector<std::vector<double>> newton_multistart(const residual_fn& f,
                                                   const std::vector<std::vector<double>>& starts,
                                                   const multistart_options& opts) {
    const int count = static_cast<int>(starts.size());
    std::vector<newton_result> results(static_cast<std::size_t>(count));

    if (opts.parallel) {
#pragma omp parallel for schedule(dynamic)
        for (int i = 0; i < count; ++i)
            results[static_cast<std::size_t>(i)] = newton_solve(f, starts[static_cast<std::size_t>(i)], opts.inner);
    } else {
        for (int i = 0; i < count; ++i)
            results[static_cast<std::size_t>(i)] = newton_solve(f, starts[static_cast<std::size_t>(i)], opts.inner);
    }

    std::vector<std::vector<double>> found;
    for (auto& res : results)
        if (res.converged && all_finite(res.x)) found.push_back(std::move(res.x));

    std::sort(found.begin(), found.end());
    std::vector<std::vector<double>> unique;
    for (auto& x : found) {
        bool dup = false;
        for (const auto& u : unique) {
            bool close = true;
            for (std::size_t k = 0; k < x.size(); ++k) {
                const double scale = std::max({1.0, std::abs(x[k]), std::abs(u[k])});
                if (std::abs(x[k] - u[k]) > opts.dedup_tol * scale) {
                    close = false;
                    break;
                }
            }
            if (close) {
                dup = true;
                break;
            }
        }
        if (!dup) unique.push_back(std::move(x));
    }
    return unique;
}

std::vector<std::vector<double>> newton_multistart_box(const residual_fn& f,
                                                       const std::vector<double>& lo,
                                                       const std::vector<double>& hi,
                                                       int count, std::uint64_t seed,
                                                       const multistart_options& opts) {
    if (lo.size() != hi.size()) throw std::invalid_argument("newton_multistart_box: box mismatch");
    splitmix64 rng(seed);
    std::vector<std::vector<double>> starts(static_cast<std::size_t>(count));
    for (auto& s : starts) {
        s.resize(lo.size());
        for (std::size_t k = 0; k < lo.size(); ++k) s[k] = rng.uniform(lo[k], hi[k]);
    }
    return newton_multistart(f, starts, opts);
}

}  // namespace smstab::num
