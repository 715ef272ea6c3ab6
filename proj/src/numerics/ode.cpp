#include <smstab/numerics/ode.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <smstab/error.hpp>

namespace smstab::num {

namespace {

double inf_norm(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

class steady_detector {
public:
    steady_detector(const steady_state_options& o, double t0, double t1) : opts_(o) {
        hold_ = opts_.hold_time > 0.0 ? opts_.hold_time : 0.01 * std::abs(t1 - t0);
    }

    // feed the derivative at an accepted state; true once the run is steady
    bool update(double t, const std::vector<double>& x, const std::vector<double>& dxdt) {
        if (!opts_.enabled) return false;
        if (!(masked_norm(dxdt) < opts_.tol * (1.0 + masked_norm(x)))) {
            armed_ = false;
            return false;
        }
        if (!armed_) {
            armed_ = true;
            since_ = t;
            return false;
        }
        return std::abs(t - since_) >= hold_;
    }

private:
    double masked_norm(const std::vector<double>& v) const {
        double m = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            bool skip = false;
            for (std::size_t k : opts_.ignore_indices) skip = skip || (k == i);
            if (!skip) m = std::max(m, std::abs(v[i]));
        }
        return m;
    }

    steady_state_options opts_;
    double hold_ = 0.0;
    double since_ = 0.0;
    bool armed_ = false;
};

// Dormand-Prince 5(4) tableau
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                 e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                 e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

struct dp5_work {
    std::vector<double> k1, k2, k3, k4, k5, k6, k7, xt, x5, err;
    explicit dp5_work(std::size_t n)
        : k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), xt(n), x5(n), err(n) {}
};

// one 5th-order step from (t, x) with derivative k1 already evaluated;
// fills x5 (new state), k7 = f(t + dt, x5), err (embedded 4th-order difference)
void dp5_step(const ode_rhs& f, double t, const std::vector<double>& x, double dt, dp5_work& w,
              step_stats& stats) {
    const std::size_t n = x.size();
    for (std::size_t i = 0; i < n; ++i) w.xt[i] = x[i] + dt * a21 * w.k1[i];
    f(t + c2 * dt, w.xt, w.k2);
    for (std::size_t i = 0; i < n; ++i) w.xt[i] = x[i] + dt * (a31 * w.k1[i] + a32 * w.k2[i]);
    f(t + c3 * dt, w.xt, w.k3);
    for (std::size_t i = 0; i < n; ++i)
        w.xt[i] = x[i] + dt * (a41 * w.k1[i] + a42 * w.k2[i] + a43 * w.k3[i]);
    f(t + c4 * dt, w.xt, w.k4);
    for (std::size_t i = 0; i < n; ++i)
        w.xt[i] = x[i] + dt * (a51 * w.k1[i] + a52 * w.k2[i] + a53 * w.k3[i] + a54 * w.k4[i]);
    f(t + c5 * dt, w.xt, w.k5);
    for (std::size_t i = 0; i < n; ++i)
        w.xt[i] = x[i] + dt * (a61 * w.k1[i] + a62 * w.k2[i] + a63 * w.k3[i] + a64 * w.k4[i] +
                               a65 * w.k5[i]);
    f(t + dt, w.xt, w.k6);
    for (std::size_t i = 0; i < n; ++i)
        w.x5[i] = x[i] + dt * (b1 * w.k1[i] + b3 * w.k3[i] + b4 * w.k4[i] + b5 * w.k5[i] +
                               b6 * w.k6[i]);
    f(t + dt, w.x5, w.k7);
    for (std::size_t i = 0; i < n; ++i)
        w.err[i] = dt * (e1 * w.k1[i] + e3 * w.k3[i] + e4 * w.k4[i] + e5 * w.k5[i] +
                         e6 * w.k6[i] + e7 * w.k7[i]);
    stats.rhs_evals += 6;
}

}  // namespace

trajectory integrate_rk4(const ode_rhs& f, std::vector<double> x0, double t0, double t1,
                         const rk4_options& opts) {
    if (!(opts.dt > 0.0)) throw std::invalid_argument("integrate_rk4: dt must be positive");
    const std::size_t n = x0.size();
    trajectory traj;
    traj.t.push_back(t0);
    traj.x.push_back(x0);
    steady_detector steady(opts.steady, t0, t1);

    std::vector<double> k1(n), k2(n), k3(n), k4(n), xt(n), x = std::move(x0);
    double t = t0;
    long step = 0;
    while (t < t1) {
        const double dt = std::min(opts.dt, t1 - t);
        f(t, x, k1);
        traj.stats.rhs_evals += 1;
        if (steady.update(t, x, k1)) {
            traj.steady_state = true;
            break;
        }
        for (std::size_t i = 0; i < n; ++i) xt[i] = x[i] + 0.5 * dt * k1[i];
        f(t + 0.5 * dt, xt, k2);
        for (std::size_t i = 0; i < n; ++i) xt[i] = x[i] + 0.5 * dt * k2[i];
        f(t + 0.5 * dt, xt, k3);
        for (std::size_t i = 0; i < n; ++i) xt[i] = x[i] + dt * k3[i];
        f(t + dt, xt, k4);
        traj.stats.rhs_evals += 3;
        for (std::size_t i = 0; i < n; ++i)
            x[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        t = (dt == opts.dt) ? t0 + static_cast<double>(++step) * opts.dt : t1;
        if (dt != opts.dt) ++step;
        traj.stats.steps += 1;
        if (step % opts.sample_stride == 0 || t >= t1) {
            traj.t.push_back(t);
            traj.x.push_back(x);
        }
    }
    if (traj.t.back() != t) {
        traj.t.push_back(t);
        traj.x.push_back(x);
    }
    traj.end_time = t;
    return traj;
}

trajectory integrate_rk45(const ode_rhs& f, std::vector<double> x0, double t0, double t1,
                          const rk45_options& opts) {
    const std::size_t n = x0.size();
    trajectory traj;
    traj.t.push_back(t0);
    traj.x.push_back(x0);
    steady_detector steady(opts.steady, t0, t1);

    const double span = t1 - t0;
    if (!(span > 0.0)) {
        traj.end_time = t0;
        return traj;
    }
    const double max_dt = opts.max_dt > 0.0 ? opts.max_dt : span;
    const double min_dt = 16.0 * std::numeric_limits<double>::epsilon() *
                          std::max({std::abs(t0), std::abs(t1), 1.0});

    dp5_work w(n);
    std::vector<double> x = std::move(x0);
    double t = t0;
    f(t, x, w.k1);
    traj.stats.rhs_evals += 1;

    double dt = opts.initial_dt;
    if (!(dt > 0.0)) {
        // start from the initial slope: keep the first Euler increment small
        const double d0 = inf_norm(x);
        const double d1 = inf_norm(w.k1);
        dt = (d1 > 0.0) ? 0.01 * (1.0 + d0) / d1 : 1e-6 * span;
        dt = std::min(dt, span / 10.0);
    }
    dt = std::min(dt, max_dt);

    long accepted = 0;
    while (t < t1) {
        if (traj.stats.steps + traj.stats.rejected >= opts.max_steps)
            throw numeric_error("integrate_rk45: step budget exhausted");
        dt = std::min(dt, t1 - t);
        if (dt < min_dt) throw numeric_error("integrate_rk45: step size underflow");

        dp5_step(f, t, x, dt, w, traj.stats);
        double err = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double sc =
                opts.abs_tol + opts.rel_tol * std::max(std::abs(x[i]), std::abs(w.x5[i]));
            const double e = w.err[i] / sc;
            err += e * e;
        }
        err = std::sqrt(err / static_cast<double>(n));

        if (err <= 1.0) {
            t += dt;
            x = w.x5;
            std::swap(w.k1, w.k7);  // first-same-as-last
            traj.stats.steps += 1;
            ++accepted;
            if (accepted % opts.sample_stride == 0 || t >= t1) {
                traj.t.push_back(t);
                traj.x.push_back(x);
            }
            if (steady.update(t, x, w.k1)) {
                traj.steady_state = true;
                break;
            }
        } else {
            traj.stats.rejected += 1;
        }
        const double grow = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
        dt *= std::clamp(grow, 0.2, 5.0);
        dt = std::min(dt, max_dt);
    }
    if (traj.t.back() != t) {
        traj.t.push_back(t);
        traj.x.push_back(x);
    }
    traj.end_time = t;
    return traj;
}

trajectory integrate_dp5_fixed(const ode_rhs& f, std::vector<double> x0, double t0, double t1,
                               double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("integrate_dp5_fixed: dt must be positive");
    const std::size_t n = x0.size();
    trajectory traj;
    traj.t.push_back(t0);
    traj.x.push_back(x0);

    dp5_work w(n);
    std::vector<double> x = std::move(x0);
    double t = t0;
    long step = 0;
    f(t, x, w.k1);
    traj.stats.rhs_evals += 1;
    while (t < t1) {
        const double h = std::min(dt, t1 - t);
        dp5_step(f, t, x, h, w, traj.stats);
        x = w.x5;
        std::swap(w.k1, w.k7);
        t = (h == dt) ? t0 + static_cast<double>(++step) * dt : t1;
        traj.stats.steps += 1;
    }
    traj.t.push_back(t);
    traj.x.push_back(x);
    traj.end_time = t;
    return traj;
}

}  // namespace smstab::num
