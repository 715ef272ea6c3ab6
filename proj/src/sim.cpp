#include <smstab/sim.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <smstab/error.hpp>
#include <smstab/frames.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace smstab {

namespace {

num::rk45_options to_rk45(const sim_options& o) {
    num::rk45_options r;
    r.rel_tol = o.rel_tol;
    r.abs_tol = o.abs_tol;
    r.sample_stride = o.sample_stride;
    r.steady.enabled = o.stop_at_steady;
    r.steady.tol = o.steady_tol;
    return r;
}

}  // namespace

num::trajectory simulate_single_dq(const single_machine& p, const std::vector<double>& x0,
                                   const sim_options& opts) {
    if (x0.size() != 4) throw std::invalid_argument("single dq state must have 4 components");
    p.validate();
    auto f = [&p](double, const std::vector<double>& x, std::vector<double>& dx) {
        rhs_dq(p, x, dx);
    };
    auto ro = to_rk45(opts);
    ro.steady.ignore_indices = {0};  // the rotor angle keeps advancing at a settled spin
    return num::integrate_rk45(f, x0, 0.0, opts.t_end, ro);
}

num::trajectory simulate_single_abc(const single_machine& p, const std::vector<double>& x0,
                                    const sim_options& opts) {
    if (x0.size() != 5) throw std::invalid_argument("single abc state must have 5 components");
    p.validate();
    auto f = [&p](double, const std::vector<double>& x, std::vector<double>& dx) {
        rhs_abc(p, x, dx);
    };
    return num::integrate_rk45(f, x0, 0.0, opts.t_end, to_rk45(opts));
}

num::trajectory simulate_two_dq(const two_machine& p, const std::vector<double>& x0,
                                const sim_options& opts) {
    if (x0.size() != 9) throw std::invalid_argument("two-machine dq state must have 9 components");
    p.validate();
    auto f = [&p](double, const std::vector<double>& x, std::vector<double>& dx) {
        rhs_dq(p, x, dx);
    };
    return num::integrate_rk45(f, x0, 0.0, opts.t_end, to_rk45(opts));
}

num::trajectory simulate_two_abc(const two_machine& p, const std::vector<double>& x0,
                                 const sim_options& opts) {
    if (x0.size() != 13)
        throw std::invalid_argument("two-machine abc state must have 13 components");
    p.validate();
    auto f = [&p](double, const std::vector<double>& x, std::vector<double>& dx) {
        rhs_abc(p, x, dx);
    };
    return num::integrate_rk45(f, x0, 0.0, opts.t_end, to_rk45(opts));
}

std::vector<double> single_abc_to_dq_state(const std::vector<double>& x) {
    if (x.size() != 5) throw std::invalid_argument("expected 5 components");
    const auto i = abc_to_dq(x[0], {x[2], x[3], x[4]});
    return {x[0], x[1], i[0], i[1]};
}

std::vector<double> single_dq_to_abc_state(const std::vector<double>& x) {
    if (x.size() != 4) throw std::invalid_argument("expected 4 components");
    const auto i = dq_to_abc(x[0], {x[2], x[3]});
    return {x[0], x[1], i[0], i[1], i[2]};
}

std::vector<double> two_abc_to_dq_state(const std::vector<double>& x) {
    if (x.size() != 13) throw std::invalid_argument("expected 13 components");
    const double eta = 0.5 * (x[0] + x[2]);
    const double delta = 0.5 * (x[2] - x[0]);
    const auto i1 = abc_to_dq(eta, {x[4], x[5], x[6]});
    const auto i2 = abc_to_dq(eta, {x[7], x[8], x[9]});
    const auto i3 = abc_to_dq(eta, {x[10], x[11], x[12]});
    return {delta, x[1], x[3], i1[0], i1[1], i2[0], i2[1], i3[0], i3[1]};
}

std::vector<double> two_dq_to_abc_state(const std::vector<double>& x, double eta) {
    if (x.size() != 9) throw std::invalid_argument("expected 9 components");
    const auto i1 = dq_to_abc(eta, {x[3], x[4]});
    const auto i2 = dq_to_abc(eta, {x[5], x[6]});
    const auto i3 = dq_to_abc(eta, {x[7], x[8]});
    std::vector<double> y(13);
    y[0] = eta - x[0];
    y[1] = x[1];
    y[2] = eta + x[0];
    y[3] = x[2];
    for (int k = 0; k < 3; ++k) {
        const auto ks = static_cast<std::size_t>(k);
        y[4 + ks] = i1[ks];
        y[7 + ks] = i2[ks];
        y[10 + ks] = i3[ks];
    }
    return y;
}

namespace {

double state_mismatch(const std::vector<double>& a, const std::vector<double>& b) {
    double worst = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k)
        worst = std::max(worst, std::abs(a[k] - b[k]) / (1.0 + std::abs(a[k])));
    return worst;
}

template <class RhsA, class RhsB, class MapBtoA>
frame_comparison chained_compare(RhsA&& fa, RhsB&& fb, std::vector<double> xa,
                                 std::vector<double> xb, double t_end, int checkpoints,
                                 const sim_options& opts, MapBtoA&& map) {
    if (checkpoints < 1) throw std::invalid_argument("checkpoints must be positive");
    frame_comparison cmp;
    num::rk45_options ro = to_rk45(opts);
    ro.steady.enabled = false;
    ro.sample_stride = 1 << 20;  // only endpoint states are needed
    double t = 0.0;
    for (int k = 1; k <= checkpoints; ++k) {
        const double t_next = t_end * k / checkpoints;
        xa = num::integrate_rk45(fa, xa, t, t_next, ro).final_state();
        xb = num::integrate_rk45(fb, xb, t, t_next, ro).final_state();
        cmp.times.push_back(t_next);
        cmp.max_mismatch = std::max(cmp.max_mismatch, state_mismatch(xa, map(xb)));
        t = t_next;
    }
    return cmp;
}

}  // namespace

frame_comparison compare_frames_single(const single_machine& p, const std::vector<double>& dq0,
                                       double t_end, int checkpoints, const sim_options& opts) {
    p.validate();
    auto fa = [&p](double, const std::vector<double>& x, std::vector<double>& dx) {
        rhs_dq(p, x, dx);
    };
    auto fb = [&p](double, const std::vector<double>& x, std::vector<double>& dx) {
        rhs_abc(p, x, dx);
    };
    return chained_compare(fa, fb, dq0, single_dq_to_abc_state(dq0), t_end, checkpoints, opts,
                           [](const std::vector<double>& x) { return single_abc_to_dq_state(x); });
}

frame_comparison compare_frames_two(const two_machine& p, const std::vector<double>& dq0,
                                    double t_end, int checkpoints, const sim_options& opts) {
    p.validate();
    auto fa = [&p](double, const std::vector<double>& x, std::vector<double>& dx) {
        rhs_dq(p, x, dx);
    };
    auto fb = [&p](double, const std::vector<double>& x, std::vector<double>& dx) {
        rhs_abc(p, x, dx);
    };
    return chained_compare(fa, fb, dq0, two_dq_to_abc_state(dq0, 0.0), t_end, checkpoints, opts,
                           [](const std::vector<double>& x) { return two_abc_to_dq_state(x); });
}

basin_scan_result basin_scan(const single_machine& p, double lo, double hi, int count,
                             const sim_options& opts, double match_tol, bool parallel) {
    if (count < 1) throw std::invalid_argument("basin_scan: count must be positive");
    if (!(hi >= lo)) throw std::invalid_argument("basin_scan: empty speed range");
    p.validate();

    basin_scan_result result;
    for (const auto& eq : find_equilibria(p).equilibria) result.attractors.push_back(eq.omega);
    result.points.resize(static_cast<std::size_t>(count));

    sim_options run = opts;
    run.stop_at_steady = true;

    auto solve_point = [&](int k) {
        const double w0 =
            count == 1 ? lo : lo + (hi - lo) * static_cast<double>(k) / (count - 1);
        basin_point pt;
        pt.omega0 = w0;
        const auto tr = simulate_single_dq(p, {0.0, w0, 0.0, 0.0}, run);
        pt.omega_end = tr.final_state()[1];
        double best = match_tol;
        for (std::size_t j = 0; j < result.attractors.size(); ++j) {
            const double d =
                std::abs(pt.omega_end - result.attractors[j]) / (1.0 + std::abs(result.attractors[j]));
            if (d <= best) {
                best = d;
                pt.label = static_cast<int>(j);
            }
        }
        result.points[static_cast<std::size_t>(k)] = pt;
    };

    if (parallel) {
#pragma omp parallel for schedule(dynamic)
        for (int k = 0; k < count; ++k) solve_point(k);
    } else {
        for (int k = 0; k < count; ++k) solve_point(k);
    }
    return result;
}

void write_csv(const num::trajectory& tr, const std::vector<std::string>& columns,
               const std::string& path) {
    if (!tr.x.empty() && columns.size() != tr.x.front().size())
        throw std::invalid_argument("write_csv: column count does not match state width");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "t";
    for (const auto& c : columns) out << "," << c;
    out << "\n";
    char buf[64];
    for (std::size_t k = 0; k < tr.t.size(); ++k) {
        std::snprintf(buf, sizeof buf, "%.17g", tr.t[k]);
        out << buf;
        for (double v : tr.x[k]) {
            std::snprintf(buf, sizeof buf, "%.17g", v);
            out << "," << buf;
        }
        out << "\n";
    }
    if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace smstab
