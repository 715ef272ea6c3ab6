// Timing comparison of the parallel work-distribution paths against their
// serial twins, on the same inputs. Both paths must return identical results.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#include <smstab/numerics/newton.hpp>
#include <smstab/sim.hpp>
#include <smstab/single_machine.hpp>
#include <smstab/two_machine.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

smstab::two_machine bench_two_machine() {
    smstab::two_machine p;
    p.J = 1.0;
    p.D = 9.0;
    p.T_m1 = 2910.0;
    p.T_m2 = 2800.0;
    p.R = 1010.0;
    p.L = 0.041;
    p.R_L = 1000.0;
    p.L3 = 0.04;
    p.b = 5.0;
    return p;
}

int bench_multistart() {
    const auto p = bench_two_machine();
    // steady-state system: rows 1..8 of the rotating-frame dynamics with both
    // speeds tied together
    auto f = [&p](const std::vector<double>& u, std::vector<double>& r) {
        std::vector<double> x(9), dx;
        x[0] = u[0];
        x[1] = x[2] = u[1];
        for (int k = 0; k < 6; ++k) x[static_cast<std::size_t>(3 + k)] = u[static_cast<std::size_t>(2 + k)];
        smstab::rhs_dq(p, x, dx);
        r.assign(dx.begin() + 1, dx.end());
    };

    const std::vector<double> lo{-1.5, 150.0, -80.0, -80.0, -80.0, -80.0, -80.0, -80.0};
    const std::vector<double> hi{1.5, 450.0, 80.0, 80.0, 80.0, 80.0, 80.0, 80.0};
    const int n_starts = 2048;

    smstab::num::multistart_options opts;
    opts.inner.tol = 1e-11;

    opts.parallel = false;
    auto t0 = clock_type::now();
    const auto serial = smstab::num::newton_multistart_box(f, lo, hi, n_starts, 42, opts);
    const double t_serial = seconds_since(t0);

    opts.parallel = true;
    t0 = clock_type::now();
    const auto parallel = smstab::num::newton_multistart_box(f, lo, hi, n_starts, 42, opts);
    const double t_parallel = seconds_since(t0);

    bool identical = serial.size() == parallel.size();
    for (std::size_t k = 0; identical && k < serial.size(); ++k)
        for (std::size_t j = 0; j < serial[k].size(); ++j)
            identical = identical && serial[k][j] == parallel[k][j];

    std::printf("multistart root search (%d starts, 8 unknowns)\n", n_starts);
    std::printf("  serial    %8.3f s   %zu solutions\n", t_serial, serial.size());
    std::printf("  parallel  %8.3f s   %zu solutions   speedup %.2fx   results %s\n", t_parallel,
                parallel.size(), t_serial / t_parallel, identical ? "identical" : "DIFFER");
    return identical ? 0 : 1;
}

int bench_basin() {
    smstab::single_machine p;
    p.J = 1.0;
    p.D = 1.0;
    p.T_m = 9.0;
    p.R = 1.0;
    p.L = 1.0;
    p.b = 4.0;

    smstab::sim_options so;
    so.t_end = 120.0;
    so.stop_at_steady = true;
    const int count = 96;

    auto t0 = clock_type::now();
    const auto serial = smstab::basin_scan(p, 0.1, 9.0, count, so, 1e-4, false);
    const double t_serial = seconds_since(t0);

    t0 = clock_type::now();
    const auto parallel = smstab::basin_scan(p, 0.1, 9.0, count, so, 1e-4, true);
    const double t_parallel = seconds_since(t0);

    bool identical = true;
    for (int k = 0; k < count; ++k) {
        const auto ks = static_cast<std::size_t>(k);
        identical = identical && serial.points[ks].label == parallel.points[ks].label &&
                    serial.points[ks].omega_end == parallel.points[ks].omega_end;
    }

    std::printf("basin scan (%d trajectories)\n", count);
    std::printf("  serial    %8.3f s\n", t_serial);
    std::printf("  parallel  %8.3f s   speedup %.2fx   results %s\n", t_parallel,
                t_serial / t_parallel, identical ? "identical" : "DIFFER");
    return identical ? 0 : 1;
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads = %d\n", omp_get_max_threads());
#else
    std::printf("built without OpenMP: both paths run serially\n");
#endif
    const int a = bench_multistart();
    const int b = bench_basin();
    return a != 0 || b != 0 ? 1 : 0;
}
