#pragma once

#include <array>
#include <complex>
#include <vector>

#include <smstab/numerics/linalg.hpp>
#include <smstab/stability.hpp>

namespace smstab {

// one synchronous generator feeding a series impedance: R and L aggregate the
// machine, line, and load contributions
struct single_machine {
    double J = 1.0;    // rotor inertia
    double D = 1.0;    // mechanical damping
    double T_m = 0.0;  // mechanical drive torque
    double R = 1.0;    // total series resistance
    double L = 1.0;    // total series inductance
    double b = 1.0;    // field flux constant

    void validate() const;  // throws std::invalid_argument
};

struct single_equilibrium {
    double omega = 0.0;
    double i_d = 0.0;
    double i_q = 0.0;
};

// torque balance at constant speed eliminates the currents and leaves a cubic
// in omega; ascending coefficients {-T_m R^2, b^2 R + D R^2, -T_m L^2, D L^2}
std::array<double, 4> equilibrium_cubic(const single_machine& p);

// steady currents sustained at rotor speed omega
std::array<double, 2> equilibrium_currents(const single_machine& p, double omega);

struct cubic_solution {
    std::array<std::complex<double>, 3> roots;
    double p = 0.0;             // depressed-cubic linear coefficient
    double q = 0.0;             // depressed-cubic constant
    double discriminant = 0.0;  // (q/2)^2 + (p/3)^3
    bool repeated = false;      // discriminant within the repeated-root band
    int real_count = 0;
};

// closed-form cubic solve via the depressed form and complex cube roots, with a
// short Newton polish of each root
cubic_solution solve_cubic(const std::array<double, 4>& coeffs);

// discriminant of the equilibrium cubic directly from the parameters
double cubic_discriminant(const single_machine& p);

struct single_report {
    std::vector<single_equilibrium> equilibria;       // ascending omega
    std::vector<std::complex<double>> rejected;       // complex or non-positive roots
    std::array<double, 4> cubic{};
    double discriminant = 0.0;
    bool repeated_root = false;
};

single_report find_equilibria(const single_machine& p);

// worst equation residual of the steady-state system at (omega, i_d, i_q),
// relative to the largest term participating in each equation
double equilibrium_residual(const single_machine& p, const single_equilibrium& e);

// the `alternate` form divides two speed-coupling entries by the inductance;
// it is kept selectable for comparison but is inconsistent with the dynamics
enum class linearization_form { consistent, alternate };

// 3x3 Jacobian of the reduced (omega, i_d, i_q) dynamics at an equilibrium
num::matrix jacobian(const single_machine& p, const single_equilibrium& e,
                     linearization_form form = linearization_form::consistent);

struct routh_test {
    double a2 = 0.0, a1 = 0.0, a0 = 0.0;  // lambda^3 + a2 lambda^2 + a1 lambda + a0
    bool positive_coefficients = false;
    bool pivot = false;  // a2 a1 > a0
    bool stable = false;
};

// third-order Routh-Hurwitz test at rotor speed omega
routh_test routh(const single_machine& p, double omega);

struct lyapunov_test {
    double m1 = 0.0, m2 = 0.0, m3 = 0.0;  // leading principal minors of the negated derivative form
    bool semidefinite = false;            // all minors non-negative
    double damping_threshold = 0.0;       // smallest damping satisfying the condition here
    bool holds = false;                   // D >= damping_threshold
};

lyapunov_test lyapunov(const single_machine& p, const single_equilibrium& e);

// b^2 L^2 omega^2 / (4 R (R^2 + L^2 omega^2)): the damping the energy argument
// requires at speed omega
double damping_threshold(const single_machine& p, double omega);

struct single_stability {
    single_equilibrium equilibrium;
    routh_test routh;
    lyapunov_test lyapunov;
    std::vector<std::complex<double>> eigenvalues;
    verdict eigen_verdict = verdict::inconclusive;
    bool routh_matches_eigen = false;
};

single_stability classify(const single_machine& p, const single_equilibrium& e,
                          linearization_form form = linearization_form::consistent,
                          double eps = 1e-7);

// state (theta, omega, i_d, i_q)
void rhs_dq(const single_machine& p, const std::vector<double>& x, std::vector<double>& dx);

// state (theta, omega, i_a, i_b, i_c)
void rhs_abc(const single_machine& p, const std::vector<double>& x, std::vector<double>& dx);

}  // namespace smstab
