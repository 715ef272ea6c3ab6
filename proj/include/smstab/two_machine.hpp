#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <smstab/numerics/linalg.hpp>
#include <smstab/stability.hpp>

namespace smstab {

// two identical synchronous machines coupled through a resistive tie with
// co-located loads. R aggregates each machine's series resistance with its
// load branch: R = R_s + R_L.
struct two_machine {
    double J = 1.0;     // rotor inertia (both machines)
    double D = 1.0;     // mechanical damping (both machines)
    double T_m1 = 0.0;  // drive torque, machine 1
    double T_m2 = 0.0;  // drive torque, machine 2
    double R = 1.0;     // series resistance per machine loop, load included
    double L = 1.0;     // series inductance per machine loop
    double R_L = 0.0;   // load-branch resistance
    double L3 = 1.0;    // tie-branch inductance
    double b = 1.0;     // field flux constant (both machines)

    double torque_sum() const { return T_m1 + T_m2; }
    double torque_diff() const { return T_m1 - T_m2; }

    void validate() const;  // throws std::invalid_argument
};

// symmetric-mode equilibrium: both rotors at speed omega, rotor angles offset
// by 2*delta, currents in the mean-angle frame
struct two_equilibrium {
    double delta = 0.0;
    double omega = 0.0;
    std::array<double, 6> currents{};  // i_d1, i_q1, i_d2, i_q2, i_d3, i_q3
};

// frequency-dependent circuit blocks, ascending polynomials in omega.
// Products with the tie admittance denominator X are kept in expanded form so
// no coefficient is the difference of nearly equal terms.
std::vector<double> block_loop(const two_machine& p);         // R^2 + L^2 w^2
std::vector<double> block_tie(const two_machine& p);          // 4 R_L^2 + L3^2 w^2
std::vector<double> block_diff_re(const two_machine& p);      // a*X: real part of the difference-mode impedance, times X
std::vector<double> block_diff_im(const two_machine& p);      // e*X: imaginary part, times X
std::vector<double> block_diff_mag(const two_machine& p);     // (a^2 + e^2) * X
std::vector<double> block_coupling(const two_machine& p);     // angle-coupling gain, times loop and magnitude blocks
std::vector<double> block_denominator(const two_machine& p);  // shared denominator of the angle-fraction recovery
std::vector<double> block_sin_num(const two_machine& p);      // sin^2 numerator factor
std::vector<double> block_cos_num(const two_machine& p);      // cos^2 numerator factor

// the equilibrium speeds are roots of this degree-14 polynomial (ascending
// coefficients): sin_num * cos_num * coupling^2 - T_d^2 * loop * mag * denom^2
std::vector<double> resultant_coeffs(const two_machine& p);

// angle recovery at a candidate speed
struct angle_recovery {
    double sc = 0.0;     // sin(delta) cos(delta)
    double s2 = 0.0;     // sin^2(delta)
    double c2 = 0.0;     // cos^2(delta)
    bool valid = false;
    std::string reject_reason;  // empty when valid
    double delta = 0.0;         // canonical representative in (-pi/2, pi/2]
};
angle_recovery recover_angle(const two_machine& p, double omega, double range_tol = 1e-9);

// steady currents sustained at speed omega and angle offset delta; these solve
// the six electrical equations exactly for any (omega, delta), not only at
// torque balance
std::array<double, 6> closed_form_currents(const two_machine& p, double omega, double delta);

// worst equation residual of the 8 steady-state equations, each relative to
// its largest participating term
double equilibrium_residual(const two_machine& p, const two_equilibrium& e);

// (delta, i) and (delta - pi, -i) describe the same physical equilibrium;
// fold into delta in (-pi/2, pi/2]
two_equilibrium canonicalize(two_equilibrium e);

struct rejected_candidate {
    std::complex<double> omega;
    std::string reason;
};

struct route_flag {
    std::string description;
};

// cross-check of the independently tabulated degree-18 expansion of the
// resultant; kept verbatim as a diagnostic and never used by the solver
struct expansion_check {
    std::vector<double> coeffs;      // ascending, degree 18
    bool leading_matches = false;    // leading coefficient equals -16 D^2 L^10
    bool odd_part_vanishes = false;  // torque-symmetric case drops the inhomogeneous rows
    bool shares_roots = false;       // positive real roots agree with the factored resultant
    double max_root_distance = 0.0;  // worst match distance over the factored roots
};
expansion_check check_expansion(const two_machine& p);

enum class solve_route { resultant, newton, both };

struct two_report {
    std::vector<two_equilibrium> equilibria;  // descending omega
    std::vector<rejected_candidate> rejected;
    std::vector<double> polynomial;           // the factored resultant coefficients
    bool routes_agree = true;                 // meaningful when both routes ran
    std::vector<route_flag> disagreements;    // surfaced, never silently dropped
    bool angle_continuum = false;             // unexcited symmetric case: any delta works
};

// all positive-speed equilibria of the coupled system; the rest continuum
// (zero speed, zero current, free angle offset) is out of scope. The
// resultant route enumerates polynomial roots and validity-checks each; the
// Newton route multistarts the full 8-unknown system. With solve_route::both
// the routes cross-check each other and any mismatch is flagged in the report.
two_report find_equilibria(const two_machine& p, solve_route route = solve_route::both,
                           std::uint64_t seed = 0, double residual_tol = 1e-8);

// dq-frame dynamics in the mean rotor frame;
// state (delta, omega1, omega2, i_d1, i_q1, i_d2, i_q2, i_d3, i_q3)
void rhs_dq(const two_machine& p, const std::vector<double>& x, std::vector<double>& dx);

// stator-frame dynamics;
// state (theta1, omega1, theta2, omega2, i1_abc[3], i2_abc[3], i3_abc[3])
void rhs_abc(const two_machine& p, const std::vector<double>& x, std::vector<double>& dx);

// analytic 9x9 Jacobian of rhs_dq at an arbitrary state
num::matrix jacobian_dq(const two_machine& p, const std::vector<double>& x);
num::matrix jacobian(const two_machine& p, const two_equilibrium& e);

struct two_stability {
    two_equilibrium equilibrium;
    std::vector<std::complex<double>> eigenvalues;
    verdict eigen_verdict = verdict::inconclusive;
};

two_stability classify(const two_machine& p, const two_equilibrium& e, double eps = 1e-7);

}  // namespace smstab
