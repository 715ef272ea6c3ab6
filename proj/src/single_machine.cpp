#include <smstab/single_machine.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <smstab/frames.hpp>
#include <smstab/numerics/poly.hpp>

namespace smstab {

void single_machine::validate() const {
    if (!(J > 0.0)) throw std::invalid_argument("single_machine: J must be positive");
    if (!(D > 0.0)) throw std::invalid_argument("single_machine: D must be positive");
    if (!(R > 0.0)) throw std::invalid_argument("single_machine: R must be positive");
    if (!(L > 0.0)) throw std::invalid_argument("single_machine: L must be positive");
    if (b < 0.0) throw std::invalid_argument("single_machine: b must be non-negative");
    if (!std::isfinite(T_m)) throw std::invalid_argument("single_machine: T_m must be finite");
}

std::array<double, 4> equilibrium_cubic(const single_machine& p) {
    return {-p.T_m * p.R * p.R, p.b * p.b * p.R + p.D * p.R * p.R, -p.T_m * p.L * p.L,
            p.D * p.L * p.L};
}

std::array<double, 2> equilibrium_currents(const single_machine& p, double omega) {
    const double denom = p.R * p.R + p.L * p.L * omega * omega;
    const double i_q = p.b * omega * p.R / denom;
    const double i_d = -p.b * p.L * omega * omega / denom;
    return {i_d, i_q};
}

cubic_solution solve_cubic(const std::array<double, 4>& c) {
    if (c[3] == 0.0) throw std::invalid_argument("solve_cubic: leading coefficient is zero");
    cubic_solution sol;
    const double a2 = c[2] / c[3];
    const double a1 = c[1] / c[3];
    const double a0 = c[0] / c[3];
    // depressed form t^3 + p t + q with x = t - a2/3
    sol.p = a1 - a2 * a2 / 3.0;
    sol.q = 2.0 * a2 * a2 * a2 / 27.0 - a2 * a1 / 3.0 + a0;
    sol.discriminant = sol.q * sol.q / 4.0 + sol.p * sol.p * sol.p / 27.0;

    const double scale = std::max({1.0, std::abs(sol.p), std::pow(std::abs(sol.q), 2.0 / 3.0)});
    sol.repeated = std::abs(sol.discriminant) <= 1e-10 * scale * scale * scale;

    const std::complex<double> sq = std::sqrt(std::complex<double>(sol.discriminant, 0.0));
    std::complex<double> u = std::pow(-0.5 * sol.q + sq, 1.0 / 3.0);
    if (std::abs(u) == 0.0) u = std::pow(-0.5 * sol.q - sq, 1.0 / 3.0);
    const double shift = -a2 / 3.0;
    if (std::abs(u) == 0.0) {
        // triple root of the depressed form
        sol.roots = {std::complex<double>(shift, 0.0), std::complex<double>(shift, 0.0),
                     std::complex<double>(shift, 0.0)};
    } else {
        const std::complex<double> rot(-0.5, 0.5 * std::sqrt(3.0));
        std::complex<double> uk = u;
        for (int k = 0; k < 3; ++k) {
            const std::complex<double> v = -sol.p / (3.0 * uk);
            sol.roots[static_cast<std::size_t>(k)] = uk + v + shift;
            uk *= rot;
        }
    }

    // a short Newton polish on the original coefficients tightens each root
    const std::vector<double> cv(c.begin(), c.end());
    const std::vector<double> dv = num::poly_derivative(cv);
    for (auto& z : sol.roots) {
        if (sol.repeated) break;  // clustered roots are better left at the closed form
        for (int it = 0; it < 2; ++it) {
            const std::complex<double> f = num::poly_eval(cv, z);
            const std::complex<double> df = num::poly_eval(dv, z);
            if (!(std::abs(df) > 0.0)) break;
            z -= f / df;
        }
        if (std::abs(z.imag()) <= 1e-12 * (1.0 + std::abs(z.real()))) z = {z.real(), 0.0};
    }
    for (const auto& z : sol.roots)
        if (std::abs(z.imag()) <= 1e-7 * (1.0 + std::abs(z.real()))) ++sol.real_count;
    return sol;
}

double cubic_discriminant(const single_machine& p) {
    const double T = p.T_m, D = p.D, R = p.R, L = p.L, b2 = p.b * p.b;
    const double t4 = 4.0 * L * L * L * L * R * R * T * T * T * T;
    const double t2 = L * L * R * R * T * T *
                      (8.0 * D * D * R * R - 20.0 * D * R * b2 - b2 * b2);
    const double dr = D * R + b2;
    const double t0 = 4.0 * D * R * R * R * dr * dr * dr;
    const double den = 108.0 * D * D * D * D * std::pow(L, 6);
    return (t4 + t2 + t0) / den;
}

single_report find_equilibria(const single_machine& p) {
    p.validate();
    single_report rep;
    rep.cubic = equilibrium_cubic(p);
    const cubic_solution sol = solve_cubic(rep.cubic);
    rep.discriminant = sol.discriminant;
    rep.repeated_root = sol.repeated;
    for (const auto& z : sol.roots) {
        const bool real = std::abs(z.imag()) <= 1e-7 * (1.0 + std::abs(z.real()));
        if (real && z.real() > 0.0) {
            const auto i = equilibrium_currents(p, z.real());
            rep.equilibria.push_back({z.real(), i[0], i[1]});
        } else {
            rep.rejected.push_back(z);
        }
    }
    std::sort(rep.equilibria.begin(), rep.equilibria.end(),
              [](const single_equilibrium& a, const single_equilibrium& b) {
                  return a.omega < b.omega;
              });
    // a repeated positive root reduces to one reported equilibrium
    if (rep.repeated_root) {
        auto close = [](const single_equilibrium& a, const single_equilibrium& b) {
            return std::abs(a.omega - b.omega) <= 1e-7 * (1.0 + std::abs(a.omega));
        };
        rep.equilibria.erase(std::unique(rep.equilibria.begin(), rep.equilibria.end(), close),
                             rep.equilibria.end());
    }
    return rep;
}

double equilibrium_residual(const single_machine& p, const single_equilibrium& e) {
    const double w = e.omega;
    const double r1 = -p.D * w - p.b * e.i_q + p.T_m;
    const double s1 = std::max({1.0, std::abs(p.D * w), std::abs(p.b * e.i_q), std::abs(p.T_m)});
    const double r2 = -p.R * e.i_d - p.L * w * e.i_q;
    const double s2 = std::max({1.0, std::abs(p.R * e.i_d), std::abs(p.L * w * e.i_q)});
    const double r3 = p.L * w * e.i_d - p.R * e.i_q + p.b * w;
    const double s3 =
        std::max({1.0, std::abs(p.L * w * e.i_d), std::abs(p.R * e.i_q), std::abs(p.b * w)});
    return std::max({std::abs(r1) / s1, std::abs(r2) / s2, std::abs(r3) / s3});
}

num::matrix jacobian(const single_machine& p, const single_equilibrium& e,
                     linearization_form form) {
    num::matrix a(3, 3, 0.0);
    a(0, 0) = -p.D / p.J;
    a(0, 2) = -p.b / p.J;
    a(1, 1) = -p.R / p.L;
    a(1, 2) = -e.omega;
    a(2, 1) = e.omega;
    a(2, 2) = -p.R / p.L;
    if (form == linearization_form::consistent) {
        a(1, 0) = -e.i_q;
        a(2, 0) = p.b / p.L + e.i_d;
    } else {
        a(1, 0) = -e.i_q / p.L;
        a(2, 0) = (p.b + e.i_d) / p.L;
    }
    return a;
}

routh_test routh(const single_machine& p, double omega) {
    const double P = p.R * p.R + p.L * p.L * omega * omega;
    routh_test t;
    t.a2 = 2.0 * p.R / p.L + p.D / p.J;
    t.a1 = p.R * p.R / (p.L * p.L) + omega * omega + 2.0 * p.R * p.D / (p.L * p.J) +
           p.b * p.b * p.R * p.R / (p.J * p.L * P);
    t.a0 = p.D * P / (p.J * p.L * p.L) +
           p.b * p.b * p.R * (p.R * p.R - p.L * p.L * omega * omega) / (p.J * p.L * p.L * P);
    t.positive_coefficients = t.a2 > 0.0 && t.a1 > 0.0 && t.a0 > 0.0;
    t.pivot = t.a2 * t.a1 > t.a0;
    t.stable = t.positive_coefficients && t.pivot;
    return t;
}

lyapunov_test lyapunov(const single_machine& p, const single_equilibrium& e) {
    lyapunov_test t;
    const double hq = 0.5 * p.L * e.i_q;
    const double hd = 0.5 * p.L * e.i_d;
    t.m1 = p.D;
    t.m2 = p.D * p.R - hq * hq;
    t.m3 = p.R * (p.D * p.R - hq * hq - hd * hd);
    t.semidefinite = t.m1 >= 0.0 && t.m2 >= 0.0 && t.m3 >= 0.0;
    t.damping_threshold = damping_threshold(p, e.omega);
    t.holds = p.D >= t.damping_threshold;
    return t;
}

double damping_threshold(const single_machine& p, double omega) {
    const double lw2 = p.L * p.L * omega * omega;
    return p.b * p.b / (4.0 * p.R) * (lw2 / (p.R * p.R + lw2));
}

single_stability classify(const single_machine& p, const single_equilibrium& e,
                          linearization_form form, double eps) {
    single_stability s;
    s.equilibrium = e;
    s.routh = routh(p, e.omega);
    s.lyapunov = lyapunov(p, e);
    s.eigenvalues = num::eigenvalues(jacobian(p, e, form));
    s.eigen_verdict = eigenvalue_verdict(s.eigenvalues, eps);
    s.routh_matches_eigen =
        (s.routh.stable && s.eigen_verdict == verdict::locally_stable) ||
        (!s.routh.stable && s.eigen_verdict != verdict::locally_stable);
    return s;
}

void rhs_dq(const single_machine& p, const std::vector<double>& x, std::vector<double>& dx) {
    dx.resize(4);
    const double w = x[1], id = x[2], iq = x[3];
    dx[0] = w;
    dx[1] = (-p.D * w - p.b * iq + p.T_m) / p.J;
    dx[2] = (-p.R * id - p.L * w * iq) / p.L;
    dx[3] = (p.L * w * id - p.R * iq + p.b * w) / p.L;
}

void rhs_abc(const single_machine& p, const std::vector<double>& x, std::vector<double>& dx) {
    dx.resize(5);
    const double th = x[0], w = x[1];
    const std::array<double, 3> i{x[2], x[3], x[4]};
    const auto e = emf_abc(p.b, th, w);
    // electrical torque via the speed-normalized EMF keeps omega = 0 regular
    const auto en = emf_abc(p.b, th, 1.0);
    const double torque = en[0] * i[0] + en[1] * i[1] + en[2] * i[2];
    dx[0] = w;
    dx[1] = (-p.D * w - torque + p.T_m) / p.J;
    for (int k = 0; k < 3; ++k)
        dx[static_cast<std::size_t>(2 + k)] =
            (-p.R * i[static_cast<std::size_t>(k)] + e[static_cast<std::size_t>(k)]) / p.L;
}

}  // namespace smstab
