#include <smstab/two_machine.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <smstab/frames.hpp>
#include <smstab/numerics/newton.hpp>
#include <smstab/numerics/poly.hpp>
#include <smstab/numerics/rng.hpp>

namespace smstab {

namespace {
constexpr double half_pi = std::numbers::pi / 2.0;

std::string format_pair(double omega, double delta) {
    std::ostringstream os;
    os.precision(12);
    os << "(omega=" << omega << ", delta=" << delta << ")";
    return os.str();
}
}  // namespace

void two_machine::validate() const {
    if (!(J > 0.0)) throw std::invalid_argument("two_machine: J must be positive");
    if (!(D > 0.0)) throw std::invalid_argument("two_machine: D must be positive");
    if (!(R > 0.0)) throw std::invalid_argument("two_machine: R must be positive");
    if (!(L > 0.0)) throw std::invalid_argument("two_machine: L must be positive");
    if (!(R_L > 0.0)) throw std::invalid_argument("two_machine: R_L must be positive");
    if (!(R > R_L)) throw std::invalid_argument("two_machine: R must exceed R_L (R = R_s + R_L)");
    if (!(L3 > 0.0)) throw std::invalid_argument("two_machine: L3 must be positive");
    if (b < 0.0) throw std::invalid_argument("two_machine: b must be non-negative");
    if (!std::isfinite(T_m1) || !std::isfinite(T_m2))
        throw std::invalid_argument("two_machine: torques must be finite");
}

std::vector<double> block_loop(const two_machine& p) { return {p.R * p.R, 0.0, p.L * p.L}; }

std::vector<double> block_tie(const two_machine& p) {
    return {4.0 * p.R_L * p.R_L, 0.0, p.L3 * p.L3};
}

std::vector<double> block_diff_re(const two_machine& p) {
    const double rl2 = p.R_L * p.R_L;
    return {4.0 * p.R_L * rl2 - 4.0 * p.R * rl2, 0.0, -p.R * p.L3 * p.L3};
}

std::vector<double> block_diff_im(const two_machine& p) {
    const double rl2 = p.R_L * p.R_L;
    return {0.0, -(4.0 * p.L * rl2 + 2.0 * p.L3 * rl2), 0.0, -p.L * p.L3 * p.L3};
}

std::vector<double> block_diff_mag(const two_machine& p) {
    const double rl2 = p.R_L * p.R_L;
    const double rs = p.R - p.R_L;
    return {4.0 * rl2 * rs * rs, 0.0,
            4.0 * p.L * p.L * rl2 + p.R * p.R * p.L3 * p.L3 + 4.0 * p.L * p.L3 * rl2, 0.0,
            p.L * p.L * p.L3 * p.L3};
}

std::vector<double> block_coupling(const two_machine& p) {
    const double rl2 = p.R_L * p.R_L;
    return {0.0, -2.0 * rl2 * (2.0 * p.L * rl2 - 4.0 * p.L * p.R * p.R_L - p.L3 * p.R * p.R),
            0.0, -2.0 * rl2 * p.L * p.L * p.L3};
}

std::vector<double> block_denominator(const two_machine& p) {
    const double rl2 = p.R_L * p.R_L;
    return {-4.0 * p.R * p.R_L * rl2 * (p.R - p.R_L), 0.0,
            4.0 * p.L * rl2 * (p.L * p.R_L + p.L3 * p.R)};
}

std::vector<double> block_sin_num(const two_machine& p) {
    const double ts = p.torque_sum();
    const double b2 = p.b * p.b;
    return {-ts * p.R * p.R, 2.0 * p.D * p.R * p.R + 2.0 * p.R * b2, -ts * p.L * p.L,
            2.0 * p.D * p.L * p.L};
}

std::vector<double> block_cos_num(const two_machine& p) {
    const double b2 = p.b * p.b;
    const auto torque_part = num::poly_mul({p.torque_sum(), -2.0 * p.D}, block_diff_mag(p));
    const auto emf_part = num::poly_mul({0.0, 2.0 * b2}, block_diff_re(p));
    return num::poly_add(torque_part, emf_part);
}

std::vector<double> resultant_coeffs(const two_machine& p) {
    const auto g = block_coupling(p);
    const auto lhs = num::poly_mul(num::poly_mul(block_sin_num(p), block_cos_num(p)),
                                   num::poly_mul(g, g));
    const auto d0 = block_denominator(p);
    const double td = p.torque_diff();
    const auto rhs = num::poly_mul(num::poly_mul(block_loop(p), block_diff_mag(p)),
                                   num::poly_mul(d0, d0));
    return num::poly_add(lhs, num::poly_scale(rhs, -td * td));
}

angle_recovery recover_angle(const two_machine& p, double omega, double range_tol) {
    angle_recovery rec;
    if (!(omega > 0.0)) {
        rec.reject_reason = "nonpositive_speed";
        return rec;
    }
    if (p.b == 0.0) {
        rec.reject_reason = "unexcited";  // angle recovery divides by b^2
        return rec;
    }
    const double pw = num::poly_eval(block_loop(p), omega);
    const double mag = num::poly_eval(block_diff_mag(p), omega);
    const double g = num::poly_eval(block_coupling(p), omega);
    const double d0 = num::poly_eval(block_denominator(p), omega);
    const double ns = num::poly_eval(block_sin_num(p), omega);
    const double nc = num::poly_eval(block_cos_num(p), omega);
    const double norm = 2.0 * p.b * p.b * omega;

    const double td = p.torque_diff();
    rec.sc = (td == 0.0) ? 0.0 : -td * pw * mag / (norm * g);
    rec.s2 = ns * mag / (norm * d0);
    rec.c2 = nc * pw / (norm * d0);

    if (!(std::abs(rec.sc) <= 0.5 + range_tol)) {
        rec.reject_reason = "slip_out_of_range";
        return rec;
    }
    if (!(rec.s2 >= -range_tol && rec.s2 <= 1.0 + range_tol)) {
        rec.reject_reason = "sin_fraction_out_of_range";
        return rec;
    }
    if (!(rec.c2 >= -range_tol && rec.c2 <= 1.0 + range_tol)) {
        rec.reject_reason = "cos_fraction_out_of_range";
        return rec;
    }
    const double s = std::sqrt(std::clamp(rec.s2, 0.0, 1.0));
    const double c = std::sqrt(std::clamp(rec.c2, 0.0, 1.0));
    const double s_signed = (rec.sc < 0.0) ? -s : s;
    rec.delta = std::atan2(s_signed, c);
    if (rec.delta <= -half_pi) rec.delta += std::numbers::pi;
    rec.valid = true;
    return rec;
}

std::array<double, 6> closed_form_currents(const two_machine& p, double omega, double delta) {
    const double c = std::cos(delta), s = std::sin(delta);
    const double pw = p.R * p.R + p.L * p.L * omega * omega;
    const double x = 4.0 * p.R_L * p.R_L + p.L3 * p.L3 * omega * omega;
    const double a = -p.R + 4.0 * p.R_L * p.R_L * p.R_L / x;
    const double e = -p.L * omega - 2.0 * p.L3 * omega * p.R_L * p.R_L / x;
    const double ae = a * a + e * e;
    const double bw = p.b * omega;

    const double vd = -p.L * omega * c / pw;
    const double vq = p.R * c / pw;
    const double wd = a * s / ae;
    const double wq = e * s / ae;

    std::array<double, 6> i{};
    i[0] = bw * (vd + wd);
    i[1] = bw * (vq + wq);
    i[2] = bw * (vd - wd);
    i[3] = bw * (vq - wq);
    const double dd = i[0] - i[2];
    const double dq = i[1] - i[3];
    const double rl2 = p.R_L * p.R_L;
    const double lt = p.L3 * omega * p.R_L;
    i[4] = (2.0 * rl2 * dd - lt * dq) / x;
    i[5] = (lt * dd + 2.0 * rl2 * dq) / x;
    return i;
}

double equilibrium_residual(const two_machine& p, const two_equilibrium& e) {
    const double w = e.omega, s = std::sin(e.delta), c = std::cos(e.delta);
    const auto& i = e.currents;
    const double lw = p.L * w, bw = p.b * w;

    auto rel = [](double r, std::initializer_list<double> terms) {
        double scale = 1.0;
        for (double t : terms) scale = std::max(scale, std::abs(t));
        return std::abs(r) / scale;
    };

    const double m1a = p.b * (s * i[0] - c * i[1]);
    const double m2a = p.b * (s * i[2] + c * i[3]);
    double worst = rel(-p.D * w + m1a + p.T_m1, {p.D * w, m1a, p.T_m1});
    worst = std::max(worst, rel(-p.D * w - m2a + p.T_m2, {p.D * w, m2a, p.T_m2}));
    worst = std::max(worst, rel(-p.R * i[0] - lw * i[1] - bw * s + p.R_L * i[4],
                                {p.R * i[0], lw * i[1], bw * s, p.R_L * i[4]}));
    worst = std::max(worst, rel(-p.R * i[1] + lw * i[0] + bw * c + p.R_L * i[5],
                                {p.R * i[1], lw * i[0], bw * c, p.R_L * i[5]}));
    worst = std::max(worst, rel(-p.R * i[2] - lw * i[3] + bw * s - p.R_L * i[4],
                                {p.R * i[2], lw * i[3], bw * s, p.R_L * i[4]}));
    worst = std::max(worst, rel(-p.R * i[3] + lw * i[2] + bw * c - p.R_L * i[5],
                                {p.R * i[3], lw * i[2], bw * c, p.R_L * i[5]}));
    worst = std::max(worst,
                     rel(-2.0 * p.R_L * i[4] + p.R_L * (i[0] - i[2]) - p.L3 * w * i[5],
                         {2.0 * p.R_L * i[4], p.R_L * (i[0] - i[2]), p.L3 * w * i[5]}));
    worst = std::max(worst,
                     rel(-2.0 * p.R_L * i[5] + p.R_L * (i[1] - i[3]) + p.L3 * w * i[4],
                         {2.0 * p.R_L * i[5], p.R_L * (i[1] - i[3]), p.L3 * w * i[4]}));
    return worst;
}

two_equilibrium canonicalize(two_equilibrium e) {
    double d = std::remainder(e.delta, 2.0 * std::numbers::pi);
    bool flip = false;
    if (d > half_pi) {
        d -= std::numbers::pi;
        flip = true;
    } else if (d <= -half_pi) {
        d += std::numbers::pi;
        flip = true;
    }
    e.delta = d;
    if (flip)
        for (double& v : e.currents) v = -v;
    return e;
}

namespace {

struct expansion_tables {
    double k[9];
    double g[11];  // even entries 2..10 populated
    double h[11];  // even entries 0..10 populated
};

expansion_tables build_tables(const two_machine& p) {
    const double R = p.R, RL = p.R_L, L = p.L, L3 = p.L3, D = p.D, b = p.b;
    const double Ts = p.torque_sum(), Td = p.torque_diff();
    const double b2 = b * b, b4 = b2 * b2, Ts2 = Ts * Ts, Td2 = Td * Td, D2 = D * D;
    const double R2 = R * R, R3 = R2 * R, R4 = R2 * R2, R5 = R4 * R, R6 = R4 * R2,
                 R7 = R6 * R, R8 = R4 * R4;
    const double L2 = L * L, L3p = L2 * L, L4 = L2 * L2, L5 = L4 * L, L6 = L4 * L2,
                 L7 = L6 * L, L8 = L4 * L4;
    const double RL2 = RL * RL, RL3 = RL2 * RL, RL4 = RL2 * RL2, RL5 = RL4 * RL,
                 RL6 = RL4 * RL2, RL7 = RL6 * RL, RL8 = RL4 * RL4, RL9 = RL8 * RL,
                 RL10 = RL8 * RL2, RL11 = RL10 * RL, RL12 = RL8 * RL4;

    expansion_tables t{};
    t.k[0] = -4 * RL4 * R2 * Ts2 + 8 * RL3 * R3 * Ts2 - 4 * RL2 * R4 * Ts2;
    t.k[1] = 4 * b2 * RL4 * R * Ts - 12 * b2 * RL3 * R2 * Ts + 16 * D * RL4 * R2 * Ts +
             8 * b2 * RL2 * R3 * Ts - 32 * D * RL3 * R3 * Ts + 16 * D * RL2 * R4 * Ts;
    t.k[2] = 4 * b4 * RL3 * R - 8 * b2 * D * RL4 * R - 4 * b4 * RL2 * R2 +
             24 * b2 * D * RL3 * R2 - 16 * D2 * RL4 * R2 - 16 * b2 * D * RL2 * R3 +
             32 * D2 * RL3 * R3 - 16 * D2 * RL2 * R4 - 4 * L2 * RL4 * Ts2 +
             8 * L2 * RL3 * R * Ts2 - 4 * L3 * L * RL2 * R2 * Ts2 - 8 * L2 * RL2 * R2 * Ts2 +
             R4 * Ts2;
    t.k[3] = -4 * b2 * L2 * RL3 * Ts + 16 * D * L2 * RL4 * Ts + 4 * L3 * b2 * L * RL2 * R * Ts +
             8 * b2 * L2 * RL2 * R * Ts - 32 * D * L2 * RL3 * R * Ts +
             16 * L3 * D * L * RL2 * R2 * Ts + 32 * D * L2 * RL2 * R2 * Ts - 2 * b2 * R3 * Ts -
             4 * D * R4 * Ts;
    t.k[4] = 8 * b2 * D * L2 * RL3 - 16 * D2 * L2 * RL4 - 8 * L3 * b2 * D * L * RL2 * R -
             16 * b2 * D * L2 * RL2 * R + 32 * D2 * L2 * RL3 * R + b4 * R2 -
             16 * L3 * D2 * L * RL2 * R2 - 32 * D2 * L2 * RL2 * R2 + 4 * b2 * D * R3 +
             4 * D2 * R4 - 4 * L3 * L3p * RL2 * Ts2 - 4 * L4 * RL2 * Ts2 + 2 * L2 * R2 * Ts2;
    t.k[5] = 16 * L3 * D * L3p * RL2 * Ts + 16 * D * L4 * RL2 * Ts - 2 * b2 * L2 * R * Ts -
             8 * D * L2 * R2 * Ts;
    t.k[6] = -16 * L3 * D2 * L3p * RL2 - 16 * D2 * L4 * RL2 + 4 * b2 * D * L2 * R +
             8 * D2 * L2 * R2 + L4 * Ts2;
    t.k[7] = -4 * D * L4 * Ts;
    t.k[8] = 4 * D2 * L4;

    t.g[10] = 4 * L6;
    t.g[8] = -32 * L6 * RL2 - 24 * L3 * L5 * RL2 + 8 * L4 * R2;
    t.g[6] = 64 * L6 * RL4 + 96 * L3 * L5 * RL4 - 52 * L4 * RL4 + 32 * L4 * RL3 * R -
             64 * L4 * RL2 * R2 - 32 * L3 * L3p * RL2 * R2 + 4 * L2 * R4;
    t.g[4] = -8 * L3 * L * RL2 * R4 + 64 * L4 * RL6 - 128 * L4 * RL5 * R + 128 * L4 * RL4 * R2 +
             48 * L3 * L3p * RL6 - 96 * L3 * L3p * RL5 * R + 128 * L3 * L3p * RL4 * R2 -
             40 * L2 * RL4 * R2 + 32 * L2 * RL3 * R3 - 32 * L2 * RL2 * R4;
    t.g[2] = 16 * L2 * RL8 - 64 * L2 * RL7 * R + 128 * L2 * RL6 * R2 - 128 * L2 * RL5 * R3 +
             64 * L2 * RL4 * R4 + 16 * L3 * L * RL6 * R2 - 32 * L3 * L * RL5 * R3 +
             32 * L3 * L * RL4 * R4 - 4 * RL4 * R4;

    t.h[10] = -16 * L8 * Td2 * RL6 - 32 * L3 * L7 * Td2 * R * RL5 + 16 * L6 * Td2 * R2 * RL4;
    t.h[8] = 64 * L8 * Td2 * RL8 + 64 * L3 * L7 * Td2 * RL8 - 160 * L6 * Td2 * R * RL7 +
             128 * L3 * L7 * Td2 * R * RL7 - 64 * L6 * Td2 * R2 * RL6 -
             96 * L3 * L5 * Td2 * R2 * RL6 - 32 * L3 * L5 * Td2 * R3 * RL5 +
             32 * L4 * Td2 * R4 * RL4;
    t.h[6] = 64 * L6 * Td2 * RL10 - 208 * L4 * Td2 * R2 * RL8 - 192 * L3 * L5 * Td2 * R2 * RL8 +
             256 * L3 * L5 * Td2 * R * RL9 + 128 * L3 * L5 * Td2 * R3 * RL7 +
             96 * L4 * Td2 * R3 * RL7 - 96 * L4 * Td2 * R4 * RL6 -
             128 * L3 * L3p * Td2 * R4 * RL6 + 32 * L3 * L3p * Td2 * R5 * RL5 +
             16 * L2 * Td2 * R6 * RL4;
    t.h[4] = 128 * L4 * Td2 * R * RL11 - 256 * L4 * Td2 * R2 * RL10 +
             192 * L3 * L3p * Td2 * R2 * RL10 + 256 * L4 * Td2 * R3 * RL9 -
             256 * L3 * L3p * Td2 * R3 * RL9 - 128 * L4 * Td2 * R4 * RL8 +
             192 * L3 * L3p * Td2 * R4 * RL8 - 224 * L2 * Td2 * R4 * RL8 -
             128 * L3 * L3p * Td2 * R5 * RL7 + 288 * L2 * Td2 * R5 * RL7 -
             64 * L2 * Td2 * R6 * RL6 - 32 * L3 * L * Td2 * R6 * RL6 +
             32 * L3 * L * Td2 * R7 * RL5;
    t.h[2] = 64 * L2 * Td2 * R2 * RL12 - 128 * L2 * Td2 * R3 * RL11 + 64 * L2 * Td2 * R4 * RL10 +
             192 * L3 * L * Td2 * R4 * RL10 - 512 * L3 * L * Td2 * R5 * RL9 +
             448 * L3 * L * Td2 * R6 * RL8 - 16 * Td2 * R6 * RL8 - 128 * L3 * L * Td2 * R7 * RL7 +
             32 * Td2 * R7 * RL7 - 16 * Td2 * R8 * RL6;
    t.h[0] = 64 * Td2 * R4 * RL12 - 256 * Td2 * R5 * RL11 + 384 * Td2 * R6 * RL10 -
             256 * Td2 * R7 * RL9 + 64 * Td2 * R8 * RL8;
    return t;
}

std::vector<double> assemble_expansion(const expansion_tables& t) {
    std::vector<double> c(19, 0.0);
    c[0] = -t.h[0];
    c[2] = t.k[0] * t.g[2] - t.h[2];
    c[3] = t.k[1] * t.g[2];
    c[4] = t.k[0] * t.g[4] + t.k[2] * t.g[2] - t.h[4];
    c[5] = t.k[1] * t.g[4] + t.k[3] * t.g[2];
    c[6] = t.k[0] * t.g[6] + t.k[2] * t.g[4] + t.k[4] * t.g[2] - t.h[6];
    c[7] = t.k[1] * t.g[6] + t.k[3] * t.g[4] + t.k[5] * t.g[2];
    c[8] = t.k[0] * t.g[8] + t.k[2] * t.g[6] + t.k[4] * t.g[4] + t.k[6] * t.g[2] - t.h[8];
    c[9] = t.k[1] * t.g[8] + t.k[3] * t.g[6] + t.k[5] * t.g[4] + t.k[7] * t.g[2];
    c[10] = t.k[0] * t.g[10] + t.k[2] * t.g[8] + t.k[4] * t.g[6] + t.k[6] * t.g[4] +
            t.k[8] * t.g[2] - t.h[10];
    c[11] = t.k[1] * t.g[10] + t.k[3] * t.g[8] + t.k[5] * t.g[6] + t.k[7] * t.g[4];
    c[12] = t.k[2] * t.g[10] + t.k[4] * t.g[8] + t.k[6] * t.g[6] + t.k[8] * t.g[4];
    c[13] = t.k[3] * t.g[10] + t.k[5] * t.g[8] + t.k[7] * t.g[6];
    c[14] = t.k[4] * t.g[10] + t.k[6] * t.g[8] + t.k[8] * t.g[6];
    c[15] = t.k[5] * t.g[10] + t.k[7] * t.g[8];
    c[16] = t.k[6] * t.g[10] + t.k[8] * t.g[8];
    c[17] = t.k[7] * t.g[10];
    c[18] = -t.k[8] * t.g[10];
    return c;
}

}  // namespace

expansion_check check_expansion(const two_machine& p) {
    expansion_check chk;
    chk.coeffs = assemble_expansion(build_tables(p));

    const double lead_ref = -16.0 * p.D * p.D * std::pow(p.L, 10);
    chk.leading_matches =
        std::abs(chk.coeffs[18] - lead_ref) <= 1e-12 * std::max(std::abs(lead_ref), 1e-300);

    two_machine sym = p;
    sym.T_m1 = sym.T_m2 = 0.5 * p.torque_sum();
    const auto sym_tables = build_tables(sym);
    bool zeros = true;
    for (int k = 0; k <= 10; k += 2) zeros = zeros && sym_tables.h[k] == 0.0;
    chk.odd_part_vanishes = zeros;

    // do the two constructions agree on where the positive real speeds lie?
    const auto ref = num::real_roots(num::poly_roots(resultant_coeffs(p)));
    const auto alt = num::real_roots(num::poly_roots(chk.coeffs));
    double worst = 0.0;
    for (double r : ref) {
        if (r <= 0.0) continue;
        double best = std::numeric_limits<double>::infinity();
        for (double s : alt)
            if (s > 0.0) best = std::min(best, std::abs(s - r) / std::max(1.0, std::abs(r)));
        worst = std::max(worst, best);
    }
    chk.max_root_distance = worst;
    chk.shares_roots = worst <= 1e-6;
    return chk;
}

namespace {

std::vector<double> equilibrium_unknowns(const two_equilibrium& e) {
    std::vector<double> x(8);
    x[0] = e.delta;
    x[1] = e.omega;
    for (int k = 0; k < 6; ++k) x[static_cast<std::size_t>(2 + k)] = e.currents[static_cast<std::size_t>(k)];
    return x;
}

two_equilibrium equilibrium_from_unknowns(const std::vector<double>& x) {
    two_equilibrium e;
    e.delta = x[0];
    e.omega = x[1];
    for (int k = 0; k < 6; ++k) e.currents[static_cast<std::size_t>(k)] = x[static_cast<std::size_t>(2 + k)];
    return e;
}

// raw steady-state equations (unnormalized)
void steady_equations(const two_machine& p, const std::vector<double>& x, std::vector<double>& r) {
    const double s = std::sin(x[0]), c = std::cos(x[0]);
    const double w = x[1];
    const double d1 = x[2], q1 = x[3], d2 = x[4], q2 = x[5], d3 = x[6], q3 = x[7];
    const double lw = p.L * w, bw = p.b * w;
    r.resize(8);
    r[0] = -p.D * w + p.b * (s * d1 - c * q1) + p.T_m1;
    r[1] = -p.D * w - p.b * (s * d2 + c * q2) + p.T_m2;
    r[2] = -p.R * d1 - lw * q1 - bw * s + p.R_L * d3;
    r[3] = -p.R * q1 + lw * d1 + bw * c + p.R_L * q3;
    r[4] = -p.R * d2 - lw * q2 + bw * s - p.R_L * d3;
    r[5] = -p.R * q2 + lw * d2 + bw * c - p.R_L * q3;
    r[6] = -2.0 * p.R_L * d3 + p.R_L * (d1 - d2) - p.L3 * w * q3;
    r[7] = -2.0 * p.R_L * q3 + p.R_L * (q1 - q2) + p.L3 * w * d3;
}

bool same_equilibrium(const two_equilibrium& a, const two_equilibrium& b, double tol) {
    return std::abs(a.omega - b.omega) <= tol * std::max(1.0, std::abs(a.omega)) &&
           std::abs(a.delta - b.delta) <= tol;
}

std::vector<two_equilibrium> resultant_route(const two_machine& p,
                                             const std::vector<double>& poly,
                                             double residual_tol,
                                             std::vector<rejected_candidate>& rejected) {
    std::vector<two_equilibrium> found;
    for (const auto& z : num::poly_roots(poly)) {
        if (std::abs(z.imag()) > 1e-7 * (1.0 + std::abs(z.real()))) {
            rejected.push_back({z, "complex_root"});
            continue;
        }
        const double w = z.real();
        if (!(w > 0.0)) {
            rejected.push_back({z, "nonpositive_speed"});
            continue;
        }
        const auto rec = recover_angle(p, w);
        if (!rec.valid) {
            rejected.push_back({z, rec.reject_reason});
            continue;
        }
        two_equilibrium eq{rec.delta, w, closed_form_currents(p, w, rec.delta)};
        const double res = equilibrium_residual(p, eq);
        if (res > residual_tol) {
            rejected.push_back({z, "residual_check_failed"});
            continue;
        }
        bool dup = false;
        for (const auto& other : found)
            if (same_equilibrium(eq, other, 1e-6)) {
                dup = true;
                break;
            }
        if (dup)
            rejected.push_back({z, "duplicate_root"});
        else
            found.push_back(eq);
    }
    return found;
}

std::vector<two_equilibrium> newton_route(const two_machine& p, std::uint64_t seed,
                                          double residual_tol) {
    const double ts = p.torque_sum();
    const double wc = ts > 0.0 ? ts / (2.0 * p.D) : std::max(1.0, std::abs(p.torque_diff()) / (2.0 * p.D));

    // fixed per-equation normalization so the inner tolerance is scale-free
    std::array<double, 8> scale{};
    {
        const auto nominal = closed_form_currents(p, wc, 0.3);
        std::vector<double> x0 = equilibrium_unknowns({0.3, wc, nominal});
        const double tm = std::max({1.0, std::abs(p.T_m1), std::abs(p.T_m2), p.D * wc});
        double ie = 1.0;
        for (double v : nominal) ie = std::max(ie, std::abs(v));
        const double se = std::max({1.0, p.R * ie, p.b * wc, p.L * wc * ie});
        const double st = std::max({1.0, p.R_L * ie, p.L3 * wc * ie});
        scale = {tm, tm, se, se, se, se, st, st};
    }
    auto normalized = [&p, &scale](const std::vector<double>& x, std::vector<double>& r) {
        steady_equations(p, x, r);
        for (int k = 0; k < 8; ++k) r[static_cast<std::size_t>(k)] /= scale[static_cast<std::size_t>(k)];
    };

    const int n_starts = 160;
    num::splitmix64 rng(seed ^ 0x5eedf00dULL);
    std::vector<std::vector<double>> starts;
    starts.reserve(static_cast<std::size_t>(n_starts));
    for (int k = 0; k < n_starts; ++k) {
        const double w = wc * std::pow(10.0, rng.uniform(-0.7, 0.7));
        const double delta = rng.uniform(-half_pi + 1e-6, half_pi);
        starts.push_back(equilibrium_unknowns({delta, w, closed_form_currents(p, w, delta)}));
    }

    num::multistart_options opts;
    opts.inner.tol = 1e-11;
    opts.inner.max_iterations = 60;
    opts.dedup_tol = 1e-6;
    const auto solutions = num::newton_multistart(normalized, starts, opts);

    // the rest continuum (zero speed, zero current, free angle) is out of
    // scope; a scale-aware floor keeps its numerical zeros out of the list
    const double omega_floor = 1e-8 * wc;
    std::vector<two_equilibrium> found;
    for (const auto& x : solutions) {
        if (!(x[1] > omega_floor)) continue;
        two_equilibrium eq = canonicalize(equilibrium_from_unknowns(x));
        if (equilibrium_residual(p, eq) > residual_tol) continue;
        bool dup = false;
        for (const auto& other : found)
            if (same_equilibrium(eq, other, 1e-6)) {
                dup = true;
                break;
            }
        if (!dup) found.push_back(eq);
    }
    return found;
}

}  // namespace

two_report find_equilibria(const two_machine& p, solve_route route, std::uint64_t seed,
                           double residual_tol) {
    p.validate();
    two_report rep;
    rep.polynomial = resultant_coeffs(p);

    if (p.b == 0.0) {
        // no excitation: currents vanish, machine torques must balance alone
        if (p.torque_diff() == 0.0 && p.torque_sum() > 0.0) {
            rep.angle_continuum = true;  // any angle offset works; report delta = 0
            rep.equilibria.push_back({0.0, p.torque_sum() / (2.0 * p.D), {}});
        }
        return rep;
    }

    std::vector<two_equilibrium> from_poly, from_newton;
    if (route != solve_route::newton)
        from_poly = resultant_route(p, rep.polynomial, residual_tol, rep.rejected);
    if (route != solve_route::resultant) from_newton = newton_route(p, seed, residual_tol);

    if (route == solve_route::resultant) {
        rep.equilibria = std::move(from_poly);
    } else if (route == solve_route::newton) {
        rep.equilibria = std::move(from_newton);
    } else {
        // cross-check: every equilibrium should be seen by both routes
        rep.equilibria = from_poly;
        for (const auto& eq : from_poly) {
            bool seen = false;
            for (const auto& other : from_newton)
                if (same_equilibrium(eq, other, 1e-6)) {
                    seen = true;
                    break;
                }
            if (!seen)
                rep.disagreements.push_back(
                    {"polynomial route equilibrium " + format_pair(eq.omega, eq.delta) +
                     " not found by the multistart route"});
        }
        for (const auto& eq : from_newton) {
            bool seen = false;
            for (const auto& other : from_poly)
                if (same_equilibrium(eq, other, 1e-6)) {
                    seen = true;
                    break;
                }
            if (!seen) {
                rep.disagreements.push_back(
                    {"multistart route equilibrium " + format_pair(eq.omega, eq.delta) +
                     " not found by the polynomial route"});
                rep.equilibria.push_back(eq);  // it passed the residual gate: emit it, flagged
            }
        }
        rep.routes_agree = rep.disagreements.empty();
    }

    std::sort(rep.equilibria.begin(), rep.equilibria.end(),
              [](const two_equilibrium& a, const two_equilibrium& b) { return a.omega > b.omega; });
    return rep;
}

void rhs_dq(const two_machine& p, const std::vector<double>& x, std::vector<double>& dx) {
    dx.resize(9);
    const double s = std::sin(x[0]), c = std::cos(x[0]);
    const double w1 = x[1], w2 = x[2];
    const double d1 = x[3], q1 = x[4], d2 = x[5], q2 = x[6], d3 = x[7], q3 = x[8];
    const double wb = 0.5 * (w1 + w2);
    dx[0] = 0.5 * (w2 - w1);
    dx[1] = (-p.D * w1 + p.b * (s * d1 - c * q1) + p.T_m1) / p.J;
    dx[2] = (-p.D * w2 - p.b * (s * d2 + c * q2) + p.T_m2) / p.J;
    dx[3] = (-p.R * d1 + p.R_L * d3 - p.b * s * w1) / p.L - wb * q1;
    dx[4] = (-p.R * q1 + p.R_L * q3 + p.b * c * w1) / p.L + wb * d1;
    dx[5] = (-p.R * d2 - p.R_L * d3 + p.b * s * w2) / p.L - wb * q2;
    dx[6] = (-p.R * q2 - p.R_L * q3 + p.b * c * w2) / p.L + wb * d2;
    dx[7] = (-2.0 * p.R_L * d3 + p.R_L * (d1 - d2)) / p.L3 - wb * q3;
    dx[8] = (-2.0 * p.R_L * q3 + p.R_L * (q1 - q2)) / p.L3 + wb * d3;
}

void rhs_abc(const two_machine& p, const std::vector<double>& x, std::vector<double>& dx) {
    dx.resize(13);
    const double th1 = x[0], w1 = x[1], th2 = x[2], w2 = x[3];
    const std::array<double, 3> i1{x[4], x[5], x[6]};
    const std::array<double, 3> i2{x[7], x[8], x[9]};
    const std::array<double, 3> i3{x[10], x[11], x[12]};

    const auto e1 = emf_abc(p.b, th1, w1);
    const auto e2 = emf_abc(p.b, th2, w2);
    const auto en1 = emf_abc(p.b, th1, 1.0);
    const auto en2 = emf_abc(p.b, th2, 1.0);
    const double torque1 = en1[0] * i1[0] + en1[1] * i1[1] + en1[2] * i1[2];
    const double torque2 = en2[0] * i2[0] + en2[1] * i2[1] + en2[2] * i2[2];

    dx[0] = w1;
    dx[1] = (-p.D * w1 - torque1 + p.T_m1) / p.J;
    dx[2] = w2;
    dx[3] = (-p.D * w2 - torque2 + p.T_m2) / p.J;
    for (int k = 0; k < 3; ++k) {
        const auto ks = static_cast<std::size_t>(k);
        dx[4 + ks] = (-p.R * i1[ks] + e1[ks] + p.R_L * i3[ks]) / p.L;
        dx[7 + ks] = (-p.R * i2[ks] + e2[ks] - p.R_L * i3[ks]) / p.L;
        dx[10 + ks] = (p.R_L * (i1[ks] - i2[ks]) - 2.0 * p.R_L * i3[ks]) / p.L3;
    }
}

num::matrix jacobian_dq(const two_machine& p, const std::vector<double>& x) {
    const double s = std::sin(x[0]), c = std::cos(x[0]);
    const double w1 = x[1], w2 = x[2];
    const double d1 = x[3], q1 = x[4], d2 = x[5], q2 = x[6], d3 = x[7], q3 = x[8];
    const double wb = 0.5 * (w1 + w2);
    const double boL = p.b / p.L, rl = p.R_L / p.L;

    num::matrix a(9, 9, 0.0);
    a(0, 1) = -0.5;
    a(0, 2) = 0.5;

    a(1, 0) = p.b * (c * d1 + s * q1) / p.J;
    a(1, 1) = -p.D / p.J;
    a(1, 3) = p.b * s / p.J;
    a(1, 4) = -p.b * c / p.J;

    a(2, 0) = p.b * (-c * d2 + s * q2) / p.J;
    a(2, 2) = -p.D / p.J;
    a(2, 5) = -p.b * s / p.J;
    a(2, 6) = -p.b * c / p.J;

    a(3, 0) = -boL * c * w1;
    a(3, 1) = -0.5 * q1 - boL * s;
    a(3, 2) = -0.5 * q1;
    a(3, 3) = -p.R / p.L;
    a(3, 4) = -wb;
    a(3, 7) = rl;

    a(4, 0) = -boL * s * w1;
    a(4, 1) = 0.5 * d1 + boL * c;
    a(4, 2) = 0.5 * d1;
    a(4, 3) = wb;
    a(4, 4) = -p.R / p.L;
    a(4, 8) = rl;

    a(5, 0) = boL * c * w2;
    a(5, 1) = -0.5 * q2;
    a(5, 2) = -0.5 * q2 + boL * s;
    a(5, 5) = -p.R / p.L;
    a(5, 6) = -wb;
    a(5, 7) = -rl;

    a(6, 0) = -boL * s * w2;
    a(6, 1) = 0.5 * d2;
    a(6, 2) = 0.5 * d2 + boL * c;
    a(6, 5) = wb;
    a(6, 6) = -p.R / p.L;
    a(6, 8) = -rl;

    a(7, 1) = -0.5 * q3;
    a(7, 2) = -0.5 * q3;
    a(7, 3) = p.R_L / p.L3;
    a(7, 5) = -p.R_L / p.L3;
    a(7, 7) = -2.0 * p.R_L / p.L3;
    a(7, 8) = -wb;

    a(8, 1) = 0.5 * d3;
    a(8, 2) = 0.5 * d3;
    a(8, 4) = p.R_L / p.L3;
    a(8, 6) = -p.R_L / p.L3;
    a(8, 7) = wb;
    a(8, 8) = -2.0 * p.R_L / p.L3;
    return a;
}

num::matrix jacobian(const two_machine& p, const two_equilibrium& e) {
    std::vector<double> x(9);
    x[0] = e.delta;
    x[1] = e.omega;
    x[2] = e.omega;
    for (int k = 0; k < 6; ++k) x[static_cast<std::size_t>(3 + k)] = e.currents[static_cast<std::size_t>(k)];
    return jacobian_dq(p, x);
}

two_stability classify(const two_machine& p, const two_equilibrium& e, double eps) {
    two_stability s;
    s.equilibrium = e;
    s.eigenvalues = num::eigenvalues(jacobian(p, e));
    std::sort(s.eigenvalues.begin(), s.eigenvalues.end(),
              [](const std::complex<double>& a, const std::complex<double>& b) {
                  if (a.real() != b.real()) return a.real() > b.real();
                  return a.imag() > b.imag();
              });
    s.eigen_verdict = eigenvalue_verdict(s.eigenvalues, eps);
    return s;
}

}  // namespace smstab
