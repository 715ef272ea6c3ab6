#pragma once

#include <complex>
#include <vector>

namespace smstab::num {

// polynomials are ascending coefficient vectors: c[k] multiplies x^k

std::vector<double> poly_mul(const std::vector<double>& a, const std::vector<double>& b);
std::vector<double> poly_add(const std::vector<double>& a, const std::vector<double>& b);
std::vector<double> poly_scale(std::vector<double> a, double s);
std::vector<double> poly_derivative(const std::vector<double>& c);

double poly_eval(const std::vector<double>& c, double x);
std::complex<double> poly_eval(const std::vector<double>& c, std::complex<double> x);

// index of the highest nonzero coefficient; -1 for the zero polynomial
int poly_degree(const std::vector<double>& c);

struct root_options {
    int polish_iterations = 3;   // complex Newton steps on the original coefficients
    int max_qr_sweeps = 200;     // per-eigenvalue iteration cap before giving up
};

// all complex roots. Exact leading zeros are trimmed, exact zero roots deflated,
// degree <= 2 solved in closed form; higher degrees go through a geometric-mean
// coefficient rescale, the balanced companion matrix, and Francis double-shift QR.
// Throws std::invalid_argument for the zero polynomial, numeric_error on QR stall.
std::vector<std::complex<double>> poly_roots(const std::vector<double>& c,
                                             const root_options& opts = {});

// roots passing the realness filter |Im z| <= tol * (1 + |Re z|), as real numbers
std::vector<double> real_roots(const std::vector<std::complex<double>>& roots,
                               double im_tol = 1e-7);

}  // namespace smstab::num
