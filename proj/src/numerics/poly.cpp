#include <smstab/numerics/poly.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <smstab/error.hpp>
#include <smstab/numerics/linalg.hpp>

namespace smstab::num {

std::vector<double> poly_mul(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.empty() || b.empty()) return {};
    std::vector<double> c(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    return c;
}

std::vector<double> poly_add(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> c(std::max(a.size(), b.size()), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) c[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) c[i] += b[i];
    return c;
}

std::vector<double> poly_scale(std::vector<double> a, double s) {
    for (double& v : a) v *= s;
    return a;
}

std::vector<double> poly_derivative(const std::vector<double>& c) {
    if (c.size() <= 1) return {0.0};
    std::vector<double> d(c.size() - 1);
    for (std::size_t k = 1; k < c.size(); ++k) d[k - 1] = static_cast<double>(k) * c[k];
    return d;
}

double poly_eval(const std::vector<double>& c, double x) {
    double v = 0.0;
    for (std::size_t k = c.size(); k-- > 0;) v = v * x + c[k];
    return v;
}

std::complex<double> poly_eval(const std::vector<double>& c, std::complex<double> x) {
    std::complex<double> v = 0.0;
    for (std::size_t k = c.size(); k-- > 0;) v = v * x + c[k];
    return v;
}

int poly_degree(const std::vector<double>& c) {
    for (std::size_t k = c.size(); k-- > 0;)
        if (c[k] != 0.0) return static_cast<int>(k);
    return -1;
}

namespace {

void polish_roots(const std::vector<double>& c, std::vector<std::complex<double>>& roots,
                  int iterations) {
    const std::vector<double> dc = poly_derivative(c);
    for (auto& z : roots) {
        for (int it = 0; it < iterations; ++it) {
            const std::complex<double> p = poly_eval(c, z);
            const std::complex<double> dp = poly_eval(dc, z);
            if (!(std::abs(dp) > 0.0)) break;
            const std::complex<double> step = p / dp;
            if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
            // guard against polishing away from the basin on ill-conditioned clusters
            if (std::abs(step) > 0.5 * (1.0 + std::abs(z))) break;
            z -= step;
        }
    }
}

std::vector<std::complex<double>> quadratic_roots(double c0, double c1, double c2) {
    // c2 x^2 + c1 x + c0, cancellation-free form
    const double disc = c1 * c1 - 4.0 * c2 * c0;
    if (disc >= 0.0) {
        const double s = std::sqrt(disc);
        const double q = -0.5 * (c1 + std::copysign(s, c1));
        std::complex<double> r1, r2;
        if (q != 0.0)
            r1 = c0 / q;
        else
            r1 = 0.0;
        r2 = q / c2;
        return {r1, r2};
    }
    const double re = -c1 / (2.0 * c2);
    const double im = std::sqrt(-disc) / (2.0 * c2);
    return {{re, im}, {re, -im}};
}

}  // namespace

std::vector<std::complex<double>> poly_roots(const std::vector<double>& coeffs,
                                             const root_options& opts) {
    std::vector<double> c = coeffs;
    for (double v : c)
        if (!std::isfinite(v)) throw std::invalid_argument("poly_roots: non-finite coefficient");
    const int deg_total = poly_degree(c);
    if (deg_total < 0) throw std::invalid_argument("poly_roots: zero polynomial");
    c.resize(static_cast<std::size_t>(deg_total) + 1);

    std::vector<std::complex<double>> roots;
    // exact zero roots deflate without arithmetic
    std::size_t first = 0;
    while (first < c.size() - 1 && c[first] == 0.0) {
        roots.emplace_back(0.0, 0.0);
        ++first;
    }
    c.erase(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(first));

    const int deg = static_cast<int>(c.size()) - 1;
    if (deg == 0) return roots;
    if (deg == 1) {
        roots.emplace_back(-c[0] / c[1], 0.0);
        return roots;
    }
    if (deg == 2) {
        auto qr = quadratic_roots(c[0], c[1], c[2]);
        roots.insert(roots.end(), qr.begin(), qr.end());
        return roots;
    }

    // geometric-mean rescale x = sigma * y evens out wide coefficient ranges
    double sigma = std::pow(std::abs(c[0] / c[deg]), 1.0 / deg);
    if (!(sigma > 0.0) || !std::isfinite(sigma)) sigma = 1.0;

    std::vector<double> m(static_cast<std::size_t>(deg) + 1);
    for (int k = 0; k <= deg; ++k) m[k] = c[k] / c[deg] * std::pow(sigma, k - deg);

    // companion matrix: subdiagonal ones, last column -m_k; already Hessenberg
    matrix comp(deg, deg, 0.0);
    for (int i = 0; i + 1 < deg; ++i) comp(i + 1, i) = 1.0;
    for (int i = 0; i < deg; ++i) comp(i, deg - 1) = -m[i];

    balance_in_place(comp);
    auto eigs = hessenberg_eigenvalues(std::move(comp), opts.max_qr_sweeps);
    for (auto& z : eigs) z *= sigma;
    polish_roots(c, eigs, opts.polish_iterations);
    roots.insert(roots.end(), eigs.begin(), eigs.end());
    return roots;
}

std::vector<double> real_roots(const std::vector<std::complex<double>>& roots, double im_tol) {
    std::vector<double> out;
    for (const auto& z : roots)
        if (std::abs(z.imag()) <= im_tol * (1.0 + std::abs(z.real()))) out.push_back(z.real());
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace smstab::num
