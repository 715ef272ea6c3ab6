#include <smstab/numerics/linalg.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <smstab/error.hpp>

namespace smstab::num {

matrix matrix::identity(int n) {
    matrix m(n, n, 0.0);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

matrix operator*(const matrix& a, const matrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("matrix product: shape mismatch");
    matrix c(a.rows(), b.cols(), 0.0);
    for (int i = 0; i < a.rows(); ++i)
        for (int k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

std::vector<double> operator*(const matrix& a, const std::vector<double>& x) {
    if (a.cols() != static_cast<int>(x.size()))
        throw std::invalid_argument("matrix-vector product: shape mismatch");
    std::vector<double> y(static_cast<std::size_t>(a.rows()), 0.0);
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) y[static_cast<std::size_t>(i)] += a(i, j) * x[static_cast<std::size_t>(j)];
    return y;
}

std::vector<double> solve(matrix a, std::vector<double> b) {
    const int n = a.rows();
    if (a.cols() != n || static_cast<int>(b.size()) != n)
        throw std::invalid_argument("solve: shape mismatch");
    double scale = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) scale = std::max(scale, std::abs(a(i, j)));
    if (scale == 0.0) throw numeric_error("solve: zero matrix");
    const double tiny = scale * n * std::numeric_limits<double>::epsilon();

    for (int k = 0; k < n; ++k) {
        int piv = k;
        for (int i = k + 1; i < n; ++i)
            if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
        if (std::abs(a(piv, k)) <= tiny) throw numeric_error("solve: singular matrix");
        if (piv != k) {
            for (int j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
            std::swap(b[static_cast<std::size_t>(k)], b[static_cast<std::size_t>(piv)]);
        }
        for (int i = k + 1; i < n; ++i) {
            const double f = a(i, k) / a(k, k);
            if (f == 0.0) continue;
            a(i, k) = 0.0;
            for (int j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
            b[static_cast<std::size_t>(i)] -= f * b[static_cast<std::size_t>(k)];
        }
    }
    for (int i = n - 1; i >= 0; --i) {
        double s = b[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < n; ++j) s -= a(i, j) * b[static_cast<std::size_t>(j)];
        b[static_cast<std::size_t>(i)] = s / a(i, i);
    }
    return b;
}

void balance_in_place(matrix& a) {
    const int n = a.rows();
    bool done = false;
    while (!done) {
        done = true;
        for (int i = 0; i < n; ++i) {
            double r = 0.0, c = 0.0;
            for (int j = 0; j < n; ++j)
                if (j != i) {
                    c += std::abs(a(j, i));
                    r += std::abs(a(i, j));
                }
            if (c == 0.0 || r == 0.0) continue;
            const double s = c + r;
            double g = r / 2.0, f = 1.0;
            while (c < g) {
                f *= 2.0;
                c *= 4.0;
            }
            g = r * 2.0;
            while (c > g) {
                f /= 2.0;
                c /= 4.0;
            }
            if ((c + r) / f < 0.95 * s) {
                done = false;
                const double ginv = 1.0 / f;
                for (int j = 0; j < n; ++j) a(i, j) *= ginv;
                for (int j = 0; j < n; ++j) a(j, i) *= f;
            }
        }
    }
}

void hessenberg_in_place(matrix& a) {
    const int n = a.rows();
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int k = 0; k + 2 < n; ++k) {
        double norm = 0.0;
        for (int i = k + 1; i < n; ++i) norm += a(i, k) * a(i, k);
        norm = std::sqrt(norm);
        if (norm == 0.0) continue;
        const double alpha = -std::copysign(norm, a(k + 1, k));
        double vnorm2 = 0.0;
        for (int i = k + 1; i < n; ++i) {
            v[static_cast<std::size_t>(i)] = a(i, k);
            if (i == k + 1) v[static_cast<std::size_t>(i)] -= alpha;
            vnorm2 += v[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(i)];
        }
        if (vnorm2 == 0.0) continue;
        const double beta = 2.0 / vnorm2;
        // rows: A <- (I - beta v v^T) A
        for (int j = k; j < n; ++j) {
            double s = 0.0;
            for (int i = k + 1; i < n; ++i) s += v[static_cast<std::size_t>(i)] * a(i, j);
            s *= beta;
            for (int i = k + 1; i < n; ++i) a(i, j) -= s * v[static_cast<std::size_t>(i)];
        }
        // columns: A <- A (I - beta v v^T)
        for (int i = 0; i < n; ++i) {
            double s = 0.0;
            for (int j = k + 1; j < n; ++j) s += a(i, j) * v[static_cast<std::size_t>(j)];
            s *= beta;
            for (int j = k + 1; j < n; ++j) a(i, j) -= s * v[static_cast<std::size_t>(j)];
        }
        a(k + 1, k) = alpha;
        for (int i = k + 2; i < n; ++i) a(i, k) = 0.0;
    }
}

// Francis double-shift QR on an upper Hessenberg matrix, EISPACK hqr lineage
std::vector<std::complex<double>> hessenberg_eigenvalues(matrix h, int max_sweeps) {
    const int n = h.rows();
    if (h.cols() != n) throw std::invalid_argument("hessenberg_eigenvalues: not square");
    std::vector<std::complex<double>> w(static_cast<std::size_t>(n));
    if (n == 0) return w;

    const double eps = std::numeric_limits<double>::epsilon();
    double anorm = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = std::max(i - 1, 0); j < n; ++j) anorm += std::abs(h(i, j));
    if (anorm == 0.0) return w;  // zero matrix

    double t = 0.0;
    int nn = n - 1;
    while (nn >= 0) {
        int its = 0;
        int l = 0;
        do {
            // locate a negligible subdiagonal entry
            for (l = nn; l >= 1; --l) {
                double s = std::abs(h(l - 1, l - 1)) + std::abs(h(l, l));
                if (s == 0.0) s = anorm;
                if (std::abs(h(l, l - 1)) <= eps * s) {
                    h(l, l - 1) = 0.0;
                    break;
                }
            }
            if (l < 0) l = 0;
            double x = h(nn, nn);
            if (l == nn) {
                w[static_cast<std::size_t>(nn)] = {x + t, 0.0};
                --nn;
            } else {
                double y = h(nn - 1, nn - 1);
                double zw = h(nn, nn - 1) * h(nn - 1, nn);
                if (l == nn - 1) {
                    // 2x2 trailing block resolves directly
                    double p = 0.5 * (y - x);
                    double q = p * p + zw;
                    double z = std::sqrt(std::abs(q));
                    x += t;
                    if (q >= 0.0) {
                        z = p + std::copysign(z, p);
                        w[static_cast<std::size_t>(nn - 1)] = {x + z, 0.0};
                        w[static_cast<std::size_t>(nn)] = w[static_cast<std::size_t>(nn - 1)];
                        if (z != 0.0) w[static_cast<std::size_t>(nn)] = {x - zw / z, 0.0};
                    } else {
                        w[static_cast<std::size_t>(nn - 1)] = {x + p, z};
                        w[static_cast<std::size_t>(nn)] = {x + p, -z};
                    }
                    nn -= 2;
                } else {
                    if (its == max_sweeps)
                        throw numeric_error("hessenberg_eigenvalues: QR iteration stalled");
                    if (its != 0 && its % 10 == 0) {
                        // exceptional shift breaks cycling
                        t += x;
                        for (int i = 0; i <= nn; ++i) h(i, i) -= x;
                        double s = std::abs(h(nn, nn - 1)) + std::abs(h(nn - 1, nn - 2));
                        y = x = 0.75 * s;
                        zw = -0.4375 * s * s;
                    }
                    ++its;
                    double p = 0.0, q = 0.0, r = 0.0, z = 0.0;
                    int m;
                    for (m = nn - 2; m >= l; --m) {
                        z = h(m, m);
                        const double rr = x - z;
                        const double ss = y - z;
                        p = (rr * ss - zw) / h(m + 1, m) + h(m, m + 1);
                        q = h(m + 1, m + 1) - z - rr - ss;
                        r = h(m + 2, m + 1);
                        const double sc = std::abs(p) + std::abs(q) + std::abs(r);
                        p /= sc;
                        q /= sc;
                        r /= sc;
                        if (m == l) break;
                        const double u = std::abs(h(m, m - 1)) * (std::abs(q) + std::abs(r));
                        const double v =
                            std::abs(p) * (std::abs(h(m - 1, m - 1)) + std::abs(z) + std::abs(h(m + 1, m + 1)));
                        if (u <= eps * v) break;
                    }
                    for (int i = m + 2; i <= nn; ++i) {
                        h(i, i - 2) = 0.0;
                        if (i > m + 2) h(i, i - 3) = 0.0;
                    }
                    for (int k = m; k <= nn - 1; ++k) {
                        if (k != m) {
                            p = h(k, k - 1);
                            q = h(k + 1, k - 1);
                            r = (k + 2 <= nn) ? h(k + 2, k - 1) : 0.0;
                            x = std::abs(p) + std::abs(q) + std::abs(r);
                            if (x != 0.0) {
                                p /= x;
                                q /= x;
                                r /= x;
                            }
                        }
                        double s = std::copysign(std::sqrt(p * p + q * q + r * r), p);
                        if (s == 0.0) continue;
                        if (k == m) {
                            if (l != m) h(k, k - 1) = -h(k, k - 1);
                        } else {
                            h(k, k - 1) = -s * x;
                        }
                        p += s;
                        x = p / s;
                        double yy = q / s;
                        z = r / s;
                        q /= p;
                        r /= p;
                        const bool three = (k + 2 <= nn);
                        for (int j = k; j <= nn; ++j) {
                            double pp = h(k, j) + q * h(k + 1, j);
                            if (three) {
                                pp += r * h(k + 2, j);
                                h(k + 2, j) -= pp * z;
                            }
                            h(k + 1, j) -= pp * yy;
                            h(k, j) -= pp * x;
                        }
                        const int mmin = std::min(nn, k + 3);
                        for (int i = l; i <= mmin; ++i) {
                            double pp = x * h(i, k) + yy * h(i, k + 1);
                            if (three) {
                                pp += z * h(i, k + 2);
                                h(i, k + 2) -= pp * r;
                            }
                            h(i, k + 1) -= pp * q;
                            h(i, k) -= pp;
                        }
                    }
                }
            }
        } while (l < nn - 1);
    }
    return w;
}

std::vector<std::complex<double>> eigenvalues(matrix a, int max_sweeps) {
    if (a.cols() != a.rows()) throw std::invalid_argument("eigenvalues: not square");
    balance_in_place(a);
    hessenberg_in_place(a);
    return hessenberg_eigenvalues(std::move(a), max_sweeps);
}

double max_real_part(const std::vector<std::complex<double>>& eigs) {
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& z : eigs) m = std::max(m, z.real());
    return m;
}

}  // namespace smstab::num
