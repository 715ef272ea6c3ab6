#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include <smstab/error.hpp>
#include <smstab/numerics/linalg.hpp>
#include <smstab/numerics/poly.hpp>
#include <smstab/numerics/rng.hpp>

using namespace smstab::num;

namespace {

matrix random_matrix(splitmix64& rng, int n, double spread) {
    matrix a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = rng.uniform(-1.0, 1.0) * rng.log_factor(spread);
    return a;
}

// characteristic polynomial (ascending) by the Faddeev-LeVerrier recurrence:
// an independent oracle that never touches the QR path
std::vector<double> char_poly(const matrix& a) {
    const int n = a.rows();
    std::vector<double> c(static_cast<std::size_t>(n) + 1, 0.0);
    c[static_cast<std::size_t>(n)] = 1.0;
    matrix m = matrix::identity(n);
    for (int k = 1; k <= n; ++k) {
        m = a * m;
        double tr = 0.0;
        for (int i = 0; i < n; ++i) tr += m(i, i);
        const double ck = -tr / k;
        c[static_cast<std::size_t>(n - k)] = ck;
        for (int i = 0; i < n; ++i) m(i, i) += ck;
    }
    return c;
}

double spectrum_distance(std::vector<std::complex<double>> a, std::vector<std::complex<double>> b) {
    double worst = 0.0;
    for (const auto& x : a) {
        double best = 1e300;
        for (const auto& y : b) best = std::min(best, std::abs(x - y));
        worst = std::max(worst, best / std::max(1.0, std::abs(x)));
    }
    return worst;
}

}  // namespace

TEST_CASE("matrix product and identity") {
    matrix a(2, 3);
    a(0, 0) = 1;
    a(0, 1) = 2;
    a(0, 2) = 3;
    a(1, 0) = 4;
    a(1, 1) = 5;
    a(1, 2) = 6;
    const auto y = a * std::vector<double>{1.0, 0.0, -1.0};
    CHECK(y == std::vector<double>{-2.0, -2.0});

    const auto i3 = matrix::identity(3);
    matrix b(3, 2);
    b(0, 0) = 7;
    b(2, 1) = -1;
    const auto c = i3 * b;
    CHECK(c(0, 0) == 7.0);
    CHECK(c(2, 1) == -1.0);
    CHECK(c(1, 0) == 0.0);
}

TEST_CASE("linear solve") {
    matrix a(3, 3);
    a(0, 0) = 2;
    a(0, 1) = 1;
    a(0, 2) = -1;
    a(1, 0) = -3;
    a(1, 1) = -1;
    a(1, 2) = 2;
    a(2, 0) = -2;
    a(2, 1) = 1;
    a(2, 2) = 2;
    const auto x = solve(a, {8.0, -11.0, -3.0});
    CHECK(x[0] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(x[1] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(x[2] == doctest::Approx(-1.0).epsilon(1e-12));

    matrix s(2, 2);
    s(0, 0) = 1;
    s(0, 1) = 2;
    s(1, 0) = 2;
    s(1, 1) = 4;
    CHECK_THROWS_AS((void)solve(s, {1.0, 1.0}), smstab::numeric_error);
}

TEST_CASE("eigenvalues of structured matrices") {
    matrix d(3, 3);
    d(0, 0) = -1;
    d(1, 1) = 2.5;
    d(2, 2) = 7;
    auto e = eigenvalues(d);
    std::sort(e.begin(), e.end(), [](auto a, auto b) { return a.real() < b.real(); });
    CHECK(e[0].real() == doctest::Approx(-1.0).epsilon(1e-13));
    CHECK(e[1].real() == doctest::Approx(2.5).epsilon(1e-13));
    CHECK(e[2].real() == doctest::Approx(7.0).epsilon(1e-13));

    // rotation by 90 degrees: purely imaginary pair
    matrix r(2, 2);
    r(0, 1) = -1;
    r(1, 0) = 1;
    auto er = eigenvalues(r);
    CHECK(std::abs(er[0].real()) <= 1e-12);
    CHECK(std::abs(std::abs(er[0].imag()) - 1.0) <= 1e-12);

    // defective block: repeated eigenvalue, accuracy degrades to ~sqrt(eps)
    matrix j(2, 2);
    j(0, 0) = 1;
    j(0, 1) = 1;
    j(1, 1) = 1;
    for (auto z : eigenvalues(j)) CHECK(std::abs(z - 1.0) <= 1e-6);
}

TEST_CASE("companion route agrees with direct eigensolve") {
    // x^3 - 9x^2 + 17x - 9: simple spectrum with known closed form
    const auto roots = poly_roots({-9.0, 17.0, -9.0, 1.0});
    std::vector<std::complex<double>> expect{
        {1.0, 0.0}, {4.0 - std::sqrt(7.0), 0.0}, {4.0 + std::sqrt(7.0), 0.0}};
    CHECK(spectrum_distance(expect, roots) <= 1e-12);
}

TEST_CASE("eigenvalues match the characteristic polynomial oracle") {
    splitmix64 rng(99);
    for (int rep = 0; rep < 200; ++rep) {
        const int n = 2 + static_cast<int>(rng.uniform01() * 3.0);
        const auto a = random_matrix(rng, n, 1.0);
        const auto eig = eigenvalues(a);
        const auto cp = poly_roots(char_poly(a));
        INFO("rep ", rep, " n ", n);
        CHECK(spectrum_distance(eig, cp) <= 1e-8);
        CHECK(spectrum_distance(cp, eig) <= 1e-8);
    }
}

TEST_CASE("balancing and reduction preserve the spectrum") {
    splitmix64 rng(7);
    for (int rep = 0; rep < 20; ++rep) {
        auto a = random_matrix(rng, 6, 3.0);  // badly scaled on purpose
        const auto direct = eigenvalues(a);
        const auto cp = poly_roots(char_poly(a));
        CHECK(spectrum_distance(direct, cp) <= 1e-7);
    }
}

TEST_CASE("max real part") {
    CHECK(max_real_part({{-3.0, 1.0}, {-0.5, 2.0}, {-10.0, 0.0}}) == doctest::Approx(-0.5));
    CHECK(max_real_part({}) == -std::numeric_limits<double>::infinity());
    CHECK(max_real_part({{2.0, -1.0}}) == doctest::Approx(2.0));
}
