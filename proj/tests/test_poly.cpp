#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include <smstab/error.hpp>
#include <smstab/numerics/poly.hpp>
#include <smstab/numerics/rng.hpp>

using namespace smstab::num;

namespace {

// polynomial with the given roots, built by convolution
std::vector<double> from_roots(const std::vector<std::complex<double>>& roots) {
    std::vector<std::complex<double>> c{1.0};
    for (const auto& r : roots) {
        std::vector<std::complex<double>> next(c.size() + 1, 0.0);
        for (std::size_t k = 0; k < c.size(); ++k) {
            next[k] -= r * c[k];
            next[k + 1] += c[k];
        }
        c = next;
    }
    std::vector<double> out(c.size());
    for (std::size_t k = 0; k < c.size(); ++k) out[k] = c[k].real();
    return out;
}

double inf_norm(const std::vector<double>& c) {
    double m = 0.0;
    for (double v : c) m = std::max(m, std::abs(v));
    return m;
}

// worst distance from each expected root to its nearest computed root
double match_distance(const std::vector<std::complex<double>>& expected,
                      const std::vector<std::complex<double>>& got) {
    double worst = 0.0;
    for (const auto& e : expected) {
        double best = 1e300;
        for (const auto& g : got) best = std::min(best, std::abs(g - e));
        worst = std::max(worst, best / std::max(1.0, std::abs(e)));
    }
    return worst;
}

}  // namespace

TEST_CASE("arithmetic helpers") {
    CHECK(poly_mul({1.0, 1.0}, {-1.0, 1.0}) == std::vector<double>{-1.0, 0.0, 1.0});
    CHECK(poly_add({1.0, 2.0}, {3.0, 4.0, 5.0}) == std::vector<double>{4.0, 6.0, 5.0});
    CHECK(poly_scale({1.0, -2.0}, 3.0) == std::vector<double>{3.0, -6.0});
    CHECK(poly_derivative({5.0, 3.0, 2.0}) == std::vector<double>{3.0, 4.0});
    CHECK(poly_derivative({5.0}) == std::vector<double>{0.0});
    CHECK(poly_eval({1.0, 2.0, 3.0}, 2.0) == doctest::Approx(17.0));
    CHECK(poly_degree({0.0, 0.0}) == -1);
    CHECK(poly_degree({1.0, 0.0}) == 0);
    CHECK(poly_degree({1.0, 2.0, 0.0}) == 1);
}

TEST_CASE("closed forms for low degree") {
    auto r1 = poly_roots({-6.0, 2.0});
    REQUIRE(r1.size() == 1);
    CHECK(r1[0].real() == doctest::Approx(3.0).epsilon(1e-14));

    // stable quadratic form must not cancel: roots 1e-8 and 1e8
    auto r2 = poly_roots(from_roots({1e-8, 1e8}));
    REQUIRE(r2.size() == 2);
    std::sort(r2.begin(), r2.end(),
              [](auto a, auto b) { return std::abs(a) < std::abs(b); });
    CHECK(std::abs(r2[0]) == doctest::Approx(1e-8).epsilon(1e-10));
    CHECK(std::abs(r2[1]) == doctest::Approx(1e8).epsilon(1e-12));

    auto r3 = poly_roots({2.0, 0.0, 1.0});  // x^2 + 2
    REQUIRE(r3.size() == 2);
    CHECK(r3[0].real() == doctest::Approx(0.0));
    CHECK(std::abs(r3[0].imag()) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("degenerate inputs") {
    CHECK_THROWS_AS((void)poly_roots({0.0}), std::invalid_argument);
    CHECK_THROWS_AS((void)poly_roots({}), std::invalid_argument);
    CHECK_THROWS_AS((void)poly_roots({1.0, std::nan("")}), std::invalid_argument);

    // leading zeros trim, zero roots deflate
    auto r = poly_roots({0.0, 0.0, -1.0, 1.0, 0.0, 0.0});  // x^2 (x - 1) x ... trimmed
    REQUIRE(r.size() == 3);
    int zeros = 0, ones = 0;
    for (auto z : r) {
        if (std::abs(z) < 1e-14) ++zeros;
        if (std::abs(z - 1.0) < 1e-12) ++ones;
    }
    CHECK(zeros == 2);
    CHECK(ones == 1);
}

TEST_CASE("planted roots recovered through degree 18") {
    splitmix64 rng(2024);
    for (int deg = 2; deg <= 18; ++deg) {
        for (int rep = 0; rep < 6; ++rep) {
            std::vector<std::complex<double>> roots;
            int k = 0;
            while (k < deg) {
                const double mag = rng.log_factor(1.5);
                if (deg - k >= 2 && rng.uniform01() < 0.4) {
                    const double ang = rng.uniform(0.15, 3.0);
                    roots.emplace_back(mag * std::cos(ang), mag * std::sin(ang));
                    roots.emplace_back(mag * std::cos(ang), -mag * std::sin(ang));
                    k += 2;
                } else {
                    roots.emplace_back(rng.uniform01() < 0.5 ? -mag : mag, 0.0);
                    k += 1;
                }
            }
            const auto p = from_roots(roots);
            const auto got = poly_roots(p);
            REQUIRE(got.size() == static_cast<std::size_t>(deg));
            INFO("degree ", deg, " rep ", rep);
            CHECK(match_distance(roots, got) <= 1e-6);
        }
    }
}

TEST_CASE("root residual bound on random polynomials") {
    splitmix64 rng(77);
    for (int rep = 0; rep < 40; ++rep) {
        const int deg = 3 + static_cast<int>(rng.uniform01() * 16.0);
        std::vector<double> c(static_cast<std::size_t>(deg) + 1);
        for (auto& v : c) v = rng.uniform(-1.0, 1.0) * rng.log_factor(2.0);
        if (std::abs(c.back()) < 1e-3) c.back() = 1.0;
        const double scale = inf_norm(c);
        for (const auto& r : poly_roots(c)) {
            const double bound =
                1e-8 * scale * std::pow(std::max(1.0, std::abs(r)), static_cast<double>(deg));
            INFO("rep ", rep, " root ", r.real(), "+", r.imag(), "i");
            CHECK(std::abs(poly_eval(c, r)) <= bound);
        }
    }
}

TEST_CASE("real root filter") {
    const std::vector<std::complex<double>> zs{
        {1.0, 0.0}, {2.0, 1e-9}, {3.0, 0.5}, {-4.0, -1e-8}, {0.0, 1.0}};
    const auto rr = real_roots(zs);
    REQUIRE(rr.size() == 3);
    CHECK(rr[0] == doctest::Approx(-4.0));
    CHECK(rr[1] == doctest::Approx(1.0));
    CHECK(rr[2] == doctest::Approx(2.0));
}

TEST_CASE("large dynamic range stays conditioned") {
    // coefficient magnitudes spanning ~40 decades, the regime the coupled-machine
    // resultant lives in
    const std::vector<std::complex<double>> roots{{315.0, 0.0}, {298.0, 0.0}, {1e4, 0.0},
                                                  {-1e4, 0.0}, {0.3, 3.0},   {0.3, -3.0}};
    auto p = from_roots(roots);
    p = poly_scale(p, 1e-20);
    const auto got = poly_roots(p);
    CHECK(match_distance(roots, got) <= 1e-9);
}
