#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include <smstab/numerics/newton.hpp>

using namespace smstab::num;

namespace {

// classic four-root system: x^2 + y - 11 = 0, x + y^2 - 7 = 0
const residual_fn four_roots = [](const std::vector<double>& x, std::vector<double>& r) {
    r.resize(2);
    r[0] = x[0] * x[0] + x[1] - 11.0;
    r[1] = x[0] + x[1] * x[1] - 7.0;
};

}  // namespace

TEST_CASE("newton converges on a quadratic system") {
    const auto res = newton_solve(four_roots, {2.5, 1.5});
    CHECK(res.converged);
    CHECK(res.x[0] == doctest::Approx(3.0).epsilon(1e-10));
    CHECK(res.x[1] == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(res.residual_norm <= 1e-12);
}

TEST_CASE("newton reports failure when no root exists") {
    const residual_fn hopeless = [](const std::vector<double>& x, std::vector<double>& r) {
        r.resize(1);
        r[0] = x[0] * x[0] + 1.0;
    };
    const auto res = newton_solve(hopeless, {0.7});
    CHECK_FALSE(res.converged);
}

TEST_CASE("finite-difference jacobian matches an analytic one") {
    const residual_fn f = [](const std::vector<double>& x, std::vector<double>& r) {
        r.resize(2);
        r[0] = std::sin(x[0]) * x[1];
        r[1] = x[0] * x[0] - std::exp(x[1]);
    };
    const std::vector<double> x{0.8, -0.3};
    const auto j = fd_jacobian(f, x, 2);
    const double a00 = std::cos(x[0]) * x[1];
    const double a01 = std::sin(x[0]);
    const double a10 = 2.0 * x[0];
    const double a11 = -std::exp(x[1]);
    CHECK(std::abs(j(0, 0) - a00) <= 1e-9 * std::max(1.0, std::abs(a00)));
    CHECK(std::abs(j(0, 1) - a01) <= 1e-9 * std::max(1.0, std::abs(a01)));
    CHECK(std::abs(j(1, 0) - a10) <= 1e-9 * std::max(1.0, std::abs(a10)));
    CHECK(std::abs(j(1, 1) - a11) <= 1e-9 * std::max(1.0, std::abs(a11)));
}

TEST_CASE("multistart finds all four roots exactly once") {
    multistart_options opts;
    const auto sols =
        newton_multistart_box(four_roots, {-6.0, -6.0}, {6.0, 6.0}, 200, 11, opts);
    REQUIRE(sols.size() == 4);
    // known roots of the system, lexicographic
    const double expect[4][2] = {{-3.7793102533777461, -3.2831859912861638},
                                 {-2.8051180869527430, 3.1313125182505832},
                                 {3.0, 2.0},
                                 {3.5844283403304953, -1.8481265269644283}};
    for (int k = 0; k < 4; ++k) {
        CHECK(sols[static_cast<std::size_t>(k)][0] == doctest::Approx(expect[k][0]).epsilon(1e-9));
        CHECK(sols[static_cast<std::size_t>(k)][1] == doctest::Approx(expect[k][1]).epsilon(1e-9));
    }
}

TEST_CASE("serial and parallel multistart return identical results") {
    multistart_options serial;
    serial.parallel = false;
    multistart_options parallel;
    parallel.parallel = true;
    const auto a = newton_multistart_box(four_roots, {-6.0, -6.0}, {6.0, 6.0}, 300, 5, serial);
    const auto b = newton_multistart_box(four_roots, {-6.0, -6.0}, {6.0, 6.0}, 300, 5, parallel);
    REQUIRE(a.size() == b.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        REQUIRE(a[k].size() == b[k].size());
        for (std::size_t j = 0; j < a[k].size(); ++j) CHECK(a[k][j] == b[k][j]);
    }
}

TEST_CASE("duplicate starts collapse to one solution") {
    std::vector<std::vector<double>> starts(25, std::vector<double>{2.9, 2.1});
    const auto sols = newton_multistart(four_roots, starts);
    REQUIRE(sols.size() == 1);
    CHECK(sols[0][0] == doctest::Approx(3.0).epsilon(1e-10));
}

TEST_CASE("multistart survives divergent starts") {
    const residual_fn mixed = [](const std::vector<double>& x, std::vector<double>& r) {
        r.resize(1);
        // root at 1, divergence for starts left of the pole at 0
        r[0] = x[0] > 0.0 ? std::log(x[0]) : 1e6;
    };
    const auto sols = newton_multistart_box(mixed, {-5.0}, {5.0}, 64, 3);
    REQUIRE(sols.size() == 1);
    CHECK(sols[0][0] == doctest::Approx(1.0).epsilon(1e-9));
}
