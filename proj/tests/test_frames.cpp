#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>

#include <smstab/frames.hpp>
#include <smstab/numerics/rng.hpp>

using namespace smstab;

namespace {

// U U^T for the 2x3 row-major projection
std::array<double, 4> gram(const std::array<double, 6>& u) {
    std::array<double, 4> g{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 3; ++k)
                g[static_cast<std::size_t>(2 * i + j)] +=
                    u[static_cast<std::size_t>(3 * i + k)] * u[static_cast<std::size_t>(3 * j + k)];
    return g;
}

}  // namespace

TEST_CASE("projection rows stay orthonormal over 1000 angles") {
    num::splitmix64 rng(1);
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const double eta = rng.uniform(-40.0, 40.0);
        const auto g = gram(rotating_frame(eta));
        worst = std::max(worst, std::abs(g[0] - 1.0));
        worst = std::max(worst, std::abs(g[3] - 1.0));
        worst = std::max(worst, std::abs(g[1]));
        worst = std::max(worst, std::abs(g[2]));
    }
    CHECK(worst <= 1e-13);
}

TEST_CASE("round trips are lossless for zero-sequence-free vectors") {
    num::splitmix64 rng(2);
    for (int k = 0; k < 300; ++k) {
        const double eta = rng.uniform(-10.0, 10.0);
        const std::array<double, 2> dq{rng.uniform(-5.0, 5.0), rng.uniform(-5.0, 5.0)};
        const auto abc = dq_to_abc(eta, dq);
        // balanced three-phase content only
        CHECK(std::abs(abc[0] + abc[1] + abc[2]) <= 1e-12);
        const auto back = abc_to_dq(eta, abc);
        CHECK(std::abs(back[0] - dq[0]) <= 1e-13);
        CHECK(std::abs(back[1] - dq[1]) <= 1e-13);
    }
}

TEST_CASE("instantaneous power is frame-invariant") {
    num::splitmix64 rng(3);
    for (int k = 0; k < 300; ++k) {
        const double eta = rng.uniform(-10.0, 10.0);
        const std::array<double, 2> e{rng.uniform(-9.0, 9.0), rng.uniform(-9.0, 9.0)};
        const std::array<double, 2> i{rng.uniform(-9.0, 9.0), rng.uniform(-9.0, 9.0)};
        const auto e3 = dq_to_abc(eta, e);
        const auto i3 = dq_to_abc(eta, i);
        const double p_abc = e3[0] * i3[0] + e3[1] * i3[1] + e3[2] * i3[2];
        const double p_dq = e[0] * i[0] + e[1] * i[1];
        CHECK(std::abs(p_abc - p_dq) <= 1e-12 * std::max(1.0, std::abs(p_dq)));
    }
}

TEST_CASE("winding voltage projects onto the quadrature axis in the rotor frame") {
    num::splitmix64 rng(4);
    for (int k = 0; k < 1000; ++k) {
        const double theta = rng.uniform(-30.0, 30.0);
        const double omega = rng.uniform(-10.0, 10.0);
        const double b = rng.uniform(0.1, 8.0);
        const auto dq = abc_to_dq(theta, emf_abc(b, theta, omega));
        CHECK(std::abs(dq[0]) <= 1e-13 * std::max(1.0, std::abs(b * omega)));
        CHECK(std::abs(dq[1] - b * omega) <= 1e-13 * std::max(1.0, std::abs(b * omega)));
    }
}

TEST_CASE("winding voltage at a general frame angle") {
    num::splitmix64 rng(5);
    for (int k = 0; k < 200; ++k) {
        const double theta = rng.uniform(-10.0, 10.0);
        const double eta = rng.uniform(-10.0, 10.0);
        const double omega = rng.uniform(-5.0, 5.0);
        const double b = rng.uniform(0.1, 4.0);
        const auto dq = abc_to_dq(eta, emf_abc(b, theta, omega));
        const double scale = std::max(1.0, std::abs(b * omega));
        CHECK(std::abs(dq[0] - b * omega * std::sin(theta - eta)) <= 1e-12 * scale);
        CHECK(std::abs(dq[1] - b * omega * std::cos(theta - eta)) <= 1e-12 * scale);
    }
}

TEST_CASE("quarter-turn rotation") {
    const auto r = rotate90({3.0, -2.0});
    CHECK(r[0] == 2.0);
    CHECK(r[1] == 3.0);
}

TEST_CASE("projected derivative converges at second order against differencing") {
    // eta(t) and i_abc(t) smooth; compare the analytic projected derivative with
    // a central difference of t -> U(eta(t)) i(t) at shrinking h
    const auto eta_of = [](double t) { return 0.7 * t + 0.3 * std::sin(t); };
    const auto eta_rate = [](double t) { return 0.7 + 0.3 * std::cos(t); };
    const auto i_of = [](double t) -> std::array<double, 3> {
        return {std::sin(1.3 * t), std::cos(0.9 * t), std::sin(0.5 * t + 1.0)};
    };
    const auto di_of = [](double t) -> std::array<double, 3> {
        return {1.3 * std::cos(1.3 * t), -0.9 * std::sin(0.9 * t), 0.5 * std::cos(0.5 * t + 1.0)};
    };
    const auto project = [&](double t) { return abc_to_dq(eta_of(t), i_of(t)); };

    const double t0 = 0.8;
    const auto analytic = projected_derivative(eta_of(t0), eta_rate(t0), i_of(t0), di_of(t0));

    auto fd_error = [&](double h) {
        const auto hi = project(t0 + h);
        const auto lo = project(t0 - h);
        double worst = 0.0;
        for (int k = 0; k < 2; ++k) {
            const auto ks = static_cast<std::size_t>(k);
            worst = std::max(worst, std::abs((hi[ks] - lo[ks]) / (2.0 * h) - analytic[ks]));
        }
        return worst;
    };

    const double e1 = fd_error(1e-3);
    const double e2 = fd_error(5e-4);
    const double order = std::log2(e1 / e2);
    INFO("errors ", e1, " ", e2, " order ", order);
    CHECK(order >= 1.9);
    CHECK(e2 <= 1e-6);
}
