#include <smstab/frames.hpp>

#include <cmath>
#include <numbers>

namespace smstab {

namespace {
constexpr double third_turn = 2.0 * std::numbers::pi / 3.0;
const double scale = std::sqrt(2.0 / 3.0);
}  // namespace

std::array<double, 6> rotating_frame(double eta) {
    std::array<double, 6> u;
    for (int k = 0; k < 3; ++k) {
        const double a = eta - k * third_turn;
        u[static_cast<std::size_t>(k)] = scale * std::cos(a);
        u[static_cast<std::size_t>(3 + k)] = scale * std::sin(a);
    }
    return u;
}

std::array<double, 2> abc_to_dq(double eta, const std::array<double, 3>& abc) {
    const auto u = rotating_frame(eta);
    return {u[0] * abc[0] + u[1] * abc[1] + u[2] * abc[2],
            u[3] * abc[0] + u[4] * abc[1] + u[5] * abc[2]};
}

std::array<double, 3> dq_to_abc(double eta, const std::array<double, 2>& dq) {
    const auto u = rotating_frame(eta);
    return {u[0] * dq[0] + u[3] * dq[1], u[1] * dq[0] + u[4] * dq[1],
            u[2] * dq[0] + u[5] * dq[1]};
}

std::array<double, 3> emf_abc(double b, double theta, double omega) {
    std::array<double, 3> e;
    for (int k = 0; k < 3; ++k)
        e[static_cast<std::size_t>(k)] = scale * b * omega * std::sin(theta - k * third_turn);
    return e;
}

std::array<double, 2> rotate90(const std::array<double, 2>& dq) { return {-dq[1], dq[0]}; }

std::array<double, 2> projected_derivative(double eta, double eta_rate,
                                           const std::array<double, 3>& abc,
                                           const std::array<double, 3>& dabc_dt) {
    const auto spin = rotate90(abc_to_dq(eta, abc));
    const auto direct = abc_to_dq(eta, dabc_dt);
    return {eta_rate * spin[0] + direct[0], eta_rate * spin[1] + direct[1]};
}

}  // namespace smstab
