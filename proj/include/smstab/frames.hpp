#pragma once

#include <array>

namespace smstab {

// power-invariant projection onto a frame rotating at angle eta: a 2x3 map with
// orthonormal rows (no zero-sequence row), returned row-major
std::array<double, 6> rotating_frame(double eta);

// dq components of a three-phase vector in the frame at angle eta
std::array<double, 2> abc_to_dq(double eta, const std::array<double, 3>& abc);

// three-phase vector with the given dq components and no zero-sequence content
std::array<double, 3> dq_to_abc(double eta, const std::array<double, 2>& dq);

// winding EMF of a machine at rotor angle theta and speed omega; b is the field
// flux constant, sqrt(3/2) times field inductance times field current
std::array<double, 3> emf_abc(double b, double theta, double omega);

// 90-degree rotation in the dq plane: (d, q) -> (-q, d)
std::array<double, 2> rotate90(const std::array<double, 2>& dq);

// time derivative of the projected vector: given the frame rate and the raw
// derivative, d/dt (U i) = rate * rotate90(U i) + U di/dt
std::array<double, 2> projected_derivative(double eta, double eta_rate,
                                           const std::array<double, 3>& abc,
                                           const std::array<double, 3>& dabc_dt);

}  // namespace smstab
