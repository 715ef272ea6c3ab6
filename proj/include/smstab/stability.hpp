#pragma once

#include <complex>
#include <string>
#include <vector>

namespace smstab {

enum class verdict { locally_stable, unstable, inconclusive };

std::string to_string(verdict v);

// spectral classification: stable when every real part is below -eps, unstable
// when any real part exceeds +eps, otherwise inconclusive (marginal spectrum)
verdict eigenvalue_verdict(const std::vector<std::complex<double>>& eigs, double eps = 1e-7);

}  // namespace smstab
