#include <smstab/stability.hpp>

namespace smstab {

std::string to_string(verdict v) {
    switch (v) {
        case verdict::locally_stable: return "locally_stable";
        case verdict::unstable: return "unstable";
        default: return "inconclusive";
    }
}

verdict eigenvalue_verdict(const std::vector<std::complex<double>>& eigs, double eps) {
    double max_re = 0.0;
    bool first = true;
    for (const auto& z : eigs) {
        if (first || z.real() > max_re) max_re = z.real();
        first = false;
    }
    if (first) return verdict::inconclusive;
    if (max_re < -eps) return verdict::locally_stable;
    if (max_re > eps) return verdict::unstable;
    return verdict::inconclusive;
}

}  // namespace smstab
