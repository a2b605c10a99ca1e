#include <algorithm>
#include <cmath>

#include "csl/simd/kernels.hpp"

namespace csl::simd::scalar {

double sinc(double b) {
    if (b < 1e-4) {
        const double b2 = b * b;
        return 1.0 - b2 / 6.0 + b2 * b2 / 120.0;
    }
    return std::sin(b) / b;
}

double pair_kernel(double d2, const PairKernelParams& params) {
    const double u = d2 * params.inv_four_rc2;
    return std::exp(-u) * (1.0 - (2.0 / 3.0) * u) * sinc(params.wavenumber * std::sqrt(d2));
}

double pair_sum(const ChargeCloud& cloud, const PairKernelParams& params) {
    const std::size_t n = cloud.size();
    double diagonal = 0.0;
    double off_diagonal = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double qi = cloud.charge[i];
        diagonal += qi * qi;
        double row = 0.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dx = cloud.x[i] - cloud.x[j];
            const double dy = cloud.y[i] - cloud.y[j];
            const double dz = cloud.z[i] - cloud.z[j];
            row += cloud.charge[j] * pair_kernel(dx * dx + dy * dy + dz * dz, params);
        }
        off_diagonal += qi * row;
    }
    return diagonal + 2.0 * off_diagonal;
}

std::size_t clamped_polynomial(std::span<const double> coeffs, std::span<const double> x, std::span<double> out) {
    std::size_t clamped = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double acc = 0.0;
        for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
            acc = acc * x[i] + *it;
        }
        if (acc < 0.0) {
            ++clamped;
            acc = 0.0;
        }
        out[i] = acc;
    }
    return clamped;
}

std::size_t folded_density(std::span<const double> coeffs, double weight, std::span<const double> energies,
                           std::span<double> acc) {
    std::size_t clamped = 0;
    for (std::size_t i = 0; i < energies.size(); ++i) {
        const double e = energies[i];
        double p = 0.0;
        for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
            p = p * e + *it;
        }
        if (p < 0.0) {
            ++clamped;
            p = 0.0;
        }
        acc[i] += weight * p / e;
    }
    return clamped;
}

}  // namespace csl::simd::scalar
