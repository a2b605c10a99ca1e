#pragma once

// Data-parallel inner loops of the emission and detector-folding code.
//
// Every kernel has a scalar reference implementation and, on x86-64 builds
// with CSL_HAVE_AVX2, an AVX2/FMA variant. The variant is chosen once at
// runtime from CPUID (override with CSL_SIMD=scalar|avx2). The two paths
// are equivalence-tested against each other; results agree to rounding.

#include <cstddef>
#include <span>
#include <string_view>

namespace csl::simd {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa);

/// Point charges as structure-of-arrays, charges in units of e.
struct ChargeCloud {
    std::span<const double> x;
    std::span<const double> y;
    std::span<const double> z;
    std::span<const double> charge;

    std::size_t size() const noexcept { return charge.size(); }
};

/// Parameters of the normalised pair kernel
///   K(D) = exp(-D^2 / 4 r_C^2) * (1 - D^2 / 6 r_C^2) * sinc(k D),   K(0) = 1,
/// where k = omega / c is the photon wavenumber.
struct PairKernelParams {
    double inv_four_rc2;
    double wavenumber;
};

/// sum_i sum_j q_i q_j K(|r_i - r_j|).
using PairSumFn = double (*)(const ChargeCloud& cloud, const PairKernelParams& params);

/// out[i] = max(0, poly(x[i])) with coeffs in ascending order. Returns how
/// many points were clamped.
using ClampedPolynomialFn = std::size_t (*)(std::span<const double> coeffs, std::span<const double> x,
                                            std::span<double> out);

/// acc[i] += weight * max(0, poly(e[i])) / e[i]. Returns how many points were
/// clamped.
using FoldedDensityFn = std::size_t (*)(std::span<const double> coeffs, double weight,
                                        std::span<const double> energies, std::span<double> acc);

struct KernelTable {
    Isa isa;
    PairSumFn pair_sum;
    ClampedPolynomialFn clamped_polynomial;
    FoldedDensityFn folded_density;
};

namespace scalar {
double pair_kernel(double d2, const PairKernelParams& params);
double sinc(double b);
double pair_sum(const ChargeCloud& cloud, const PairKernelParams& params);
std::size_t clamped_polynomial(std::span<const double> coeffs, std::span<const double> x, std::span<double> out);
std::size_t folded_density(std::span<const double> coeffs, double weight, std::span<const double> energies,
                           std::span<double> acc);
}  // namespace scalar

#if defined(CSL_HAVE_AVX2)
namespace avx2 {
double pair_sum(const ChargeCloud& cloud, const PairKernelParams& params);
std::size_t clamped_polynomial(std::span<const double> coeffs, std::span<const double> x, std::span<double> out);
std::size_t folded_density(std::span<const double> coeffs, double weight, std::span<const double> energies,
                           std::span<double> acc);
// Exposed for the equivalence tests. Each writes 4 lanes.
void exp4(const double* in, double* out);
void sinc4(const double* in, double* out);
}  // namespace avx2
#endif

/// True if this build contains the variant and the CPU can run it.
bool is_available(Isa isa);

/// Best variant for this machine.
Isa best_available();

/// Kernel table for a specific variant. Throws DomainError if unavailable.
const KernelTable& table_for(Isa isa);

/// The table in use. Chosen on first call from CSL_SIMD or best_available().
const KernelTable& active();

/// Switch the active table. Throws DomainError if unavailable.
void select(Isa isa);

}  // namespace csl::simd
