#include <atomic>
#include <cstdlib>
#include <string>

#include "csl/errors.hpp"
#include "csl/simd/kernels.hpp"

namespace csl::simd {

namespace {

constexpr KernelTable kScalarTable{Isa::scalar, &scalar::pair_sum, &scalar::clamped_polynomial,
                                   &scalar::folded_density};

#if defined(CSL_HAVE_AVX2)
constexpr KernelTable kAvx2Table{Isa::avx2, &avx2::pair_sum, &avx2::clamped_polynomial, &avx2::folded_density};
#endif

bool cpu_has_avx2() {
#if defined(CSL_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Isa initial_choice() {
    if (const char* env = std::getenv("CSL_SIMD")) {
        const std::string v(env);
        if (v == "scalar") return Isa::scalar;
        if (v == "avx2" && is_available(Isa::avx2)) return Isa::avx2;
    }
    return best_available();
}

std::atomic<const KernelTable*>& active_slot() {
    static std::atomic<const KernelTable*> slot{&table_for(initial_choice())};
    return slot;
}

}  // namespace

std::string_view isa_name(Isa isa) {
    switch (isa) {
        case Isa::scalar: return "scalar";
        case Isa::avx2: return "avx2";
    }
    return "unknown";
}

bool is_available(Isa isa) {
    switch (isa) {
        case Isa::scalar: return true;
        case Isa::avx2: {
            static const bool ok = cpu_has_avx2();
            return ok;
        }
    }
    return false;
}

Isa best_available() { return is_available(Isa::avx2) ? Isa::avx2 : Isa::scalar; }

const KernelTable& table_for(Isa isa) {
    if (!is_available(isa)) {
        throw DomainError("SIMD variant '" + std::string(isa_name(isa)) + "' is not available on this machine");
    }
#if defined(CSL_HAVE_AVX2)
    if (isa == Isa::avx2) return kAvx2Table;
#endif
    return kScalarTable;
}

const KernelTable& active() { return *active_slot().load(std::memory_order_acquire); }

void select(Isa isa) { active_slot().store(&table_for(isa), std::memory_order_release); }

}  // namespace csl::simd
