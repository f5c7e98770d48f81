#include "geonet/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

#include "geonet/errors.hpp"

#if defined(__x86_64__) || defined(_M_X64) || defined(__i386__)
#define GEONET_X86 1
#include <immintrin.h>
#else
#define GEONET_X86 0
#endif

namespace geonet::kernels {

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

void joint_histogram_scalar(const std::uint8_t* x, const std::uint8_t* y,
                            std::size_t n, int bins, std::uint32_t* counts) {
    for (std::size_t t = 0; t < n; ++t)
        counts[static_cast<std::size_t>(x[t]) * bins + y[t]] += 1;
}

#if GEONET_X86

bool avx2_available() {
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

__attribute__((target("avx2,fma")))
double dot_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4)
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, _mm256_add_pd(acc0, acc1));
    double s = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

// Vectorizes the fused index x*bins + y; the histogram increments themselves
// stay scalar (scattered stores).
__attribute__((target("avx2")))
void joint_histogram_avx2(const std::uint8_t* x, const std::uint8_t* y,
                          std::size_t n, int bins, std::uint32_t* counts) {
    const __m256i vbins = _mm256_set1_epi16(static_cast<short>(bins));
    alignas(32) std::uint16_t fused[16];
    std::size_t t = 0;
    for (; t + 16 <= n; t += 16) {
        __m128i xb = _mm_loadu_si128(reinterpret_cast<const __m128i*>(x + t));
        __m128i yb = _mm_loadu_si128(reinterpret_cast<const __m128i*>(y + t));
        __m256i x16 = _mm256_cvtepu8_epi16(xb);
        __m256i y16 = _mm256_cvtepu8_epi16(yb);
        __m256i f = _mm256_add_epi16(_mm256_mullo_epi16(x16, vbins), y16);
        _mm256_store_si256(reinterpret_cast<__m256i*>(fused), f);
        for (int k = 0; k < 16; ++k) counts[fused[k]] += 1;
    }
    for (; t < n; ++t)
        counts[static_cast<std::size_t>(x[t]) * bins + y[t]] += 1;
}

#else

bool avx2_available() { return false; }

double dot_avx2(const double* a, const double* b, std::size_t n) {
    return dot_scalar(a, b, n);
}

void joint_histogram_avx2(const std::uint8_t* x, const std::uint8_t* y,
                          std::size_t n, int bins, std::uint32_t* counts) {
    joint_histogram_scalar(x, y, n, bins, counts);
}

#endif // GEONET_X86

namespace {

Backend detect_backend() {
    if (const char* env = std::getenv("GEONET_KERNELS")) {
        if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
        if (std::strcmp(env, "avx2") == 0 && avx2_available()) return Backend::avx2;
    }
    return avx2_available() ? Backend::avx2 : Backend::scalar;
}

std::atomic<Backend> g_backend{detect_backend()};

} // namespace

Backend active_backend() { return g_backend.load(std::memory_order_relaxed); }

void set_backend(Backend b) {
    if (b == Backend::avx2 && !avx2_available())
        throw InputError("kernel backend avx2 is not supported on this CPU");
    g_backend.store(b, std::memory_order_relaxed);
}

const char* backend_name(Backend b) {
    return b == Backend::avx2 ? "avx2" : "scalar";
}

double dot(const double* a, const double* b, std::size_t n) {
    return active_backend() == Backend::avx2 ? dot_avx2(a, b, n)
                                             : dot_scalar(a, b, n);
}

void joint_histogram(const std::uint8_t* x, const std::uint8_t* y,
                     std::size_t n, int bins, std::uint32_t* counts) {
    if (active_backend() == Backend::avx2)
        joint_histogram_avx2(x, y, n, bins, counts);
    else
        joint_histogram_scalar(x, y, n, bins, counts);
}

} // namespace geonet::kernels
