#pragma once

#include <cstddef>
#include <cstdint>

// Inner loops shared by the pairwise similarity computations. Every kernel
// has a portable scalar reference implementation and an AVX2 variant; the
// active one is chosen once at startup from CPUID. Set GEONET_KERNELS=scalar
// (or call set_backend) to force the reference path.

namespace geonet::kernels {

enum class Backend { scalar, avx2 };

bool avx2_available();
Backend active_backend();
void set_backend(Backend b); // throws if the backend is unsupported here
const char* backend_name(Backend b);

// Dot product of two double vectors of length n.
double dot(const double* a, const double* b, std::size_t n);

// Joint histogram of two pre-binned series: counts[x[t]*bins + y[t]] += 1
// for every t. counts must hold bins*bins entries; it is not cleared here.
void joint_histogram(const std::uint8_t* x, const std::uint8_t* y,
                     std::size_t n, int bins, std::uint32_t* counts);

// Direct entry points for the scalar/SIMD equivalence tests. The avx2
// versions must only be called when avx2_available().
double dot_scalar(const double* a, const double* b, std::size_t n);
double dot_avx2(const double* a, const double* b, std::size_t n);
void joint_histogram_scalar(const std::uint8_t* x, const std::uint8_t* y,
                            std::size_t n, int bins, std::uint32_t* counts);
void joint_histogram_avx2(const std::uint8_t* x, const std::uint8_t* y,
                          std::size_t n, int bins, std::uint32_t* counts);

} // namespace geonet::kernels
