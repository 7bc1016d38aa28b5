#pragma once

#include <complex>
#include <span>

namespace radarloc {

/// In-place iterative radix-2 decimation-in-time FFT, forward sign
/// convention X[k] = sum_n x[n] exp(-2 pi i k n / N), no normalization.
/// Throws ValidationError unless data.size() is a power of two.
void fft_inplace(std::span<std::complex<double>> data);

bool is_power_of_two(std::size_t n) noexcept;

}  // namespace radarloc
