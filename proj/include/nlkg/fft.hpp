#pragma once

#include <complex>
#include <span>

namespace nlkg::fft {

// Unnormalized complex DFTs backed by FFTW. Plans are cached per size; the
// execute calls are safe from multiple threads.
void forward(std::span<const std::complex<double>> in,
             std::span<std::complex<double>> out);

// Inverse transform including the 1/n normalization.
void inverse(std::span<const std::complex<double>> in,
             std::span<std::complex<double>> out);

}  // namespace nlkg::fft
