#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace repac::fft {

using cplx = std::complex<double>;

// Smallest power of two >= n (n >= 1).
std::size_t next_pow2(std::size_t n);

// In-place complex FFT of arbitrary length n >= 1.
// Power-of-two lengths use an iterative radix-2 Cooley-Tukey with cached
// twiddle/bit-reversal tables; other lengths use Bluestein's chirp-z
// algorithm on a cached power-of-two plan. The inverse includes the 1/n
// scale. Plans are cached per length and shared across threads.
void transform(std::vector<cplx>& data, bool inverse);

inline void forward(std::vector<cplx>& data) { transform(data, false); }
inline void inverse(std::vector<cplx>& data) { transform(data, true); }

// Forward transform of a real sequence zero-padded/truncated to length n.
std::vector<cplx> forward_real(const std::vector<double>& x, std::size_t n);

// O(n^2) reference DFT in extended precision; test oracle only.
std::vector<cplx> dft_oracle(const std::vector<cplx>& x, bool inverse);

}  // namespace repac::fft
