// SPDX-License-Identifier: Apache-2.0
//
// simkit: link-level simulation library for IRS-assisted OFDM uplinks
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SIMKIT_TRANSFORMS_HPP
#define SIMKIT_TRANSFORMS_HPP

#include <cstdint>
#include <numbers>

#include "simkit/complex.hpp"

namespace simkit {

// Transform convention used throughout the library:
//   forward:  X_i = sum_j x_j * exp(-j*2*pi*i*j/n)       (unnormalized)
//   inverse:  x_j = (1/n) * sum_i X_i * exp(+j*2*pi*i*j/n)
// so that a channel frequency response is the plain forward transform of the
// zero-padded impulse response and idft(dft(x)) == x.

namespace detail {

// exp(sign * j * 2*pi * (i*j mod n) / n); the modular reduction keeps the
// phase argument small for large sizes.
inline cplx twiddle(std::uint64_t i, std::uint64_t j, std::uint64_t n, double sign) {
    const std::uint64_t k = (i * j) % n;
    const double ang = sign * 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    return cplx(std::cos(ang), std::sin(ang));
}

} // namespace detail

/// Forward DFT (dense, unnormalized). `x` must have length `size`.
inline cvec dft(const cvec &x, std::size_t size) {
    if (x.size() != size)
        throw std::invalid_argument("dft: input length does not match size");
    if (size == 0)
        throw std::invalid_argument("dft: size must be positive");
    cvec out(size);
    for (std::size_t i = 0; i < size; ++i) {
        cplx acc(0.0, 0.0);
        for (std::size_t j = 0; j < size; ++j)
            acc += x[j] * detail::twiddle(i, j, size, -1.0);
        out[i] = acc;
    }
    return out;
}

/// Inverse DFT; carries the 1/size factor so idft(dft(x)) == x.
inline cvec idft(const cvec &x, std::size_t size) {
    if (x.size() != size)
        throw std::invalid_argument("idft: input length does not match size");
    if (size == 0)
        throw std::invalid_argument("idft: size must be positive");
    const double scale = 1.0 / static_cast<double>(size);
    cvec out(size);
    for (std::size_t i = 0; i < size; ++i) {
        cplx acc(0.0, 0.0);
        for (std::size_t j = 0; j < size; ++j)
            acc += x[j] * detail::twiddle(i, j, size, 1.0);
        out[i] = acc * scale;
    }
    return out;
}

/// First `taps` entries of the inverse transform of `x` (time-domain view of
/// a frequency response whose impulse response is known to be short).
inline cvec idft_truncated(const cvec &x, std::size_t size, std::size_t taps) {
    if (x.size() != size)
        throw std::invalid_argument("idft_truncated: input length does not match size");
    if (taps > size)
        throw std::invalid_argument("idft_truncated: taps exceed size");
    const double scale = 1.0 / static_cast<double>(size);
    cvec out(taps);
    for (std::size_t i = 0; i < taps; ++i) {
        cplx acc(0.0, 0.0);
        for (std::size_t j = 0; j < size; ++j)
            acc += x[j] * detail::twiddle(i, j, size, 1.0);
        out[i] = acc * scale;
    }
    return out;
}

} // namespace simkit

#endif // SIMKIT_TRANSFORMS_HPP
