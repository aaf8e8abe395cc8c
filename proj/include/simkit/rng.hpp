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

#ifndef SIMKIT_RNG_HPP
#define SIMKIT_RNG_HPP

#include <cmath>
#include <cstdint>
#include <numbers>

#include "simkit/complex.hpp"

namespace simkit {

/// Deterministic, platform-independent random stream.
///
/// Generator is xoshiro256++ (Blackman/Vigna). The state is derived from the
/// (seed, stream_id) pair through the SplitMix64 finisher, so distinct stream
/// ids on the same seed give decorrelated sequences. All floating-point draws
/// are defined purely in terms of the 64-bit integer output, which makes the
/// sequences bit-reproducible across platforms. Gaussian draws use Box-Muller
/// (exactly two integer draws per complex sample).
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0)
        : seed_(seed), stream_(stream_id) {
        std::uint64_t st = seed ^ mix64(stream_id ^ 0x5851F42D4C957F2DULL);
        for (auto &word : s_)
            word = splitmix_next(st);
        if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0)
            s_[0] = 0x9E3779B97F4A7C15ULL;
    }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_; }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform angle in (0, 2*pi].
    double angle() { return 2.0 * std::numbers::pi * (1.0 - uniform01()); }

    /// Circularly-symmetric complex Gaussian with total variance `variance`
    /// (real and imaginary parts each carry variance/2).
    cplx gaussian(double variance) {
        const double u1 = 1.0 - uniform01(); // (0, 1]; keeps log() finite
        const double u2 = uniform01();
        const double r = std::sqrt(-std::log(u1) * variance);
        const double theta = 2.0 * std::numbers::pi * u2;
        return cplx(r * std::cos(theta), r * std::sin(theta));
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    static std::uint64_t mix64(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    static std::uint64_t splitmix_next(std::uint64_t &state) {
        state += 0x9E3779B97F4A7C15ULL;
        return mix64(state);
    }

    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t s_[4];
};

/// n i.i.d. circularly-symmetric complex Gaussian draws, each with total
/// variance `variance`.
inline cvec gaussian_complex(std::size_t n, double variance, RngStream &rng) {
    if (variance < 0.0)
        throw std::invalid_argument("gaussian_complex: variance must be >= 0");
    cvec out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = rng.gaussian(variance);
    return out;
}

} // namespace simkit

#endif // SIMKIT_RNG_HPP
