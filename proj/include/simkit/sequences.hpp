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

#ifndef SIMKIT_SEQUENCES_HPP
#define SIMKIT_SEQUENCES_HPP

#include <cstdint>
#include <numbers>
#include <numeric>

#include "simkit/complex.hpp"

namespace simkit {

/// Zadoff-Chu sequence of the given length and root. Entries are unit modulus
/// with zero periodic autocorrelation at nonzero lags when gcd(root, length)
/// is 1 (enforced).
inline cvec zadoff_chu(std::size_t length, std::size_t root) {
    if (length == 0 || root == 0)
        throw std::invalid_argument("zadoff_chu: length and root must be positive");
    if (std::gcd(length, root) != 1)
        throw std::invalid_argument("zadoff_chu: root must be coprime with length");
    cvec out(length);
    const std::uint64_t n = length;
    for (std::uint64_t k = 0; k < n; ++k) {
        // phase = -pi * root * k^2 / n (even n) or -pi * root * k(k+1) / n
        // (odd n), reduced mod 2n before the division to keep it exact.
        const std::uint64_t quad = (n % 2 == 0) ? k * k : k * (k + 1);
        const std::uint64_t m = (root * (quad % (2 * n))) % (2 * n);
        const double ang = -std::numbers::pi * static_cast<double>(m) / static_cast<double>(n);
        out[k] = cplx(std::cos(ang), std::sin(ang));
    }
    return out;
}

} // namespace simkit

#endif // SIMKIT_SEQUENCES_HPP
