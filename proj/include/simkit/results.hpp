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

#ifndef SIMKIT_RESULTS_HPP
#define SIMKIT_RESULTS_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace simkit {

/// One aggregated Monte Carlo data point: (sweep point, scheme, metric).
struct ResultRow {
    std::string experiment;
    std::string sweep_name;
    double sweep_value = 0.0;
    std::string scheme;
    std::string metric;
    double value = 0.0;
    double stderr_value = 0.0;
    long realizations = 0;
    std::uint64_t seed = 0;
};

/// Rows of one experiment plus free-form metadata emitted as CSV comments.
struct ExperimentResult {
    std::string experiment;
    std::vector<ResultRow> rows;
    std::vector<std::pair<std::string, std::string>> metadata;
};

} // namespace simkit

#endif // SIMKIT_RESULTS_HPP
