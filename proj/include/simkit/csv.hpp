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

#ifndef SIMKIT_CSV_HPP
#define SIMKIT_CSV_HPP

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>

#include "simkit/results.hpp"

namespace simkit {

/// Nine-significant-digit float formatting shared by every emitter.
inline std::string format_g9(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return std::string(buf);
}

/// Render an experiment as CSV text: '#' metadata comments, the fixed header,
/// one line per row, LF endings.
inline std::string csv_string(const ExperimentResult &result) {
    std::string out;
    for (const auto &[key, value] : result.metadata)
        out += "# " + key + ": " + value + "\n";
    out += "experiment,sweep_name,sweep_value,scheme,metric,value,stderr,realizations,seed\n";
    for (const ResultRow &row : result.rows) {
        out += row.experiment;
        out += ',';
        out += row.sweep_name;
        out += ',';
        out += format_g9(row.sweep_value);
        out += ',';
        out += row.scheme;
        out += ',';
        out += row.metric;
        out += ',';
        out += format_g9(row.value);
        out += ',';
        out += format_g9(row.stderr_value);
        out += ',';
        out += std::to_string(row.realizations);
        out += ',';
        out += std::to_string(row.seed);
        out += '\n';
    }
    return out;
}

inline void emit_csv(const ExperimentResult &result, const std::string &path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("emit_csv: cannot write '" + path + "'");
    out << csv_string(result);
    if (!out)
        throw std::runtime_error("emit_csv: write failed for '" + path + "'");
}

} // namespace simkit

#endif // SIMKIT_CSV_HPP
