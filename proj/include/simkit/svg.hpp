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

#ifndef SIMKIT_SVG_HPP
#define SIMKIT_SVG_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "simkit/results.hpp"

namespace simkit {

namespace detail {

inline std::string svg_num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return std::string(buf);
}

inline std::string svg_label(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return std::string(buf);
}

inline const char *svg_x_label(const std::string &sweep_name) {
    if (sweep_name == "pt_dbm")
        return "transmit power [dBm]";
    if (sweep_name == "horizontal_m")
        return "user-AP horizontal distance [m]";
    if (sweep_name == "rho")
        return "grouping ratio rho = M/K";
    return sweep_name.c_str();
}

inline const char *svg_y_label(const std::string &metric) {
    if (metric == "mse_db")
        return "normalized MSE [dB]";
    if (metric == "rate")
        return "achievable rate [bit/s/Hz]";
    if (metric == "effective_rate")
        return "effective rate [bit/s/Hz]";
    if (metric == "bound")
        return "rate upper bound [bit/s/Hz]";
    return metric.c_str();
}

} // namespace detail

/// Self-contained line chart of one experiment: sweep value on x, the
/// experiment's headline metric on y (already in dB for the MSE chart, which
/// is its log scale), one polyline per scheme, legend at the right.
inline std::string svg_string(const ExperimentResult &result) {
    std::string metric = "rate";
    if (result.experiment == "mse")
        metric = "mse_db";
    else if (result.experiment == "rate-grouping")
        metric = "effective_rate";

    // Collect series in first-seen scheme order.
    std::vector<std::string> schemes;
    std::map<std::string, std::vector<std::pair<double, double>>> series;
    std::string sweep_name;
    for (const ResultRow &row : result.rows) {
        if (row.metric != metric)
            continue;
        sweep_name = row.sweep_name;
        if (!series.count(row.scheme))
            schemes.push_back(row.scheme);
        series[row.scheme].emplace_back(row.sweep_value, row.value);
    }
    if (schemes.empty())
        throw std::runtime_error("svg_string: no rows carry metric '" + metric + "'");

    double x_min = series[schemes[0]][0].first, x_max = x_min;
    double y_min = series[schemes[0]][0].second, y_max = y_min;
    for (const auto &s : schemes)
        for (const auto &[x, y] : series[s]) {
            x_min = std::min(x_min, x);
            x_max = std::max(x_max, x);
            y_min = std::min(y_min, y);
            y_max = std::max(y_max, y);
        }
    if (x_max == x_min) {
        x_min -= 1.0;
        x_max += 1.0;
    }
    const double y_pad = (y_max == y_min) ? 1.0 : 0.05 * (y_max - y_min);
    y_min -= y_pad;
    y_max += y_pad;

    const double width = 880.0, height = 560.0;
    const double left = 80.0, right = width - 200.0, top = 50.0, bottom = height - 70.0;
    auto sx = [&](double x) { return left + (x - x_min) / (x_max - x_min) * (right - left); };
    auto sy = [&](double y) { return bottom - (y - y_min) / (y_max - y_min) * (bottom - top); };

    static const char *palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
    const std::size_t n_colors = sizeof(palette) / sizeof(palette[0]);

    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<!-- simkit svg v1 -->\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"880\" height=\"560\" "
           "viewBox=\"0 0 880 560\">\n";
    out += "<rect x=\"0\" y=\"0\" width=\"880\" height=\"560\" fill=\"white\"/>\n";

    out += "<text x=\"" + detail::svg_num((left + right) / 2) +
           "\" y=\"28\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">" +
           result.experiment + "</text>\n";

    // Grid and ticks.
    const int n_ticks = 6;
    for (int t = 0; t <= n_ticks; ++t) {
        const double fx = x_min + (x_max - x_min) * t / n_ticks;
        const double fy = y_min + (y_max - y_min) * t / n_ticks;
        out += "<line x1=\"" + detail::svg_num(sx(fx)) + "\" y1=\"" + detail::svg_num(top) +
               "\" x2=\"" + detail::svg_num(sx(fx)) + "\" y2=\"" + detail::svg_num(bottom) +
               "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
        out += "<line x1=\"" + detail::svg_num(left) + "\" y1=\"" + detail::svg_num(sy(fy)) +
               "\" x2=\"" + detail::svg_num(right) + "\" y2=\"" + detail::svg_num(sy(fy)) +
               "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
        out += "<text x=\"" + detail::svg_num(sx(fx)) + "\" y=\"" + detail::svg_num(bottom + 20) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
               detail::svg_label(fx) + "</text>\n";
        out += "<text x=\"" + detail::svg_num(left - 8) + "\" y=\"" +
               detail::svg_num(sy(fy) + 4) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" +
               detail::svg_label(fy) + "</text>\n";
    }

    // Axes.
    out += "<line x1=\"" + detail::svg_num(left) + "\" y1=\"" + detail::svg_num(top) +
           "\" x2=\"" + detail::svg_num(left) + "\" y2=\"" + detail::svg_num(bottom) +
           "\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
    out += "<line x1=\"" + detail::svg_num(left) + "\" y1=\"" + detail::svg_num(bottom) +
           "\" x2=\"" + detail::svg_num(right) + "\" y2=\"" + detail::svg_num(bottom) +
           "\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
    out += "<text x=\"" + detail::svg_num((left + right) / 2) + "\" y=\"" +
           detail::svg_num(height - 24) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" +
           detail::svg_x_label(sweep_name) + "</text>\n";
    out += "<text x=\"22\" y=\"" + detail::svg_num((top + bottom) / 2) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
           "transform=\"rotate(-90 22 " +
           detail::svg_num((top + bottom) / 2) + ")\">" + detail::svg_y_label(metric) +
           "</text>\n";

    // Series.
    for (std::size_t s = 0; s < schemes.size(); ++s) {
        const char *color = palette[s % n_colors];
        std::string points;
        for (const auto &[x, y] : series[schemes[s]]) {
            points += detail::svg_num(sx(x)) + "," + detail::svg_num(sy(y)) + " ";
        }
        out += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
               "\" stroke-width=\"2\" points=\"" + points + "\"/>\n";
        const double ly = top + 18.0 * static_cast<double>(s);
        out += "<line x1=\"" + detail::svg_num(right + 14) + "\" y1=\"" + detail::svg_num(ly) +
               "\" x2=\"" + detail::svg_num(right + 40) + "\" y2=\"" + detail::svg_num(ly) +
               "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
        out += "<text x=\"" + detail::svg_num(right + 46) + "\" y=\"" + detail::svg_num(ly + 4) +
               "\" font-family=\"sans-serif\" font-size=\"12\">" + schemes[s] + "</text>\n";
    }

    out += "</svg>\n";
    return out;
}

inline void emit_svg(const ExperimentResult &result, const std::string &path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("emit_svg: cannot write '" + path + "'");
    out << svg_string(result);
    if (!out)
        throw std::runtime_error("emit_svg: write failed for '" + path + "'");
}

} // namespace simkit

#endif // SIMKIT_SVG_HPP
