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

#ifndef SIMKIT_CHANNEL_HPP
#define SIMKIT_CHANNEL_HPP

#include <numbers>
#include <string>
#include <utility>

#include "simkit/complex.hpp"
#include "simkit/rng.hpp"
#include "simkit/transforms.hpp"

namespace simkit {

/// Deployment geometry: the AP sits at the origin, the reflecting surface at
/// `irs_ap_distance` on the same axis, and the user on a parallel line offset
/// by `user_lateral_offset`, at `user_horizontal` from the AP.
struct Geometry {
    double irs_ap_distance = 50.0;
    double user_lateral_offset = 2.0;
    double user_horizontal = 45.0;
};

/// Tapped-delay-line Rician profile. Tap 0 is the deterministic line-of-sight
/// component; taps 1..L-1 are i.i.d. Rayleigh with a uniform power-delay
/// profile. `nlos_to_los_ratio` is the total NLoS power over the LoS power.
struct FadingProfile {
    int num_taps = 6;
    double nlos_to_los_ratio = 0.5;
    double pathloss_exp_direct = 3.5;
    double pathloss_exp_user_irs = 2.4;
    double pathloss_exp_irs_ap = 2.2;
    double ref_loss_db = 30.0;
};

/// Rectangular reflecting surface of rows x cols elements, partitioned into
/// rectangular tiles of tile_rows x tile_cols adjacent elements that share one
/// reflection coefficient. Tiles are enumerated row-major over the tile grid.
struct IrsLayout {
    int rows = 12;
    int cols = 12;
    int tile_rows = 3;
    int tile_cols = 4;

    int num_elements() const { return rows * cols; }
    int tile_grid_rows() const { return rows / tile_rows; }
    int tile_grid_cols() const { return cols / tile_cols; }
    int num_groups() const { return tile_grid_rows() * tile_grid_cols(); }
    int elements_per_group() const { return tile_rows * tile_cols; }

    void validate() const {
        if (rows < 1 || cols < 1)
            throw std::invalid_argument("IrsLayout: rows and cols must be positive");
        if (tile_rows < 1 || tile_cols < 1)
            throw std::invalid_argument("IrsLayout: tile dimensions must be positive");
        if (rows % tile_rows != 0)
            throw std::invalid_argument("IrsLayout: tile_rows must divide rows");
        if (cols % tile_cols != 0)
            throw std::invalid_argument("IrsLayout: tile_cols must divide cols");
    }

    /// Tile index (row-major over the tile grid) owning element (p, q).
    int tile_of(int p, int q) const { return (p / tile_rows) * tile_grid_cols() + q / tile_cols; }

    /// Most-square tiling with the requested number of groups, ties broken
    /// toward fewer tile rows. Throws if no rectangular tiling exists.
    static IrsLayout with_groups(int rows, int cols, int groups) {
        if (rows < 1 || cols < 1 || groups < 1)
            throw std::invalid_argument("IrsLayout: rows, cols, groups must be positive");
        const int k = rows * cols;
        if (k % groups != 0)
            throw std::invalid_argument("IrsLayout: groups must divide the element count");
        const int per_group = k / groups;
        int best_tr = -1, best_tc = -1;
        for (int tr = 1; tr <= rows; ++tr) {
            if (rows % tr != 0 || per_group % tr != 0)
                continue;
            const int tc = per_group / tr;
            if (tc > cols || cols % tc != 0)
                continue;
            if (best_tr < 0 || std::abs(tr - tc) < std::abs(best_tr - best_tc)) {
                best_tr = tr;
                best_tc = tc;
            }
        }
        if (best_tr < 0)
            throw std::invalid_argument("IrsLayout: no rectangular tiling for " +
                                        std::to_string(groups) + " groups on " +
                                        std::to_string(rows) + "x" + std::to_string(cols));
        IrsLayout out{rows, cols, best_tr, best_tc};
        out.validate();
        return out;
    }
};

/// One quasi-static draw of every channel in the system. Immutable once
/// built; serves a whole simulated frame.
struct ChannelRealization {
    cvec direct_cir;    // L taps, user -> AP
    cmat element_cirs;  // K x L, per-element cascaded user -> element -> AP
    cmat group_cirs;    // M x L, tile sums of element_cirs
    cvec direct_cfr;    // N
    cmat cascaded_cfr;  // N x M, column m is the frequency response of group m
};

/// Linear path gain: 10^(-ref_loss_db/10) * distance^(-exponent).
inline double path_loss_linear(double distance, double exponent, double ref_loss_db = 30.0) {
    if (distance <= 0.0)
        throw std::invalid_argument("path_loss_linear: distance must be positive");
    return std::pow(10.0, -ref_loss_db / 10.0) * std::pow(distance, -exponent);
}

/// (user-AP distance, user-IRS distance) for the given geometry.
inline std::pair<double, double> user_distances(const Geometry &geom) {
    const double off2 = geom.user_lateral_offset * geom.user_lateral_offset;
    const double user_ap = std::sqrt(geom.user_horizontal * geom.user_horizontal + off2);
    const double dx = geom.irs_ap_distance - geom.user_horizontal;
    const double user_irs = std::sqrt(dx * dx + off2);
    return {user_ap, user_irs};
}

namespace detail {

inline void check_rician(const FadingProfile &profile) {
    if (profile.num_taps < 1)
        throw std::invalid_argument("FadingProfile: num_taps must be >= 1");
    if (profile.nlos_to_los_ratio < 0.0)
        throw std::invalid_argument("FadingProfile: nlos_to_los_ratio must be >= 0");
    if (profile.num_taps == 1 && profile.nlos_to_los_ratio > 0.0)
        throw std::invalid_argument("FadingProfile: single-tap profile cannot carry NLoS power");
}

} // namespace detail

/// Direct-link CIR draw. Tap 0 carries gain/(1+eta) with a phase uniform on
/// (0, 2*pi]; taps 1..L-1 split the remaining power evenly.
inline cvec gen_direct_cir(const FadingProfile &profile, double gain, RngStream &rng) {
    detail::check_rician(profile);
    if (gain < 0.0)
        throw std::invalid_argument("gen_direct_cir: gain must be >= 0");
    const int taps = profile.num_taps;
    const double eta = profile.nlos_to_los_ratio;
    const double los_power = gain / (1.0 + eta);
    cvec cir(taps);
    const double theta = rng.angle();
    cir[0] = std::sqrt(los_power) * cplx(std::cos(theta), std::sin(theta));
    if (taps > 1) {
        const double tap_power = gain * eta / ((1.0 + eta) * (taps - 1));
        for (int l = 1; l < taps; ++l)
            cir[l] = rng.gaussian(tap_power);
    }
    return cir;
}

/// Per-element cascaded CIR draws with the steering parameters fixed by the
/// caller: element (p, q) has LoS phase theta0 + pi*(p*a + q*b). NLoS taps
/// are i.i.d. across elements (drawn element-major, tap-minor).
inline cmat gen_element_cirs_steered(const FadingProfile &profile, const IrsLayout &layout,
                                     double cascaded_gain, double theta0, double a, double b,
                                     RngStream &rng) {
    detail::check_rician(profile);
    layout.validate();
    if (cascaded_gain < 0.0)
        throw std::invalid_argument("gen_element_cirs: cascaded_gain must be >= 0");
    const int taps = profile.num_taps;
    const double eta = profile.nlos_to_los_ratio;
    const double los_amp = std::sqrt(cascaded_gain / (1.0 + eta));
    const double tap_power =
        taps > 1 ? cascaded_gain * eta / ((1.0 + eta) * (taps - 1)) : 0.0;
    const int k = layout.num_elements();
    cmat cirs(static_cast<std::size_t>(k), static_cast<std::size_t>(taps));
    for (int e = 0; e < k; ++e) {
        const int p = e / layout.cols;
        const int q = e % layout.cols;
        const double phase = theta0 + std::numbers::pi * (p * a + q * b);
        cirs(e, 0) = los_amp * cplx(std::cos(phase), std::sin(phase));
        for (int l = 1; l < taps; ++l)
            cirs(e, l) = rng.gaussian(tap_power);
    }
    return cirs;
}

/// Per-element cascaded CIR draws; the LoS steering (theta0, a, b) is drawn
/// once per call and shared across elements.
inline cmat gen_element_cirs(const FadingProfile &profile, const IrsLayout &layout,
                             double cascaded_gain, RngStream &rng) {
    const double theta0 = rng.angle();
    const double a = rng.uniform(-2.0, 2.0);
    const double b = rng.uniform(-2.0, 2.0);
    return gen_element_cirs_steered(profile, layout, cascaded_gain, theta0, a, b, rng);
}

/// Sum the K element CIRs of each tile into one group CIR (row-major tiles).
inline cmat group_elements(const cmat &element_cirs, const IrsLayout &layout) {
    layout.validate();
    if (element_cirs.rows() != static_cast<std::size_t>(layout.num_elements()))
        throw std::invalid_argument("group_elements: element count does not match layout");
    const std::size_t taps = element_cirs.cols();
    cmat groups(static_cast<std::size_t>(layout.num_groups()), taps);
    for (int e = 0; e < layout.num_elements(); ++e) {
        const int p = e / layout.cols;
        const int q = e % layout.cols;
        const int m = layout.tile_of(p, q);
        for (std::size_t l = 0; l < taps; ++l)
            groups(m, l) += element_cirs(e, l);
    }
    return groups;
}

/// N-point frequency response of a short CIR: H_n = sum_l c_l e^{-j2pi n l/N}.
inline cvec cir_to_cfr(const cvec &cir, std::size_t n) {
    if (cir.size() > n)
        throw std::invalid_argument("cir_to_cfr: CIR longer than transform size");
    cvec cfr(n);
    for (std::size_t tone = 0; tone < n; ++tone) {
        cplx acc(0.0, 0.0);
        for (std::size_t l = 0; l < cir.size(); ++l)
            acc += cir[l] * detail::twiddle(tone, l, n, -1.0);
        cfr[tone] = acc;
    }
    return cfr;
}

/// Draw a full channel realization for the given system geometry. Draw order:
/// direct link first, then the reflecting link.
inline ChannelRealization realize_channel(const FadingProfile &profile, const IrsLayout &layout,
                                          const Geometry &geom, std::size_t n, RngStream &rng) {
    const auto [user_ap, user_irs] = user_distances(geom);
    const double direct_gain =
        path_loss_linear(user_ap, profile.pathloss_exp_direct, profile.ref_loss_db);
    const double cascaded_gain =
        path_loss_linear(user_irs, profile.pathloss_exp_user_irs, profile.ref_loss_db) *
        path_loss_linear(geom.irs_ap_distance, profile.pathloss_exp_irs_ap, profile.ref_loss_db);

    ChannelRealization real;
    real.direct_cir = gen_direct_cir(profile, direct_gain, rng);
    real.element_cirs = gen_element_cirs(profile, layout, cascaded_gain, rng);
    real.group_cirs = group_elements(real.element_cirs, layout);
    real.direct_cfr = cir_to_cfr(real.direct_cir, n);
    real.cascaded_cfr = cmat(n, static_cast<std::size_t>(layout.num_groups()));
    for (int m = 0; m < layout.num_groups(); ++m)
        real.cascaded_cfr.set_col(m, cir_to_cfr(real.group_cirs.row(m), n));
    require_finite(real.direct_cfr, "realize_channel");
    require_finite(real.cascaded_cfr, "realize_channel");
    return real;
}

} // namespace simkit

#endif // SIMKIT_CHANNEL_HPP
