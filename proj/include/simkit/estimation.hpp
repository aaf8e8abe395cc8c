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

#ifndef SIMKIT_ESTIMATION_HPP
#define SIMKIT_ESTIMATION_HPP

#include <Eigen/Dense>
#include <numbers>
#include <string>
#include <vector>

#include "simkit/channel.hpp"
#include "simkit/complex.hpp"
#include "simkit/rng.hpp"
#include "simkit/sequences.hpp"
#include "simkit/transforms.hpp"

namespace simkit {

/// Comb-type pilot grid: np pilot tones at indices {0, D, ..., (np-1)*D} with
/// spacing D = n/np. np must divide n.
struct PilotGrid {
    int n = 0;
    int np = 0;

    int spacing() const { return n / np; }
    int index(int k) const { return k * spacing(); }

    std::vector<int> indices() const {
        std::vector<int> out(np);
        for (int k = 0; k < np; ++k)
            out[k] = index(k);
        return out;
    }
};

inline PilotGrid make_pilot_grid(int n, int np) {
    if (n < 1 || np < 1)
        throw std::invalid_argument("make_pilot_grid: n and np must be positive");
    if (n % np != 0)
        throw std::invalid_argument("make_pilot_grid: np must divide n");
    return PilotGrid{n, np};
}

enum class PatternKind { dft, onoff, custom };

/// Training matrix of per-pilot-symbol surface states. Column i is the
/// stacked state [1; phi^(i)] applied while pilot symbol i is received, so
/// theta is (M+1)x(M+1) and its first row is all ones.
struct ReflectionPattern {
    PatternKind kind = PatternKind::custom;
    cmat theta;
    double condition_number = 1.0;
    std::vector<double> singular_values; // populated for custom patterns

    int groups() const { return static_cast<int>(theta.rows()) - 1; }
    int symbols() const { return static_cast<int>(theta.rows()); }
};

/// Orthogonal training pattern: theta is the (M+1)-point DFT matrix, entries
/// exp(-j*2*pi*i*j/(M+1)). Satisfies theta^H theta = (M+1) I, so the decoupling
/// step can use theta^H/(M+1) instead of an inverse.
inline ReflectionPattern dft_pattern(int m) {
    if (m < 1)
        throw std::invalid_argument("dft_pattern: m must be >= 1");
    const std::size_t dim = static_cast<std::size_t>(m) + 1;
    ReflectionPattern pat;
    pat.kind = PatternKind::dft;
    pat.theta = cmat(dim, dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j)
            pat.theta(i, j) = detail::twiddle(i, j, dim, -1.0);
    return pat;
}

/// ON/OFF training pattern: symbol 0 has every sub-surface off, symbol i >= 1
/// has only sub-surface i on at amplitude 1.
inline ReflectionPattern onoff_pattern(int m) {
    if (m < 1)
        throw std::invalid_argument("onoff_pattern: m must be >= 1");
    const std::size_t dim = static_cast<std::size_t>(m) + 1;
    ReflectionPattern pat;
    pat.kind = PatternKind::onoff;
    pat.theta = cmat(dim, dim);
    for (std::size_t j = 0; j < dim; ++j) {
        pat.theta(0, j) = cplx(1.0, 0.0);
        if (j >= 1)
            pat.theta(j, j) = cplx(1.0, 0.0);
    }
    return pat;
}

namespace detail {

inline Eigen::MatrixXcd to_eigen(const cmat &a) {
    Eigen::MatrixXcd out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = a(i, j);
    return out;
}

} // namespace detail

/// Wrap a caller-supplied training matrix. Checks the fixed leading-one row
/// and rejects ill-conditioned matrices, reporting the condition number.
inline ReflectionPattern custom_pattern(cmat theta, double max_condition = 1e10) {
    if (theta.rows() < 2 || theta.rows() != theta.cols())
        throw std::invalid_argument("custom_pattern: theta must be square, at least 2x2");
    for (std::size_t j = 0; j < theta.cols(); ++j)
        if (std::abs(theta(0, j) - cplx(1.0, 0.0)) > 1e-12)
            throw std::invalid_argument("custom_pattern: first row must be all ones");
    ReflectionPattern pat;
    pat.kind = PatternKind::custom;
    pat.theta = std::move(theta);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(detail::to_eigen(pat.theta));
    const auto &sv = svd.singularValues();
    pat.singular_values.assign(sv.data(), sv.data() + sv.size());
    const double smax = pat.singular_values.front();
    const double smin = pat.singular_values.back();
    pat.condition_number = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
    if (!(pat.condition_number < max_condition))
        throw std::runtime_error("custom_pattern: theta is singular or ill-conditioned "
                                 "(condition number " +
                                 std::to_string(pat.condition_number) + ")");
    return pat;
}

/// Received pilot tones of one OFDM pilot symbol.
struct PilotSymbolObservation {
    cvec y_pilot;
    int symbol_index = 0;
};

/// Decoupled channel estimate: direct CFR, cascaded CFR matrix, and their
/// truncated time-domain views.
struct ChannelEstimate {
    cvec d_hat;     // N
    cmat g_hat;     // N x M
    cvec d_cir_hat; // L
    cmat g_cir_hat; // M x L
};

/// Simulate reception of pilot symbol `symbol_index` under the pattern state
/// of that symbol: y_P = sqrt(power_per_tone) * diag(pilots) * h_P + v_P,
/// where h = [d G] * theta(:, symbol_index).
inline PilotSymbolObservation simulate_pilot_symbol(const ChannelRealization &real,
                                                    const ReflectionPattern &pattern,
                                                    int symbol_index, const cvec &pilots,
                                                    const PilotGrid &grid, double power_per_tone,
                                                    double noise_var, RngStream &rng) {
    const std::size_t n = static_cast<std::size_t>(grid.n);
    const std::size_t np = static_cast<std::size_t>(grid.np);
    const int m = pattern.groups();
    if (real.direct_cfr.size() != n || real.cascaded_cfr.rows() != n)
        throw std::invalid_argument("simulate_pilot_symbol: channel size does not match grid");
    if (real.cascaded_cfr.cols() != static_cast<std::size_t>(m))
        throw std::invalid_argument("simulate_pilot_symbol: group count does not match pattern");
    if (pilots.size() != np)
        throw std::invalid_argument("simulate_pilot_symbol: pilot length does not match grid");
    if (symbol_index < 0 || symbol_index > m)
        throw std::invalid_argument("simulate_pilot_symbol: symbol index out of range");
    if (power_per_tone < 0.0 || noise_var < 0.0)
        throw std::invalid_argument("simulate_pilot_symbol: powers must be >= 0");

    const double amp = std::sqrt(power_per_tone);
    PilotSymbolObservation obs;
    obs.symbol_index = symbol_index;
    obs.y_pilot.resize(np);
    for (std::size_t k = 0; k < np; ++k) {
        const std::size_t tone = static_cast<std::size_t>(grid.index(static_cast<int>(k)));
        cplx h = pattern.theta(0, symbol_index) * real.direct_cfr[tone];
        for (int g = 0; g < m; ++g)
            h += pattern.theta(g + 1, symbol_index) * real.cascaded_cfr(tone, g);
        obs.y_pilot[k] = amp * pilots[k] * h + rng.gaussian(noise_var);
    }
    return obs;
}

/// Least-squares CFR estimate on the pilot tones: r = X_P^{-1} y_P.
inline cvec ls_estimate(const PilotSymbolObservation &obs, const cvec &pilots,
                        double power_per_tone) {
    if (obs.y_pilot.size() != pilots.size())
        throw std::invalid_argument("ls_estimate: pilot length does not match observation");
    if (power_per_tone <= 0.0)
        throw std::invalid_argument("ls_estimate: power_per_tone must be positive");
    const double amp = std::sqrt(power_per_tone);
    cvec r(obs.y_pilot.size());
    for (std::size_t k = 0; k < r.size(); ++k) {
        if (pilots[k] == cplx(0.0, 0.0))
            throw std::runtime_error("ls_estimate: zero pilot entry");
        r[k] = obs.y_pilot[k] / (amp * pilots[k]);
    }
    return r;
}

/// DFT/IDFT interpolation from the np pilot-tone estimates to all n tones:
/// np-point inverse transform, keep the first `taps` entries, re-expand with
/// an n-point transform. Exact on every tone for any channel of at most
/// `taps` taps when np >= taps.
inline cvec interpolate_cfr(const cvec &r, const PilotGrid &grid, int taps) {
    if (r.size() != static_cast<std::size_t>(grid.np))
        throw std::invalid_argument("interpolate_cfr: input length does not match grid");
    if (taps < 1)
        throw std::invalid_argument("interpolate_cfr: taps must be >= 1");
    if (taps > grid.np)
        throw std::invalid_argument("interpolate_cfr: np < taps would alias the impulse response");
    const cvec cir = idft_truncated(r, static_cast<std::size_t>(grid.np),
                                    static_cast<std::size_t>(taps));
    return cir_to_cfr(cir, static_cast<std::size_t>(grid.n));
}

/// Decouple the direct and cascaded responses from the stacked per-symbol
/// estimates: [d_hat G_hat] = H_hat * theta^{-1}. The orthogonal pattern uses
/// theta^H/(M+1); the ON/OFF pattern uses its closed-form inverse; custom
/// patterns go through an LU solve.
inline ChannelEstimate estimate_channels(const cmat &h_hat_stack, const ReflectionPattern &pattern,
                                         int taps) {
    const std::size_t n = h_hat_stack.rows();
    const std::size_t dim = static_cast<std::size_t>(pattern.symbols());
    const int m = pattern.groups();
    if (h_hat_stack.cols() != dim)
        throw std::invalid_argument("estimate_channels: stack width does not match pattern");
    if (taps < 1 || static_cast<std::size_t>(taps) > n)
        throw std::invalid_argument("estimate_channels: invalid tap count");

    cmat decoupled(n, dim);
    switch (pattern.kind) {
    case PatternKind::dft: {
        const double scale = 1.0 / static_cast<double>(dim);
        for (std::size_t t = 0; t < n; ++t)
            for (std::size_t j = 0; j < dim; ++j) {
                cplx acc(0.0, 0.0);
                for (std::size_t i = 0; i < dim; ++i)
                    acc += h_hat_stack(t, i) * std::conj(pattern.theta(j, i));
                decoupled(t, j) = acc * scale;
            }
        break;
    }
    case PatternKind::onoff:
        // d = h^(0); g_i = h^(i) - h^(0)
        for (std::size_t t = 0; t < n; ++t) {
            decoupled(t, 0) = h_hat_stack(t, 0);
            for (std::size_t j = 1; j < dim; ++j)
                decoupled(t, j) = h_hat_stack(t, j) - h_hat_stack(t, 0);
        }
        break;
    case PatternKind::custom: {
        // Solve theta^T Z^T = H^T for Z = H * theta^{-1}.
        Eigen::MatrixXcd theta_t = detail::to_eigen(pattern.theta).transpose();
        Eigen::MatrixXcd rhs(dim, n);
        for (std::size_t t = 0; t < n; ++t)
            for (std::size_t i = 0; i < dim; ++i)
                rhs(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(t)) =
                    h_hat_stack(t, i);
        Eigen::PartialPivLU<Eigen::MatrixXcd> lu(theta_t);
        Eigen::MatrixXcd z = lu.solve(rhs);
        for (std::size_t t = 0; t < n; ++t)
            for (std::size_t j = 0; j < dim; ++j)
                decoupled(t, j) = z(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(t));
        break;
    }
    }

    ChannelEstimate est;
    est.d_hat = decoupled.col(0);
    est.g_hat = cmat(n, static_cast<std::size_t>(m));
    for (int g = 0; g < m; ++g)
        for (std::size_t t = 0; t < n; ++t)
            est.g_hat(t, g) = decoupled(t, g + 1);

    est.d_cir_hat = idft_truncated(est.d_hat, n, static_cast<std::size_t>(taps));
    est.g_cir_hat = cmat(static_cast<std::size_t>(m), static_cast<std::size_t>(taps));
    for (int g = 0; g < m; ++g)
        est.g_cir_hat.set_row(g, idft_truncated(est.g_hat.col(g), n,
                                                static_cast<std::size_t>(taps)));
    require_finite(est.d_hat, "estimate_channels");
    require_finite(est.g_hat, "estimate_channels");
    return est;
}

/// Run the whole first sub-frame for one channel realization: M+1 simulated
/// pilot symbols, least squares, interpolation, decoupling.
inline ChannelEstimate estimate_from_pilots(const ChannelRealization &real,
                                            const ReflectionPattern &pattern,
                                            const PilotGrid &grid, const cvec &pilots,
                                            double power_per_tone, double noise_var, int taps,
                                            RngStream &rng) {
    const std::size_t n = static_cast<std::size_t>(grid.n);
    const std::size_t dim = static_cast<std::size_t>(pattern.symbols());
    cmat stack(n, dim);
    for (std::size_t i = 0; i < dim; ++i) {
        const auto obs = simulate_pilot_symbol(real, pattern, static_cast<int>(i), pilots, grid,
                                               power_per_tone, noise_var, rng);
        const cvec r = ls_estimate(obs, pilots, power_per_tone);
        stack.set_col(i, interpolate_cfr(r, grid, taps));
    }
    return estimate_channels(stack, pattern, taps);
}

/// Per-sub-carrier channel estimation MSE predicted for a pattern:
/// sigma^2*N*L/(Np*Pt) * trace((theta^H theta)^{-1}). The trace factor is 1
/// for the orthogonal pattern and 2M+1 for ON/OFF.
inline double theoretical_mse(const ReflectionPattern &pattern, double noise_var, int n, int np,
                              double pt, int taps) {
    if (n < 1 || np < 1 || taps < 1)
        throw std::invalid_argument("theoretical_mse: n, np, taps must be positive");
    if (pt <= 0.0)
        throw std::invalid_argument("theoretical_mse: pt must be positive");
    if (noise_var < 0.0)
        throw std::invalid_argument("theoretical_mse: noise_var must be >= 0");
    const double base = noise_var * static_cast<double>(n) * static_cast<double>(taps) /
                        (static_cast<double>(np) * pt);
    double trace_term = 0.0;
    switch (pattern.kind) {
    case PatternKind::dft:
        trace_term = 1.0;
        break;
    case PatternKind::onoff:
        trace_term = 2.0 * pattern.groups() + 1.0;
        break;
    case PatternKind::custom:
        // trace((theta^H theta)^{-1}) = sum of inverse squared singular values
        for (double s : pattern.singular_values)
            trace_term += 1.0 / (s * s);
        break;
    }
    return base * trace_term;
}

/// Single-realization estimation error: (1/n) * ||[d_hat G_hat] - [d G]||_F^2.
inline double empirical_mse(const ChannelEstimate &est, const cvec &d_true, const cmat &g_true,
                            int n) {
    if (est.d_hat.size() != d_true.size() || est.g_hat.rows() != g_true.rows() ||
        est.g_hat.cols() != g_true.cols())
        throw std::invalid_argument("empirical_mse: estimate and truth dimensions differ");
    if (static_cast<std::size_t>(n) != d_true.size())
        throw std::invalid_argument("empirical_mse: n does not match CFR length");
    double acc = 0.0;
    for (std::size_t t = 0; t < d_true.size(); ++t)
        acc += std::norm(est.d_hat[t] - d_true[t]);
    for (std::size_t t = 0; t < g_true.rows(); ++t)
        for (std::size_t g = 0; g < g_true.cols(); ++g)
            acc += std::norm(est.g_hat(t, g) - g_true(t, g));
    return acc / static_cast<double>(n);
}

} // namespace simkit

#endif // SIMKIT_ESTIMATION_HPP
