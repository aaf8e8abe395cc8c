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

#ifndef SIMKIT_REFLECTION_HPP
#define SIMKIT_REFLECTION_HPP

#include <algorithm>
#include <vector>

#include "simkit/complex.hpp"
#include "simkit/estimation.hpp"
#include "simkit/sdp.hpp"
#include "simkit/transforms.hpp"

namespace simkit {

/// M unit-modulus reflection coefficients used for data transmission.
using PhaseVector = cvec;

inline bool is_unit_modulus(const PhaseVector &phi, double tol = 1e-12) {
    for (const cplx &p : phi)
        if (std::abs(std::abs(p) - 1.0) > tol)
            return false;
    return true;
}

/// Per-sub-carrier channel power |d_n + sum_m phi_m G_{n,m}|^2.
inline std::vector<double> channel_gain(const PhaseVector &phi, const cvec &d_cfr,
                                        const cmat &g_cfr) {
    if (d_cfr.size() != g_cfr.rows() || phi.size() != g_cfr.cols())
        throw std::invalid_argument("channel_gain: dimension mismatch");
    std::vector<double> w(d_cfr.size());
    for (std::size_t t = 0; t < d_cfr.size(); ++t) {
        cplx s = d_cfr[t];
        for (std::size_t m = 0; m < phi.size(); ++m)
            s += phi[m] * g_cfr(t, m);
        w[t] = std::norm(s);
    }
    return w;
}

/// Sum channel power gain over all tones: the quantity the reflection
/// optimizers maximize.
inline double sum_gain_objective(const PhaseVector &phi, const cvec &d_cfr, const cmat &g_cfr) {
    double acc = 0.0;
    for (double w : channel_gain(phi, d_cfr, g_cfr))
        acc += w;
    return acc;
}

/// Time-domain form of the same objective over the combined taps.
inline double sum_gain_objective_time(const PhaseVector &phi, const cvec &d_taps,
                                      const cmat &g_taps) {
    if (d_taps.size() != g_taps.cols() || phi.size() != g_taps.rows())
        throw std::invalid_argument("sum_gain_objective_time: dimension mismatch");
    double acc = 0.0;
    for (std::size_t l = 0; l < d_taps.size(); ++l) {
        cplx s = d_taps[l];
        for (std::size_t m = 0; m < phi.size(); ++m)
            s += phi[m] * g_taps(m, l);
        acc += std::norm(s);
    }
    return acc;
}

/// Achievable rate in bits/s/Hz with uniform power allocation:
/// (1/(n+lcp)) * sum_n log2(1 + pt*w_n/(n*gamma*sigma2)).
inline double achievable_rate(const std::vector<double> &w, double pt, double noise_var,
                              double gamma_lin, int n, int lcp) {
    if (w.size() != static_cast<std::size_t>(n))
        throw std::invalid_argument("achievable_rate: spectrum length does not match n");
    if (gamma_lin < 1.0)
        throw std::invalid_argument("achievable_rate: gamma must be >= 1 (linear)");
    if (noise_var <= 0.0)
        throw std::invalid_argument("achievable_rate: noise_var must be positive");
    if (lcp < 0)
        throw std::invalid_argument("achievable_rate: lcp must be >= 0");
    const double c = pt / (static_cast<double>(n) * gamma_lin * noise_var);
    double acc = 0.0;
    for (double wn : w)
        acc += std::log2(1.0 + c * wn);
    return acc / static_cast<double>(n + lcp);
}

/// Jensen upper bound on the achievable rate:
/// (n/(n+lcp)) * log2(1 + mean_n(pt*w_n/(n*gamma*sigma2))).
inline double rate_upper_bound(const std::vector<double> &w, double pt, double noise_var,
                               double gamma_lin, int n, int lcp) {
    if (w.size() != static_cast<std::size_t>(n))
        throw std::invalid_argument("rate_upper_bound: spectrum length does not match n");
    if (gamma_lin < 1.0)
        throw std::invalid_argument("rate_upper_bound: gamma must be >= 1 (linear)");
    if (noise_var <= 0.0)
        throw std::invalid_argument("rate_upper_bound: noise_var must be positive");
    const double c = pt / (static_cast<double>(n) * gamma_lin * noise_var);
    double mean = 0.0;
    for (double wn : w)
        mean += c * wn;
    mean /= static_cast<double>(n);
    return static_cast<double>(n) / static_cast<double>(n + lcp) * std::log2(1.0 + mean);
}

/// Rate summary for one evaluated phase vector.
struct RateReport {
    double rate_bps_hz = 0.0;
    double upper_bound = 0.0;
    double effective_rate = 0.0;
    double gamma_db = 0.0;
};

/// Direct-link taps plus the M x L cascaded-group taps.
struct CirSet {
    cvec d_taps;
    cmat g_taps;
};

/// Truncated time-domain views of a CFR pair.
inline CirSet cirs_from_cfr(const cvec &d_cfr, const cmat &g_cfr, int taps) {
    if (d_cfr.size() != g_cfr.rows())
        throw std::invalid_argument("cirs_from_cfr: dimension mismatch");
    const std::size_t n = d_cfr.size();
    CirSet out;
    out.d_taps = idft_truncated(d_cfr, n, static_cast<std::size_t>(taps));
    out.g_taps = cmat(g_cfr.cols(), static_cast<std::size_t>(taps));
    for (std::size_t m = 0; m < g_cfr.cols(); ++m)
        out.g_taps.set_row(m, idft_truncated(g_cfr.col(m), n, static_cast<std::size_t>(taps)));
    return out;
}

/// Time-domain views already carried by a channel estimate.
inline CirSet estimate_cirs(const ChannelEstimate &est) {
    return CirSet{est.d_cir_hat, est.g_cir_hat};
}

/// Strongest-CIR phase alignment: pick the tap index maximizing
/// (sum_m |g_{m,l}| + |d_l|)^2 (ties toward the smallest l), then set
/// phi_m = exp(j(angle(d_l) - angle(g_{m,l}))). All-zero taps at the chosen
/// index fall back to phi = 1.
inline PhaseVector scm_optimize(const cvec &d_taps, const cmat &g_taps) {
    if (d_taps.size() != g_taps.cols())
        throw std::invalid_argument("scm_optimize: tap count mismatch");
    const std::size_t taps = d_taps.size();
    const std::size_t m = g_taps.rows();
    if (taps == 0 || m == 0)
        throw std::invalid_argument("scm_optimize: empty input");

    std::size_t best_l = 0;
    double best_score = -1.0;
    for (std::size_t l = 0; l < taps; ++l) {
        double s = std::abs(d_taps[l]);
        for (std::size_t g = 0; g < m; ++g)
            s += std::abs(g_taps(g, l));
        if (s * s > best_score) {
            best_score = s * s;
            best_l = l;
        }
    }

    PhaseVector phi(m, cplx(1.0, 0.0));
    if (best_score <= 0.0)
        return phi;
    const double d_angle = std::arg(d_taps[best_l]);
    for (std::size_t g = 0; g < m; ++g)
        phi[g] = std::polar(1.0, d_angle - std::arg(g_taps(g, best_l)));
    return phi;
}

namespace detail {

/// One cycle of per-coordinate closed-form updates on the sum-gain objective.
/// Returns the largest coefficient movement; `combined` is kept equal to
/// d + G*phi. Appends the objective after every coordinate step when a
/// trajectory sink is given.
inline double coordinate_refine_cycle(PhaseVector &phi, cvec &combined, const cmat &g_cfr,
                                      std::vector<double> *trajectory) {
    const std::size_t n = combined.size();
    double moved = 0.0;
    for (std::size_t m = 0; m < phi.size(); ++m) {
        cplx z(0.0, 0.0);
        for (std::size_t t = 0; t < n; ++t) {
            const cplx rest = combined[t] - phi[m] * g_cfr(t, m);
            z += g_cfr(t, m) * std::conj(rest);
        }
        if (std::abs(z) == 0.0)
            continue;
        const cplx updated = std::conj(z) / std::abs(z);
        moved = std::max(moved, std::abs(updated - phi[m]));
        for (std::size_t t = 0; t < n; ++t)
            combined[t] += (updated - phi[m]) * g_cfr(t, m);
        phi[m] = updated;
        if (trajectory) {
            double obj = 0.0;
            for (std::size_t t = 0; t < n; ++t)
                obj += std::norm(combined[t]);
            trajectory->push_back(obj);
        }
    }
    return moved;
}

} // namespace detail

/// Exhaustive phase-grid search (phi_m on Q-th roots of unity) followed by
/// cyclic per-coordinate continuous refinement. The Q^M budget is capped at
/// 1e7 candidates. Intended as a verification oracle, not a fast optimizer.
inline PhaseVector brute_force_optimize(const cvec &d_cfr, const cmat &g_cfr, int grid_size,
                                        std::vector<double> *refine_trajectory = nullptr) {
    if (d_cfr.size() != g_cfr.rows())
        throw std::invalid_argument("brute_force_optimize: dimension mismatch");
    if (grid_size < 2)
        throw std::invalid_argument("brute_force_optimize: grid_size must be >= 2");
    const std::size_t m = g_cfr.cols();
    if (m == 0)
        throw std::invalid_argument("brute_force_optimize: no reflection coefficients");
    double budget = 1.0;
    for (std::size_t i = 0; i < m; ++i) {
        budget *= grid_size;
        if (budget > 1e7)
            throw std::invalid_argument("brute_force_optimize: grid budget Q^M exceeds 1e7");
    }

    cvec roots(grid_size);
    for (int q = 0; q < grid_size; ++q)
        roots[q] = std::polar(1.0, 2.0 * std::numbers::pi * q / grid_size);

    std::vector<int> idx(m, 0);
    PhaseVector best(m, roots[0]);
    double best_obj = -1.0;
    PhaseVector cur(m, roots[0]);
    while (true) {
        for (std::size_t i = 0; i < m; ++i)
            cur[i] = roots[idx[i]];
        const double obj = sum_gain_objective(cur, d_cfr, g_cfr);
        if (obj > best_obj) {
            best_obj = obj;
            best = cur;
        }
        // odometer
        std::size_t pos = 0;
        while (pos < m && ++idx[pos] == grid_size) {
            idx[pos] = 0;
            ++pos;
        }
        if (pos == m)
            break;
    }

    // Continuous polish from the best grid point.
    cvec combined = d_cfr;
    for (std::size_t t = 0; t < combined.size(); ++t)
        for (std::size_t g = 0; g < m; ++g)
            combined[t] += best[g] * g_cfr(t, g);
    for (int cycle = 0; cycle < 500; ++cycle) {
        const double moved =
            detail::coordinate_refine_cycle(best, combined, g_cfr, refine_trajectory);
        if (moved < 1e-10)
            break;
    }
    return best;
}

/// Semidefinite-relaxation optimizer. The sum-gain objective is lifted with
/// the homogenizing entry last: b_n = conj([G_{n,1..M}; d_n]),
/// R = sum_n b_n b_n^H, then max tr(RV) with V PSD, unit diagonal, is solved
/// to a certified relative duality gap of 1e-6 and rounded back by Gaussian
/// randomization (plus a leading-eigenvector candidate).
inline PhaseVector sdr_optimize(const cvec &d_cfr, const cmat &g_cfr, int n_randomizations,
                                RngStream &rng) {
    if (d_cfr.size() != g_cfr.rows())
        throw std::invalid_argument("sdr_optimize: dimension mismatch");
    if (n_randomizations < 1)
        throw std::invalid_argument("sdr_optimize: n_randomizations must be >= 1");
    const std::size_t m = g_cfr.cols();
    const std::size_t n = d_cfr.size();
    const Eigen::Index dim = static_cast<Eigen::Index>(m) + 1;

    Eigen::MatrixXcd r_mat = Eigen::MatrixXcd::Zero(dim, dim);
    Eigen::VectorXcd b(dim);
    for (std::size_t t = 0; t < n; ++t) {
        for (std::size_t g = 0; g < m; ++g)
            b(static_cast<Eigen::Index>(g)) = std::conj(g_cfr(t, g));
        b(dim - 1) = std::conj(d_cfr[t]);
        r_mat.noalias() += b * b.adjoint();
    }

    const UnitDiagSdpSolution sol = solve_unit_diag_sdp(r_mat, rng, 1e-6);

    auto dehomogenize = [&](const Eigen::VectorXcd &xi) {
        PhaseVector phi(m);
        Eigen::dcomplex ref = xi(dim - 1);
        if (std::abs(ref) == 0.0)
            ref = Eigen::dcomplex(1.0, 0.0);
        ref /= std::abs(ref);
        for (std::size_t g = 0; g < m; ++g) {
            Eigen::dcomplex v = xi(static_cast<Eigen::Index>(g));
            if (std::abs(v) == 0.0)
                v = Eigen::dcomplex(1.0, 0.0);
            v /= std::abs(v);
            const Eigen::dcomplex p = v * std::conj(ref);
            phi[g] = cplx(p.real(), p.imag()) / std::abs(p);
        }
        return phi;
    };

    PhaseVector best;
    double best_obj = -1.0;
    auto consider = [&](const Eigen::VectorXcd &xi) {
        PhaseVector cand = dehomogenize(xi);
        const double obj = sum_gain_objective(cand, d_cfr, g_cfr);
        if (obj > best_obj) {
            best_obj = obj;
            best = std::move(cand);
        }
    };

    // Deterministic candidate: dominant eigenvector of V = Y Y^H via the
    // small Gram matrix Y^H Y.
    {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> gram(sol.factor.adjoint() * sol.factor);
        const Eigen::Index top = gram.eigenvalues().size() - 1;
        consider(sol.factor * gram.eigenvectors().col(top));
    }

    const Eigen::Index rank = sol.factor.cols();
    Eigen::VectorXcd z(rank);
    for (int c = 0; c < n_randomizations; ++c) {
        for (Eigen::Index i = 0; i < rank; ++i) {
            const cplx g = rng.gaussian(1.0);
            z(i) = Eigen::dcomplex(g.real(), g.imag());
        }
        consider(sol.factor * z);
    }
    return best;
}

} // namespace simkit

#endif // SIMKIT_REFLECTION_HPP
