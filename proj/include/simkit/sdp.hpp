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

#ifndef SIMKIT_SDP_HPP
#define SIMKIT_SDP_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "simkit/rng.hpp"

namespace simkit {

/// Thrown when the SDP solver cannot certify the requested duality gap within
/// its iteration budget.
class SdpSolverError : public std::runtime_error {
  public:
    SdpSolverError(int sweeps, double rel_gap)
        : std::runtime_error("unit-diagonal SDP solver did not converge after " +
                             std::to_string(sweeps) + " sweeps (relative duality gap " +
                             std::to_string(rel_gap) + ")"),
          sweeps(sweeps), rel_gap(rel_gap) {}

    int sweeps;
    double rel_gap;
};

/// Solution of  max tr(R V)  s.t.  V >= 0, diag(V) = 1  (R Hermitian).
/// V is returned through its low-rank factor: V = factor * factor^H, with
/// unit-norm rows, so V is feasible by construction.
struct UnitDiagSdpSolution {
    Eigen::MatrixXcd factor;
    double primal = 0.0;
    double dual = 0.0;
    double rel_gap = 0.0;
    int sweeps = 0;
};

/// Low-rank coordinate-ascent solver for the unit-diagonal SDP, with a dual
/// certificate. Row i of the factor Y is repeatedly replaced by the
/// normalized gradient g_i = sum_{j != i} R_ij y_j, which never decreases
/// tr(R Y Y^H). Optimality is certified through weak duality: with
/// w_i = Re((R V)_ii), the matrix Diag(w) - R shifted by its most negative
/// eigenvalue gives a dual-feasible point, so
///   gap = n * max(0, -lambda_min(Diag(w) - R))
/// bounds the distance to the SDP optimum. The rank starts near sqrt(2n) and
/// escalates toward n if the certificate does not close.
inline UnitDiagSdpSolution solve_unit_diag_sdp(const Eigen::MatrixXcd &r_mat, RngStream &rng,
                                               double tol_rel_gap = 1e-6,
                                               int max_sweeps = 50000) {
    const Eigen::Index n = r_mat.rows();
    if (n < 1 || r_mat.cols() != n)
        throw std::invalid_argument("solve_unit_diag_sdp: R must be square and nonempty");

    // Work on the Hermitian part; R from a quadratic form already is.
    const Eigen::MatrixXcd h = 0.5 * (r_mat + r_mat.adjoint());

    int rank = static_cast<int>(std::ceil(std::sqrt(2.0 * static_cast<double>(n)))) + 1;
    rank = std::min<int>(rank, static_cast<int>(n));

    Eigen::MatrixXcd y(n, rank);
    auto fill_random = [&](Eigen::Index col_begin, double scale) {
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index c = col_begin; c < y.cols(); ++c) {
                const cplx g = rng.gaussian(1.0);
                y(i, c) = scale * Eigen::dcomplex(g.real(), g.imag());
            }
    };
    auto normalize_rows = [&]() {
        for (Eigen::Index i = 0; i < n; ++i) {
            const double nrm = y.row(i).norm();
            if (nrm > 0.0)
                y.row(i) /= nrm;
            else
                y(i, 0) = Eigen::dcomplex(1.0, 0.0);
        }
    };
    fill_random(0, 1.0);
    normalize_rows();

    Eigen::MatrixXcd s = h * y; // running gradient, s.row(i) = sum_j H_ij y_j

    auto objective = [&]() { return ((y.adjoint() * s).trace()).real(); };

    int sweeps = 0;
    double last_gap = std::numeric_limits<double>::infinity();
    int next_check = 20;
    double prev_obj = objective();

    UnitDiagSdpSolution sol;
    while (sweeps < max_sweeps) {
        // One cyclic sweep of row updates.
        for (Eigen::Index i = 0; i < n; ++i) {
            Eigen::RowVectorXcd g = s.row(i) - h(i, i) * y.row(i);
            const double gn = g.norm();
            if (gn <= 0.0)
                continue;
            Eigen::RowVectorXcd delta = g / gn - y.row(i);
            if (delta.squaredNorm() == 0.0)
                continue;
            s.noalias() += h.col(i) * delta;
            y.row(i) += delta;
        }
        ++sweeps;

        const double obj = objective();
        const bool stalled = std::abs(obj - prev_obj) <= 1e-13 * std::max(1.0, std::abs(obj));
        prev_obj = obj;

        if (stalled || sweeps >= next_check) {
            next_check = sweeps + 20;
            // Dual certificate: w_i = Re((H Y Y^H)_ii) = Re(s_i . conj(y_i)).
            Eigen::VectorXd w(n);
            for (Eigen::Index i = 0; i < n; ++i)
                w(i) = (s.row(i).cwiseProduct(y.row(i).conjugate())).sum().real();
            Eigen::MatrixXcd cert = -h;
            cert.diagonal() += w.cast<Eigen::dcomplex>();
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(cert, Eigen::EigenvaluesOnly);
            const double lambda_min = eig.eigenvalues().minCoeff();
            const double primal = w.sum();
            const double gap = static_cast<double>(n) * std::max(0.0, -lambda_min);
            const double rel_gap = gap / std::max(1.0, std::abs(primal));
            last_gap = rel_gap;
            if (rel_gap <= tol_rel_gap) {
                sol.factor = y;
                sol.primal = primal;
                sol.dual = primal + gap;
                sol.rel_gap = rel_gap;
                sol.sweeps = sweeps;
                return sol;
            }
            if (stalled) {
                if (rank < static_cast<int>(n)) {
                    // Escalate the factor rank and keep ascending.
                    const int new_rank = std::min<int>(rank * 2, static_cast<int>(n));
                    Eigen::MatrixXcd grown(n, new_rank);
                    grown.leftCols(rank) = y;
                    y = grown;
                    fill_random(rank, 1e-2);
                    rank = new_rank;
                    normalize_rows();
                    s = h * y;
                    prev_obj = objective();
                } else {
                    // Full rank and stalled: nudge off a possible saddle.
                    Eigen::MatrixXcd bump(n, rank);
                    for (Eigen::Index i = 0; i < n; ++i)
                        for (Eigen::Index c = 0; c < rank; ++c) {
                            const cplx g = rng.gaussian(1.0);
                            bump(i, c) = 1e-4 * Eigen::dcomplex(g.real(), g.imag());
                        }
                    y += bump;
                    normalize_rows();
                    s = h * y;
                    prev_obj = objective();
                }
            }
        }
    }
    throw SdpSolverError(sweeps, last_gap);
}

} // namespace simkit

#endif // SIMKIT_SDP_HPP
