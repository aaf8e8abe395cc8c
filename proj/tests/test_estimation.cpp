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

#include <Eigen/Dense>
#include <catch2/catch_amalgamated.hpp>

#include "simkit/estimation.hpp"

using namespace simkit;

namespace {

// Independent trace((theta^H theta)^{-1}) through Eigen's inverse.
double trace_oracle(const cmat &theta) {
    Eigen::MatrixXcd t(theta.rows(), theta.cols());
    for (std::size_t i = 0; i < theta.rows(); ++i)
        for (std::size_t j = 0; j < theta.cols(); ++j)
            t(i, j) = theta(i, j);
    return (t.adjoint() * t).inverse().trace().real();
}

// Random L-tap truth with unit-scale taps.
struct Truth {
    cvec d_cfr;
    cmat g_cfr;
    cvec d_cir;
    cmat g_cir;
};

Truth random_truth(int n, int m, int taps, RngStream &rng) {
    Truth t;
    t.d_cir = gaussian_complex(taps, 1.0, rng);
    t.g_cir = cmat(m, taps);
    for (int g = 0; g < m; ++g)
        t.g_cir.set_row(g, gaussian_complex(taps, 1.0, rng));
    t.d_cfr = cir_to_cfr(t.d_cir, n);
    t.g_cfr = cmat(n, m);
    for (int g = 0; g < m; ++g)
        t.g_cfr.set_col(g, cir_to_cfr(t.g_cir.row(g), n));
    return t;
}

ChannelRealization realization_from_truth(const Truth &t) {
    ChannelRealization real;
    real.direct_cir = t.d_cir;
    real.group_cirs = t.g_cir;
    real.element_cirs = t.g_cir; // 1x1 tiles stand-in; unused by the pilot path
    real.direct_cfr = t.d_cfr;
    real.cascaded_cfr = t.g_cfr;
    return real;
}

} // namespace

TEST_CASE("pilot grid indices") {
    const PilotGrid g = make_pilot_grid(64, 8);
    REQUIRE(g.spacing() == 8);
    REQUIRE(g.indices() == std::vector<int>{0, 8, 16, 24, 32, 40, 48, 56});

    const PilotGrid full = make_pilot_grid(16, 16);
    REQUIRE(full.spacing() == 1);
    REQUIRE(full.indices().size() == 16);

    const PilotGrid g16 = make_pilot_grid(64, 16);
    REQUIRE(g16.spacing() == 4);
    REQUIRE(g16.indices().size() == 16);

    REQUIRE_THROWS_AS(make_pilot_grid(64, 12), std::invalid_argument);
    REQUIRE_THROWS_AS(make_pilot_grid(64, 0), std::invalid_argument);
}

TEST_CASE("dft pattern at m=1 is the 2-point DFT matrix") {
    const ReflectionPattern p = dft_pattern(1);
    REQUIRE(std::abs(p.theta(0, 0) - cplx(1.0, 0.0)) < 1e-14);
    REQUIRE(std::abs(p.theta(0, 1) - cplx(1.0, 0.0)) < 1e-14);
    REQUIRE(std::abs(p.theta(1, 0) - cplx(1.0, 0.0)) < 1e-14);
    REQUIRE(std::abs(p.theta(1, 1) - cplx(-1.0, 0.0)) < 1e-14);
}

TEST_CASE("dft pattern rows, columns, and orthogonality") {
    for (int m : {1, 3, 12}) {
        const ReflectionPattern p = dft_pattern(m);
        const std::size_t dim = static_cast<std::size_t>(m) + 1;
        for (std::size_t j = 0; j < dim; ++j) {
            REQUIRE(std::abs(p.theta(0, j) - cplx(1.0, 0.0)) < 1e-14);
            REQUIRE(std::abs(p.theta(j, 0) - cplx(1.0, 0.0)) < 1e-14);
        }
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j)
                REQUIRE(std::abs(std::abs(p.theta(i, j)) - 1.0) < 1e-14);

        // ||theta^H theta - (M+1) I||_F
        double frob = 0.0;
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j) {
                cplx acc(0.0, 0.0);
                for (std::size_t k = 0; k < dim; ++k)
                    acc += std::conj(p.theta(k, i)) * p.theta(k, j);
                if (i == j)
                    acc -= cplx(static_cast<double>(dim), 0.0);
                frob += std::norm(acc);
            }
        REQUIRE(std::sqrt(frob) < 1e-10);
    }
}

TEST_CASE("onoff pattern columns") {
    const ReflectionPattern p = onoff_pattern(2);
    const cmat &t = p.theta;
    REQUIRE(t.col(0) == cvec{cplx(1, 0), cplx(0, 0), cplx(0, 0)});
    REQUIRE(t.col(1) == cvec{cplx(1, 0), cplx(1, 0), cplx(0, 0)});
    REQUIRE(t.col(2) == cvec{cplx(1, 0), cplx(0, 0), cplx(1, 0)});
}

TEST_CASE("onoff pattern inverse trace equals 2M+1") {
    for (int m : {1, 2, 5, 12}) {
        const ReflectionPattern p = onoff_pattern(m);
        REQUIRE(trace_oracle(p.theta) == Catch::Approx(2.0 * m + 1.0).epsilon(1e-10));
    }
    REQUIRE(trace_oracle(onoff_pattern(12).theta) == Catch::Approx(25.0).epsilon(1e-10));
}

TEST_CASE("pattern optimality: dft beats onoff for every M") {
    for (int m = 1; m <= 20; ++m) {
        REQUIRE(trace_oracle(dft_pattern(m).theta) == Catch::Approx(1.0).epsilon(1e-9));
        REQUIRE(trace_oracle(onoff_pattern(m).theta) > 1.0);
    }
}

TEST_CASE("custom patterns are checked for conditioning and the leading-one row") {
    cmat ok(3, 3);
    for (std::size_t j = 0; j < 3; ++j)
        ok(0, j) = cplx(1.0, 0.0);
    ok(1, 0) = cplx(0.3, 0.4);
    ok(1, 1) = cplx(-1.0, 0.1);
    ok(1, 2) = cplx(0.2, -0.9);
    ok(2, 0) = cplx(-0.6, 0.2);
    ok(2, 1) = cplx(0.5, 0.5);
    ok(2, 2) = cplx(1.0, -0.3);
    const ReflectionPattern p = custom_pattern(ok);
    REQUIRE(p.condition_number >= 1.0);
    REQUIRE(p.singular_values.size() == 3);

    cmat bad_row = ok;
    bad_row(0, 1) = cplx(0.5, 0.0);
    REQUIRE_THROWS_AS(custom_pattern(bad_row), std::invalid_argument);

    cmat singular(2, 2);
    singular(0, 0) = singular(0, 1) = cplx(1.0, 0.0);
    singular(1, 0) = singular(1, 1) = cplx(0.7, 0.1);
    REQUIRE_THROWS_AS(custom_pattern(singular), std::runtime_error);
}

TEST_CASE("noiseless pilot symbol divides back to the exact superimposed CFR") {
    RngStream rng(21, 0);
    const int n = 16, m = 3, taps = 4;
    const Truth t = random_truth(n, m, taps, rng);
    const ChannelRealization real = realization_from_truth(t);
    const PilotGrid grid = make_pilot_grid(n, 8);
    const cvec pilots = zadoff_chu(8, 1);
    const ReflectionPattern pat = dft_pattern(m);
    const double ppt = 0.5;

    const auto obs = simulate_pilot_symbol(real, pat, 0, pilots, grid, ppt, 0.0, rng);
    const cvec r = ls_estimate(obs, pilots, ppt);
    for (int k = 0; k < grid.np; ++k) {
        cplx h = t.d_cfr[grid.index(k)];
        for (int g = 0; g < m; ++g)
            h += pat.theta(g + 1, 0) * t.g_cfr(grid.index(k), g);
        REQUIRE(std::abs(r[k] - h) < 1e-12 * std::abs(h) + 1e-14);
    }
}

TEST_CASE("pilot observation of a zero channel is pure noise at the set variance") {
    ChannelRealization real;
    const int n = 16, np = 8;
    real.direct_cfr = cvec(n, cplx(0.0, 0.0));
    real.cascaded_cfr = cmat(n, 1);
    real.direct_cir = cvec(2, cplx(0.0, 0.0));
    real.group_cirs = cmat(1, 2);
    const PilotGrid grid = make_pilot_grid(n, np);
    const cvec pilots = zadoff_chu(np, 1);
    const ReflectionPattern pat = dft_pattern(1);
    const double sigma2 = 0.35;

    double acc = 0.0;
    const int reps = 10000;
    for (int i = 0; i < reps; ++i) {
        RngStream rng(77, static_cast<std::uint64_t>(i));
        const auto obs = simulate_pilot_symbol(real, pat, 1, pilots, grid, 1.0, sigma2, rng);
        acc += norm2(obs.y_pilot) / np;
    }
    acc /= reps;
    REQUIRE(acc == Catch::Approx(sigma2).margin(0.02 * sigma2));
}

TEST_CASE("hand-computed single-tap pilot symbol") {
    // One group, flat channels d=0.5+0.25j, g=-0.2+0.1j, N=4, Np=4, second
    // pattern symbol of the 2-point DFT pattern (phi = -1), no noise.
    const cplx d(0.5, 0.25), g(-0.2, 0.1);
    ChannelRealization real;
    real.direct_cir = cvec{d};
    real.group_cirs = cmat(1, 1);
    real.group_cirs(0, 0) = g;
    real.direct_cfr = cvec(4, d);
    real.cascaded_cfr = cmat(4, 1);
    for (int t = 0; t < 4; ++t)
        real.cascaded_cfr(t, 0) = g;

    const PilotGrid grid = make_pilot_grid(4, 4);
    const cvec pilots = zadoff_chu(4, 1);
    const ReflectionPattern pat = dft_pattern(1);
    RngStream rng(0, 0);
    const double ppt = 2.25;

    const auto obs = simulate_pilot_symbol(real, pat, 1, pilots, grid, ppt, 0.0, rng);
    for (int k = 0; k < 4; ++k) {
        const cplx want = 1.5 * pilots[k] * (d - g);
        REQUIRE(std::abs(obs.y_pilot[k] - want) < 1e-14);
    }
}

TEST_CASE("ls noise variance is sigma^2 N / Pt per tone") {
    ChannelRealization real;
    const int n = 64, np = 8;
    real.direct_cfr = cvec(n, cplx(0.0, 0.0));
    real.cascaded_cfr = cmat(n, 1);
    const PilotGrid grid = make_pilot_grid(n, np);
    const cvec pilots = zadoff_chu(np, 1);
    const ReflectionPattern pat = dft_pattern(1);
    const double sigma2 = 0.04;
    const double pt = 0.5;
    const double ppt = pt / n;

    double acc = 0.0;
    const int reps = 10000;
    for (int i = 0; i < reps; ++i) {
        RngStream rng(101, static_cast<std::uint64_t>(i));
        const auto obs = simulate_pilot_symbol(real, pat, 0, pilots, grid, ppt, sigma2, rng);
        acc += norm2(ls_estimate(obs, pilots, ppt)) / np;
    }
    acc /= reps;
    REQUIRE(acc == Catch::Approx(sigma2 * n / pt).epsilon(0.02));
}

TEST_CASE("ls with unit pilots and unit tone power is the identity") {
    PilotSymbolObservation obs;
    obs.y_pilot = cvec{cplx(0.1, 0.2), cplx(-0.3, 0.4)};
    const cvec r = ls_estimate(obs, cvec(2, cplx(1.0, 0.0)), 1.0);
    REQUIRE(r == obs.y_pilot);

    REQUIRE_THROWS_AS(ls_estimate(obs, cvec{cplx(1.0, 0.0), cplx(0.0, 0.0)}, 1.0),
                      std::runtime_error);
}

TEST_CASE("interpolation is exact for short channels sampled on the comb") {
    RngStream rng(31, 0);
    const int n = 64, np = 8, taps = 6;
    const Truth t = random_truth(n, 1, taps, rng);
    const PilotGrid grid = make_pilot_grid(n, np);
    cvec r(np);
    for (int k = 0; k < np; ++k)
        r[k] = t.d_cfr[grid.index(k)];
    const cvec full = interpolate_cfr(r, grid, taps);
    for (int tone = 0; tone < n; ++tone)
        REQUIRE(std::abs(full[tone] - t.d_cfr[tone]) < 1e-10);

    // All-tone grid is exact for any tap count up to n.
    const PilotGrid dense = make_pilot_grid(n, n);
    const Truth t2 = random_truth(n, 1, 20, rng);
    const cvec full2 = interpolate_cfr(t2.d_cfr, dense, 20);
    for (int tone = 0; tone < n; ++tone)
        REQUIRE(std::abs(full2[tone] - t2.d_cfr[tone]) < 1e-10);

    REQUIRE_THROWS_AS(interpolate_cfr(cvec(4), make_pilot_grid(16, 4), 6),
                      std::invalid_argument);
}

TEST_CASE("interpolated noise has per-tone variance sigma^2 N L/(Np Pt)") {
    const int n = 64, np = 8, taps = 6;
    const double sigma2 = 0.1, pt = 2.0;
    const PilotGrid grid = make_pilot_grid(n, np);
    const double per_tone_in = sigma2 * n / pt; // LS output noise power
    double acc = 0.0;
    const int reps = 10000;
    for (int i = 0; i < reps; ++i) {
        RngStream rng(303, static_cast<std::uint64_t>(i));
        const cvec noise = gaussian_complex(np, per_tone_in, rng);
        acc += norm2(interpolate_cfr(noise, grid, taps)) / n;
    }
    acc /= reps;
    REQUIRE(acc == Catch::Approx(sigma2 * n * taps / (np * pt)).epsilon(0.03));
}

TEST_CASE("noiseless decoupling recovers the truth for every pattern kind") {
    RngStream rng(41, 0);
    const int n = 32, m = 3, taps = 4;
    const Truth t = random_truth(n, m, taps, rng);

    cmat theta_custom(m + 1, m + 1);
    for (int j = 0; j <= m; ++j)
        theta_custom(0, j) = cplx(1.0, 0.0);
    for (int i = 1; i <= m; ++i)
        for (int j = 0; j <= m; ++j)
            theta_custom(i, j) = std::polar(1.0, rng.uniform(0.0, 2.0 * std::numbers::pi));

    for (const ReflectionPattern &pat :
         {dft_pattern(m), onoff_pattern(m), custom_pattern(theta_custom)}) {
        cmat stack(n, m + 1);
        for (int i = 0; i <= m; ++i) {
            cvec h(n);
            for (int tone = 0; tone < n; ++tone) {
                cplx acc = pat.theta(0, i) * t.d_cfr[tone];
                for (int g = 0; g < m; ++g)
                    acc += pat.theta(g + 1, i) * t.g_cfr(tone, g);
                h[tone] = acc;
            }
            stack.set_col(i, h);
        }
        const ChannelEstimate est = estimate_channels(stack, pat, taps);
        for (int tone = 0; tone < n; ++tone) {
            REQUIRE(std::abs(est.d_hat[tone] - t.d_cfr[tone]) < 1e-10);
            for (int g = 0; g < m; ++g)
                REQUIRE(std::abs(est.g_hat(tone, g) - t.g_cfr(tone, g)) < 1e-10);
        }
        // CIR views match the truncated inverse transforms.
        for (int l = 0; l < taps; ++l) {
            REQUIRE(std::abs(est.d_cir_hat[l] - t.d_cir[l]) < 1e-10);
            for (int g = 0; g < m; ++g)
                REQUIRE(std::abs(est.g_cir_hat(g, l) - t.g_cir(g, l)) < 1e-10);
        }
    }
}

TEST_CASE("onoff decoupling is the closed-form difference") {
    RngStream rng(43, 0);
    const int n = 8, m = 2;
    cmat stack(n, m + 1);
    for (int i = 0; i <= m; ++i)
        stack.set_col(i, gaussian_complex(n, 1.0, rng));
    const ChannelEstimate est = estimate_channels(stack, onoff_pattern(m), 2);
    for (int tone = 0; tone < n; ++tone) {
        REQUIRE(est.d_hat[tone] == stack(tone, 0));
        for (int g = 0; g < m; ++g)
            REQUIRE(est.g_hat(tone, g) == stack(tone, g + 1) - stack(tone, 0));
    }
}

TEST_CASE("estimate_channels is linear in the stacked estimates") {
    RngStream rng(47, 0);
    const int n = 16, m = 3;
    const ReflectionPattern pat = dft_pattern(m);
    cmat a(n, m + 1), b(n, m + 1), sum(n, m + 1);
    for (int i = 0; i <= m; ++i) {
        const cvec ca = gaussian_complex(n, 1.0, rng);
        const cvec cb = gaussian_complex(n, 1.0, rng);
        a.set_col(i, ca);
        b.set_col(i, cb);
        cvec cs(n);
        for (int t = 0; t < n; ++t)
            cs[t] = ca[t] + cb[t];
        sum.set_col(i, cs);
    }
    const ChannelEstimate ea = estimate_channels(a, pat, 2);
    const ChannelEstimate eb = estimate_channels(b, pat, 2);
    const ChannelEstimate es = estimate_channels(sum, pat, 2);
    for (int t = 0; t < n; ++t) {
        REQUIRE(std::abs(es.d_hat[t] - (ea.d_hat[t] + eb.d_hat[t])) < 1e-12);
        for (int g = 0; g < m; ++g)
            REQUIRE(std::abs(es.g_hat(t, g) - (ea.g_hat(t, g) + eb.g_hat(t, g))) < 1e-12);
    }
}

TEST_CASE("theoretical MSE closed forms") {
    const double sigma2 = 1e-11;
    const int n = 64, taps = 6;
    const double pt = 1e-3;
    const double base8 = sigma2 * n * taps / (8.0 * pt);
    REQUIRE(theoretical_mse(dft_pattern(12), sigma2, n, 8, pt, taps) == base8);
    REQUIRE(theoretical_mse(onoff_pattern(12), sigma2, n, 8, pt, taps) == 25.0 * base8);
    // Doubling the pilot count halves the error: exactly 10*log10(2) in dB.
    const double e8 = theoretical_mse(dft_pattern(12), sigma2, n, 8, pt, taps);
    const double e16 = theoretical_mse(dft_pattern(12), sigma2, n, 16, pt, taps);
    REQUIRE(e8 / e16 == Catch::Approx(2.0).epsilon(1e-14));

    // Custom-pattern trace factor against the Eigen inverse oracle.
    RngStream rng(51, 0);
    cmat theta(4, 4);
    for (int j = 0; j < 4; ++j)
        theta(0, j) = cplx(1.0, 0.0);
    for (int i = 1; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            theta(i, j) = std::polar(1.0, rng.uniform(0.0, 2.0 * std::numbers::pi));
    const ReflectionPattern pat = custom_pattern(theta);
    const double base = sigma2 * n * taps / (8.0 * pt);
    REQUIRE(theoretical_mse(pat, sigma2, n, 8, pt, taps) ==
            Catch::Approx(base * trace_oracle(theta)).epsilon(1e-9));
}

TEST_CASE("empirical MSE arithmetic") {
    const int n = 8, m = 2;
    ChannelEstimate est;
    est.d_hat = cvec(n, cplx(1.0, 0.0));
    est.g_hat = cmat(n, m, cplx(0.0, 1.0));
    const cvec d_true(n, cplx(1.0, 0.0));
    cmat g_true(n, m, cplx(0.0, 1.0));
    REQUIRE(empirical_mse(est, d_true, g_true, n) == 0.0);

    // Truth zero, every estimate entry magnitude 1, M+1 columns -> M+1.
    const cvec zero_d(n, cplx(0.0, 0.0));
    const cmat zero_g(n, m);
    REQUIRE(empirical_mse(est, zero_d, zero_g, n) == Catch::Approx(m + 1.0).epsilon(1e-14));

    ChannelEstimate wrong = est;
    wrong.g_hat = cmat(n, m + 1);
    REQUIRE_THROWS_AS(empirical_mse(wrong, d_true, g_true, n), std::invalid_argument);
}

TEST_CASE("Monte Carlo estimation error approaches the predicted MSE") {
    const int n = 64, np = 8, taps = 6, m = 12;
    const double sigma2 = 4e-3, pt = 1.0;
    const PilotGrid grid = make_pilot_grid(n, np);
    const cvec pilots = zadoff_chu(np, 1);
    const int reps = 400;

    for (const ReflectionPattern &pat : {dft_pattern(m), onoff_pattern(m)}) {
        double acc = 0.0;
        for (int i = 0; i < reps; ++i) {
            RngStream rng(1234, static_cast<std::uint64_t>(i));
            const Truth t = random_truth(n, m, taps, rng);
            const ChannelRealization real = realization_from_truth(t);
            const ChannelEstimate est = estimate_from_pilots(real, pat, grid, pilots, pt / n,
                                                             sigma2, taps, rng);
            acc += empirical_mse(est, t.d_cfr, t.g_cfr, n);
        }
        acc /= reps;
        const double want = theoretical_mse(pat, sigma2, n, np, pt, taps);
        REQUIRE(acc == Catch::Approx(want).epsilon(0.15));
    }
}

TEST_CASE("estimation errors are uncorrelated across recovered channels under the dft pattern") {
    const int n = 16, np = 8, taps = 2, m = 3;
    const double sigma2 = 0.25, pt = 1.0;
    const PilotGrid grid = make_pilot_grid(n, np);
    const cvec pilots = zadoff_chu(np, 1);
    const ReflectionPattern pat = dft_pattern(m);

    ChannelRealization zero;
    zero.direct_cfr = cvec(n, cplx(0.0, 0.0));
    zero.cascaded_cfr = cmat(n, m);
    zero.direct_cir = cvec(taps, cplx(0.0, 0.0));
    zero.group_cirs = cmat(m, taps);

    const int reps = 4000;
    cmat cov(m + 1, m + 1);
    for (int i = 0; i < reps; ++i) {
        RngStream rng(555, static_cast<std::uint64_t>(i));
        const ChannelEstimate est =
            estimate_from_pilots(zero, pat, grid, pilots, pt / n, sigma2, taps, rng);
        cmat cols(n, m + 1);
        cols.set_col(0, est.d_hat);
        for (int g = 0; g < m; ++g)
            cols.set_col(g + 1, est.g_hat.col(g));
        for (int a = 0; a <= m; ++a)
            for (int b = 0; b <= m; ++b) {
                cplx acc(0.0, 0.0);
                for (int t = 0; t < n; ++t)
                    acc += cols(t, a) * std::conj(cols(t, b));
                cov(a, b) += acc / static_cast<double>(n);
            }
    }
    double diag_mean = 0.0;
    for (int a = 0; a <= m; ++a)
        diag_mean += cov(a, a).real() / (m + 1);
    for (int a = 0; a <= m; ++a)
        for (int b = 0; b <= m; ++b)
            if (a != b)
                REQUIRE(std::abs(cov(a, b)) < 0.05 * diag_mean);
}
