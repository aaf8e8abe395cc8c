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

#ifndef SIMKIT_EXPERIMENTS_HPP
#define SIMKIT_EXPERIMENTS_HPP

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "simkit/config.hpp"
#include "simkit/csv.hpp"
#include "simkit/estimation.hpp"
#include "simkit/reflection.hpp"
#include "simkit/results.hpp"

namespace simkit {

/// Run body(0..count-1) across hardware threads. Outputs must be written to
/// per-index slots so that results do not depend on scheduling.
template <typename Body> inline void parallel_for(std::size_t count, Body &&body) {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0)
        hw = 1;
    const std::size_t workers = std::min<std::size_t>(hw, count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto run = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count)
                return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error)
                    error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t t = 0; t < workers; ++t)
        pool.emplace_back(run);
    for (auto &t : pool)
        t.join();
    if (error)
        std::rethrow_exception(error);
}

namespace stats {

/// Neumaier-compensated sum; the result is independent of thread scheduling
/// because callers reduce per-index slots in index order.
inline double compensated_sum(const std::vector<double> &v) {
    double sum = 0.0, comp = 0.0;
    for (double x : v) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    return sum + comp;
}

struct MeanStderr {
    double mean = 0.0;
    double se = 0.0;
};

inline MeanStderr mean_stderr(const std::vector<double> &v) {
    MeanStderr out;
    const std::size_t n = v.size();
    if (n == 0)
        return out;
    out.mean = compensated_sum(v) / static_cast<double>(n);
    if (n < 2)
        return out;
    std::vector<double> sq(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double d = v[i] - out.mean;
        sq[i] = d * d;
    }
    const double var = compensated_sum(sq) / static_cast<double>(n - 1);
    out.se = std::sqrt(var / static_cast<double>(n));
    return out;
}

/// Standard error of mean(a) - mean(b) over paired samples.
inline MeanStderr paired_diff(const std::vector<double> &a, const std::vector<double> &b) {
    std::vector<double> d(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        d[i] = a[i] - b[i];
    return mean_stderr(d);
}

} // namespace stats

inline std::vector<double> default_power_sweep() {
    std::vector<double> out;
    for (double p = -10.0; p <= 30.0 + 1e-9; p += 5.0)
        out.push_back(p);
    return out;
}

inline std::vector<double> default_distance_sweep() {
    std::vector<double> out;
    for (double d = 10.0; d <= 50.0 + 1e-9; d += 5.0)
        out.push_back(d);
    return out;
}

/// Tiling-compatible subset of {1, 2, 4, 6, 9, 12, 16, 24, 36} for the layout.
inline std::vector<int> default_grouping_sweep(const IrsLayout &layout) {
    const int candidates[] = {1, 2, 4, 6, 9, 12, 16, 24, 36};
    std::vector<int> out;
    for (int m : candidates) {
        try {
            (void)IrsLayout::with_groups(layout.rows, layout.cols, m);
            out.push_back(m);
        } catch (const std::invalid_argument &) {
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Channel estimation MSE versus transmit power
// ---------------------------------------------------------------------------

/// MSE experiment: empirical and predicted normalized estimation MSE for the
/// schemes {orthogonal pattern with 8 and 16 pilot tones, ON/OFF with 8},
/// swept over transmit power. MSE values are normalized by the Monte Carlo
/// mean per-sub-carrier power of [d G] and reported in dB.
inline ExperimentResult run_mse_vs_power(const SystemConfig &cfg,
                                         const std::vector<double> &powers_dbm) {
    validate_config(cfg);
    struct SchemeDef {
        const char *name;
        PatternKind kind;
        int np;
    };
    const SchemeDef defs[] = {{"dft-np8", PatternKind::dft, 8},
                              {"dft-np16", PatternKind::dft, 16},
                              {"onoff-np8", PatternKind::onoff, 8}};
    for (const auto &def : defs) {
        if (cfg.n % def.np != 0)
            throw ConfigError("n", "n: MSE experiment pilot counts (8, 16) must divide n");
        if (def.np < cfg.l)
            throw ConfigError("l", "l: MSE experiment needs np >= l for 8 pilot tones");
    }

    const ReflectionPattern pat_dft = dft_pattern(cfg.m);
    const ReflectionPattern pat_onoff = onoff_pattern(cfg.m);
    const FadingProfile prof = cfg.profile();
    const double sigma2 = cfg.noise_watts();
    const std::size_t reals = static_cast<std::size_t>(cfg.realizations);

    struct SchemeCtx {
        const SchemeDef *def;
        const ReflectionPattern *pattern;
        PilotGrid grid;
        cvec pilots;
        std::vector<double> samples;
    };
    std::vector<SchemeCtx> schemes;
    for (const auto &def : defs) {
        SchemeCtx ctx;
        ctx.def = &def;
        ctx.pattern = def.kind == PatternKind::dft ? &pat_dft : &pat_onoff;
        ctx.grid = make_pilot_grid(cfg.n, def.np);
        ctx.pilots = zadoff_chu(static_cast<std::size_t>(def.np), 1);
        ctx.samples.resize(reals);
        schemes.push_back(std::move(ctx));
    }

    ExperimentResult out;
    out.experiment = "mse";
    double normalizer = 0.0;

    std::vector<double> norm_samples(reals);
    for (double p_dbm : powers_dbm) {
        const double pt_w = dbm_to_watts(p_dbm);
        const double power_per_tone = pt_w / static_cast<double>(cfg.n);

        parallel_for(reals, [&](std::size_t r) {
            RngStream rng(cfg.seed, r);
            const ChannelRealization real =
                realize_channel(prof, cfg.layout, cfg.geometry, cfg.n, rng);
            norm_samples[r] =
                (norm2(real.direct_cfr) + norm2(real.cascaded_cfr)) / static_cast<double>(cfg.n);
            for (auto &ctx : schemes) {
                const ChannelEstimate est =
                    estimate_from_pilots(real, *ctx.pattern, ctx.grid, ctx.pilots,
                                         power_per_tone, sigma2, cfg.l, rng);
                ctx.samples[r] = empirical_mse(est, real.direct_cfr, real.cascaded_cfr, cfg.n);
            }
        });

        const double norm_mean =
            stats::compensated_sum(norm_samples) / static_cast<double>(reals);
        normalizer = norm_mean;

        for (auto &ctx : schemes) {
            const auto ms = stats::mean_stderr(ctx.samples);
            ResultRow row;
            row.experiment = out.experiment;
            row.sweep_name = "pt_dbm";
            row.sweep_value = p_dbm;
            row.scheme = ctx.def->name;
            row.metric = "mse_db";
            row.value = 10.0 * std::log10(ms.mean / norm_mean);
            row.stderr_value = ms.mean > 0.0 ? 10.0 / std::log(10.0) * ms.se / ms.mean : 0.0;
            row.realizations = cfg.realizations;
            row.seed = cfg.seed;
            out.rows.push_back(row);
        }
        for (auto &ctx : schemes) {
            const double eps =
                theoretical_mse(*ctx.pattern, sigma2, cfg.n, ctx.def->np, pt_w, cfg.l);
            ResultRow row;
            row.experiment = out.experiment;
            row.sweep_name = "pt_dbm";
            row.sweep_value = p_dbm;
            row.scheme = std::string(ctx.def->name) + "-theory";
            row.metric = "mse_db";
            row.value = 10.0 * std::log10(eps / norm_mean);
            row.stderr_value = 0.0;
            row.realizations = cfg.realizations;
            row.seed = cfg.seed;
            out.rows.push_back(row);
        }
    }

    out.metadata.emplace_back("experiment", "mse");
    out.metadata.emplace_back("seed", std::to_string(cfg.seed));
    out.metadata.emplace_back("realizations", std::to_string(cfg.realizations));
    out.metadata.emplace_back("normalization",
                              "MSE divided by the Monte Carlo mean per-sub-carrier power of the "
                              "stacked direct and cascaded responses");
    out.metadata.emplace_back("normalizer", format_g9(normalizer));
    return out;
}

// ---------------------------------------------------------------------------
// Achievable rate experiments
// ---------------------------------------------------------------------------

inline const std::vector<std::string> &rate_scheme_names() {
    static const std::vector<std::string> names = {"proposed-scm", "proposed-sdr", "onoff-sdr",
                                                   "perfect-sdr", "no-irs"};
    return names;
}

/// Per-realization rate samples of every scheme at one sweep point.
/// `rate` and `bound` are evaluated on the true channels with the optimized
/// phases; `rate_est` is the rate the optimizer predicts from its own channel
/// knowledge (identical to `rate` for the perfect-CSI and no-IRS schemes).
struct RatePointSamples {
    std::vector<std::string> schemes;
    std::vector<std::vector<double>> rate;
    std::vector<std::vector<double>> bound;
    std::vector<std::vector<double>> rate_est;
};

inline RatePointSamples rate_point_samples(const SystemConfig &cfg, double horizontal_m) {
    validate_config(cfg);
    SystemConfig local = cfg;
    local.geometry.user_horizontal = horizontal_m;

    const FadingProfile prof = local.profile();
    const PilotGrid grid = make_pilot_grid(local.n, local.np);
    const cvec pilots = zadoff_chu(static_cast<std::size_t>(local.np), 1);
    const ReflectionPattern pat_dft = dft_pattern(local.m);
    const ReflectionPattern pat_onoff = onoff_pattern(local.m);
    const double pt_w = local.pt_watts();
    const double sigma2 = local.noise_watts();
    const double gamma = local.gamma_linear();
    const double power_per_tone = pt_w / static_cast<double>(local.n);
    const std::size_t reals = static_cast<std::size_t>(local.realizations);

    RatePointSamples samples;
    samples.schemes = rate_scheme_names();
    const std::size_t n_schemes = samples.schemes.size();
    samples.rate.assign(n_schemes, std::vector<double>(reals));
    samples.bound.assign(n_schemes, std::vector<double>(reals));
    samples.rate_est.assign(n_schemes, std::vector<double>(reals));

    parallel_for(reals, [&](std::size_t r) {
        RngStream rng(local.seed, r);
        const ChannelRealization real =
            realize_channel(prof, local.layout, local.geometry, local.n, rng);

        const ChannelEstimate est_dft = estimate_from_pilots(
            real, pat_dft, grid, pilots, power_per_tone, sigma2, local.l, rng);
        const ChannelEstimate est_onoff = estimate_from_pilots(
            real, pat_onoff, grid, pilots, power_per_tone, sigma2, local.l, rng);

        const PhaseVector phi_scm = scm_optimize(est_dft.d_cir_hat, est_dft.g_cir_hat);
        const PhaseVector phi_sdr =
            sdr_optimize(est_dft.d_hat, est_dft.g_hat, local.sdr_randomizations, rng);
        const PhaseVector phi_onoff =
            sdr_optimize(est_onoff.d_hat, est_onoff.g_hat, local.sdr_randomizations, rng);
        const PhaseVector phi_perfect = sdr_optimize(real.direct_cfr, real.cascaded_cfr,
                                                     local.sdr_randomizations, rng);

        auto record = [&](std::size_t s, const PhaseVector &phi, const ChannelEstimate *est) {
            const std::vector<double> w_true =
                channel_gain(phi, real.direct_cfr, real.cascaded_cfr);
            samples.rate[s][r] =
                achievable_rate(w_true, pt_w, sigma2, gamma, local.n, local.lcp);
            samples.bound[s][r] =
                rate_upper_bound(w_true, pt_w, sigma2, gamma, local.n, local.lcp);
            if (est) {
                const std::vector<double> w_est = channel_gain(phi, est->d_hat, est->g_hat);
                samples.rate_est[s][r] =
                    achievable_rate(w_est, pt_w, sigma2, gamma, local.n, local.lcp);
            } else {
                samples.rate_est[s][r] = samples.rate[s][r];
            }
        };

        record(0, phi_scm, &est_dft);
        record(1, phi_sdr, &est_dft);
        record(2, phi_onoff, &est_onoff);
        record(3, phi_perfect, nullptr);

        // Direct link only; reflection coefficients play no role.
        std::vector<double> w_direct(static_cast<std::size_t>(local.n));
        for (std::size_t t = 0; t < w_direct.size(); ++t)
            w_direct[t] = std::norm(real.direct_cfr[t]);
        samples.rate[4][r] = achievable_rate(w_direct, pt_w, sigma2, gamma, local.n, local.lcp);
        samples.bound[4][r] = rate_upper_bound(w_direct, pt_w, sigma2, gamma, local.n, local.lcp);
        samples.rate_est[4][r] = samples.rate[4][r];
    });

    return samples;
}

/// Achievable rate versus user-AP horizontal distance.
inline ExperimentResult run_rate_vs_distance(const SystemConfig &cfg,
                                             const std::vector<double> &horizontals_m) {
    validate_config(cfg);
    ExperimentResult out;
    out.experiment = "rate-distance";

    for (double h : horizontals_m) {
        const RatePointSamples samples = rate_point_samples(cfg, h);
        for (std::size_t s = 0; s < samples.schemes.size(); ++s) {
            auto push = [&](const char *metric, const std::vector<double> &v) {
                const auto ms = stats::mean_stderr(v);
                ResultRow row;
                row.experiment = out.experiment;
                row.sweep_name = "horizontal_m";
                row.sweep_value = h;
                row.scheme = samples.schemes[s];
                row.metric = metric;
                row.value = ms.mean;
                row.stderr_value = ms.se;
                row.realizations = cfg.realizations;
                row.seed = cfg.seed;
                out.rows.push_back(row);
            };
            push("rate", samples.rate[s]);
            push("bound", samples.bound[s]);
            push("rate_est", samples.rate_est[s]);
        }
    }

    out.metadata.emplace_back("experiment", "rate-distance");
    out.metadata.emplace_back("seed", std::to_string(cfg.seed));
    out.metadata.emplace_back("realizations", std::to_string(cfg.realizations));
    out.metadata.emplace_back("np", std::to_string(cfg.np));
    out.metadata.emplace_back("m", std::to_string(cfg.m));
    return out;
}

/// Pilot-overhead discount factor of the frame for a given number of groups.
inline double overhead_factor(OverheadModel model, int frame_symbols, int m, int np, int n) {
    const double t = static_cast<double>(frame_symbols);
    if (model == OverheadModel::resource_element)
        return 1.0 - static_cast<double>(m + 1) * static_cast<double>(np) /
                         (t * static_cast<double>(n));
    return (t - static_cast<double>(m + 1)) / t;
}

/// Achievable rate versus grouping ratio rho = M/K, with the first sub-frame
/// pilot overhead discounted from the rate. The overhead model is
/// symbol-level by default; `both` adds resource-element-level rows under the
/// metric `effective_rate_re`.
inline ExperimentResult run_rate_vs_grouping(const SystemConfig &cfg,
                                             const std::vector<int> &m_values) {
    validate_config(cfg);
    const int k = cfg.layout.num_elements();
    ExperimentResult out;
    out.experiment = "rate-grouping";

    for (int m : m_values) {
        SystemConfig cfg_m = cfg;
        cfg_m.m = m;
        try {
            cfg_m.layout = IrsLayout::with_groups(cfg.layout.rows, cfg.layout.cols, m);
        } catch (const std::invalid_argument &e) {
            throw ConfigError("m", std::string("m: ") + e.what());
        }
        if (cfg.frame_symbols <= m + 1)
            throw ConfigError("frame_symbols",
                              "frame_symbols: grouping sweep point m=" + std::to_string(m) +
                                  " needs more than m+1 = " + std::to_string(m + 1) +
                                  " frame symbols for any payload");
        validate_config(cfg_m);

        const double rho = static_cast<double>(m) / static_cast<double>(k);
        const double f_sym = overhead_factor(OverheadModel::symbol, cfg.frame_symbols, m,
                                             cfg.np, cfg.n);
        const double f_re = overhead_factor(OverheadModel::resource_element, cfg.frame_symbols,
                                            m, cfg.np, cfg.n);
        const double f_main =
            cfg.overhead_model == OverheadModel::resource_element ? f_re : f_sym;

        const RatePointSamples samples =
            rate_point_samples(cfg_m, cfg.geometry.user_horizontal);
        for (std::size_t s = 0; s < samples.schemes.size(); ++s) {
            auto push = [&](const char *metric, double value, double se) {
                ResultRow row;
                row.experiment = out.experiment;
                row.sweep_name = "rho";
                row.sweep_value = rho;
                row.scheme = samples.schemes[s];
                row.metric = metric;
                row.value = value;
                row.stderr_value = se;
                row.realizations = cfg.realizations;
                row.seed = cfg.seed;
                out.rows.push_back(row);
            };
            const auto rate = stats::mean_stderr(samples.rate[s]);
            const auto bound = stats::mean_stderr(samples.bound[s]);
            const auto rate_est = stats::mean_stderr(samples.rate_est[s]);
            push("rate", rate.mean, rate.se);
            push("bound", bound.mean, bound.se);
            push("rate_est", rate_est.mean, rate_est.se);
            push("effective_rate", rate.mean * f_main, rate.se * f_main);
            if (cfg.overhead_model == OverheadModel::both)
                push("effective_rate_re", rate.mean * f_re, rate.se * f_re);
        }
    }

    out.metadata.emplace_back("experiment", "rate-grouping");
    out.metadata.emplace_back("seed", std::to_string(cfg.seed));
    out.metadata.emplace_back("realizations", std::to_string(cfg.realizations));
    out.metadata.emplace_back("horizontal_m", format_g9(cfg.geometry.user_horizontal));
    out.metadata.emplace_back("overhead_model", overhead_model_name(cfg.overhead_model));
    return out;
}

} // namespace simkit

#endif // SIMKIT_EXPERIMENTS_HPP
