#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "fcp/frontier.hpp"
#include "fcp/scores.hpp"
#include "fcp/types.hpp"

namespace fcp {

/// One-sided confidence interval [eta_hat - k*, eta_hat] for a change
/// location, from the geometric stochastic-dominance bound on the
/// overshoot of the arg-max estimator.
struct GeometricCI {
    enum class Mode { iid, general };

    int eta_hat = 0;
    double theta_hat = 0.0;
    double level = 0.0;
    int lo = 0;
    int hi = 0;
    Mode mode = Mode::iid;
    std::vector<std::string> flags;
};

struct MuEstimate {
    double mu_hat = 0.0;
    bool clamped = false;
};

struct ThetaEstimate {
    double theta_hat = 0.0;
    bool floored = false;
};

/// Jump-size estimate: frontiers fit separately on [1, eta_hat] and
/// [eta_hat+1, n], ratio maximized over the observed inputs clearing the
/// trim threshold. The result is clamped into [1e-6, 1 - 1e-6] since the
/// geometric parameter needs mu strictly inside (0, 1).
inline MuEstimate estimate_mu(const Series& series, int eta_hat, const TrimBox& x0,
                              int min_seg = 2) {
    const int n = static_cast<int>(series.n());
    if (eta_hat < 2 || eta_hat > n - 2)
        throw segment_too_short("eta_hat must lie in [2, n-2]");
    if (eta_hat < min_seg || n - eta_hat < min_seg)
        throw segment_too_short("both segments need at least min_seg points");
    const auto left =
        FrontierEstimate::fit(std::span(series.obs).first(static_cast<std::size_t>(eta_hat)));
    const auto right =
        FrontierEstimate::fit(std::span(series.obs).subspan(static_cast<std::size_t>(eta_hat)));

    double best = -1.0;
    for (const Observation& o : series.obs) {
        if (!entrywise_greater(o.x, x0.x0)) continue;
        const double f2 = right.evaluate(o.x);
        if (!(f2 > 0.0)) continue;
        best = std::max(best, left.evaluate(o.x) / f2);
    }
    if (best < 0.0)
        throw no_active_evaluation_points("no trimmed-in input with a positive post-change "
                                          "frontier value");
    MuEstimate out;
    constexpr double eps = 1e-6;
    out.mu_hat = std::clamp(best, eps, 1.0 - eps);
    out.clamped = out.mu_hat != best;
    return out;
}

/// Scores with segment-specific frontiers: f_1 (fit on [1, eta_hat]) for
/// t <= eta_hat and f_2 (fit on the rest) afterwards.
inline ScoreSeries per_segment_scores(const Series& series, int eta_hat, const TrimBox& x0) {
    const int n = static_cast<int>(series.n());
    if (eta_hat < 1 || eta_hat >= n) throw index_out_of_range("eta_hat must lie in [1, n-1]");
    const auto left =
        FrontierEstimate::fit(std::span(series.obs).first(static_cast<std::size_t>(eta_hat)));
    const auto right =
        FrontierEstimate::fit(std::span(series.obs).subspan(static_cast<std::size_t>(eta_hat)));
    ScoreSeries out;
    out.x0 = x0;
    out.r_hat.resize(series.n(), 0.0);
    out.active.resize(series.n(), 0);
    for (std::size_t i = 0; i < series.n(); ++i) {
        const Observation& o = series.obs[i];
        if (!entrywise_greater(o.x, x0.x0)) continue;
        out.active[i] = 1;
        const double f =
            (static_cast<int>(i) < eta_hat) ? left.evaluate(o.x) : right.evaluate(o.x);
        if (f > 0.0) {
            out.r_hat[i] = o.y / f;
        } else {
            ++out.zero_frontier_count;
        }
    }
    return out;
}

/// theta under identically distributed inputs and scores: the fraction of
/// observations whose (segment-wise) score reaches mu_hat while clearing
/// the trim. A zero count is floored at 1/n and flagged.
inline ThetaEstimate estimate_theta_iid(const ScoreSeries& scores, double mu_hat) {
    long count = 0;
    for (std::size_t i = 0; i < scores.n(); ++i)
        if (scores.active[i] && scores.r_hat[i] >= mu_hat) ++count;
    ThetaEstimate out;
    if (count == 0) {
        out.theta_hat = 1.0 / static_cast<double>(scores.n());
        out.floored = true;
    } else {
        out.theta_hat = static_cast<double>(count) / static_cast<double>(scores.n());
    }
    return out;
}

struct Bandwidths {
    double h_score = 0.0;            // score histogram bin width
    std::vector<double> h_input;     // per-coordinate input bin widths
    std::size_t window = 0;          // sliding window length H_n

    static Bandwidths defaults(const Series& series) {
        const double n = static_cast<double>(series.n());
        Bandwidths bw;
        bw.h_score = 1.0 / std::ceil(std::pow(n, 1.0 / 3.0));
        bw.window = static_cast<std::size_t>(std::ceil(n / std::log(n)));
        const double bins = std::ceil(std::pow(n, 1.0 / (static_cast<double>(series.d) + 2.0)));
        bw.h_input.resize(series.d);
        for (std::size_t j = 0; j < series.d; ++j) {
            double lo = series.obs.front().x[j], hi = lo;
            for (const Observation& o : series.obs) {
                lo = std::min(lo, o.x[j]);
                hi = std::max(hi, o.x[j]);
            }
            const double range = hi - lo;
            bw.h_input[j] = range > 0.0 ? range / bins : 1.0;
        }
        return bw;
    }
};

namespace detail {

// min over sliding windows and bins of the windowed histogram density.
// bin_of[i] < 0 excludes observation i; densities are count/(H * volume).
inline double sliding_histogram_min(const std::vector<int>& bin_of, std::size_t n_bins,
                                    std::size_t window, double bin_volume) {
    const std::size_t n = bin_of.size();
    std::vector<long> counts(n_bins, 0);
    for (std::size_t i = 0; i < window; ++i)
        if (bin_of[i] >= 0) ++counts[static_cast<std::size_t>(bin_of[i])];
    long min_count = *std::min_element(counts.begin(), counts.end());
    for (std::size_t i = window; i < n; ++i) {
        if (bin_of[i - window] >= 0) --counts[static_cast<std::size_t>(bin_of[i - window])];
        if (bin_of[i] >= 0) ++counts[static_cast<std::size_t>(bin_of[i])];
        min_count = std::min(min_count, *std::min_element(counts.begin(), counts.end()));
    }
    return static_cast<double>(min_count) / (static_cast<double>(window) * bin_volume);
}

}  // namespace detail

/// theta for non-identically distributed data, via the product of histogram
/// lower bounds: theta = C1R * (1 - mu) * C1X * mes(X \ [0, x0]). The input
/// box is the observed bounding box; any empty window-bin drives the
/// estimate to the 1/n floor.
inline ThetaEstimate estimate_theta_general(const Series& series, const ScoreSeries& scores,
                                            double mu_hat, const TrimBox& x0,
                                            const Bandwidths& bw) {
    const std::size_t n = series.n();
    if (n < 20) throw insufficient_data("need at least 20 observations");
    const std::size_t window = std::min(bw.window, n);
    if (window < 1) throw insufficient_data("window size must be >= 1");

    // C1R: active scores binned into ((j-1)h, jh].
    const std::size_t score_bins =
        static_cast<std::size_t>(std::ceil(1.0 / bw.h_score - 1e-12));
    std::vector<int> score_bin(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        if (!scores.active[i]) continue;
        const double r = scores.r_hat[i];
        if (r <= 0.0) continue;
        auto b = static_cast<long>(std::ceil(r / bw.h_score - 1e-12)) - 1;
        if (b < 0) b = 0;
        if (b >= static_cast<long>(score_bins)) b = static_cast<long>(score_bins) - 1;
        score_bin[i] = static_cast<int>(b);
    }
    const double c1r = detail::sliding_histogram_min(score_bin, score_bins, window, bw.h_score);

    // C1X: inputs binned over the observed box with per-coordinate widths.
    std::vector<double> lo(series.d), hi(series.d);
    for (std::size_t j = 0; j < series.d; ++j) {
        lo[j] = hi[j] = series.obs.front().x[j];
        for (const Observation& o : series.obs) {
            lo[j] = std::min(lo[j], o.x[j]);
            hi[j] = std::max(hi[j], o.x[j]);
        }
    }
    std::vector<std::size_t> axis_bins(series.d);
    double cell_volume = 1.0;
    std::size_t n_cells = 1;
    for (std::size_t j = 0; j < series.d; ++j) {
        const double range = hi[j] - lo[j];
        axis_bins[j] = range > 0.0
                           ? static_cast<std::size_t>(std::ceil(range / bw.h_input[j] - 1e-12))
                           : 1;
        n_cells *= axis_bins[j];
        cell_volume *= bw.h_input[j];
    }
    std::vector<int> input_bin(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t idx = 0;
        for (std::size_t j = 0; j < series.d; ++j) {
            auto b = static_cast<long>((series.obs[i].x[j] - lo[j]) / bw.h_input[j]);
            if (b < 0) b = 0;
            if (b >= static_cast<long>(axis_bins[j])) b = static_cast<long>(axis_bins[j]) - 1;
            idx = idx * axis_bins[j] + static_cast<std::size_t>(b);
        }
        input_bin[i] = static_cast<int>(idx);
    }
    const double c1x = detail::sliding_histogram_min(input_bin, n_cells, window, cell_volume);

    // mes(X \ [0, x0]) over the observed box.
    double mes_box = 1.0, mes_trim = 1.0;
    for (std::size_t j = 0; j < series.d; ++j) {
        mes_box *= hi[j] - lo[j];
        mes_trim *= std::max(0.0, std::min(x0.x0[j], hi[j]) - lo[j]);
    }
    const double mes = mes_box - mes_trim;

    ThetaEstimate out;
    const double theta = c1r * (1.0 - mu_hat) * c1x * mes;
    if (theta <= 0.0) {
        out.theta_hat = 1.0 / static_cast<double>(n);
        out.floored = true;
    } else {
        out.theta_hat = std::min(theta, 1.0);
    }
    return out;
}

/// Smallest k* >= 0 with 1 - (1 - theta)^(k*+1) >= level, giving the
/// interval [max(1, eta_hat - k*), eta_hat].
inline GeometricCI confidence_interval(int eta_hat, double theta_hat, double level,
                                       GeometricCI::Mode mode = GeometricCI::Mode::iid) {
    if (!(level > 0.0 && level < 1.0)) throw validation_error("level must lie in (0,1)");
    if (!(theta_hat > 0.0 && theta_hat <= 1.0))
        throw validation_error("theta_hat must lie in (0,1]");
    GeometricCI ci;
    ci.eta_hat = eta_hat;
    ci.theta_hat = theta_hat;
    ci.level = level;
    ci.mode = mode;
    int k_star = 0;
    if (theta_hat < 1.0) {
        const double ratio = std::log(1.0 - level) / std::log(1.0 - theta_hat);
        k_star = static_cast<int>(std::ceil(ratio - 1e-9)) - 1;
        if (k_star < 0) k_star = 0;
    }
    ci.lo = std::max(1, eta_hat - k_star);
    ci.hi = eta_hat;
    return ci;
}

/// Full CI pipeline for one change at eta_hat inside the window
/// [t_lo, t_hi] (1-based, inclusive): the window is treated as a series of
/// its own, per-segment frontiers are fit around the change, and theta is
/// estimated in the requested mode.
inline GeometricCI ci_for_change(const Series& series, int t_lo, int t_hi, int eta_hat,
                                 const TrimBox& x0, GeometricCI::Mode mode, double level,
                                 int min_seg = 2) {
    const int n = static_cast<int>(series.n());
    if (t_lo < 1 || t_hi > n || t_lo > t_hi) throw index_out_of_range("bad CI window");
    if (eta_hat < t_lo || eta_hat >= t_hi)
        throw index_out_of_range("eta_hat must lie in [t_lo, t_hi)");
    Series sub;
    sub.d = series.d;
    for (int t = t_lo; t <= t_hi; ++t) {
        Observation o = series.obs[static_cast<std::size_t>(t - 1)];
        o.t = t - t_lo + 1;
        sub.obs.push_back(std::move(o));
        sub.labels.push_back(series.labels[static_cast<std::size_t>(t - 1)]);
    }
    const int eta_local = eta_hat - t_lo + 1;

    const MuEstimate mu = estimate_mu(sub, eta_local, x0, min_seg);
    const ScoreSeries seg_scores = per_segment_scores(sub, eta_local, x0);
    ThetaEstimate theta;
    std::vector<std::string> flags;
    if (mu.clamped) flags.emplace_back("mu_clamped");
    if (mode == GeometricCI::Mode::iid) {
        theta = estimate_theta_iid(seg_scores, mu.mu_hat);
    } else {
        theta = estimate_theta_general(sub, seg_scores, mu.mu_hat, x0, Bandwidths::defaults(sub));
        // The histogram lower bounds presume slowly varying distributions,
        // which cannot be verified from data.
        flags.emplace_back("slow_variation_assumed");
    }
    if (theta.floored) flags.emplace_back("theta_floored");

    GeometricCI ci = confidence_interval(eta_hat, theta.theta_hat, level, mode);
    ci.flags = std::move(flags);
    return ci;
}

}  // namespace fcp
