#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "fcp/frontier.hpp"
#include "fcp/scan.hpp"
#include "fcp/scores.hpp"
#include "fcp/types.hpp"

namespace fcp {

struct SingleDetection {
    bool detected = false;
    int eta_hat = 0;
    double stat = 0.0;
};

/// At-most-one-change detection: frontier on all data, trimmed scores,
/// eta_hat = argmax of the quasi-LR sequence (smallest index on ties),
/// detected when the maximum exceeds lambda.
inline SingleDetection detect_single(const Series& series, const DetectorConfig& config) {
    config.validate();
    if (series.n() < 4) throw insufficient_data("need at least 4 observations");
    const auto frontier = FrontierEstimate::fit(std::span(series.obs));
    const TrimBox x0 = trim_quantile(series, config.alpha_trim);
    const ScoreSeries scores = compute_scores(series, frontier, x0);
    const auto best = detail::scan_max(scores, 1, static_cast<int>(series.n()));
    return SingleDetection{best.value > config.lambda, best.tau, best.value};
}

namespace detail {

struct PilotChange {
    int pilot = 0;      // eta_tilde
    int restart = 0;    // m after detection
    int scan_end = 0;   // m before detection; right end of the refit window
    double stat = 0.0;  // triggering maximum
    FrontierEstimate frontier;
};

// One round of the left-expanding interval search with right endpoint m:
// grow j until some interval [m-j, m] holds a statistic above lambda.
// `stat_max` maximizes a statistic over tau in [t1, t2] and must return a
// ScanMax; it sees the scores already computed for this round.
template <typename StatMaxFn>
inline bool left_expanding_search(int m, double lambda, StatMaxFn&& stat_max, int& pilot,
                                  int& restart, double& stat) {
    for (int j = 1; j <= m - 1; ++j) {
        const ScanMax best = stat_max(m - j, m);
        if (best.value > lambda) {
            pilot = best.tau;
            restart = m - j;
            stat = best.value;
            return true;
        }
    }
    return false;
}

}  // namespace detail

/// Multiple change point detection: repeatedly fit the frontier on 1..m,
/// run the left-expanding search for the rightmost remaining change, and
/// restart at m = m - j*. Detected locations are then locally refitted on
/// windows derived from the restart indices, each using the frontier that
/// detected it.
inline DetectionResult detect_multi(const Series& series, const DetectorConfig& config) {
    config.validate();
    const int n = static_cast<int>(series.n());
    if (n < 4) throw insufficient_data("need at least 4 observations");
    const TrimBox x0 = trim_quantile(series, config.alpha_trim);

    std::vector<detail::PilotChange> found;  // in detection order, right to left
    int m = n;
    while (m >= config.min_seg) {
        auto frontier = FrontierEstimate::fit(std::span(series.obs).first(static_cast<std::size_t>(m)));
        const ScoreSeries scores = compute_scores(series, frontier, x0);
        detail::PilotChange c;
        const bool detected = detail::left_expanding_search(
            m, config.lambda,
            [&](int t1, int t2) { return detail::scan_max(scores, t1, t2); }, c.pilot, c.restart,
            c.stat);
        if (!detected) break;
        c.scan_end = m;
        c.frontier = std::move(frontier);
        m = c.restart;
        found.push_back(std::move(c));
    }

    DetectionResult result;
    result.k_hat = static_cast<int>(found.size());
    if (found.empty()) return result;
    std::reverse(found.begin(), found.end());  // ascending in time

    int prev = 1;  // eta_hat_0
    for (const detail::PilotChange& c : found) {
        const int s = (prev + c.restart) / 2;  // floor; both operands positive
        const int e = c.scan_end;
        int eta = c.pilot;
        double stat = c.stat;
        if (config.refit) {
            const ScoreSeries scores = compute_scores(series, c.frontier, x0);
            // Start past the previous refitted point so the output stays
            // strictly increasing even when the windows touch.
            const auto best = detail::scan_max(scores, std::max(s, prev + 1), e);
            eta = best.tau;
            stat = best.value;
        }
        result.changepoints.push_back(eta);
        result.stats.push_back(stat);
        result.restarts.push_back(c.restart);
        result.refit_windows.emplace_back(s, e);
        prev = eta;
    }
    return result;
}

/// Variant that is robust to temporary universal efficiency drops: scan the
/// full prefix [1, m], take the largest tau whose statistic exceeds lambda,
/// and back off by floor(robust_c * log n) before re-starting.
inline DetectionResult detect_multi_robust(const Series& series, const DetectorConfig& config) {
    config.validate();
    const int n = static_cast<int>(series.n());
    if (n < 4) throw insufficient_data("need at least 4 observations");
    const TrimBox x0 = trim_quantile(series, config.alpha_trim);
    const int back_off =
        static_cast<int>(std::floor(config.robust_c * std::log(static_cast<double>(n))));

    DetectionResult result;
    int m = n;
    while (m >= config.min_seg) {
        const auto frontier =
            FrontierEstimate::fit(std::span(series.obs).first(static_cast<std::size_t>(m)));
        const ScoreSeries scores = compute_scores(series, frontier, x0);
        long n_active = 0;
        double max_score = 0.0;
        int last_exceed = 0;
        double last_exceed_value = 0.0;
        for (int tau = 1; tau <= m; ++tau) {
            const std::size_t i = static_cast<std::size_t>(tau - 1);
            if (scores.active[i]) {
                ++n_active;
                if (scores.r_hat[i] > max_score) max_score = scores.r_hat[i];
            }
            bool deg = false;
            const double v = detail::lr_value(n_active, max_score, deg);
            if (v > config.lambda) {
                last_exceed = tau;
                last_exceed_value = v;
            }
        }
        if (last_exceed == 0) break;
        result.changepoints.push_back(last_exceed);
        result.stats.push_back(last_exceed_value);
        const int restart = std::max(0, last_exceed - back_off);
        result.restarts.push_back(restart);
        m = restart;
    }
    result.k_hat = static_cast<int>(result.changepoints.size());
    std::reverse(result.changepoints.begin(), result.changepoints.end());
    std::reverse(result.stats.begin(), result.stats.end());
    std::reverse(result.restarts.begin(), result.restarts.end());
    return result;
}

}  // namespace fcp
