#pragma once

#include <cmath>
#include <vector>

#include "fcp/scores.hpp"
#include "fcp/types.hpp"

namespace fcp {

/// Quasi-likelihood-ratio statistic of one segment scan position:
/// value = -2 * N * log(M) where N counts qualifying points on [t1, tau]
/// and M is the largest qualifying score there. Indices are 1-based.
struct SegmentStat {
    int t1 = 0;
    int tau = 0;
    int t2 = 0;
    long n_active = 0;      // N(t1, tau)
    double max_score = 0.0; // M(t1, tau); 0 when no qualifying point exists
    double value = 0.0;
    bool degenerate = false;
};

namespace detail {

// -2*N*log(M) with the 0 * inf = 0 convention for N = 0. A zero max with
// N > 0 would be +inf; it is replaced by a finite sentinel scaled like the
// largest representable exponent so argmax stays well defined.
inline double lr_value(long n_active, double max_score, bool& degenerate) {
    degenerate = false;
    if (n_active == 0) return 0.0;
    if (max_score <= 0.0) {
        degenerate = true;
        return 2.0 * static_cast<double>(n_active) * 709.0;
    }
    const double v = -2.0 * static_cast<double>(n_active) * std::log(max_score);
    return v == 0.0 ? 0.0 : v;  // normalize -0.0 from max_score == 1
}

// Result of maximizing the statistic over tau in [t1, t2]; ties keep the
// smallest tau.
struct ScanMax {
    double value = 0.0;
    int tau = 0;
    bool degenerate = false;
};

template <typename QualifiesFn>
inline ScanMax scan_max_if(const ScoreSeries& scores, int t1, int t2, QualifiesFn&& qualifies) {
    ScanMax best;
    best.tau = t1;
    long n = 0;
    double m = 0.0;
    for (int tau = t1; tau <= t2; ++tau) {
        const std::size_t i = static_cast<std::size_t>(tau - 1);
        if (qualifies(i)) {
            ++n;
            if (scores.r_hat[i] > m) m = scores.r_hat[i];
        }
        bool deg = false;
        const double v = lr_value(n, m, deg);
        if (v > best.value) {
            best.value = v;
            best.tau = tau;
            best.degenerate = deg;
        }
    }
    return best;
}

}  // namespace detail

/// Localized quasi-LR scan: one SegmentStat per tau = t1..t2, maintained by
/// a single rightward sweep. Qualification is the trimming rule X_t > x0.
inline std::vector<SegmentStat> quasi_lr_scan(const ScoreSeries& scores, int t1, int t2) {
    if (t1 < 1 || t2 < t1 || static_cast<std::size_t>(t2) > scores.n())
        throw index_out_of_range("scan range [" + std::to_string(t1) + "," + std::to_string(t2) +
                                 "] outside 1.." + std::to_string(scores.n()));
    std::vector<SegmentStat> out;
    out.reserve(static_cast<std::size_t>(t2 - t1 + 1));
    long n = 0;
    double m = 0.0;
    for (int tau = t1; tau <= t2; ++tau) {
        const std::size_t i = static_cast<std::size_t>(tau - 1);
        if (scores.active[i]) {
            ++n;
            if (scores.r_hat[i] > m) m = scores.r_hat[i];
        }
        SegmentStat s;
        s.t1 = t1;
        s.tau = tau;
        s.t2 = t2;
        s.n_active = n;
        s.max_score = m;
        s.value = detail::lr_value(n, m, s.degenerate);
        out.push_back(s);
    }
    return out;
}

namespace detail {

inline ScanMax scan_max(const ScoreSeries& scores, int t1, int t2) {
    return scan_max_if(scores, t1, t2,
                       [&](std::size_t i) { return scores.active[i] != 0; });
}

}  // namespace detail

}  // namespace fcp
