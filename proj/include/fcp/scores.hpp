#pragma once

#include <cstddef>
#include <vector>

#include "fcp/frontier.hpp"
#include "fcp/types.hpp"

namespace fcp {

/// Trimmed pseudo-efficiency scores. r_hat[t] = Y_t / f_hat(X_t) when the
/// inputs clear the trimming threshold entry-wise and the frontier value is
/// positive; 0 otherwise. Indices are 0-based into the originating series.
struct ScoreSeries {
    std::vector<double> r_hat;
    std::vector<char> active;  // X_t > x0 entry-wise
    TrimBox x0;
    // Active points where the frontier evaluated to 0 (possible only when
    // the frontier was fit on data not containing the point); their score is
    // set to 0 rather than infinity.
    int zero_frontier_count = 0;

    std::size_t n() const { return r_hat.size(); }
};

inline ScoreSeries compute_scores(const Series& series, const FrontierEstimate& frontier,
                                  const TrimBox& x0) {
    if (frontier.dim() != series.d) throw dimension_mismatch("frontier/series dimension mismatch");
    if (x0.x0.size() != series.d) throw dimension_mismatch("trim box dimension mismatch");
    ScoreSeries out;
    out.x0 = x0;
    out.r_hat.resize(series.n(), 0.0);
    out.active.resize(series.n(), 0);
    for (std::size_t i = 0; i < series.n(); ++i) {
        const Observation& o = series.obs[i];
        if (!entrywise_greater(o.x, x0.x0)) continue;
        out.active[i] = 1;
        const double f = frontier.evaluate(o.x);
        if (f > 0.0) {
            out.r_hat[i] = o.y / f;
        } else {
            ++out.zero_frontier_count;
        }
    }
    return out;
}

}  // namespace fcp
