#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "fcp/errors.hpp"

namespace fcp {

/// One time-indexed input/output record. `t` is the 1-based position in the
/// series; the original time label (quarters, years, ...) lives in
/// Series::labels since real panels may carry several records per period.
struct Observation {
    int t = 0;                  // 1..n, consecutive
    std::vector<double> x;      // input quantities, all >= 0
    double y = 0.0;             // output quantity, >= 0
};

/// A validated, time-ordered panel. Immutable after construction.
struct Series {
    std::size_t d = 0;
    std::vector<Observation> obs;
    std::vector<double> labels;  // original time labels, aligned with obs

    std::size_t n() const { return obs.size(); }
};

/// Entry-wise input trimming threshold: observations with any coordinate
/// <= x0[j] are excluded from scoring (strict > keeps a point active).
struct TrimBox {
    std::vector<double> x0;
};

struct DetectorConfig {
    double lambda = 0.0;       // detection threshold; lambda_auto(n) gives log^2(n)
    double alpha_trim = 0.1;   // trimming quantile level in [0,1)
    bool refit = true;         // run the local refitting pass
    double robust_c = 1.0;     // restart back-off constant for the robust variant
    int min_seg = 2;           // smallest segment a frontier may be fit on

    void validate() const {
        if (!(lambda > 0.0)) throw validation_error("lambda must be > 0");
        if (!(alpha_trim >= 0.0 && alpha_trim < 1.0))
            throw validation_error("alpha_trim must lie in [0,1)");
        if (!(robust_c > 0.0)) throw validation_error("robust_c must be > 0");
        if (min_seg < 2) throw validation_error("min_seg must be >= 2");
    }
};

inline double lambda_auto(std::size_t n) {
    const double ln = std::log(static_cast<double>(n));
    return ln * ln;
}

/// Axis-aligned hyper-cube from the multi-scale grid, in rescaled units
/// (every input coordinate divided by its sample maximum).
struct GridCell {
    std::vector<double> lo;
    std::vector<double> hi;
    int scale_k = 0;
};

struct DetectionResult {
    int k_hat = 0;
    std::vector<int> changepoints;              // strictly increasing
    std::vector<double> stats;                  // statistic value per change
    std::vector<int> restarts;                  // m_k, aligned with changepoints
    std::vector<std::pair<int, int>> refit_windows;  // (s_k, e_k), empty for the robust variant
    std::vector<GridCell> cells;                // triggering cell per change (local mode only)
};

namespace detail {

// Type-1 (lower) empirical quantile: the ceil(q*m)-th order statistic,
// with q = 0 mapping to the minimum. `sorted` must be ascending.
inline double quantile_type1_sorted(const std::vector<double>& sorted, double q) {
    const std::size_t m = sorted.size();
    std::size_t idx = static_cast<std::size_t>(std::ceil(q * static_cast<double>(m)));
    if (idx < 1) idx = 1;
    if (idx > m) idx = m;
    return sorted[idx - 1];
}

}  // namespace detail

/// Raw row as parsed from CSV or built in memory: (time label, inputs, output).
struct RawRow {
    double t_label = 0.0;
    std::vector<double> x;
    double y = 0.0;
};

/// Checks raw rows and assembles a Series with contiguous 1..n indices.
/// Rows are stable-sorted by their time label, so records sharing a label
/// keep their file order and are mapped to consecutive indices.
inline Series validate_series(std::vector<RawRow> rows) {
    if (rows.empty()) throw empty_input("no observations given");
    const std::size_t d = rows.front().x.size();
    if (d == 0) throw dimension_mismatch("input dimension must be >= 1");
    for (const RawRow& r : rows) {
        if (r.x.size() != d)
            throw dimension_mismatch("mixed input dimensions: expected " + std::to_string(d) +
                                     ", got " + std::to_string(r.x.size()));
        if (!std::isfinite(r.y) || !std::isfinite(r.t_label))
            throw validation_error("non-finite value in row");
        if (r.y < 0.0) throw negative_value("output must be >= 0");
        for (double v : r.x) {
            if (!std::isfinite(v)) throw validation_error("non-finite value in row");
            if (v < 0.0) throw negative_value("inputs must be >= 0");
        }
    }
    std::stable_sort(rows.begin(), rows.end(),
                     [](const RawRow& a, const RawRow& b) { return a.t_label < b.t_label; });
    Series s;
    s.d = d;
    s.obs.reserve(rows.size());
    s.labels.reserve(rows.size());
    int t = 1;
    for (RawRow& r : rows) {
        s.obs.push_back(Observation{t++, std::move(r.x), r.y});
        s.labels.push_back(r.t_label);
    }
    if (s.obs.size() < 2) throw validation_error("a series needs at least 2 observations");
    return s;
}

/// Coordinate-wise alpha quantile of the inputs (type-1 / lower quantile).
inline TrimBox trim_quantile(const Series& series, double alpha) {
    if (!(alpha >= 0.0 && alpha < 1.0)) throw validation_error("alpha must lie in [0,1)");
    TrimBox box;
    box.x0.resize(series.d);
    std::vector<double> col(series.n());
    for (std::size_t j = 0; j < series.d; ++j) {
        for (std::size_t i = 0; i < series.n(); ++i) col[i] = series.obs[i].x[j];
        std::sort(col.begin(), col.end());
        box.x0[j] = detail::quantile_type1_sorted(col, alpha);
    }
    return box;
}

/// Strict entry-wise comparison used by the trimming rule.
inline bool entrywise_greater(const std::vector<double>& x, const std::vector<double>& x0) {
    for (std::size_t j = 0; j < x.size(); ++j)
        if (!(x[j] > x0[j])) return false;
    return true;
}

/// Non-strict entry-wise dominance used by the free-disposal order.
inline bool entrywise_leq(const std::vector<double>& a, const std::vector<double>& b) {
    for (std::size_t j = 0; j < a.size(); ++j)
        if (a[j] > b[j]) return false;
    return true;
}

}  // namespace fcp
