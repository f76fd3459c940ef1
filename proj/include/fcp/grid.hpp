#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "fcp/detect.hpp"
#include "fcp/frontier.hpp"
#include "fcp/scan.hpp"
#include "fcp/scores.hpp"
#include "fcp/types.hpp"

namespace fcp {

/// Multi-scale grid of axis-aligned hyper-cubes over the rescaled input box
/// [0,1]^d. At scale k the side is 2^-k and anchors move in half-side steps,
/// so neighbouring cells overlap by half. Cells whose interior meets the
/// trimmed lower box [0, x0] are omitted; boundary contact is allowed.
struct MultiScaleGrid {
    std::vector<GridCell> cells;   // rescaled units; scale ascending, anchors row-major
    std::vector<double> x_bar;     // per-coordinate rescaling factors (sample maxima)
    double a_n = 1.0;

    bool contains(const GridCell& cell, const std::vector<double>& x) const {
        for (std::size_t j = 0; j < x_bar.size(); ++j) {
            const double xr = x[j] / x_bar[j];
            if (xr < cell.lo[j] || xr > cell.hi[j]) return false;
        }
        return true;
    }

    GridCell to_original_units(const GridCell& cell) const {
        GridCell out = cell;
        for (std::size_t j = 0; j < x_bar.size(); ++j) {
            out.lo[j] *= x_bar[j];
            out.hi[j] *= x_bar[j];
        }
        return out;
    }
};

inline MultiScaleGrid build_grid(const Series& series, const TrimBox& x0, double a_n) {
    if (!(a_n >= 1.0)) throw validation_error("a_n must be >= 1");
    if (x0.x0.size() != series.d) throw dimension_mismatch("trim box dimension mismatch");
    const std::size_t d = series.d;

    MultiScaleGrid grid;
    grid.a_n = a_n;
    grid.x_bar.assign(d, 0.0);
    for (const Observation& o : series.obs)
        for (std::size_t j = 0; j < d; ++j) grid.x_bar[j] = std::max(grid.x_bar[j], o.x[j]);
    for (double& v : grid.x_bar)
        if (v <= 0.0) v = 1.0;

    std::vector<double> x0r(d);
    for (std::size_t j = 0; j < d; ++j) x0r[j] = x0.x0[j] / grid.x_bar[j];

    // Deepest scale: sides decay dyadically from 1 down to ~a_n^(-1/d).
    // The epsilon keeps exact powers of two from rounding up.
    const double side_factor = std::pow(a_n, 1.0 / static_cast<double>(d));
    const int k_max = std::max(0, static_cast<int>(std::ceil(std::log2(side_factor) - 1e-9)));

    std::vector<int> anchor(d, 0);
    for (int k = 0; k <= k_max; ++k) {
        const double side = std::ldexp(1.0, -k);
        const int anchors_per_axis = (1 << (k + 1)) - 1;  // twice-anchor 0 .. 2^(k+1)-2
        std::fill(anchor.begin(), anchor.end(), 0);
        while (true) {
            GridCell cell;
            cell.scale_k = k;
            cell.lo.resize(d);
            cell.hi.resize(d);
            bool clears_trim = false;
            for (std::size_t j = 0; j < d; ++j) {
                cell.lo[j] = 0.5 * static_cast<double>(anchor[j]) * side;
                cell.hi[j] = cell.lo[j] + side;
                if (cell.lo[j] >= x0r[j]) clears_trim = true;
            }
            if (clears_trim) grid.cells.push_back(std::move(cell));
            // row-major increment over the anchor lattice
            std::size_t j = d;
            while (j > 0) {
                --j;
                if (++anchor[j] < anchors_per_axis) break;
                anchor[j] = 0;
                if (j == 0) goto next_scale;
            }
            if (d == 0) break;
        }
    next_scale:;
    }
    return grid;
}

/// Same scan as quasi_lr_scan but a point qualifies by cell membership
/// (closed bounds, inputs rescaled by x_bar) instead of the trimming rule.
inline std::vector<SegmentStat> quasi_lr_scan_cell(const Series& series, const ScoreSeries& scores,
                                                   const GridCell& cell,
                                                   const std::vector<double>& x_bar, int t1,
                                                   int t2) {
    if (t1 < 1 || t2 < t1 || static_cast<std::size_t>(t2) > series.n())
        throw index_out_of_range("scan range [" + std::to_string(t1) + "," + std::to_string(t2) +
                                 "] outside 1.." + std::to_string(series.n()));
    auto member = [&](std::size_t i) {
        const std::vector<double>& x = series.obs[i].x;
        for (std::size_t j = 0; j < x.size(); ++j) {
            const double xr = x[j] / x_bar[j];
            if (xr < cell.lo[j] || xr > cell.hi[j]) return false;
        }
        return true;
    };
    std::vector<SegmentStat> out;
    out.reserve(static_cast<std::size_t>(t2 - t1 + 1));
    long n = 0;
    double m = 0.0;
    for (int tau = t1; tau <= t2; ++tau) {
        const std::size_t i = static_cast<std::size_t>(tau - 1);
        if (member(i)) {
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

// Best (value, cell, tau) of a multi-cell scan. Ties prefer the smaller cell
// index, then the smaller tau, so reductions are order-independent.
struct CellScanMax {
    double value = 0.0;
    int cell = -1;
    int tau = 0;

    void offer(double v, int c, int t) {
        if (v > value || (v == value && (cell < 0 || c < cell || (c == cell && t < tau)))) {
            value = v;
            cell = c;
            tau = t;
        }
    }
};

// Maximize the cell-localized statistic over tau in [t1, t2] and all cells.
// cells_of_point[i] lists the grid cells containing observation i+1, so each
// step only touches the cells whose running (N, M) actually change.
inline CellScanMax cell_scan_max(const ScoreSeries& scores,
                                 const std::vector<std::vector<int>>& cells_of_point,
                                 std::size_t n_cells, int t1, int t2,
                                 std::vector<long>& n_buf, std::vector<double>& m_buf) {
    n_buf.assign(n_cells, 0);
    m_buf.assign(n_cells, 0.0);
    CellScanMax best;
    best.tau = t1;
    for (int tau = t1; tau <= t2; ++tau) {
        const std::size_t i = static_cast<std::size_t>(tau - 1);
        for (int c : cells_of_point[i]) {
            ++n_buf[c];
            if (scores.r_hat[i] > m_buf[c]) m_buf[c] = scores.r_hat[i];
            bool deg = false;
            const double v = lr_value(n_buf[c], m_buf[c], deg);
            best.offer(v, c, tau);
        }
    }
    return best;
}

}  // namespace detail

/// Multi-scale detector for changes that may be local in input space: the
/// left-expanding search of detect_multi, with each interval's statistic
/// maximized over every grid cell. Scores inside cells are the plain ratios
/// Y_t / f_hat(X_t); the grid itself excludes the trimmed lower box.
inline DetectionResult detect_multi_local(const Series& series, const DetectorConfig& config,
                                          double a_n) {
    config.validate();
    const int n = static_cast<int>(series.n());
    if (n < 4) throw insufficient_data("need at least 4 observations");
    const TrimBox x0 = trim_quantile(series, config.alpha_trim);
    const MultiScaleGrid grid = build_grid(series, x0, a_n);
    const std::size_t n_cells = grid.cells.size();
    const TrimBox no_trim{std::vector<double>(series.d, 0.0)};

    std::vector<std::vector<int>> cells_of_point(series.n());
    for (std::size_t i = 0; i < series.n(); ++i)
        for (std::size_t c = 0; c < n_cells; ++c)
            if (grid.contains(grid.cells[c], series.obs[i].x))
                cells_of_point[i].push_back(static_cast<int>(c));

    std::vector<long> n_buf;
    std::vector<double> m_buf;

    struct LocalPilot {
        int pilot = 0;
        int restart = 0;
        int scan_end = 0;
        int cell = -1;
        double stat = 0.0;
        FrontierEstimate frontier;
    };
    std::vector<LocalPilot> found;
    int m = n;
    while (m >= config.min_seg) {
        auto frontier =
            FrontierEstimate::fit(std::span(series.obs).first(static_cast<std::size_t>(m)));
        const ScoreSeries scores = compute_scores(series, frontier, no_trim);
        bool detected = false;
        LocalPilot p;
        for (int j = 1; j <= m - 1; ++j) {
            const auto best =
                detail::cell_scan_max(scores, cells_of_point, n_cells, m - j, m, n_buf, m_buf);
            if (best.value > config.lambda) {
                p.pilot = best.tau;
                p.restart = m - j;
                p.cell = best.cell;
                p.stat = best.value;
                detected = true;
                break;
            }
        }
        if (!detected) break;
        p.scan_end = m;
        p.frontier = std::move(frontier);
        m = p.restart;
        found.push_back(std::move(p));
    }

    DetectionResult result;
    result.k_hat = static_cast<int>(found.size());
    if (found.empty()) return result;
    std::reverse(found.begin(), found.end());

    int prev = 1;
    for (const LocalPilot& p : found) {
        const int s = (prev + p.restart) / 2;
        const int e = p.scan_end;
        int eta = p.pilot;
        int cell = p.cell;
        double stat = p.stat;
        if (config.refit) {
            const ScoreSeries scores = compute_scores(series, p.frontier, no_trim);
            const auto best = detail::cell_scan_max(scores, cells_of_point, n_cells,
                                                    std::max(s, prev + 1), e, n_buf, m_buf);
            eta = best.tau;
            cell = best.cell >= 0 ? best.cell : p.cell;
            stat = best.value;
        }
        result.changepoints.push_back(eta);
        result.stats.push_back(stat);
        result.restarts.push_back(p.restart);
        result.refit_windows.emplace_back(s, e);
        result.cells.push_back(grid.to_original_units(grid.cells[static_cast<std::size_t>(cell)]));
        prev = eta;
    }
    return result;
}

}  // namespace fcp
