#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fcp/csv.hpp"
#include "fcp/frontier.hpp"
#include "fcp/inference.hpp"
#include "fcp/metrics.hpp"
#include "fcp/scores.hpp"
#include "fcp/simulate.hpp"
#include "fcp/types.hpp"

namespace fcp {

using ordered_json = nlohmann::ordered_json;

inline ordered_json detection_to_json(const DetectionResult& result, double lambda,
                                      const TrimBox& x0) {
    ordered_json j;
    j["k_hat"] = result.k_hat;
    j["changepoints"] = result.changepoints;
    j["stats"] = result.stats;
    j["restarts"] = result.restarts;
    auto windows = ordered_json::array();
    for (const auto& [s, e] : result.refit_windows) windows.push_back({s, e});
    j["refit_windows"] = std::move(windows);
    j["lambda"] = lambda;
    j["x0"] = x0.x0;
    if (!result.cells.empty()) {
        auto cells = ordered_json::array();
        for (const GridCell& c : result.cells) {
            ordered_json cj;
            cj["lo"] = c.lo;
            cj["hi"] = c.hi;
            cj["scale"] = c.scale_k;
            cells.push_back(std::move(cj));
        }
        j["cells"] = std::move(cells);
    }
    return j;
}

inline ordered_json ci_to_json(const GeometricCI& ci) {
    ordered_json j;
    j["eta_hat"] = ci.eta_hat;
    j["theta_hat"] = ci.theta_hat;
    j["level"] = ci.level;
    j["lo"] = ci.lo;
    j["hi"] = ci.hi;
    j["mode"] = ci.mode == GeometricCI::Mode::iid ? "iid" : "general";
    j["flags"] = ci.flags;
    return j;
}

inline ordered_json truth_to_json(const SimTruth& truth, const SimConfig& config) {
    ordered_json j;
    j["n"] = config.n;
    j["d"] = config.d;
    j["k"] = config.k;
    j["seed"] = config.seed;
    j["changepoints"] = truth.changepoints;
    j["segment"] = truth.segment;
    j["scores"] = truth.scores;
    return j;
}

inline void write_frontier_csv(std::ostream& out, const FrontierEstimate& frontier) {
    for (std::size_t j = 1; j <= frontier.dim(); ++j) out << (j > 1 ? "," : "") << 'x' << j;
    out << ",y\n";
    for (const auto& p : frontier.points()) {
        for (double v : p.x) out << detail::format_double(v) << ',';
        out << detail::format_double(p.y) << '\n';
    }
}

inline void write_scores_csv(std::ostream& out, const ScoreSeries& scores) {
    out << "t,r_hat,active\n";
    for (std::size_t i = 0; i < scores.n(); ++i) {
        out << (i + 1) << ',' << detail::format_double(scores.r_hat[i]) << ','
            << (scores.active[i] ? 1 : 0) << '\n';
    }
}

inline void write_benchmark_summary_csv(std::ostream& out, const std::string& setup,
                                        const std::string& method,
                                        const BenchmarkSummary& summary) {
    out << "setup,method,d_h_mean,k_err_mean\n";
    out << setup << ',' << method << ',' << detail::format_double(summary.d_h_mean) << ','
        << detail::format_double(summary.k_err_mean) << '\n';
}

inline void write_benchmark_jsonl(std::ostream& out, const BenchmarkSummary& summary) {
    for (const EvalRecord& r : summary.records) {
        ordered_json j;
        j["rep"] = r.rep;
        if (r.failed) {
            j["failed"] = true;
            j["error"] = r.error;
        } else {
            j["d_h"] = r.d_h;
            j["k_err"] = r.k_err;
        }
        j["runtime_ms"] = r.runtime_ms;
        out << j.dump() << '\n';
    }
}

}  // namespace fcp
