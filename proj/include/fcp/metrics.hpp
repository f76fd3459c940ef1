#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "fcp/simulate.hpp"
#include "fcp/types.hpp"

namespace fcp {

/// Hausdorff distance between two sets of time indices. Conventions: two
/// empty sets are at distance 0; exactly one empty set is at distance n,
/// the largest possible localization error.
inline double hausdorff(const std::vector<int>& a, const std::vector<int>& b, std::size_t n) {
    if (a.empty() && b.empty()) return 0.0;
    if (a.empty() || b.empty()) return static_cast<double>(n);
    auto directed = [](const std::vector<int>& from, const std::vector<int>& to) {
        long worst = 0;
        for (int x : from) {
            long nearest = std::numeric_limits<long>::max();
            for (int y : to) nearest = std::min(nearest, std::labs(static_cast<long>(x) - y));
            worst = std::max(worst, nearest);
        }
        return worst;
    };
    return static_cast<double>(std::max(directed(a, b), directed(b, a)));
}

struct EvalRecord {
    int rep = 0;
    double d_h = 0.0;
    double k_err = 0.0;
    double runtime_ms = 0.0;
    bool failed = false;
    std::string error;
};

struct BenchmarkSummary {
    std::vector<EvalRecord> records;  // by replication index
    double d_h_mean = 0.0;
    double k_err_mean = 0.0;
    int failures = 0;
};

/// A detector takes the simulated series and the replication index (so
/// file-backed adapters can look up externally produced change points) and
/// returns estimated change locations.
using Detector = std::function<std::vector<int>(const Series&, int rep)>;

/// Runs `reps` seeded replications of the configured DGP through the
/// detector and aggregates Hausdorff distance and |K - K_hat|. Failed
/// replications are recorded and excluded from the means. Deterministic for
/// fixed (config, master_seed, reps) regardless of the job count.
inline BenchmarkSummary run_benchmark(const SimConfig& sim, const Detector& detector, int reps,
                                      std::uint64_t master_seed, int jobs = 1) {
    if (reps < 1) throw validation_error("reps must be >= 1");
    BenchmarkSummary summary;
    summary.records.resize(static_cast<std::size_t>(reps));

    auto run_rep = [&](int rep) {
        EvalRecord& rec = summary.records[static_cast<std::size_t>(rep)];
        rec.rep = rep;
        SimConfig cfg = sim;
        cfg.seed = derive_seed(master_seed, static_cast<std::uint64_t>(rep));
        const auto [series, truth] = generate(cfg);
        const auto start = std::chrono::steady_clock::now();
        try {
            const std::vector<int> cps = detector(series, rep);
            rec.d_h = hausdorff(cps, truth.changepoints, series.n());
            rec.k_err = std::abs(static_cast<double>(cps.size()) -
                                 static_cast<double>(truth.changepoints.size()));
        } catch (const std::exception& e) {
            rec.failed = true;
            rec.error = e.what();
        }
        const auto stop = std::chrono::steady_clock::now();
        rec.runtime_ms =
            std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(stop - start)
                .count();
    };

    if (jobs <= 1) {
        for (int rep = 0; rep < reps; ++rep) run_rep(rep);
    } else {
        std::vector<std::thread> pool;
        std::atomic<int> next{0};
        const int workers = std::min(jobs, reps);
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (int rep = next.fetch_add(1); rep < reps; rep = next.fetch_add(1))
                    run_rep(rep);
            });
        }
        for (std::thread& t : pool) t.join();
    }

    double dh = 0.0, ke = 0.0;
    int ok = 0;
    for (const EvalRecord& r : summary.records) {
        if (r.failed) {
            ++summary.failures;
            continue;
        }
        dh += r.d_h;
        ke += r.k_err;
        ++ok;
    }
    if (ok > 0) {
        summary.d_h_mean = dh / ok;
        summary.k_err_mean = ke / ok;
    }
    return summary;
}

}  // namespace fcp
