#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "fcp/rng.hpp"
#include "fcp/types.hpp"

namespace fcp {

enum class FrontierFamily { Constant, Additive, CobbDouglas, Logistic, PiecewiseLinear };

/// Baseline frontier function family plus parameters. defaults() fills the
/// benchmark parameterization for the requested dimension.
struct FrontierSpec {
    FrontierFamily family = FrontierFamily::Constant;
    double A = 1.0;
    double B = 0.0;
    double omega = 0.0;
    std::vector<double> alpha;

    static FrontierSpec defaults(FrontierFamily family, std::size_t d) {
        FrontierSpec s;
        s.family = family;
        switch (family) {
            case FrontierFamily::Constant:
                s.A = 1.0;
                break;
            case FrontierFamily::Additive:
                s.A = 3.0;
                s.alpha.assign(d, 3.0);
                break;
            case FrontierFamily::CobbDouglas:
                s.A = 1.0;
                s.alpha.assign(d, 0.3);
                break;
            case FrontierFamily::Logistic:
                s.A = 4.0;
                s.B = 0.5;
                s.alpha.assign(d, 1.0);
                break;
            case FrontierFamily::PiecewiseLinear:
                s.A = 1.0;
                if (d == 1) {
                    s.B = -0.875;
                    s.omega = 1.25;
                    s.alpha.assign(1, 1.5);
                } else {
                    s.B = -2.75;
                    s.omega = 2.5;
                    s.alpha.assign(d, 1.5);
                }
                break;
        }
        return s;
    }
};

namespace detail {

inline double frontier_base_value(const FrontierSpec& spec, const std::vector<double>& x) {
    switch (spec.family) {
        case FrontierFamily::Constant:
            return spec.A;
        case FrontierFamily::Additive: {
            double s = spec.A;
            for (std::size_t j = 0; j < x.size(); ++j) s += spec.alpha[j] * x[j];
            return s;
        }
        case FrontierFamily::CobbDouglas: {
            double s = spec.A;
            for (std::size_t j = 0; j < x.size(); ++j) s *= std::pow(x[j], spec.alpha[j]);
            return s;
        }
        case FrontierFamily::Logistic: {
            double s = 0.0;
            for (std::size_t j = 0; j < x.size(); ++j) s += spec.alpha[j] * x[j];
            const double e = std::exp(spec.A * (s - spec.B));
            return e / (1.0 + e);
        }
        case FrontierFamily::PiecewiseLinear: {
            double norm1 = 0.0;
            for (double v : x) norm1 += std::abs(v);
            if (norm1 < spec.omega) return spec.A;
            double s = spec.B;
            for (std::size_t j = 0; j < x.size(); ++j) s += spec.alpha[j] * x[j];
            return s;
        }
    }
    return 0.0;
}

}  // namespace detail

/// Frontier value on stationary segment `segment_k` (1-based). Ordinary
/// families are lifted by multiplier^(k-1). The piecewise-linear family
/// encodes the local-change sequence: segment 1 is the flat baseline A,
/// segment 2 the kinked frontier, and later segments its multiples, so
/// only inputs past the kink gain from the first change.
inline double frontier_value(const FrontierSpec& spec, const std::vector<double>& x,
                             int segment_k, double multiplier = 1.75) {
    if (spec.family == FrontierFamily::PiecewiseLinear) {
        if (segment_k <= 1) return spec.A;
        return std::pow(multiplier, segment_k - 2) * detail::frontier_base_value(spec, x);
    }
    return std::pow(multiplier, segment_k - 1) * detail::frontier_base_value(spec, x);
}

enum class ScoreDist { R1Uniform, R2TruncNormalUp, R3TruncNormalDown, R4Mixture };

struct SimConfig {
    std::size_t n = 1000;
    std::size_t d = 1;
    int k = 2;                         // number of change points
    double change_multiplier = 1.75;
    FrontierSpec frontier = FrontierSpec::defaults(FrontierFamily::Constant, 1);
    ScoreDist scores = ScoreDist::R1Uniform;
    double sigma2 = 0.1;               // truncated-normal variance
    std::uint64_t seed = 0;
};

struct SimTruth {
    std::vector<int> changepoints;    // eta_1 < ... < eta_K
    std::vector<int> segment;         // segment id per observation, 1-based
    std::vector<double> scores;       // efficiency scores R_t
};

/// Change points sit at floor(k*n/(K+1)); a change at eta means the new
/// technology applies from t = eta+1 on.
inline std::vector<int> equidistant_changepoints(std::size_t n, int k) {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(k));
    for (int i = 1; i <= k; ++i)
        out.push_back(static_cast<int>(static_cast<long long>(i) * static_cast<long long>(n) /
                                       (k + 1)));
    return out;
}

namespace detail {

inline double draw_score(ScoreDist dist, double sigma2, std::size_t t, std::size_t n, Rng& rng) {
    const double tt = static_cast<double>(t);
    const double nn = static_cast<double>(n);
    switch (dist) {
        case ScoreDist::R1Uniform:
            return rng.uniform();
        case ScoreDist::R2TruncNormalUp:
            return truncated_normal(0.5 + tt / nn, std::sqrt(sigma2), 0.0, 1.0, rng.uniform());
        case ScoreDist::R3TruncNormalDown:
            return truncated_normal(1.5 - tt / nn, std::sqrt(sigma2), 0.0, 1.0, rng.uniform());
        case ScoreDist::R4Mixture: {
            if (t <= n / 2) return rng.uniform();
            const double coin = rng.uniform();
            const double v = rng.uniform();
            return coin < 0.5 ? v : 0.8 + 0.2 * v;
        }
    }
    return 0.0;
}

}  // namespace detail

/// Draws inputs uniformly on [1,2]^d, scores from the configured
/// distribution, and outputs Y_t = f_(k(t))(X_t) * R_t. Deterministic given
/// the seed: per observation the d input coordinates are drawn first, then
/// the score variates.
inline std::pair<Series, SimTruth> generate(const SimConfig& config) {
    if (config.n < 2) throw validation_error("n must be >= 2");
    if (config.d < 1) throw validation_error("d must be >= 1");
    if (config.k < 0) throw validation_error("k must be >= 0");
    if (config.k >= static_cast<int>(config.n))
        throw validation_error("k must be smaller than n");

    const std::vector<int> etas = equidistant_changepoints(config.n, config.k);
    Rng rng(config.seed);

    Series series;
    series.d = config.d;
    series.obs.reserve(config.n);
    series.labels.reserve(config.n);
    SimTruth truth;
    truth.changepoints = etas;
    truth.segment.reserve(config.n);
    truth.scores.reserve(config.n);

    int seg = 1;
    for (std::size_t t = 1; t <= config.n; ++t) {
        while (seg <= config.k && static_cast<int>(t) > etas[static_cast<std::size_t>(seg - 1)])
            ++seg;
        Observation o;
        o.t = static_cast<int>(t);
        o.x.resize(config.d);
        for (std::size_t j = 0; j < config.d; ++j) o.x[j] = rng.uniform(1.0, 2.0);
        const double r = detail::draw_score(config.scores, config.sigma2, t, config.n, rng);
        o.y = frontier_value(config.frontier, o.x, seg, config.change_multiplier) * r;
        series.obs.push_back(std::move(o));
        series.labels.push_back(static_cast<double>(t));
        truth.segment.push_back(seg);
        truth.scores.push_back(r);
    }
    return {std::move(series), std::move(truth)};
}

}  // namespace fcp
