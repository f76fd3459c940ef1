#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include "fcp/types.hpp"

namespace fcp {

/// Free disposal hull frontier: evaluate(x) is the largest output among
/// sample points whose inputs are entry-wise dominated by x, or 0 when no
/// sample point dominates the query (never extrapolates upward).
///
/// Only the Pareto antichain of the sample is stored: a point is dropped
/// when another point has entry-wise smaller-or-equal inputs and at least
/// the same output, which leaves evaluate unchanged.
class FrontierEstimate {
public:
    struct Point {
        std::vector<double> x;
        double y = 0.0;
    };

    FrontierEstimate() = default;

    static FrontierEstimate fit(std::span<const Observation> obs) {
        if (obs.empty()) throw empty_input("cannot fit a frontier on zero points");
        const std::size_t d = obs.front().x.size();
        for (const Observation& o : obs)
            if (o.x.size() != d) throw dimension_mismatch("inconsistent input dimension");

        FrontierEstimate fr;
        fr.d_ = d;
        // Process by decreasing output (ties: lexicographically smaller input
        // first) so a candidate can only be dominated by points already kept.
        std::vector<const Observation*> order;
        order.reserve(obs.size());
        for (const Observation& o : obs) order.push_back(&o);
        std::sort(order.begin(), order.end(), [](const Observation* a, const Observation* b) {
            if (a->y != b->y) return a->y > b->y;
            return a->x < b->x;
        });
        for (const Observation* o : order) {
            bool dominated = false;
            for (const Point& p : fr.points_) {
                if (entrywise_leq(p.x, o->x)) {  // p.y >= o->y by processing order
                    dominated = true;
                    break;
                }
            }
            if (!dominated) fr.points_.push_back(Point{o->x, o->y});
        }
        if (d == 1) {
            // Sorted by input the antichain has strictly increasing outputs,
            // which enables a binary-search evaluate.
            std::sort(fr.points_.begin(), fr.points_.end(),
                      [](const Point& a, const Point& b) { return a.x[0] < b.x[0]; });
        }
        return fr;
    }

    double evaluate(const std::vector<double>& x) const {
        if (x.size() != d_) throw dimension_mismatch("query dimension does not match frontier");
        if (d_ == 1) {
            // Largest stored input <= x; outputs increase with input.
            auto it = std::upper_bound(points_.begin(), points_.end(), x[0],
                                       [](double q, const Point& p) { return q < p.x[0]; });
            if (it == points_.begin()) return 0.0;
            return std::prev(it)->y;
        }
        // Points are kept in decreasing-output order, so the first dominated
        // stored point gives the maximum.
        for (const Point& p : points_) {
            if (entrywise_leq(p.x, x)) return p.y;
        }
        return 0.0;
    }

    std::size_t dim() const { return d_; }
    const std::vector<Point>& points() const { return points_; }

private:
    std::size_t d_ = 0;
    std::vector<Point> points_;
};

/// Quantile variant of the frontier value at x: type-1 empirical quantile of
/// the outputs of all sample points dominated by x. q = 1 reproduces
/// FrontierEstimate::evaluate exactly; an empty conditioning set gives 0.
inline double evaluate_quantile(std::span<const Observation> obs, const std::vector<double>& x,
                                double q) {
    if (obs.empty()) throw empty_input("cannot evaluate a quantile frontier on zero points");
    if (!(q > 0.0 && q <= 1.0)) throw validation_error("quantile level must lie in (0,1]");
    const std::size_t d = obs.front().x.size();
    if (x.size() != d) throw dimension_mismatch("query dimension does not match sample");
    std::vector<double> ys;
    for (const Observation& o : obs) {
        if (o.x.size() != d) throw dimension_mismatch("inconsistent input dimension");
        if (entrywise_leq(o.x, x)) ys.push_back(o.y);
    }
    if (ys.empty()) return 0.0;
    std::sort(ys.begin(), ys.end());
    return detail::quantile_type1_sorted(ys, q);
}

}  // namespace fcp
