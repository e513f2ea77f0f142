// analysis.hpp
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "paclab/distribution.hpp"

namespace paclab {

/// Substitute for a zero q_i where p_i > 0. With this floor, two disjoint
/// distributions score log2(1 / 2e-16) ~= 52.15 bits.
inline constexpr double kKlFloor = 2e-16;

/// D_KL(p || q) in bits. Slots with p_i = 0 contribute nothing; q_i is
/// replaced by max(q_i, floor) and q is not renormalized afterwards.
inline double kl_divergence(const DiscreteDistribution& p, const DiscreteDistribution& q,
                            double floor = kKlFloor) {
    if (p.num_slots() != q.num_slots()) throw std::invalid_argument("kl_divergence: slot count mismatch");
    double kl = 0.0;
    for (std::size_t i = 0; i < p.num_slots(); ++i) {
        const double pi = p[i];
        if (pi <= 0.0) continue;
        const double qi = q[i] > floor ? q[i] : floor;
        kl += pi * std::log2(pi / qi);
    }
    return kl;
}

/// Moments use the slot midpoint (i + 0.5) / l as each slot's value, so
/// they are quantized to within 1 / (2l) of the underlying continuous ones.
inline double dist_mean(const DiscreteDistribution& d) {
    double mean = 0.0;
    for (std::size_t i = 0; i < d.num_slots(); ++i) mean += d[i] * d.slot_mid(i);
    return mean;
}

inline double dist_std(const DiscreteDistribution& d) {
    const double mean = dist_mean(d);
    double var = 0.0;
    for (std::size_t i = 0; i < d.num_slots(); ++i) {
        const double dev = d.slot_mid(i) - mean;
        var += d[i] * dev * dev;
    }
    return std::sqrt(var);
}

struct MonotoneViolation {
    std::size_t index;  // step from values[index] to values[index + 1]
    double rise;
};

struct MonotonicityReport {
    std::vector<MonotoneViolation> violations;
    double max_rise = 0.0;
    double fraction_monotone_steps = 1.0;
};

/// Step i violates local monotonicity when values[i+1] > values[i] + tol[i].
inline MonotonicityReport check_monotone(std::span<const double> values,
                                         std::span<const double> step_tolerances) {
    if (values.size() < 2) throw std::invalid_argument("check_monotone: need at least 2 values");
    if (step_tolerances.size() != values.size() - 1) {
        throw std::invalid_argument("check_monotone: need one tolerance per step");
    }
    MonotonicityReport report;
    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
        const double rise = values[i + 1] - values[i];
        if (rise > step_tolerances[i]) {
            report.violations.push_back({i, rise});
            report.max_rise = std::max(report.max_rise, rise);
        }
    }
    const double steps = static_cast<double>(values.size() - 1);
    report.fraction_monotone_steps = 1.0 - static_cast<double>(report.violations.size()) / steps;
    return report;
}

inline MonotonicityReport check_monotone(std::span<const double> values, double tolerance = 0.0) {
    if (tolerance < 0.0) throw std::invalid_argument("check_monotone: tolerance must be >= 0");
    const std::vector<double> tol(values.empty() ? 0 : values.size() - 1, tolerance);
    return check_monotone(values, tol);
}

/// True when every prefix sum (CDF at each slot edge) of later is at least
/// that of earlier, i.e. the later distribution sits to the left.
inline bool stochastic_dominance(const DiscreteDistribution& earlier,
                                 const DiscreteDistribution& later, double tol = 1e-12) {
    if (earlier.num_slots() != later.num_slots()) {
        throw std::invalid_argument("stochastic_dominance: slot count mismatch");
    }
    double ce = 0.0, cl = 0.0;
    for (std::size_t i = 0; i < earlier.num_slots(); ++i) {
        ce += earlier[i];
        cl += later[i];
        if (cl < ce - tol) return false;
    }
    return true;
}

struct CurvePoint {
    std::uint64_t m = 0;
    double mean_p = 0.0;
    double std_p = 0.0;
    double mean_q = 0.0;
    double std_q = 0.0;
    double kl = 0.0;
};

struct CurveRecord {
    std::uint64_t m;
    DiscreteDistribution p;
    DiscreteDistribution q;
};

inline CurvePoint curve_point(std::uint64_t m, const DiscreteDistribution& p,
                              const DiscreteDistribution& q) {
    return {m, dist_mean(p), dist_std(p), dist_mean(q), dist_std(q), kl_divergence(p, q)};
}

inline std::vector<CurvePoint> build_curve(std::span<const CurveRecord> records) {
    if (records.empty()) throw std::invalid_argument("build_curve: no records");
    const std::size_t slots = records.front().p.num_slots();
    std::vector<CurvePoint> curve;
    curve.reserve(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        if (i > 0 && r.m <= records[i - 1].m) {
            throw std::invalid_argument("build_curve: records must be strictly increasing in m");
        }
        if (r.p.num_slots() != slots || r.q.num_slots() != slots) {
            throw std::invalid_argument("build_curve: inconsistent slot count");
        }
        curve.push_back(curve_point(r.m, r.p, r.q));
    }
    return curve;
}

/// Per-step allowance for empirical curves: two standard errors of the mean,
/// 2 * s / sqrt(k), taking s as the larger std_p of the two endpoints.
inline std::vector<double> standard_error_tolerances(std::span<const CurvePoint> curve,
                                                     std::uint64_t k) {
    std::vector<double> tol;
    if (curve.size() < 2) return tol;
    const double root_k = std::sqrt(static_cast<double>(k));
    for (std::size_t i = 0; i + 1 < curve.size(); ++i) {
        tol.push_back(2.0 * std::max(curve[i].std_p, curve[i + 1].std_p) / root_k);
    }
    return tol;
}

}  // namespace paclab
