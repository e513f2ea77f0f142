// theory.hpp
//
// Lower-bound loss distributions for ERM in the realizable PAC setting.
//
// Both hypothesis-class families share one shape. With a log-capacity C
// (C = ln|H| for a finite class, C = d ln(e m / d) for VC dimension d):
//
//   F_m(eps) = 0                    eps < C/m
//            = 1 - exp(C - m eps)   C/m <= eps < 1
//            = 1                    eps >= 1
//
// F_m splits into a continuous part with density m exp(C - m eps) on
// [C/m, 1) and an atom of weight exp(C - m) at eps = 1. The atom is exposed
// through point_mass(); density() refuses eps = 1 rather than returning an
// infinite value.
//
// Everything is evaluated from C, never from |H| itself, since |H| = 3^n
// overflows long before n gets interesting.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "paclab/distribution.hpp"

namespace paclab {

enum class BoundKind { FiniteH, FiniteVC };

class BoundSpec {
public:
    /// |H| given directly; must be >= 1.
    static BoundSpec finite_h(double h_size, std::uint64_t m) {
        if (!(h_size >= 1.0) || !std::isfinite(h_size)) {
            throw std::invalid_argument("BoundSpec: |H| must be a finite value >= 1");
        }
        return finite_h_log(std::log(h_size), m);
    }

    /// |H| given as ln|H| >= 0.
    static BoundSpec finite_h_log(double log_h_size, std::uint64_t m) {
        if (!(log_h_size >= 0.0) || !std::isfinite(log_h_size)) {
            throw std::invalid_argument("BoundSpec: ln|H| must be finite and >= 0");
        }
        check_m(m);
        return BoundSpec(BoundKind::FiniteH, log_h_size, 0, m);
    }

    static BoundSpec vc(std::uint64_t vc_dim, std::uint64_t m) {
        if (vc_dim < 1) throw std::invalid_argument("BoundSpec: VC dimension must be >= 1");
        check_m(m);
        return BoundSpec(BoundKind::FiniteVC, 0.0, vc_dim, m);
    }

    BoundKind kind() const noexcept { return kind_; }
    double log_h_size() const noexcept { return log_h_size_; }
    std::uint64_t vc_dim() const noexcept { return vc_dim_; }
    std::uint64_t m() const noexcept { return m_; }

    /// Same family and class size, different sample size.
    BoundSpec with_m(std::uint64_t m) const {
        check_m(m);
        BoundSpec s = *this;
        s.m_ = m;
        return s;
    }

    /// ln|H|, or d ln(e m / d) (the log of the Sauer growth surrogate).
    double log_capacity() const noexcept {
        if (kind_ == BoundKind::FiniteH) return log_h_size_;
        const double d = static_cast<double>(vc_dim_);
        const double m = static_cast<double>(m_);
        return d * (1.0 + std::log(m) - std::log(d));
    }

    friend bool operator==(const BoundSpec&, const BoundSpec&) = default;

private:
    BoundSpec(BoundKind kind, double log_h, std::uint64_t d, std::uint64_t m)
        : kind_(kind), log_h_size_(log_h), vc_dim_(d), m_(m) {}

    static void check_m(std::uint64_t m) {
        if (m < 1) throw std::invalid_argument("BoundSpec: sample size m must be >= 1");
    }

    BoundKind kind_;
    double log_h_size_;
    std::uint64_t vc_dim_;
    std::uint64_t m_;
};

/// Left edge of the middle branch, C/m. The edge itself belongs to the
/// middle branch.
inline double cutoff(const BoundSpec& spec) noexcept {
    return spec.log_capacity() / static_cast<double>(spec.m());
}

/// F_m(eps) for either family, clamped to [0, 1].
inline double bound_cdf(const BoundSpec& spec, double eps) noexcept {
    if (eps >= 1.0) return 1.0;
    if (eps < cutoff(spec)) return 0.0;
    const double v = 1.0 - std::exp(spec.log_capacity() - static_cast<double>(spec.m()) * eps);
    return std::clamp(v, 0.0, 1.0);
}

/// Weight of the atom at eps = 1: exp(C - m) clamped to [0, 1]. When the
/// cutoff is at or beyond 1 the whole distribution is this atom.
inline double bound_point_mass(const BoundSpec& spec) noexcept {
    return std::min(1.0, std::exp(spec.log_capacity() - static_cast<double>(spec.m())));
}

/// Density of the continuous part. Throws std::domain_error at eps == 1.
inline double bound_density(const BoundSpec& spec, double eps) {
    if (eps == 1.0) {
        throw std::domain_error("bound density is undefined at eps = 1; use the point mass");
    }
    if (eps > 1.0 || eps < cutoff(spec)) return 0.0;
    const double m = static_cast<double>(spec.m());
    return m * std::exp(spec.log_capacity() - m * eps);
}

namespace detail {
inline void require_kind(const BoundSpec& spec, BoundKind kind) {
    if (spec.kind() != kind) throw std::invalid_argument("BoundSpec has the wrong kind");
}
}  // namespace detail

inline double finite_h_cdf(const BoundSpec& spec, double eps) {
    detail::require_kind(spec, BoundKind::FiniteH);
    return bound_cdf(spec, eps);
}
inline double finite_h_point_mass(const BoundSpec& spec) {
    detail::require_kind(spec, BoundKind::FiniteH);
    return bound_point_mass(spec);
}
inline double finite_h_density(const BoundSpec& spec, double eps) {
    detail::require_kind(spec, BoundKind::FiniteH);
    return bound_density(spec, eps);
}
inline double vc_cdf(const BoundSpec& spec, double eps) {
    detail::require_kind(spec, BoundKind::FiniteVC);
    return bound_cdf(spec, eps);
}
inline double vc_point_mass(const BoundSpec& spec) {
    detail::require_kind(spec, BoundKind::FiniteVC);
    return bound_point_mass(spec);
}
inline double vc_density(const BoundSpec& spec, double eps) {
    detail::require_kind(spec, BoundKind::FiniteVC);
    return bound_density(spec, eps);
}

namespace detail {
inline void check_eps_delta(double eps, double delta) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in (0, 1)");
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
}

/// Ceiling that does not bump a value sitting on an integer up by one
/// because of rounding noise in the division.
inline double stable_ceil(double x) {
    const double r = std::round(x);
    if (std::abs(x - r) <= 1e-9 * std::max(1.0, std::abs(x))) return r;
    return std::ceil(x);
}
}  // namespace detail

/// ceil(ln(|H| / delta) / eps), with |H| passed as ln|H|.
inline std::uint64_t sample_complexity_finite_log(double log_h_size, double eps, double delta) {
    detail::check_eps_delta(eps, delta);
    if (!(log_h_size >= 0.0)) throw std::invalid_argument("ln|H| must be >= 0");
    const double m = detail::stable_ceil((log_h_size - std::log(delta)) / eps);
    return static_cast<std::uint64_t>(std::max(1.0, m));
}

inline std::uint64_t sample_complexity_finite(double h_size, double eps, double delta) {
    if (!(h_size >= 1.0)) throw std::invalid_argument("|H| must be >= 1");
    return sample_complexity_finite_log(std::log(h_size), eps, delta);
}

class NonConvergence : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr int kSampleComplexityIterationCap = 10000;

/// The VC bound has m on both sides: m >= ln((e m / d)^d / delta) / eps.
/// Iterates m <- ceil(rhs(m)) from m = d. rhs is increasing and grows like
/// log m, so the sequence rises monotonically to the smallest fixed point
/// at or above d.
inline std::uint64_t sample_complexity_vc(std::uint64_t vc_dim, double eps, double delta) {
    detail::check_eps_delta(eps, delta);
    if (vc_dim < 1) throw std::invalid_argument("VC dimension must be >= 1");
    const double d = static_cast<double>(vc_dim);
    double m = d;
    for (int it = 0; it < kSampleComplexityIterationCap; ++it) {
        const double rhs = (d * (1.0 + std::log(m) - std::log(d)) - std::log(delta)) / eps;
        const double next = std::max(1.0, detail::stable_ceil(rhs));
        if (!std::isfinite(next) || next > 9.0e15) break;
        if (next == m) return static_cast<std::uint64_t>(m);
        m = next;
    }
    throw NonConvergence("sample_complexity_vc: fixed-point iteration did not settle");
}

/// Q_m: slot i receives F(hi_i) - F(lo_i). Slot 0 also absorbs any mass the
/// bound places below 0 (possible for VC when m < d/e), and the last slot
/// receives the atom at 1 since its upper edge is closed.
inline DiscreteDistribution discretize_bound(const BoundSpec& spec, std::size_t num_slots) {
    if (num_slots < 2) throw std::invalid_argument("discretize_bound: need at least 2 slots");
    const double l = static_cast<double>(num_slots);
    std::vector<double> masses(num_slots);
    double prev = 0.0;
    for (std::size_t i = 0; i + 1 < num_slots; ++i) {
        const double next = bound_cdf(spec, static_cast<double>(i + 1) / l);
        masses[i] = next - prev;
        prev = next;
    }
    masses[num_slots - 1] = 1.0 - prev;
    return DiscreteDistribution(std::move(masses));
}

}  // namespace paclab
