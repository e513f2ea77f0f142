// distribution.hpp
#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace paclab {

/// Probability masses over l equal-width slots of [0, 1]. Slot i covers
/// [i/l, (i+1)/l); the last slot is closed at 1.0. Used for both the
/// empirical loss distribution P_m and the discretized bound Q_m.
class DiscreteDistribution {
public:
    static constexpr double kSumTolerance = 1e-9;

    explicit DiscreteDistribution(std::vector<double> masses) : masses_(std::move(masses)) {
        if (masses_.size() < 2) {
            throw std::invalid_argument("DiscreteDistribution: need at least 2 slots");
        }
        double sum = 0.0;
        for (double v : masses_) {
            if (!(v >= 0.0) || !std::isfinite(v)) {
                throw std::invalid_argument("DiscreteDistribution: negative or non-finite mass");
            }
            sum += v;
        }
        if (std::abs(sum - 1.0) > kSumTolerance) {
            throw std::invalid_argument("DiscreteDistribution: masses sum to " +
                                        std::to_string(sum));
        }
    }

    std::size_t num_slots() const noexcept { return masses_.size(); }
    const std::vector<double>& masses() const noexcept { return masses_; }
    double operator[](std::size_t i) const { return masses_.at(i); }

    double slot_lo(std::size_t i) const noexcept {
        return static_cast<double>(i) / static_cast<double>(masses_.size());
    }
    double slot_hi(std::size_t i) const noexcept {
        return static_cast<double>(i + 1) / static_cast<double>(masses_.size());
    }
    double slot_mid(std::size_t i) const noexcept {
        return (static_cast<double>(i) + 0.5) / static_cast<double>(masses_.size());
    }

    friend bool operator==(const DiscreteDistribution&, const DiscreteDistribution&) = default;

private:
    std::vector<double> masses_;
};

/// Slot containing x under the [i/l, (i+1)/l) convention, with x = 1 going to
/// the last slot. The floor estimate is corrected against the exact edge
/// values i/l so that a value equal to an edge always lands above it.
inline std::size_t slot_of(double x, std::size_t num_slots) {
    const double l = static_cast<double>(num_slots);
    if (x >= 1.0) return num_slots - 1;
    if (x <= 0.0) return 0;
    auto idx = static_cast<std::size_t>(std::floor(x * l));
    if (idx >= num_slots) idx = num_slots - 1;
    if (idx + 1 < num_slots && x >= static_cast<double>(idx + 1) / l) ++idx;
    if (idx > 0 && x < static_cast<double>(idx) / l) --idx;
    return idx;
}

}  // namespace paclab
