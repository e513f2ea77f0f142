// learners.hpp
//
// The two realizable learning tasks: conjunctions of boolean literals over n
// variables (finite class, |H| = 3^n) and thresholds h_a(x) = [x < a] on
// [0, 1] (VC dimension 1). Data is uniform in both cases, which gives the
// generalization losses closed forms.
#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <vector>

#include "paclab/rng.hpp"

namespace paclab {

/// Fixed-length bit vector packed into 64-bit words. Bits past n are zero.
class BitVector {
public:
    BitVector() = default;
    explicit BitVector(std::size_t n, bool fill = false)
        : n_(n), words_((n + 63) / 64, fill ? ~std::uint64_t{0} : 0) {
        trim();
    }
    BitVector(std::initializer_list<int> bits) : BitVector(bits.size()) {
        std::size_t i = 0;
        for (int b : bits) set(i++, b != 0);
    }

    std::size_t size() const noexcept { return n_; }
    bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1U; }
    void set(std::size_t i, bool v) {
        const std::uint64_t bit = std::uint64_t{1} << (i % 64);
        if (v) words_[i / 64] |= bit;
        else words_[i / 64] &= ~bit;
    }
    std::size_t count() const noexcept {
        std::size_t c = 0;
        for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }
    bool any() const noexcept {
        return std::any_of(words_.begin(), words_.end(), [](auto w) { return w != 0; });
    }
    std::span<const std::uint64_t> words() const noexcept { return words_; }
    std::span<std::uint64_t> words() noexcept { return words_; }

    /// Clears bits past n in the last word.
    void trim() noexcept {
        if (n_ % 64 != 0 && !words_.empty()) {
            words_.back() &= (std::uint64_t{1} << (n_ % 64)) - 1;
        }
    }

    friend bool operator==(const BitVector&, const BitVector&) = default;

private:
    std::size_t n_ = 0;
    std::vector<std::uint64_t> words_;
};

// ---------------------------------------------------------------------------
// Conjunctions
// ---------------------------------------------------------------------------

enum class LiteralState : std::uint8_t { Absent, IncludesPositive, IncludesNegated, IncludesBoth };

/// A conjunction stored as two literal masks: bit i of positive() means x_i
/// is in the formula, bit i of negated() means !x_i is. Both bits set is the
/// contradictory pair x_i & !x_i that the learner starts from.
class ConjunctionHypothesis {
public:
    /// All variables absent: the always-true formula.
    static ConjunctionHypothesis empty(std::size_t n) {
        return ConjunctionHypothesis(BitVector(n), BitVector(n));
    }
    /// x_1 & !x_1 & ... & x_n & !x_n: satisfied by nothing.
    static ConjunctionHypothesis initial(std::size_t n) {
        return ConjunctionHypothesis(BitVector(n, true), BitVector(n, true));
    }

    std::size_t num_vars() const noexcept { return positive_.size(); }
    const BitVector& positive() const noexcept { return positive_; }
    const BitVector& negated() const noexcept { return negated_; }
    BitVector& positive() noexcept { return positive_; }
    BitVector& negated() noexcept { return negated_; }

    LiteralState state(std::size_t i) const {
        const bool p = positive_.test(i), q = negated_.test(i);
        if (p && q) return LiteralState::IncludesBoth;
        if (p) return LiteralState::IncludesPositive;
        if (q) return LiteralState::IncludesNegated;
        return LiteralState::Absent;
    }
    void set_state(std::size_t i, LiteralState s) {
        positive_.set(i, s == LiteralState::IncludesPositive || s == LiteralState::IncludesBoth);
        negated_.set(i, s == LiteralState::IncludesNegated || s == LiteralState::IncludesBoth);
    }

    std::size_t literal_count() const noexcept { return positive_.count() + negated_.count(); }

    bool contradictory() const noexcept {
        auto p = positive_.words();
        auto q = negated_.words();
        for (std::size_t w = 0; w < p.size(); ++w) {
            if (p[w] & q[w]) return true;
        }
        return false;
    }

    friend bool operator==(const ConjunctionHypothesis&, const ConjunctionHypothesis&) = default;

private:
    ConjunctionHypothesis(BitVector pos, BitVector neg)
        : positive_(std::move(pos)), negated_(std::move(neg)) {}

    BitVector positive_;
    BitVector negated_;
};

struct BooleanExample {
    BitVector bits;
    bool positive = false;
};

/// Each variable independently positive, negated or absent with probability
/// 1/3, which is the uniform distribution over the 3^n consistent formulas.
inline ConjunctionHypothesis random_conjunction_target(std::size_t n, Rng& rng) {
    if (n < 1) throw std::invalid_argument("random_conjunction_target: n must be >= 1");
    auto h = ConjunctionHypothesis::empty(n);
    for (std::size_t i = 0; i < n; ++i) {
        switch (rng.below(3)) {
            case 0: h.set_state(i, LiteralState::IncludesPositive); break;
            case 1: h.set_state(i, LiteralState::IncludesNegated); break;
            default: break;
        }
    }
    return h;
}

/// Word-level satisfaction test; caller guarantees matching sizes.
inline bool satisfies(const ConjunctionHypothesis& h, const BitVector& bits) noexcept {
    auto p = h.positive().words();
    auto q = h.negated().words();
    auto b = bits.words();
    for (std::size_t w = 0; w < b.size(); ++w) {
        if ((p[w] & ~b[w]) != 0 || (q[w] & b[w]) != 0) return false;
    }
    return true;
}

inline bool label_conjunction(const ConjunctionHypothesis& h, const BitVector& bits) {
    if (bits.size() != h.num_vars()) {
        throw std::invalid_argument("label_conjunction: assignment length does not match n");
    }
    return satisfies(h, bits);
}

inline BooleanExample sample_conjunction_example(const ConjunctionHypothesis& target, Rng& rng) {
    BooleanExample ex{BitVector(target.num_vars()), false};
    for (auto& w : ex.bits.words()) w = rng.next_u64();
    ex.bits.trim();
    ex.positive = satisfies(target, ex.bits);
    return ex;
}

/// Elimination learner. Starts from the all-contradictory formula; each
/// positive example rules out x_i where its bit is 0 and !x_i where it is 1.
/// Negative examples carry no usable information and are skipped.
class ConjunctionLearner {
public:
    explicit ConjunctionLearner(std::size_t n) : h_(ConjunctionHypothesis::initial(n)) {}

    void observe(const BooleanExample& ex) {
        if (ex.bits.size() != h_.num_vars()) {
            throw std::invalid_argument("ConjunctionLearner: example length does not match n");
        }
        if (!ex.positive) return;
        auto p = h_.positive().words();
        auto q = h_.negated().words();
        auto b = ex.bits.words();
        for (std::size_t w = 0; w < b.size(); ++w) {
            p[w] &= b[w];
            q[w] &= ~b[w];
        }
    }

    const ConjunctionHypothesis& hypothesis() const noexcept { return h_; }

private:
    ConjunctionHypothesis h_;
};

inline ConjunctionHypothesis learn_conjunction(std::span<const BooleanExample> examples,
                                               std::size_t n) {
    ConjunctionLearner learner(n);
    for (const auto& ex : examples) learner.observe(ex);
    return learner.hypothesis();
}

namespace detail {
/// P(uniform x satisfies the literal set given by the masks) = 2^-|S|, or 0
/// if the set holds a contradictory pair.
inline double satisfy_probability(std::span<const std::uint64_t> pos,
                                  std::span<const std::uint64_t> neg) {
    int literals = 0;
    for (std::size_t w = 0; w < pos.size(); ++w) {
        if (pos[w] & neg[w]) return 0.0;
        literals += std::popcount(pos[w]) + std::popcount(neg[w]);
    }
    return std::ldexp(1.0, -literals);
}
}  // namespace detail

/// Exact loss under uniform data:
///   P(target) + P(learned) - 2 P(target & learned).
/// Each term is a dyadic rational, so the result is exact for n up to ~1000.
inline double conjunction_loss_exact(const ConjunctionHypothesis& target,
                                     const ConjunctionHypothesis& learned) {
    if (target.num_vars() != learned.num_vars()) {
        throw std::invalid_argument("conjunction_loss_exact: n mismatch");
    }
    const double pt = detail::satisfy_probability(target.positive().words(), target.negated().words());
    const double pl = detail::satisfy_probability(learned.positive().words(), learned.negated().words());
    const auto tp = target.positive().words(), tn = target.negated().words();
    const auto lp = learned.positive().words(), ln = learned.negated().words();
    std::vector<std::uint64_t> up(tp.size()), un(tp.size());
    for (std::size_t w = 0; w < tp.size(); ++w) {
        up[w] = tp[w] | lp[w];
        un[w] = tn[w] | ln[w];
    }
    const double pj = detail::satisfy_probability(up, un);
    return pt + pl - 2.0 * pj;
}

inline constexpr std::size_t kEnumerationMaxVars = 20;

/// Brute-force disagreement rate over all 2^n assignments.
inline double conjunction_loss_enumerate(const ConjunctionHypothesis& target,
                                         const ConjunctionHypothesis& learned) {
    const std::size_t n = target.num_vars();
    if (learned.num_vars() != n) throw std::invalid_argument("conjunction_loss_enumerate: n mismatch");
    if (n > kEnumerationMaxVars) throw std::invalid_argument("conjunction_loss_enumerate: n > 20");
    const std::uint64_t total = std::uint64_t{1} << n;
    std::uint64_t disagree = 0;
    BitVector bits(n);
    for (std::uint64_t x = 0; x < total; ++x) {
        for (std::size_t i = 0; i < n; ++i) bits.set(i, (x >> i) & 1U);
        if (label_conjunction(target, bits) != label_conjunction(learned, bits)) ++disagree;
    }
    return static_cast<double>(disagree) / static_cast<double>(total);
}

// ---------------------------------------------------------------------------
// Thresholds
// ---------------------------------------------------------------------------

/// h_a(x) = 1 iff x < a.
struct ThresholdHypothesis {
    double a = 0.0;

    bool operator()(double x) const noexcept { return x < a; }
    friend bool operator==(const ThresholdHypothesis&, const ThresholdHypothesis&) = default;
};

struct LabeledPoint {
    double x = 0.0;
    bool label = false;
};

inline ThresholdHypothesis random_threshold_target(Rng& rng) { return {rng.uniform01()}; }

inline LabeledPoint sample_threshold_point(const ThresholdHypothesis& target, Rng& rng) {
    const double x = rng.uniform01();
    return {x, target(x)};
}

/// Smallest x among the points labeled 0, or 1.0 when there is none.
inline ThresholdHypothesis learn_threshold(std::span<const LabeledPoint> points) {
    double a = 1.0;
    for (const auto& p : points) {
        if (!p.label) a = std::min(a, p.x);
    }
    return {a};
}

/// Length of the disagreement interval under uniform data.
inline double threshold_loss_exact(const ThresholdHypothesis& target,
                                   const ThresholdHypothesis& learned) noexcept {
    return std::abs(learned.a - target.a);
}

}  // namespace paclab
