// empirics.hpp
//
// Repeated seeded trials producing the empirical loss distribution P_m.
//
// Trial i at sample size m draws everything from its own engine seeded with
// derive_seed(master_seed, m, i): ground truth (per-trial mode), the m
// training instances, then the exact loss. Results land at index i, so the
// output does not depend on how trials are spread over threads.
#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <span>
#include <thread>
#include <type_traits>
#include <variant>
#include <vector>

#include "paclab/distribution.hpp"
#include "paclab/learners.hpp"
#include "paclab/rng.hpp"

namespace paclab {

struct ConjunctionTask {
    std::size_t n = 10;
    friend bool operator==(const ConjunctionTask&, const ConjunctionTask&) = default;
};
struct ThresholdTask {
    friend bool operator==(const ThresholdTask&, const ThresholdTask&) = default;
};
using Task = std::variant<ConjunctionTask, ThresholdTask>;

inline std::string task_name(const Task& task) {
    return std::holds_alternative<ConjunctionTask>(task) ? "conjunction" : "threshold";
}

enum class GroundTruthMode { PerTrial, Fixed };

struct TrialOptions {
    GroundTruthMode gt_mode = GroundTruthMode::PerTrial;
    /// 0 picks std::thread::hardware_concurrency().
    unsigned threads = 1;
};

struct TrialBatch {
    Task task;
    std::uint64_t m = 0;
    std::uint64_t k = 0;
    std::uint64_t master_seed = 0;
    std::vector<double> losses;
};

namespace detail {

inline double conjunction_trial(std::size_t n, std::uint64_t m, Rng& rng,
                                const ConjunctionHypothesis* fixed_target) {
    const ConjunctionHypothesis target =
        fixed_target ? *fixed_target : random_conjunction_target(n, rng);
    ConjunctionLearner learner(n);
    for (std::uint64_t j = 0; j < m; ++j) learner.observe(sample_conjunction_example(target, rng));
    return conjunction_loss_exact(target, learner.hypothesis());
}

inline double threshold_trial(std::uint64_t m, Rng& rng, const ThresholdHypothesis* fixed_target) {
    const ThresholdHypothesis target = fixed_target ? *fixed_target : random_threshold_target(rng);
    // Running form of learn_threshold: min over negatives, 1.0 if none.
    double a_hat = 1.0;
    for (std::uint64_t j = 0; j < m; ++j) {
        const LabeledPoint p = sample_threshold_point(target, rng);
        if (!p.label) a_hat = std::min(a_hat, p.x);
    }
    return threshold_loss_exact(target, {a_hat});
}

template <class Fn>
void parallel_for(std::uint64_t count, unsigned threads, Fn&& fn) {
    if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, count));
    if (threads <= 1) {
        for (std::uint64_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            for (std::uint64_t i = t; i < count; i += threads) fn(i);
        });
    }
}

}  // namespace detail

inline TrialBatch run_trials(const Task& task, std::uint64_t m, std::uint64_t k,
                             std::uint64_t master_seed, const TrialOptions& options = {}) {
    if (m < 1) throw std::invalid_argument("run_trials: m must be >= 1");
    if (k < 1) throw std::invalid_argument("run_trials: k must be >= 1");
    if (auto* c = std::get_if<ConjunctionTask>(&task); c && c->n < 1) {
        throw std::invalid_argument("run_trials: conjunction task needs n >= 1");
    }

    TrialBatch batch{task, m, k, master_seed, std::vector<double>(k)};
    const bool fixed = options.gt_mode == GroundTruthMode::Fixed;

    std::visit(
        [&](const auto& t) {
            using T = std::decay_t<decltype(t)>;
            if constexpr (std::is_same_v<T, ConjunctionTask>) {
                std::vector<ConjunctionHypothesis> gt;
                if (fixed) {
                    Rng gt_rng(derive_seed(master_seed, kGroundTruthStream, 0));
                    gt.push_back(random_conjunction_target(t.n, gt_rng));
                }
                detail::parallel_for(k, options.threads, [&](std::uint64_t i) {
                    Rng rng(derive_seed(master_seed, m, i));
                    batch.losses[i] = detail::conjunction_trial(t.n, m, rng, fixed ? &gt[0] : nullptr);
                });
            } else {
                ThresholdHypothesis gt{};
                if (fixed) {
                    Rng gt_rng(derive_seed(master_seed, kGroundTruthStream, 0));
                    gt = random_threshold_target(gt_rng);
                }
                detail::parallel_for(k, options.threads, [&](std::uint64_t i) {
                    Rng rng(derive_seed(master_seed, m, i));
                    batch.losses[i] = detail::threshold_trial(m, rng, fixed ? &gt : nullptr);
                });
            }
        },
        task);
    return batch;
}

/// Frequency table of losses over l slots; a loss of exactly 1 goes to the
/// last slot.
inline DiscreteDistribution histogram(std::span<const double> losses, std::size_t num_slots) {
    if (losses.empty()) throw std::invalid_argument("histogram: empty loss list");
    if (num_slots < 2) throw std::invalid_argument("histogram: need at least 2 slots");
    std::vector<std::uint64_t> counts(num_slots, 0);
    for (double x : losses) {
        if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("histogram: loss outside [0, 1]");
        ++counts[slot_of(x, num_slots)];
    }
    std::vector<double> masses(num_slots);
    const double total = static_cast<double>(losses.size());
    for (std::size_t i = 0; i < num_slots; ++i) masses[i] = static_cast<double>(counts[i]) / total;
    return DiscreteDistribution(std::move(masses));
}

}  // namespace paclab
