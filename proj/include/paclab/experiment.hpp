// experiment.hpp
//
// Learning-curve experiment: for every m in the schedule, the empirical
// distribution P_m from run_trials next to the discretized bound Q_m.
// Conjunctions over n variables are compared against the finite-class bound
// with |H| = 3^n; thresholds against the VC bound with d = 1.
#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "paclab/analysis.hpp"
#include "paclab/empirics.hpp"
#include "paclab/theory.hpp"

namespace paclab {

struct Schedule {
    std::uint64_t start = 25;
    std::uint64_t step = 25;
    std::uint64_t max = 1250;

    std::vector<std::uint64_t> values() const {
        std::vector<std::uint64_t> ms;
        for (std::uint64_t m = start; m <= max; m += step) ms.push_back(m);
        return ms;
    }
    friend bool operator==(const Schedule&, const Schedule&) = default;
};

struct ExperimentConfig {
    Task task = ConjunctionTask{10};
    std::size_t slots = 100;
    std::uint64_t trials = 1000;
    Schedule schedule{};
    std::uint64_t seed = 1;
    GroundTruthMode gt_mode = GroundTruthMode::PerTrial;
    /// VC dimension used for the threshold task's bound.
    std::uint64_t vc_dim = 1;

    static ExperimentConfig conjunction_defaults() { return {}; }

    static ExperimentConfig threshold_defaults() {
        ExperimentConfig c;
        c.task = ThresholdTask{};
        c.schedule = {20, 20, 1000};
        return c;
    }

    void validate() const {
        if (slots < 2) throw std::invalid_argument("slots must be >= 2");
        if (trials < 1) throw std::invalid_argument("trials must be >= 1");
        if (schedule.step < 1) throw std::invalid_argument("m-step must be >= 1");
        if (schedule.start < 1) throw std::invalid_argument("m-start must be >= 1");
        if (schedule.max < schedule.start) throw std::invalid_argument("m-max must be >= m-start");
        if (vc_dim < 1) throw std::invalid_argument("vc-dim must be >= 1");
        if (auto* c = std::get_if<ConjunctionTask>(&task); c && c->n < 1) {
            throw std::invalid_argument("n must be >= 1");
        }
    }

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

inline BoundSpec theory_spec(const ExperimentConfig& config, std::uint64_t m) {
    if (auto* c = std::get_if<ConjunctionTask>(&config.task)) {
        return BoundSpec::finite_h_log(static_cast<double>(c->n) * std::log(3.0), m);
    }
    return BoundSpec::vc(config.vc_dim, m);
}

struct ExperimentResult {
    std::vector<CurveRecord> records;
    std::vector<CurvePoint> curve;
};

inline ExperimentResult run_experiment(const ExperimentConfig& config, unsigned threads = 1) {
    config.validate();
    ExperimentResult result;
    const TrialOptions options{config.gt_mode, threads};
    for (std::uint64_t m : config.schedule.values()) {
        const TrialBatch batch = run_trials(config.task, m, config.trials, config.seed, options);
        result.records.push_back(CurveRecord{m, histogram(batch.losses, config.slots),
                                             discretize_bound(theory_spec(config, m), config.slots)});
    }
    result.curve = build_curve(result.records);
    return result;
}

}  // namespace paclab
