#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "arviz/dataset.hpp"
#include "arviz/expert.hpp"
#include "arviz/policy.hpp"
#include "arviz/rng.hpp"
#include "arviz/scenario.hpp"
#include "arviz/simulation.hpp"

namespace arviz {

enum class BetaSchedule : std::uint8_t { Linear, Exponential };
std::string_view to_string(BetaSchedule s);
std::optional<BetaSchedule> parse_beta_schedule(std::string_view s);

struct TrainerParams {
    int iterations = 240;         // J
    int pairsPerIteration = 25;   // snapshot events per iteration
    double snapshotInterval = 4.0;  // seconds of sim time between events
    BetaSchedule schedule = BetaSchedule::Linear;
    double betaBase = 0.9;        // p for the exponential schedule
    std::uint64_t rngSeed = 1;    // mixing stream
    std::uint64_t trialSeedBase = 1000;  // trial k uses trialSeedBase + k
    int checkpointEvery = 40;     // 0 disables checkpoints
    PolicyKind learner = PolicyKind::TabularMajority;
    double expertTimeout = 300.0;  // wall-clock seconds to wait for an absent expert

    bool operator==(const TrainerParams&) const = default;
};

/// Throws ConfigError on invalid parameters.
void validate(const TrainerParams& params, double tickDuration);

/// Expert-mixing probability for iteration j.
/// Linear: 1 - j/(J-1) (1 when J == 1). Exponential: p^j.
double beta(int j, const TrainerParams& params);

/// Stochastic mixture: the expert's action with probability beta, else the
/// novice's. Consumes exactly one draw from `rng`.
template <typename Action>
Action mix_action(double betaValue, const Action& expert, const Action& novice, Rng& rng) {
    return rng.bernoulli(betaValue) ? expert : novice;
}

struct DiscrepancyCount {
    long disable = 0;  // policy on, expert off
    long total = 0;    // any differing channel

    bool operator==(const DiscrepancyCount&) const = default;
};

DiscrepancyCount count_discrepancies(const Policy& policy, std::span<const Demonstration> records);
DiscrepancyCount count_discrepancies(const FrameActions& policyActions, const FrameActions& expertActions);

struct IterationReport {
    int iteration = 0;
    double beta = 0.0;
    std::size_t events = 0;        // snapshot events recorded so far
    std::size_t records = 0;       // |D| after aggregation
    DiscrepancyCount learned;      // policy used in this iteration vs expert, on this iteration's states
    DiscrepancyCount arroch;       // ARROCH vs expert, same states
};

struct Checkpoint {
    int iteration = 0;  // policy after this many iterations
    Policy policy;
};

struct TrainingResult {
    Policy policy;                      // final global policy
    AggregatedDataset dataset;
    std::vector<IterationReport> curve;
    std::vector<Checkpoint> checkpoints;
    std::vector<Policy> history;        // policy executed during iteration j
    int trialsStarted = 0;
};

struct TrainerHooks {
    /// Called after every tick with the live simulation.
    std::function<void(Simulation&)> onTick;
    std::function<void(const IterationReport&)> onIteration;
    /// Command queue shared by every trial the trainer starts.
    std::shared_ptr<CommandQueue> commands;
    /// Receives SetChannel commands (e.g. to update an interactive expert).
    Simulation::ChannelSink channelSink;
};

/// Dataset-aggregation training loop over repeated warehouse trials.
///
/// Each iteration executes the beta-mixed policy, records a snapshot event
/// (every robot and every station, labelled by the expert) each
/// snapshotInterval seconds of sim time, and after pairsPerIteration events
/// aggregates, retrains and swaps the global policy. Trials that finish are
/// replaced by fresh ones; the training clock keeps running.
TrainingResult policy_up(const ScenarioConfig& config, ExpertSource& expert, const TrainerParams& params,
                         AggregatedDataset dataset = {}, const TrainerHooks& hooks = {});

/// Discrepancy of each policy in `history` against the expert labels of the
/// whole dataset (a fixed evaluation set).
std::vector<DiscrepancyCount> evaluation_curve(std::span<const Policy> history, const AggregatedDataset& dataset);

/// Least-squares slope of ys against 0..n-1.
double least_squares_slope(std::span<const double> ys);

}  // namespace arviz
