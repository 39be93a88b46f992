#include "arviz/trainer.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <thread>

namespace arviz {

std::string_view to_string(BetaSchedule s) { return s == BetaSchedule::Linear ? "linear" : "exponential"; }

std::optional<BetaSchedule> parse_beta_schedule(std::string_view s) {
    if (s == "linear") return BetaSchedule::Linear;
    if (s == "exponential") return BetaSchedule::Exponential;
    return std::nullopt;
}

void validate(const TrainerParams& p, double tickDuration) {
    auto require = [](bool ok, const char* what) {
        if (!ok) throw ConfigError(std::string("trainer: ") + what);
    };
    require(p.iterations >= 1, "iterations >= 1");
    require(p.pairsPerIteration >= 1, "pairsPerIteration >= 1");
    require(p.snapshotInterval > 0, "snapshotInterval > 0");
    const double ticks = p.snapshotInterval / tickDuration;
    require(std::abs(ticks - std::round(ticks)) < 1e-9 && std::round(ticks) >= 1,
            "snapshotInterval is a whole number of ticks");
    require(p.betaBase >= 0 && p.betaBase <= 1, "betaBase in [0, 1]");
    require(p.checkpointEvery >= 0, "checkpointEvery >= 0");
    require(is_learnable(p.learner), "learner is tabular or linear");
    require(p.expertTimeout > 0, "expertTimeout > 0");
}

double beta(int j, const TrainerParams& params) {
    if (params.schedule == BetaSchedule::Exponential) return std::pow(params.betaBase, j);
    if (params.iterations <= 1) return 1.0;
    return std::clamp(1.0 - static_cast<double>(j) / (params.iterations - 1), 0.0, 1.0);
}

namespace {

void tally(DiscrepancyCount& c, std::uint8_t policyBits, std::uint8_t expertBits) {
    c.disable += std::popcount(static_cast<unsigned>(policyBits & ~expertBits));
    c.total += std::popcount(static_cast<unsigned>(policyBits ^ expertBits));
}

}  // namespace

DiscrepancyCount count_discrepancies(const Policy& policy, std::span<const Demonstration> records) {
    DiscrepancyCount c;
    for (const Demonstration& d : records) {
        const std::uint8_t bits = d.agentKind == AgentKind::Robot ? policy.act_robot_state(d.state).bits()
                                                                  : policy.act_station_state(d.state).bits();
        tally(c, bits, d.action);
    }
    return c;
}

DiscrepancyCount count_discrepancies(const FrameActions& policyActions, const FrameActions& expertActions) {
    if (policyActions.robots.size() != expertActions.robots.size() ||
        policyActions.stations.size() != expertActions.stations.size()) {
        throw std::invalid_argument("count_discrepancies: action sets differ in size");
    }
    DiscrepancyCount c;
    for (std::size_t i = 0; i < policyActions.robots.size(); ++i) {
        tally(c, policyActions.robots[i].bits(), expertActions.robots[i].bits());
    }
    for (std::size_t i = 0; i < policyActions.stations.size(); ++i) {
        tally(c, policyActions.stations[i].bits(), expertActions.stations[i].bits());
    }
    return c;
}

namespace {

void record_event(const WorldSnapshot& snap, const ExpertLabels& labels, const DiscretizationThresholds& th,
                  int iteration, double simTime, std::vector<Demonstration>& out) {
    for (std::size_t i = 0; i < snap.robots.size(); ++i) {
        const int id = snap.robots[i].id;
        out.push_back({AgentKind::Robot, id, encode(extract_robot_features(snap, id, th)), labels.robots[i].bits(),
                       iteration, simTime});
    }
    for (std::size_t i = 0; i < snap.stations.size(); ++i) {
        const int id = snap.stations[i].id;
        out.push_back({AgentKind::Station, id, encode(extract_station_features(snap, id, th)),
                       labels.stations[i].bits(), iteration, simTime});
    }
}

/// Blocks until the expert can answer, servicing commands meanwhile.
void await_expert(ExpertSource& expert, Simulation& sim, double timeout) {
    const auto start = std::chrono::steady_clock::now();
    while (!expert.available()) {
        sim.pollCommands();
        const std::chrono::duration<double> waited = std::chrono::steady_clock::now() - start;
        if (waited.count() >= timeout) {
            throw ExpertTimeout("expert unavailable for " + std::to_string(timeout) + " s at a pending snapshot");
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(10));
    }
}

void await_resume(Simulation& sim) {
    while (sim.paused()) {
        std::this_thread::sleep_for(std::chrono::milliseconds(10));
        sim.pollCommands();
    }
}

}  // namespace

TrainingResult policy_up(const ScenarioConfig& config, ExpertSource& expert, const TrainerParams& params,
                         AggregatedDataset dataset, const TrainerHooks& hooks) {
    validate(config);
    validate(params, config.world.tickDuration);
    const DiscretizationThresholds& th = config.thresholds;
    const auto ticksPerEvent =
        static_cast<std::uint64_t>(std::llround(params.snapshotInterval / config.world.tickDuration));

    TrainingResult result;
    result.dataset = std::move(dataset);
    Policy novice = result.dataset.empty() ? Policy::builtin(params.learner)
                                           : train(result.dataset, params.learner, 0);
    const Policy arroch = Policy::builtin(PolicyKind::Arroch);
    Rng mixRng(params.rngSeed);
    double currentBeta = 1.0;

    std::unique_ptr<Simulation> sim;
    auto startTrial = [&] {
        const std::uint64_t seed = params.trialSeedBase + static_cast<std::uint64_t>(result.trialsStarted);
        ++result.trialsStarted;
        sim = std::make_unique<Simulation>(config, std::make_shared<const Policy>(novice), seed, hooks.commands);
        if (hooks.channelSink) sim->setChannelSink(hooks.channelSink);
        sim->setActionSource([&](const WorldSnapshot& snap) {
            const ExpertLabels e = expert.label(snap, th);
            const FrameActions n = policy_actions(novice, snap, th);
            FrameActions mixed;
            mixed.robots.reserve(n.robots.size());
            mixed.stations.reserve(n.stations.size());
            for (std::size_t i = 0; i < n.robots.size(); ++i) {
                mixed.robots.push_back(mix_action(currentBeta, e.robots[i], n.robots[i], mixRng));
            }
            for (std::size_t i = 0; i < n.stations.size(); ++i) {
                mixed.stations.push_back(mix_action(currentBeta, e.stations[i], n.stations[i], mixRng));
            }
            return mixed;
        });
    };

    std::uint64_t clockTicks = 0;  // training clock, continuous across trials
    for (int j = 0; j < params.iterations; ++j) {
        currentBeta = beta(j, params);
        std::vector<Demonstration> batch;
        int events = 0;
        while (events < params.pairsPerIteration) {
            if (!sim || sim->finished()) startTrial();
            await_resume(*sim);
            sim->step();
            ++clockTicks;
            if (hooks.onTick) hooks.onTick(*sim);
            if (clockTicks % ticksPerEvent != 0) continue;

            await_expert(expert, *sim, params.expertTimeout);
            const WorldSnapshot& snap = sim->state();
            const double simTime = quantize6(static_cast<double>(clockTicks) * config.world.tickDuration);
            record_event(snap, expert.label(snap, th), th, j, simTime, batch);
            expert.eventRecorded();
            ++events;
        }

        IterationReport report;
        report.iteration = j;
        report.beta = currentBeta;
        report.learned = count_discrepancies(novice, batch);
        report.arroch = count_discrepancies(arroch, batch);

        result.history.push_back(novice);
        result.dataset.aggregate(batch);
        novice = train(result.dataset, params.learner, j + 1);
        sim->setPolicy(std::make_shared<const Policy>(novice));
        if (params.checkpointEvery > 0 && (j + 1) % params.checkpointEvery == 0) {
            result.checkpoints.push_back({j + 1, novice});
        }

        report.events = static_cast<std::size_t>(params.pairsPerIteration) * static_cast<std::size_t>(j + 1);
        report.records = result.dataset.size();
        result.curve.push_back(report);
        if (hooks.onIteration) hooks.onIteration(report);
    }
    result.policy = novice;
    return result;
}

std::vector<DiscrepancyCount> evaluation_curve(std::span<const Policy> history, const AggregatedDataset& dataset) {
    std::vector<DiscrepancyCount> out;
    out.reserve(history.size());
    for (const Policy& p : history) out.push_back(count_discrepancies(p, dataset.records()));
    return out;
}

double least_squares_slope(std::span<const double> ys) {
    const std::size_t n = ys.size();
    if (n < 2) return 0.0;
    const double xbar = (static_cast<double>(n) - 1) / 2.0;
    double ybar = 0.0;
    for (double y : ys) ybar += y;
    ybar /= static_cast<double>(n);
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = static_cast<double>(i) - xbar;
        sxy += dx * (ys[i] - ybar);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

}  // namespace arviz
