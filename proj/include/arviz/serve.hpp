#pragma once

#include <atomic>
#include <memory>
#include <optional>

#include "arviz/bridge.hpp"
#include "arviz/expert.hpp"
#include "arviz/replay.hpp"
#include "arviz/trainer.hpp"

namespace arviz {

/// Runs training or a single trial with the bridge attached: snapshots go
/// out to the console, console commands come back through the shared queue.
class ServeSession {
public:
    /// `realtime` paces ticks at tickDuration / speed multiplier wall seconds.
    ServeSession(ScenarioConfig config, BridgeServer::Options options, bool realtime = true);

    unsigned short port() const { return server_.port(); }
    InteractiveExpert& interactive() { return interactive_; }
    const std::shared_ptr<CommandQueue>& commands() const { return commands_; }

    TrainingResult train(ExpertSource& expert, const TrainerParams& params, AggregatedDataset dataset = {});

    /// One trial under `policy`. Commands are recorded into `log` when given.
    /// Stops at completion, the time cap, `maxTicks`, or requestStop().
    TrialMetrics trial(std::shared_ptr<const Policy> policy, std::uint64_t seed, ReplayLog* log = nullptr,
                       std::optional<std::uint64_t> maxTicks = std::nullopt);

    void requestStop() { stop_ = true; }

private:
    void afterTick(Simulation& sim);
    void publish(const Simulation& sim);

    ScenarioConfig config_;
    bool realtime_;
    std::shared_ptr<CommandQueue> commands_;
    InteractiveExpert interactive_;
    BridgeServer server_;
    std::atomic<bool> stop_{false};
    std::chrono::steady_clock::time_point deadline_{};
    std::chrono::steady_clock::time_point lastPublish_{};
    bool published_ = false;
};

}  // namespace arviz
