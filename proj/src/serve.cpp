#include "arviz/serve.hpp"

#include <chrono>
#include <thread>

#include "arviz/protocol.hpp"

namespace arviz {

ServeSession::ServeSession(ScenarioConfig config, BridgeServer::Options options, bool realtime)
    : config_(std::move(config)),
      realtime_(realtime),
      commands_(std::make_shared<CommandQueue>()),
      interactive_(config_.world.nRobots, static_cast<int>(config_.world.stations.size())),
      server_(
          std::move(options),
          [this](const InboundCommand& cmd) -> std::optional<std::string> {
              if (auto err = check_command(cmd, config_.world.nRobots, static_cast<int>(config_.world.stations.size()))) {
                  return err;
              }
              commands_->push(cmd);
              return std::nullopt;
          },
          [this](int clients) { interactive_.setConnected(clients > 0); }) {
    validate(config_);
    server_.start();
}

void ServeSession::publish(const Simulation& sim) {
    SnapshotExtras extras;
    extras.checkboxes = interactive_.current();
    const WorldSnapshot& snap = sim.state();
    std::string plain = snapshot_message(snap, extras);
    extras.layout = &config_.world;
    server_.publish(std::move(plain), snapshot_message(snap, extras));
    lastPublish_ = std::chrono::steady_clock::now();
    published_ = true;
}

void ServeSession::afterTick(Simulation& sim) {
    using clock = std::chrono::steady_clock;
    const auto now = clock::now();
    if (!published_ || realtime_ || now - lastPublish_ >= std::chrono::milliseconds(100)) publish(sim);
    if (!realtime_) return;
    const auto period = std::chrono::duration_cast<clock::duration>(
        std::chrono::duration<double>(config_.world.tickDuration / sim.speedMultiplier()));
    if (deadline_ == clock::time_point{} || now - deadline_ > std::chrono::seconds(1)) deadline_ = now;
    deadline_ += period;
    std::this_thread::sleep_until(deadline_);
}

TrainingResult ServeSession::train(ExpertSource& expert, const TrainerParams& params, AggregatedDataset dataset) {
    TrainerHooks hooks;
    hooks.commands = commands_;
    hooks.onTick = [this](Simulation& sim) {
        if (stop_) throw std::runtime_error("serve session stopped");
        afterTick(sim);
    };
    hooks.onIteration = [this](const IterationReport& r) { server_.broadcast(status_message(r)); };
    hooks.channelSink = [this](const SetChannel& c) {
        if (c.agentKind == AgentKind::Station) {
            interactive_.setBalloon(c.agentId, c.on);
        } else {
            interactive_.setRobotChannel(c.agentId, static_cast<RobotChannel>(c.channel), c.on);
        }
    };
    return policy_up(config_, expert, params, std::move(dataset), hooks);
}

TrialMetrics ServeSession::trial(std::shared_ptr<const Policy> policy, std::uint64_t seed, ReplayLog* log,
                                 std::optional<std::uint64_t> maxTicks) {
    Simulation sim(config_, std::move(policy), seed, commands_);
    if (log) {
        log->configFingerprint = fingerprint(config_);
        log->seed = seed;
        log->commands.clear();
        record_commands(sim, *log);
    }
    publish(sim);
    while (!stop_ && !sim.finished() && (!maxTicks || sim.state().tick < *maxTicks)) {
        sim.pollCommands();
        if (sim.paused()) {
            std::this_thread::sleep_for(std::chrono::milliseconds(10));
            continue;
        }
        sim.step();
        afterTick(sim);
    }
    publish(sim);
    if (log) log->endTick = sim.state().tick;
    return sim.metrics();
}

}  // namespace arviz
