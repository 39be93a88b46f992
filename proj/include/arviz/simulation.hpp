#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "arviz/commands.hpp"
#include "arviz/frame.hpp"
#include "arviz/policy.hpp"
#include "arviz/scenario.hpp"
#include "arviz/task_pool.hpp"
#include "arviz/worker.hpp"
#include "arviz/world.hpp"

namespace arviz {

struct TrialMetrics {
    std::uint64_t seed = 0;
    std::vector<double> perRobotWait;  // seconds
    double totalWait = 0.0;
    double completionTime = 0.0;
    int boxesDelivered = 0;
    bool timedOut = false;

    bool operator==(const TrialMetrics&) const = default;
};

struct UnloadEvent {
    int robotId = 0;
    int stationId = 0;
    double waitStart = 0.0;
    double unloadTime = 0.0;
};

enum class StepStatus { Advanced, TrialComplete, TimedOut };

/// One trial of the warehouse loop: robots deliver, the worker unloads, and
/// the visualization frame is re-rendered every tick.
///
/// Commands are drained only at tick boundaries (inside step() or
/// pollCommands()), so a run is reproducible from its command log.
class Simulation {
public:
    using ActionSource = std::function<FrameActions(const WorldSnapshot&)>;
    using ChannelSink = std::function<void(const SetChannel&)>;
    using CommandRecorder = std::function<void(std::uint64_t tick, const InboundCommand&)>;

    Simulation(const ScenarioConfig& config, std::shared_ptr<const Policy> policy, std::uint64_t trialSeed,
               std::shared_ptr<CommandQueue> commands = nullptr);
    /// Restores a trial from a saved pool (the pool's own draw stream is kept).
    Simulation(const ScenarioConfig& config, std::shared_ptr<const Policy> policy, TaskPool pool,
               std::shared_ptr<CommandQueue> commands = nullptr);

    const ScenarioConfig& config() const { return config_; }
    const World& world() const { return world_; }
    const WorldSnapshot& state() const { return world_.state(); }
    WorldSnapshot snapshot() const { return world_.snapshot(); }
    const TaskPool& pool() const { return pool_; }
    std::uint64_t seed() const { return seed_; }

    bool complete() const { return world_.trialComplete(); }
    bool timedOut() const;
    bool finished() const { return complete() || timedOut(); }

    /// Advances one tick. A finished trial is not stepped and its status is returned.
    StepStatus step();

    /// Applies queued commands without advancing time (used while paused).
    void pollCommands();
    void enqueue(InboundCommand cmd) { commands_->push(std::move(cmd)); }
    const std::shared_ptr<CommandQueue>& commandQueue() const { return commands_; }

    /// Swaps the policy used for rendering; takes effect at the next tick.
    void setPolicy(std::shared_ptr<const Policy> policy);
    const std::shared_ptr<const Policy>& policy() const { return policy_; }
    /// Overrides policy-driven rendering (used by the trainer for mixing).
    void setActionSource(ActionSource source) { actionSource_ = std::move(source); }
    void setChannelSink(ChannelSink sink) { channelSink_ = std::move(sink); }
    void setCommandRecorder(CommandRecorder recorder) { recorder_ = std::move(recorder); }

    bool paused() const { return paused_; }
    double speedMultiplier() const { return speed_; }
    OperatorMode mode() const { return mode_; }

    const WorkerModel& workerModel() const { return workerModel_; }
    const std::vector<UnloadEvent>& unloadEvents() const { return unloads_; }
    /// Metrics so far; final once finished().
    TrialMetrics metrics() const;

private:
    void initialize();
    void applyCommand(const InboundCommand& cmd);
    void stepRobot(RobotState& robot, double now);
    void startLeg(RobotState& robot, Cell goal);
    void replanAroundRobots(RobotState& robot);
    Cell chooseDock(const RobotState& robot, int stationId) const;
    void stepWorker(double now);
    void stepScriptedWorker(double now);
    void stepTeleopWorker();
    void tryUnload(double now);
    void unload(RobotState& robot, double now);
    void render();
    bool cellFreeFor(Cell c, int robotId) const;
    void rebuildOccupancy();

    ScenarioConfig config_;
    World world_;
    TaskPool pool_;
    std::uint64_t seed_ = 0;
    std::shared_ptr<const Policy> policy_;
    std::shared_ptr<CommandQueue> commands_;
    ActionSource actionSource_;
    ChannelSink channelSink_;
    CommandRecorder recorder_;
    WorkerModel workerModel_;
    std::vector<int> occupancy_;  // robot id per grid cell, -1 when free
    std::vector<UnloadEvent> unloads_;
    double completionTime_ = 0.0;
    bool paused_ = false;
    double speed_ = 1.0;
    OperatorMode mode_ = OperatorMode::Expert;
};

/// Runs one trial to completion or the time cap. Deterministic for fixed inputs.
TrialMetrics run_trial(const ScenarioConfig& config, const Policy& policy, std::uint64_t seed,
                       WorkerMode workerMode = WorkerMode::Scripted);

}  // namespace arviz
