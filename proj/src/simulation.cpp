#include "arviz/simulation.hpp"

#include <algorithm>

namespace arviz {

namespace {

constexpr double kTimeEps = 1e-9;

/// Grid path for the worker, starting from its exact (possibly off-centre) position.
Trajectory worker_path(const GridMap& grid, Point from, Cell goal) {
    Trajectory t = plan(grid, grid.cellOf(from), goal);
    const Point first = t.waypoints.front().position();
    if (distance(first, from) > 1e-9) {
        const double lead = distance(from, first);
        t.waypoints.insert(t.waypoints.begin(),
                           Pose{from.x, from.y, wrap_angle(std::atan2(first.y - from.y, first.x - from.x))});
        t.cells.insert(t.cells.begin(), grid.cellOf(from));
        for (double& c : t.cumulative) c += lead;
        t.cumulative.insert(t.cumulative.begin(), 0.0);
        t.totalLength += lead;
    }
    return t;
}

/// Moves along `t` by `dist`; returns the travel heading, or nullopt if already at the end.
std::optional<double> move_along(Trajectory& t, double dist) {
    if (t.finished()) return std::nullopt;
    const std::size_t k = t.segmentIndex();
    const double heading = t.waypoints[std::min(k, t.waypoints.size() - 1)].heading;
    t.progress = std::min(t.totalLength, t.progress + dist);
    return heading;
}

}  // namespace

Simulation::Simulation(const ScenarioConfig& config, std::shared_ptr<const Policy> policy, std::uint64_t trialSeed,
                       std::shared_ptr<CommandQueue> commands)
    : Simulation(config, std::move(policy), TaskPool::generate(config.world, trialSeed), std::move(commands)) {
    seed_ = trialSeed;
}

Simulation::Simulation(const ScenarioConfig& config, std::shared_ptr<const Policy> policy, TaskPool pool,
                       std::shared_ptr<CommandQueue> commands)
    : config_(config),
      world_(build_world(config.world, config.worker)),
      pool_(std::move(pool)),
      policy_(policy ? std::move(policy) : std::make_shared<const Policy>(Policy::builtin(PolicyKind::AllOn))),
      commands_(commands ? std::move(commands) : std::make_shared<CommandQueue>()),
      workerModel_(WorkerModel::fromParams(config.worker)) {
    validate(config_);
    initialize();
}

void Simulation::initialize() {
    WorldSnapshot& st = world_.mutableState();
    occupancy_.assign(world_.grid().size(), -1);
    rebuildOccupancy();
    const auto tasks = pool_.allocate_initial(st.robots.size());
    for (std::size_t i = 0; i < st.robots.size(); ++i) st.robots[i].currentTask = tasks[i];
    render();
}

void Simulation::rebuildOccupancy() {
    std::fill(occupancy_.begin(), occupancy_.end(), -1);
    for (const RobotState& r : world_.state().robots) {
        occupancy_[world_.grid().index(r.cell)] = r.id;
        if (r.nextCell) occupancy_[world_.grid().index(*r.nextCell)] = r.id;
    }
}

bool Simulation::cellFreeFor(Cell c, int robotId) const {
    const int o = occupancy_[world_.grid().index(c)];
    return o < 0 || o == robotId;
}

bool Simulation::timedOut() const {
    return !complete() && world_.state().simTime >= config_.sim.timeCap - kTimeEps;
}

void Simulation::setPolicy(std::shared_ptr<const Policy> policy) {
    if (policy) policy_ = std::move(policy);
}

void Simulation::pollCommands() {
    for (const InboundCommand& cmd : commands_->drain()) applyCommand(cmd);
}

void Simulation::applyCommand(const InboundCommand& cmd) {
    WorldSnapshot& st = world_.mutableState();
    if (check_command(cmd, static_cast<int>(st.robots.size()), static_cast<int>(st.stations.size()))) return;
    if (recorder_) recorder_(st.tick, cmd);
    std::visit(
        [&](const auto& c) {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, SetChannel>) {
                if (channelSink_) channelSink_(c);
            } else if constexpr (std::is_same_v<T, Teleop>) {
                HumanWorkerState& w = st.worker;
                w.pose.heading = wrap_angle(w.pose.heading + c.yawDelta);
                Point d = c.direction;
                const double norm = std::hypot(d.x, d.y);
                if (norm > 1.0) d = {d.x / norm, d.y / norm};
                const double ch = std::cos(w.pose.heading);
                const double sh = std::sin(w.pose.heading);
                w.teleopVelocity = {config_.worker.speed * (ch * d.x - sh * d.y),
                                    config_.worker.speed * (sh * d.x + ch * d.y)};
            } else if constexpr (std::is_same_v<T, Pause>) {
                paused_ = true;
            } else if constexpr (std::is_same_v<T, Resume>) {
                paused_ = false;
            } else if constexpr (std::is_same_v<T, SetSpeed>) {
                speed_ = c.multiplier;
            } else if constexpr (std::is_same_v<T, ModeSwitch>) {
                mode_ = c.mode;
                HumanWorkerState& w = st.worker;
                w.mode = c.mode == OperatorMode::Worker ? WorkerMode::Teleoperated : WorkerMode::Scripted;
                w.targetStation.reset();
                w.path.reset();
                w.teleopVelocity = {};
            }
        },
        cmd.command);
}

StepStatus Simulation::step() {
    if (complete()) return StepStatus::TrialComplete;
    if (timedOut()) return StepStatus::TimedOut;
    pollCommands();

    WorldSnapshot& st = world_.mutableState();
    const double now = static_cast<double>(st.tick + 1) * config_.world.tickDuration;
    for (RobotState& r : st.robots) stepRobot(r, now);
    stepWorker(now);
    st.simTime = now;
    st.tick += 1;
    render();
    if (complete()) completionTime_ = now;
    return StepStatus::Advanced;
}

void Simulation::startLeg(RobotState& robot, Cell goal) {
    robot.trajectory = plan(world_.grid(), robot.cell, goal);
    robot.heldFor = 0.0;
}

void Simulation::replanAroundRobots(RobotState& robot) {
    robot.heldFor = 0.0;
    if (!robot.trajectory || robot.nextCell) return;
    Cell goal = robot.trajectory->cells.back();
    if (robot.status == RobotStatus::ToStation) {
        // Two robots can end up parked on each other's docks; a held robot
        // settles for its own cell if that is a dock, else for a free one.
        const StationState& s = world_.state().station(robot.currentTask->stationId);
        if (std::find(s.docks.begin(), s.docks.end(), robot.cell) != s.docks.end()) {
            robot.dock = robot.cell;
            robot.trajectory = plan(world_.grid(), robot.cell, robot.cell);
            return;
        }
        if (!cellFreeFor(goal, robot.id)) {
            for (Cell d : s.docks) {
                if (cellFreeFor(d, robot.id)) {
                    goal = d;
                    robot.dock = d;
                    break;
                }
            }
        }
    }
    try {
        robot.trajectory = plan(world_.grid(), robot.cell, goal, [&](Cell c) { return !cellFreeFor(c, robot.id); });
    } catch (const NoPathError&) {
        // Keep the current plan and wait for the blocker to move.
    }
}

Cell Simulation::chooseDock(const RobotState& robot, int stationId) const {
    const StationState& s = world_.state().station(stationId);
    Cell best = s.docks.front();
    int bestClaims = -1;
    for (Cell d : s.docks) {
        int claims = 0;
        for (const RobotState& other : world_.state().robots) {
            if (other.id != robot.id && other.dock && *other.dock == d) ++claims;
        }
        if (bestClaims < 0 || claims < bestClaims) {
            best = d;
            bestClaims = claims;
        }
    }
    return best;
}

void Simulation::stepRobot(RobotState& r, double now) {
    WorldSnapshot& st = world_.mutableState();
    if (r.status == RobotStatus::Idle) {
        if (!r.currentTask) {
            r.status = RobotStatus::Done;
            return;
        }
        r.status = RobotStatus::ToShelf;
        startLeg(r, world_.pickupCell(r.currentTask->shelfCell));
    }
    if (r.status != RobotStatus::ToShelf && r.status != RobotStatus::ToStation && r.status != RobotStatus::ReturningHome) {
        return;
    }

    if (r.heldFor >= config_.sim.holdReplanAfter - kTimeEps) replanAroundRobots(r);
    const Cell oldCell = r.cell;
    const std::optional<Cell> oldNext = r.nextCell;
    r = advance(r, config_.world.robotSpeed, config_.world.tickDuration, [&](Cell c) { return cellFreeFor(c, r.id); });
    const GridMap& grid = world_.grid();
    if (occupancy_[grid.index(oldCell)] == r.id) occupancy_[grid.index(oldCell)] = -1;
    if (oldNext && occupancy_[grid.index(*oldNext)] == r.id) occupancy_[grid.index(*oldNext)] = -1;
    occupancy_[grid.index(r.cell)] = r.id;
    if (r.nextCell) occupancy_[grid.index(*r.nextCell)] = r.id;

    if (!r.trajectory || !r.trajectory->finished()) return;
    switch (r.status) {
        case RobotStatus::ToShelf: {
            r.carryingBox = true;
            r.status = RobotStatus::ToStation;
            r.dock = chooseDock(r, r.currentTask->stationId);
            startLeg(r, *r.dock);
            break;
        }
        case RobotStatus::ToStation: {
            r.status = RobotStatus::WaitingAtStation;
            r.waitStart = now;
            auto& waiting = st.stations[static_cast<std::size_t>(r.currentTask->stationId)].waitingRobots;
            waiting.insert(std::upper_bound(waiting.begin(), waiting.end(), r.id), r.id);
            break;
        }
        case RobotStatus::ReturningHome:
            r.status = RobotStatus::Done;
            r.trajectory.reset();
            break;
        default: break;
    }
}

void Simulation::stepWorker(double now) {
    if (mode_ == OperatorMode::Worker) {
        stepTeleopWorker();
    } else {
        stepScriptedWorker(now);
    }
    tryUnload(now);
}

void Simulation::stepTeleopWorker() {
    HumanWorkerState& w = world_.mutableState().worker;
    const double dt = config_.world.tickDuration;
    const Point next{w.pose.x + w.teleopVelocity.x * dt, w.pose.y + w.teleopVelocity.y * dt};
    if (next.x < 0 || next.y < 0 || next.x >= config_.world.width || next.y >= config_.world.height) return;
    if (world_.grid().isBlocked(world_.grid().cellOf(next))) return;
    w.pose.x = next.x;
    w.pose.y = next.y;
}

void Simulation::stepScriptedWorker(double now) {
    WorldSnapshot& st = world_.mutableState();
    HumanWorkerState& w = st.worker;
    if (now < w.busyUntil - kTimeEps) return;

    const WorkerDecision decision = worker_decide(workerModel_, st, config_.worker);
    const GridMap& grid = world_.grid();
    if (decision.target) {
        if (decision.newTarget) {
            w.targetStation = decision.target;
            w.busyUntil = now + decision.latency;
            w.path = worker_path(grid, w.pose.position(), st.station(*decision.target).cell);
            if (now < w.busyUntil - kTimeEps) return;
        }
    } else {
        w.targetStation.reset();
        const Cell centre = grid.cellOf(world_.center());
        if (grid.cellOf(w.pose.position()) == centre && (!w.path || w.path->finished())) {
            w.path.reset();
            w.pose.heading = wrap_angle(w.pose.heading + config_.worker.scanRate * config_.world.tickDuration);
            return;
        }
        if (!w.path || w.path->cells.back() != centre) w.path = worker_path(grid, w.pose.position(), centre);
    }
    if (!w.path) return;
    if (const auto heading = move_along(*w.path, config_.worker.speed * config_.world.tickDuration)) {
        const Pose p = w.path->currentPose();
        w.pose = {p.x, p.y, *heading};
    }
}

void Simulation::tryUnload(double now) {
    WorldSnapshot& st = world_.mutableState();
    HumanWorkerState& w = st.worker;
    if (now < w.busyUntil - kTimeEps) return;
    RobotState* pick = nullptr;
    for (RobotState& r : st.robots) {
        if (r.status != RobotStatus::WaitingAtStation) continue;
        if (distance(w.pose.position(), r.pose.position()) > config_.world.unloadRadius + kTimeEps) continue;
        if (!pick || *r.waitStart < *pick->waitStart) pick = &r;
    }
    if (!pick) return;
    unload(*pick, now);
    w.targetStation.reset();
    w.path.reset();
}

void Simulation::unload(RobotState& r, double now) {
    WorldSnapshot& st = world_.mutableState();
    const int stationId = r.currentTask->stationId;
    unloads_.push_back({r.id, stationId, *r.waitStart, now});
    r.accumulatedWait += now - *r.waitStart;
    r.waitStart.reset();
    r.carryingBox = false;
    r.dock.reset();
    r.remainingTasks -= 1;
    st.boxesDelivered += 1;
    auto& waiting = st.stations[static_cast<std::size_t>(stationId)].waitingRobots;
    waiting.erase(std::remove(waiting.begin(), waiting.end(), r.id), waiting.end());

    std::optional<Task> next;
    if (r.remainingTasks > 0) next = pool_.next_task();
    if (next) {
        r.currentTask = next;
        r.status = RobotStatus::ToShelf;
        startLeg(r, world_.pickupCell(next->shelfCell));
    } else {
        r.currentTask.reset();
        r.status = RobotStatus::ReturningHome;
        startLeg(r, r.home);
    }
}

void Simulation::render() {
    WorldSnapshot& st = world_.mutableState();
    const FrameActions actions =
        actionSource_ ? actionSource_(st) : policy_actions(*policy_, st, config_.thresholds);
    st.frame = render_frame(st, actions, config_.render);
}

TrialMetrics Simulation::metrics() const {
    const WorldSnapshot& st = world_.state();
    TrialMetrics m;
    m.seed = seed_;
    double total = 0.0;
    for (const RobotState& r : st.robots) {
        double w = r.accumulatedWait;
        if (r.status == RobotStatus::WaitingAtStation && r.waitStart) w += st.simTime - *r.waitStart;
        m.perRobotWait.push_back(quantize6(w));
        total += m.perRobotWait.back();
    }
    m.totalWait = quantize6(total);
    m.completionTime = quantize6(complete() ? completionTime_ : st.simTime);
    m.boxesDelivered = st.boxesDelivered;
    m.timedOut = timedOut();
    return m;
}

TrialMetrics run_trial(const ScenarioConfig& config, const Policy& policy, std::uint64_t seed, WorkerMode workerMode) {
    Simulation sim(config, std::make_shared<const Policy>(policy), seed);
    if (workerMode == WorkerMode::Teleoperated) sim.enqueue({0, ModeSwitch{OperatorMode::Worker}});
    while (sim.step() == StepStatus::Advanced) {
    }
    return sim.metrics();
}

}  // namespace arviz
