#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "arviz/actions.hpp"
#include "arviz/common.hpp"
#include "arviz/planner.hpp"

namespace arviz {

struct StationSpec {
    int id = 0;
    Point position;

    bool operator==(const StationSpec&) const = default;
};

struct WarehouseConfig {
    double width = 40.0;   // meters
    double height = 30.0;  // meters
    double cellSize = 0.5;
    std::vector<Cell> shelves;
    std::vector<StationSpec> stations;
    int nRobots = 0;
    double robotSpeed = 0.5;     // m/s
    int boxesPerRobot = 3;
    double unloadRadius = 1.0;   // m
    double tickDuration = 0.1;   // s
    std::vector<Point> homePositions;
    std::uint64_t rngSeed = 1;

    bool operator==(const WarehouseConfig&) const = default;
};

/// Scripted-worker and worker-body parameters.
struct WorkerParams {
    Point start{20.25, 15.25};
    double heading = 0.0;
    double fovHalfAngle = kPi / 3.0;  // 60 degrees
    double sightRange = 15.0;
    double speed = 1.2;
    double baseLatency = 1.0;         // tau_0, seconds
    double latencyPerElement = 0.15;  // tau_v, seconds per visible element
    double scanRate = kPi / 4.0;      // rad/s while idling at the centre

    bool operator==(const WorkerParams&) const = default;
};

/// Throws ConfigError naming the first violated invariant.
void validate(const WarehouseConfig& config);
void validate(const WorkerParams& params);

enum class RobotStatus : std::uint8_t { Idle, ToShelf, ToStation, WaitingAtStation, ReturningHome, Done };
std::string_view to_string(RobotStatus s);

struct Task {
    Cell shelfCell;
    int stationId = 0;

    bool operator==(const Task&) const = default;
};

struct RobotState {
    int id = 0;
    Pose pose;
    RobotStatus status = RobotStatus::Idle;
    std::optional<Task> currentTask;
    int remainingTasks = 0;
    bool carryingBox = false;
    std::optional<double> waitStart;
    std::optional<Trajectory> trajectory;

    Cell cell;                     // occupied cell
    std::optional<Cell> nextCell;  // reserved while crossing into it
    std::optional<Cell> dock;      // claimed dock cell while delivering
    Cell home;
    double heldFor = 0.0;          // seconds blocked by another robot
    double accumulatedWait = 0.0;  // completed waits, seconds

    bool operator==(const RobotState&) const = default;
};

/// Moves a robot along its trajectory by speed*dt (motion-planner controller).
/// Entering a new cell requires `canEnter(cell)`; when refused the robot stops
/// at its current waypoint for the rest of the tick and `heldFor` grows by dt.
/// A robot without a trajectory, or at its end, is returned unchanged.
RobotState advance(const RobotState& robot, double speed, double dt, const CellPredicate& canEnter);

enum class WorkerMode : std::uint8_t { Scripted, Teleoperated };

struct HumanWorkerState {
    Pose pose;
    double fovHalfAngle = kPi / 3.0;
    double sightRange = 15.0;
    double busyUntil = 0.0;  // sim time before which the worker cannot act
    WorkerMode mode = WorkerMode::Scripted;
    std::optional<int> targetStation;
    std::optional<Trajectory> path;
    Point teleopVelocity;    // world frame, m/s, teleoperated mode only

    bool operator==(const HumanWorkerState&) const = default;
};

struct StationState {
    int id = 0;
    Point position;
    Cell cell;
    std::vector<Cell> docks;
    std::vector<int> waitingRobots;  // ascending robot id

    bool operator==(const StationState&) const = default;
};

struct RobotVisual {
    int robotId = 0;
    RobotVizAction channels;
    std::uint32_t color = 0;        // 0xRRGGBB
    std::vector<Point> polyline;    // trajectory vertices, start to goal
    std::vector<double> widths;     // per-vertex trajectory width, meters
    double avatarProgress = 0.0;    // transparent avatar position, fraction of path
    Point avatarPosition;

    bool operator==(const RobotVisual&) const = default;
};

struct StationVisual {
    int stationId = 0;
    bool balloon = false;

    bool operator==(const StationVisual&) const = default;
};

struct VisualizationFrame {
    std::vector<RobotVisual> robots;
    std::vector<StationVisual> stations;

    int enabledCount() const;
    bool operator==(const VisualizationFrame&) const = default;
};

struct WorldSnapshot {
    double simTime = 0.0;
    std::uint64_t tick = 0;
    std::vector<RobotState> robots;
    HumanWorkerState worker;
    std::vector<StationState> stations;
    VisualizationFrame frame;
    int boxesDelivered = 0;

    const RobotState& robot(int id) const;
    const StationState& station(int id) const;
    bool operator==(const WorldSnapshot&) const = default;
};

/// The warehouse: static geometry plus the mutable state that the simulation
/// advances. snapshot() hands out value copies.
class World {
public:
    const WarehouseConfig& config() const { return config_; }
    const WorkerParams& workerParams() const { return workerParams_; }
    const GridMap& grid() const { return grid_; }

    const WorldSnapshot& state() const { return state_; }
    WorldSnapshot& mutableState() { return state_; }
    WorldSnapshot snapshot() const { return state_; }

    /// Free cell next to the shelf where robots pick up boxes.
    Cell pickupCell(Cell shelf) const;
    Point center() const { return {config_.width / 2.0, config_.height / 2.0}; }

    bool trialComplete() const;

private:
    friend World build_world(const WarehouseConfig&, const WorkerParams&);

    WarehouseConfig config_;
    WorkerParams workerParams_;
    GridMap grid_;
    WorldSnapshot state_;
};

World build_world(const WarehouseConfig& config, const WorkerParams& worker = {});

GridMap make_grid(const WarehouseConfig& config);

/// 18 shelves, 6 robots, 2 stations.
WarehouseConfig mini_config();
/// 36 shelves, 12 robots, 4 stations, 40 m x 30 m.
WarehouseConfig main_config();

}  // namespace arviz
