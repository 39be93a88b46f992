#include "arviz/world.hpp"

#include <algorithm>
#include <set>

#include "arviz/frame.hpp"

namespace arviz {

std::string_view to_string(RobotStatus s) {
    switch (s) {
        case RobotStatus::Idle: return "idle";
        case RobotStatus::ToShelf: return "to_shelf";
        case RobotStatus::ToStation: return "to_station";
        case RobotStatus::WaitingAtStation: return "waiting";
        case RobotStatus::ReturningHome: return "returning_home";
        case RobotStatus::Done: return "done";
    }
    return "?";
}

std::string_view to_string(RobotChannel c) {
    switch (c) {
        case RobotChannel::LiveLocation: return "liveLocation";
        case RobotChannel::TransparentAvatar: return "transparentAvatar";
        case RobotChannel::Trajectory: return "trajectory";
    }
    return "?";
}

std::optional<RobotChannel> parse_robot_channel(std::string_view s) {
    for (RobotChannel c : kRobotChannels) {
        if (to_string(c) == s) return c;
    }
    return std::nullopt;
}

bool RobotVizAction::get(RobotChannel c) const {
    switch (c) {
        case RobotChannel::LiveLocation: return liveLocation;
        case RobotChannel::TransparentAvatar: return transparentAvatar;
        case RobotChannel::Trajectory: return trajectory;
    }
    return false;
}

void RobotVizAction::set(RobotChannel c, bool on) {
    switch (c) {
        case RobotChannel::LiveLocation: liveLocation = on; break;
        case RobotChannel::TransparentAvatar: transparentAvatar = on; break;
        case RobotChannel::Trajectory: trajectory = on; break;
    }
}

std::uint8_t RobotVizAction::bits() const {
    return static_cast<std::uint8_t>((liveLocation ? 1u : 0u) | (transparentAvatar ? 2u : 0u) | (trajectory ? 4u : 0u));
}

RobotVizAction RobotVizAction::fromBits(std::uint8_t bits) {
    return {(bits & 1u) != 0, (bits & 2u) != 0, (bits & 4u) != 0};
}

int VisualizationFrame::enabledCount() const {
    int n = 0;
    for (const auto& r : robots) n += r.channels.enabledCount();
    for (const auto& s : stations) n += s.balloon ? 1 : 0;
    return n;
}

const RobotState& WorldSnapshot::robot(int id) const {
    if (id < 0 || id >= static_cast<int>(robots.size())) throw LookupError("unknown robot id " + std::to_string(id));
    return robots[static_cast<std::size_t>(id)];
}

const StationState& WorldSnapshot::station(int id) const {
    for (const auto& s : stations) {
        if (s.id == id) return s;
    }
    throw LookupError("unknown station id " + std::to_string(id));
}

namespace {

void require(bool ok, const std::string& invariant) {
    if (!ok) throw ConfigError("invalid config: " + invariant);
}

bool inside(const WarehouseConfig& c, Point p) { return p.x >= 0.0 && p.y >= 0.0 && p.x < c.width && p.y < c.height; }

}  // namespace

GridMap make_grid(const WarehouseConfig& config) {
    GridMap grid(config.cellSize, static_cast<int>(std::lround(config.width / config.cellSize)),
                 static_cast<int>(std::lround(config.height / config.cellSize)));
    for (Cell s : config.shelves) grid.block(s);
    return grid;
}

void validate(const WarehouseConfig& c) {
    require(c.cellSize > 0.0, "cellSize > 0");
    require(c.width >= 3 * c.cellSize && c.height >= 3 * c.cellSize, "world is at least 3x3 cells");
    require(c.robotSpeed > 0.0, "robotSpeed > 0");
    require(c.tickDuration > 0.0, "tickDuration > 0");
    require(c.unloadRadius > 0.0, "unloadRadius > 0");
    require(c.boxesPerRobot >= 1, "boxesPerRobot >= 1");
    require(c.nRobots >= 0, "nRobots >= 0");
    require(c.nRobots == static_cast<int>(c.homePositions.size()), "nRobots == |homePositions|");
    require(!c.stations.empty(), "at least one drop station");
    require(!c.shelves.empty(), "at least one shelf");

    GridMap borderOnly(c.cellSize, static_cast<int>(std::lround(c.width / c.cellSize)),
                       static_cast<int>(std::lround(c.height / c.cellSize)));
    std::set<Cell> shelves;
    for (Cell s : c.shelves) {
        require(borderOnly.inBounds(s) && !borderOnly.isBlocked(s), "shelf " + to_string(s) + " inside bounds");
        shelves.insert(s);
    }
    const GridMap grid = make_grid(c);
    auto freePosition = [&](Point p, const std::string& what) {
        require(inside(c, p), what + " inside bounds");
        require(!shelves.contains(grid.cellOf(p)), what + " not on a shelf cell");
        require(!grid.isBlocked(grid.cellOf(p)), what + " not on the boundary wall");
    };
    std::set<Cell> homes;
    for (std::size_t i = 0; i < c.homePositions.size(); ++i) {
        freePosition(c.homePositions[i], "home position " + std::to_string(i));
        require(homes.insert(grid.cellOf(c.homePositions[i])).second, "home positions occupy distinct cells");
    }
    for (std::size_t i = 0; i < c.stations.size(); ++i) {
        const auto& s = c.stations[i];
        freePosition(s.position, "drop station " + std::to_string(s.id));
        require(s.id == static_cast<int>(i), "drop station ids are 0..n-1 in listed order");
    }
}

void validate(const WorkerParams& p) {
    require(p.fovHalfAngle > 0.0 && p.fovHalfAngle <= kPi, "fovHalfAngle in (0, pi]");
    require(p.sightRange > 0.0, "sightRange > 0");
    require(p.speed > 0.0, "worker speed > 0");
    require(p.baseLatency >= 0.0 && p.latencyPerElement >= 0.0, "worker latencies >= 0");
    require(p.scanRate >= 0.0, "scanRate >= 0");
}

Cell World::pickupCell(Cell shelf) const {
    const Cell candidates[] = {{shelf.col, shelf.row - 1}, {shelf.col, shelf.row + 1},
                               {shelf.col - 1, shelf.row}, {shelf.col + 1, shelf.row}};
    for (Cell c : candidates) {
        if (!grid_.isBlocked(c)) return c;
    }
    throw ConfigError("invalid config: shelf " + to_string(shelf) + " has a free neighbouring cell");
}

bool World::trialComplete() const {
    return std::all_of(state_.robots.begin(), state_.robots.end(),
                       [](const RobotState& r) { return r.status == RobotStatus::Done; });
}

World build_world(const WarehouseConfig& config, const WorkerParams& worker) {
    validate(config);
    validate(worker);
    World w;
    w.config_ = config;
    w.workerParams_ = worker;
    w.grid_ = make_grid(config);
    const GridMap& grid = w.grid_;

    for (Cell s : config.shelves) (void)w.pickupCell(s);
    require(!grid.isBlocked(grid.cellOf(worker.start)) &&
                worker.start.x >= 0 && worker.start.y >= 0 && worker.start.x < config.width &&
                worker.start.y < config.height,
            "worker start inside bounds and on a free cell");

    std::set<Cell> stationCells;
    for (const auto& s : config.stations) stationCells.insert(grid.cellOf(s.position));

    WorldSnapshot& st = w.state_;
    for (const auto& spec : config.stations) {
        StationState s;
        s.id = spec.id;
        s.position = spec.position;
        s.cell = grid.cellOf(spec.position);
        for (int dr = -1; dr <= 1; ++dr) {
            for (int dc = -1; dc <= 1; ++dc) {
                const Cell d{s.cell.col + dc, s.cell.row + dr};
                if ((dc == 0 && dr == 0) || grid.isBlocked(d) || stationCells.contains(d)) continue;
                s.docks.push_back(d);
            }
        }
        std::sort(s.docks.begin(), s.docks.end());
        require(!s.docks.empty(), "drop station " + std::to_string(s.id) + " has a free docking cell");
        st.stations.push_back(std::move(s));
        st.frame.stations.push_back({spec.id, false});
    }

    for (int i = 0; i < config.nRobots; ++i) {
        RobotState r;
        r.id = i;
        r.home = grid.cellOf(config.homePositions[static_cast<std::size_t>(i)]);
        r.cell = r.home;
        const Point c = grid.center(r.home);
        r.pose = {c.x, c.y, 0.0};
        r.status = RobotStatus::Idle;
        r.remainingTasks = config.boxesPerRobot;
        st.robots.push_back(r);
        RobotVisual v;
        v.robotId = i;
        v.color = robot_color(i);
        st.frame.robots.push_back(v);
    }

    st.worker.pose = {worker.start.x, worker.start.y, wrap_angle(worker.heading)};
    st.worker.fovHalfAngle = worker.fovHalfAngle;
    st.worker.sightRange = worker.sightRange;
    return w;
}

WarehouseConfig main_config() {
    WarehouseConfig c;
    c.width = 40.0;
    c.height = 30.0;
    c.cellSize = 0.5;
    for (double y : {5.0, 9.0, 13.0, 17.0, 21.0, 25.0}) {
        for (double x : {8.0, 13.0, 18.0, 23.0, 28.0, 33.0}) {
            c.shelves.push_back({static_cast<int>(x / c.cellSize), static_cast<int>(y / c.cellSize)});
        }
    }
    c.stations = {{0, {1.25, 15.25}}, {1, {38.75, 15.25}}, {2, {20.25, 1.25}}, {3, {20.25, 28.75}}};
    for (double y : {2.75, 4.25}) {
        for (int k = 0; k < 6; ++k) c.homePositions.push_back({4.25 + 2.0 * k, y});
    }
    c.nRobots = static_cast<int>(c.homePositions.size());
    return c;
}

WarehouseConfig mini_config() {
    WarehouseConfig c;
    c.width = 20.0;
    c.height = 15.0;
    c.cellSize = 0.5;
    for (double y : {4.0, 7.5, 11.0}) {
        for (double x : {4.0, 6.5, 9.0, 11.5, 14.0, 16.5}) {
            c.shelves.push_back({static_cast<int>(x / c.cellSize), static_cast<int>(y / c.cellSize)});
        }
    }
    c.stations = {{0, {1.25, 7.75}}, {1, {18.75, 7.75}}};
    for (int k = 0; k < 6; ++k) c.homePositions.push_back({5.25 + 1.5 * k, 1.75});
    c.nRobots = 6;
    return c;
}

}  // namespace arviz
