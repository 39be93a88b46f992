#include "arviz/planner.hpp"

#include <algorithm>
#include <queue>

#include "arviz/world.hpp"

namespace arviz {

GridMap::GridMap(double cellSize, int columns, int rows)
    : cellSize_(cellSize), columns_(columns), rows_(rows),
      blocked_(static_cast<std::size_t>(columns) * static_cast<std::size_t>(rows), 0) {
    for (int c = 0; c < columns_; ++c) {
        block({c, 0});
        block({c, rows_ - 1});
    }
    for (int r = 0; r < rows_; ++r) {
        block({0, r});
        block({columns_ - 1, r});
    }
}

void GridMap::block(Cell c) {
    if (inBounds(c)) blocked_[index(c)] = 1;
}

Cell GridMap::cellOf(Point p) const {
    return {static_cast<int>(std::floor(p.x / cellSize_)), static_cast<int>(std::floor(p.y / cellSize_))};
}

Point GridMap::center(Cell c) const { return {(c.col + 0.5) * cellSize_, (c.row + 0.5) * cellSize_}; }

bool GridMap::canStep(Cell from, Cell to) const {
    const int dc = to.col - from.col;
    const int dr = to.row - from.row;
    if ((dc == 0 && dr == 0) || std::abs(dc) > 1 || std::abs(dr) > 1) return false;
    if (isBlocked(to)) return false;
    if (dc != 0 && dr != 0) {
        return !(isBlocked({from.col + dc, from.row}) && isBlocked({from.col, from.row + dr}));
    }
    return true;
}

std::size_t Trajectory::segmentIndex() const {
    if (cumulative.empty()) return 0;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), progress + 1e-9);
    return static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, std::distance(cumulative.begin(), it) - 1));
}

bool Trajectory::atWaypoint() const {
    if (cumulative.empty()) return true;
    return std::abs(progress - cumulative[segmentIndex()]) <= 1e-9;
}

Pose Trajectory::poseAt(double s) const {
    if (waypoints.empty()) return {};
    if (waypoints.size() == 1 || s <= 0.0) return waypoints.front();
    if (s >= totalLength) return waypoints.back();
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), s);
    const std::size_t k = static_cast<std::size_t>(std::distance(cumulative.begin(), it)) - 1;
    const Pose& a = waypoints[k];
    const Pose& b = waypoints[k + 1];
    const double seg = cumulative[k + 1] - cumulative[k];
    const double u = seg > 0.0 ? (s - cumulative[k]) / seg : 0.0;
    return {a.x + (b.x - a.x) * u, a.y + (b.y - a.y) * u, a.heading};
}

namespace {

double octile(Cell a, Cell b) {
    const int dx = std::abs(a.col - b.col);
    const int dy = std::abs(a.row - b.row);
    return std::max(dx, dy) - std::min(dx, dy) + kSqrt2 * std::min(dx, dy);
}

Trajectory from_cells(const GridMap& grid, const std::vector<Cell>& cells) {
    Trajectory t;
    t.cells = cells;
    t.waypoints.reserve(cells.size());
    t.cumulative.reserve(cells.size());
    double length = 0.0;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const Point p = grid.center(cells[i]);
        if (i > 0) {
            const bool diagonal = cells[i].col != cells[i - 1].col && cells[i].row != cells[i - 1].row;
            length += grid.cellSize() * (diagonal ? kSqrt2 : 1.0);
            (diagonal ? t.steps.diagonal : t.steps.straight) += 1;
        }
        t.cumulative.push_back(length);
        t.waypoints.push_back({p.x, p.y, 0.0});
    }
    for (std::size_t i = 0; i + 1 < t.waypoints.size(); ++i) {
        t.waypoints[i].heading = wrap_angle(std::atan2(t.waypoints[i + 1].y - t.waypoints[i].y,
                                                       t.waypoints[i + 1].x - t.waypoints[i].x));
    }
    if (t.waypoints.size() > 1) t.waypoints.back().heading = t.waypoints[t.waypoints.size() - 2].heading;
    t.totalLength = length;
    return t;
}

struct OpenEntry {
    double f;
    Cell cell;
};

struct OpenOrder {
    // priority_queue is a max-heap: "less" means lower priority.
    bool operator()(const OpenEntry& a, const OpenEntry& b) const {
        if (a.f != b.f) return a.f > b.f;
        return b.cell < a.cell;
    }
};

}  // namespace

Trajectory plan(const GridMap& grid, Cell start, Cell goal, const CellPredicate& extraBlocked) {
    if (grid.isBlocked(start) || grid.isBlocked(goal)) throw NoPathError(start, goal);
    if (start == goal) return from_cells(grid, {start});

    auto passable = [&](Cell c) {
        if (grid.isBlocked(c)) return false;
        if (extraBlocked && c != start && c != goal && extraBlocked(c)) return false;
        return true;
    };

    const std::size_t n = grid.size();
    std::vector<double> g(n, std::numeric_limits<double>::infinity());
    std::vector<std::int64_t> parent(n, -1);
    std::vector<std::uint8_t> closed(n, 0);
    std::priority_queue<OpenEntry, std::vector<OpenEntry>, OpenOrder> open;

    g[grid.index(start)] = 0.0;
    open.push({octile(start, goal), start});
    bool found = false;
    while (!open.empty()) {
        const OpenEntry top = open.top();
        open.pop();
        const std::size_t ci = grid.index(top.cell);
        if (closed[ci]) continue;
        closed[ci] = 1;
        if (top.cell == goal) {
            found = true;
            break;
        }
        for (int dr = -1; dr <= 1; ++dr) {
            for (int dc = -1; dc <= 1; ++dc) {
                const Cell next{top.cell.col + dc, top.cell.row + dr};
                if (!grid.canStep(top.cell, next) || !passable(next)) continue;
                const std::size_t ni = grid.index(next);
                if (closed[ni]) continue;
                const double cost = g[ci] + ((dc != 0 && dr != 0) ? kSqrt2 : 1.0);
                if (cost < g[ni] - 1e-12) {
                    g[ni] = cost;
                    parent[ni] = static_cast<std::int64_t>(ci);
                    open.push({cost + octile(next, goal), next});
                }
            }
        }
    }
    if (!found) throw NoPathError(start, goal);

    std::vector<Cell> cells;
    for (std::int64_t i = static_cast<std::int64_t>(grid.index(goal)); i >= 0; i = parent[static_cast<std::size_t>(i)]) {
        cells.push_back(grid.cellAt(static_cast<std::size_t>(i)));
    }
    std::reverse(cells.begin(), cells.end());
    return from_cells(grid, cells);
}

Trajectory plan(const GridMap& grid, const Pose& start, const Pose& goal) {
    return plan(grid, grid.cellOf(start.position()), grid.cellOf(goal.position()));
}

RobotState advance(const RobotState& robot, double speed, double dt, const CellPredicate& canEnter) {
    RobotState r = robot;
    if (!r.trajectory || r.trajectory->finished()) return r;
    Trajectory& t = *r.trajectory;

    double budget = speed * dt;
    bool moved = false;
    bool blocked = false;
    double heading = r.pose.heading;
    while (budget > 1e-12 && !t.finished()) {
        const std::size_t k = t.segmentIndex();
        if (t.atWaypoint()) {
            t.progress = t.cumulative[k];
            const Cell next = t.cells[k + 1];
            if (next != r.cell) {
                if (canEnter && !canEnter(next)) {
                    blocked = true;
                    break;
                }
                r.nextCell = next;
            }
        }
        const double segEnd = t.cumulative[k + 1];
        const double step = std::min(budget, segEnd - t.progress);
        t.progress += step;
        budget -= step;
        moved = true;
        heading = t.waypoints[k].heading;
        if (segEnd - t.progress <= 1e-9) {
            t.progress = segEnd;
            r.cell = t.cells[k + 1];
            r.nextCell.reset();
        }
    }
    const Pose p = t.currentPose();
    r.pose = {p.x, p.y, heading};
    if (moved) {
        r.heldFor = 0.0;
    } else if (blocked) {
        r.heldFor += dt;
    }
    return r;
}

}  // namespace arviz
