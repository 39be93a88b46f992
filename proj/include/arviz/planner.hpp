#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "arviz/common.hpp"

namespace arviz {

/// Occupancy grid of square cells. The outer ring of cells is always blocked.
class GridMap {
public:
    GridMap() = default;
    GridMap(double cellSize, int columns, int rows);

    double cellSize() const { return cellSize_; }
    int columns() const { return columns_; }
    int rows() const { return rows_; }

    bool inBounds(Cell c) const { return c.col >= 0 && c.row >= 0 && c.col < columns_ && c.row < rows_; }
    bool isBlocked(Cell c) const { return !inBounds(c) || blocked_[index(c)] != 0; }
    void block(Cell c);

    Cell cellOf(Point p) const;
    Point center(Cell c) const;

    std::size_t index(Cell c) const { return static_cast<std::size_t>(c.row) * columns_ + c.col; }
    Cell cellAt(std::size_t index) const {
        return {static_cast<int>(index % columns_), static_cast<int>(index / columns_)};
    }
    std::size_t size() const { return blocked_.size(); }

    /// Whether a single 8-connected step from `from` to `to` is legal. A
    /// diagonal step is refused only when both orthogonal side cells are
    /// blocked (no squeezing between two diagonal obstacles).
    bool canStep(Cell from, Cell to) const;

private:
    double cellSize_ = 0.5;
    int columns_ = 0;
    int rows_ = 0;
    std::vector<std::uint8_t> blocked_;
};

/// Path length in units of straight and diagonal cell steps. Because sqrt(2)
/// is irrational, two optimal paths have equal cost iff the counts match.
struct StepCount {
    int straight = 0;
    int diagonal = 0;

    double cells() const { return straight + kSqrt2 * diagonal; }
    bool operator==(const StepCount&) const = default;
};

struct Trajectory {
    std::vector<Pose> waypoints;
    std::vector<Cell> cells;          // cell of each waypoint
    std::vector<double> cumulative;   // arc length at each waypoint
    double totalLength = 0.0;
    double progress = 0.0;
    StepCount steps;

    bool finished() const { return progress >= totalLength - 1e-9; }
    double remaining() const { return totalLength - progress; }
    /// Index of the last waypoint at or behind `progress`.
    std::size_t segmentIndex() const;
    bool atWaypoint() const;
    Pose poseAt(double s) const;
    Pose currentPose() const { return poseAt(progress); }

    bool operator==(const Trajectory&) const = default;
};

using CellPredicate = std::function<bool(Cell)>;

/// Shortest 8-connected path under the octile metric. Ties between equal-f
/// frontier nodes are broken by (row, col). Waypoints are cell centres.
/// `extraBlocked`, if set, marks additional impassable cells (the start and
/// goal are always allowed).
/// Throws NoPathError when start or goal is blocked or unreachable.
Trajectory plan(const GridMap& grid, Cell start, Cell goal, const CellPredicate& extraBlocked = {});
Trajectory plan(const GridMap& grid, const Pose& start, const Pose& goal);

}  // namespace arviz
