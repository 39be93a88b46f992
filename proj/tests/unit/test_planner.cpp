#include <gtest/gtest.h>

#include <random>

#include "arviz/planner.hpp"
#include "arviz/world.hpp"
#include "oracles.hpp"

using namespace arviz;
using arviz::testing::dijkstra;

namespace {

GridMap open_grid(int cols, int rows) { return GridMap(0.5, cols, rows); }

}  // namespace

TEST(Grid, BorderIsBlocked) {
    const GridMap g = open_grid(6, 5);
    EXPECT_TRUE(g.isBlocked({0, 2}));
    EXPECT_TRUE(g.isBlocked({5, 2}));
    EXPECT_TRUE(g.isBlocked({2, 0}));
    EXPECT_TRUE(g.isBlocked({2, 4}));
    EXPECT_FALSE(g.isBlocked({2, 2}));
    EXPECT_TRUE(g.isBlocked({-1, 2}));
}

TEST(Grid, CellOfAndCenterAgree) {
    const GridMap g = open_grid(10, 10);
    EXPECT_EQ(g.cellOf({1.3, 2.6}), (Cell{2, 5}));
    const Point c = g.center({3, 4});
    EXPECT_DOUBLE_EQ(c.x, 1.75);
    EXPECT_DOUBLE_EQ(c.y, 2.25);
    EXPECT_EQ(g.cellOf(c), (Cell{3, 4}));
}

TEST(Grid, DiagonalRefusedOnlyBetweenTwoObstacles) {
    GridMap g = open_grid(6, 6);
    EXPECT_TRUE(g.canStep({2, 2}, {3, 3}));
    g.block({3, 2});
    EXPECT_TRUE(g.canStep({2, 2}, {3, 3}));
    g.block({2, 3});
    EXPECT_FALSE(g.canStep({2, 2}, {3, 3}));
    EXPECT_FALSE(g.canStep({2, 2}, {4, 2}));
    EXPECT_FALSE(g.canStep({2, 2}, {2, 2}));
}

TEST(Planner, StraightCorridorCost) {
    const GridMap g = open_grid(12, 3);
    const Trajectory t = plan(g, Cell{1, 1}, Cell{10, 1});
    EXPECT_EQ(t.steps, (StepCount{9, 0}));
    EXPECT_DOUBLE_EQ(t.totalLength, 4.5);
    EXPECT_EQ(t.cells.front(), (Cell{1, 1}));
    EXPECT_EQ(t.cells.back(), (Cell{10, 1}));
}

TEST(Planner, DiagonalShortcut) {
    const GridMap g = open_grid(8, 8);
    const Trajectory t = plan(g, Cell{1, 1}, Cell{4, 6});
    EXPECT_EQ(t.steps, (StepCount{2, 3}));
}

TEST(Planner, StartEqualsGoalIsEmptyPath) {
    const GridMap g = open_grid(5, 5);
    const Trajectory t = plan(g, Cell{2, 2}, Cell{2, 2});
    EXPECT_EQ(t.waypoints.size(), 1u);
    EXPECT_TRUE(t.finished());
}

TEST(Planner, BlockedOrUnreachableThrows) {
    GridMap g = open_grid(7, 5);
    EXPECT_THROW(plan(g, Cell{0, 0}, Cell{3, 3}), NoPathError);
    for (int r = 0; r < 5; ++r) g.block({3, r});
    EXPECT_THROW(plan(g, Cell{1, 1}, Cell{5, 1}), NoPathError);
}

TEST(Planner, ExtraBlockedDetoursButKeepsEndpoints) {
    const GridMap g = open_grid(8, 5);
    const auto wall = [](Cell c) { return c.col == 4 && c.row != 3; };
    const Trajectory t = plan(g, Cell{1, 1}, Cell{6, 1}, wall);
    for (Cell c : t.cells) EXPECT_FALSE(wall(c));
    const auto both = [](Cell c) { return c == Cell{1, 1} || c == Cell{6, 1}; };
    EXPECT_NO_THROW(plan(g, Cell{1, 1}, Cell{6, 1}, both));
}

TEST(Planner, TieBreakIsDeterministic) {
    const GridMap g = open_grid(10, 10);
    const Trajectory a = plan(g, Cell{1, 1}, Cell{8, 5});
    const Trajectory b = plan(g, Cell{1, 1}, Cell{8, 5});
    EXPECT_EQ(a.cells, b.cells);
}

TEST(Planner, PropertyMatchesDijkstraOnRandomGrids) {
    std::mt19937_64 gen(2024);
    int compared = 0;
    for (int trial = 0; trial < 40; ++trial) {
        const auto blocked = arviz::testing::random_blockage(14, 14, 0.25, gen);
        const GridMap g = arviz::testing::to_grid(blocked);
        std::uniform_int_distribution<int> pick(1, 12);
        for (int k = 0; k < 5; ++k) {
            const Cell s{pick(gen), pick(gen)};
            const Cell e{pick(gen), pick(gen)};
            const auto oracle = dijkstra(blocked, s, e);
            if (!oracle) {
                EXPECT_THROW(plan(g, s, e), NoPathError);
                continue;
            }
            const Trajectory t = plan(g, s, e);
            EXPECT_EQ(t.steps, *oracle) << to_string(s) << " -> " << to_string(e);
            for (std::size_t i = 1; i < t.cells.size(); ++i) EXPECT_TRUE(g.canStep(t.cells[i - 1], t.cells[i]));
            ++compared;
        }
    }
    EXPECT_GT(compared, 50);
}

TEST(Trajectory, PoseInterpolatesAlongSegments) {
    const GridMap g = open_grid(10, 3);
    Trajectory t = plan(g, Cell{1, 1}, Cell{5, 1});
    const Pose mid = t.poseAt(1.0);
    EXPECT_DOUBLE_EQ(mid.x, 1.75);
    EXPECT_DOUBLE_EQ(mid.y, 0.75);
    EXPECT_NEAR(mid.heading, 0.0, 1e-12);
    t.progress = 0.25;
    EXPECT_FALSE(t.atWaypoint());
    t.progress = 0.5;
    EXPECT_TRUE(t.atWaypoint());
    EXPECT_EQ(t.segmentIndex(), 1u);
}

TEST(Advance, MovesSpeedTimesDtAndStopsAtGoal) {
    const GridMap g = open_grid(10, 3);
    RobotState r;
    r.cell = {1, 1};
    r.trajectory = plan(g, Cell{1, 1}, Cell{3, 1});
    r.pose = r.trajectory->currentPose();
    const auto any = [](Cell) { return true; };
    for (int i = 0; i < 10; ++i) r = advance(r, 0.5, 0.1, any);
    EXPECT_DOUBLE_EQ(r.trajectory->progress, 0.5);
    EXPECT_EQ(r.cell, (Cell{2, 1}));
    for (int i = 0; i < 30; ++i) r = advance(r, 0.5, 0.1, any);
    EXPECT_TRUE(r.trajectory->finished());
    EXPECT_EQ(r.cell, (Cell{3, 1}));
    EXPECT_FALSE(r.nextCell.has_value());
}

TEST(Advance, RefusedCellHoldsAtWaypoint) {
    const GridMap g = open_grid(10, 3);
    RobotState r;
    r.cell = {1, 1};
    r.trajectory = plan(g, Cell{1, 1}, Cell{4, 1});
    r.pose = r.trajectory->currentPose();
    const auto wall = [](Cell c) { return c != Cell{3, 1}; };
    for (int i = 0; i < 40; ++i) r = advance(r, 0.5, 0.1, wall);
    EXPECT_EQ(r.cell, (Cell{2, 1}));
    EXPECT_DOUBLE_EQ(r.trajectory->progress, 0.5);
    EXPECT_GT(r.heldFor, 2.0);
    EXPECT_DOUBLE_EQ(r.pose.x, 1.25);
}
