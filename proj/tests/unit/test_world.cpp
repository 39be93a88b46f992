#include <gtest/gtest.h>

#include "arviz/scenario.hpp"
#include "arviz/world.hpp"
#include "oracles.hpp"

using namespace arviz;

namespace {

World build_mini(const WarehouseConfig& c) { return build_world(c, mini_scenario().worker); }

}  // namespace

TEST(World, MiniConfigHasSixIdleRobots) {
    const WarehouseConfig c = mini_config();
    EXPECT_EQ(c.shelves.size(), 18u);
    const World w = build_mini(c);
    ASSERT_EQ(w.state().robots.size(), 6u);
    for (const RobotState& r : w.state().robots) {
        EXPECT_EQ(r.status, RobotStatus::Idle);
        EXPECT_EQ(r.remainingTasks, c.boxesPerRobot);
        EXPECT_EQ(r.pose.position(), c.homePositions[static_cast<std::size_t>(r.id)]);
    }
    EXPECT_EQ(w.state().simTime, 0.0);
    EXPECT_FALSE(w.trialComplete());
}

TEST(World, MainConfigMatchesDocumentedScale) {
    const WarehouseConfig c = main_config();
    EXPECT_EQ(c.nRobots, 12);
    EXPECT_EQ(c.stations.size(), 4u);
    EXPECT_EQ(c.shelves.size(), 36u);
    EXPECT_DOUBLE_EQ(c.width, 40.0);
    EXPECT_DOUBLE_EQ(c.height, 30.0);
    EXPECT_NO_THROW(build_mini(c));
}

TEST(World, EmptyTeamIsTriviallyComplete) {
    WarehouseConfig c = mini_config();
    c.nRobots = 0;
    c.homePositions.clear();
    const World w = build_mini(c);
    EXPECT_TRUE(w.state().robots.empty());
    EXPECT_TRUE(w.trialComplete());
}

TEST(World, HomeOnShelfIsRejected) {
    WarehouseConfig c = mini_config();
    const Cell shelf = c.shelves.front();
    c.homePositions[0] = {(shelf.col + 0.5) * c.cellSize, (shelf.row + 0.5) * c.cellSize};
    try {
        build_mini(c);
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("shelf"), std::string::npos);
    }
}

TEST(World, InvariantViolationsNameTheInvariant) {
    auto expect_error = [](WarehouseConfig c, const std::string& fragment) {
        try {
            validate(c);
            ADD_FAILURE() << "expected ConfigError mentioning " << fragment;
        } catch (const ConfigError& e) {
            EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
        }
    };
    WarehouseConfig c = mini_config();
    c.nRobots = 5;
    expect_error(c, "nRobots");
    c = mini_config();
    c.robotSpeed = 0;
    expect_error(c, "robotSpeed");
    c = mini_config();
    c.stations.clear();
    expect_error(c, "station");
    c = mini_config();
    c.homePositions[1] = c.homePositions[0];
    expect_error(c, "distinct");
    c = mini_config();
    c.homePositions[0] = {100, 1};
    expect_error(c, "bounds");
    c = mini_config();
    c.stations[1].id = 7;
    expect_error(c, "ids");
}

TEST(World, ShelvesAndWallsAreBlocked) {
    const WarehouseConfig c = mini_config();
    const GridMap g = make_grid(c);
    for (Cell s : c.shelves) EXPECT_TRUE(g.isBlocked(s));
    EXPECT_EQ(g.columns(), 40);
    EXPECT_EQ(g.rows(), 30);
}

TEST(World, PickupCellIsAFreeNeighbourOfTheShelf) {
    const World w = build_world(main_config());
    for (Cell s : w.config().shelves) {
        const Cell p = w.pickupCell(s);
        EXPECT_FALSE(w.grid().isBlocked(p));
        EXPECT_LE(std::abs(p.col - s.col) + std::abs(p.row - s.row), 1);
    }
}

TEST(World, StationDocksAreFreeNeighboursInOrder) {
    const World w = build_world(arviz::testing::micro_world().world, arviz::testing::micro_world().worker);
    const StationState& s = w.state().station(0);
    EXPECT_EQ(s.cell, (Cell{1, 2}));
    const std::vector<Cell> expected{{1, 1}, {2, 1}, {2, 2}};
    EXPECT_EQ(s.docks, expected);
}

TEST(World, LookupOfUnknownIdsThrows) {
    const World w = build_mini(mini_config());
    EXPECT_THROW(w.state().robot(99), LookupError);
    EXPECT_THROW(w.state().station(5), LookupError);
}

TEST(World, SameConfigGivesIdenticalSnapshots) {
    EXPECT_EQ(build_world(main_config()).snapshot(), build_world(main_config()).snapshot());
}

TEST(World, InitialFrameHasEveryChannelOffAndDistinctColors) {
    const World w = build_world(main_config());
    EXPECT_EQ(w.state().frame.enabledCount(), 0);
    std::set<std::uint32_t> colors;
    for (const RobotVisual& v : w.state().frame.robots) colors.insert(v.color);
    EXPECT_EQ(colors.size(), 12u);
}
