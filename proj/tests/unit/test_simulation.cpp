#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "arviz/simulation.hpp"
#include "oracles.hpp"

using namespace arviz;
using arviz::testing::micro_world;

namespace {

std::shared_ptr<const Policy> all_on() { return std::make_shared<Policy>(Policy::builtin(PolicyKind::AllOn)); }

void run_until(Simulation& sim, double t) {
    while (sim.state().simTime < t - 1e-9 && sim.step() == StepStatus::Advanced) {
    }
}

}  // namespace

// Hand-computed timeline of the micro world. Robot: home cell (10,1), pickup
// cell (18,1), dock (1,1), all on row 1, so every leg is straight.
TEST(MicroWorld, ClosedFormTimeline) {
    const ScenarioConfig c = micro_world();
    const double v = c.world.robotSpeed;
    const double cell = c.world.cellSize;
    const double dt = c.world.tickDuration;
    const double atShelf = (18 - 10) * cell / v;
    const double atDock = atShelf + (18 - 1) * cell / v;
    // The worker decides on the arrival tick, is busy for tau0, then walks
    // straight toward the station along y = 1.25 and unloads on the first tick
    // it is within the unload radius of the robot at (0.75, 0.75).
    const double busyUntil = atDock + c.worker.baseLatency;
    const double reachX = 0.75 + std::sqrt(c.world.unloadRadius * c.world.unloadRadius - 0.25);
    const int ticks = static_cast<int>(std::ceil((c.worker.start.x - reachX) / (c.worker.speed * dt)));
    const double unloadAt = busyUntil - dt + ticks * dt;
    const double home = unloadAt + (10 - 1) * cell / v;

    Simulation sim(c, all_on(), 1);
    run_until(sim, atShelf);
    EXPECT_EQ(sim.state().robots[0].status, RobotStatus::ToStation);
    run_until(sim, atDock);
    EXPECT_EQ(sim.state().robots[0].status, RobotStatus::WaitingAtStation);
    EXPECT_NEAR(sim.state().worker.busyUntil, busyUntil, 1e-9);
    while (sim.step() == StepStatus::Advanced) {
    }
    ASSERT_EQ(sim.unloadEvents().size(), 1u);
    EXPECT_NEAR(sim.unloadEvents()[0].waitStart, atDock, 1e-6);
    EXPECT_NEAR(sim.unloadEvents()[0].unloadTime, unloadAt, 1e-6);
    const TrialMetrics m = sim.metrics();
    EXPECT_NEAR(m.totalWait, unloadAt - atDock, 1e-6);
    EXPECT_NEAR(m.completionTime, home, 1e-6);
    EXPECT_EQ(m.boxesDelivered, 1);
    EXPECT_FALSE(m.timedOut);
    EXPECT_DOUBLE_EQ(m.totalWait, 4.0);
    EXPECT_DOUBLE_EQ(m.completionTime, 38.0);
}

TEST(Trial, EmptyTeamCompletesImmediately) {
    ScenarioConfig c = micro_world();
    c.world.nRobots = 0;
    c.world.homePositions.clear();
    Simulation sim(c, all_on(), 1);
    EXPECT_TRUE(sim.complete());
    EXPECT_EQ(sim.step(), StepStatus::TrialComplete);
    const TrialMetrics m = sim.metrics();
    EXPECT_EQ(m.totalWait, 0.0);
    EXPECT_EQ(m.completionTime, 0.0);
}

TEST(Trial, DeterministicForFixedInputs) {
    const ScenarioConfig c = mini_scenario();
    const Policy p = Policy::builtin(PolicyKind::Crmiar);
    const TrialMetrics a = run_trial(c, p, 21);
    EXPECT_EQ(a, run_trial(c, p, 21));
    EXPECT_NE(a.totalWait, run_trial(c, p, 22).totalWait);
}

TEST(Trial, MetricsInvariantsOnTheMainWorld) {
    const ScenarioConfig c = main_scenario();
    Simulation sim(c, all_on(), 4);
    while (sim.step() == StepStatus::Advanced) {
    }
    ASSERT_TRUE(sim.complete());
    const TrialMetrics m = sim.metrics();
    EXPECT_EQ(m.boxesDelivered, c.world.nRobots * c.world.boxesPerRobot);
    double fromEvents = 0.0;
    for (const UnloadEvent& e : sim.unloadEvents()) fromEvents += e.unloadTime - e.waitStart;
    EXPECT_NEAR(m.totalWait, fromEvents, 1e-4);
    EXPECT_NEAR(m.totalWait, std::accumulate(m.perRobotWait.begin(), m.perRobotWait.end(), 0.0), 1e-4);
    EXPECT_TRUE(sim.pool().empty());
    for (const RobotState& r : sim.state().robots) {
        EXPECT_EQ(r.status, RobotStatus::Done);
        EXPECT_EQ(r.pose.position(), c.world.homePositions[static_cast<std::size_t>(r.id)]);
    }
}

TEST(Trial, TimeCapStopsWithPartialMetrics) {
    ScenarioConfig c = micro_world();
    c.sim.timeCap = 27.0;
    Simulation sim(c, all_on(), 1);
    StepStatus s = StepStatus::Advanced;
    while (s == StepStatus::Advanced) s = sim.step();
    EXPECT_EQ(s, StepStatus::TimedOut);
    const TrialMetrics m = sim.metrics();
    EXPECT_TRUE(m.timedOut);
    EXPECT_NEAR(m.completionTime, 27.0, 1e-9);
    EXPECT_NEAR(m.totalWait, 2.0, 1e-6);
    EXPECT_EQ(m.boxesDelivered, 0);
}

TEST(Unload, RadiusBoundary) {
    for (const auto& [offset, expectUnload] : {std::pair{0.9, true}, std::pair{1.1, false}}) {
        ScenarioConfig c = micro_world();
        c.worker.start = {0.75 + offset, 0.75};
        Simulation sim(c, all_on(), 1);
        sim.enqueue({0, ModeSwitch{OperatorMode::Worker}});
        run_until(sim, 25.0);
        EXPECT_EQ(sim.unloadEvents().size(), expectUnload ? 1u : 0u) << offset;
        run_until(sim, 30.0);
        EXPECT_EQ(sim.unloadEvents().size(), expectUnload ? 1u : 0u) << offset;
        if (expectUnload) {
            EXPECT_EQ(sim.unloadEvents()[0].unloadTime, 25.0);
            EXPECT_NE(sim.state().robots[0].status, RobotStatus::WaitingAtStation);
        } else {
            EXPECT_EQ(sim.state().robots[0].status, RobotStatus::WaitingAtStation);
        }
    }
}

TEST(Commands, PauseResumeAndSpeed) {
    Simulation sim(micro_world(), all_on(), 1);
    sim.enqueue({1, Pause{}});
    sim.pollCommands();
    EXPECT_TRUE(sim.paused());
    EXPECT_EQ(sim.state().tick, 0u);
    sim.enqueue({2, SetSpeed{4.0}});
    sim.enqueue({3, SetSpeed{0.0}});
    sim.enqueue({4, Resume{}});
    sim.pollCommands();
    EXPECT_FALSE(sim.paused());
    EXPECT_EQ(sim.speedMultiplier(), 4.0);
}

TEST(Commands, TeleopMovesInTheWorkerFrame) {
    const ScenarioConfig c = micro_world();
    Simulation sim(c, all_on(), 1);
    sim.enqueue({1, ModeSwitch{OperatorMode::Worker}});
    sim.enqueue({2, Teleop{{1.0, 0.0}, 0.0}});
    for (int i = 0; i < 5; ++i) sim.step();
    EXPECT_EQ(sim.mode(), OperatorMode::Worker);
    EXPECT_EQ(sim.state().worker.mode, WorkerMode::Teleoperated);
    EXPECT_NEAR(sim.state().worker.pose.x, c.worker.start.x + 5 * c.worker.speed * 0.1, 1e-9);
    EXPECT_NEAR(sim.state().worker.pose.y, c.worker.start.y, 1e-9);

    // A right turn by 90 degrees points "forward" along -y.
    sim.enqueue({3, Teleop{{3.0, 4.0}, -kPi / 2}});
    const Pose before = sim.state().worker.pose;
    sim.step();
    const Pose after = sim.state().worker.pose;
    EXPECT_NEAR(after.heading, -kPi / 2, 1e-12);
    // Direction (0.6, 0.8) in the worker frame is (0.8, -0.6) in the world frame.
    EXPECT_NEAR(after.x - before.x, 0.8 * c.worker.speed * 0.1, 1e-9);
    EXPECT_NEAR(after.y - before.y, -0.6 * c.worker.speed * 0.1, 1e-9);

    for (int i = 0; i < 40; ++i) sim.step();
    // Walls stop the worker instead of letting it leave the free cells.
    EXPECT_FALSE(sim.world().grid().isBlocked(sim.world().grid().cellOf(sim.state().worker.pose.position())));

    sim.enqueue({4, ModeSwitch{OperatorMode::Expert}});
    sim.step();
    EXPECT_EQ(sim.state().worker.mode, WorkerMode::Scripted);
    EXPECT_EQ(sim.state().worker.teleopVelocity, Point{});
}

TEST(Commands, InvalidCommandsAreIgnoredAndValidOnesRecorded) {
    Simulation sim(micro_world(), all_on(), 1);
    std::vector<std::pair<std::uint64_t, InboundCommand>> log;
    sim.setCommandRecorder([&](std::uint64_t tick, const InboundCommand& c) { log.emplace_back(tick, c); });
    std::vector<SetChannel> seen;
    sim.setChannelSink([&](const SetChannel& s) { seen.push_back(s); });
    sim.step();
    sim.enqueue({1, SetChannel{AgentKind::Robot, 7, VizChannel::Trajectory, true}});
    sim.enqueue({2, SetChannel{AgentKind::Station, 0, VizChannel::Balloon, false}});
    sim.step();
    ASSERT_EQ(log.size(), 1u);
    EXPECT_EQ(log[0].first, 1u);
    EXPECT_EQ(log[0].second.id, 2u);
    ASSERT_EQ(seen.size(), 1u);
    EXPECT_EQ(seen[0].agentKind, AgentKind::Station);
}

TEST(Render, FrameFollowsPolicySwapAtTheNextTick) {
    Simulation sim(micro_world(), all_on(), 1);
    sim.step();
    EXPECT_GT(sim.state().frame.enabledCount(), 0);
    sim.setPolicy(std::make_shared<Policy>(Policy::builtin(PolicyKind::NoViz)));
    sim.step();
    EXPECT_EQ(sim.state().frame.enabledCount(), 0);
}
