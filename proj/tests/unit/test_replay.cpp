#include <gtest/gtest.h>

#include <sstream>

#include "arviz/replay.hpp"
#include "oracles.hpp"

using namespace arviz;

namespace {

// Drives a mini-world trial with a fixed script of operator commands.
TrialMetrics scripted_session(const ScenarioConfig& c, const Policy& p, ReplayLog& log, std::uint64_t stopTick) {
    Simulation sim(c, std::make_shared<Policy>(p), log.seed);
    record_commands(sim, log);
    while (!sim.finished() && sim.state().tick < stopTick) {
        const std::uint64_t t = sim.state().tick;
        if (t == 10) sim.enqueue({1, ModeSwitch{OperatorMode::Worker}});
        if (t == 11) sim.enqueue({2, Teleop{{1.0, 0.0}, 0.3}});
        if (t == 50) sim.enqueue({3, SetChannel{AgentKind::Robot, 2, VizChannel::Trajectory, false}});
        if (t == 80) sim.enqueue({4, Teleop{{0.0, -1.0}, 0.0}});
        if (t == 200) sim.enqueue({5, ModeSwitch{OperatorMode::Expert}});
        if (t == 210) sim.enqueue({6, SetChannel{AgentKind::Robot, 99, VizChannel::Trajectory, false}});
        sim.step();
    }
    log.endTick = sim.state().tick;
    return sim.metrics();
}

}  // namespace

TEST(Replay, ReproducesARecordedSession) {
    const ScenarioConfig c = mini_scenario();
    const Policy p = Policy::builtin(PolicyKind::Crmiar);
    ReplayLog log;
    log.configFingerprint = fingerprint(c);
    log.policy = "crmiar";
    log.seed = 5;
    const TrialMetrics live = scripted_session(c, p, log, 3000);
    // The invalid robot-99 command is never applied, so it is not logged.
    ASSERT_EQ(log.commands.size(), 5u);
    EXPECT_EQ(log.commands[0].tick, 10u);
    EXPECT_EQ(replay(c, p, log), live);

    std::stringstream ss;
    save_replay(ss, log);
    const ReplayLog back = load_replay(ss);
    EXPECT_EQ(back, log);
    EXPECT_EQ(replay(c, p, back), live);
}

TEST(Replay, RejectsConfigMismatchAndBadFiles) {
    const ScenarioConfig c = mini_scenario();
    ReplayLog log;
    log.configFingerprint = fingerprint(main_scenario());
    EXPECT_THROW(replay(c, Policy::builtin(PolicyKind::AllOn), log), FormatError);

    std::istringstream bad("arviz-replay 2\n");
    EXPECT_THROW(load_replay(bad), FormatError);
    std::istringstream badCmd("arviz-replay 1\nconfig x\npolicy allon\nseed 1\nendTick 5\ncmd 3 {\"type\":\"fly\"}\n");
    try {
        load_replay(badCmd);
        FAIL();
    } catch (const FormatError& e) {
        EXPECT_EQ(e.line, 6u);
    }
}
