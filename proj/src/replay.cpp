#include "arviz/replay.hpp"

#include <istream>
#include <ostream>
#include <sstream>

#include "arviz/protocol.hpp"

namespace arviz {

namespace {
constexpr const char* kReplayMagic = "arviz-replay";
constexpr int kReplayVersion = 1;
}  // namespace

void save_replay(std::ostream& os, const ReplayLog& log) {
    os << kReplayMagic << ' ' << kReplayVersion << '\n'
       << "config " << log.configFingerprint << '\n'
       << "policy " << log.policy << '\n'
       << "seed " << log.seed << '\n'
       << "endTick " << log.endTick << '\n';
    for (const LoggedCommand& c : log.commands) os << "cmd " << c.tick << ' ' << to_json(c.command) << '\n';
}

ReplayLog load_replay(std::istream& is) {
    ReplayLog log;
    std::string line;
    std::size_t n = 0;
    auto fail = [&](const std::string& what) -> void { throw FormatError(what, n); };
    auto next = [&]() {
        while (std::getline(is, line)) {
            ++n;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (!line.empty()) return true;
        }
        return false;
    };
    if (!next() || line != std::string(kReplayMagic) + ' ' + std::to_string(kReplayVersion)) {
        fail("not an arviz-replay 1 file");
    }
    bool seenConfig = false, seenPolicy = false, seenSeed = false, seenEnd = false;
    while (next()) {
        const std::size_t sp = line.find(' ');
        if (sp == std::string::npos) fail("expected '<key> <value>'");
        const std::string key = line.substr(0, sp);
        const std::string rest = line.substr(sp + 1);
        try {
            if (key == "config") {
                log.configFingerprint = rest;
                seenConfig = true;
            } else if (key == "policy") {
                log.policy = rest;
                seenPolicy = true;
            } else if (key == "seed") {
                log.seed = std::stoull(rest);
                seenSeed = true;
            } else if (key == "endTick") {
                log.endTick = std::stoull(rest);
                seenEnd = true;
            } else if (key == "cmd") {
                const std::size_t sp2 = rest.find(' ');
                if (sp2 == std::string::npos) fail("cmd needs a tick and a message");
                LoggedCommand c{std::stoull(rest.substr(0, sp2)), parse_command(rest.substr(sp2 + 1))};
                if (!log.commands.empty() && c.tick < log.commands.back().tick) fail("cmd ticks must not decrease");
                log.commands.push_back(std::move(c));
            } else {
                fail("unknown replay key '" + key + "'");
            }
        } catch (const std::logic_error&) {
            fail("malformed value for '" + key + "'");
        } catch (const ProtocolError& e) {
            fail(std::string("bad command: ") + e.what());
        }
    }
    if (!(seenConfig && seenPolicy && seenSeed && seenEnd)) fail("replay header incomplete");
    return log;
}

void record_commands(Simulation& sim, ReplayLog& log) {
    sim.setCommandRecorder([&log](std::uint64_t tick, const InboundCommand& cmd) { log.commands.push_back({tick, cmd}); });
}

TrialMetrics replay(const ScenarioConfig& config, const Policy& policy, const ReplayLog& log) {
    if (log.configFingerprint != fingerprint(config)) {
        throw FormatError("replay log was recorded under a different config");
    }
    Simulation sim(config, std::make_shared<const Policy>(policy), log.seed);
    std::size_t next = 0;
    for (;;) {
        const std::uint64_t tick = sim.state().tick;
        while (next < log.commands.size() && log.commands[next].tick == tick) sim.enqueue(log.commands[next++].command);
        sim.pollCommands();
        if (tick >= log.endTick || sim.step() != StepStatus::Advanced) break;
    }
    return sim.metrics();
}

}  // namespace arviz
