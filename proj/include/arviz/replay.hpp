#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "arviz/commands.hpp"
#include "arviz/scenario.hpp"
#include "arviz/simulation.hpp"

namespace arviz {

struct LoggedCommand {
    std::uint64_t tick = 0;  // applied at the boundary before tick+1
    InboundCommand command;
    bool operator==(const LoggedCommand&) const = default;
};

/// Everything needed to reproduce one interactive trial.
struct ReplayLog {
    std::string configFingerprint;
    std::string policy;  // builtin kind name or policy file path
    std::uint64_t seed = 0;
    std::uint64_t endTick = 0;
    std::vector<LoggedCommand> commands;
    bool operator==(const ReplayLog&) const = default;
};

void save_replay(std::ostream& os, const ReplayLog& log);
ReplayLog load_replay(std::istream& is);

/// Hooks a simulation so every applied command lands in `log`.
void record_commands(Simulation& sim, ReplayLog& log);

/// Re-runs the trial, applying each logged command at its tick, up to
/// endTick (or completion). Returns the metrics at that point.
TrialMetrics replay(const ScenarioConfig& config, const Policy& policy, const ReplayLog& log);

}  // namespace arviz
