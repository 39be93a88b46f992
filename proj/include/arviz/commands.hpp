#pragma once

#include <cstdint>
#include <deque>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "arviz/actions.hpp"
#include "arviz/common.hpp"
#include "arviz/dataset.hpp"

namespace arviz {

enum class VizChannel : std::uint8_t { LiveLocation, TransparentAvatar, Trajectory, Balloon };
std::string_view to_string(VizChannel c);
std::optional<VizChannel> parse_viz_channel(std::string_view s);

enum class OperatorMode : std::uint8_t { Expert, Worker };

struct SetChannel {
    AgentKind agentKind = AgentKind::Robot;
    int agentId = 0;
    VizChannel channel = VizChannel::Trajectory;
    bool on = false;
    bool operator==(const SetChannel&) const = default;
};

/// Worker teleoperation. `direction` is in the worker's frame (x forward,
/// y left), magnitude clamped to 1; it persists until the next Teleop.
struct Teleop {
    Point direction;
    double yawDelta = 0.0;
    bool operator==(const Teleop&) const = default;
};

struct Pause {
    bool operator==(const Pause&) const = default;
};
struct Resume {
    bool operator==(const Resume&) const = default;
};
struct SetSpeed {
    double multiplier = 1.0;  // (0, 16]
    bool operator==(const SetSpeed&) const = default;
};
struct ModeSwitch {
    OperatorMode mode = OperatorMode::Expert;
    bool operator==(const ModeSwitch&) const = default;
};

using Command = std::variant<SetChannel, Teleop, Pause, Resume, SetSpeed, ModeSwitch>;

struct InboundCommand {
    std::uint64_t id = 0;
    Command command;
    bool operator==(const InboundCommand&) const = default;
};

inline constexpr double kMaxSpeedMultiplier = 16.0;

/// Checks agent references and ranges. Returns an error message, or nullopt.
std::optional<std::string> check_command(const InboundCommand& cmd, int nRobots, int nStations);

/// Multi-producer queue drained by the simulation thread at tick boundaries.
class CommandQueue {
public:
    void push(InboundCommand cmd);
    std::vector<InboundCommand> drain();
    std::size_t size() const;

private:
    mutable std::mutex mutex_;
    std::deque<InboundCommand> pending_;
};

}  // namespace arviz
