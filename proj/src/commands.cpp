#include "arviz/commands.hpp"

namespace arviz {

std::string_view to_string(VizChannel c) {
    switch (c) {
        case VizChannel::LiveLocation: return "liveLocation";
        case VizChannel::TransparentAvatar: return "transparentAvatar";
        case VizChannel::Trajectory: return "trajectory";
        case VizChannel::Balloon: return "balloon";
    }
    return "?";
}

std::optional<VizChannel> parse_viz_channel(std::string_view s) {
    for (VizChannel c : {VizChannel::LiveLocation, VizChannel::TransparentAvatar, VizChannel::Trajectory,
                         VizChannel::Balloon}) {
        if (to_string(c) == s) return c;
    }
    return std::nullopt;
}

std::optional<std::string> check_command(const InboundCommand& cmd, int nRobots, int nStations) {
    if (const auto* set = std::get_if<SetChannel>(&cmd.command)) {
        const bool robot = set->agentKind == AgentKind::Robot;
        if (robot && set->channel == VizChannel::Balloon) return "robots have no balloon channel";
        if (!robot && set->channel != VizChannel::Balloon) return "stations only have a balloon channel";
        const int count = robot ? nRobots : nStations;
        if (set->agentId < 0 || set->agentId >= count) {
            return std::string("unknown agent: ") + (robot ? "robot " : "station ") + std::to_string(set->agentId);
        }
    } else if (const auto* speed = std::get_if<SetSpeed>(&cmd.command)) {
        if (!(speed->multiplier > 0.0 && speed->multiplier <= kMaxSpeedMultiplier)) {
            return "speed multiplier must be in (0, 16]";
        }
    } else if (const auto* tele = std::get_if<Teleop>(&cmd.command)) {
        if (!std::isfinite(tele->direction.x) || !std::isfinite(tele->direction.y) || !std::isfinite(tele->yawDelta)) {
            return "teleop values must be finite";
        }
    }
    return std::nullopt;
}

void CommandQueue::push(InboundCommand cmd) {
    std::lock_guard lock(mutex_);
    pending_.push_back(std::move(cmd));
}

std::vector<InboundCommand> CommandQueue::drain() {
    std::lock_guard lock(mutex_);
    std::vector<InboundCommand> out(std::make_move_iterator(pending_.begin()), std::make_move_iterator(pending_.end()));
    pending_.clear();
    return out;
}

std::size_t CommandQueue::size() const {
    std::lock_guard lock(mutex_);
    return pending_.size();
}

}  // namespace arviz
