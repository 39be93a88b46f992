#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace arviz {

enum class RobotChannel : std::uint8_t { LiveLocation = 0, TransparentAvatar = 1, Trajectory = 2 };
inline constexpr std::array kRobotChannels = {RobotChannel::LiveLocation, RobotChannel::TransparentAvatar,
                                              RobotChannel::Trajectory};
inline constexpr int kRobotChannelCount = 3;

std::string_view to_string(RobotChannel c);
std::optional<RobotChannel> parse_robot_channel(std::string_view s);

/// Visualization toggles for one robot. Packs into 3 bits in channel order.
struct RobotVizAction {
    bool liveLocation = false;
    bool transparentAvatar = false;
    bool trajectory = false;

    static constexpr RobotVizAction allOn() { return {true, true, true}; }
    static constexpr RobotVizAction allOff() { return {}; }

    bool get(RobotChannel c) const;
    void set(RobotChannel c, bool on);
    int enabledCount() const { return int(liveLocation) + int(transparentAvatar) + int(trajectory); }
    bool any() const { return enabledCount() > 0; }

    std::uint8_t bits() const;
    static RobotVizAction fromBits(std::uint8_t bits);

    bool operator==(const RobotVizAction&) const = default;
};

struct StationVizAction {
    bool balloon = false;

    std::uint8_t bits() const { return balloon ? 1 : 0; }
    static StationVizAction fromBits(std::uint8_t bits) { return {(bits & 1u) != 0}; }

    bool operator==(const StationVizAction&) const = default;
};

}  // namespace arviz
