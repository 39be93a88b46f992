#pragma once

#include <cstdint>

#include "arviz/world.hpp"

namespace arviz {

enum class Proximity : std::uint8_t { Close, Moderate, Far };
enum class TaskPhase : std::uint8_t { Picking, Dropping };
enum class Amount : std::uint8_t { Few, Many };
enum class WaitLevel : std::uint8_t { Short, Medium, Long };

/// Discrete state of one robot agent.
struct RobotAgentFeatures {
    Proximity humanState = Proximity::Close;
    TaskPhase robotTaskState = TaskPhase::Picking;
    Amount robotRemainingTasks = Amount::Few;
    WaitLevel robotWaitingTime = WaitLevel::Short;
    Amount nearbyRobots = Amount::Few;
    Amount nearbyRobotVizStatus = Amount::Few;

    bool operator==(const RobotAgentFeatures&) const = default;
};

/// Discrete state of one drop-station agent.
struct StationAgentFeatures {
    Proximity humanState = Proximity::Close;
    WaitLevel robotsWaitingTimeDS = WaitLevel::Short;
    Amount nRobotsAtDropStation = Amount::Few;

    bool operator==(const StationAgentFeatures&) const = default;
};

inline constexpr int kRobotStates = 3 * 2 * 2 * 3 * 2 * 2;  // 144
inline constexpr int kStationStates = 3 * 3 * 2;            // 18

/// How nearbyRobotVizStatus counts: robots with at least one enabled channel,
/// or the total number of enabled channels on nearby robots.
enum class VizCountMode : std::uint8_t { RobotsWithAnyChannel, TotalChannels };

/// Bin boundaries. All bins are half-open: [lo, hi).
struct DiscretizationThresholds {
    double humanClose = 3.0;      // m
    double humanModerate = 10.0;  // m
    double waitShort = 10.0;      // s
    double waitMedium = 30.0;     // s
    int remainingFewMax = 1;
    double nearbyRadius = 5.0;    // m
    int nearbyFewMax = 2;
    int vizFewMax = 2;
    int stationFewMax = 1;
    VizCountMode vizCountMode = VizCountMode::RobotsWithAnyChannel;

    bool operator==(const DiscretizationThresholds&) const = default;
};

void validate(const DiscretizationThresholds& th);

/// Stable content hash of the thresholds (hex string).
std::string fingerprint(const DiscretizationThresholds& th);

Proximity bin_proximity(double meters, const DiscretizationThresholds& th);
WaitLevel bin_wait(double seconds, const DiscretizationThresholds& th);

/// Throws LookupError for an unknown robot id.
RobotAgentFeatures extract_robot_features(const WorldSnapshot& snap, int robotId,
                                          const DiscretizationThresholds& th);
/// Throws LookupError for an unknown station id.
StationAgentFeatures extract_station_features(const WorldSnapshot& snap, int stationId,
                                              const DiscretizationThresholds& th);

// Mixed-radix encoding, first field most significant.
int encode(const RobotAgentFeatures& f);
int encode(const StationAgentFeatures& f);
RobotAgentFeatures decode_robot(int index);
StationAgentFeatures decode_station(int index);

}  // namespace arviz
