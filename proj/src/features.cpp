#include "arviz/features.hpp"

#include <sstream>


namespace arviz {

void validate(const DiscretizationThresholds& th) {
    auto require = [](bool ok, const char* what) {
        if (!ok) throw ConfigError(std::string("invalid thresholds: ") + what);
    };
    require(th.humanClose > 0.0 && th.humanClose < th.humanModerate, "0 < humanClose < humanModerate");
    require(th.waitShort > 0.0 && th.waitShort < th.waitMedium, "0 < waitShort < waitMedium");
    require(th.remainingFewMax >= 0, "remainingFewMax >= 0");
    require(th.nearbyRadius > 0.0, "nearbyRadius > 0");
    require(th.nearbyFewMax >= 0 && th.vizFewMax >= 0 && th.stationFewMax >= 0, "count thresholds >= 0");
}

std::string fingerprint(const DiscretizationThresholds& th) {
    std::ostringstream os;
    os << format6(th.humanClose) << ' ' << format6(th.humanModerate) << ' ' << format6(th.waitShort) << ' '
       << format6(th.waitMedium) << ' ' << th.remainingFewMax << ' ' << format6(th.nearbyRadius) << ' '
       << th.nearbyFewMax << ' ' << th.vizFewMax << ' ' << th.stationFewMax << ' '
       << static_cast<int>(th.vizCountMode);
    return hex64(fnv1a64(os.str()));
}

Proximity bin_proximity(double meters, const DiscretizationThresholds& th) {
    if (meters < th.humanClose) return Proximity::Close;
    if (meters < th.humanModerate) return Proximity::Moderate;
    return Proximity::Far;
}

WaitLevel bin_wait(double seconds, const DiscretizationThresholds& th) {
    if (seconds < th.waitShort) return WaitLevel::Short;
    if (seconds < th.waitMedium) return WaitLevel::Medium;
    return WaitLevel::Long;
}

namespace {

Amount few_if(int count, int fewMax) { return count <= fewMax ? Amount::Few : Amount::Many; }

double wait_of(const RobotState& r, double now) {
    if (r.status != RobotStatus::WaitingAtStation || !r.waitStart) return 0.0;
    return now - *r.waitStart;
}

}  // namespace

RobotAgentFeatures extract_robot_features(const WorldSnapshot& snap, int robotId, const DiscretizationThresholds& th) {
    const RobotState& r = snap.robot(robotId);
    RobotAgentFeatures f;
    f.humanState = bin_proximity(distance(snap.worker.pose.position(), r.pose.position()), th);
    f.robotTaskState = (r.status == RobotStatus::Idle || r.status == RobotStatus::ToShelf) ? TaskPhase::Picking
                                                                                            : TaskPhase::Dropping;
    f.robotRemainingTasks = few_if(r.remainingTasks, th.remainingFewMax);
    f.robotWaitingTime = bin_wait(wait_of(r, snap.simTime), th);

    int nearby = 0;
    int viz = 0;
    for (const RobotState& other : snap.robots) {
        if (other.id == r.id) continue;
        if (distance(other.pose.position(), r.pose.position()) >= th.nearbyRadius) continue;
        ++nearby;
        if (static_cast<std::size_t>(other.id) < snap.frame.robots.size()) {
            const RobotVizAction& ch = snap.frame.robots[static_cast<std::size_t>(other.id)].channels;
            viz += th.vizCountMode == VizCountMode::TotalChannels ? ch.enabledCount() : (ch.any() ? 1 : 0);
        }
    }
    f.nearbyRobots = few_if(nearby, th.nearbyFewMax);
    f.nearbyRobotVizStatus = few_if(viz, th.vizFewMax);
    return f;
}

StationAgentFeatures extract_station_features(const WorldSnapshot& snap, int stationId,
                                              const DiscretizationThresholds& th) {
    const StationState& s = snap.station(stationId);
    StationAgentFeatures f;
    f.humanState = bin_proximity(distance(snap.worker.pose.position(), s.position), th);
    double maxWait = 0.0;
    for (int id : s.waitingRobots) maxWait = std::max(maxWait, wait_of(snap.robot(id), snap.simTime));
    f.robotsWaitingTimeDS = bin_wait(maxWait, th);
    f.nRobotsAtDropStation = few_if(static_cast<int>(s.waitingRobots.size()), th.stationFewMax);
    return f;
}

int encode(const RobotAgentFeatures& f) {
    int i = static_cast<int>(f.humanState);
    i = i * 2 + static_cast<int>(f.robotTaskState);
    i = i * 2 + static_cast<int>(f.robotRemainingTasks);
    i = i * 3 + static_cast<int>(f.robotWaitingTime);
    i = i * 2 + static_cast<int>(f.nearbyRobots);
    i = i * 2 + static_cast<int>(f.nearbyRobotVizStatus);
    return i;
}

int encode(const StationAgentFeatures& f) {
    int i = static_cast<int>(f.humanState);
    i = i * 3 + static_cast<int>(f.robotsWaitingTimeDS);
    i = i * 2 + static_cast<int>(f.nRobotsAtDropStation);
    return i;
}

RobotAgentFeatures decode_robot(int index) {
    if (index < 0 || index >= kRobotStates) throw LookupError("robot state index out of range");
    RobotAgentFeatures f;
    f.nearbyRobotVizStatus = static_cast<Amount>(index % 2);
    index /= 2;
    f.nearbyRobots = static_cast<Amount>(index % 2);
    index /= 2;
    f.robotWaitingTime = static_cast<WaitLevel>(index % 3);
    index /= 3;
    f.robotRemainingTasks = static_cast<Amount>(index % 2);
    index /= 2;
    f.robotTaskState = static_cast<TaskPhase>(index % 2);
    index /= 2;
    f.humanState = static_cast<Proximity>(index);
    return f;
}

StationAgentFeatures decode_station(int index) {
    if (index < 0 || index >= kStationStates) throw LookupError("station state index out of range");
    StationAgentFeatures f;
    f.nRobotsAtDropStation = static_cast<Amount>(index % 2);
    index /= 2;
    f.robotsWaitingTimeDS = static_cast<WaitLevel>(index % 3);
    index /= 3;
    f.humanState = static_cast<Proximity>(index);
    return f;
}

}  // namespace arviz
