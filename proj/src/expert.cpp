#include "arviz/expert.hpp"

#include <map>

namespace arviz {

RobotVizAction ScriptedExpert::robot_rule(const RobotAgentFeatures& f) {
    RobotVizAction a;
    a.trajectory = f.robotTaskState == TaskPhase::Dropping;
    a.liveLocation = f.robotWaitingTime != WaitLevel::Short || f.humanState == Proximity::Close;
    a.transparentAvatar = f.humanState == Proximity::Moderate && f.nearbyRobotVizStatus == Amount::Few;
    return a;
}

StationVizAction ScriptedExpert::station_rule(const StationAgentFeatures& f) {
    const bool needed = f.robotsWaitingTimeDS != WaitLevel::Short || f.nRobotsAtDropStation == Amount::Many;
    return {needed && f.humanState != Proximity::Close};
}

ScriptedExpert::ScriptedExpert() {
    for (int s = 0; s < kRobotStates; ++s) robot_[static_cast<std::size_t>(s)] = robot_rule(decode_robot(s)).bits();
    for (int s = 0; s < kStationStates; ++s) {
        station_[static_cast<std::size_t>(s)] = station_rule(decode_station(s)).bits();
    }
}

ScriptedExpert ScriptedExpert::fromTable(const TabularParams& table) {
    ScriptedExpert e;
    for (std::size_t s = 0; s < e.robot_.size(); ++s) {
        if (table.robot[s]) e.robot_[s] = *table.robot[s];
    }
    for (std::size_t s = 0; s < e.station_.size(); ++s) {
        if (table.station[s]) e.station_[s] = *table.station[s];
    }
    return e;
}

ExpertLabels ScriptedExpert::label(const WorldSnapshot& snap, const DiscretizationThresholds& th) {
    ExpertLabels out;
    out.robots.reserve(snap.robots.size());
    for (const RobotState& r : snap.robots) out.robots.push_back(robotLabel(encode(extract_robot_features(snap, r.id, th))));
    out.stations.reserve(snap.stations.size());
    for (const StationState& s : snap.stations) {
        out.stations.push_back(stationLabel(encode(extract_station_features(snap, s.id, th))));
    }
    return out;
}

InteractiveExpert::InteractiveExpert(int nRobots, int nStations) {
    checkboxes_.robots.assign(static_cast<std::size_t>(nRobots), RobotVizAction::allOn());
    checkboxes_.stations.assign(static_cast<std::size_t>(nStations), StationVizAction{true});
}

void InteractiveExpert::setRobotChannel(int robotId, RobotChannel channel, bool on) {
    std::lock_guard lock(mutex_);
    if (robotId < 0 || robotId >= static_cast<int>(checkboxes_.robots.size())) {
        throw LookupError("unknown robot id " + std::to_string(robotId));
    }
    checkboxes_.robots[static_cast<std::size_t>(robotId)].set(channel, on);
}

void InteractiveExpert::setBalloon(int stationIndex, bool on) {
    std::lock_guard lock(mutex_);
    if (stationIndex < 0 || stationIndex >= static_cast<int>(checkboxes_.stations.size())) {
        throw LookupError("unknown station index " + std::to_string(stationIndex));
    }
    checkboxes_.stations[static_cast<std::size_t>(stationIndex)].balloon = on;
}

void InteractiveExpert::setConnected(bool connected) {
    std::lock_guard lock(mutex_);
    connected_ = connected;
}

ExpertLabels InteractiveExpert::current() const {
    std::lock_guard lock(mutex_);
    return checkboxes_;
}

ExpertLabels InteractiveExpert::label(const WorldSnapshot&, const DiscretizationThresholds&) { return current(); }

bool InteractiveExpert::available() const {
    std::lock_guard lock(mutex_);
    return connected_;
}

ReplayExpert::ReplayExpert(const AggregatedDataset& log, int nRobots, int nStations) {
    const auto& recs = log.records();
    std::size_t i = 0;
    while (i < recs.size()) {
        const int iteration = recs[i].iteration;
        const double time = recs[i].simTime;
        ExpertLabels ev;
        ev.robots.assign(static_cast<std::size_t>(nRobots), RobotVizAction::allOn());
        ev.stations.assign(static_cast<std::size_t>(nStations), StationVizAction{true});
        std::size_t stationSlot = 0;
        for (; i < recs.size() && recs[i].iteration == iteration && recs[i].simTime == time; ++i) {
            const Demonstration& d = recs[i];
            if (d.agentKind == AgentKind::Robot) {
                if (d.agentId < 0 || d.agentId >= nRobots) throw FormatError("replay log robot id out of range");
                ev.robots[static_cast<std::size_t>(d.agentId)] = RobotVizAction::fromBits(d.action);
            } else {
                // Stations are recorded in snapshot order.
                if (stationSlot >= ev.stations.size()) throw FormatError("replay log has too many station records");
                ev.stations[stationSlot++] = StationVizAction::fromBits(d.action);
            }
        }
        events_.push_back(std::move(ev));
    }
}

ExpertLabels ReplayExpert::label(const WorldSnapshot&, const DiscretizationThresholds&) {
    if (cursor_ >= events_.size()) throw ExpertTimeout("replay log exhausted");
    return events_[cursor_];
}

void ReplayExpert::eventRecorded() { ++cursor_; }

}  // namespace arviz
