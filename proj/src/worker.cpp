#include "arviz/worker.hpp"

#include "arviz/frame.hpp"

namespace arviz {

std::set<int> known_stations(const WorldSnapshot& snap, const WorkerParams& params) {
    std::set<int> known;
    const HumanWorkerState& w = snap.worker;
    for (std::size_t i = 0; i < snap.stations.size(); ++i) {
        const StationState& s = snap.stations[i];
        bool aware = i < snap.frame.stations.size() && snap.frame.stations[i].balloon;
        for (int id : s.waitingRobots) {
            if (aware) break;
            if (static_cast<std::size_t>(id) >= snap.frame.robots.size()) continue;
            const RobotVizAction& ch = snap.frame.robots[static_cast<std::size_t>(id)].channels;
            aware = ch.liveLocation || ch.trajectory;
        }
        if (!aware) {
            aware = distance(w.pose.position(), s.position) <= params.sightRange &&
                    in_field_of_view(w.pose, s.position, params.fovHalfAngle);
        }
        if (aware) known.insert(s.id);
    }
    return known;
}

double decision_latency(const WorkerModel& model, const WorldSnapshot& snap, int* visibleElements) {
    const int n = count_visible_elements(snap.frame, snap, snap.worker.pose, snap.worker.fovHalfAngle);
    if (visibleElements) *visibleElements = n;
    return model.baseLatency + model.latencyPerElement * n;
}

WorkerDecision worker_decide(WorkerModel& model, const WorldSnapshot& snap, const WorkerParams& params) {
    model.knowledge = known_stations(snap, params);
    const HumanWorkerState& w = snap.worker;
    if (w.targetStation && !snap.station(*w.targetStation).waitingRobots.empty()) {
        return {w.targetStation, false, 0.0, 0};
    }
    const StationState* best = nullptr;
    double bestDistance = 0.0;
    for (const StationState& s : snap.stations) {
        if (!model.knowledge.contains(s.id) || s.waitingRobots.empty()) continue;
        const double d = distance(w.pose.position(), s.position);
        if (!best || d < bestDistance || (d == bestDistance && s.id < best->id)) {
            best = &s;
            bestDistance = d;
        }
    }
    if (!best) return {};
    WorkerDecision decision;
    decision.target = best->id;
    decision.newTarget = true;
    decision.latency = decision_latency(model, snap, &decision.visibleElements);
    return decision;
}

}  // namespace arviz
