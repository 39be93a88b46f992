#pragma once

#include <optional>
#include <set>

#include "arviz/world.hpp"

namespace arviz {

/// Synthetic stand-in for the human worker. Knowledge is the set of stations
/// the worker is currently aware of; decision latency grows with on-screen
/// clutter.
struct WorkerModel {
    std::set<int> knowledge;
    double baseLatency = 1.0;
    double latencyPerElement = 0.15;

    static WorkerModel fromParams(const WorkerParams& p) { return {{}, p.baseLatency, p.latencyPerElement}; }
};

struct WorkerDecision {
    std::optional<int> target;  // station to walk to; nullopt means wander/scan
    bool newTarget = false;     // true when `target` was chosen this call
    double latency = 0.0;       // seconds to stay busy before moving
    int visibleElements = 0;
};

/// Stations the worker knows about in `snap`: balloon on, a waiting robot
/// there shows its live location or trajectory, or the station is within
/// sight range and field of view.
std::set<int> known_stations(const WorldSnapshot& snap, const WorkerParams& params);

/// tau0 + tauV * (enabled elements in the worker's field of view).
double decision_latency(const WorkerModel& model, const WorldSnapshot& snap, int* visibleElements = nullptr);

/// Updates knowledge and picks a target. An existing target is kept while its
/// station still has a waiting robot. A new target is the nearest known
/// station with a waiting robot (ties to the lower id).
WorkerDecision worker_decide(WorkerModel& model, const WorldSnapshot& snap, const WorkerParams& params);

}  // namespace arviz
