#pragma once

#include <vector>

#include "arviz/features.hpp"
#include "arviz/policy.hpp"
#include "arviz/world.hpp"

namespace arviz {

struct RenderParams {
    double baseWidth = 0.1;          // trajectory width at the goal, meters
    double widthGain = 1.0;          // width at the start is baseWidth * (1 + widthGain)
    double avatarStepPerTick = 0.02;  // transparent avatar advance, fraction of path

    bool operator==(const RenderParams&) const = default;
};

/// Channel decisions for every agent, indexed like the snapshot's vectors.
struct FrameActions {
    std::vector<RobotVizAction> robots;
    std::vector<StationVizAction> stations;

    bool operator==(const FrameActions&) const = default;
};

/// Trajectory width at a vertex with `remaining` meters left to a goal that
/// is `total` meters along the path.
double trajectory_width(double remaining, double total, const RenderParams& params);

/// Distinct display color for robot `index`.
std::uint32_t robot_color(int index);

/// Visualization agent: builds the frame from positions, trajectories and the
/// chosen actions. Avatar progress continues from `snap.frame`.
VisualizationFrame render_frame(const WorldSnapshot& snap, const FrameActions& actions, const RenderParams& params);

/// Queries `policy` once per agent using only that agent's own features.
FrameActions policy_actions(const Policy& policy, const WorldSnapshot& snap, const DiscretizationThresholds& th);

/// Number of enabled visual elements inside the viewer's field of view. A
/// trajectory counts once if any of its vertices is in view.
int count_visible_elements(const VisualizationFrame& frame, const WorldSnapshot& snap, const Pose& viewer,
                           double fovHalfAngle);

}  // namespace arviz
