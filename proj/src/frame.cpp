#include "arviz/frame.hpp"

#include <cmath>

namespace arviz {

double trajectory_width(double remaining, double total, const RenderParams& params) {
    if (total <= 0.0) return params.baseWidth;
    return params.baseWidth * (1.0 + params.widthGain * remaining / total);
}

std::uint32_t robot_color(int index) {
    // Golden-ratio hue walk, fixed saturation/value.
    const double hue = std::fmod(0.13 + 0.6180339887498949 * index, 1.0) * 6.0;
    const double s = 0.75;
    const double v = 0.95;
    const int sector = static_cast<int>(hue) % 6;
    const double frac = hue - std::floor(hue);
    const double p = v * (1 - s);
    const double q = v * (1 - s * frac);
    const double t = v * (1 - s * (1 - frac));
    double r = v, g = t, b = p;
    switch (sector) {
        case 0: r = v; g = t; b = p; break;
        case 1: r = q; g = v; b = p; break;
        case 2: r = p; g = v; b = t; break;
        case 3: r = p; g = q; b = v; break;
        case 4: r = t; g = p; b = v; break;
        default: r = v; g = p; b = q; break;
    }
    auto byte = [](double c) { return static_cast<std::uint32_t>(std::lround(c * 255.0)); };
    return (byte(r) << 16) | (byte(g) << 8) | byte(b);
}

VisualizationFrame render_frame(const WorldSnapshot& snap, const FrameActions& actions, const RenderParams& params) {
    VisualizationFrame frame;
    frame.robots.reserve(snap.robots.size());
    for (std::size_t i = 0; i < snap.robots.size(); ++i) {
        const RobotState& r = snap.robots[i];
        RobotVisual v;
        v.robotId = r.id;
        v.channels = i < actions.robots.size() ? actions.robots[i] : RobotVizAction{};
        v.color = robot_color(r.id);
        const double previous = i < snap.frame.robots.size() ? snap.frame.robots[i].avatarProgress : 0.0;
        v.avatarProgress = previous + params.avatarStepPerTick;
        v.avatarProgress -= std::floor(v.avatarProgress);
        if (r.trajectory && !r.trajectory->waypoints.empty()) {
            const Trajectory& t = *r.trajectory;
            v.polyline.reserve(t.waypoints.size());
            v.widths.reserve(t.waypoints.size());
            for (std::size_t k = 0; k < t.waypoints.size(); ++k) {
                v.polyline.push_back(t.waypoints[k].position());
                v.widths.push_back(trajectory_width(t.totalLength - t.cumulative[k], t.totalLength, params));
            }
            // The avatar loops over the part of the path still ahead of the robot.
            v.avatarPosition = t.poseAt(t.progress + v.avatarProgress * t.remaining()).position();
        } else {
            v.polyline.push_back(r.pose.position());
            v.widths.push_back(params.baseWidth);
            v.avatarPosition = r.pose.position();
        }
        frame.robots.push_back(std::move(v));
    }
    frame.stations.reserve(snap.stations.size());
    for (std::size_t i = 0; i < snap.stations.size(); ++i) {
        frame.stations.push_back({snap.stations[i].id, i < actions.stations.size() && actions.stations[i].balloon});
    }
    return frame;
}

FrameActions policy_actions(const Policy& policy, const WorldSnapshot& snap, const DiscretizationThresholds& th) {
    FrameActions out;
    out.robots.reserve(snap.robots.size());
    const HumanWorkerState& w = snap.worker;
    for (const RobotState& r : snap.robots) {
        RobotContext ctx;
        ctx.outsideWorkerView = !(in_field_of_view(w.pose, r.pose.position(), w.fovHalfAngle) &&
                                  distance(w.pose.position(), r.pose.position()) <= w.sightRange);
        out.robots.push_back(policy.act_robot(extract_robot_features(snap, r.id, th), ctx));
    }
    out.stations.reserve(snap.stations.size());
    for (const StationState& s : snap.stations) {
        out.stations.push_back(policy.act_station(extract_station_features(snap, s.id, th)));
    }
    return out;
}

int count_visible_elements(const VisualizationFrame& frame, const WorldSnapshot& snap, const Pose& viewer,
                           double fovHalfAngle) {
    int n = 0;
    for (std::size_t i = 0; i < frame.robots.size() && i < snap.robots.size(); ++i) {
        const RobotVisual& v = frame.robots[i];
        if (v.channels.liveLocation && in_field_of_view(viewer, snap.robots[i].pose.position(), fovHalfAngle)) ++n;
        if (v.channels.transparentAvatar && in_field_of_view(viewer, v.avatarPosition, fovHalfAngle)) ++n;
        if (v.channels.trajectory) {
            for (Point p : v.polyline) {
                if (in_field_of_view(viewer, p, fovHalfAngle)) {
                    ++n;
                    break;
                }
            }
        }
    }
    for (std::size_t i = 0; i < frame.stations.size() && i < snap.stations.size(); ++i) {
        if (frame.stations[i].balloon && in_field_of_view(viewer, snap.stations[i].position, fovHalfAngle)) ++n;
    }
    return n;
}

}  // namespace arviz
