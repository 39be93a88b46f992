#include "arviz/protocol.hpp"

#include <json.hpp>

namespace arviz {

using nlohmann::json;

namespace {

json message(const char* type) { return json{{"type", type}, {"schema", kProtocolVersion}}; }

json point(Point p) { return json::array({p.x, p.y}); }

template <typename T>
T field(const json& j, const char* key, std::uint64_t id) {
    if (!j.contains(key)) throw ProtocolError(std::string("missing field '") + key + "'", id);
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ProtocolError(std::string("invalid field '") + key + "'", id);
    }
}

json robot_json(const RobotState& r) {
    json j{{"id", r.id},
           {"pose", {{"x", r.pose.x}, {"y", r.pose.y}, {"heading", r.pose.heading}}},
           {"status", to_string(r.status)},
           {"carrying", r.carryingBox},
           {"remainingTasks", r.remainingTasks}};
    j["waitStart"] = r.waitStart ? json(*r.waitStart) : json(nullptr);
    j["stationId"] = r.currentTask ? json(r.currentTask->stationId) : json(nullptr);
    return j;
}

json checkbox_json(const FrameActions& a) {
    json robots = json::array();
    for (std::size_t i = 0; i < a.robots.size(); ++i) {
        robots.push_back({{"id", static_cast<int>(i)},
                          {"liveLocation", a.robots[i].liveLocation},
                          {"transparentAvatar", a.robots[i].transparentAvatar},
                          {"trajectory", a.robots[i].trajectory}});
    }
    json stations = json::array();
    for (std::size_t i = 0; i < a.stations.size(); ++i) {
        stations.push_back({{"id", static_cast<int>(i)}, {"balloon", a.stations[i].balloon}});
    }
    return {{"robots", robots}, {"stations", stations}};
}

json layout_json(const WarehouseConfig& c) {
    json shelves = json::array();
    for (Cell s : c.shelves) shelves.push_back(json::array({s.col, s.row}));
    json homes = json::array();
    for (Point h : c.homePositions) homes.push_back(point(h));
    return {{"width", c.width}, {"height", c.height}, {"cellSize", c.cellSize},
            {"shelves", shelves}, {"homes", homes}, {"unloadRadius", c.unloadRadius}};
}

}  // namespace

InboundCommand parse_command(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error&) {
        throw ProtocolError("message is not valid JSON");
    }
    if (!j.is_object()) throw ProtocolError("message must be a JSON object");
    InboundCommand cmd;
    if (j.contains("id")) {
        if (!j["id"].is_number_unsigned()) throw ProtocolError("id must be a non-negative integer");
        cmd.id = j["id"].get<std::uint64_t>();
    }
    const auto type = field<std::string>(j, "type", cmd.id);
    if (type == "setChannel") {
        SetChannel c;
        const auto kind = field<std::string>(j, "agentKind", cmd.id);
        if (kind == "robot") {
            c.agentKind = AgentKind::Robot;
        } else if (kind == "station") {
            c.agentKind = AgentKind::Station;
        } else {
            throw ProtocolError("agentKind must be robot or station", cmd.id);
        }
        c.agentId = field<int>(j, "agentId", cmd.id);
        const auto channel = parse_viz_channel(field<std::string>(j, "channel", cmd.id));
        if (!channel) throw ProtocolError("unknown channel", cmd.id);
        c.channel = *channel;
        c.on = field<bool>(j, "on", cmd.id);
        cmd.command = c;
    } else if (type == "teleop") {
        const auto dir = field<std::vector<double>>(j, "direction", cmd.id);
        if (dir.size() != 2) throw ProtocolError("direction must be [x, y]", cmd.id);
        Teleop t{{dir[0], dir[1]}, j.contains("yawDelta") ? field<double>(j, "yawDelta", cmd.id) : 0.0};
        cmd.command = t;
    } else if (type == "pause") {
        cmd.command = Pause{};
    } else if (type == "resume") {
        cmd.command = Resume{};
    } else if (type == "setSpeed") {
        cmd.command = SetSpeed{field<double>(j, "multiplier", cmd.id)};
    } else if (type == "modeSwitch") {
        const auto mode = field<std::string>(j, "mode", cmd.id);
        if (mode == "expert") {
            cmd.command = ModeSwitch{OperatorMode::Expert};
        } else if (mode == "worker") {
            cmd.command = ModeSwitch{OperatorMode::Worker};
        } else {
            throw ProtocolError("mode must be expert or worker", cmd.id);
        }
    } else {
        throw ProtocolError("unknown message type '" + type + "'", cmd.id);
    }
    return cmd;
}

std::string to_json(const InboundCommand& cmd) {
    json j;
    std::visit(
        [&](const auto& c) {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, SetChannel>) {
                j = {{"type", "setChannel"},
                     {"agentKind", c.agentKind == AgentKind::Robot ? "robot" : "station"},
                     {"agentId", c.agentId},
                     {"channel", to_string(c.channel)},
                     {"on", c.on}};
            } else if constexpr (std::is_same_v<T, Teleop>) {
                j = {{"type", "teleop"}, {"direction", point(c.direction)}, {"yawDelta", c.yawDelta}};
            } else if constexpr (std::is_same_v<T, Pause>) {
                j = {{"type", "pause"}};
            } else if constexpr (std::is_same_v<T, Resume>) {
                j = {{"type", "resume"}};
            } else if constexpr (std::is_same_v<T, SetSpeed>) {
                j = {{"type", "setSpeed"}, {"multiplier", c.multiplier}};
            } else {
                j = {{"type", "modeSwitch"}, {"mode", c.mode == OperatorMode::Expert ? "expert" : "worker"}};
            }
        },
        cmd.command);
    j["id"] = cmd.id;
    return j.dump();
}

std::string snapshot_message(const WorldSnapshot& snap, const SnapshotExtras& extras) {
    json j = message("snapshot");
    j["simTime"] = snap.simTime;
    j["tick"] = snap.tick;
    j["boxesDelivered"] = snap.boxesDelivered;

    json robots = json::array();
    for (const RobotState& r : snap.robots) robots.push_back(robot_json(r));
    j["robots"] = robots;

    const HumanWorkerState& w = snap.worker;
    j["worker"] = {{"pose", {{"x", w.pose.x}, {"y", w.pose.y}, {"heading", w.pose.heading}}},
                   {"fovHalfAngle", w.fovHalfAngle},
                   {"sightRange", w.sightRange},
                   {"busyUntil", w.busyUntil},
                   {"mode", w.mode == WorkerMode::Scripted ? "scripted" : "teleoperated"},
                   {"targetStation", w.targetStation ? json(*w.targetStation) : json(nullptr)}};

    json stations = json::array();
    for (const StationState& s : snap.stations) {
        stations.push_back({{"id", s.id}, {"position", point(s.position)}, {"waitingRobots", s.waitingRobots}});
    }
    j["stations"] = stations;

    json frameRobots = json::array();
    for (const RobotVisual& v : snap.frame.robots) {
        json poly = json::array();
        for (Point p : v.polyline) poly.push_back(point(p));
        frameRobots.push_back({{"id", v.robotId},
                               {"liveLocation", v.channels.liveLocation},
                               {"transparentAvatar", v.channels.transparentAvatar},
                               {"trajectory", v.channels.trajectory},
                               {"color", v.color},
                               {"polyline", poly},
                               {"widths", v.widths},
                               {"avatar", point(v.avatarPosition)}});
    }
    json frameStations = json::array();
    for (const StationVisual& v : snap.frame.stations) {
        frameStations.push_back({{"id", v.stationId}, {"balloon", v.balloon}});
    }
    j["frame"] = {{"robots", frameRobots}, {"stations", frameStations}};

    if (extras.layout) j["layout"] = layout_json(*extras.layout);
    if (extras.checkboxes) j["checkboxes"] = checkbox_json(*extras.checkboxes);
    return j.dump();
}

std::string status_message(const IterationReport& r) {
    json j = message("iterationStatus");
    j["iteration"] = r.iteration;
    j["beta"] = r.beta;
    j["events"] = r.events;
    j["records"] = r.records;
    j["disableCount"] = r.learned.disable;
    j["totalMismatch"] = r.learned.total;
    j["arrochDisableCount"] = r.arroch.disable;
    return j.dump();
}

std::string ack_message(std::uint64_t commandId) {
    json j = message("ack");
    j["id"] = commandId;
    return j.dump();
}

std::string error_message(const std::string& text, std::uint64_t commandId) {
    json j = message("error");
    j["text"] = text;
    j["id"] = commandId;
    return j.dump();
}

}  // namespace arviz
