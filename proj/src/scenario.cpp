#include "arviz/scenario.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace arviz {

void validate(const ScenarioConfig& c) {
    validate(c.world);
    validate(c.worker);
    validate(c.thresholds);
    if (!(c.render.baseWidth > 0)) throw ConfigError("render: baseWidth > 0");
    if (!(c.render.widthGain >= 0)) throw ConfigError("render: widthGain >= 0");
    if (!(c.render.avatarStepPerTick > 0 && c.render.avatarStepPerTick <= 1)) {
        throw ConfigError("render: avatarStepPerTick in (0, 1]");
    }
    if (!(c.sim.timeCap > 0)) throw ConfigError("sim: timeCap > 0");
    if (!(c.sim.holdReplanAfter > 0)) throw ConfigError("sim: holdReplanAfter > 0");
}

ScenarioConfig main_scenario() {
    ScenarioConfig c;
    c.world = main_config();
    return c;
}

ScenarioConfig mini_scenario() {
    ScenarioConfig c;
    c.world = mini_config();
    c.worker.start = {10.25, 7.75};
    return c;
}

ScenarioConfig preset_scenario(std::string_view name) {
    if (name == "main") return main_scenario();
    if (name == "mini") return mini_scenario();
    throw ConfigError("unknown preset '" + std::string(name) + "' (expected main or mini)");
}

namespace {

void check_keys(const YAML::Node& node, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!node.IsMap()) throw ConfigError(where + ": expected a mapping");
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& kv : node) {
        const auto key = kv.first.as<std::string>();
        if (!ok.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
    }
}

template <typename T>
void read(const YAML::Node& node, const char* key, T& out, const std::string& where) {
    const YAML::Node v = node[key];
    if (!v) return;
    try {
        out = v.as<T>();
    } catch (const YAML::Exception&) {
        throw ConfigError(where + "." + key + ": invalid value");
    }
}

Point read_point(const YAML::Node& n, const std::string& where) {
    if (!n.IsSequence() || n.size() != 2) throw ConfigError(where + ": expected [x, y]");
    try {
        return {n[0].as<double>(), n[1].as<double>()};
    } catch (const YAML::Exception&) {
        throw ConfigError(where + ": expected numbers");
    }
}

Cell read_cell(const YAML::Node& n, const std::string& where) {
    if (!n.IsSequence() || n.size() != 2) throw ConfigError(where + ": expected [col, row]");
    try {
        return {n[0].as<int>(), n[1].as<int>()};
    } catch (const YAML::Exception&) {
        throw ConfigError(where + ": expected integers");
    }
}

void read_world(const YAML::Node& n, WarehouseConfig& w) {
    const std::string where = "world";
    check_keys(n, where,
               {"width", "height", "cellSize", "nRobots", "robotSpeed", "boxesPerRobot", "unloadRadius",
                "tickDuration", "rngSeed", "shelves", "stations", "homes"});
    read(n, "width", w.width, where);
    read(n, "height", w.height, where);
    read(n, "cellSize", w.cellSize, where);
    read(n, "robotSpeed", w.robotSpeed, where);
    read(n, "boxesPerRobot", w.boxesPerRobot, where);
    read(n, "unloadRadius", w.unloadRadius, where);
    read(n, "tickDuration", w.tickDuration, where);
    read(n, "rngSeed", w.rngSeed, where);
    if (const auto s = n["shelves"]) {
        if (!s.IsSequence()) throw ConfigError("world.shelves: expected a list");
        w.shelves.clear();
        for (std::size_t i = 0; i < s.size(); ++i) {
            w.shelves.push_back(read_cell(s[i], "world.shelves[" + std::to_string(i) + "]"));
        }
    }
    if (const auto s = n["stations"]) {
        if (!s.IsSequence()) throw ConfigError("world.stations: expected a list");
        w.stations.clear();
        for (std::size_t i = 0; i < s.size(); ++i) {
            const std::string at = "world.stations[" + std::to_string(i) + "]";
            check_keys(s[i], at, {"id", "position"});
            StationSpec spec;
            read(s[i], "id", spec.id, at);
            if (!s[i]["position"]) throw ConfigError(at + ": missing position");
            spec.position = read_point(s[i]["position"], at + ".position");
            w.stations.push_back(spec);
        }
    }
    if (const auto h = n["homes"]) {
        if (!h.IsSequence()) throw ConfigError("world.homes: expected a list");
        w.homePositions.clear();
        for (std::size_t i = 0; i < h.size(); ++i) {
            w.homePositions.push_back(read_point(h[i], "world.homes[" + std::to_string(i) + "]"));
        }
        w.nRobots = static_cast<int>(w.homePositions.size());
    }
    read(n, "nRobots", w.nRobots, where);
}

void read_worker(const YAML::Node& n, WorkerParams& p) {
    const std::string where = "worker";
    check_keys(n, where,
               {"start", "heading", "fovHalfAngle", "sightRange", "speed", "baseLatency", "latencyPerElement",
                "scanRate"});
    if (n["start"]) p.start = read_point(n["start"], "worker.start");
    read(n, "heading", p.heading, where);
    read(n, "fovHalfAngle", p.fovHalfAngle, where);
    read(n, "sightRange", p.sightRange, where);
    read(n, "speed", p.speed, where);
    read(n, "baseLatency", p.baseLatency, where);
    read(n, "latencyPerElement", p.latencyPerElement, where);
    read(n, "scanRate", p.scanRate, where);
}

void read_thresholds(const YAML::Node& n, DiscretizationThresholds& th) {
    const std::string where = "thresholds";
    check_keys(n, where,
               {"humanClose", "humanModerate", "waitShort", "waitMedium", "remainingFewMax", "nearbyRadius",
                "nearbyFewMax", "vizFewMax", "stationFewMax", "vizCountMode"});
    read(n, "humanClose", th.humanClose, where);
    read(n, "humanModerate", th.humanModerate, where);
    read(n, "waitShort", th.waitShort, where);
    read(n, "waitMedium", th.waitMedium, where);
    read(n, "remainingFewMax", th.remainingFewMax, where);
    read(n, "nearbyRadius", th.nearbyRadius, where);
    read(n, "nearbyFewMax", th.nearbyFewMax, where);
    read(n, "vizFewMax", th.vizFewMax, where);
    read(n, "stationFewMax", th.stationFewMax, where);
    if (const auto m = n["vizCountMode"]) {
        const auto s = m.as<std::string>();
        if (s == "robots") {
            th.vizCountMode = VizCountMode::RobotsWithAnyChannel;
        } else if (s == "channels") {
            th.vizCountMode = VizCountMode::TotalChannels;
        } else {
            throw ConfigError("thresholds.vizCountMode: expected robots or channels");
        }
    }
}

/// Shortest decimal text that parses back to the same double.
std::string num(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string point(Point p) { return "[" + num(p.x) + ", " + num(p.y) + "]"; }

}  // namespace

ScenarioConfig parse_scenario(const std::string& yamlText) {
    YAML::Node root;
    try {
        root = YAML::Load(yamlText);
    } catch (const YAML::Exception& e) {
        throw ConfigError(std::string("config is not valid YAML: ") + e.what());
    }
    if (root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
    check_keys(root, "config", {"base", "world", "worker", "thresholds", "render", "sim"});

    ScenarioConfig c = main_scenario();
    if (const auto b = root["base"]) c = preset_scenario(b.as<std::string>());
    if (const auto n = root["world"]) read_world(n, c.world);
    if (const auto n = root["worker"]) read_worker(n, c.worker);
    if (const auto n = root["thresholds"]) read_thresholds(n, c.thresholds);
    if (const auto n = root["render"]) {
        check_keys(n, "render", {"baseWidth", "widthGain", "avatarStepPerTick"});
        read(n, "baseWidth", c.render.baseWidth, "render");
        read(n, "widthGain", c.render.widthGain, "render");
        read(n, "avatarStepPerTick", c.render.avatarStepPerTick, "render");
    }
    if (const auto n = root["sim"]) {
        check_keys(n, "sim", {"timeCap", "holdReplanAfter"});
        read(n, "timeCap", c.sim.timeCap, "sim");
        read(n, "holdReplanAfter", c.sim.holdReplanAfter, "sim");
    }
    validate(c);
    return c;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str());
}

std::string to_yaml(const ScenarioConfig& c) {
    std::ostringstream os;
    const WarehouseConfig& w = c.world;
    os << "world:\n"
       << "  width: " << num(w.width) << "\n"
       << "  height: " << num(w.height) << "\n"
       << "  cellSize: " << num(w.cellSize) << "\n"
       << "  nRobots: " << w.nRobots << "\n"
       << "  robotSpeed: " << num(w.robotSpeed) << "\n"
       << "  boxesPerRobot: " << w.boxesPerRobot << "\n"
       << "  unloadRadius: " << num(w.unloadRadius) << "\n"
       << "  tickDuration: " << num(w.tickDuration) << "\n"
       << "  rngSeed: " << w.rngSeed << "\n";
    os << "  shelves:" << (w.shelves.empty() ? " []" : "") << "\n";
    for (Cell s : w.shelves) os << "    - [" << s.col << ", " << s.row << "]\n";
    os << "  stations:" << (w.stations.empty() ? " []" : "") << "\n";
    for (const StationSpec& s : w.stations) os << "    - {id: " << s.id << ", position: " << point(s.position) << "}\n";
    os << "  homes:" << (w.homePositions.empty() ? " []" : "") << "\n";
    for (Point h : w.homePositions) os << "    - " << point(h) << "\n";

    const WorkerParams& p = c.worker;
    os << "worker:\n"
       << "  start: " << point(p.start) << "\n"
       << "  heading: " << num(p.heading) << "\n"
       << "  fovHalfAngle: " << num(p.fovHalfAngle) << "\n"
       << "  sightRange: " << num(p.sightRange) << "\n"
       << "  speed: " << num(p.speed) << "\n"
       << "  baseLatency: " << num(p.baseLatency) << "\n"
       << "  latencyPerElement: " << num(p.latencyPerElement) << "\n"
       << "  scanRate: " << num(p.scanRate) << "\n";

    const DiscretizationThresholds& th = c.thresholds;
    os << "thresholds:\n"
       << "  humanClose: " << num(th.humanClose) << "\n"
       << "  humanModerate: " << num(th.humanModerate) << "\n"
       << "  waitShort: " << num(th.waitShort) << "\n"
       << "  waitMedium: " << num(th.waitMedium) << "\n"
       << "  remainingFewMax: " << th.remainingFewMax << "\n"
       << "  nearbyRadius: " << num(th.nearbyRadius) << "\n"
       << "  nearbyFewMax: " << th.nearbyFewMax << "\n"
       << "  vizFewMax: " << th.vizFewMax << "\n"
       << "  stationFewMax: " << th.stationFewMax << "\n"
       << "  vizCountMode: "
       << (th.vizCountMode == VizCountMode::RobotsWithAnyChannel ? "robots" : "channels") << "\n";

    os << "render:\n"
       << "  baseWidth: " << num(c.render.baseWidth) << "\n"
       << "  widthGain: " << num(c.render.widthGain) << "\n"
       << "  avatarStepPerTick: " << num(c.render.avatarStepPerTick) << "\n";
    os << "sim:\n"
       << "  timeCap: " << num(c.sim.timeCap) << "\n"
       << "  holdReplanAfter: " << num(c.sim.holdReplanAfter) << "\n";
    return os.str();
}

std::string fingerprint(const ScenarioConfig& config) { return hex64(fnv1a64(to_yaml(config))); }

}  // namespace arviz
