#pragma once

// Independent reference implementations and generators shared by the unit
// and acceptance tests. Nothing here calls into the code under test except
// for plain data types.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <random>
#include <vector>

#include "arviz/dataset.hpp"
#include "arviz/planner.hpp"
#include "arviz/scenario.hpp"

namespace arviz::testing {

/// Exact comparison of a + b*sqrt(2) against c + d*sqrt(2) with integers only.
inline int compare_cost(StepCount x, StepCount y) {
    const long long p = x.straight - y.straight;  // compare p against q*sqrt(2)
    const long long q = y.diagonal - x.diagonal;
    if (p == 0 && q == 0) return 0;
    if (p >= 0 && q <= 0) return 1;
    if (p <= 0 && q >= 0) return -1;
    // same sign: compare squares
    const long long lhs = p * p;
    const long long rhs = 2 * q * q;
    if (p > 0) return lhs > rhs ? 1 : -1;
    return lhs > rhs ? -1 : 1;
}

/// Plain Dijkstra over the 8-connected grid with the same corner rule
/// (diagonal refused only if both side cells are blocked).
inline std::optional<StepCount> dijkstra(const std::vector<std::vector<bool>>& blocked, Cell start, Cell goal) {
    const int rows = static_cast<int>(blocked.size());
    const int cols = static_cast<int>(blocked[0].size());
    auto free = [&](int c, int r) { return c >= 0 && r >= 0 && c < cols && r < rows && !blocked[r][c]; };
    if (!free(start.col, start.row) || !free(goal.col, goal.row)) return std::nullopt;

    std::vector<std::optional<StepCount>> best(static_cast<std::size_t>(rows * cols));
    std::vector<bool> done(best.size(), false);
    auto idx = [&](int c, int r) { return static_cast<std::size_t>(r * cols + c); };
    best[idx(start.col, start.row)] = StepCount{};
    for (;;) {
        std::optional<std::size_t> pick;
        for (std::size_t i = 0; i < best.size(); ++i) {
            if (done[i] || !best[i]) continue;
            if (!pick || compare_cost(*best[i], *best[*pick]) < 0) pick = i;
        }
        if (!pick) return std::nullopt;
        done[*pick] = true;
        const int c = static_cast<int>(*pick % cols);
        const int r = static_cast<int>(*pick / cols);
        if (c == goal.col && r == goal.row) return best[*pick];
        for (int dr = -1; dr <= 1; ++dr) {
            for (int dc = -1; dc <= 1; ++dc) {
                if ((dr == 0 && dc == 0) || !free(c + dc, r + dr)) continue;
                const bool diag = dr != 0 && dc != 0;
                if (diag && !free(c + dc, r) && !free(c, r + dr)) continue;
                StepCount s = *best[*pick];
                (diag ? s.diagonal : s.straight) += 1;
                auto& slot = best[idx(c + dc, r + dr)];
                if (!slot || compare_cost(s, *slot) < 0) slot = s;
            }
        }
    }
}

/// Random grid with `fraction` of interior cells blocked; the border ring is
/// blocked as GridMap requires.
inline std::vector<std::vector<bool>> random_blockage(int cols, int rows, double fraction, std::mt19937_64& gen) {
    std::bernoulli_distribution coin(fraction);
    std::vector<std::vector<bool>> b(static_cast<std::size_t>(rows), std::vector<bool>(static_cast<std::size_t>(cols)));
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            const bool border = r == 0 || c == 0 || r == rows - 1 || c == cols - 1;
            b[r][c] = border || coin(gen);
        }
    }
    return b;
}

inline GridMap to_grid(const std::vector<std::vector<bool>>& blocked) {
    GridMap g(0.5, static_cast<int>(blocked[0].size()), static_cast<int>(blocked.size()));
    for (std::size_t r = 0; r < blocked.size(); ++r) {
        for (std::size_t c = 0; c < blocked[r].size(); ++c) {
            if (blocked[r][c]) g.block({static_cast<int>(c), static_cast<int>(r)});
        }
    }
    return g;
}

/// Brute-force per-state, per-channel majority with ties to "on".
/// Returns nullopt for states that never occur.
inline std::map<std::pair<AgentKind, int>, std::uint8_t> majority_oracle(const std::vector<Demonstration>& records) {
    std::map<std::pair<AgentKind, int>, std::array<int, 3>> on;
    std::map<std::pair<AgentKind, int>, int> total;
    for (const auto& d : records) {
        auto& counts = on[{d.agentKind, d.state}];
        for (int bit = 0; bit < 3; ++bit) {
            if (d.action & (1u << bit)) ++counts[static_cast<std::size_t>(bit)];
        }
        ++total[{d.agentKind, d.state}];
    }
    std::map<std::pair<AgentKind, int>, std::uint8_t> out;
    for (const auto& [key, counts] : on) {
        const int n = total[key];
        const int channels = key.first == AgentKind::Robot ? 3 : 1;
        std::uint8_t bits = 0;
        for (int bit = 0; bit < channels; ++bit) {
            if (2 * counts[static_cast<std::size_t>(bit)] >= n) bits |= static_cast<std::uint8_t>(1u << bit);
        }
        out[key] = bits;
    }
    return out;
}

/// Random batch of demonstrations over both agent kinds.
inline std::vector<Demonstration> random_records(std::size_t n, std::mt19937_64& gen, int iteration = 0) {
    std::vector<Demonstration> out;
    // Few distinct states so that majorities and ties actually happen.
    std::uniform_int_distribution<int> robotState(0, 11);
    std::uniform_int_distribution<int> stationState(0, 5);
    std::uniform_int_distribution<int> robotBits(0, 7);
    std::uniform_int_distribution<int> kind(0, 3);
    for (std::size_t i = 0; i < n; ++i) {
        Demonstration d;
        d.iteration = iteration;
        d.simTime = 4.0 * static_cast<double>(i / 4 + 1);
        if (kind(gen) == 0) {
            d.agentKind = AgentKind::Station;
            d.state = stationState(gen) * 3;
            d.action = static_cast<std::uint8_t>(robotBits(gen) & 1);
        } else {
            d.agentKind = AgentKind::Robot;
            d.state = robotState(gen) * 12;
            d.action = static_cast<std::uint8_t>(robotBits(gen));
        }
        d.agentId = static_cast<int>(i % 4);
        out.push_back(d);
    }
    return out;
}

/// One robot, one station, one shelf in a 10 m x 2 m corridor. Every event
/// time in a trial can be worked out by hand (see the simulation tests).
inline ScenarioConfig micro_world() {
    ScenarioConfig c;
    WarehouseConfig& w = c.world;
    w.width = 10.0;
    w.height = 2.0;
    w.cellSize = 0.5;
    w.shelves = {{18, 2}};
    w.stations = {{0, {0.75, 1.25}}};
    w.homePositions = {{5.25, 0.75}};
    w.nRobots = 1;
    w.boxesPerRobot = 1;
    c.worker.start = {5.25, 1.25};
    c.worker.baseLatency = 1.0;
    c.worker.latencyPerElement = 0.0;
    return c;
}

/// Two robots and two stations on a small open floor, used for quick
/// trainer runs.
inline ScenarioConfig small_world() {
    ScenarioConfig c;
    WarehouseConfig& w = c.world;
    w.width = 12.0;
    w.height = 8.0;
    w.cellSize = 0.5;
    w.shelves = {{8, 6}, {15, 6}, {8, 10}, {15, 10}};
    w.stations = {{0, {1.25, 4.25}}, {1, {10.75, 4.25}}};
    w.homePositions = {{4.25, 1.25}, {7.25, 1.25}};
    w.nRobots = 2;
    w.boxesPerRobot = 2;
    c.worker.start = {6.25, 4.25};
    c.worker.sightRange = 4.0;
    return c;
}

}  // namespace arviz::testing
