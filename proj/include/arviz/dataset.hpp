#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace arviz {

enum class AgentKind : std::uint8_t { Robot, Station };

/// One (state, expert action) pair for one agent at one snapshot event.
struct Demonstration {
    AgentKind agentKind = AgentKind::Robot;
    int agentId = 0;
    int state = 0;            // encoded feature index
    std::uint8_t action = 0;  // expert channel bits
    int iteration = 0;
    double simTime = 0.0;     // training clock, seconds

    bool operator==(const Demonstration&) const = default;
};

/// Append-only aggregate of per-iteration demonstration batches.
class AggregatedDataset {
public:
    /// Appends one iteration's batch. Earlier records are never touched.
    void aggregate(std::span<const Demonstration> batch);

    const std::vector<Demonstration>& records() const { return records_; }
    /// Record count contributed by each aggregate() call, in order.
    const std::vector<std::size_t>& perIterationCounts() const { return perIterationCounts_; }
    std::size_t size() const { return records_.size(); }
    bool empty() const { return records_.empty(); }

    bool operator==(const AggregatedDataset&) const = default;

private:
    std::vector<Demonstration> records_;
    std::vector<std::size_t> perIterationCounts_;
};

}  // namespace arviz
