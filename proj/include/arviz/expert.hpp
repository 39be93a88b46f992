#pragma once

#include <array>
#include <deque>
#include <mutex>
#include <string_view>
#include <vector>

#include "arviz/dataset.hpp"
#include "arviz/frame.hpp"
#include "arviz/policy.hpp"

namespace arviz {

/// Full per-agent labeling of a snapshot: the expert policy's answer.
using ExpertLabels = FrameActions;

class ExpertSource {
public:
    virtual ~ExpertSource() = default;

    virtual ExpertLabels label(const WorldSnapshot& snap, const DiscretizationThresholds& th) = 0;
    /// False while the expert cannot answer (e.g. no operator connected).
    virtual bool available() const { return true; }
    /// Called once after each snapshot event has been recorded.
    virtual void eventRecorded() {}
    virtual std::string_view name() const = 0;
};

/// Rule-table expert. The table is indexed by encoded agent state.
class ScriptedExpert final : public ExpertSource {
public:
    /// The default rules (see robot_rule / station_rule).
    ScriptedExpert();
    /// Uses a trained tabular policy's labels as the rule table.
    static ScriptedExpert fromTable(const TabularParams& table);

    static RobotVizAction robot_rule(const RobotAgentFeatures& f);
    static StationVizAction station_rule(const StationAgentFeatures& f);

    RobotVizAction robotLabel(int state) const { return RobotVizAction::fromBits(robot_[state]); }
    StationVizAction stationLabel(int state) const { return StationVizAction::fromBits(station_[state]); }

    ExpertLabels label(const WorldSnapshot& snap, const DiscretizationThresholds& th) override;
    std::string_view name() const override { return "scripted"; }

private:
    std::array<std::uint8_t, kRobotStates> robot_{};
    std::array<std::uint8_t, kStationStates> station_{};
};

/// Checkbox-driven expert. Each agent-channel is sticky until toggled; the
/// current checkbox state is the label. Thread-safe.
class InteractiveExpert final : public ExpertSource {
public:
    InteractiveExpert(int nRobots, int nStations);

    void setRobotChannel(int robotId, RobotChannel channel, bool on);
    /// `stationIndex` is the position in the snapshot's station list.
    void setBalloon(int stationIndex, bool on);
    void setConnected(bool connected);

    ExpertLabels current() const;
    ExpertLabels label(const WorldSnapshot& snap, const DiscretizationThresholds& th) override;
    bool available() const override;
    std::string_view name() const override { return "interactive"; }

private:
    mutable std::mutex mutex_;
    ExpertLabels checkboxes_;
    bool connected_ = false;
};

/// Replays the labels of a recorded dataset, one snapshot event at a time.
class ReplayExpert final : public ExpertSource {
public:
    ReplayExpert(const AggregatedDataset& log, int nRobots, int nStations);

    ExpertLabels label(const WorldSnapshot& snap, const DiscretizationThresholds& th) override;
    void eventRecorded() override;
    std::string_view name() const override { return "replay"; }

    std::size_t eventsRemaining() const { return events_.size() - cursor_; }

private:
    std::vector<ExpertLabels> events_;
    std::size_t cursor_ = 0;
};

}  // namespace arviz
