#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "arviz/actions.hpp"
#include "arviz/dataset.hpp"
#include "arviz/features.hpp"

namespace arviz {

enum class PolicyKind : std::uint8_t { AllOn, NoViz, Arroch, Crmiar, TabularMajority, LinearMulticlass };

std::string_view to_string(PolicyKind k);
std::optional<PolicyKind> parse_policy_kind(std::string_view s);
bool is_learnable(PolicyKind k);

/// Per-agent context beyond the discrete features. Only CRMIAR reads it.
struct RobotContext {
    bool outsideWorkerView = false;
};

/// Majority label per state; nullopt for states absent from the training data.
struct TabularParams {
    std::array<std::optional<std::uint8_t>, kRobotStates> robot{};
    std::array<std::optional<std::uint8_t>, kStationStates> station{};

    bool operator==(const TabularParams&) const = default;
};

/// One-vs-rest scores per channel over a one-hot state encoding:
/// score[channel][class][state], class 0 = off, class 1 = on.
struct LinearParams {
    std::array<std::array<std::array<double, kRobotStates>, 2>, kRobotChannelCount> robot{};
    std::array<std::array<double, kStationStates>, 2> station{};

    bool operator==(const LinearParams&) const = default;
};

/// Visualization policy. Immutable once built; safe to share across threads.
class Policy {
public:
    using Params = std::variant<std::monostate, TabularParams, LinearParams>;

    Policy() = default;
    /// Static baseline or untrained learnable policy.
    static Policy builtin(PolicyKind kind);
    static Policy tabular(TabularParams params, int version);
    static Policy linear(LinearParams params, int version);

    PolicyKind kind() const { return kind_; }
    int version() const { return version_; }
    bool trained() const { return !std::holds_alternative<std::monostate>(params_); }
    const Params& params() const { return params_; }

    RobotVizAction act_robot(const RobotAgentFeatures& f, RobotContext ctx = {}) const;
    StationVizAction act_station(const StationAgentFeatures& f) const;
    RobotVizAction act_robot_state(int state, RobotContext ctx = {}) const;
    StationVizAction act_station_state(int state) const;

    bool operator==(const Policy&) const = default;

private:
    PolicyKind kind_ = PolicyKind::AllOn;
    int version_ = 0;
    Params params_;
};

struct LinearTrainOptions {
    int epochs = 60;
    double learningRate = 0.5;
    double decay = 0.05;   // rate_t = learningRate / (1 + decay * t)
    double l2 = 1e-4;
};

/// Trains a learnable policy on the aggregate. Throws TrainingError on an
/// empty dataset or a non-learnable kind.
Policy train(const AggregatedDataset& dataset, PolicyKind kind, int version = 1,
             const LinearTrainOptions& options = {});

}  // namespace arviz
