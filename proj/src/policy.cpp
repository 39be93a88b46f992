#include "arviz/policy.hpp"

#include <cmath>

namespace arviz {

std::string_view to_string(PolicyKind k) {
    switch (k) {
        case PolicyKind::AllOn: return "allon";
        case PolicyKind::NoViz: return "noviz";
        case PolicyKind::Arroch: return "arroch";
        case PolicyKind::Crmiar: return "crmiar";
        case PolicyKind::TabularMajority: return "tabular";
        case PolicyKind::LinearMulticlass: return "linear";
    }
    return "?";
}

std::optional<PolicyKind> parse_policy_kind(std::string_view s) {
    for (PolicyKind k : {PolicyKind::AllOn, PolicyKind::NoViz, PolicyKind::Arroch, PolicyKind::Crmiar,
                         PolicyKind::TabularMajority, PolicyKind::LinearMulticlass}) {
        if (to_string(k) == s) return k;
    }
    return std::nullopt;
}

bool is_learnable(PolicyKind k) { return k == PolicyKind::TabularMajority || k == PolicyKind::LinearMulticlass; }

Policy Policy::builtin(PolicyKind kind) {
    Policy p;
    p.kind_ = kind;
    return p;
}

Policy Policy::tabular(TabularParams params, int version) {
    Policy p;
    p.kind_ = PolicyKind::TabularMajority;
    p.version_ = version;
    p.params_ = std::move(params);
    return p;
}

Policy Policy::linear(LinearParams params, int version) {
    Policy p;
    p.kind_ = PolicyKind::LinearMulticlass;
    p.version_ = version;
    p.params_ = std::move(params);
    return p;
}

RobotVizAction Policy::act_robot(const RobotAgentFeatures& f, RobotContext ctx) const {
    return act_robot_state(encode(f), ctx);
}

StationVizAction Policy::act_station(const StationAgentFeatures& f) const { return act_station_state(encode(f)); }

RobotVizAction Policy::act_robot_state(int state, RobotContext ctx) const {
    if (state < 0 || state >= kRobotStates) throw LookupError("robot state index out of range");
    switch (kind_) {
        case PolicyKind::AllOn:
        case PolicyKind::Arroch: return RobotVizAction::allOn();
        case PolicyKind::NoViz: return RobotVizAction::allOff();
        case PolicyKind::Crmiar: return {ctx.outsideWorkerView, false, true};
        case PolicyKind::TabularMajority:
            if (const auto* t = std::get_if<TabularParams>(&params_)) {
                const auto& label = t->robot[static_cast<std::size_t>(state)];
                return label ? RobotVizAction::fromBits(*label) : RobotVizAction::allOn();
            }
            return RobotVizAction::allOn();
        case PolicyKind::LinearMulticlass:
            if (const auto* l = std::get_if<LinearParams>(&params_)) {
                RobotVizAction a;
                for (RobotChannel c : kRobotChannels) {
                    const auto& scores = l->robot[static_cast<std::size_t>(c)];
                    a.set(c, scores[1][static_cast<std::size_t>(state)] >= scores[0][static_cast<std::size_t>(state)]);
                }
                return a;
            }
            return RobotVizAction::allOn();
    }
    return RobotVizAction::allOn();
}

StationVizAction Policy::act_station_state(int state) const {
    if (state < 0 || state >= kStationStates) throw LookupError("station state index out of range");
    switch (kind_) {
        case PolicyKind::AllOn: return {true};
        case PolicyKind::NoViz:
        case PolicyKind::Arroch:
        case PolicyKind::Crmiar: return {false};
        case PolicyKind::TabularMajority:
            if (const auto* t = std::get_if<TabularParams>(&params_)) {
                const auto& label = t->station[static_cast<std::size_t>(state)];
                return label ? StationVizAction::fromBits(*label) : StationVizAction{true};
            }
            return {true};
        case PolicyKind::LinearMulticlass:
            if (const auto* l = std::get_if<LinearParams>(&params_)) {
                return {l->station[1][static_cast<std::size_t>(state)] >= l->station[0][static_cast<std::size_t>(state)]};
            }
            return {true};
    }
    return {true};
}

namespace {

// on/off label counts per state for one binary channel.
struct ChannelCounts {
    std::vector<long> on;
    std::vector<long> off;
    explicit ChannelCounts(int states) : on(static_cast<std::size_t>(states), 0), off(static_cast<std::size_t>(states), 0) {}
};

struct Counts {
    std::vector<ChannelCounts> robot;
    ChannelCounts station{kStationStates};
    Counts() : robot(kRobotChannelCount, ChannelCounts(kRobotStates)) {}
};

Counts count_labels(const AggregatedDataset& dataset) {
    Counts c;
    for (const Demonstration& d : dataset.records()) {
        const auto s = static_cast<std::size_t>(d.state);
        if (d.agentKind == AgentKind::Robot) {
            if (d.state < 0 || d.state >= kRobotStates) throw TrainingError("robot state index out of range");
            const RobotVizAction a = RobotVizAction::fromBits(d.action);
            for (RobotChannel ch : kRobotChannels) {
                auto& cc = c.robot[static_cast<std::size_t>(ch)];
                (a.get(ch) ? cc.on : cc.off)[s] += 1;
            }
        } else {
            if (d.state < 0 || d.state >= kStationStates) throw TrainingError("station state index out of range");
            ((d.action & 1u) ? c.station.on : c.station.off)[s] += 1;
        }
    }
    return c;
}

// Per-state hinge-loss subgradient descent for both one-vs-rest separators.
void fit_channel(const ChannelCounts& counts, std::array<double, kRobotStates>* offScores,
                 std::array<double, kRobotStates>* onScores, std::size_t states, const LinearTrainOptions& opt) {
    for (int epoch = 0; epoch < opt.epochs; ++epoch) {
        const double rate = opt.learningRate / (1.0 + opt.decay * epoch);
        for (std::size_t s = 0; s < states; ++s) {
            const double total = static_cast<double>(counts.on[s] + counts.off[s]);
            if (total == 0.0) continue;
            const double fracOn = counts.on[s] / total;
            const double fracOff = counts.off[s] / total;
            for (int cls = 0; cls < 2; ++cls) {
                double& w = (cls == 1 ? *onScores : *offScores)[s];
                const double yOn = cls == 1 ? 1.0 : -1.0;  // target sign for "on" samples
                double grad = opt.l2 * w;
                if (yOn * w < 1.0) grad -= fracOn * yOn;
                if (-yOn * w < 1.0) grad -= fracOff * -yOn;
                w -= rate * grad;
            }
        }
    }
}

double round6(double v) { return std::round(v * 1e6) / 1e6; }

}  // namespace

Policy train(const AggregatedDataset& dataset, PolicyKind kind, int version, const LinearTrainOptions& options) {
    if (dataset.empty()) throw TrainingError("cannot train on an empty dataset");
    if (!is_learnable(kind)) throw TrainingError("policy kind '" + std::string(to_string(kind)) + "' is not trainable");
    const Counts counts = count_labels(dataset);

    if (kind == PolicyKind::TabularMajority) {
        TabularParams t;
        for (int s = 0; s < kRobotStates; ++s) {
            const auto i = static_cast<std::size_t>(s);
            if (counts.robot[0].on[i] + counts.robot[0].off[i] == 0) continue;
            RobotVizAction a;
            for (RobotChannel ch : kRobotChannels) {
                const auto& cc = counts.robot[static_cast<std::size_t>(ch)];
                a.set(ch, cc.on[i] >= cc.off[i]);  // tie -> on
            }
            t.robot[i] = a.bits();
        }
        for (int s = 0; s < kStationStates; ++s) {
            const auto i = static_cast<std::size_t>(s);
            if (counts.station.on[i] + counts.station.off[i] == 0) continue;
            t.station[i] = counts.station.on[i] >= counts.station.off[i] ? 1 : 0;
        }
        return Policy::tabular(std::move(t), version);
    }

    LinearParams l;
    for (RobotChannel ch : kRobotChannels) {
        auto& scores = l.robot[static_cast<std::size_t>(ch)];
        fit_channel(counts.robot[static_cast<std::size_t>(ch)], &scores[0], &scores[1], kRobotStates, options);
    }
    {
        std::array<double, kRobotStates> off{};
        std::array<double, kRobotStates> on{};
        fit_channel(counts.station, &off, &on, kStationStates, options);
        for (std::size_t s = 0; s < static_cast<std::size_t>(kStationStates); ++s) {
            l.station[0][s] = off[s];
            l.station[1][s] = on[s];
        }
    }
    // Weights live on the 6-decimal grid so a saved policy reloads bit-exactly.
    for (auto& ch : l.robot) {
        for (auto& cls : ch) {
            for (double& w : cls) w = round6(w);
        }
    }
    for (auto& cls : l.station) {
        for (double& w : cls) w = round6(w);
    }
    return Policy::linear(std::move(l), version);
}

}  // namespace arviz
