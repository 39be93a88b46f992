// Command-line entry point: train, eval, compare, replay, serve.

#include <csignal>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "arviz/io.hpp"
#include "arviz/replay.hpp"
#include "arviz/serve.hpp"
#include "arviz/stats.hpp"
#include "arviz/trainer.hpp"

namespace fs = std::filesystem;
using namespace arviz;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ScenarioArgs {
    std::string config;
    std::string preset = "main";

    ScenarioConfig load() const { return config.empty() ? preset_scenario(preset) : load_scenario(config); }
};

void add_scenario_flags(CLI::App* app, ScenarioArgs& a) {
    app->add_option("--config", a.config, "Scenario YAML file")->check(CLI::ExistingFile);
    app->add_option("--preset", a.preset, "Built-in scenario when --config is absent")
        ->check(CLI::IsMember({"main", "mini"}));
}

/// A builtin kind name, or a policy file path.
Policy resolve_policy(const std::string& spec, const DiscretizationThresholds& th) {
    if (const auto kind = parse_policy_kind(spec); kind && !fs::exists(spec)) return Policy::builtin(*kind);
    std::ifstream in(spec);
    if (!in) throw std::runtime_error("cannot read policy file " + spec);
    try {
        return load_policy(in, th);
    } catch (const FormatError& e) {
        throw std::runtime_error(spec + ":" + std::to_string(e.line) + ": " + e.what());
    }
}

template <typename Writer>
void write_file(const fs::path& path, Writer&& writer) {
    std::ostringstream os;
    writer(os);
    write_text_file(path, os.str());
}

std::vector<TrialMetrics> run_trials(const ScenarioConfig& config, const Policy& policy, std::uint64_t seed, int n,
                                     int jobs) {
    std::vector<TrialMetrics> out(static_cast<std::size_t>(n));
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int i; (i = next++) < n;) out[static_cast<std::size_t>(i)] = run_trial(config, policy, seed + i);
    };
    std::vector<std::thread> pool;
    for (int t = 1; t < std::max(1, jobs); ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return out;
}

RunManifest base_manifest(const ScenarioConfig& config) {
    RunManifest m;
    m.configFingerprint = fingerprint(config);
    m.thresholdFingerprint = fingerprint(config.thresholds);
    m.seeds["world"] = std::to_string(config.world.rngSeed);
    m.files["config"] = "config.yaml";
    return m;
}

void finish_manifest(const fs::path& out, const ScenarioConfig& config, const RunManifest& m) {
    write_text_file(out / "config.yaml", to_yaml(config));
    write_file(out / "manifest.txt", [&](std::ostream& os) { save_manifest(os, m); });
}

// ---------------------------------------------------------------- train

struct TrainArgs {
    ScenarioArgs scenario;
    TrainerParams params;
    std::string schedule = "linear";
    std::string learner = "tabular";
    std::string expert = "scripted";
    std::string expertLog;
    bool serve = false;
    int port = 8080;
    std::string staticRoot;
    std::string out;
};

int run_train(const TrainArgs& a) {
    if (a.expert == "interactive" && !a.serve) throw UsageError("--expert interactive requires --serve");
    if (a.expert == "replay" && a.expertLog.empty()) throw UsageError("--expert replay requires --expert-log");
    const ScenarioConfig config = a.scenario.load();
    TrainerParams p = a.params;
    p.schedule = *parse_beta_schedule(a.schedule);
    p.learner = *parse_policy_kind(a.learner);

    std::unique_ptr<ExpertSource> owned;
    if (a.expert == "scripted") {
        owned = std::make_unique<ScriptedExpert>();
    } else if (a.expert == "replay") {
        std::ifstream in(a.expertLog);
        if (!in) throw std::runtime_error("cannot read " + a.expertLog);
        owned = std::make_unique<ReplayExpert>(load_dataset(in), config.world.nRobots,
                                               static_cast<int>(config.world.stations.size()));
    }

    auto progress = [&](const IterationReport& r) {
        std::cerr << "iteration " << r.iteration << " beta " << format6(r.beta) << " records " << r.records
                  << " disable " << r.learned.disable << '\n';
    };
    TrainingResult result;
    if (a.serve) {
        BridgeServer::Options opts;
        opts.port = static_cast<unsigned short>(a.port);
        opts.staticRoot = a.staticRoot;
        ServeSession session(config, opts, true);
        std::cerr << "serving on port " << session.port() << '\n';
        ExpertSource& expert = owned ? *owned : session.interactive();
        result = session.train(expert, p);
    } else {
        TrainerHooks hooks;
        hooks.onIteration = progress;
        result = policy_up(config, *owned, p, {}, hooks);
    }

    const fs::path out(a.out);
    RunManifest m = base_manifest(config);
    m.seeds["mixing"] = std::to_string(p.rngSeed);
    m.seeds["trialBase"] = std::to_string(p.trialSeedBase);
    m.trainerParams = describe(p);
    m.trainerParams["expert"] = a.expert;

    write_file(out / "dataset.txt", [&](std::ostream& os) { save_dataset(os, result.dataset); });
    write_file(out / "policy.txt", [&](std::ostream& os) { save_policy(os, result.policy, config.thresholds); });
    m.files["dataset"] = "dataset.txt";
    m.files["policy"] = "policy.txt";
    for (const Checkpoint& c : result.checkpoints) {
        char name[64];
        std::snprintf(name, sizeof name, "checkpoints/policy_%04d.txt", c.iteration);
        write_file(out / name, [&](std::ostream& os) { save_policy(os, c.policy, config.thresholds); });
        m.files["checkpoint." + std::to_string(c.iteration)] = name;
    }
    const auto eval = evaluation_curve(result.history, result.dataset);
    write_file(out / "curve.tsv", [&](std::ostream& os) {
        os << "iteration\tbeta\tevents\trecords\tdisable\ttotal\tarrochDisable\tarrochTotal\tevalDisable\tevalTotal\n";
        for (std::size_t i = 0; i < result.curve.size(); ++i) {
            const IterationReport& r = result.curve[i];
            os << r.iteration << '\t' << format6(r.beta) << '\t' << r.events << '\t' << r.records << '\t'
               << r.learned.disable << '\t' << r.learned.total << '\t' << r.arroch.disable << '\t' << r.arroch.total
               << '\t' << eval[i].disable << '\t' << eval[i].total << '\n';
        }
    });
    m.files["curve"] = "curve.tsv";
    finish_manifest(out, config, m);
    std::cout << "trained " << result.curve.size() << " iterations, " << result.dataset.size() << " records, "
              << result.trialsStarted << " trials\n";
    return 0;
}

// ---------------------------------------------------------------- eval / compare

struct EvalArgs {
    ScenarioArgs scenario;
    std::string policy = "allon";
    int trials = 100;
    std::uint64_t seed = 1;
    int jobs = 1;
    std::string out;
};

int run_eval(const EvalArgs& a) {
    const ScenarioConfig config = a.scenario.load();
    const Policy policy = resolve_policy(a.policy, config.thresholds);
    const auto trials = run_trials(config, policy, a.seed, a.trials, a.jobs);
    const std::string name(to_string(policy.kind()));
    std::vector<MetricsRow> rows;
    for (const auto& t : trials) rows.push_back({name, t});
    const std::vector<MetricsSummary> summary{summarize(name, trials)};
    const fs::path out(a.out);
    write_file(out / "metrics.tsv", [&](std::ostream& os) { save_metrics(os, rows, summary); });
    RunManifest m = base_manifest(config);
    m.seeds["trialBase"] = std::to_string(a.seed);
    m.files["metrics"] = "metrics.tsv";
    m.files["policy"] = a.policy;
    finish_manifest(out, config, m);
    std::cout << name << ": mean totalWait " << format6(summary[0].meanTotalWait) << " s over " << a.trials
              << " trials\n";
    return 0;
}

struct CompareArgs {
    ScenarioArgs scenario;
    std::string learned;
    int trials = 100;
    std::uint64_t seed = 1;
    int jobs = 1;
    int bins = 20;
    std::string out;
};

int run_compare(const CompareArgs& a) {
    const ScenarioConfig config = a.scenario.load();
    std::vector<std::pair<std::string, Policy>> policies{{"learned", resolve_policy(a.learned, config.thresholds)}};
    for (PolicyKind k : {PolicyKind::Arroch, PolicyKind::Crmiar, PolicyKind::AllOn, PolicyKind::NoViz}) {
        policies.emplace_back(std::string(to_string(k)), Policy::builtin(k));
    }

    std::vector<MetricsRow> rows;
    std::vector<MetricsSummary> summaries;
    std::vector<std::vector<double>> waits;
    for (const auto& [name, policy] : policies) {
        const auto trials = run_trials(config, policy, a.seed, a.trials, a.jobs);
        std::vector<double> w;
        for (const auto& t : trials) {
            rows.push_back({name, t});
            w.push_back(t.totalWait);
        }
        summaries.push_back(summarize(name, trials));
        waits.push_back(std::move(w));
    }

    const fs::path out(a.out);
    write_file(out / "metrics.tsv", [&](std::ostream& os) { save_metrics(os, rows, summaries); });

    std::vector<std::size_t> order(policies.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return summaries[x].meanTotalWait < summaries[y].meanTotalWait;
    });
    write_file(out / "comparison.tsv", [&](std::ostream& os) {
        os << "rank\tpolicy\tmeanTotalWait\tstdevTotalWait\tvsLearnedLower\tvsLearnedHigher\tties\tpValue\n";
        int rank = 1;
        for (std::size_t i : order) {
            const SignTestResult st = sign_test(waits[0], waits[i]);
            os << rank++ << '\t' << policies[i].first << '\t' << format6(summaries[i].meanTotalWait) << '\t'
               << format6(summaries[i].stdevTotalWait) << '\t' << st.lower << '\t' << st.higher << '\t' << st.ties
               << '\t' << format6(st.pValue) << '\n';
        }
    });

    double lo = waits[0].front();
    double hi = lo;
    for (const auto& w : waits) {
        for (double v : w) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    const double width = hi > lo ? (hi - lo) / a.bins : 1.0;
    write_file(out / "histogram.tsv", [&](std::ostream& os) {
        os << "policy\tbinLow\tbinHigh\tcount\n";
        for (std::size_t p = 0; p < policies.size(); ++p) {
            std::vector<int> counts(static_cast<std::size_t>(a.bins), 0);
            for (double v : waits[p]) {
                const int b = std::min(a.bins - 1, static_cast<int>((v - lo) / width));
                ++counts[static_cast<std::size_t>(b)];
            }
            for (int b = 0; b < a.bins; ++b) {
                os << policies[p].first << '\t' << format6(lo + b * width) << '\t' << format6(lo + (b + 1) * width)
                   << '\t' << counts[static_cast<std::size_t>(b)] << '\n';
            }
        }
    });

    RunManifest m = base_manifest(config);
    m.seeds["trialBase"] = std::to_string(a.seed);
    m.files["metrics"] = "metrics.tsv";
    m.files["comparison"] = "comparison.tsv";
    m.files["histogram"] = "histogram.tsv";
    m.files["learned"] = a.learned;
    finish_manifest(out, config, m);
    for (std::size_t i : order) {
        std::cout << policies[i].first << '\t' << format6(summaries[i].meanTotalWait) << '\n';
    }
    return 0;
}

// ---------------------------------------------------------------- replay / serve

struct ReplayArgs {
    ScenarioArgs scenario;
    std::string log;
    std::string out;
};

int run_replay(const ReplayArgs& a) {
    const ScenarioConfig config = a.scenario.load();
    std::ifstream in(a.log);
    if (!in) throw std::runtime_error("cannot read " + a.log);
    const ReplayLog log = load_replay(in);
    const Policy policy = resolve_policy(log.policy, config.thresholds);
    const TrialMetrics metrics = replay(config, policy, log);
    const std::vector<MetricsRow> rows{{std::string(to_string(policy.kind())), metrics}};
    const fs::path out(a.out);
    write_file(out / "metrics.tsv", [&](std::ostream& os) { save_metrics(os, rows, {}); });
    RunManifest m = base_manifest(config);
    m.seeds["trial"] = std::to_string(log.seed);
    m.files["metrics"] = "metrics.tsv";
    m.files["log"] = a.log;
    finish_manifest(out, config, m);
    std::cout << "replayed " << log.commands.size() << " commands to tick " << log.endTick << ", totalWait "
              << format6(metrics.totalWait) << '\n';
    return 0;
}

struct ServeArgs {
    ScenarioArgs scenario;
    std::string policy = "allon";
    std::uint64_t seed = 1;
    int port = 8080;
    std::string staticRoot;
    std::uint64_t maxTicks = 0;
    bool fast = false;
    std::string out;
};

ServeSession* g_session = nullptr;

int run_serve(const ServeArgs& a) {
    const ScenarioConfig config = a.scenario.load();
    const Policy policy = resolve_policy(a.policy, config.thresholds);
    BridgeServer::Options opts;
    opts.port = static_cast<unsigned short>(a.port);
    opts.staticRoot = a.staticRoot;
    ServeSession session(config, opts, !a.fast);
    g_session = &session;
    std::signal(SIGINT, [](int) {
        if (g_session) g_session->requestStop();
    });
    std::cerr << "serving on port " << session.port() << '\n';
    ReplayLog log;
    log.policy = a.policy;
    const TrialMetrics metrics = session.trial(std::make_shared<const Policy>(policy), a.seed, &log,
                                               a.maxTicks ? std::optional(a.maxTicks) : std::nullopt);
    g_session = nullptr;

    const fs::path out(a.out);
    write_file(out / "replay.txt", [&](std::ostream& os) { save_replay(os, log); });
    const std::vector<MetricsRow> rows{{std::string(to_string(policy.kind())), metrics}};
    write_file(out / "metrics.tsv", [&](std::ostream& os) { save_metrics(os, rows, {}); });
    RunManifest m = base_manifest(config);
    m.seeds["trial"] = std::to_string(a.seed);
    m.files["replay"] = "replay.txt";
    m.files["metrics"] = "metrics.tsv";
    finish_manifest(out, config, m);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Learned AR visualization policies for a simulated robot warehouse"};
    app.require_subcommand(1);

    TrainArgs train;
    auto* t = app.add_subcommand("train", "Train a visualization policy by dataset aggregation");
    add_scenario_flags(t, train.scenario);
    t->add_option("--iterations", train.params.iterations, "Policy iterations J")->check(CLI::PositiveNumber);
    t->add_option("--pairs", train.params.pairsPerIteration, "Snapshot events per iteration")
        ->check(CLI::PositiveNumber);
    t->add_option("--interval", train.params.snapshotInterval, "Seconds of sim time between snapshot events")
        ->check(CLI::PositiveNumber);
    t->add_option("--schedule", train.schedule, "Beta schedule")->check(CLI::IsMember({"linear", "exponential"}));
    t->add_option("--beta-base", train.params.betaBase, "Base p of the exponential schedule")
        ->check(CLI::Range(0.0, 1.0));
    t->add_option("--learner", train.learner, "Classifier")->check(CLI::IsMember({"tabular", "linear"}));
    t->add_option("--checkpoint-every", train.params.checkpointEvery, "Checkpoint cadence in iterations (0 = off)")
        ->check(CLI::NonNegativeNumber);
    t->add_option("--seed", train.params.rngSeed, "Mixing stream seed");
    t->add_option("--trial-seed-base", train.params.trialSeedBase, "Seed of the first training trial");
    t->add_option("--expert", train.expert, "Expert source")
        ->check(CLI::IsMember({"scripted", "interactive", "replay"}));
    t->add_option("--expert-log", train.expertLog, "Dataset whose labels the replay expert returns");
    t->add_option("--expert-timeout", train.params.expertTimeout, "Seconds to wait for an absent expert")
        ->check(CLI::PositiveNumber);
    t->add_flag("--serve", train.serve, "Attach the console bridge");
    t->add_option("--port", train.port, "Bridge port")->check(CLI::Range(0, 65535));
    t->add_option("--static", train.staticRoot, "Console assets directory");
    t->add_option("--out", train.out, "Output directory")->required();

    EvalArgs eval;
    auto* e = app.add_subcommand("eval", "Run seeded trials of one policy");
    add_scenario_flags(e, eval.scenario);
    e->add_option("--policy", eval.policy, "Builtin name (allon, noviz, arroch, crmiar) or policy file");
    e->add_option("--trials", eval.trials, "Trial count")->check(CLI::PositiveNumber);
    e->add_option("--seed", eval.seed, "Seed of trial 0; trial i uses seed + i");
    e->add_option("--jobs", eval.jobs, "Parallel workers")->check(CLI::PositiveNumber);
    e->add_option("--out", eval.out, "Output directory")->required();

    CompareArgs cmp;
    auto* c = app.add_subcommand("compare", "Compare a learned policy with the static baselines");
    add_scenario_flags(c, cmp.scenario);
    c->add_option("--learned", cmp.learned, "Learned policy file")->required();
    c->add_option("--trials", cmp.trials, "Trials per policy")->check(CLI::PositiveNumber);
    c->add_option("--seed", cmp.seed, "Seed of trial 0; trial i uses seed + i");
    c->add_option("--jobs", cmp.jobs, "Parallel workers")->check(CLI::PositiveNumber);
    c->add_option("--bins", cmp.bins, "Histogram bins")->check(CLI::PositiveNumber);
    c->add_option("--out", cmp.out, "Output directory")->required();

    ReplayArgs rep;
    auto* r = app.add_subcommand("replay", "Re-run a recorded interactive trial");
    add_scenario_flags(r, rep.scenario);
    r->add_option("--log", rep.log, "Replay log")->required()->check(CLI::ExistingFile);
    r->add_option("--out", rep.out, "Output directory")->required();

    ServeArgs srv;
    auto* s = app.add_subcommand("serve", "Run a live trial behind the console bridge");
    add_scenario_flags(s, srv.scenario);
    s->add_option("--policy", srv.policy, "Builtin name or policy file");
    s->add_option("--seed", srv.seed, "Trial seed");
    s->add_option("--port", srv.port, "Bridge port")->check(CLI::Range(0, 65535));
    s->add_option("--static", srv.staticRoot, "Console assets directory");
    s->add_option("--max-ticks", srv.maxTicks, "Stop after this many ticks (0 = run to completion)");
    s->add_flag("--fast", srv.fast, "Do not pace ticks to wall-clock time");
    s->add_option("--out", srv.out, "Output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        return app.exit(err) == 0 ? 0 : 2;
    }

    try {
        if (*t) return run_train(train);
        if (*e) return run_eval(eval);
        if (*c) return run_compare(cmp);
        if (*r) return run_replay(rep);
        if (*s) return run_serve(srv);
    } catch (const UsageError& err) {
        std::cerr << "usage error: " << err.what() << '\n';
        return 2;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 1;
    }
    return 2;
}
