#include "arviz/io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "arviz/stats.hpp"

namespace arviz {

namespace {

constexpr const char* kDatasetMagic = "arviz-dataset";
constexpr const char* kPolicyMagic = "arviz-policy";
constexpr const char* kMetricsMagic = "arviz-metrics";
constexpr const char* kManifestMagic = "arviz-manifest";

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    if (sep == ' ') {
        std::istringstream is(line);
        for (std::string t; is >> t;) out.push_back(t);
        return out;
    }
    std::size_t start = 0;
    for (;;) {
        const std::size_t end = line.find(sep, start);
        out.push_back(line.substr(start, end - start));
        if (end == std::string::npos) break;
        start = end + 1;
    }
    return out;
}

/// Line cursor that knows its 1-based position for error reports.
class Lines {
public:
    explicit Lines(std::istream& is) : is_(is) {}

    bool next(std::string& line) {
        while (std::getline(is_, line)) {
            ++number_;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty() || line.front() == '#') continue;
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& what) const { throw FormatError(what, number_); }
    std::size_t number() const { return number_; }

    void header(const char* magic) {
        std::string line;
        if (!next(line)) fail(std::string("empty file, expected ") + magic + " header");
        const auto f = split(line, ' ');
        if (f.size() != 2 || f[0] != magic) fail(std::string("not a ") + magic + " file");
        if (f[1] != std::to_string(kFormatVersion)) fail("unsupported format version " + f[1]);
    }

    template <typename T>
    T integer(const std::string& s) const {
        T v{};
        const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || p != s.data() + s.size()) fail("expected an integer, got '" + s + "'");
        return v;
    }

    double real(const std::string& s) const {
        char* end = nullptr;
        const double v = std::strtod(s.c_str(), &end);
        if (s.empty() || end != s.c_str() + s.size()) fail("expected a number, got '" + s + "'");
        return v;
    }

private:
    std::istream& is_;
    std::size_t number_ = 0;
};

}  // namespace

void save_dataset(std::ostream& os, const AggregatedDataset& dataset) {
    os << kDatasetMagic << ' ' << kFormatVersion << '\n';
    std::size_t at = 0;
    const auto& recs = dataset.records();
    for (std::size_t count : dataset.perIterationCounts()) {
        os << "batch " << count << '\n';
        for (std::size_t i = 0; i < count; ++i, ++at) {
            const Demonstration& d = recs[at];
            os << "rec " << d.iteration << ' ' << format6(d.simTime) << ' '
               << (d.agentKind == AgentKind::Robot ? "robot" : "station") << ' ' << d.agentId << ' ' << d.state << ' '
               << static_cast<int>(d.action) << '\n';
        }
    }
}

AggregatedDataset load_dataset(std::istream& is) {
    Lines lines(is);
    lines.header(kDatasetMagic);
    AggregatedDataset out;
    std::vector<Demonstration> batch;
    std::size_t expected = 0;
    bool open = false;
    auto close = [&] {
        if (!open) return;
        if (batch.size() != expected) lines.fail("batch declared " + std::to_string(expected) + " records");
        out.aggregate(batch);
        batch.clear();
    };
    std::string line;
    while (lines.next(line)) {
        const auto f = split(line, ' ');
        if (f[0] == "batch" && f.size() == 2) {
            close();
            expected = lines.integer<std::size_t>(f[1]);
            open = true;
        } else if (f[0] == "rec" && f.size() == 7) {
            if (!open || batch.size() >= expected) lines.fail("record outside a batch");
            Demonstration d;
            d.iteration = lines.integer<int>(f[1]);
            d.simTime = lines.real(f[2]);
            if (f[3] == "robot") {
                d.agentKind = AgentKind::Robot;
            } else if (f[3] == "station") {
                d.agentKind = AgentKind::Station;
            } else {
                lines.fail("unknown agent kind '" + f[3] + "'");
            }
            d.agentId = lines.integer<int>(f[4]);
            d.state = lines.integer<int>(f[5]);
            const int bits = lines.integer<int>(f[6]);
            const int states = d.agentKind == AgentKind::Robot ? kRobotStates : kStationStates;
            const int maxBits = d.agentKind == AgentKind::Robot ? 7 : 1;
            if (d.state < 0 || d.state >= states) lines.fail("state index out of range");
            if (bits < 0 || bits > maxBits) lines.fail("action bits out of range");
            d.action = static_cast<std::uint8_t>(bits);
            batch.push_back(d);
        } else {
            lines.fail("malformed dataset line");
        }
    }
    close();
    return out;
}

void save_policy(std::ostream& os, const Policy& policy, const DiscretizationThresholds& th) {
    os << kPolicyMagic << ' ' << kFormatVersion << '\n'
       << "kind " << to_string(policy.kind()) << '\n'
       << "version " << policy.version() << '\n'
       << "thresholds " << fingerprint(th) << '\n'
       << "trained " << (policy.trained() ? 1 : 0) << '\n';
    if (const auto* t = std::get_if<TabularParams>(&policy.params())) {
        for (int s = 0; s < kRobotStates; ++s) {
            os << "robot " << s << ' ';
            if (t->robot[s]) {
                os << static_cast<int>(*t->robot[s]);
            } else {
                os << '-';
            }
            os << '\n';
        }
        for (int s = 0; s < kStationStates; ++s) {
            os << "station " << s << ' ';
            if (t->station[s]) {
                os << static_cast<int>(*t->station[s]);
            } else {
                os << '-';
            }
            os << '\n';
        }
    } else if (const auto* l = std::get_if<LinearParams>(&policy.params())) {
        for (int s = 0; s < kRobotStates; ++s) {
            os << "robot " << s;
            for (int c = 0; c < kRobotChannelCount; ++c) {
                os << ' ' << format6(l->robot[c][0][s]) << ' ' << format6(l->robot[c][1][s]);
            }
            os << '\n';
        }
        for (int s = 0; s < kStationStates; ++s) {
            os << "station " << s << ' ' << format6(l->station[0][s]) << ' ' << format6(l->station[1][s]) << '\n';
        }
    }
}

Policy load_policy(std::istream& is, const DiscretizationThresholds& expected) {
    Lines lines(is);
    lines.header(kPolicyMagic);
    std::string line;
    auto field = [&](const char* key) {
        if (!lines.next(line)) lines.fail(std::string("missing ") + key);
        const auto f = split(line, ' ');
        if (f.size() != 2 || f[0] != key) lines.fail(std::string("expected ") + key);
        return f[1];
    };
    const auto kind = parse_policy_kind(field("kind"));
    if (!kind) lines.fail("unknown policy kind");
    const int version = lines.integer<int>(field("version"));
    if (field("thresholds") != fingerprint(expected)) {
        lines.fail("policy was trained under different discretization thresholds");
    }
    const int trained = lines.integer<int>(field("trained"));
    if (trained != 0 && trained != 1) lines.fail("trained must be 0 or 1");
    if (!trained) {
        if (lines.next(line)) lines.fail("unexpected records in an untrained policy");
        return Policy::builtin(*kind);
    }
    if (!is_learnable(*kind)) lines.fail("static policies carry no parameters");

    std::vector<bool> seenRobot(kRobotStates, false);
    std::vector<bool> seenStation(kStationStates, false);
    TabularParams tab;
    LinearParams lin;
    const bool isTab = *kind == PolicyKind::TabularMajority;
    while (lines.next(line)) {
        const auto f = split(line, ' ');
        const bool robot = !f.empty() && f[0] == "robot";
        if (f.empty() || (!robot && f[0] != "station")) lines.fail("malformed policy record");
        const std::size_t want = isTab ? 3 : (robot ? 2 + 2 * kRobotChannelCount : 4);
        if (f.size() != want) lines.fail("wrong field count in policy record");
        const int s = lines.integer<int>(f[1]);
        auto& seen = robot ? seenRobot : seenStation;
        if (s < 0 || s >= static_cast<int>(seen.size())) lines.fail("state index out of range");
        if (seen[s]) lines.fail("duplicate state " + std::to_string(s));
        seen[s] = true;
        if (isTab) {
            std::optional<std::uint8_t> bits;
            if (f[2] != "-") {
                const int b = lines.integer<int>(f[2]);
                if (b < 0 || b > (robot ? 7 : 1)) lines.fail("action bits out of range");
                bits = static_cast<std::uint8_t>(b);
            }
            (robot ? tab.robot[s] : tab.station[s]) = bits;
        } else if (robot) {
            for (int c = 0; c < kRobotChannelCount; ++c) {
                lin.robot[c][0][s] = lines.real(f[2 + 2 * c]);
                lin.robot[c][1][s] = lines.real(f[3 + 2 * c]);
            }
        } else {
            lin.station[0][s] = lines.real(f[2]);
            lin.station[1][s] = lines.real(f[3]);
        }
    }
    for (bool b : seenRobot) {
        if (!b) lines.fail("missing robot state records");
    }
    for (bool b : seenStation) {
        if (!b) lines.fail("missing station state records");
    }
    return isTab ? Policy::tabular(tab, version) : Policy::linear(lin, version);
}

MetricsSummary summarize(const std::string& policy, std::span<const TrialMetrics> trials) {
    MetricsSummary s;
    s.policy = policy;
    s.trials = static_cast<int>(trials.size());
    std::vector<double> waits;
    std::vector<double> completions;
    for (const TrialMetrics& m : trials) {
        waits.push_back(m.totalWait);
        completions.push_back(m.completionTime);
        if (m.timedOut) ++s.timedOut;
    }
    s.meanTotalWait = quantize6(mean(waits));
    s.stdevTotalWait = quantize6(stdev(waits));
    s.meanCompletion = quantize6(mean(completions));
    s.stdevCompletion = quantize6(stdev(completions));
    return s;
}

void save_metrics(std::ostream& os, std::span<const MetricsRow> rows, std::span<const MetricsSummary> summaries) {
    os << kMetricsMagic << ' ' << kFormatVersion << '\n';
    os << "#kind\tpolicy\tseed\ttotalWait\tcompletionTime\tboxesDelivered\ttimedOut\tperRobotWait\n";
    for (const MetricsRow& r : rows) {
        const TrialMetrics& m = r.metrics;
        os << "trial\t" << r.policy << '\t' << m.seed << '\t' << format6(m.totalWait) << '\t'
           << format6(m.completionTime) << '\t' << m.boxesDelivered << '\t' << (m.timedOut ? 1 : 0) << '\t';
        for (std::size_t i = 0; i < m.perRobotWait.size(); ++i) {
            if (i) os << ',';
            os << format6(m.perRobotWait[i]);
        }
        os << '\n';
    }
    os << "#kind\tpolicy\ttrials\ttimedOut\tmeanTotalWait\tstdevTotalWait\tmeanCompletion\tstdevCompletion\n";
    for (const MetricsSummary& s : summaries) {
        os << "summary\t" << s.policy << '\t' << s.trials << '\t' << s.timedOut << '\t' << format6(s.meanTotalWait)
           << '\t' << format6(s.stdevTotalWait) << '\t' << format6(s.meanCompletion) << '\t'
           << format6(s.stdevCompletion) << '\n';
    }
}

MetricsFile load_metrics(std::istream& is) {
    Lines lines(is);
    lines.header(kMetricsMagic);
    MetricsFile out;
    std::string line;
    while (lines.next(line)) {
        const auto f = split(line, '\t');
        if (f[0] == "trial" && f.size() == 8) {
            MetricsRow r;
            r.policy = f[1];
            r.metrics.seed = lines.integer<std::uint64_t>(f[2]);
            r.metrics.totalWait = lines.real(f[3]);
            r.metrics.completionTime = lines.real(f[4]);
            r.metrics.boxesDelivered = lines.integer<int>(f[5]);
            r.metrics.timedOut = lines.integer<int>(f[6]) != 0;
            if (!f[7].empty()) {
                for (const auto& w : split(f[7], ',')) r.metrics.perRobotWait.push_back(lines.real(w));
            }
            out.rows.push_back(std::move(r));
        } else if (f[0] == "summary" && f.size() == 8) {
            MetricsSummary s;
            s.policy = f[1];
            s.trials = lines.integer<int>(f[2]);
            s.timedOut = lines.integer<int>(f[3]);
            s.meanTotalWait = lines.real(f[4]);
            s.stdevTotalWait = lines.real(f[5]);
            s.meanCompletion = lines.real(f[6]);
            s.stdevCompletion = lines.real(f[7]);
            out.summaries.push_back(std::move(s));
        } else {
            lines.fail("malformed metrics line");
        }
    }
    return out;
}

void save_manifest(std::ostream& os, const RunManifest& m) {
    os << kManifestMagic << ' ' << m.formatVersion << '\n'
       << "config " << m.configFingerprint << '\n'
       << "thresholds " << m.thresholdFingerprint << '\n';
    for (const auto& [k, v] : m.seeds) os << "seed." << k << ' ' << v << '\n';
    for (const auto& [k, v] : m.trainerParams) os << "trainer." << k << ' ' << v << '\n';
    for (const auto& [k, v] : m.files) os << "file." << k << ' ' << v << '\n';
}

RunManifest load_manifest(std::istream& is) {
    Lines lines(is);
    lines.header(kManifestMagic);
    RunManifest m;
    std::string line;
    while (lines.next(line)) {
        const std::size_t sp = line.find(' ');
        if (sp == std::string::npos) lines.fail("expected '<key> <value>'");
        const std::string key = line.substr(0, sp);
        const std::string value = line.substr(sp + 1);
        auto under = [&](const std::string& prefix, std::map<std::string, std::string>& into) {
            if (key.rfind(prefix, 0) != 0) return false;
            into[key.substr(prefix.size())] = value;
            return true;
        };
        if (key == "config") {
            m.configFingerprint = value;
        } else if (key == "thresholds") {
            m.thresholdFingerprint = value;
        } else if (!under("seed.", m.seeds) && !under("trainer.", m.trainerParams) && !under("file.", m.files)) {
            lines.fail("unknown manifest key '" + key + "'");
        }
    }
    return m;
}

void verify_manifest(const RunManifest& m, const std::string& configFingerprint,
                     const std::string& thresholdFingerprint) {
    if (m.configFingerprint != configFingerprint) {
        throw FormatError("manifest config fingerprint " + m.configFingerprint + " does not match " +
                          configFingerprint);
    }
    if (m.thresholdFingerprint != thresholdFingerprint) {
        throw FormatError("manifest threshold fingerprint " + m.thresholdFingerprint + " does not match " +
                          thresholdFingerprint);
    }
}

std::map<std::string, std::string> describe(const TrainerParams& p) {
    return {
        {"iterations", std::to_string(p.iterations)},
        {"pairsPerIteration", std::to_string(p.pairsPerIteration)},
        {"snapshotInterval", format6(p.snapshotInterval)},
        {"schedule", std::string(to_string(p.schedule))},
        {"betaBase", format6(p.betaBase)},
        {"rngSeed", std::to_string(p.rngSeed)},
        {"trialSeedBase", std::to_string(p.trialSeedBase)},
        {"checkpointEvery", std::to_string(p.checkpointEvery)},
        {"learner", std::string(to_string(p.learner))},
        {"expertTimeout", format6(p.expertTimeout)},
    };
}

void write_text_file(const std::filesystem::path& path, const std::string& contents) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << contents;
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace arviz
