#include <gtest/gtest.h>

#include <filesystem>
#include <random>
#include <sstream>

#include "arviz/io.hpp"
#include "oracles.hpp"

using namespace arviz;

namespace {

std::string replace_line(const std::string& text, std::size_t lineNo, const std::string& with) {
    std::istringstream in(text);
    std::ostringstream out;
    std::string line;
    for (std::size_t n = 1; std::getline(in, line); ++n) out << (n == lineNo ? with : line) << "\n";
    return out.str();
}

std::size_t failing_line(const std::function<void(std::istream&)>& load, const std::string& text) {
    std::istringstream in(text);
    try {
        load(in);
    } catch (const FormatError& e) {
        return e.line;
    }
    ADD_FAILURE() << "no FormatError";
    return 0;
}

AggregatedDataset random_dataset(std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    AggregatedDataset d;
    for (int j = 0; j < 3; ++j) d.aggregate(arviz::testing::random_records(40, gen, j));
    return d;
}

}  // namespace

TEST(DatasetIo, RoundTrip) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const AggregatedDataset d = random_dataset(seed);
        std::stringstream ss;
        save_dataset(ss, d);
        EXPECT_EQ(load_dataset(ss), d);
    }
    std::stringstream empty;
    save_dataset(empty, {});
    EXPECT_TRUE(load_dataset(empty).empty());
}

TEST(DatasetIo, RejectsVersionBumpAndReportsLines) {
    std::stringstream ss;
    save_dataset(ss, random_dataset(2));
    const std::string text = ss.str();
    auto load = [](std::istream& is) { load_dataset(is); };
    EXPECT_EQ(failing_line(load, replace_line(text, 1, "arviz-dataset 2")), 1u);
    EXPECT_EQ(failing_line(load, replace_line(text, 3, "rec 0 4.000000 robot 0 999 3")), 3u);
    EXPECT_EQ(failing_line(load, replace_line(text, 4, "rec 0 4.000000 station 1 2 7")), 4u);
    EXPECT_EQ(failing_line(load, replace_line(text, 5, "rec 0 banana")), 5u);
    // A short batch is caught where the next batch header appears.
    EXPECT_EQ(failing_line(load, replace_line(text, 2, "batch 41")), 2u + 40u + 1u);
}

TEST(PolicyIo, RoundTripEveryKind) {
    std::mt19937_64 gen(3);
    AggregatedDataset d;
    d.aggregate(arviz::testing::random_records(500, gen));
    const DiscretizationThresholds th;
    for (const Policy& p : {Policy::builtin(PolicyKind::AllOn), Policy::builtin(PolicyKind::Crmiar),
                            Policy::builtin(PolicyKind::TabularMajority), train(d, PolicyKind::TabularMajority, 4),
                            train(d, PolicyKind::LinearMulticlass, 2)}) {
        std::stringstream ss;
        save_policy(ss, p, th);
        const Policy back = load_policy(ss, th);
        EXPECT_EQ(back.kind(), p.kind());
        EXPECT_EQ(back.version(), p.version());
        EXPECT_EQ(back.trained(), p.trained());
        for (int s = 0; s < kRobotStates; ++s) EXPECT_EQ(back.act_robot_state(s), p.act_robot_state(s));
        for (int s = 0; s < kStationStates; ++s) EXPECT_EQ(back.act_station_state(s), p.act_station_state(s));
        if (p.kind() == PolicyKind::TabularMajority) EXPECT_EQ(back, p);
    }
}

TEST(PolicyIo, RejectsMismatchedThresholdsAndBadRecords) {
    std::mt19937_64 gen(4);
    AggregatedDataset d;
    d.aggregate(arviz::testing::random_records(100, gen));
    std::stringstream ss;
    save_policy(ss, train(d, PolicyKind::TabularMajority), {});
    const std::string text = ss.str();

    DiscretizationThresholds other;
    other.humanClose = 2.5;
    std::istringstream a(text);
    EXPECT_THROW(load_policy(a, other), FormatError);

    auto load = [](std::istream& is) { load_policy(is, {}); };
    EXPECT_EQ(failing_line(load, replace_line(text, 1, "arviz-policy 2")), 1u);
    EXPECT_EQ(failing_line(load, replace_line(text, 2, "kind svm")), 2u);
    EXPECT_EQ(failing_line(load, replace_line(text, 6, "robot 0 9")), 6u);
    EXPECT_EQ(failing_line(load, replace_line(text, 7, "robot 0 -")), 7u);
    // Dropping a state record leaves the table incomplete.
    EXPECT_GT(failing_line(load, replace_line(text, 8, "")), 0u);
}

TEST(MetricsIo, RoundTripAndSummary) {
    std::vector<MetricsRow> rows;
    std::vector<TrialMetrics> trials;
    for (int i = 0; i < 5; ++i) {
        TrialMetrics m{static_cast<std::uint64_t>(i), {1.5 * i, 2.25}, 1.5 * i + 2.25, 400.0 + i, 36, i == 4};
        rows.push_back({"learned", m});
        trials.push_back(m);
    }
    const MetricsSummary s = summarize("learned", trials);
    EXPECT_EQ(s.trials, 5);
    EXPECT_EQ(s.timedOut, 1);
    EXPECT_DOUBLE_EQ(s.meanTotalWait, 5.25);
    EXPECT_DOUBLE_EQ(s.meanCompletion, 402.0);
    std::stringstream ss;
    save_metrics(ss, rows, std::vector<MetricsSummary>{s});
    const MetricsFile f = load_metrics(ss);
    EXPECT_EQ(f.rows, rows);
    ASSERT_EQ(f.summaries.size(), 1u);
    EXPECT_EQ(f.summaries[0], s);
}

TEST(ManifestIo, RoundTripAndVerify) {
    RunManifest m;
    m.configFingerprint = "0123456789abcdef";
    m.thresholdFingerprint = "fedcba9876543210";
    m.seeds = {{"trainer", "1"}, {"trialBase", "1000"}};
    m.trainerParams = describe(TrainerParams{});
    m.files = {{"policy", "policy.txt"}, {"dataset", "dataset.txt"}};
    std::stringstream ss;
    save_manifest(ss, m);
    const RunManifest back = load_manifest(ss);
    EXPECT_EQ(back, m);
    EXPECT_NO_THROW(verify_manifest(back, m.configFingerprint, m.thresholdFingerprint));
    EXPECT_THROW(verify_manifest(back, "x", m.thresholdFingerprint), FormatError);
    EXPECT_THROW(verify_manifest(back, m.configFingerprint, "y"), FormatError);
    EXPECT_EQ(m.trainerParams.at("iterations"), "240");
}

TEST(Files, WriteCreatesDirectoriesAndReadFailsLoudly) {
    const auto dir = std::filesystem::temp_directory_path() / "arviz_io_test";
    std::filesystem::remove_all(dir);
    write_text_file(dir / "a" / "b.txt", "hello\n");
    EXPECT_EQ(read_text_file(dir / "a" / "b.txt"), "hello\n");
    EXPECT_THROW(read_text_file(dir / "missing.txt"), std::runtime_error);
    std::filesystem::remove_all(dir);
}
