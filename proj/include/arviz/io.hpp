#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "arviz/dataset.hpp"
#include "arviz/features.hpp"
#include "arviz/policy.hpp"
#include "arviz/simulation.hpp"
#include "arviz/trainer.hpp"

namespace arviz {

// Every file starts with a one-line header "<magic> <version>". Loaders throw
// FormatError (with the 1-based line) on a wrong magic or version, a
// fingerprint mismatch, or a malformed record. Floats use 6 decimals.
inline constexpr int kFormatVersion = 1;

void save_dataset(std::ostream& os, const AggregatedDataset& dataset);
AggregatedDataset load_dataset(std::istream& is);

void save_policy(std::ostream& os, const Policy& policy, const DiscretizationThresholds& th);
/// Rejects files trained under different thresholds.
Policy load_policy(std::istream& is, const DiscretizationThresholds& expected);

struct MetricsRow {
    std::string policy;
    TrialMetrics metrics;
    bool operator==(const MetricsRow&) const = default;
};

struct MetricsSummary {
    std::string policy;
    int trials = 0;
    int timedOut = 0;
    double meanTotalWait = 0.0;
    double stdevTotalWait = 0.0;
    double meanCompletion = 0.0;
    double stdevCompletion = 0.0;
    bool operator==(const MetricsSummary&) const = default;
};

MetricsSummary summarize(const std::string& policy, std::span<const TrialMetrics> trials);
void save_metrics(std::ostream& os, std::span<const MetricsRow> rows, std::span<const MetricsSummary> summaries);
struct MetricsFile {
    std::vector<MetricsRow> rows;
    std::vector<MetricsSummary> summaries;
    bool operator==(const MetricsFile&) const = default;
};
MetricsFile load_metrics(std::istream& is);

struct RunManifest {
    int formatVersion = kFormatVersion;
    std::string configFingerprint;
    std::string thresholdFingerprint;
    std::map<std::string, std::string> seeds;
    std::map<std::string, std::string> trainerParams;
    std::map<std::string, std::string> files;  // role -> path relative to the manifest
    bool operator==(const RunManifest&) const = default;
};

void save_manifest(std::ostream& os, const RunManifest& manifest);
RunManifest load_manifest(std::istream& is);
/// Throws FormatError if either fingerprint differs.
void verify_manifest(const RunManifest& manifest, const std::string& configFingerprint,
                     const std::string& thresholdFingerprint);

std::map<std::string, std::string> describe(const TrainerParams& params);

// File helpers. Writers create parent directories; readers throw
// std::runtime_error naming the path when it cannot be opened.
void write_text_file(const std::filesystem::path& path, const std::string& contents);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace arviz
