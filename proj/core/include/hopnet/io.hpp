#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hopnet/experiment_harness.hpp"
#include "hopnet/hopfield_core.hpp"
#include "hopnet/invariant_subspace.hpp"
#include "hopnet/learning_rules.hpp"
#include "hopnet/svm_solvers.hpp"

namespace hopnet {

std::string version_string();

// Shortest round-trippable text for a double (17 significant digits).
std::string format_double(double x);

// "n=<n>", biases on one line, strict upper triangle of W on one line.
void write_params(std::ostream& out, const NetParams& p);
NetParams read_params(std::istream& in);
void save_params(const std::filesystem::path& path, const NetParams& p);
NetParams load_params(const std::filesystem::path& path);

std::vector<EdgeGraph> load_graphs(const std::filesystem::path& path);
void save_graphs(const std::filesystem::path& path, std::span<const EdgeGraph> graphs);

void write_trace_csv(std::ostream& out, std::span<const TraceRow> trace);

extern const char* const kTrialRecordHeader;
void write_trial_records(std::ostream& out, std::span<const TrialRecord> records);
std::vector<TrialRecord> read_trial_records(std::istream& in);

void write_scaling_csv(std::ostream& out, const ScalingResult& result);
void write_hcp_csv(std::ostream& out, std::span<const HcpRecord> records);
void write_descent_csv(std::ostream& out, std::span<const DescentRecord> records);
void write_histogram_csv(std::ostream& out, const WeightHistogram& hist);
void write_sample_gap_csv(std::ostream& out, std::span<const SampleGapRecord> records);

// "n=<n>", then n rows of W, then n rows of the class matrix.
void write_heatmap(std::ostream& out, const HeatmapExport& heat);
HeatmapExport read_heatmap(std::istream& in);

std::string svm_sidecar_json(const HsvmResult& result);
std::string projection_json(const Projection& proj);
std::string hnngic_json(const HnngicVerdict& verdict);
std::string scaling_fit_json(const ScalingResult& result);
std::string accuracy_json(const AccuracyResult& acc, std::size_t count);

std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);

struct ManifestInput {
  std::string subcommand;
  std::uint64_t master_seed = 0;
  std::vector<std::pair<std::string, std::string>> config;  // resolved flag values
  std::vector<std::filesystem::path> artifacts;
};

// Writes manifest.json next to the artifacts; paths are stored relative to it.
std::filesystem::path write_manifest(const std::filesystem::path& dir, const ManifestInput& input);

struct ManifestCheck {
  bool ok = true;
  std::size_t checked = 0;
  std::vector<std::string> problems;
};

ManifestCheck verify_manifest(const std::filesystem::path& manifest_path);

}  // namespace hopnet
