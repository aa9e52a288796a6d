#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cants/data.hpp"
#include "cants/orchestrator.hpp"

namespace cants {

/// Where the series comes from and how it is split.
struct DataSource {
    enum class Kind { synth, csv };
    Kind kind = Kind::synth;
    std::filesystem::path path;
    std::vector<std::string> targets;
    std::uint64_t synth_seed = 42;
    std::size_t length = 2500;
    std::size_t n_inputs = 4;
    SynthOptions synth;
    std::size_t train_len = 1875;
    std::size_t test_len = 625;
};

/// Everything a `run` needs, parsed from one JSON document.
struct RunConfig {
    ExperimentConfig experiment;
    DataSource data;
    std::filesystem::path output_dir = "cants_out";
};

/// Every problem found while validating a configuration.
class config_error : public std::runtime_error {
public:
    explicit config_error(std::vector<std::string> violations);
    const std::vector<std::string>& violations() const { return violations_; }

private:
    std::vector<std::string> violations_;
};

/// Parses and validates; unknown keys are violations. Throws config_error.
RunConfig parse_run_config(const nlohmann::json& doc);
RunConfig load_run_config(const std::filesystem::path& path, const std::vector<std::string>& overrides = {});

/// Effective configuration, with every field spelled out.
nlohmann::json to_json(const RunConfig& cfg);

/// Applies `dotted.key=value`; value is read as JSON when it parses, else as a string.
void apply_override(nlohmann::json& doc, const std::string& assignment);

/// Normalized data, its split, and the matrices the workers train on.
struct PreparedData {
    TimeSeries raw;
    Normalized normalized;
    Split split;
    ExperimentData matrices;
};

PreparedData prepare_data(const DataSource& source);

/// Search space shaped to the data's input and output counts.
ExperimentConfig bind_to_data(ExperimentConfig cfg, const PreparedData& data);

struct RunOutcome {
    ExperimentReport report;
    std::filesystem::path report_path;
};

/// Runs the experiment and writes report.json, fitness.csv, trajectories.csv
/// and best_genome_<colony>.json into cfg.output_dir.
RunOutcome execute_run(const RunConfig& cfg);

void write_outputs(const std::filesystem::path& dir, const RunConfig& cfg, const PreparedData& data,
                   const ExperimentReport& report);

std::string fitness_csv(const ExperimentReport& report);
std::string trajectories_csv(const ExperimentReport& report);
nlohmann::json report_to_json(const RunConfig& cfg, const PreparedData& data, const ExperimentReport& report);

/// Saved model: genome, weights, column names and normalization.
struct SavedModel {
    Genome genome;
    std::vector<double> weights;
    std::vector<std::string> input_columns;
    std::vector<std::string> target_columns;
    Normalization normalization;
};

nlohmann::json saved_model_to_json(const SavedModel& model);
SavedModel saved_model_from_json(const nlohmann::json& doc);

} // namespace cants
