#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace cants::cli {

/// Exit codes shared by every subcommand.
enum Exit : int { ok = 0, failure = 1, invalid_config = 2 };

int cmd_run(const std::filesystem::path& config_path, const std::vector<std::string>& overrides, std::ostream& out,
            std::ostream& err);

int cmd_report(const std::filesystem::path& report_path, std::ostream& out, std::ostream& err);

/// Writes denormalized predictions to `predictions_path`; prints the
/// normalized-scale MSE when the CSV carries the target columns.
int cmd_predict(const std::filesystem::path& model_path, const std::filesystem::path& csv_path,
                const std::filesystem::path& predictions_path, std::ostream& out, std::ostream& err);

int cmd_synth(const std::filesystem::path& csv_path, unsigned long long seed, std::size_t length,
              std::size_t n_inputs, double noise_sigma, std::ostream& out, std::ostream& err);

} // namespace cants::cli
