#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "cants/matrix.hpp"

namespace cants {

/// Multivariate series; rows are time steps, columns are named variables.
struct TimeSeries {
    std::vector<std::string> columns;
    Matrix values;
    std::vector<std::size_t> targets;

    std::size_t length() const { return values.rows(); }
    std::size_t width() const { return values.cols(); }

    /// Every non-target column index, in column order.
    std::vector<std::size_t> input_columns() const;
    Matrix inputs() const;
    Matrix target_values() const;
    std::size_t column_index(const std::string& name) const;

    /// Rows [first, first + count) with names and targets kept.
    TimeSeries slice(std::size_t first, std::size_t count) const;
};

/// Reads a header row plus numeric rows. Every cell must parse as a finite number.
TimeSeries load_csv(const std::filesystem::path& path, std::span<const std::string> target_columns);

/// Writes header plus rows at round-trip precision.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& columns, const Matrix& values);

/// Per-column min/max used to map values onto [0, 1].
struct Normalization {
    std::vector<std::string> columns;
    std::vector<double> min;
    std::vector<double> max;

    bool is_constant(std::size_t col) const { return max[col] == min[col]; }
    double apply(std::size_t col, double v) const;
    double invert(std::size_t col, double v) const;

    nlohmann::json to_json() const;
    static Normalization from_json(const nlohmann::json& doc);
};

struct Normalized {
    TimeSeries series;
    Normalization stats;
};

/// Constant columns map to 0.5.
Normalized minmax_normalize(const TimeSeries& series);
TimeSeries denormalize(const TimeSeries& series, const Normalization& stats);

struct Split {
    TimeSeries train;
    TimeSeries test;
};

/// Chronological split: the first train_len rows, then the next test_len rows.
Split split(const TimeSeries& series, std::size_t train_len, std::size_t test_len);

struct SynthOptions {
    double noise_sigma = 0.05;
    /// Lag-one coefficient of each AR(1) driver.
    double ar_coefficient = 0.8;
};

/// Synthetic benchmark with a known learnable structure.
///
/// Inputs x1..xn are independent unit-variance AR(1) processes. The single
/// target column y obeys
///     y[t] = 0.5 * tanh(x1[t-1]) + 0.3 * x2[t-2] * x1[t-1] + noise,
/// with inputs at negative times taken as zero.
TimeSeries synth_generate(std::uint64_t seed, std::size_t length, std::size_t n_inputs, SynthOptions opts = {});

/// Noise-free target of synth_generate at row t, from the input columns.
double synth_target(const Matrix& values, std::size_t t);

} // namespace cants
