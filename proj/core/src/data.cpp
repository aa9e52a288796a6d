#include "cants/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ranges.h>
#include <nlohmann/json.hpp>

#include "cants/error.hpp"
#include "cants/rng.hpp"

namespace cants {

std::vector<std::size_t> TimeSeries::input_columns() const
{
    std::vector<std::size_t> out;
    for (std::size_t c = 0; c < width(); ++c)
        if (std::find(targets.begin(), targets.end(), c) == targets.end())
            out.push_back(c);
    return out;
}

Matrix TimeSeries::inputs() const
{
    const auto cols = input_columns();
    return values.select_cols(cols);
}

Matrix TimeSeries::target_values() const { return values.select_cols(targets); }

std::size_t TimeSeries::column_index(const std::string& name) const
{
    const auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end())
        throw domain_error(fmt::format("unknown column '{}'; available: {}", name, fmt::join(columns, ", ")));
    return static_cast<std::size_t>(it - columns.begin());
}

TimeSeries TimeSeries::slice(std::size_t first, std::size_t count) const
{
    return {columns, values.slice_rows(first, count), targets};
}

namespace {

std::vector<std::string> split_fields(const std::string& line)
{
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ','))
        out.push_back(field);
    if (!line.empty() && line.back() == ',')
        out.emplace_back();
    return out;
}

std::string trim(std::string s)
{
    const auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

bool parse_finite(const std::string& text, double& out)
{
    const char* begin = text.data();
    const char* end = begin + text.size();
    if (begin != end && *begin == '+')
        ++begin;
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end && std::isfinite(out);
}

} // namespace

TimeSeries load_csv(const std::filesystem::path& path, std::span<const std::string> target_columns)
{
    std::ifstream in(path);
    if (!in)
        throw io_error(fmt::format("cannot open '{}'", path.string()));

    std::string line;
    if (!std::getline(in, line))
        throw io_error(fmt::format("'{}' has no header row", path.string()));
    TimeSeries ts;
    for (auto& name : split_fields(line))
        ts.columns.push_back(trim(name));
    if (ts.columns.empty())
        throw io_error(fmt::format("'{}' has an empty header", path.string()));

    for (const auto& name : target_columns)
        ts.targets.push_back(ts.column_index(name));

    std::vector<double> cells;
    std::size_t rows = 0;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (trim(line).empty())
            continue;
        const auto fields = split_fields(line);
        if (fields.size() != ts.columns.size())
            throw io_error(fmt::format("'{}' row {}: expected {} cells, found {}", path.string(), line_no,
                                       ts.columns.size(), fields.size()));
        for (std::size_t c = 0; c < fields.size(); ++c) {
            double v = 0.0;
            if (!parse_finite(trim(fields[c]), v))
                throw io_error(fmt::format("'{}' row {}: column '{}' value '{}' is not a finite number",
                                           path.string(), line_no, ts.columns[c], trim(fields[c])));
            cells.push_back(v);
        }
        ++rows;
    }
    if (rows == 0)
        throw io_error(fmt::format("'{}' has no data rows", path.string()));

    ts.values = Matrix(rows, ts.columns.size());
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < ts.columns.size(); ++c)
            ts.values(r, c) = cells[r * ts.columns.size() + c];
    return ts;
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& columns, const Matrix& values)
{
    std::ofstream out(path);
    if (!out)
        throw io_error(fmt::format("cannot write '{}'", path.string()));
    out << fmt::format("{}\n", fmt::join(columns, ","));
    for (std::size_t r = 0; r < values.rows(); ++r)
        out << fmt::format("{}\n", fmt::join(values.row(r), ","));
}

double Normalization::apply(std::size_t col, double v) const
{
    if (is_constant(col))
        return 0.5;
    return (v - min[col]) / (max[col] - min[col]);
}

double Normalization::invert(std::size_t col, double v) const
{
    if (is_constant(col))
        return min[col];
    return min[col] + v * (max[col] - min[col]);
}

nlohmann::json Normalization::to_json() const { return {{"columns", columns}, {"min", min}, {"max", max}}; }

Normalization Normalization::from_json(const nlohmann::json& doc)
{
    Normalization n;
    n.columns = doc.at("columns").get<std::vector<std::string>>();
    n.min = doc.at("min").get<std::vector<double>>();
    n.max = doc.at("max").get<std::vector<double>>();
    if (n.min.size() != n.columns.size() || n.max.size() != n.columns.size())
        throw domain_error("normalization stats do not match column count");
    return n;
}

Normalized minmax_normalize(const TimeSeries& series)
{
    if (series.length() < 2)
        throw domain_error("normalization needs at least two rows");
    Normalized out{series, {series.columns, {}, {}}};
    for (std::size_t c = 0; c < series.width(); ++c) {
        double lo = series.values(0, c);
        double hi = lo;
        for (std::size_t r = 1; r < series.length(); ++r) {
            lo = std::min(lo, series.values(r, c));
            hi = std::max(hi, series.values(r, c));
        }
        out.stats.min.push_back(lo);
        out.stats.max.push_back(hi);
        for (std::size_t r = 0; r < series.length(); ++r)
            out.series.values(r, c) = out.stats.apply(c, series.values(r, c));
    }
    return out;
}

TimeSeries denormalize(const TimeSeries& series, const Normalization& stats)
{
    if (stats.columns.size() != series.width())
        throw domain_error("normalization stats do not match column count");
    TimeSeries out = series;
    for (std::size_t r = 0; r < series.length(); ++r)
        for (std::size_t c = 0; c < series.width(); ++c)
            out.values(r, c) = stats.invert(c, series.values(r, c));
    return out;
}

Split split(const TimeSeries& series, std::size_t train_len, std::size_t test_len)
{
    if (train_len < 4 || test_len < 4)
        throw domain_error("train and test slices need at least 4 rows each");
    if (train_len + test_len > series.length())
        throw domain_error(fmt::format("split needs {} rows, series has {}", train_len + test_len, series.length()));
    return {series.slice(0, train_len), series.slice(train_len, test_len)};
}

TimeSeries synth_generate(std::uint64_t seed, std::size_t length, std::size_t n_inputs, SynthOptions opts)
{
    if (length < 100)
        throw domain_error("synthetic series needs at least 100 rows");
    if (n_inputs < 2)
        throw domain_error("synthetic series needs at least 2 inputs");

    Rng rng(seed);
    const double phi = opts.ar_coefficient;
    const double innovation = std::sqrt(1.0 - phi * phi);
    TimeSeries ts;
    for (std::size_t i = 0; i < n_inputs; ++i)
        ts.columns.push_back(fmt::format("x{}", i + 1));
    ts.columns.emplace_back("y");
    ts.targets = {n_inputs};
    ts.values = Matrix(length, n_inputs + 1);

    std::vector<double> state(n_inputs);
    for (auto& s : state)
        s = rng.normal();
    for (std::size_t t = 0; t < length; ++t)
        for (std::size_t i = 0; i < n_inputs; ++i) {
            state[i] = phi * state[i] + innovation * rng.normal();
            ts.values(t, i) = state[i];
        }
    for (std::size_t t = 0; t < length; ++t) {
        const double noise = rng.normal();
        ts.values(t, n_inputs) = synth_target(ts.values, t) + opts.noise_sigma * noise;
    }
    return ts;
}

double synth_target(const Matrix& values, std::size_t t)
{
    const double x1_lag1 = t >= 1 ? values(t - 1, 0) : 0.0;
    const double x2_lag2 = t >= 2 ? values(t - 2, 1) : 0.0;
    return 0.5 * std::tanh(x1_lag1) + 0.3 * x2_lag2 * x1_lag1;
}

} // namespace cants
