#include "commands.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>
#include <nlohmann/json.hpp>

#include "cants/data.hpp"
#include "cants/error.hpp"
#include "cants/nn.hpp"
#include "cants/orchestrator.hpp"
#include "cants/run.hpp"

namespace cants::cli {

int cmd_run(const std::filesystem::path& config_path, const std::vector<std::string>& overrides, std::ostream& out,
            std::ostream& err)
{
    RunConfig cfg;
    try {
        cfg = load_run_config(config_path, overrides);
    } catch (const config_error& e) {
        err << "error: " << e.what() << "\n";
        return invalid_config;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return failure;
    }

    try {
        const auto outcome = execute_run(cfg);
        const auto& r = outcome.report;
        if (r.best_colony)
            fmt::print(out, "overall best validation MSE (normalized): {:.6g} (colony {}, test MSE {:.6g})\n",
                       r.best_fitness, *r.best_colony, r.best_test_mse);
        else
            fmt::print(out, "no candidate produced a finite validation MSE\n");
        fmt::print(out, "evaluations: {}  wall time: {:.1f}s\nreport: {}\n", r.evaluations, r.wall_time_seconds,
                   outcome.report_path.string());
    } catch (const std::exception& e) {
        err << "error: run failed: " << e.what() << "\n";
        return failure;
    }
    return ok;
}

namespace {

std::string cell(const nlohmann::json& v)
{
    if (v.is_null())
        return "-";
    if (v.is_number_float())
        return fmt::format("{:.6g}", v.get<double>());
    return v.dump();
}

} // namespace

int cmd_report(const std::filesystem::path& report_path, std::ostream& out, std::ostream& err)
{
    nlohmann::json doc;
    try {
        std::ifstream in(report_path);
        if (!in)
            throw io_error(fmt::format("cannot open '{}'", report_path.string()));
        doc = nlohmann::json::parse(in);
        if (doc.value("format", "") != "cants-report/1")
            throw io_error(fmt::format("'{}' is not a cants report", report_path.string()));

        fmt::print(out, "{:>6} {:>14} {:>14} {:>11} {:>9} {:>8} {:>9}\n", "colony", "best_val_mse",
                   "best_test_mse", "evaluations", "exchanges", "lost", "num_ants");
        for (const auto& c : doc.at("colonies"))
            fmt::print(out, "{:>6} {:>14} {:>14} {:>11} {:>9} {:>8} {:>9}\n", c.at("colony_id").get<std::size_t>(),
                       cell(c.at("best_validation_mse")), cell(c.at("best_test_mse")),
                       c.at("results").get<std::size_t>(), c.at("exchanges").get<std::size_t>(),
                       c.at("lost").get<std::size_t>(), c.at("final_params").at("num_ants").get<std::size_t>());
        const auto& overall = doc.at("overall");
        fmt::print(out, "overall best: colony {}  validation MSE {}  test MSE {}  (scale: {})\n",
                   cell(overall.at("best_colony")), cell(overall.at("best_validation_mse")),
                   cell(overall.at("best_test_mse")), doc.value("fitness_scale", "normalized"));
        fmt::print(out, "evaluations: {}\n", doc.at("evaluations").get<std::size_t>());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return failure;
    }
    return ok;
}

int cmd_predict(const std::filesystem::path& model_path, const std::filesystem::path& csv_path,
                const std::filesystem::path& predictions_path, std::ostream& out, std::ostream& err)
{
    try {
        std::ifstream in(model_path);
        if (!in)
            throw io_error(fmt::format("cannot open '{}'", model_path.string()));
        const auto model = saved_model_from_json(nlohmann::json::parse(in));
        const auto csv = load_csv(csv_path, {});

        const std::size_t n_in = model.input_columns.size();
        const std::size_t n_out = model.target_columns.size();
        if (csv.width() != n_in && csv.width() != n_in + n_out)
            throw domain_error(fmt::format("'{}' has {} columns; expected {} input columns, optionally followed by "
                                           "{} target columns",
                                           csv_path.string(), csv.width(), n_in, n_out));

        auto stat_index = [&](const std::string& name) {
            const auto& cols = model.normalization.columns;
            const auto it = std::find(cols.begin(), cols.end(), name);
            if (it == cols.end())
                throw domain_error(fmt::format("model has no normalization for column '{}'", name));
            return static_cast<std::size_t>(it - cols.begin());
        };

        Matrix inputs(csv.length(), n_in);
        for (std::size_t j = 0; j < n_in; ++j) {
            const auto col = csv.column_index(model.input_columns[j]);
            const auto s = stat_index(model.input_columns[j]);
            for (std::size_t t = 0; t < csv.length(); ++t)
                inputs(t, j) = model.normalization.apply(s, csv.values(t, col));
        }

        const auto graph = compile(model.genome);
        const Matrix predictions = forward(graph, model.weights, inputs);

        std::vector<std::string> names;
        Matrix raw(predictions.rows(), n_out);
        for (std::size_t o = 0; o < n_out; ++o) {
            names.push_back(model.target_columns[o] + "_pred");
            const auto s = stat_index(model.target_columns[o]);
            for (std::size_t t = 0; t < predictions.rows(); ++t)
                raw(t, o) = model.normalization.invert(s, predictions(t, o));
        }
        write_csv(predictions_path, names, raw);
        fmt::print(out, "predictions: {} ({} rows)\n", predictions_path.string(), raw.rows());

        if (csv.width() == n_in + n_out) {
            Matrix targets(csv.length(), n_out);
            for (std::size_t o = 0; o < n_out; ++o) {
                const auto col = csv.column_index(model.target_columns[o]);
                const auto s = stat_index(model.target_columns[o]);
                for (std::size_t t = 0; t < csv.length(); ++t)
                    targets(t, o) = model.normalization.apply(s, csv.values(t, col));
            }
            Matrix scored_inputs, scored_targets;
            align_forecast(inputs, targets, scored_inputs, scored_targets);
            const Matrix scored = predictions.slice_rows(0, scored_inputs.rows());
            fmt::print(out, "mse (normalized): {}\n", mse(scored, scored_targets));
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return failure;
    }
    return ok;
}

int cmd_synth(const std::filesystem::path& csv_path, unsigned long long seed, std::size_t length,
              std::size_t n_inputs, double noise_sigma, std::ostream& out, std::ostream& err)
{
    try {
        SynthOptions opts;
        opts.noise_sigma = noise_sigma;
        const auto ts = synth_generate(seed, length, n_inputs, opts);
        write_csv(csv_path, ts.columns, ts.values);
        fmt::print(out, "wrote {} rows x {} columns to {}\n", ts.length(), ts.width(), csv_path.string());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return failure;
    }
    return ok;
}

} // namespace cants::cli
