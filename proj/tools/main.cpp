#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "commands.hpp"

namespace {

void configure_logging()
{
    spdlog::set_default_logger(spdlog::stderr_color_mt("cants"));
    spdlog::set_level(spdlog::level::warn);
    if (const char* level = std::getenv("CANTS_LOG_LEVEL"))
        spdlog::set_level(spdlog::level::from_str(level));
}

} // namespace

int main(int argc, char** argv)
{
    configure_logging();

    CLI::App app{"Multi-colony ant-based recurrent network search"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    auto* run = app.add_subcommand("run", "Run an experiment described by a JSON config");
    run->add_option("config", config_path, "Config file")->required();
    run->add_option("--set", overrides, "Override a config field, e.g. --set train.epochs=10");

    std::string report_path;
    auto* report = app.add_subcommand("report", "Summarize a report.json");
    report->add_option("report", report_path, "report.json written by run")->required();

    std::string model_path, csv_path, predictions_path = "predictions.csv";
    auto* predict = app.add_subcommand("predict", "Run a saved genome over a CSV");
    predict->add_option("genome", model_path, "best_genome_<colony>.json")->required();
    predict->add_option("data", csv_path, "CSV with the model's input columns")->required();
    predict->add_option("-o,--output", predictions_path, "Where to write predictions");

    std::string synth_path;
    unsigned long long seed = 42;
    std::size_t length = 2500, inputs = 4;
    double noise = 0.05;
    auto* synth = app.add_subcommand("synth", "Write the synthetic benchmark series to CSV");
    synth->add_option("output", synth_path, "CSV path")->required();
    synth->add_option("--seed", seed);
    synth->add_option("--length", length);
    synth->add_option("--inputs", inputs);
    synth->add_option("--noise", noise);

    CLI11_PARSE(app, argc, argv);

    if (*run)
        return cants::cli::cmd_run(config_path, overrides, std::cout, std::cerr);
    if (*report)
        return cants::cli::cmd_report(report_path, std::cout, std::cerr);
    if (*predict)
        return cants::cli::cmd_predict(model_path, csv_path, predictions_path, std::cout, std::cerr);
    return cants::cli::cmd_synth(synth_path, seed, length, inputs, noise, std::cout, std::cerr);
}
