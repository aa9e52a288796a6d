#include "cants/run.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ranges.h>
#include <spdlog/spdlog.h>

#include "cants/error.hpp"

namespace cants {

config_error::config_error(std::vector<std::string> violations)
    : std::runtime_error(fmt::format("invalid configuration:\n  {}", fmt::join(violations, "\n  "))),
      violations_(std::move(violations))
{
}

namespace {

/// Reads fields from one JSON object, recording type errors and unknown keys.
class Section {
public:
    Section(const nlohmann::json& obj, std::string prefix, std::vector<std::string>& violations)
        : obj_(obj), prefix_(std::move(prefix)), violations_(violations)
    {
        if (!obj_.is_object())
            violations_.push_back(fmt::format("{} must be an object", prefix_.empty() ? "config" : prefix_));
    }

    ~Section()
    {
        if (!obj_.is_object())
            return;
        for (const auto& [key, _] : obj_.items())
            if (!seen_.contains(key))
                violations_.push_back(fmt::format("unknown key '{}'", name(key)));
    }

    Section(const Section&) = delete;
    Section& operator=(const Section&) = delete;

    template <typename T>
    void read(const std::string& key, T& out)
    {
        seen_.insert(key);
        if (!obj_.is_object() || !obj_.contains(key))
            return;
        const auto& v = obj_.at(key);
        try {
            if constexpr (std::is_same_v<T, std::size_t> || std::is_same_v<T, std::uint64_t>) {
                if (!v.is_number_integer() || v.get<long long>() < 0)
                    throw std::invalid_argument("");
            } else if constexpr (std::is_same_v<T, double>) {
                if (!v.is_number())
                    throw std::invalid_argument("");
            } else if constexpr (std::is_same_v<T, bool>) {
                if (!v.is_boolean())
                    throw std::invalid_argument("");
            }
            out = v.get<T>();
        } catch (const std::exception&) {
            violations_.push_back(fmt::format("'{}' has the wrong type ({})", name(key), v.dump()));
        }
    }

    /// Child object; absent keys yield an empty object.
    const nlohmann::json& child(const std::string& key)
    {
        seen_.insert(key);
        static const nlohmann::json empty = nlohmann::json::object();
        if (!obj_.is_object() || !obj_.contains(key))
            return empty;
        return obj_.at(key);
    }

    std::string name(const std::string& key) const { return prefix_.empty() ? key : prefix_ + "." + key; }

private:
    const nlohmann::json& obj_;
    std::string prefix_;
    std::vector<std::string>& violations_;
    std::set<std::string> seen_;
};

const char* mode_name(ExecutionMode m) { return m == ExecutionMode::concurrent ? "concurrent" : "deterministic"; }

} // namespace

RunConfig parse_run_config(const nlohmann::json& doc)
{
    RunConfig cfg;
    auto& e = cfg.experiment;
    std::vector<std::string> v;
    {
        Section top(doc, "", v);
        top.read("n_colonies", e.n_colonies);
        top.read("generations_per_colony", e.generations_per_colony);
        top.read("exchange_interval", e.exchange_interval);
        top.read("workers_per_colony", e.workers_per_colony);
        top.read("exchanges_enabled", e.exchanges_enabled);
        top.read("initial_ants_first", e.initial_ants_first);
        top.read("initial_ants_last", e.initial_ants_last);
        top.read("initial_ant_counts", e.initial_ant_counts);
        top.read("initial_evaporation", e.initial_evaporation);
        top.read("initial_mortality", e.initial_mortality);
        top.read("population_capacity", e.population_capacity);
        top.read("cluster_radius", e.cluster_radius);
        top.read("seed", e.seed);
        std::string mode = mode_name(e.mode);
        top.read("mode", mode);
        if (mode == "concurrent")
            e.mode = ExecutionMode::concurrent;
        else if (mode == "deterministic")
            e.mode = ExecutionMode::deterministic;
        else
            v.push_back(fmt::format("mode '{}' must be 'concurrent' or 'deterministic'", mode));
        std::string out = cfg.output_dir.string();
        top.read("output_dir", out);
        cfg.output_dir = out;

        {
            Section s(top.child("space"), "space", v);
            s.read("max_recurrent_depth", e.space.max_recurrent_depth);
            s.read("strength_floor", e.space.strength_floor);
            s.read("strength_max", e.space.strength_max);
            s.read("initial_strength", e.space.initial_strength);
            s.read("deposit_amount", e.space.deposit_amount);
            s.read("merge_radius", e.space.merge_radius);
        }
        {
            Section s(top.child("swarm"), "swarm", v);
            s.read("inertia", e.swarm.inertia);
            s.read("cognitive", e.swarm.cognitive);
            s.read("social", e.swarm.social);
            s.read("v_max", e.swarm.v_max);
        }
        {
            Section s(top.child("train"), "train", v);
            s.read("epochs", e.train.epochs);
            s.read("learning_rate", e.train.learning_rate);
            s.read("gradient_clip", e.train.gradient_clip);
            s.read("weight_init_scale", e.train.weight_init_scale);
            s.read("validation_fraction", e.train.validation_fraction);
        }
        {
            auto& d = cfg.data;
            Section s(top.child("data"), "data", v);
            std::string source = "synth";
            s.read("source", source);
            std::string path;
            s.read("path", path);
            d.path = path;
            s.read("targets", d.targets);
            s.read("seed", d.synth_seed);
            s.read("length", d.length);
            s.read("n_inputs", d.n_inputs);
            s.read("noise_sigma", d.synth.noise_sigma);
            s.read("ar_coefficient", d.synth.ar_coefficient);
            s.read("train_len", d.train_len);
            s.read("test_len", d.test_len);
            if (source == "synth") {
                d.kind = DataSource::Kind::synth;
                if (d.length < 100)
                    v.push_back("data.length must be at least 100 for synthetic data");
                if (d.n_inputs < 2)
                    v.push_back("data.n_inputs must be at least 2 for synthetic data");
                if (!(d.synth.noise_sigma >= 0.0))
                    v.push_back("data.noise_sigma must be non-negative");
                if (!(std::abs(d.synth.ar_coefficient) < 1.0))
                    v.push_back("data.ar_coefficient must lie in (-1, 1)");
                if (d.train_len + d.test_len > d.length)
                    v.push_back(fmt::format("data.train_len + data.test_len = {} exceeds data.length {}",
                                            d.train_len + d.test_len, d.length));
            } else if (source == "csv") {
                d.kind = DataSource::Kind::csv;
                if (d.path.empty())
                    v.push_back("data.path is required for csv data");
                if (d.targets.empty())
                    v.push_back("data.targets must name at least one column for csv data");
            } else {
                v.push_back(fmt::format("data.source '{}' must be 'synth' or 'csv'", source));
            }
            if (d.train_len < 4 || d.test_len < 4)
                v.push_back("data.train_len and data.test_len must be at least 4");
        }
    }

    // Input/output counts come from the data; validate the rest with placeholders.
    auto probe = e;
    probe.space.n_inputs = std::max<std::size_t>(probe.space.n_inputs, 1);
    for (auto& msg : probe.violations())
        v.push_back(std::move(msg));
    if (!v.empty())
        throw config_error(std::move(v));
    return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path, const std::vector<std::string>& overrides)
{
    std::ifstream in(path);
    if (!in)
        throw io_error(fmt::format("cannot open config '{}'", path.string()));
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw config_error({fmt::format("'{}' is not valid JSON: {}", path.string(), e.what())});
    }
    for (const auto& o : overrides)
        apply_override(doc, o);
    return parse_run_config(doc);
}

void apply_override(nlohmann::json& doc, const std::string& assignment)
{
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
        throw config_error({fmt::format("override '{}' must look like key=value", assignment)});
    const std::string key = assignment.substr(0, eq);
    const std::string text = assignment.substr(eq + 1);
    nlohmann::json value = nlohmann::json::parse(text, nullptr, false);
    if (value.is_discarded())
        value = text;

    nlohmann::json* node = &doc;
    std::istringstream parts(key);
    std::string part;
    std::vector<std::string> path;
    while (std::getline(parts, part, '.'))
        path.push_back(part);
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        if (!node->is_object())
            throw config_error({fmt::format("override '{}': '{}' is not an object", assignment, path[i])});
        node = &(*node)[path[i]];
        if (node->is_null())
            *node = nlohmann::json::object();
    }
    if (!node->is_object())
        throw config_error({fmt::format("override '{}' does not address an object field", assignment)});
    (*node)[path.back()] = std::move(value);
}

nlohmann::json to_json(const RunConfig& cfg)
{
    const auto& e = cfg.experiment;
    const auto& d = cfg.data;
    nlohmann::json data = {{"source", d.kind == DataSource::Kind::csv ? "csv" : "synth"},
                           {"train_len", d.train_len},
                           {"test_len", d.test_len}};
    if (d.kind == DataSource::Kind::csv) {
        data["path"] = d.path.string();
        data["targets"] = d.targets;
    } else {
        data["seed"] = d.synth_seed;
        data["length"] = d.length;
        data["n_inputs"] = d.n_inputs;
        data["noise_sigma"] = d.synth.noise_sigma;
        data["ar_coefficient"] = d.synth.ar_coefficient;
    }
    return {
        {"n_colonies", e.n_colonies},
        {"generations_per_colony", e.generations_per_colony},
        {"exchange_interval", e.exchange_interval},
        {"workers_per_colony", e.workers_per_colony},
        {"exchanges_enabled", e.exchanges_enabled},
        {"initial_ants_first", e.initial_ants_first},
        {"initial_ants_last", e.initial_ants_last},
        {"initial_ant_counts", e.initial_ant_counts},
        {"initial_evaporation", e.initial_evaporation},
        {"initial_mortality", e.initial_mortality},
        {"population_capacity", e.population_capacity},
        {"cluster_radius", e.cluster_radius},
        {"seed", e.seed},
        {"mode", mode_name(e.mode)},
        {"output_dir", cfg.output_dir.string()},
        {"space",
         {{"max_recurrent_depth", e.space.max_recurrent_depth},
          {"strength_floor", e.space.strength_floor},
          {"strength_max", e.space.strength_max},
          {"initial_strength", e.space.initial_strength},
          {"deposit_amount", e.space.deposit_amount},
          {"merge_radius", e.space.merge_radius}}},
        {"swarm",
         {{"inertia", e.swarm.inertia},
          {"cognitive", e.swarm.cognitive},
          {"social", e.swarm.social},
          {"v_max", e.swarm.v_max}}},
        {"train",
         {{"epochs", e.train.epochs},
          {"learning_rate", e.train.learning_rate},
          {"gradient_clip", e.train.gradient_clip},
          {"weight_init_scale", e.train.weight_init_scale},
          {"validation_fraction", e.train.validation_fraction}}},
        {"data", data},
    };
}

PreparedData prepare_data(const DataSource& source)
{
    PreparedData out;
    if (source.kind == DataSource::Kind::csv)
        out.raw = load_csv(source.path, source.targets);
    else
        out.raw = synth_generate(source.synth_seed, source.length, source.n_inputs, source.synth);
    if (out.raw.input_columns().empty())
        throw domain_error("series has no input columns besides the targets");
    out.normalized = minmax_normalize(out.raw);
    out.split = split(out.normalized.series, source.train_len, source.test_len);
    out.matrices = make_experiment_data(out.split.train, out.split.test);
    return out;
}

ExperimentConfig bind_to_data(ExperimentConfig cfg, const PreparedData& data)
{
    cfg.space.n_inputs = data.matrices.train_inputs.cols();
    cfg.space.n_outputs = data.matrices.train_targets.cols();
    return cfg;
}

namespace {

std::string number(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    return fmt::format("{}", v);
}

nlohmann::json finite_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

nlohmann::json params_json(const ColonyParams& p)
{
    return {{"num_ants", p.num_ants}, {"evaporation_rate", p.evaporation_rate}, {"mortality_rate", p.mortality_rate}};
}

std::vector<std::string> names_of(const TimeSeries& ts, const std::vector<std::size_t>& idx)
{
    std::vector<std::string> out;
    for (auto i : idx)
        out.push_back(ts.columns[i]);
    return out;
}

void write_text(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw io_error(fmt::format("cannot write '{}'", path.string()));
    out << text;
}

std::string genome_file(std::size_t colony) { return fmt::format("best_genome_{}.json", colony); }

} // namespace

std::string fitness_csv(const ExperimentReport& report)
{
    std::string out = "colony_id,generation,best_mse\n";
    for (const auto& c : report.colonies)
        for (std::size_t g = 0; g < c.best_by_generation.size(); ++g)
            out += fmt::format("{},{},{}\n", c.colony_id, g + 1, number(c.best_by_generation[g]));
    return out;
}

std::string trajectories_csv(const ExperimentReport& report)
{
    std::string out = "colony_id,exchange_idx,num_ants,evaporation,mortality,window_best_mse\n";
    for (const auto& r : report.trajectories)
        out += fmt::format("{},{},{},{},{},{}\n", r.colony_id, r.exchange_idx, r.params.num_ants,
                           number(r.params.evaporation_rate), number(r.params.mortality_rate),
                           number(r.window_best_fitness));
    return out;
}

nlohmann::json report_to_json(const RunConfig& cfg, const PreparedData& data, const ExperimentReport& report)
{
    auto colonies = nlohmann::json::array();
    for (const auto& c : report.colonies) {
        colonies.push_back({
            {"colony_id", c.colony_id},
            {"best_validation_mse", c.best ? finite_or_null(c.best->fitness) : nlohmann::json(nullptr)},
            {"best_test_mse", finite_or_null(c.best_test_mse)},
            {"best_genome_file", c.best ? nlohmann::json(genome_file(c.colony_id)) : nlohmann::json(nullptr)},
            {"best_hidden_nodes", c.best ? c.best->genome.hidden_count() : 0},
            {"generations", c.generations},
            {"requests", c.requests},
            {"results", c.results},
            {"lost", c.lost},
            {"inserted", c.inserted},
            {"exchanges", c.exchanges},
            {"broadcasts_applied", c.broadcasts_applied},
            {"initial_params", params_json(c.initial_params)},
            {"final_params", params_json(c.final_params)},
        });
    }
    auto final_positions = nlohmann::json::array();
    for (const auto& p : report.final_positions)
        final_positions.push_back(p);
    const auto& train = data.split.train;
    return {
        {"format", "cants-report/1"},
        {"fitness_scale", "normalized"},
        {"config", to_json(cfg)},
        {"input_columns", names_of(train, train.input_columns())},
        {"target_columns", names_of(train, train.targets)},
        {"normalization", data.normalized.stats.to_json()},
        {"colonies", colonies},
        {"overall",
         {{"best_colony", report.best_colony ? nlohmann::json(*report.best_colony) : nlohmann::json(nullptr)},
          {"best_validation_mse", finite_or_null(report.best_fitness)},
          {"best_test_mse", finite_or_null(report.best_test_mse)}}},
        {"swarm",
         {{"gbest_position", report.gbest_position},
          {"gbest_fitness", finite_or_null(report.gbest_fitness)},
          {"final_positions", final_positions}}},
        {"evaluations", report.evaluations},
        {"wall_time_seconds", report.wall_time_seconds},
    };
}

nlohmann::json saved_model_to_json(const SavedModel& m)
{
    return {{"format", "cants-model/1"},
            {"genome", genome_to_json(m.genome)},
            {"weights", m.weights},
            {"input_columns", m.input_columns},
            {"target_columns", m.target_columns},
            {"normalization", m.normalization.to_json()}};
}

SavedModel saved_model_from_json(const nlohmann::json& doc)
{
    SavedModel m;
    m.genome = genome_from_json(doc.at("genome"));
    m.weights = doc.at("weights").get<std::vector<double>>();
    m.input_columns = doc.at("input_columns").get<std::vector<std::string>>();
    m.target_columns = doc.at("target_columns").get<std::vector<std::string>>();
    m.normalization = Normalization::from_json(doc.at("normalization"));
    if (m.input_columns.size() != m.genome.n_inputs || m.target_columns.size() != m.genome.n_outputs)
        throw domain_error("saved model columns do not match the genome's inputs and outputs");
    return m;
}

void write_outputs(const std::filesystem::path& dir, const RunConfig& cfg, const PreparedData& data,
                   const ExperimentReport& report)
{
    std::filesystem::create_directories(dir);
    write_text(dir / "report.json", report_to_json(cfg, data, report).dump(2) + "\n");
    write_text(dir / "fitness.csv", fitness_csv(report));
    write_text(dir / "trajectories.csv", trajectories_csv(report));
    const auto& train = data.split.train;
    for (const auto& c : report.colonies) {
        if (!c.best)
            continue;
        SavedModel m{c.best->genome, c.best->weights, names_of(train, train.input_columns()),
                     names_of(train, train.targets), data.normalized.stats};
        auto doc = saved_model_to_json(m);
        doc["colony_id"] = c.colony_id;
        doc["validation_mse"] = finite_or_null(c.best->fitness);
        doc["test_mse"] = finite_or_null(c.best_test_mse);
        write_text(dir / genome_file(c.colony_id), doc.dump(2) + "\n");
    }
}

RunOutcome execute_run(const RunConfig& cfg)
{
    const auto data = prepare_data(cfg.data);
    const auto experiment = bind_to_data(cfg.experiment, data);
    spdlog::info("running {} colonies x {} generations ({} mode)", experiment.n_colonies,
                 experiment.generations_per_colony, mode_name(experiment.mode));
    RunOutcome out{run_experiment(experiment, data.matrices), cfg.output_dir / "report.json"};
    write_outputs(cfg.output_dir, cfg, data, out.report);
    return out;
}

} // namespace cants
