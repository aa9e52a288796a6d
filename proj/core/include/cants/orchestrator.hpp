#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cants/channel.hpp"
#include "cants/colony.hpp"
#include "cants/data.hpp"
#include "cants/messages.hpp"
#include "cants/nn.hpp"
#include "cants/pso.hpp"

namespace cants {

enum class ExecutionMode {
    /// Every role on its own thread.
    concurrent,
    /// All roles interleaved round-robin on the calling thread; reproducible.
    deterministic,
};

struct ExperimentConfig {
    std::size_t n_colonies = 20;
    std::size_t generations_per_colony = 100;
    std::size_t exchange_interval = 9;
    std::size_t workers_per_colony = 2;
    bool exchanges_enabled = true;
    /// Initial ant counts ramp linearly from first to last colony.
    double initial_ants_first = 5.0;
    double initial_ants_last = 100.0;
    /// Overrides the ramp when non-empty; one entry per colony.
    std::vector<std::size_t> initial_ant_counts;
    double initial_evaporation = 0.9;
    double initial_mortality = 0.1;
    std::size_t population_capacity = 20;
    double cluster_radius = 0.1;
    SpaceConfig space;
    SwarmConfig swarm;
    TrainConfig train;
    std::uint64_t seed = 42;
    ExecutionMode mode = ExecutionMode::deterministic;

    /// Every violated constraint, one message each. Empty when valid.
    std::vector<std::string> violations() const;
    /// Initial params of colony `i`, clamped into the swarm bounds.
    ColonyParams initial_params(std::size_t i) const;
};

/// Normalized data shared read-only by every worker.
///
/// Row t of the inputs is paired with the targets at row t + 1: networks
/// forecast one step ahead from what has been observed so far.
struct ExperimentData {
    Matrix train_inputs;
    Matrix train_targets;
    Matrix test_inputs;
    Matrix test_targets;
};

inline constexpr std::size_t forecast_horizon = 1;

/// Inputs at rows [0, T - h) paired with targets at rows [h, T).
void align_forecast(const Matrix& inputs, const Matrix& targets, Matrix& aligned_inputs, Matrix& aligned_targets);

ExperimentData make_experiment_data(const TimeSeries& train, const TimeSeries& test);

struct TrajectoryRow {
    std::size_t colony_id = 0;
    std::size_t exchange_idx = 0;
    ColonyParams params;
    Vec3 position{};
    double window_best_fitness = 0.0;
};

struct ColonySummary {
    std::size_t colony_id = 0;
    std::size_t generations = 0;
    std::size_t requests = 0;
    std::size_t results = 0;
    std::size_t lost = 0;
    std::size_t exchanges = 0;
    std::size_t broadcasts_applied = 0;
    std::size_t inserted = 0;
    ColonyParams initial_params;
    ColonyParams final_params;
    /// Population best after each generation (infinity while empty).
    std::vector<double> best_by_generation;
    std::optional<Member> best;
    double best_test_mse = rejected_fitness;
    /// Generation index at which each params change took effect.
    std::vector<std::size_t> param_change_generations;
};

struct ExperimentReport {
    std::vector<ColonySummary> colonies;
    std::vector<TrajectoryRow> trajectories;
    std::optional<std::size_t> best_colony;
    double best_fitness = rejected_fitness;
    double best_test_mse = rejected_fitness;
    Vec3 gbest_position{};
    double gbest_fitness = rejected_fitness;
    std::vector<Vec3> final_positions;
    std::size_t evaluations = 0;
    double wall_time_seconds = 0.0;
};

/// Outcome of one scheduling step of a role.
enum class Progress { advanced, idle, finished };

/// Queues connecting the roles of one experiment.
struct Wiring {
    explicit Wiring(std::size_t n_colonies);

    Channel<Message> environment_inbox;
    /// Per colony: results and broadcasts addressed to its generator.
    std::vector<std::unique_ptr<Channel<Message>>> colony_inbox;
    /// Per colony: requests pulled by that colony's workers.
    std::vector<std::unique_ptr<Channel<Message>>> work_queue;

    void close_all();
};

/// Work generator of one colony.
class ColonyRole {
public:
    ColonyRole(Colony colony, const ExperimentConfig& cfg, Wiring& wiring);

    Progress step();
    void wait();
    /// Marks every in-flight evaluation as lost.
    void abort();

    ColonySummary summary() const;
    const Colony& colony() const { return colony_; }

private:
    void handle(Message msg);
    void send_report();

    Colony colony_;
    const ExperimentConfig& cfg_;
    Wiring& wiring_;
    Vec3 position_;
    std::uint64_t next_seq_ = 0;
    std::map<std::uint64_t, std::shared_ptr<const Genome>> in_flight_;
    bool awaiting_broadcast_ = false;
    bool done_ = false;
    double window_best_;
    std::size_t exchanges_ = 0;
    ColonySummary summary_;
};

/// Trains candidates pulled from a colony's work queue.
class WorkerRole {
public:
    WorkerRole(std::size_t colony_id, const ExperimentData& data, const TrainConfig& train, std::uint64_t seed,
               Wiring& wiring);

    Progress step();
    void wait();
    std::size_t evaluated() const { return evaluated_; }

private:
    std::size_t colony_id_;
    const ExperimentData& data_;
    const TrainConfig& train_;
    std::uint64_t seed_;
    Wiring& wiring_;
    std::size_t evaluated_ = 0;
    bool done_ = false;
};

/// Evaluates one genome: fresh weights from (seed, colony, seq), BPTT, validation MSE.
EvalResult evaluate(const EvalRequest& request, const ExperimentData& data, const TrainConfig& train,
                    std::uint64_t seed);

/// Holds the swarm; answers reports with the swarm best and the reporter's new position.
class EnvironmentRole {
public:
    EnvironmentRole(Swarm swarm, std::size_t n_colonies, std::uint64_t seed, Wiring& wiring);

    Progress step();
    void wait();

    const Swarm& swarm() const { return swarm_; }
    const std::vector<TrajectoryRow>& trajectories() const { return trajectories_; }

private:
    Swarm swarm_;
    std::size_t n_colonies_;
    Rng rng_;
    Wiring& wiring_;
    std::size_t finished_ = 0;
    std::vector<bool> colony_done_;
    std::vector<TrajectoryRow> trajectories_;
};

/// Builds every role and runs them to completion under `cfg.mode`.
ExperimentReport run_experiment(const ExperimentConfig& cfg, const ExperimentData& data);

/// Number of swarm exchanges a colony performs.
std::size_t expected_exchanges(const ExperimentConfig& cfg);

} // namespace cants
