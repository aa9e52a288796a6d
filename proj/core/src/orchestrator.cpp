#include "cants/orchestrator.hpp"

#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include <fmt/format.h>
#include <fmt/ranges.h>
#include <spdlog/spdlog.h>

#include "cants/error.hpp"

namespace cants {

namespace {

constexpr auto idle_wait = std::chrono::milliseconds(5);

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

} // namespace

std::vector<std::string> ExperimentConfig::violations() const
{
    std::vector<std::string> out;
    auto need = [&](bool ok, std::string msg) {
        if (!ok)
            out.push_back(std::move(msg));
    };
    const auto& b = swarm.bounds;
    need(n_colonies >= 1, "n_colonies must be at least 1");
    need(generations_per_colony >= 1, "generations_per_colony must be at least 1");
    need(exchange_interval >= 1, "exchange_interval must be at least 1");
    need(workers_per_colony >= 1, "workers_per_colony must be at least 1");
    need(initial_ants_first >= 1.0 && initial_ants_last >= 1.0, "initial ant counts must be at least 1");
    need(initial_ant_counts.empty() || initial_ant_counts.size() == n_colonies,
         fmt::format("initial_ant_counts has {} entries for {} colonies", initial_ant_counts.size(), n_colonies));
    need(b.evaporation_rate.contains(initial_evaporation),
         fmt::format("initial_evaporation {} outside [{}, {}]", initial_evaporation, b.evaporation_rate.lo,
                     b.evaporation_rate.hi));
    need(b.mortality_rate.contains(initial_mortality),
         fmt::format("initial_mortality {} outside [{}, {}]", initial_mortality, b.mortality_rate.lo,
                     b.mortality_rate.hi));
    need(population_capacity >= 1, "population_capacity must be at least 1");
    need(cluster_radius > 0.0, "cluster_radius must be positive");
    auto capture = [&](auto&& fn) {
        try {
            fn();
        } catch (const std::exception& e) {
            out.emplace_back(e.what());
        }
    };
    capture([&] { space.validate(); });
    capture([&] { swarm.validate(); });
    capture([&] { train.validate(); });
    return out;
}

ColonyParams ExperimentConfig::initial_params(std::size_t i) const
{
    double ants = initial_ants_first;
    if (!initial_ant_counts.empty())
        ants = static_cast<double>(initial_ant_counts.at(i));
    else if (n_colonies > 1)
        ants = initial_ants_first +
               (initial_ants_last - initial_ants_first) * static_cast<double>(i) / static_cast<double>(n_colonies - 1);
    ColonyParams p{static_cast<std::size_t>(std::lround(ants)), initial_evaporation, initial_mortality};
    return clamp_params(p, swarm.bounds);
}

std::size_t expected_exchanges(const ExperimentConfig& cfg)
{
    return cfg.exchanges_enabled ? cfg.generations_per_colony / cfg.exchange_interval : 0;
}

void align_forecast(const Matrix& inputs, const Matrix& targets, Matrix& aligned_inputs, Matrix& aligned_targets)
{
    if (inputs.rows() != targets.rows() || inputs.rows() <= forecast_horizon)
        throw domain_error("too few rows to pair inputs with next-step targets");
    const auto n = inputs.rows() - forecast_horizon;
    aligned_inputs = inputs.slice_rows(0, n);
    aligned_targets = targets.slice_rows(forecast_horizon, n);
}

ExperimentData make_experiment_data(const TimeSeries& train, const TimeSeries& test)
{
    if (train.targets.empty())
        throw domain_error("series has no target columns");
    ExperimentData d;
    align_forecast(train.inputs(), train.target_values(), d.train_inputs, d.train_targets);
    align_forecast(test.inputs(), test.target_values(), d.test_inputs, d.test_targets);
    return d;
}

Wiring::Wiring(std::size_t n_colonies)
{
    for (std::size_t i = 0; i < n_colonies; ++i) {
        colony_inbox.push_back(std::make_unique<Channel<Message>>());
        work_queue.push_back(std::make_unique<Channel<Message>>());
    }
}

void Wiring::close_all()
{
    environment_inbox.close();
    for (auto& c : colony_inbox)
        c->close();
    for (auto& c : work_queue)
        c->close();
}

// ---------------------------------------------------------------------------
// Colony generator

ColonyRole::ColonyRole(Colony colony, const ExperimentConfig& cfg, Wiring& wiring)
    : colony_(std::move(colony)), cfg_(cfg), wiring_(wiring), position_(encode(colony_.params(), cfg.swarm.bounds)),
      window_best_(rejected_fitness)
{
    summary_.colony_id = colony_.id();
    summary_.initial_params = colony_.params();
}

void ColonyRole::handle(Message msg)
{
    std::visit(overloaded{
                   [&](EvalResult& r) {
                       auto it = in_flight_.find(r.candidate_seq);
                       if (r.colony_id != colony_.id() || it == in_flight_.end())
                           throw protocol_error(fmt::format("colony {} received unexpected result {}/{}",
                                                            colony_.id(), r.colony_id, r.candidate_seq));
                       Genome genome = *it->second;
                       in_flight_.erase(it);
                       ++summary_.results;
                       if (std::isfinite(r.fitness))
                           window_best_ = std::min(window_best_, r.fitness);
                       if (colony_.try_insert(std::move(genome), r.fitness, std::move(r.weights)))
                           ++summary_.inserted;
                   },
                   [&](PsoBroadcast& b) {
                       if (b.addressee != colony_.id())
                           return;
                       if (!awaiting_broadcast_)
                           throw protocol_error(fmt::format("colony {} got an unsolicited position", colony_.id()));
                       position_ = b.new_position;
                       const auto params = decode(position_, cfg_.swarm.bounds);
                       if (!(params == colony_.params()))
                           summary_.param_change_generations.push_back(colony_.generation());
                       colony_.apply_params(params);
                       ++summary_.broadcasts_applied;
                       awaiting_broadcast_ = false;
                   },
                   [&](auto&) {
                       throw protocol_error(fmt::format("colony {} received a message it cannot handle",
                                                        colony_.id()));
                   },
               },
               msg);
}

void ColonyRole::send_report()
{
    PsoReport report{colony_.id(), exchanges_++, position_, window_best_};
    window_best_ = rejected_fitness;
    awaiting_broadcast_ = true;
    if (!wiring_.environment_inbox.send(report))
        throw protocol_error(fmt::format("colony {}: environment channel closed", colony_.id()));
}

Progress ColonyRole::step()
{
    if (done_)
        return Progress::finished;
    auto& inbox = *wiring_.colony_inbox[colony_.id()];
    bool progressed = false;
    while (auto msg = inbox.try_receive()) {
        handle(std::move(*msg));
        progressed = true;
    }
    if (inbox.closed()) {
        spdlog::warn("colony {}: channel closed with {} evaluations in flight", colony_.id(), in_flight_.size());
        abort();
        return Progress::finished;
    }
    const auto idle = progressed ? Progress::advanced : Progress::idle;
    if (awaiting_broadcast_)
        return idle;

    if (colony_.generation() < cfg_.generations_per_colony) {
        if (in_flight_.size() >= cfg_.workers_per_colony)
            return idle;
        auto genome = std::make_shared<const Genome>(colony_.generate_candidate());
        const auto seq = next_seq_++;
        in_flight_.emplace(seq, genome);
        ++summary_.requests;
        if (!wiring_.work_queue[colony_.id()]->send(EvalRequest{colony_.id(), seq, genome}))
            throw protocol_error(fmt::format("colony {}: work queue closed", colony_.id()));
        colony_.end_of_generation();
        const auto best = colony_.population().best_fitness();
        summary_.best_by_generation.push_back(best ? *best : rejected_fitness);
        if (cfg_.exchanges_enabled && colony_.generation() % cfg_.exchange_interval == 0)
            send_report();
        return Progress::advanced;
    }

    if (!in_flight_.empty())
        return idle;

    for (std::size_t i = 0; i < cfg_.workers_per_colony; ++i)
        wiring_.work_queue[colony_.id()]->send(Shutdown{});
    wiring_.environment_inbox.send(ColonyDone{colony_.id()});
    done_ = true;
    return Progress::finished;
}

void ColonyRole::wait() { wiring_.colony_inbox[colony_.id()]->wait_for(idle_wait); }

void ColonyRole::abort()
{
    summary_.lost += in_flight_.size();
    in_flight_.clear();
    done_ = true;
}

ColonySummary ColonyRole::summary() const
{
    ColonySummary s = summary_;
    s.generations = colony_.generation();
    s.exchanges = exchanges_;
    s.final_params = colony_.params();
    if (const auto* best = colony_.population().best())
        s.best = *best;
    return s;
}

// ---------------------------------------------------------------------------
// Worker

WorkerRole::WorkerRole(std::size_t colony_id, const ExperimentData& data, const TrainConfig& train,
                       std::uint64_t seed, Wiring& wiring)
    : colony_id_(colony_id), data_(data), train_(train), seed_(seed), wiring_(wiring)
{
}

EvalResult evaluate(const EvalRequest& request, const ExperimentData& data, const TrainConfig& train,
                    std::uint64_t seed)
{
    EvalResult result{request.colony_id, request.candidate_seq, rejected_fitness, {}};
    try {
        const auto graph = compile(*request.genome);
        Rng rng = Rng::derive(seed ^ (0x9e3779b97f4a7c15ULL * (request.colony_id + 1)), request.candidate_seq);
        auto trained = train_bptt(graph, data.train_inputs, data.train_targets, train, rng);
        result.fitness = trained.validation_mse;
        result.weights = std::move(trained.weights);
    } catch (const std::exception& e) {
        spdlog::warn("colony {} candidate {}: training failed: {}", request.colony_id, request.candidate_seq,
                     e.what());
    }
    return result;
}

Progress WorkerRole::step()
{
    if (done_)
        return Progress::finished;
    auto& queue = *wiring_.work_queue[colony_id_];
    auto msg = queue.try_receive();
    if (!msg) {
        if (queue.closed()) {
            done_ = true;
            return Progress::finished;
        }
        return Progress::idle;
    }
    return std::visit(overloaded{
                          [&](EvalRequest& r) {
                              auto result = evaluate(r, data_, train_, seed_);
                              ++evaluated_;
                              wiring_.colony_inbox[colony_id_]->send(std::move(result));
                              return Progress::advanced;
                          },
                          [&](Shutdown&) {
                              done_ = true;
                              return Progress::finished;
                          },
                          [&](auto&) -> Progress {
                              throw protocol_error(fmt::format("worker of colony {} received a non-request",
                                                               colony_id_));
                          },
                      },
                      *msg);
}

void WorkerRole::wait() { wiring_.work_queue[colony_id_]->wait_for(idle_wait); }

// ---------------------------------------------------------------------------
// Environment

EnvironmentRole::EnvironmentRole(Swarm swarm, std::size_t n_colonies, std::uint64_t seed, Wiring& wiring)
    : swarm_(std::move(swarm)), n_colonies_(n_colonies), rng_(seed), wiring_(wiring), colony_done_(n_colonies)
{
    if (swarm_.size() != n_colonies)
        throw domain_error("swarm size does not match colony count");
}

Progress EnvironmentRole::step()
{
    if (finished_ == n_colonies_)
        return Progress::finished;
    bool progressed = false;
    while (auto msg = wiring_.environment_inbox.try_receive()) {
        progressed = true;
        std::visit(overloaded{
                       [&](PsoReport& r) {
                           if (r.colony_id >= n_colonies_)
                               throw protocol_error(fmt::format("report from unknown colony {}", r.colony_id));
                           swarm_.report(r.colony_id, r.position, r.window_best_fitness);
                           const Vec3 moved = swarm_.update(r.colony_id, rng_);
                           trajectories_.push_back({r.colony_id, r.exchange_idx,
                                                    decode(r.position, swarm_.config().bounds), r.position,
                                                    r.window_best_fitness});
                           for (std::size_t c = 0; c < n_colonies_; ++c) {
                               PsoBroadcast b{swarm_.gbest_position(), swarm_.gbest_fitness(), std::nullopt, {}};
                               if (c == r.colony_id) {
                                   b.addressee = c;
                                   b.new_position = moved;
                               }
                               wiring_.colony_inbox[c]->send(b);
                           }
                       },
                       [&](ColonyDone& d) {
                           if (d.colony_id >= n_colonies_ || colony_done_[d.colony_id])
                               throw protocol_error(fmt::format("unexpected completion from colony {}", d.colony_id));
                           colony_done_[d.colony_id] = true;
                           ++finished_;
                       },
                       [&](auto&) { throw protocol_error("environment received a message it cannot handle"); },
                   },
                   *msg);
    }
    if (finished_ == n_colonies_)
        return Progress::finished;
    if (wiring_.environment_inbox.closed())
        return Progress::finished;
    return progressed ? Progress::advanced : Progress::idle;
}

void EnvironmentRole::wait() { wiring_.environment_inbox.wait_for(idle_wait); }

// ---------------------------------------------------------------------------
// Experiment

namespace {

struct Roles {
    std::unique_ptr<EnvironmentRole> environment;
    std::vector<std::unique_ptr<ColonyRole>> colonies;
    std::vector<std::vector<std::unique_ptr<WorkerRole>>> workers;
};

void run_deterministic(Roles& roles)
{
    std::size_t finished_before = 0;
    for (;;) {
        bool any_progress = false;
        bool all_finished = true;
        std::size_t finished_now = 0;
        auto tick = [&](auto& role) {
            const auto p = role.step();
            any_progress = any_progress || p == Progress::advanced;
            all_finished = all_finished && p == Progress::finished;
            finished_now += p == Progress::finished ? 1 : 0;
        };
        tick(*roles.environment);
        for (std::size_t c = 0; c < roles.colonies.size(); ++c) {
            tick(*roles.colonies[c]);
            for (auto& w : roles.workers[c])
                tick(*w);
        }
        any_progress = any_progress || finished_now > finished_before;
        finished_before = finished_now;
        if (all_finished)
            return;
        if (!any_progress)
            throw internal_error("deterministic scheduler stalled with unfinished roles");
    }
}

void run_concurrent(Roles& roles, Wiring& wiring)
{
    std::mutex error_mutex;
    std::exception_ptr first_error;
    std::vector<std::thread> threads;

    auto launch = [&](auto& role) {
        threads.emplace_back([&role, &wiring, &error_mutex, &first_error] {
            try {
                for (;;) {
                    const auto p = role.step();
                    if (p == Progress::finished)
                        return;
                    if (p == Progress::idle)
                        role.wait();
                }
            } catch (...) {
                {
                    std::lock_guard lock(error_mutex);
                    if (!first_error)
                        first_error = std::current_exception();
                }
                wiring.close_all();
            }
        });
    };
    launch(*roles.environment);
    for (std::size_t c = 0; c < roles.colonies.size(); ++c) {
        launch(*roles.colonies[c]);
        for (auto& w : roles.workers[c])
            launch(*w);
    }
    for (auto& t : threads)
        t.join();
    if (first_error)
        std::rethrow_exception(first_error);
}

} // namespace

ExperimentReport run_experiment(const ExperimentConfig& cfg, const ExperimentData& data)
{
    if (const auto v = cfg.violations(); !v.empty())
        throw domain_error(fmt::format("invalid experiment configuration: {}", fmt::join(v, "; ")));
    if (data.train_inputs.cols() != cfg.space.n_inputs || data.train_targets.cols() != cfg.space.n_outputs)
        throw domain_error(fmt::format("data has {} inputs / {} outputs, search space expects {} / {}",
                                       data.train_inputs.cols(), data.train_targets.cols(), cfg.space.n_inputs,
                                       cfg.space.n_outputs));

    const auto start = std::chrono::steady_clock::now();
    Wiring wiring(cfg.n_colonies);
    ColonyConfig cc{cfg.space, cfg.cluster_radius, cfg.population_capacity, 5, cfg.swarm.bounds};

    Roles roles;
    std::vector<Vec3> positions;
    for (std::size_t i = 0; i < cfg.n_colonies; ++i) {
        const auto params = cfg.initial_params(i);
        positions.push_back(encode(params, cfg.swarm.bounds));
        Colony colony(i, cc, params, Rng::derive(cfg.seed, 1000 + i).next_u64());
        roles.colonies.push_back(std::make_unique<ColonyRole>(std::move(colony), cfg, wiring));
        auto& pool = roles.workers.emplace_back();
        for (std::size_t w = 0; w < cfg.workers_per_colony; ++w)
            pool.push_back(std::make_unique<WorkerRole>(i, data, cfg.train, cfg.seed, wiring));
    }
    auto velocity_rng = Rng::derive(cfg.seed, 8);
    roles.environment = std::make_unique<EnvironmentRole>(Swarm(cfg.swarm, positions, velocity_rng),
                                                          cfg.n_colonies, Rng::derive(cfg.seed, 7).next_u64(), wiring);

    if (cfg.mode == ExecutionMode::deterministic)
        run_deterministic(roles);
    else
        run_concurrent(roles, wiring);

    ExperimentReport report;
    for (const auto& role : roles.colonies) {
        auto s = role->summary();
        if (s.best) {
            const auto graph = compile(s.best->genome);
            s.best_test_mse = mse(forward(graph, s.best->weights, data.test_inputs), data.test_targets);
            if (s.best->fitness < report.best_fitness) {
                report.best_fitness = s.best->fitness;
                report.best_colony = s.colony_id;
                report.best_test_mse = s.best_test_mse;
            }
        }
        report.evaluations += s.results;
        report.colonies.push_back(std::move(s));
    }
    report.trajectories = roles.environment->trajectories();
    std::sort(report.trajectories.begin(), report.trajectories.end(), [](const auto& a, const auto& b) {
        return std::tie(a.colony_id, a.exchange_idx) < std::tie(b.colony_id, b.exchange_idx);
    });
    const auto& swarm = roles.environment->swarm();
    report.gbest_position = swarm.gbest_position();
    report.gbest_fitness = swarm.gbest_fitness();
    for (std::size_t i = 0; i < swarm.size(); ++i)
        report.final_positions.push_back(swarm.particle(i).position);
    report.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

} // namespace cants
