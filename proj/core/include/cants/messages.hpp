#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "cants/genome.hpp"
#include "cants/pso.hpp"

namespace cants {

struct EvalRequest {
    std::size_t colony_id = 0;
    std::uint64_t candidate_seq = 0;
    std::shared_ptr<const Genome> genome;
};

struct EvalResult {
    std::size_t colony_id = 0;
    std::uint64_t candidate_seq = 0;
    double fitness = 0.0;
    std::vector<double> weights;
};

struct PsoReport {
    std::size_t colony_id = 0;
    std::size_t exchange_idx = 0;
    Vec3 position{};
    double window_best_fitness = 0.0;
};

/// Swarm-wide best, sent to every colony after each report. The reporting
/// colony also receives its updated particle position.
struct PsoBroadcast {
    Vec3 gbest_position{};
    double gbest_fitness = 0.0;
    std::optional<std::size_t> addressee;
    Vec3 new_position{};
};

struct ColonyDone {
    std::size_t colony_id = 0;
};

struct Shutdown {};

using Message = std::variant<EvalRequest, EvalResult, PsoReport, PsoBroadcast, ColonyDone, Shutdown>;

} // namespace cants
