#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "cants/ants.hpp"
#include "cants/genome.hpp"
#include "cants/params.hpp"
#include "cants/population.hpp"
#include "cants/rng.hpp"
#include "cants/search_space.hpp"

namespace cants {

struct ColonyConfig {
    SpaceConfig space;
    double cluster_radius = 0.1;
    std::size_t population_capacity = 20;
    /// Consecutive degenerate genomes tolerated before giving up.
    std::size_t max_generation_attempts = 5;
    ParamBounds bounds;
};

/// One ant colony: pheromone space, ant roster, elite population, traits.
class Colony {
public:
    /// `initial` is validated against `cfg.bounds`.
    Colony(std::size_t id, ColonyConfig cfg, ColonyParams initial, std::uint64_t seed);

    std::size_t id() const { return id_; }
    const ColonyConfig& config() const { return cfg_; }
    const ColonyParams& params() const { return params_; }
    const PheromoneSpace& space() const { return space_; }
    PheromoneSpace& space() { return space_; }
    const Population& population() const { return population_; }
    const std::vector<AntTraits>& ants() const { return ants_; }
    std::size_t generation() const { return generation_; }

    /// Every ant forages once and the paths are clustered into a genome.
    /// Throws colony_error after max_generation_attempts degenerate genomes.
    Genome generate_candidate();

    bool try_insert(Genome genome, double fitness, std::vector<double> weights);

    /// Evaporation, mortality, and the generation counter.
    void end_of_generation();

    /// Replaces rates and resizes the roster; shrinking drops the newest ants.
    void apply_params(const ColonyParams& params);

    /// Total ants replaced by mortality so far.
    std::size_t deaths() const { return deaths_; }

private:
    AntTraits spawn();

    std::size_t id_;
    ColonyConfig cfg_;
    ColonyParams params_;
    PheromoneSpace space_;
    Population population_;
    Rng rng_;
    std::vector<AntTraits> ants_;
    /// Spawn serial of each ant, parallel to ants_.
    std::vector<std::uint64_t> births_;
    std::uint64_t next_birth_ = 0;
    std::size_t generation_ = 0;
    std::size_t deaths_ = 0;
};

} // namespace cants
