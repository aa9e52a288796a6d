#include "cants/colony.hpp"

#include <fmt/format.h>

#include "cants/error.hpp"

namespace cants {

Colony::Colony(std::size_t id, ColonyConfig cfg, ColonyParams initial, std::uint64_t seed)
    : id_(id), cfg_(std::move(cfg)), params_(initial), space_(PheromoneSpace::seeded(cfg_.space)),
      population_(cfg_.population_capacity), rng_(seed)
{
    validate_params(initial, cfg_.bounds);
    if (!(cfg_.cluster_radius > 0.0))
        throw domain_error("cluster_radius must be positive");
    for (std::size_t i = 0; i < params_.num_ants; ++i) {
        ants_.push_back(spawn());
    }
}

AntTraits Colony::spawn()
{
    births_.push_back(next_birth_++);
    return spawn_ant(rng_);
}

Genome Colony::generate_candidate()
{
    const auto& sc = cfg_.space;
    for (std::size_t attempt = 0; attempt < cfg_.max_generation_attempts; ++attempt) {
        std::vector<AntPath> paths;
        paths.reserve(ants_.size());
        for (const auto& ant : ants_)
            paths.push_back(forage(ant, space_, rng_));
        if (auto g = build_genome(paths, sc.n_inputs, sc.n_outputs, cfg_.cluster_radius, sc.max_recurrent_depth))
            return std::move(*g);
    }
    throw colony_error(fmt::format("colony {} produced {} consecutive degenerate genomes", id_,
                                   cfg_.max_generation_attempts));
}

bool Colony::try_insert(Genome genome, double fitness, std::vector<double> weights)
{
    return cants::try_insert(population_, std::move(genome), fitness, std::move(weights), space_,
                             cfg_.space.deposit_amount);
}

void Colony::end_of_generation()
{
    space_.evaporate(params_.evaporation_rate);
    const auto dies = mortality_draws(ants_.size(), params_.mortality_rate, rng_);
    for (std::size_t i = 0; i < ants_.size(); ++i) {
        if (!dies[i])
            continue;
        ants_[i] = spawn_ant(rng_);
        births_[i] = next_birth_++;
        ++deaths_;
    }
    ++generation_;
}

void Colony::apply_params(const ColonyParams& params)
{
    validate_params(params, cfg_.bounds);
    params_.evaporation_rate = params.evaporation_rate;
    params_.mortality_rate = params.mortality_rate;
    while (ants_.size() < params.num_ants)
        ants_.push_back(spawn());
    while (ants_.size() > params.num_ants) {
        std::size_t newest = 0;
        for (std::size_t i = 1; i < births_.size(); ++i)
            if (births_[i] > births_[newest])
                newest = i;
        ants_.erase(ants_.begin() + static_cast<std::ptrdiff_t>(newest));
        births_.erase(births_.begin() + static_cast<std::ptrdiff_t>(newest));
    }
    params_.num_ants = params.num_ants;
}

} // namespace cants
