#include "cants/population.hpp"

#include <algorithm>
#include <cmath>

#include <spdlog/spdlog.h>

#include "cants/error.hpp"

namespace cants {

Population::Population(std::size_t capacity) : capacity_(capacity)
{
    if (capacity == 0)
        throw domain_error("population capacity must be at least 1");
}

std::optional<double> Population::best_fitness() const
{
    if (members_.empty())
        return std::nullopt;
    return members_.front().fitness;
}

std::optional<double> Population::worst_fitness() const
{
    if (members_.empty())
        return std::nullopt;
    return members_.back().fitness;
}

bool Population::admits(double fitness) const
{
    if (!std::isfinite(fitness))
        return false;
    return members_.size() < capacity_ || fitness < members_.back().fitness;
}

bool Population::insert(Member m)
{
    if (!admits(m.fitness))
        return false;
    if (members_.size() == capacity_)
        members_.pop_back();
    auto pos = std::upper_bound(members_.begin(), members_.end(), m.fitness,
                                [](double f, const Member& other) { return f < other.fitness; });
    members_.insert(pos, std::move(m));
    return true;
}

bool try_insert(Population& population, Genome genome, double fitness, std::vector<double> weights,
                PheromoneSpace& space, double deposit_amount)
{
    if (!std::isfinite(fitness)) {
        spdlog::debug("rejecting candidate with non-finite fitness");
        return false;
    }
    if (!population.admits(fitness))
        return false;
    for (const auto& path : genome.provenance_paths)
        for (const auto& p : path.points)
            space.deposit(p, deposit_amount);
    population.insert({std::move(genome), fitness, std::move(weights)});
    return true;
}

} // namespace cants
