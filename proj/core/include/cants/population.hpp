#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "cants/genome.hpp"
#include "cants/search_space.hpp"

namespace cants {

struct Member {
    Genome genome;
    double fitness = 0.0;
    std::vector<double> weights;
};

/// Bounded elite set kept sorted by ascending validation MSE.
class Population {
public:
    explicit Population(std::size_t capacity);

    std::size_t capacity() const { return capacity_; }
    std::size_t size() const { return members_.size(); }
    bool empty() const { return members_.empty(); }
    const std::vector<Member>& members() const { return members_; }

    /// Lowest fitness, or nullopt when empty.
    std::optional<double> best_fitness() const;
    std::optional<double> worst_fitness() const;
    const Member* best() const { return members_.empty() ? nullptr : &members_.front(); }

    /// Whether a candidate with this fitness would be admitted.
    bool admits(double fitness) const;

    /// Inserts, evicting the worst member when full. Ties are placed after
    /// existing members of equal fitness.
    bool insert(Member m);

private:
    std::size_t capacity_;
    std::vector<Member> members_;
};

/// Inserts the candidate when it beats the worst member (or there is room) and
/// rewards its provenance paths with `deposit_amount` pheromone per point.
/// Non-finite fitness is rejected.
bool try_insert(Population& population, Genome genome, double fitness, std::vector<double> weights,
                PheromoneSpace& space, double deposit_amount);

} // namespace cants
