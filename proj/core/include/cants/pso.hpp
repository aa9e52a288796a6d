#pragma once

#include <array>
#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "cants/params.hpp"
#include "cants/rng.hpp"

namespace cants {

using Vec3 = std::array<double, 3>;

struct Particle {
    Vec3 position{};
    Vec3 velocity{};
    Vec3 pbest_position{};
    double pbest_fitness = std::numeric_limits<double>::infinity();
};

struct SwarmConfig {
    double inertia = 0.7;
    double cognitive = 1.5;
    double social = 1.5;
    double v_max = 0.2;
    ParamBounds bounds;

    void validate() const;
};

/// Affine map of each trait onto [0, 1].
Vec3 encode(const ColonyParams& params, const ParamBounds& bounds = {});
/// Inverse of encode; num_ants rounded to nearest.
ColonyParams decode(const Vec3& position, const ParamBounds& bounds = {});

/// Inertia-weight velocity update followed by a clamped position step.
Particle update_particle(Particle p, const Vec3& gbest_position, const SwarmConfig& cfg, Rng& rng);

/// Particles plus the swarm-wide best, in normalized trait space.
class Swarm {
public:
    /// Particles at rest.
    Swarm(SwarmConfig cfg, std::vector<Vec3> initial_positions);
    /// Initial velocities drawn uniformly from [-v_max, v_max].
    Swarm(SwarmConfig cfg, std::vector<Vec3> initial_positions, Rng& rng);

    const SwarmConfig& config() const { return cfg_; }
    std::size_t size() const { return particles_.size(); }
    const Particle& particle(std::size_t id) const { return particles_.at(id); }
    const Vec3& gbest_position() const { return gbest_position_; }
    double gbest_fitness() const { return gbest_fitness_; }
    std::optional<std::size_t> gbest_owner() const { return gbest_owner_; }

    /// Records a fitness observed at `position`. Returns false (and changes
    /// nothing) for non-finite fitness. Ties keep the incumbent best.
    bool report(std::size_t id, const Vec3& position, double fitness);

    /// Moves particle `id` toward its pbest and the gbest; returns the new position.
    const Vec3& update(std::size_t id, Rng& rng);

private:
    SwarmConfig cfg_;
    std::vector<Particle> particles_;
    Vec3 gbest_position_{};
    double gbest_fitness_ = std::numeric_limits<double>::infinity();
    std::optional<std::size_t> gbest_owner_;
};

} // namespace cants
