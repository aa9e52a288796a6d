#include "cants/pso.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "cants/error.hpp"

namespace cants {

void SwarmConfig::validate() const
{
    if (!(inertia > 0.0 && inertia < 1.0))
        throw domain_error(fmt::format("inertia {} outside (0, 1)", inertia));
    if (!(cognitive > 0.0) || !(social > 0.0))
        throw domain_error("cognitive and social coefficients must be positive");
    if (!(v_max > 0.0))
        throw domain_error("v_max must be positive");
}

namespace {

std::array<Interval, 3> dims(const ParamBounds& b) { return {b.num_ants, b.evaporation_rate, b.mortality_rate}; }

} // namespace

Vec3 encode(const ColonyParams& params, const ParamBounds& bounds)
{
    validate_params(params, bounds);
    const Vec3 raw{static_cast<double>(params.num_ants), params.evaporation_rate, params.mortality_rate};
    const auto d = dims(bounds);
    Vec3 out{};
    for (std::size_t i = 0; i < 3; ++i)
        out[i] = (raw[i] - d[i].lo) / (d[i].hi - d[i].lo);
    return out;
}

ColonyParams decode(const Vec3& position, const ParamBounds& bounds)
{
    const auto d = dims(bounds);
    Vec3 raw{};
    for (std::size_t i = 0; i < 3; ++i)
        raw[i] = d[i].clamp(d[i].lo + std::clamp(position[i], 0.0, 1.0) * (d[i].hi - d[i].lo));
    return {static_cast<std::size_t>(std::lround(raw[0])), raw[1], raw[2]};
}

Particle update_particle(Particle p, const Vec3& gbest_position, const SwarmConfig& cfg, Rng& rng)
{
    for (std::size_t i = 0; i < 3; ++i) {
        const double r1 = rng.uniform();
        const double r2 = rng.uniform();
        double v = cfg.inertia * p.velocity[i] + cfg.cognitive * r1 * (p.pbest_position[i] - p.position[i]) +
                   cfg.social * r2 * (gbest_position[i] - p.position[i]);
        v = std::clamp(v, -cfg.v_max, cfg.v_max);
        p.velocity[i] = v;
        p.position[i] = std::clamp(p.position[i] + v, 0.0, 1.0);
    }
    return p;
}

Swarm::Swarm(SwarmConfig cfg, std::vector<Vec3> initial_positions) : cfg_(std::move(cfg))
{
    cfg_.validate();
    if (initial_positions.empty())
        throw domain_error("swarm needs at least one particle");
    for (const auto& pos : initial_positions) {
        Particle p;
        for (std::size_t i = 0; i < 3; ++i)
            p.position[i] = std::clamp(pos[i], 0.0, 1.0);
        p.pbest_position = p.position;
        particles_.push_back(p);
    }
    gbest_position_ = particles_.front().position;
}

Swarm::Swarm(SwarmConfig cfg, std::vector<Vec3> initial_positions, Rng& rng)
    : Swarm(std::move(cfg), std::move(initial_positions))
{
    for (auto& p : particles_)
        for (auto& v : p.velocity)
            v = rng.uniform(-cfg_.v_max, cfg_.v_max);
}

bool Swarm::report(std::size_t id, const Vec3& position, double fitness)
{
    if (id >= particles_.size())
        throw protocol_error(fmt::format("report from unknown colony {}", id));
    if (!std::isfinite(fitness)) {
        spdlog::info("swarm: ignoring non-finite fitness from colony {}", id);
        return false;
    }
    auto& p = particles_[id];
    if (fitness < p.pbest_fitness) {
        p.pbest_fitness = fitness;
        p.pbest_position = position;
    }
    if (fitness < gbest_fitness_) {
        gbest_fitness_ = fitness;
        gbest_position_ = position;
        gbest_owner_ = id;
    }
    return true;
}

const Vec3& Swarm::update(std::size_t id, Rng& rng)
{
    auto& p = particles_.at(id);
    // Before any finite report there is no swarm best; the particle follows its own memory.
    const Vec3& attractor = gbest_owner_ ? gbest_position_ : p.pbest_position;
    p = update_particle(p, attractor, cfg_, rng);
    return p.position;
}

} // namespace cants
