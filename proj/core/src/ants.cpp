#include "cants/ants.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "cants/error.hpp"

namespace cants {

namespace tb = trait_bounds;

bool traits_in_bounds(const AntTraits& t)
{
    return t.sensing_radius >= tb::sensing_radius_lo && t.sensing_radius <= tb::sensing_radius_hi &&
           t.exploration_factor >= tb::exploration_lo && t.exploration_factor <= tb::exploration_hi &&
           t.step_y >= tb::step_y_lo && t.step_y <= tb::step_y_hi;
}

std::size_t max_path_length() { return static_cast<std::size_t>(std::ceil(1.0 / tb::step_y_lo)) + 2; }

AntTraits traits_from_quantiles(double q_radius, double q_exploration, double q_step)
{
    auto lerp = [](double lo, double hi, double q) { return lo + (hi - lo) * std::clamp(q, 0.0, 1.0); };
    return {lerp(tb::sensing_radius_lo, tb::sensing_radius_hi, q_radius),
            lerp(tb::exploration_lo, tb::exploration_hi, q_exploration),
            lerp(tb::step_y_lo, tb::step_y_hi, q_step)};
}

AntTraits spawn_ant(Rng& rng)
{
    const double a = rng.uniform();
    const double b = rng.uniform();
    const double c = rng.uniform();
    return traits_from_quantiles(a, b, c);
}

std::size_t pick_entry(const PheromoneSpace& space, Rng& rng, std::size_t n_inputs)
{
    if (n_inputs == 0)
        throw domain_error("pick_entry needs at least one input");
    const double draw = rng.uniform();
    if (n_inputs == 1)
        return 0;

    const auto& cfg = space.config();
    std::vector<double> weight(n_inputs);
    double total = 0.0;
    for (std::size_t i = 0; i < n_inputs; ++i) {
        weight[i] = space.strength_near(input_anchor(cfg, i), cfg.merge_radius);
        total += weight[i];
    }
    if (!(total > 0.0))
        return std::min(static_cast<std::size_t>(draw * static_cast<double>(n_inputs)), n_inputs - 1);

    double acc = 0.0;
    const double target = draw * total;
    for (std::size_t i = 0; i < n_inputs; ++i) {
        acc += weight[i];
        if (target < acc)
            return i;
    }
    return n_inputs - 1;
}

std::size_t nearest_output(const SpaceConfig& cfg, const Point3& p)
{
    const auto n = static_cast<double>(cfg.n_outputs);
    const auto idx = static_cast<long>(std::floor(std::clamp(p.x, 0.0, 1.0) * n));
    return static_cast<std::size_t>(std::clamp<long>(idx, 0, static_cast<long>(cfg.n_outputs) - 1));
}

namespace {

// Accumulated y may land a hair below 1 after repeated additions.
constexpr double output_level_tolerance = 1e-9;

} // namespace

Point3 step(const AntTraits& ant, const Point3& current, const PheromoneSpace& space, Rng& rng)
{
    const Point3 ahead{current.x, current.y + ant.step_y, current.z};

    Point3 target = ahead;
    double mass = 0.0;
    Point3 weighted{};
    for (const auto& p : space.sense(ahead, ant.sensing_radius)) {
        weighted.x += p.strength * p.pos.x;
        weighted.y += p.strength * p.pos.y;
        weighted.z += p.strength * p.pos.z;
        mass += p.strength;
    }
    if (mass > 0.0)
        target = {weighted.x / mass, weighted.y / mass, weighted.z / mass};

    const double jitter_x = rng.normal(0.0, ant.sensing_radius);
    const double jitter_z = rng.normal(0.0, ant.sensing_radius);
    const double e = ant.exploration_factor;
    Point3 next{(1.0 - e) * target.x + e * (ahead.x + jitter_x), ahead.y,
                (1.0 - e) * target.z + e * (ahead.z + jitter_z)};
    next = clamp_unit(next);

    if (ahead.y >= 1.0 - output_level_tolerance)
        return output_anchor(space.config(), nearest_output(space.config(), next));
    return next;
}

AntPath forage(const AntTraits& ant, const PheromoneSpace& space, Rng& rng)
{
    const auto& cfg = space.config();
    AntPath path;
    path.feature_idx = pick_entry(space, rng, cfg.n_inputs);
    path.points.push_back(input_anchor(cfg, path.feature_idx));

    const std::size_t cap = max_path_length();
    while (path.points.back().y < 1.0) {
        if (path.points.size() >= cap)
            throw internal_error(fmt::format("ant path exceeded {} points", cap));
        path.points.push_back(step(ant, path.points.back(), space, rng));
    }
    path.output_idx = nearest_output(cfg, path.points.back());
    return path;
}

std::vector<bool> mortality_draws(std::size_t n_ants, double rate, Rng& rng)
{
    if (!(rate >= 0.0 && rate <= 1.0))
        throw domain_error(fmt::format("mortality rate {} outside [0, 1]", rate));
    std::vector<bool> dies(n_ants);
    for (std::size_t i = 0; i < n_ants; ++i)
        dies[i] = rng.uniform() < rate;
    return dies;
}

std::vector<AntTraits> apply_mortality(std::vector<AntTraits> ants, double rate, Rng& rng)
{
    const auto dies = mortality_draws(ants.size(), rate, rng);
    for (std::size_t i = 0; i < ants.size(); ++i)
        if (dies[i])
            ants[i] = spawn_ant(rng);
    return ants;
}

} // namespace cants
