#pragma once

#include <cstddef>
#include <vector>

#include "cants/rng.hpp"
#include "cants/search_space.hpp"

namespace cants {

/// Heritable foraging traits, fixed for an ant's lifetime.
struct AntTraits {
    double sensing_radius = 0.05;
    double exploration_factor = 0.0;
    double step_y = 0.05;

    friend bool operator==(const AntTraits&, const AntTraits&) = default;
};

namespace trait_bounds {
inline constexpr double sensing_radius_lo = 0.05;
inline constexpr double sensing_radius_hi = 0.5;
inline constexpr double exploration_lo = 0.0;
inline constexpr double exploration_hi = 1.0;
inline constexpr double step_y_lo = 0.05;
inline constexpr double step_y_hi = 0.25;
} // namespace trait_bounds

bool traits_in_bounds(const AntTraits& t);

/// Maximum number of points an ant path may hold.
std::size_t max_path_length();

/// One ant's walk from an input anchor to an output anchor.
struct AntPath {
    std::size_t feature_idx = 0;
    std::size_t output_idx = 0;
    std::vector<Point3> points;
};

/// Traits at the given per-trait quantiles in [0, 1].
AntTraits traits_from_quantiles(double q_radius, double q_exploration, double q_step);

AntTraits spawn_ant(Rng& rng);

/// Input feature index drawn in proportion to the pheromone sensed at each anchor.
std::size_t pick_entry(const PheromoneSpace& space, Rng& rng, std::size_t n_inputs);

/// Output anchor nearest to `p` laterally.
std::size_t nearest_output(const SpaceConfig& cfg, const Point3& p);

/// Single move: advance depth by step_y, blending pheromone attraction with jitter.
///
/// The look-ahead center is `current` moved up by step_y. The attraction target
/// is the strength-weighted centroid of the pheromone sensed around it (the
/// center itself when nothing is sensed). Jitter is Gaussian in x and z with
/// sigma = sensing_radius. Once depth reaches 1 the ant snaps to the nearest
/// output anchor.
Point3 step(const AntTraits& ant, const Point3& current, const PheromoneSpace& space, Rng& rng);

/// Full walk from a pheromone-weighted input anchor to an output anchor.
AntPath forage(const AntTraits& ant, const PheromoneSpace& space, Rng& rng);

/// Per-ant death flags; each ant dies independently with probability `rate`.
std::vector<bool> mortality_draws(std::size_t n_ants, double rate, Rng& rng);

/// Replaces every ant that dies this generation with a freshly spawned one.
std::vector<AntTraits> apply_mortality(std::vector<AntTraits> ants, double rate, Rng& rng);

} // namespace cants
