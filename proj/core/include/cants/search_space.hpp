#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace cants {

/// Location in the unit search cube.
///
/// x is lateral placement (input/output slot at the boundary levels), y is
/// depth (0 = input level, 1 = output level) and z is the recurrent-depth
/// coordinate that later becomes a time skip.
struct Point3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend bool operator==(const Point3&, const Point3&) = default;
};

double distance(const Point3& a, const Point3& b);
double distance_squared(const Point3& a, const Point3& b);
Point3 clamp_unit(const Point3& p);
bool is_finite(const Point3& p);

struct PheromonePoint {
    Point3 pos;
    double strength = 0.0;
};

struct SpaceConfig {
    std::size_t n_inputs = 1;
    std::size_t n_outputs = 1;
    std::size_t max_recurrent_depth = 3;
    double strength_floor = 0.05;
    double strength_max = 10.0;
    double initial_strength = 1.0;
    double deposit_amount = 1.0;
    double merge_radius = 0.01;

    /// Throws domain_error on the first violated constraint.
    void validate() const;
};

/// Fixed entry point of input feature `feature_idx`: ((i + 0.5) / n, 0, 0).
Point3 input_anchor(const SpaceConfig& cfg, std::size_t feature_idx);
/// Fixed exit point of output `output_idx`: ((i + 0.5) / n, 1, 0).
Point3 output_anchor(const SpaceConfig& cfg, std::size_t output_idx);

/// A colony's pheromone field.
///
/// Points are kept in insertion order in a flat list; every query is a linear
/// scan. Stored strengths always stay within [strength_floor, strength_max].
class PheromoneSpace {
public:
    explicit PheromoneSpace(SpaceConfig cfg);

    /// Space with initial_strength laid on every input and output anchor.
    static PheromoneSpace seeded(SpaceConfig cfg);

    const SpaceConfig& config() const { return cfg_; }
    std::span<const PheromonePoint> points() const { return points_; }
    std::size_t size() const { return points_.size(); }
    double total_mass() const;

    /// Reinforces the nearest point within merge_radius, or stores a new one.
    ///
    /// A merged point moves to the strength-weighted mean of its old position
    /// and `pos`. A new point weaker than strength_floor is not stored.
    void deposit(const Point3& pos, double amount);

    /// Multiplies every strength by `retention` and drops points below the floor.
    void evaporate(double retention);

    /// Points within `radius` of `center`, in insertion order.
    std::vector<PheromonePoint> sense(const Point3& center, double radius) const;

    /// Sum of strengths within `radius` of `center`.
    double strength_near(const Point3& center, double radius) const;

    nlohmann::json to_json() const;
    static PheromoneSpace from_json(const SpaceConfig& cfg, const nlohmann::json& doc);

private:
    SpaceConfig cfg_;
    std::vector<PheromonePoint> points_;
};

} // namespace cants
