#pragma once

#include <cstddef>

namespace cants {

/// Colony-level traits exchanged through the swarm.
struct ColonyParams {
    std::size_t num_ants = 10;
    double evaporation_rate = 0.9;
    double mortality_rate = 0.1;

    friend bool operator==(const ColonyParams&, const ColonyParams&) = default;
};

struct Interval {
    double lo;
    double hi;

    bool contains(double v) const { return v >= lo && v <= hi; }
    double clamp(double v) const { return v < lo ? lo : (v > hi ? hi : v); }
};

/// Admissible range of each colony trait.
struct ParamBounds {
    Interval num_ants{10.0, 200.0};
    Interval evaporation_rate{0.15, 0.95};
    Interval mortality_rate{0.01, 0.1};
};

/// Throws domain_error naming the first trait outside its bounds.
void validate_params(const ColonyParams& params, const ParamBounds& bounds = {});

/// Each trait clamped into its bounds; num_ants rounded to the nearest integer.
ColonyParams clamp_params(const ColonyParams& params, const ParamBounds& bounds = {});

} // namespace cants
