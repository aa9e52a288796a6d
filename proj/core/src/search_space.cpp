#include "cants/search_space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "cants/error.hpp"

namespace cants {

double distance_squared(const Point3& a, const Point3& b)
{
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    const double dz = a.z - b.z;
    return dx * dx + dy * dy + dz * dz;
}

double distance(const Point3& a, const Point3& b) { return std::sqrt(distance_squared(a, b)); }

Point3 clamp_unit(const Point3& p)
{
    return {std::clamp(p.x, 0.0, 1.0), std::clamp(p.y, 0.0, 1.0), std::clamp(p.z, 0.0, 1.0)};
}

bool is_finite(const Point3& p) { return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z); }

void SpaceConfig::validate() const
{
    if (n_inputs < 1)
        throw domain_error("n_inputs must be at least 1");
    if (n_outputs < 1)
        throw domain_error("n_outputs must be at least 1");
    if (max_recurrent_depth < 1)
        throw domain_error("max_recurrent_depth must be at least 1");
    if (!(strength_floor > 0.0))
        throw domain_error("strength_floor must be positive");
    if (!(strength_floor < initial_strength && initial_strength <= strength_max))
        throw domain_error(fmt::format("need strength_floor < initial_strength <= strength_max, got {} / {} / {}",
                                       strength_floor, initial_strength, strength_max));
    if (!(deposit_amount > 0.0))
        throw domain_error("deposit_amount must be positive");
    if (!(merge_radius >= 0.0))
        throw domain_error("merge_radius must be non-negative");
}

Point3 input_anchor(const SpaceConfig& cfg, std::size_t feature_idx)
{
    if (feature_idx >= cfg.n_inputs)
        throw domain_error(fmt::format("input index {} out of range (n_inputs = {})", feature_idx, cfg.n_inputs));
    return {(static_cast<double>(feature_idx) + 0.5) / static_cast<double>(cfg.n_inputs), 0.0, 0.0};
}

Point3 output_anchor(const SpaceConfig& cfg, std::size_t output_idx)
{
    if (output_idx >= cfg.n_outputs)
        throw domain_error(fmt::format("output index {} out of range (n_outputs = {})", output_idx, cfg.n_outputs));
    return {(static_cast<double>(output_idx) + 0.5) / static_cast<double>(cfg.n_outputs), 1.0, 0.0};
}

PheromoneSpace::PheromoneSpace(SpaceConfig cfg) : cfg_(cfg) { cfg_.validate(); }

PheromoneSpace PheromoneSpace::seeded(SpaceConfig cfg)
{
    PheromoneSpace space(cfg);
    for (std::size_t i = 0; i < cfg.n_inputs; ++i)
        space.points_.push_back({input_anchor(cfg, i), cfg.initial_strength});
    for (std::size_t i = 0; i < cfg.n_outputs; ++i)
        space.points_.push_back({output_anchor(cfg, i), cfg.initial_strength});
    return space;
}

double PheromoneSpace::total_mass() const
{
    double sum = 0.0;
    for (const auto& p : points_)
        sum += p.strength;
    return sum;
}

void PheromoneSpace::deposit(const Point3& pos, double amount)
{
    if (!is_finite(pos) || !std::isfinite(amount))
        throw domain_error("deposit requires finite position and amount");
    if (!(amount > 0.0))
        throw domain_error(fmt::format("deposit amount must be positive, got {}", amount));

    const double r2 = cfg_.merge_radius * cfg_.merge_radius;
    PheromonePoint* nearest = nullptr;
    double best = std::numeric_limits<double>::infinity();
    for (auto& p : points_) {
        const double d2 = distance_squared(p.pos, pos);
        if (d2 <= r2 && d2 < best) {
            best = d2;
            nearest = &p;
        }
    }

    if (nearest) {
        const double total = nearest->strength + amount;
        const double wa = nearest->strength / total;
        const double wb = amount / total;
        nearest->pos = {wa * nearest->pos.x + wb * pos.x, wa * nearest->pos.y + wb * pos.y,
                        wa * nearest->pos.z + wb * pos.z};
        nearest->strength = std::min(total, cfg_.strength_max);
        return;
    }
    const double strength = std::min(amount, cfg_.strength_max);
    if (strength >= cfg_.strength_floor)
        points_.push_back({pos, strength});
}

void PheromoneSpace::evaporate(double retention)
{
    if (!(retention > 0.0 && retention < 1.0))
        throw domain_error(fmt::format("evaporation rate {} outside (0, 1)", retention));
    for (auto& p : points_)
        p.strength *= retention;
    std::erase_if(points_, [&](const PheromonePoint& p) { return p.strength < cfg_.strength_floor; });
}

std::vector<PheromonePoint> PheromoneSpace::sense(const Point3& center, double radius) const
{
    std::vector<PheromonePoint> out;
    const double r2 = radius * radius;
    for (const auto& p : points_)
        if (distance_squared(p.pos, center) <= r2)
            out.push_back(p);
    return out;
}

double PheromoneSpace::strength_near(const Point3& center, double radius) const
{
    double sum = 0.0;
    const double r2 = radius * radius;
    for (const auto& p : points_)
        if (distance_squared(p.pos, center) <= r2)
            sum += p.strength;
    return sum;
}

nlohmann::json PheromoneSpace::to_json() const
{
    auto arr = nlohmann::json::array();
    for (const auto& p : points_)
        arr.push_back({{"x", p.pos.x}, {"y", p.pos.y}, {"z", p.pos.z}, {"strength", p.strength}});
    return arr;
}

PheromoneSpace PheromoneSpace::from_json(const SpaceConfig& cfg, const nlohmann::json& doc)
{
    PheromoneSpace space(cfg);
    for (const auto& item : doc) {
        PheromonePoint p{{item.at("x").get<double>(), item.at("y").get<double>(), item.at("z").get<double>()},
                         item.at("strength").get<double>()};
        if (!is_finite(p.pos) || !(p.strength >= cfg.strength_floor && p.strength <= cfg.strength_max))
            throw domain_error("pheromone snapshot point outside the configured strength range");
        space.points_.push_back(p);
    }
    return space;
}

} // namespace cants
