#include "cants/params.hpp"

#include <cmath>
#include <string>

#include <fmt/format.h>

#include "cants/error.hpp"

namespace cants {

namespace {

void check(const char* name, double v, const Interval& b)
{
    if (!std::isfinite(v) || !b.contains(v))
        throw domain_error(fmt::format("{} {} outside [{}, {}]", name, v, b.lo, b.hi));
}

} // namespace

void validate_params(const ColonyParams& p, const ParamBounds& b)
{
    check("num_ants", static_cast<double>(p.num_ants), b.num_ants);
    check("evaporation_rate", p.evaporation_rate, b.evaporation_rate);
    check("mortality_rate", p.mortality_rate, b.mortality_rate);
}

ColonyParams clamp_params(const ColonyParams& p, const ParamBounds& b)
{
    ColonyParams out;
    out.num_ants = static_cast<std::size_t>(std::lround(b.num_ants.clamp(static_cast<double>(p.num_ants))));
    out.evaporation_rate = b.evaporation_rate.clamp(p.evaporation_rate);
    out.mortality_rate = b.mortality_rate.clamp(p.mortality_rate);
    return out;
}

} // namespace cants
