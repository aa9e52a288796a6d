#include <cmath>

#include <gtest/gtest.h>

#include "cants/error.hpp"
#include "cants/pso.hpp"
#include "oracles.hpp"

using namespace cants;

TEST(Encode, BoundsMapToUnitCorners)
{
    EXPECT_EQ(encode({10, 0.15, 0.01}), (Vec3{0.0, 0.0, 0.0}));
    const auto hi = encode({200, 0.95, 0.1});
    for (double v : hi)
        EXPECT_NEAR(v, 1.0, 1e-15);
    EXPECT_THROW(encode({5, 0.9, 0.1}), domain_error);
}

TEST(Decode, MidpointAndRounding)
{
    const auto mid = decode({0.5, 0.5, 0.5});
    EXPECT_EQ(mid.num_ants, 105u);
    EXPECT_NEAR(mid.evaporation_rate, 0.55, 1e-15);
    EXPECT_NEAR(mid.mortality_rate, 0.055, 1e-15);
    EXPECT_EQ(decode({0.0026, 0.0, 0.0}).num_ants, 10u);
    EXPECT_EQ(decode({0.0027, 0.0, 0.0}).num_ants, 11u);
    EXPECT_EQ(decode({-3.0, 2.0, 0.0}), (ColonyParams{10, 0.95, 0.01}));
}

TEST(Decode, InvertsEncodeUpToRounding)
{
    Rng rng(1);
    for (int i = 0; i < 1000; ++i) {
        const ColonyParams p{10 + rng.below(191), rng.uniform(0.15, 0.95), rng.uniform(0.01, 0.1)};
        const auto back = decode(encode(p));
        EXPECT_EQ(back.num_ants, p.num_ants);
        EXPECT_NEAR(back.evaporation_rate, p.evaporation_rate, 1e-12);
        EXPECT_NEAR(back.mortality_rate, p.mortality_rate, 1e-12);
    }
}

TEST(UpdateParticle, AtItsBestsOnlyInertiaActs)
{
    Particle p;
    p.position = {0.5, 0.5, 0.5};
    p.pbest_position = p.position;
    p.velocity = {0.1, -0.1, 0.0};
    Rng rng(2);
    const auto next = update_particle(p, p.position, SwarmConfig{}, rng);
    EXPECT_NEAR(next.velocity[0], 0.07, 1e-15);
    EXPECT_NEAR(next.velocity[1], -0.07, 1e-15);
    EXPECT_EQ(next.velocity[2], 0.0);
    EXPECT_NEAR(next.position[0], 0.57, 1e-15);
}

TEST(UpdateParticle, StaysInsideCubeAndSpeedLimit)
{
    Rng rng(3);
    const SwarmConfig cfg;
    for (int i = 0; i < 10000; ++i) {
        Particle p;
        for (std::size_t d = 0; d < 3; ++d) {
            p.position[d] = rng.uniform();
            p.pbest_position[d] = rng.uniform();
            p.velocity[d] = rng.uniform(-1.0, 1.0);
        }
        const Vec3 g{rng.uniform(), rng.uniform(), rng.uniform()};
        const auto next = update_particle(p, g, cfg, rng);
        for (std::size_t d = 0; d < 3; ++d) {
            ASSERT_GE(next.position[d], 0.0);
            ASSERT_LE(next.position[d], 1.0);
            ASSERT_LE(std::abs(next.velocity[d]), cfg.v_max);
        }
    }
}

TEST(Swarm, ReportsTrackPersonalAndGlobalBests)
{
    Swarm s(SwarmConfig{}, {{0.1, 0.1, 0.1}, {0.9, 0.9, 0.9}});
    EXPECT_FALSE(s.gbest_owner());
    EXPECT_TRUE(s.report(0, {0.1, 0.1, 0.1}, 0.5));
    EXPECT_TRUE(s.report(1, {0.9, 0.9, 0.9}, 0.3));
    EXPECT_EQ(s.gbest_owner(), 1u);
    EXPECT_EQ(s.gbest_fitness(), 0.3);
    EXPECT_TRUE(s.report(0, {0.2, 0.2, 0.2}, 0.3));
    EXPECT_EQ(s.gbest_owner(), 1u);
    EXPECT_TRUE(s.report(0, {0.3, 0.3, 0.3}, 0.7));
    EXPECT_EQ(s.particle(0).pbest_fitness, 0.3);
    EXPECT_EQ(s.particle(0).pbest_position, (Vec3{0.2, 0.2, 0.2}));
}

TEST(Swarm, NonFiniteReportsAreIgnored)
{
    Swarm s(SwarmConfig{}, {{0.1, 0.1, 0.1}});
    EXPECT_FALSE(s.report(0, {0.5, 0.5, 0.5}, NAN));
    EXPECT_FALSE(s.report(0, {0.5, 0.5, 0.5}, INFINITY));
    EXPECT_FALSE(s.gbest_owner());
    EXPECT_THROW(s.report(3, {0.5, 0.5, 0.5}, 0.1), protocol_error);
}

TEST(Swarm, RandomInitialVelocitiesAreBounded)
{
    Rng rng(4);
    Swarm s(SwarmConfig{}, std::vector<Vec3>(20, Vec3{0.5, 0.5, 0.5}), rng);
    bool any_nonzero = false;
    for (std::size_t i = 0; i < s.size(); ++i)
        for (double v : s.particle(i).velocity) {
            EXPECT_LE(std::abs(v), 0.2);
            any_nonzero = any_nonzero || v != 0.0;
        }
    EXPECT_TRUE(any_nonzero);
    Swarm rest(SwarmConfig{}, {{0.5, 0.5, 0.5}});
    EXPECT_EQ(rest.particle(0).velocity, (Vec3{0.0, 0.0, 0.0}));
}

TEST(Swarm, MinimizesShiftedSphere)
{
    Rng init(5);
    std::vector<Vec3> start;
    for (int i = 0; i < 20; ++i)
        start.push_back({init.uniform(), init.uniform(), init.uniform()});
    Swarm s(SwarmConfig{}, start, init);
    Rng rng(6);
    for (std::size_t i = 0; i < s.size(); ++i)
        s.report(i, s.particle(i).position, oracle::shifted_sphere(s.particle(i).position));
    for (int iter = 0; iter < 200; ++iter)
        for (std::size_t i = 0; i < s.size(); ++i) {
            const auto pos = s.update(i, rng);
            s.report(i, pos, oracle::shifted_sphere(pos));
        }
    EXPECT_LT(s.gbest_fitness(), 1e-3);
}

TEST(SwarmConfig, Validates)
{
    SwarmConfig c;
    c.inertia = 1.0;
    EXPECT_THROW(c.validate(), domain_error);
    c = {};
    c.v_max = 0.0;
    EXPECT_THROW(c.validate(), domain_error);
    EXPECT_THROW(Swarm(SwarmConfig{}, {}), domain_error);
}
