#include <cmath>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "cants/error.hpp"
#include "cants/search_space.hpp"
#include "oracles.hpp"

using namespace cants;

namespace {

SpaceConfig config_with(std::size_t n_in, std::size_t n_out)
{
    SpaceConfig c;
    c.n_inputs = n_in;
    c.n_outputs = n_out;
    return c;
}

} // namespace

TEST(Anchors, InputAnchorsSitAtSlotMidpoints)
{
    EXPECT_EQ(input_anchor(config_with(1, 1), 0), (Point3{0.5, 0.0, 0.0}));
    const auto twelve = config_with(12, 1);
    EXPECT_NEAR(input_anchor(twelve, 0).x, 0.5 / 12.0, 1e-15);
    EXPECT_NEAR(input_anchor(twelve, 11).x, 11.5 / 12.0, 1e-15);
    EXPECT_EQ(input_anchor(twelve, 11).y, 0.0);
    EXPECT_EQ(input_anchor(twelve, 11).z, 0.0);
}

TEST(Anchors, OutputAnchorsSitAtTheTop)
{
    EXPECT_EQ(output_anchor(config_with(1, 1), 0), (Point3{0.5, 1.0, 0.0}));
    EXPECT_EQ(output_anchor(config_with(1, 2), 0), (Point3{0.25, 1.0, 0.0}));
    EXPECT_EQ(output_anchor(config_with(1, 2), 1), (Point3{0.75, 1.0, 0.0}));
}

TEST(Anchors, OutOfRangeIndexIsRejected)
{
    EXPECT_THROW(input_anchor(config_with(3, 1), 3), domain_error);
    EXPECT_THROW(output_anchor(config_with(3, 2), 2), domain_error);
}

TEST(SpaceConfig, RejectsInconsistentStrengths)
{
    SpaceConfig c;
    c.initial_strength = 0.01;
    EXPECT_THROW(c.validate(), domain_error);
    c = {};
    c.strength_max = 0.5;
    EXPECT_THROW(c.validate(), domain_error);
    c = {};
    c.n_inputs = 0;
    EXPECT_THROW(c.validate(), domain_error);
    EXPECT_NO_THROW(SpaceConfig{}.validate());
}

TEST(Deposit, NewPointInEmptySpace)
{
    PheromoneSpace s(SpaceConfig{});
    s.deposit({0.5, 0.5, 0.0}, 1.0);
    ASSERT_EQ(s.size(), 1u);
    EXPECT_DOUBLE_EQ(s.points()[0].strength, 1.0);
}

TEST(Deposit, SamePositionAddsStrength)
{
    PheromoneSpace s(SpaceConfig{});
    s.deposit({0.5, 0.5, 0.0}, 1.0);
    s.deposit({0.5, 0.5, 0.0}, 0.5);
    ASSERT_EQ(s.size(), 1u);
    EXPECT_DOUBLE_EQ(s.points()[0].strength, 1.5);
}

TEST(Deposit, StrengthClampsAtMaximum)
{
    PheromoneSpace s(SpaceConfig{});
    s.deposit({0.5, 0.5, 0.0}, 9.8);
    s.deposit({0.5, 0.5, 0.0}, 0.5);
    EXPECT_DOUBLE_EQ(s.points()[0].strength, 10.0);
}

TEST(Deposit, MergedPositionIsStrengthWeighted)
{
    SpaceConfig c;
    c.merge_radius = 0.1;
    PheromoneSpace s(c);
    s.deposit({0.5, 0.5, 0.0}, 3.0);
    s.deposit({0.54, 0.5, 0.0}, 1.0);
    ASSERT_EQ(s.size(), 1u);
    EXPECT_NEAR(s.points()[0].pos.x, 0.51, 1e-15);
    EXPECT_DOUBLE_EQ(s.points()[0].strength, 4.0);
}

TEST(Deposit, MergesIntoNearestCandidate)
{
    SpaceConfig c;
    c.merge_radius = 0.1;
    PheromoneSpace s(c);
    s.deposit({0.3, 0.5, 0.0}, 1.0);
    s.deposit({0.5, 0.5, 0.0}, 1.0);
    s.deposit({0.42, 0.5, 0.0}, 1.0);
    ASSERT_EQ(s.size(), 2u);
    EXPECT_DOUBLE_EQ(s.points()[0].strength, 1.0);
    EXPECT_DOUBLE_EQ(s.points()[1].strength, 2.0);
}

TEST(Deposit, RejectsNonFiniteInput)
{
    PheromoneSpace s(SpaceConfig{});
    EXPECT_THROW(s.deposit({NAN, 0.5, 0.0}, 1.0), domain_error);
    EXPECT_THROW(s.deposit({0.5, 0.5, 0.0}, INFINITY), domain_error);
    EXPECT_THROW(s.deposit({0.5, 0.5, 0.0}, 0.0), domain_error);
}

TEST(Deposit, RepeatedDepositAtOnePositionKeepsOnePoint)
{
    PheromoneSpace s(SpaceConfig{});
    for (int i = 0; i < 50; ++i)
        s.deposit({0.2, 0.7, 0.4}, 0.3);
    EXPECT_EQ(s.size(), 1u);
}

TEST(Evaporate, MultipliesByRetention)
{
    PheromoneSpace s(SpaceConfig{});
    s.deposit({0.5, 0.5, 0.0}, 1.0);
    s.evaporate(0.9);
    EXPECT_DOUBLE_EQ(s.points()[0].strength, 0.9);
}

TEST(Evaporate, TenRoundsMatchGeometricDecay)
{
    PheromoneSpace s(SpaceConfig{});
    s.deposit({0.5, 0.5, 0.0}, 1.0);
    for (int i = 0; i < 10; ++i)
        s.evaporate(0.9);
    EXPECT_NEAR(s.points()[0].strength, 0.3486784401, 1e-12);
}

TEST(Evaporate, DropsPointsBelowFloor)
{
    PheromoneSpace s(SpaceConfig{});
    s.deposit({0.5, 0.5, 0.0}, 0.05);
    s.evaporate(0.5);
    EXPECT_EQ(s.size(), 0u);
}

TEST(Evaporate, RejectsRatesOutsideOpenUnitInterval)
{
    PheromoneSpace s(SpaceConfig{});
    EXPECT_THROW(s.evaporate(0.0), domain_error);
    EXPECT_THROW(s.evaporate(1.0), domain_error);
    EXPECT_THROW(s.evaporate(-0.3), domain_error);
}

TEST(Evaporate, TwoRatesComposeMultiplicatively)
{
    Rng rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        const double r1 = rng.uniform(0.15, 0.95);
        const double r2 = rng.uniform(0.15, 0.95);
        PheromoneSpace a(SpaceConfig{});
        PheromoneSpace b(SpaceConfig{});
        const double strength = rng.uniform(1.0, 10.0);
        a.deposit({0.5, 0.5, 0.5}, strength);
        b.deposit({0.5, 0.5, 0.5}, strength);
        a.evaporate(r1);
        a.evaporate(r2);
        b.evaporate(r1 * r2);
        ASSERT_EQ(a.size(), b.size());
        if (a.size() == 1) {
            EXPECT_NEAR(a.points()[0].strength, b.points()[0].strength, 1e-12);
        }
    }
}

TEST(Sense, EmptySpaceSensesNothing)
{
    PheromoneSpace s(SpaceConfig{});
    EXPECT_TRUE(s.sense({0.5, 0.5, 0.5}, 0.3).empty());
}

TEST(Sense, OnlyPointsWithinRadius)
{
    PheromoneSpace s(SpaceConfig{});
    s.deposit({0.6, 0.5, 0.5}, 1.0);
    s.deposit({0.5, 0.5, 1.0}, 2.0);
    const auto got = s.sense({0.5, 0.5, 0.5}, 0.2);
    ASSERT_EQ(got.size(), 1u);
    EXPECT_DOUBLE_EQ(got[0].strength, 1.0);
}

TEST(Sense, DiameterRadiusSensesEverything)
{
    PheromoneSpace s(SpaceConfig{});
    Rng rng(3);
    for (int i = 0; i < 40; ++i)
        s.deposit({rng.uniform(), rng.uniform(), rng.uniform()}, 1.0);
    EXPECT_EQ(s.sense({0.0, 0.0, 0.0}, std::sqrt(3.0)).size(), s.size());
    EXPECT_EQ(s.sense({1.0, 1.0, 1.0}, 2.0).size(), s.size());
}

TEST(Sense, MatchesBruteForceScan)
{
    Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        SpaceConfig c;
        c.merge_radius = rng.uniform(0.0, 0.05);
        PheromoneSpace s(c);
        const auto n = rng.below(60);
        for (std::uint64_t i = 0; i < n; ++i)
            s.deposit({rng.uniform(), rng.uniform(), rng.uniform()}, rng.uniform(0.1, 3.0));
        const Point3 center{rng.uniform(), rng.uniform(), rng.uniform()};
        const double radius = rng.uniform(0.01, 1.0);
        const auto got = s.sense(center, radius);
        const auto want = oracle::sense_indices(s.points(), center, radius);
        ASSERT_EQ(got.size(), want.size());
        for (std::size_t k = 0; k < want.size(); ++k)
            EXPECT_EQ(got[k].pos, s.points()[want[k]].pos);
    }
}

TEST(SpaceInvariants, StrengthsStayWithinFloorAndMax)
{
    Rng rng(21);
    PheromoneSpace s = PheromoneSpace::seeded(config_with(3, 2));
    for (int op = 0; op < 5000; ++op) {
        if (rng.uniform() < 0.7)
            s.deposit({rng.uniform(), rng.uniform(), rng.uniform()}, rng.uniform(0.01, 4.0));
        else
            s.evaporate(rng.uniform(0.15, 0.95));
        for (const auto& p : s.points()) {
            ASSERT_GE(p.strength, s.config().strength_floor);
            ASSERT_LE(p.strength, s.config().strength_max);
        }
    }
}

TEST(Seeded, AnchorsCarryInitialStrength)
{
    const auto s = PheromoneSpace::seeded(config_with(4, 2));
    ASSERT_EQ(s.size(), 6u);
    for (const auto& p : s.points())
        EXPECT_DOUBLE_EQ(p.strength, 1.0);
    EXPECT_DOUBLE_EQ(s.total_mass(), 6.0);
}

TEST(SpaceJson, RoundTrips)
{
    auto s = PheromoneSpace::seeded(config_with(2, 1));
    s.deposit({0.3, 0.4, 0.5}, 2.5);
    const auto back = PheromoneSpace::from_json(s.config(), s.to_json());
    ASSERT_EQ(back.size(), s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        EXPECT_EQ(back.points()[i].pos, s.points()[i].pos);
        EXPECT_EQ(back.points()[i].strength, s.points()[i].strength);
    }
}

TEST(Geometry, ClampKeepsPointsInUnitCube)
{
    EXPECT_EQ(clamp_unit({-0.5, 1.5, 0.25}), (Point3{0.0, 1.0, 0.25}));
    EXPECT_DOUBLE_EQ(distance({0, 0, 0}, {1, 2, 2}), 3.0);
}
