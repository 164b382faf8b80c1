#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "rft/challenges.hpp"
#include "rft/error.hpp"

using namespace rft;
using namespace rft::synth;

namespace {

ChallengeSpec spec_for(Challenge c, std::size_t test = 2000) {
    ChallengeSpec s;
    s.challenge = c;
    s.test_size = test;
    s.seed = 5;
    return s;
}

double positive_fraction(const Dataset& d) {
    double pos = 0;
    for (std::size_t i = 0; i < d.size(); ++i) pos += d.label(i);
    return pos / static_cast<double>(d.size());
}

Point row_point(const Dataset& d, std::size_t i) { return {d.value(i, 0), d.value(i, 1), d.value(i, 2)}; }

}  // namespace

TEST(Challenges, NamesRoundTrip) {
    for (auto c : all_challenges) EXPECT_EQ(parse_challenge(name(c)), c);
    EXPECT_EQ(parse_challenge("moving_source"), Challenge::moving);
    EXPECT_THROW(parse_challenge("spiral"), ConfigError);
}

TEST(Challenges, StandardBoxesHaveQuarterVolume) {
    Rng rng(1);
    for (int i = 0; i < 1000; ++i) {
        const Box b = sample_standard_box(rng);
        EXPECT_NEAR(b.volume(), 0.25, 1e-9);
        EXPECT_TRUE(b.inside_unit_cube());
    }
}

TEST(Challenges, ScaledBoxVolumes) {
    Rng rng(2);
    const Box b = sample_standard_box(rng);
    EXPECT_NEAR(scale_box(b, 2.0).volume(), 0.5, 1e-9);
    EXPECT_NEAR(scale_box(b, 0.5).volume(), 0.125, 1e-9);
}

TEST(Challenges, SizesAndDeterminism) {
    for (auto c : all_challenges) {
        const auto a = generate(spec_for(c), 3);
        EXPECT_EQ(a.source_train.size(), 320u);
        EXPECT_EQ(a.target_train.size(), 64u);
        EXPECT_EQ(a.target_test.size(), 2000u);
        const auto b = generate(spec_for(c), 3);
        for (std::size_t i = 0; i < a.target_test.size(); ++i) {
            ASSERT_EQ(a.target_test.label(i), b.target_test.label(i));
            ASSERT_EQ(a.target_test.value(i, 2), b.target_test.value(i, 2));
        }
        EXPECT_NE(generate(spec_for(c), 4).target_test.value(0, 0), a.target_test.value(0, 0));
    }
}

TEST(Challenges, TestLabelsFollowTargetConcept) {
    for (auto c : all_challenges) {
        const auto inst = generate(spec_for(c), 0);
        for (std::size_t i = 0; i < inst.target_test.size(); ++i)
            ASSERT_EQ(inst.target_test.label(i), inst.target_concept(row_point(inst.target_test, i))) << name(c);
    }
}

TEST(Challenges, NoisyTargetFlipRate) {
    auto s = spec_for(Challenge::noisy_target, 1);
    s.target_size = 100000;
    const auto inst = generate(s, 0);
    double flipped = 0;
    for (std::size_t i = 0; i < inst.target_train.size(); ++i)
        flipped += inst.target_train.label(i) != inst.target_concept(row_point(inst.target_train, i));
    EXPECT_NEAR(flipped / static_cast<double>(inst.target_train.size()), 0.25, 0.01);
}

TEST(Challenges, NoisySourceFlipRate) {
    auto s = spec_for(Challenge::noisy_source, 1);
    s.source_size = 100000;
    const auto inst = generate(s, 0);
    double flipped = 0;
    for (std::size_t i = 0; i < inst.source_train.size(); ++i)
        flipped += inst.source_train.label(i) != inst.source_concept(row_point(inst.source_train, i));
    EXPECT_NEAR(flipped / static_cast<double>(inst.source_train.size()), 0.25, 0.01);
}

TEST(Challenges, MovingKeepsQuarterPositives) {
    const auto inst = generate(spec_for(Challenge::moving, 100000), 1);
    EXPECT_NEAR(positive_fraction(inst.target_test), 0.25, 0.02);
}

TEST(Challenges, InversionPositiveOutsideOnEveryAxis) {
    const auto inst = generate(spec_for(Challenge::inversion), 2);
    // Inside the box is always negative in the target.
    for (std::size_t i = 0; i < inst.source_train.size(); ++i) {
        const Point x = row_point(inst.source_train, i);
        if (inst.source_concept(x) == 1) ASSERT_EQ(inst.target_concept(x), 0);
    }
    EXPECT_LT(positive_fraction(inst.target_test), 0.25);
}

TEST(Challenges, MixtureSourceBlendsTwoBoxes) {
    auto s = spec_for(Challenge::mixture, 1);
    s.source_size = 20000;
    const auto inst = generate(s, 0);
    double agree = 0;
    for (std::size_t i = 0; i < inst.source_train.size(); ++i)
        agree += inst.source_train.label(i) == inst.target_concept(row_point(inst.source_train, i));
    const double rate = agree / static_cast<double>(inst.source_train.size());
    EXPECT_GT(rate, 0.8);
    EXPECT_LT(rate, 1.0);
}

TEST(Challenges, RefinedSineSourceConcept) {
    const auto inst = generate(spec_for(Challenge::refined_sine, 10), 0);
    EXPECT_EQ(inst.source_concept({0.0, 0.0, 0.6}), 1);
    EXPECT_EQ(inst.source_concept({0.0, 0.0, 0.4}), 0);
}

TEST(Challenges, FisheyeMapsCubeSectorOntoBallSector) {
    Rng rng(9);
    std::uniform_real_distribution<double> u;
    for (int i = 0; i < 1000; ++i) {
        Point x{u(rng), u(rng), u(rng)};
        if (x[1] > x[0]) std::swap(x[0], x[1]);
        ASSERT_TRUE(in_fisheye_source_domain(x));
        const Point t = fisheye_forward(x);
        ASSERT_LE(std::hypot(t[0], t[1], t[2]), 1.0 + 1e-12);
        const Point back = fisheye_inverse(t);
        for (std::size_t k = 0; k < 3; ++k) ASSERT_NEAR(back[k], x[k], 1e-12);
    }
    // The cube corner lands on the unit sphere.
    const Point corner = fisheye_forward({1.0, 1.0, 1.0});
    EXPECT_NEAR(std::hypot(corner[0], corner[1], corner[2]), 1.0, 1e-12);
}

TEST(Challenges, RotationMatrixIsOrthonormal) {
    const auto m = rotation_matrix({1.0, 2.0, 3.0}, std::numbers::pi / 3);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            double dot = 0;
            for (std::size_t k = 0; k < 3; ++k) dot += m[i][k] * m[j][k];
            EXPECT_NEAR(dot, i == j ? 1.0 : 0.0, 1e-12);
        }
}

TEST(Challenges, ZeroSizesRejected) {
    auto s = spec_for(Challenge::moving);
    s.target_size = 0;
    EXPECT_THROW(generate(s, 0), ConfigError);
}
