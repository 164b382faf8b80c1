#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "rft/dataset.hpp"
#include "rft/random.hpp"

namespace rft::synth {

using Point = std::array<double, 3>;

enum class Challenge {
    mixture,
    inversion,
    moving,
    expanding,
    shrinking,
    axis_swap,
    noisy_target,
    noisy_source,
    rotated,
    fisheye,
    refined_sine,
};

inline constexpr std::array all_challenges{
    Challenge::mixture,      Challenge::inversion,    Challenge::moving,  Challenge::expanding,
    Challenge::shrinking,    Challenge::axis_swap,    Challenge::noisy_target, Challenge::noisy_source,
    Challenge::rotated,      Challenge::fisheye,      Challenge::refined_sine,
};

std::string_view name(Challenge c) noexcept;
/// Throws ConfigError for unknown names.
Challenge parse_challenge(std::string_view name);

/// Axis-aligned box [lo, hi] inside the unit cube.
struct Box {
    Point lo{};
    Point hi{};

    double volume() const noexcept;
    Point center() const noexcept;
    bool contains(const Point& x) const noexcept;
    bool inside_unit_cube() const noexcept;
};

inline constexpr double standard_box_volume = 0.25;

/// Sides drawn uniformly from [0.3, 1], rescaled to volume 0.25, redrawn
/// until they fit, then placed uniformly inside the cube.
Box sample_standard_box(Rng& rng);

/// `box` scaled about its center so the volume is multiplied by `factor`.
Box scale_box(const Box& box, double factor);

/// 3x3 rotation by `angle` about the unit vector `axis`.
using Matrix3 = std::array<std::array<double, 3>, 3>;
Matrix3 rotation_matrix(const Point& axis, double angle);

/// Fish-eye domain: unit-cube points with azimuth in [0, pi/4] and polar
/// angle in [0, pi/2].
bool in_fisheye_source_domain(const Point& x) noexcept;
/// Distance from the origin to the cube boundary along the direction of `x`.
double cube_exit_radius(const Point& x) noexcept;
/// Source point -> target point with the same angles and r_t = r_s / r_m.
Point fisheye_forward(const Point& x) noexcept;
Point fisheye_inverse(const Point& x) noexcept;

struct ChallengeSpec {
    Challenge challenge = Challenge::moving;
    std::size_t source_size = 320;
    std::size_t target_size = 64;
    std::size_t test_size = 10000;
    std::size_t trials = 100;
    std::uint64_t seed = 0;
};

using Concept = std::function<int(const Point&)>;

struct ChallengeInstance {
    Dataset source_train;
    Dataset target_train;
    Dataset target_test;
    // Noise-free labeling rules, for inspection and tests.
    Concept source_concept;
    Concept target_concept;
    std::string description;
};

/// Builds trial `trial` of `spec`, seeded by derive_seed(spec.seed, trial).
ChallengeInstance generate(const ChallengeSpec& spec, std::size_t trial);

/// Features x0, x1, x2 and binary classes "0" (negative) and "1" (positive).
Schema challenge_schema();

}  // namespace rft::synth
