#include "rft/challenges.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <sstream>

#include "rft/error.hpp"

namespace rft::synth {

namespace {

constexpr std::array<std::string_view, all_challenges.size()> challenge_names{
    "mixture",      "inversion",    "moving",  "expanding", "shrinking", "axis_swap",
    "noisy_target", "noisy_source", "rotated", "fisheye",   "refined_sine",
};

// Half-width of the per-axis offset between the two boxes of the mixture concept.
constexpr double mixture_offset = 0.1;
constexpr double label_noise = 0.25;

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

Point uniform_point(Rng& rng) { return {uniform(rng, 0, 1), uniform(rng, 0, 1), uniform(rng, 0, 1)}; }

std::string describe(const Box& b) {
    std::ostringstream s;
    s.precision(6);
    s << "[(" << b.lo[0] << ',' << b.lo[1] << ',' << b.lo[2] << "),(" << b.hi[0] << ',' << b.hi[1] << ','
      << b.hi[2] << ")]";
    return s.str();
}

Box place(const Point& sides, Rng& rng) {
    Box b;
    for (std::size_t i = 0; i < 3; ++i) {
        b.lo[i] = uniform(rng, 0.0, 1.0 - sides[i]);
        b.hi[i] = b.lo[i] + sides[i];
    }
    return b;
}

Point sides_of(const Box& b) { return {b.hi[0] - b.lo[0], b.hi[1] - b.lo[1], b.hi[2] - b.lo[2]}; }

// Same box displaced by at most `offset` per axis, kept inside the cube.
Box nudge(const Box& b, double offset, Rng& rng) {
    const Point sides = sides_of(b);
    Box out;
    for (std::size_t i = 0; i < 3; ++i) {
        out.lo[i] = std::clamp(b.lo[i] + uniform(rng, -offset, offset), 0.0, 1.0 - sides[i]);
        out.hi[i] = out.lo[i] + sides[i];
    }
    return out;
}

Point apply(const Matrix3& m, const Point& x) {
    Point out{};
    for (std::size_t i = 0; i < 3; ++i) out[i] = m[i][0] * x[0] + m[i][1] * x[1] + m[i][2] * x[2];
    return out;
}

Matrix3 transpose(const Matrix3& m) {
    Matrix3 t{};
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) t[i][j] = m[j][i];
    return t;
}

struct Domain {
    // Uniform sampler over the feature space of one domain.
    std::function<Point(Rng&)> sample = uniform_point;
};

Point sample_fisheye_source(Rng& rng) {
    for (;;) {
        const Point x = uniform_point(rng);
        if (in_fisheye_source_domain(x)) return x;
    }
}

Point sample_fisheye_target(Rng& rng) {
    for (;;) {
        const Point x = uniform_point(rng);
        if (x[1] <= x[0] && x[0] * x[0] + x[1] * x[1] + x[2] * x[2] <= 1.0) return x;
    }
}

Dataset draw(std::size_t n, const Domain& domain, const Concept& concept_fn, double noise, Rng& rng) {
    Dataset d(challenge_schema());
    d.reserve(n);
    std::bernoulli_distribution flip(noise);
    for (std::size_t i = 0; i < n; ++i) {
        const Point x = domain.sample(rng);
        int label = concept_fn(x);
        if (noise > 0.0 && flip(rng)) label = 1 - label;
        d.add_row(std::span<const double>(x.data(), x.size()), label);
    }
    return d;
}

Concept box_concept(const Box& b) {
    return [b](const Point& x) { return b.contains(x) ? 1 : 0; };
}

}  // namespace

std::string_view name(Challenge c) noexcept { return challenge_names[static_cast<std::size_t>(c)]; }

Challenge parse_challenge(std::string_view text) {
    for (std::size_t i = 0; i < challenge_names.size(); ++i)
        if (challenge_names[i] == text) return all_challenges[i];
    // Accept a few spellings used in tables.
    if (text == "moving_source" || text == "moving-source") return Challenge::moving;
    if (text == "mixed_boxes" || text == "mixed-boxes" || text == "mix") return Challenge::mixture;
    if (text == "axis-swap") return Challenge::axis_swap;
    if (text == "noisy-target") return Challenge::noisy_target;
    if (text == "noisy-source") return Challenge::noisy_source;
    if (text == "refined-sine") return Challenge::refined_sine;
    if (text == "fish-eye" || text == "fish_eye") return Challenge::fisheye;
    throw ConfigError("unknown challenge '" + std::string(text) + "'");
}

double Box::volume() const noexcept { return (hi[0] - lo[0]) * (hi[1] - lo[1]) * (hi[2] - lo[2]); }

Point Box::center() const noexcept {
    return {(lo[0] + hi[0]) / 2, (lo[1] + hi[1]) / 2, (lo[2] + hi[2]) / 2};
}

bool Box::contains(const Point& x) const noexcept {
    for (std::size_t i = 0; i < 3; ++i)
        if (x[i] < lo[i] || x[i] > hi[i]) return false;
    return true;
}

bool Box::inside_unit_cube() const noexcept {
    for (std::size_t i = 0; i < 3; ++i)
        if (lo[i] < 0.0 || hi[i] > 1.0 || lo[i] > hi[i]) return false;
    return true;
}

Box sample_standard_box(Rng& rng) {
    for (;;) {
        Point sides{uniform(rng, 0.3, 1.0), uniform(rng, 0.3, 1.0), uniform(rng, 0.3, 1.0)};
        const double scale = std::cbrt(standard_box_volume / (sides[0] * sides[1] * sides[2]));
        for (auto& s : sides) s *= scale;
        if (std::all_of(sides.begin(), sides.end(), [](double s) { return s <= 1.0; })) return place(sides, rng);
    }
}

Box scale_box(const Box& box, double factor) {
    const double k = std::cbrt(factor);
    const Point c = box.center();
    Box out;
    for (std::size_t i = 0; i < 3; ++i) {
        const double half = (box.hi[i] - box.lo[i]) * k / 2;
        out.lo[i] = c[i] - half;
        out.hi[i] = c[i] + half;
    }
    return out;
}

Matrix3 rotation_matrix(const Point& axis, double angle) {
    const double norm = std::sqrt(axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]);
    const double x = axis[0] / norm, y = axis[1] / norm, z = axis[2] / norm;
    const double c = std::cos(angle), s = std::sin(angle), t = 1.0 - c;
    return {{{t * x * x + c, t * x * y - s * z, t * x * z + s * y},
             {t * x * y + s * z, t * y * y + c, t * y * z - s * x},
             {t * x * z - s * y, t * y * z + s * x, t * z * z + c}}};
}

bool in_fisheye_source_domain(const Point& x) noexcept {
    for (double v : x)
        if (v < 0.0 || v > 1.0) return false;
    // azimuth atan2(y, x) <= pi/4; the polar angle is within [0, pi/2] for z >= 0.
    return x[1] <= x[0];
}

double cube_exit_radius(const Point& x) noexcept {
    const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    const double m = std::max({x[0], x[1], x[2]});
    return m > 0.0 ? r / m : 1.0;
}

Point fisheye_forward(const Point& x) noexcept {
    const double r_m = cube_exit_radius(x);
    return {x[0] / r_m, x[1] / r_m, x[2] / r_m};
}

Point fisheye_inverse(const Point& x) noexcept {
    const double r_m = cube_exit_radius(x);
    return {x[0] * r_m, x[1] * r_m, x[2] * r_m};
}

Schema challenge_schema() { return numeric_schema(3, 2); }

ChallengeInstance generate(const ChallengeSpec& spec, std::size_t trial) {
    if (spec.source_size == 0 || spec.target_size == 0 || spec.test_size == 0)
        throw ConfigError("challenge sample sizes must be positive");
    Rng rng(derive_seed(spec.seed, trial));
    ChallengeInstance inst;
    Domain source_domain;
    Domain target_domain;
    double source_noise = 0.0;
    double target_noise = 0.0;
    // Source labels drawn from a per-sample mixture of concepts when set.
    Concept source_labeler;
    std::ostringstream desc;

    switch (spec.challenge) {
        case Challenge::mixture: {
            const Box a = sample_standard_box(rng);
            const Box b = nudge(a, mixture_offset, rng);
            inst.source_concept = box_concept(a);
            inst.target_concept = box_concept(a);
            auto coin = std::make_shared<std::bernoulli_distribution>(0.5);
            auto stream = std::make_shared<Rng>(rng());
            source_labeler = [a, b, coin, stream](const Point& x) {
                return ((*coin)(*stream) ? a : b).contains(x) ? 1 : 0;
            };
            desc << "boxes " << describe(a) << " and " << describe(b) << "; target " << describe(a);
            break;
        }
        case Challenge::inversion: {
            const Box a = sample_standard_box(rng);
            inst.source_concept = box_concept(a);
            // Positive only where every coordinate falls outside the box's interval.
            inst.target_concept = [a](const Point& x) {
                for (std::size_t i = 0; i < 3; ++i)
                    if (a.lo[i] <= x[i] && x[i] <= a.hi[i]) return 0;
                return 1;
            };
            desc << "box " << describe(a) << " inverted per axis";
            break;
        }
        case Challenge::moving: {
            const Box a = sample_standard_box(rng);
            const Box b = place(sides_of(a), rng);
            inst.source_concept = box_concept(a);
            inst.target_concept = box_concept(b);
            desc << "box " << describe(a) << " moved to " << describe(b);
            break;
        }
        case Challenge::expanding:
        case Challenge::shrinking: {
            const double factor = spec.challenge == Challenge::expanding ? 2.0 : 0.5;
            Box a;
            Box b;
            do {
                a = sample_standard_box(rng);
                b = scale_box(a, factor);
            } while (!b.inside_unit_cube());
            inst.source_concept = box_concept(a);
            inst.target_concept = box_concept(b);
            desc << "box " << describe(a) << " scaled to " << describe(b);
            break;
        }
        case Challenge::axis_swap: {
            const Box a = sample_standard_box(rng);
            std::uniform_int_distribution<int> dim(0, 2);
            const int i = dim(rng);
            int j = dim(rng);
            while (j == i) j = dim(rng);
            inst.source_concept = box_concept(a);
            inst.target_concept = [a, i, j](Point x) {
                std::swap(x[static_cast<std::size_t>(i)], x[static_cast<std::size_t>(j)]);
                return a.contains(x) ? 1 : 0;
            };
            desc << "box " << describe(a) << " with axes " << i << " and " << j << " swapped";
            break;
        }
        case Challenge::noisy_target:
        case Challenge::noisy_source: {
            const Box a = sample_standard_box(rng);
            inst.source_concept = box_concept(a);
            inst.target_concept = box_concept(a);
            (spec.challenge == Challenge::noisy_target ? target_noise : source_noise) = label_noise;
            desc << "box " << describe(a) << " with label noise " << label_noise;
            break;
        }
        case Challenge::rotated: {
            const Box a = sample_standard_box(rng);
            std::normal_distribution<double> gauss;
            Point axis{gauss(rng), gauss(rng), gauss(rng)};
            const double angle = uniform(rng, 0.0, std::numbers::pi / 2);
            const Matrix3 inverse = transpose(rotation_matrix(axis, angle));
            const Point c = a.center();
            inst.source_concept = box_concept(a);
            inst.target_concept = [a, inverse, c](const Point& x) {
                const Point local = apply(inverse, {x[0] - c[0], x[1] - c[1], x[2] - c[2]});
                return a.contains({local[0] + c[0], local[1] + c[1], local[2] + c[2]}) ? 1 : 0;
            };
            desc << "box " << describe(a) << " rotated by " << angle << " rad";
            break;
        }
        case Challenge::fisheye: {
            const Box a = sample_standard_box(rng);
            inst.source_concept = box_concept(a);
            inst.target_concept = [a](const Point& x) { return a.contains(fisheye_inverse(x)) ? 1 : 0; };
            source_domain.sample = sample_fisheye_source;
            target_domain.sample = sample_fisheye_target;
            desc << "box " << describe(a) << " under the fish-eye map";
            break;
        }
        case Challenge::refined_sine: {
            const double period = uniform(rng, 0.25, 0.5);
            const double amplitude = uniform(rng, 0.0, 0.5);
            inst.source_concept = [](const Point& x) {
                return 0.5 + 0.05 * std::sin(4 * std::numbers::pi * (x[0] + x[1])) < x[2] ? 1 : 0;
            };
            inst.target_concept = [period, amplitude](const Point& x) {
                return 0.5 + amplitude * std::sin(2 * std::numbers::pi / period * (x[0] + x[1])) < x[2] ? 1 : 0;
            };
            desc << "sine boundary, target period " << period << " amplitude " << amplitude;
            break;
        }
    }

    inst.source_train = draw(spec.source_size, source_domain, source_labeler ? source_labeler : inst.source_concept,
                             source_noise, rng);
    inst.target_train = draw(spec.target_size, target_domain, inst.target_concept, target_noise, rng);
    inst.target_test = draw(spec.test_size, target_domain, inst.target_concept, 0.0, rng);
    inst.description = desc.str();
    return inst;
}

}  // namespace rft::synth
