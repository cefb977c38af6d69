// Copyright 2026 The meanking Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <array>

#include "generators.hpp"
#include "meanking/strategies.hpp"

namespace meanking {
namespace {

using testing::Gen;
using testing::kDraws;
using Vec3 = std::array<double, 3>;

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

// Bloch-vector oracles, written without state vectors.
//
// Projection game: Bob measures axis e, gets s = +-1 with (1 + s n_p.e)/2 and
// leaves the eigenstate s e; Alice's measurement along n_m then reads t with
// (1 + t s n_m.e)/2. Alice picks the likelier s for each t.
double projection_oracle(const Vec3& np, const Vec3& nm) {
    double total = 0.0;
    for (int axis = 0; axis < 3; ++axis) {
        Vec3 e{};
        e[static_cast<std::size_t>(axis)] = 1.0;
        for (int t : {1, -1}) {
            double best = 0.0;
            for (int s : {1, -1}) best = std::max(best, (1 + s * dot(np, e)) / 2 * (1 + t * s * dot(nm, e)) / 2);
            total += best;
        }
    }
    return total / 3.0;
}

// Second Challenge: (sa +- sb)/sqrt2 is a pi rotation about (ea +- eb)/sqrt2,
// n -> 2 (k.n) k - n. Within a pair Alice's best guess succeeds with
// 1/2 + |n_m.(s1 - s2)|/4.
double challenge_oracle(const Vec3& np, const Vec3& nm) {
    auto rotate = [&](int a, int b, double sign) {
        Vec3 k{};
        k[static_cast<std::size_t>(a)] = M_SQRT1_2;
        k[static_cast<std::size_t>(b)] = sign * M_SQRT1_2;
        const double kn = dot(k, np);
        return Vec3{2 * kn * k[0] - np[0], 2 * kn * k[1] - np[1], 2 * kn * k[2] - np[2]};
    };
    double total = 0.0;
    for (auto [a, b] : {std::pair{0, 1}, std::pair{1, 2}, std::pair{2, 0}}) {
        const auto s1 = rotate(a, b, 1.0), s2 = rotate(a, b, -1.0);
        total += 0.5 + std::abs(dot(nm, Vec3{s1[0] - s2[0], s1[1] - s2[1], s1[2] - s2[2]})) / 4.0;
    }
    return total / 3.0;
}

SingleQubitStrategy random_strategy(Gen& g) {
    return {{g.uniform(0, M_PI), g.uniform(0, 2 * M_PI)}, {g.uniform(0, M_PI), g.uniform(0, 2 * M_PI)}};
}

TEST(Thresholds, PublishedValues) {
    EXPECT_NEAR(projection_game_threshold(), 0.902, 5e-4);
    EXPECT_NEAR(projection_game_threshold(), (2.0 + std::pow(2.0, -0.5)) / 3.0, 1e-15);
    EXPECT_NEAR(second_challenge_threshold(), 5.0 / 6.0, 1e-15);
    EXPECT_NEAR(second_challenge_threshold(), 0.833, 5e-4);
}

TEST(Evaluate, ExplicitOptimalStrategy) {
    // prepare r, measure along x+z
    const SingleQubitStrategy s{{M_PI / 2, M_PI / 2}, {M_PI / 4, 0.0}};
    EXPECT_NEAR(evaluate_projection_game(s), projection_game_threshold(), 1e-12);
    const auto r = s.prep.ket();
    EXPECT_NEAR(fidelity(r, polarization_ket(ProjectionLabel::r)), 1.0, 1e-12);
}

TEST(EvaluateProperty, ProjectionMatchesBlochOracle) {
    Gen g(31);
    for (int i = 0; i < kDraws; ++i) {
        const auto s = random_strategy(g);
        EXPECT_NEAR(evaluate_projection_game(s), projection_oracle(s.prep.vector(), s.meas.vector()), 1e-12);
    }
}

TEST(EvaluateProperty, ChallengeMatchesBlochOracle) {
    Gen g(32);
    for (int i = 0; i < kDraws; ++i) {
        const auto s = random_strategy(g);
        EXPECT_NEAR(evaluate_second_challenge(s), challenge_oracle(s.prep.vector(), s.meas.vector()), 1e-12);
    }
}

TEST(EvaluateProperty, NeverBeatsTheThreshold) {
    Gen g(33);
    for (int i = 0; i < 5 * kDraws; ++i) {
        const auto s = random_strategy(g);
        EXPECT_LE(evaluate(Game::Projection, s), projection_game_threshold() + 1e-12);
        EXPECT_LE(evaluate(Game::SecondChallenge, s), second_challenge_threshold() + 1e-12);
        EXPECT_GE(evaluate(Game::Projection, s), 0.5 - 1e-12);
    }
}

TEST(Bloch, KetMatchesVector) {
    Gen g(34);
    for (int i = 0; i < kDraws; ++i) {
        const BlochDirection d{g.uniform(0, M_PI), g.uniform(0, 2 * M_PI)};
        const auto k = d.ket();
        const auto n = d.vector();
        // <sigma> for the ket equals the Bloch vector
        EXPECT_NEAR(inner(k, apply(sigma_x(), k)).real(), n[0], 1e-12);
        EXPECT_NEAR(inner(k, apply(sigma_y(), k)).real(), n[1], 1e-12);
        EXPECT_NEAR(inner(k, apply(sigma_z(), k)).real(), n[2], 1e-12);
        EXPECT_NEAR(std::abs(inner(k, d.opposite().ket())), 0.0, 1e-12);
        const auto back = BlochDirection::from_vector(n[0], n[1], n[2]);
        EXPECT_NEAR(fidelity(back.ket(), k), 1.0, 1e-12);
    }
}

TEST(Bloch, CanonicalWrapsAngles) {
    const auto c = BlochDirection{3 * M_PI / 2, -M_PI / 2}.canonical();
    EXPECT_NEAR(c.theta, M_PI / 2, 1e-12);
    EXPECT_NEAR(c.phi, M_PI / 2, 1e-12);
    EXPECT_NEAR(fidelity(c.ket(), BlochDirection{3 * M_PI / 2, -M_PI / 2}.ket()), 1.0, 1e-12);
    EXPECT_THROW(BlochDirection::from_vector(0, 0, 0), std::invalid_argument);
}

TEST(Search, CoarseGridRecoversBothThresholds) {
    const auto p = search_optimum(Game::Projection, 64, 1);
    EXPECT_NEAR(p.value, projection_game_threshold(), 1e-6);
    EXPECT_GE(p.value, p.grid_value);
    EXPECT_NEAR(evaluate_projection_game(p.argmax), p.value, 1e-12);
    const auto c = search_optimum(Game::SecondChallenge, 64, 1);
    EXPECT_NEAR(c.value, second_challenge_threshold(), 1e-6);
    EXPECT_NEAR(evaluate_second_challenge(c.argmax), c.value, 1e-12);
    EXPECT_NEAR(challenge_oracle(c.argmax.prep.vector(), c.argmax.meas.vector()), c.value, 1e-12);
    EXPECT_NEAR(projection_oracle(p.argmax.prep.vector(), p.argmax.meas.vector()), p.value, 1e-12);
}

TEST(Search, ResultIndependentOfWorkers) {
    const auto a = search_optimum(Game::Projection, 8, 1, true);
    const auto b = search_optimum(Game::Projection, 8, 3, true);
    EXPECT_EQ(a.value, b.value);
    EXPECT_EQ(a.grid_value, b.grid_value);
    EXPECT_EQ(a.argmax.prep.theta, b.argmax.prep.theta);
    EXPECT_EQ(a.argmax.meas.phi, b.argmax.meas.phi);
    EXPECT_EQ(a.evaluations, b.evaluations);
}

TEST(Search, RejectsLowResolution) {
    EXPECT_THROW(search_optimum(Game::Projection, 32), std::invalid_argument);
    EXPECT_THROW(search_optimum(Game::Projection, 2, 1, true), std::invalid_argument);
}

}  // namespace
}  // namespace meanking
