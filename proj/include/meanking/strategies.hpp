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

#pragma once

// Single-qubit benchmark strategies: Alice prepares one pure polarization
// state and finally performs a two-outcome projective measurement, with no
// auxiliary qubit. These set the thresholds the entangled protocol has to
// beat.

#include <array>
#include <cstdint>

#include "meanking/linalg.hpp"
#include "meanking/protocol.hpp"

namespace meanking {

/// A point on the Bloch sphere; theta in [0, pi], phi in [0, 2 pi).
/// The associated ket is cos(theta/2)|h> + e^{i phi} sin(theta/2)|v>, so the
/// z axis is h/v, the x axis is +/- and the y axis is r/l.
struct BlochDirection {
    double theta = 0.0;
    double phi = 0.0;

    StateVector ket() const;
    std::array<double, 3> vector() const;
    BlochDirection opposite() const;
    /// Wraps arbitrary angles back into the canonical ranges.
    BlochDirection canonical() const;
    static BlochDirection from_vector(double x, double y, double z);
};

struct SingleQubitStrategy {
    BlochDirection prep;
    BlochDirection meas;
};

/// (2 + 2^(-1/2))/3
double projection_game_threshold();
/// 5/6
double second_challenge_threshold();
double single_qubit_threshold(Game game);

/// Bob measures sigma_x, sigma_y or sigma_z (uniformly) with Born-rule
/// outcome; Alice measures along meas and announces, per observable, the
/// eigenstate that maximizes the joint probability for her result.
double evaluate_projection_game(const SingleQubitStrategy& s);

/// Bob applies one of the six (sigma_a +- sigma_b)/sqrt2 to the photon;
/// after learning the pair Alice announces the member with the larger
/// likelihood for her result.
double evaluate_second_challenge(const SingleQubitStrategy& s);

double evaluate(Game game, const SingleQubitStrategy& s);

struct SearchResult {
    Game game = Game::Projection;
    int resolution = 0;
    /// Best value after refinement.
    double value = 0.0;
    /// Best value on the grid alone.
    double grid_value = 0.0;
    SingleQubitStrategy argmax;
    std::uint64_t evaluations = 0;
    double runtime_ms = 0.0;
};

/// Exhaustive search over a (resolution+1) x resolution grid of directions
/// for both prep and meas, followed by golden-section refinement of the best
/// cell. Ties are broken towards the lexicographically smallest
/// (theta_prep, phi_prep, theta_meas, phi_meas). Results do not depend on
/// the worker count. Numerical evidence only, not a proof of optimality.
///
/// Throws std::invalid_argument for resolution < 64 (or < 4 when
/// allow_coarse is set, which exists for tests).
SearchResult search_optimum(Game game, int resolution, unsigned workers = 0, bool allow_coarse = false);
SearchResult search_projection_optimum(int resolution, unsigned workers = 0);
SearchResult search_second_challenge_optimum(int resolution, unsigned workers = 0);

}  // namespace meanking
