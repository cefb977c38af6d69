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

// The abstract retrodiction protocol on the time-bin (x) polarization space:
// Alice's entangled preparation, Bob's six projections or six unitaries, the
// four-outcome VAA measurement and Alice's inference.
//
// Phase conventions for the polarization kets:
//   |+> = (|h> + |v>)/sqrt2     |-> = (|h> - |v>)/sqrt2
//   |r> = (|h> + i|v>)/sqrt2    |l> = (|h> - i|v>)/sqrt2
// so that sigma_x|+> = |+>, sigma_y|r> = |r>, sigma_z|h> = |h>.

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "meanking/linalg.hpp"

namespace meanking {

enum class ProjectionLabel : unsigned char { plus, minus, r, l, h, v };
enum class ObservablePair : unsigned char { X, Y, Z, XY, YZ, ZX };
enum class UnitaryLabel : unsigned char { x_plus_y, x_minus_y, y_plus_z, y_minus_z, z_plus_x, z_minus_x };
enum class VaaVariant : unsigned char { First, Second };
/// Which game Bob plays: one of six projections, or one of six unitaries
/// announced later as a pair (the Second Challenge).
enum class Game : unsigned char { Projection, SecondChallenge };

inline constexpr std::array<ProjectionLabel, 6> kProjectionLabels = {
    ProjectionLabel::plus, ProjectionLabel::minus, ProjectionLabel::r,
    ProjectionLabel::l,    ProjectionLabel::h,     ProjectionLabel::v};
inline constexpr std::array<UnitaryLabel, 6> kUnitaryLabels = {
    UnitaryLabel::x_plus_y, UnitaryLabel::x_minus_y, UnitaryLabel::y_plus_z,
    UnitaryLabel::y_minus_z, UnitaryLabel::z_plus_x, UnitaryLabel::z_minus_x};
inline constexpr std::array<ObservablePair, 3> kObservablePairs = {ObservablePair::X, ObservablePair::Y,
                                                                   ObservablePair::Z};
inline constexpr std::array<ObservablePair, 3> kChallengePairs = {ObservablePair::XY, ObservablePair::YZ,
                                                                  ObservablePair::ZX};
inline constexpr std::array<VaaVariant, 2> kVaaVariants = {VaaVariant::First, VaaVariant::Second};

/// A VAA outcome is named by its answer triple, e.g. "+lv" answers plus for
/// sigma_x, l for sigma_y and v for sigma_z.
struct VaaOutcome {
    ProjectionLabel x = ProjectionLabel::plus;
    ProjectionLabel y = ProjectionLabel::r;
    ProjectionLabel z = ProjectionLabel::h;

    bool operator==(const VaaOutcome&) const = default;
    auto operator<=>(const VaaOutcome&) const = default;
};

struct ProjectionOutcome {
    double probability = 0.0;
    /// Absent when the projection fails with certainty.
    std::optional<StateVector> post_state;
};

struct VaaBasis {
    VaaVariant variant;
    std::array<VaaOutcome, 4> outcomes;
    std::array<StateVector, 4> states;

    std::vector<StateVector> state_list() const { return {states.begin(), states.end()}; }
    std::size_t index_of(const VaaOutcome& o) const;
};

class ProtocolError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// Names and parsing. Parsers throw ProtocolError on unknown input.
std::string_view to_string(ProjectionLabel label);
std::string_view to_string(ObservablePair pair);
std::string_view to_string(UnitaryLabel label);
std::string_view to_string(VaaVariant variant);
std::string_view to_string(Game game);
std::string to_string(const VaaOutcome& outcome);
ProjectionLabel parse_projection_label(std::string_view text);
ObservablePair parse_observable_pair(std::string_view text);
UnitaryLabel parse_unitary_label(std::string_view text);
VaaVariant parse_vaa_variant(std::string_view text);
/// Accepts "projection", "challenge" or "second-challenge".
Game parse_game(std::string_view text);
VaaOutcome parse_vaa_outcome(std::string_view text);

ObservablePair pair_of(ProjectionLabel label);
ObservablePair pair_of(UnitaryLabel label);
ProjectionLabel complement(ProjectionLabel label);
UnitaryLabel partner(UnitaryLabel label);
std::array<ProjectionLabel, 2> members(ObservablePair pair);
std::array<UnitaryLabel, 2> challenge_members(ObservablePair pair);

/// Single-qubit polarization eigenstate on the (h, v) basis.
StateVector polarization_ket(ProjectionLabel label);
/// Single-qubit time-bin basis state.
StateVector timebin_ket(int timebin);

/// 2^(-1/2) (|E,h> + |L,v>)
StateVector init_state();

/// The normalized post-projection states |'+'>, |'-'>, |'r'>, |'l'>, |'h'>, |'v'>.
StateVector projected_state(ProjectionLabel label);

/// Rank-one projection onto projected_state(label). Throws ProtocolError for
/// an unnormalized or wrongly-shaped input.
ProjectionOutcome project(const StateVector& state, ProjectionLabel label);

/// Both VAA bases. The first is the explicit four-state basis with the
/// i^(+-1/2) amplitudes; the second is built by solving, for each of its four
/// triples, the three orthogonality constraints against the complementary
/// projected states.
const VaaBasis& vaa_basis(VaaVariant variant);

/// The four states of one variant in the order given by its outcome list.
std::array<VaaOutcome, 4> vaa_outcomes(VaaVariant variant);

/// Constructs the VAA state for an arbitrary answer triple by null-space
/// solving (works for the triples of either basis).
StateVector vaa_state_from_constraints(const VaaOutcome& outcome);

std::array<double, 4> measure_in_basis(const StateVector& state, const VaaBasis& basis);
std::vector<double> measure_in_basis(const StateVector& state, const std::vector<StateVector>& basis);

/// The component of the outcome's answer triple for a single-observable pair.
ProjectionLabel alice_answer(const VaaOutcome& outcome, ObservablePair pair);

/// (sigma_a +- sigma_b)/sqrt2 on polarization alone.
Operator challenge_polarization_unitary(UnitaryLabel label);
/// lift(challenge_polarization_unitary(label)).
Operator challenge_unitary(UnitaryLabel label);
/// challenge_unitary(label) applied to init_state().
StateVector challenge_post_state(UnitaryLabel label);

/// Second Challenge inference data for one VAA variant.
///
/// Built by evaluating measure_in_basis on all six post-states. Within each
/// pair the two post-states must have disjoint outcome supports; otherwise
/// construction throws ProtocolError.
class ChallengeInferenceTable {
  public:
    explicit ChallengeInferenceTable(VaaVariant variant);

    VaaVariant variant() const { return variant_; }
    UnitaryLabel infer(const VaaOutcome& outcome, ObservablePair pair) const;
    /// Outcomes with nonzero probability for the given unitary.
    const std::vector<VaaOutcome>& support(UnitaryLabel label) const;

  private:
    VaaVariant variant_;
    std::map<std::pair<VaaOutcome, ObservablePair>, UnitaryLabel> table_;
    std::map<UnitaryLabel, std::vector<VaaOutcome>> support_;
};

const ChallengeInferenceTable& challenge_table(VaaVariant variant);
UnitaryLabel challenge_infer(const VaaOutcome& outcome, ObservablePair pair,
                             VaaVariant variant = VaaVariant::First);

}  // namespace meanking
