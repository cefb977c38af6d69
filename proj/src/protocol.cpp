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

#include "meanking/protocol.hpp"

#include <algorithm>
#include <cmath>

namespace meanking {

namespace {

constexpr double kSupportTolerance = 1e-12;
const Amplitude kI{0.0, 1.0};

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

bool is_x(ProjectionLabel l) { return l == ProjectionLabel::plus || l == ProjectionLabel::minus; }
bool is_y(ProjectionLabel l) { return l == ProjectionLabel::r || l == ProjectionLabel::l; }
bool is_z(ProjectionLabel l) { return l == ProjectionLabel::h || l == ProjectionLabel::v; }

StateVector product(int timebin, ProjectionLabel pol) { return tensor(timebin_ket(timebin), polarization_ket(pol)); }

VaaBasis make_first_basis() {
    // i^(+1/2) = (1+i)/sqrt2, i^(-1/2) = (1-i)/sqrt2
    const Amplitude w{kInvSqrt2, kInvSqrt2};
    const Amplitude wb{kInvSqrt2, -kInvSqrt2};
    const auto b = ModeBasis::timebin_polarization();
    VaaBasis basis{VaaVariant::First,
                   vaa_outcomes(VaaVariant::First),
                   {StateVector(b, {kInvSqrt2, 0.5 * w, 0.5 * wb, 0.0}),
                    StateVector(b, {0.0, 0.5 * wb, 0.5 * w, kInvSqrt2}),
                    StateVector(b, {0.0, -0.5 * wb, -0.5 * w, kInvSqrt2}),
                    StateVector(b, {kInvSqrt2, -0.5 * w, -0.5 * wb, 0.0})}};
    return basis;
}

VaaBasis make_second_basis() {
    const auto outcomes = vaa_outcomes(VaaVariant::Second);
    VaaBasis basis{VaaVariant::Second, outcomes, {}};
    for (std::size_t k = 0; k < 4; ++k) basis.states[k] = vaa_state_from_constraints(outcomes[k]);
    if (orthonormality_defect(basis.state_list()) > kUnitTolerance) {
        throw ProtocolError("second VAA basis is not orthonormal");
    }
    return basis;
}

}  // namespace

std::size_t VaaBasis::index_of(const VaaOutcome& o) const {
    for (std::size_t k = 0; k < outcomes.size(); ++k) {
        if (outcomes[k] == o) return k;
    }
    throw ProtocolError("outcome " + to_string(o) + " is not in the " + std::string(to_string(variant)) +
                        " VAA basis");
}

std::string_view to_string(ProjectionLabel label) {
    switch (label) {
        case ProjectionLabel::plus: return "plus";
        case ProjectionLabel::minus: return "minus";
        case ProjectionLabel::r: return "r";
        case ProjectionLabel::l: return "l";
        case ProjectionLabel::h: return "h";
        case ProjectionLabel::v: return "v";
    }
    return "?";
}

std::string_view to_string(ObservablePair pair) {
    switch (pair) {
        case ObservablePair::X: return "X";
        case ObservablePair::Y: return "Y";
        case ObservablePair::Z: return "Z";
        case ObservablePair::XY: return "XY";
        case ObservablePair::YZ: return "YZ";
        case ObservablePair::ZX: return "ZX";
    }
    return "?";
}

std::string_view to_string(UnitaryLabel label) {
    switch (label) {
        case UnitaryLabel::x_plus_y: return "x+y";
        case UnitaryLabel::x_minus_y: return "x-y";
        case UnitaryLabel::y_plus_z: return "y+z";
        case UnitaryLabel::y_minus_z: return "y-z";
        case UnitaryLabel::z_plus_x: return "z+x";
        case UnitaryLabel::z_minus_x: return "z-x";
    }
    return "?";
}

std::string_view to_string(VaaVariant variant) { return variant == VaaVariant::First ? "first" : "second"; }

std::string to_string(const VaaOutcome& o) {
    std::string s;
    s += o.x == ProjectionLabel::plus ? '+' : '-';
    s += to_string(o.y);
    s += to_string(o.z);
    return s;
}

ProjectionLabel parse_projection_label(std::string_view text) {
    if (text == "+") return ProjectionLabel::plus;
    if (text == "-") return ProjectionLabel::minus;
    for (auto l : kProjectionLabels) {
        if (text == to_string(l)) return l;
    }
    throw ProtocolError("unknown projection label '" + std::string(text) + "'");
}

ObservablePair parse_observable_pair(std::string_view text) {
    for (auto p : {ObservablePair::X, ObservablePair::Y, ObservablePair::Z, ObservablePair::XY,
                   ObservablePair::YZ, ObservablePair::ZX}) {
        if (text == to_string(p)) return p;
    }
    throw ProtocolError("unknown observable pair '" + std::string(text) + "'");
}

UnitaryLabel parse_unitary_label(std::string_view text) {
    for (auto u : kUnitaryLabels) {
        if (text == to_string(u)) return u;
    }
    throw ProtocolError("unknown unitary label '" + std::string(text) + "'");
}

VaaVariant parse_vaa_variant(std::string_view text) {
    if (text == "first") return VaaVariant::First;
    if (text == "second") return VaaVariant::Second;
    throw ProtocolError("unknown VAA variant '" + std::string(text) + "'");
}

std::string_view to_string(Game game) {
    return game == Game::Projection ? "projection" : "second-challenge";
}

Game parse_game(std::string_view text) {
    if (text == "projection") return Game::Projection;
    if (text == "challenge" || text == "second-challenge") return Game::SecondChallenge;
    throw ProtocolError("unknown game '" + std::string(text) + "'");
}

VaaOutcome parse_vaa_outcome(std::string_view text) {
    std::string t(text);
    // accept the typographic minus sign
    if (t.rfind("−", 0) == 0) t = "-" + t.substr(3);
    if (t.size() != 3 || (t[0] != '+' && t[0] != '-')) {
        throw ProtocolError("malformed VAA outcome '" + std::string(text) + "'");
    }
    VaaOutcome o;
    o.x = t[0] == '+' ? ProjectionLabel::plus : ProjectionLabel::minus;
    o.y = parse_projection_label(t.substr(1, 1));
    o.z = parse_projection_label(t.substr(2, 1));
    if (!is_y(o.y) || !is_z(o.z)) {
        throw ProtocolError("malformed VAA outcome '" + std::string(text) + "'");
    }
    return o;
}

ObservablePair pair_of(ProjectionLabel label) {
    if (is_x(label)) return ObservablePair::X;
    if (is_y(label)) return ObservablePair::Y;
    return ObservablePair::Z;
}

ObservablePair pair_of(UnitaryLabel label) {
    switch (label) {
        case UnitaryLabel::x_plus_y:
        case UnitaryLabel::x_minus_y: return ObservablePair::XY;
        case UnitaryLabel::y_plus_z:
        case UnitaryLabel::y_minus_z: return ObservablePair::YZ;
        default: return ObservablePair::ZX;
    }
}

ProjectionLabel complement(ProjectionLabel label) {
    switch (label) {
        case ProjectionLabel::plus: return ProjectionLabel::minus;
        case ProjectionLabel::minus: return ProjectionLabel::plus;
        case ProjectionLabel::r: return ProjectionLabel::l;
        case ProjectionLabel::l: return ProjectionLabel::r;
        case ProjectionLabel::h: return ProjectionLabel::v;
        case ProjectionLabel::v: return ProjectionLabel::h;
    }
    return label;
}

UnitaryLabel partner(UnitaryLabel label) {
    auto m = challenge_members(pair_of(label));
    return m[0] == label ? m[1] : m[0];
}

std::array<ProjectionLabel, 2> members(ObservablePair pair) {
    switch (pair) {
        case ObservablePair::X: return {ProjectionLabel::plus, ProjectionLabel::minus};
        case ObservablePair::Y: return {ProjectionLabel::r, ProjectionLabel::l};
        case ObservablePair::Z: return {ProjectionLabel::h, ProjectionLabel::v};
        default: throw ProtocolError("members: not a single-observable pair");
    }
}

std::array<UnitaryLabel, 2> challenge_members(ObservablePair pair) {
    switch (pair) {
        case ObservablePair::XY: return {UnitaryLabel::x_plus_y, UnitaryLabel::x_minus_y};
        case ObservablePair::YZ: return {UnitaryLabel::y_plus_z, UnitaryLabel::y_minus_z};
        case ObservablePair::ZX: return {UnitaryLabel::z_plus_x, UnitaryLabel::z_minus_x};
        default: throw ProtocolError("challenge_members: not a Second Challenge pair");
    }
}

StateVector polarization_ket(ProjectionLabel label) {
    const auto b = ModeBasis::polarization();
    switch (label) {
        case ProjectionLabel::h: return StateVector(b, {1.0, 0.0});
        case ProjectionLabel::v: return StateVector(b, {0.0, 1.0});
        case ProjectionLabel::plus: return StateVector(b, {kInvSqrt2, kInvSqrt2});
        case ProjectionLabel::minus: return StateVector(b, {kInvSqrt2, -kInvSqrt2});
        case ProjectionLabel::r: return StateVector(b, {kInvSqrt2, kI * kInvSqrt2});
        case ProjectionLabel::l: return StateVector(b, {kInvSqrt2, -kI * kInvSqrt2});
    }
    throw ProtocolError("polarization_ket: bad label");
}

StateVector timebin_ket(int timebin) {
    return StateVector::basis_state(ModeBasis::timebin(), ModeLabel{std::nullopt, timebin, std::nullopt});
}

StateVector init_state() {
    return kInvSqrt2 * (product(kEarly, ProjectionLabel::h) + product(kLate, ProjectionLabel::v));
}

StateVector projected_state(ProjectionLabel label) {
    using P = ProjectionLabel;
    switch (label) {
        case P::plus: return kInvSqrt2 * (product(kEarly, P::plus) + product(kLate, P::plus));
        case P::minus: return kInvSqrt2 * (product(kEarly, P::minus) - product(kLate, P::minus));
        case P::r: return kInvSqrt2 * (product(kEarly, P::r) - kI * product(kLate, P::r));
        case P::l: return kInvSqrt2 * (product(kEarly, P::l) + kI * product(kLate, P::l));
        case P::h: return product(kEarly, P::h);
        case P::v: return product(kLate, P::v);
    }
    throw ProtocolError("projected_state: bad label");
}

ProjectionOutcome project(const StateVector& state, ProjectionLabel label) {
    if (!(state.basis() == ModeBasis::timebin_polarization())) {
        throw ProtocolError("project: state must live on the time-bin (x) polarization basis");
    }
    if (!state.is_normalized()) throw ProtocolError("project: input state is not normalized");
    auto target = projected_state(label);
    ProjectionOutcome out;
    out.probability = fidelity(target, state);
    if (out.probability > kSupportTolerance) out.post_state = std::move(target);
    return out;
}

std::array<VaaOutcome, 4> vaa_outcomes(VaaVariant variant) {
    using P = ProjectionLabel;
    if (variant == VaaVariant::First) {
        return {VaaOutcome{P::plus, P::r, P::h}, VaaOutcome{P::plus, P::l, P::v},
                VaaOutcome{P::minus, P::r, P::v}, VaaOutcome{P::minus, P::l, P::h}};
    }
    return {VaaOutcome{P::minus, P::l, P::v}, VaaOutcome{P::minus, P::r, P::h},
            VaaOutcome{P::plus, P::l, P::h}, VaaOutcome{P::plus, P::r, P::v}};
}

StateVector vaa_state_from_constraints(const VaaOutcome& o) {
    std::vector<CVector> constraints = {projected_state(complement(o.x)).amps(),
                                        projected_state(complement(o.y)).amps(),
                                        projected_state(complement(o.z)).amps()};
    return StateVector(ModeBasis::timebin_polarization(), null_space_vector(constraints));
}

const VaaBasis& vaa_basis(VaaVariant variant) {
    static const VaaBasis first = make_first_basis();
    static const VaaBasis second = make_second_basis();
    return variant == VaaVariant::First ? first : second;
}

std::vector<double> measure_in_basis(const StateVector& state, const std::vector<StateVector>& basis) {
    if (!state.is_normalized()) throw ProtocolError("measure_in_basis: input state is not normalized");
    try {
        return born_probabilities(state, basis, kUnitTolerance);
    } catch (const BasisError& e) {
        throw ProtocolError(std::string("measure_in_basis: ") + e.what());
    }
}

std::array<double, 4> measure_in_basis(const StateVector& state, const VaaBasis& basis) {
    auto p = measure_in_basis(state, basis.state_list());
    return {p[0], p[1], p[2], p[3]};
}

ProjectionLabel alice_answer(const VaaOutcome& outcome, ObservablePair pair) {
    switch (pair) {
        case ObservablePair::X: return outcome.x;
        case ObservablePair::Y: return outcome.y;
        case ObservablePair::Z: return outcome.z;
        default: throw ProtocolError("alice_answer: pair must be X, Y or Z");
    }
}

Operator challenge_polarization_unitary(UnitaryLabel label) {
    const Amplitude s = kInvSqrt2;
    switch (label) {
        case UnitaryLabel::x_plus_y: return s * (sigma_x() + sigma_y());
        case UnitaryLabel::x_minus_y: return s * (sigma_x() - sigma_y());
        case UnitaryLabel::y_plus_z: return s * (sigma_y() + sigma_z());
        case UnitaryLabel::y_minus_z: return s * (sigma_y() - sigma_z());
        case UnitaryLabel::z_plus_x: return s * (sigma_z() + sigma_x());
        case UnitaryLabel::z_minus_x: return s * (sigma_z() - sigma_x());
    }
    throw ProtocolError("challenge_polarization_unitary: bad label");
}

Operator challenge_unitary(UnitaryLabel label) { return lift(challenge_polarization_unitary(label)); }

StateVector challenge_post_state(UnitaryLabel label) { return apply(challenge_unitary(label), init_state()); }

ChallengeInferenceTable::ChallengeInferenceTable(VaaVariant variant) : variant_(variant) {
    const auto& basis = vaa_basis(variant);
    for (auto u : kUnitaryLabels) {
        auto p = measure_in_basis(challenge_post_state(u), basis);
        auto& sup = support_[u];
        for (std::size_t k = 0; k < 4; ++k) {
            if (p[k] > kSupportTolerance) sup.push_back(basis.outcomes[k]);
        }
    }
    for (auto pair : kChallengePairs) {
        auto [a, b] = challenge_members(pair);
        for (const auto& o : basis.outcomes) {
            const auto& sa = support_.at(a);
            const auto& sb = support_.at(b);
            bool in_a = std::find(sa.begin(), sa.end(), o) != sa.end();
            bool in_b = std::find(sb.begin(), sb.end(), o) != sb.end();
            if (in_a == in_b) {
                throw ProtocolError("Second Challenge outcome " + to_string(o) + " is ambiguous for pair " +
                                    std::string(to_string(pair)));
            }
            table_[{o, pair}] = in_a ? a : b;
        }
    }
}

UnitaryLabel ChallengeInferenceTable::infer(const VaaOutcome& outcome, ObservablePair pair) const {
    auto it = table_.find({outcome, pair});
    if (it == table_.end()) {
        throw ProtocolError("no inference for outcome " + to_string(outcome) + " and pair " +
                            std::string(to_string(pair)));
    }
    return it->second;
}

const std::vector<VaaOutcome>& ChallengeInferenceTable::support(UnitaryLabel label) const {
    return support_.at(label);
}

const ChallengeInferenceTable& challenge_table(VaaVariant variant) {
    static const ChallengeInferenceTable first(VaaVariant::First);
    static const ChallengeInferenceTable second(VaaVariant::Second);
    return variant == VaaVariant::First ? first : second;
}

UnitaryLabel challenge_infer(const VaaOutcome& outcome, ObservablePair pair, VaaVariant variant) {
    return challenge_table(variant).infer(outcome, pair);
}

}  // namespace meanking
