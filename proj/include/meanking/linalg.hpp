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

// Dense complex linear algebra over labeled mode bases.
//
// Every state and operator in this library lives on a ModeBasis: an ordered
// list of mode labels, each a tuple (path?, timebin?, polarization?) where any
// slot may be absent. The canonical label order compares path first, then
// timebin, then polarization, with an absent slot ordered before a present
// one. For the two-qubit space this gives (E,h), (E,v), (L,h), (L,v).

#include <complex>
#include <compare>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace meanking {

using Amplitude = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

inline constexpr double kUnitTolerance = 1e-12;

enum class Polarization : unsigned char { h = 0, v = 1 };

/// Time-bin index of the early and late arrival slots.
inline constexpr int kEarly = 0;
inline constexpr int kLate = 1;

struct ModeLabel {
    std::optional<std::string> path;
    std::optional<int> timebin;
    std::optional<Polarization> pol;

    auto operator<=>(const ModeLabel&) const = default;
    bool operator==(const ModeLabel&) const = default;

    std::string to_string() const;
};

/// Raised for any basis mismatch, malformed basis or precondition failure in
/// the linear-algebra layer.
class BasisError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

class ModeBasis {
  public:
    ModeBasis() = default;
    explicit ModeBasis(std::vector<ModeLabel> labels);

    static ModeBasis polarization();
    static ModeBasis timebin();
    static ModeBasis timebin_polarization();

    std::size_t dim() const { return labels_.size(); }
    const ModeLabel& operator[](std::size_t i) const { return labels_[i]; }
    const std::vector<ModeLabel>& labels() const { return labels_; }
    std::optional<std::size_t> index_of(const ModeLabel& label) const;

    /// True if the labels are sorted in canonical order.
    bool is_canonical() const;

    bool uses_path() const;
    bool uses_timebin() const;
    bool uses_polarization() const;

    bool operator==(const ModeBasis&) const = default;

  private:
    std::vector<ModeLabel> labels_;
};

class StateVector {
  public:
    StateVector() = default;
    StateVector(ModeBasis basis, CVector amps);
    StateVector(ModeBasis basis, std::initializer_list<Amplitude> amps);

    static StateVector basis_state(const ModeBasis& basis, const ModeLabel& label);
    static StateVector zero(const ModeBasis& basis);

    const ModeBasis& basis() const { return basis_; }
    const CVector& amps() const { return amps_; }
    std::size_t dim() const { return basis_.dim(); }
    Amplitude operator[](std::size_t i) const { return amps_[static_cast<Eigen::Index>(i)]; }
    Amplitude amplitude(const ModeLabel& label) const;

    double norm2() const { return amps_.squaredNorm(); }
    bool is_normalized(double tol = kUnitTolerance) const;
    /// Throws BasisError for the zero vector.
    StateVector normalized() const;

    StateVector operator+(const StateVector& other) const;
    StateVector operator-(const StateVector& other) const;
    friend StateVector operator*(Amplitude c, const StateVector& v);

  private:
    ModeBasis basis_;
    CVector amps_;
};

class Operator {
  public:
    Operator() = default;
    Operator(ModeBasis in_basis, ModeBasis out_basis, CMatrix matrix);

    static Operator identity(const ModeBasis& basis);
    /// |ket><bra|
    static Operator outer(const StateVector& ket, const StateVector& bra);

    const ModeBasis& in_basis() const { return in_; }
    const ModeBasis& out_basis() const { return out_; }
    const CMatrix& matrix() const { return matrix_; }

    Operator adjoint() const;
    bool is_unitary(double tol = kUnitTolerance) const;
    bool is_hermitian(double tol = kUnitTolerance) const;
    /// max |(U^dagger U - I)_ij|
    double unitarity_defect() const;

    Operator operator*(const Operator& rhs) const;  // composition: (*this) after rhs
    Operator operator+(const Operator& rhs) const;
    Operator operator-(const Operator& rhs) const;
    friend Operator operator*(Amplitude c, const Operator& op);

  private:
    ModeBasis in_;
    ModeBasis out_;
    CMatrix matrix_;
};

/// <a|b>, antilinear in the first argument.
Amplitude inner(const StateVector& a, const StateVector& b);

/// |<a|b>|^2 for normalized arguments; phase-insensitive comparison.
double fidelity(const StateVector& a, const StateVector& b);

/// Product state on the merged basis, sorted into canonical order. The two
/// bases must not share a label slot.
StateVector tensor(const StateVector& a, const StateVector& b);
Operator tensor(const Operator& a, const Operator& b);

StateVector apply(const Operator& op, const StateVector& v);

/// identity(timebin) (x) op for a 2x2 polarization operator.
Operator lift(const Operator& polarization_op);

/// Pauli operators on the (h, v) polarization basis.
Operator sigma_x();
Operator sigma_y();
Operator sigma_z();

/// Max |G_ij - delta_ij| over the Gram matrix of the given states.
double orthonormality_defect(const std::vector<StateVector>& states);

/// Probabilities |<b_i|state>|^2 over a complete orthonormal basis.
/// Throws BasisError if the basis is not orthonormal and complete.
std::vector<double> born_probabilities(const StateVector& state,
                                       const std::vector<StateVector>& basis,
                                       double tol = 1e-9);

/// Unit vector orthogonal to every constraint vector (dimension must be
/// constraints + 1 and the constraints linearly independent). Phase fixed so
/// the first amplitude within 1e-9 of the largest modulus is real positive.
CVector null_space_vector(const std::vector<CVector>& constraints);

/// Multiplies by the unit phase that makes the first near-maximal amplitude
/// real and positive.
CVector canonical_phase(const CVector& v);

}  // namespace meanking
