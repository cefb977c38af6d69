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

#include "meanking/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

namespace meanking {

namespace {

ModeLabel merge(const ModeLabel& a, const ModeLabel& b) {
    ModeLabel out;
    out.path = a.path ? a.path : b.path;
    out.timebin = a.timebin ? a.timebin : b.timebin;
    out.pol = a.pol ? a.pol : b.pol;
    return out;
}

void require_same(const ModeBasis& a, const ModeBasis& b, const char* what) {
    if (!(a == b)) {
        throw BasisError(std::string(what) + ": basis mismatch");
    }
}

void require_disjoint(const ModeBasis& a, const ModeBasis& b) {
    if ((a.uses_path() && b.uses_path()) || (a.uses_timebin() && b.uses_timebin()) ||
        (a.uses_polarization() && b.uses_polarization())) {
        throw BasisError("tensor: bases share a label slot");
    }
}

// Merged labels of a (x) b with the permutation into canonical order.
std::pair<ModeBasis, std::vector<std::size_t>> product_basis(const ModeBasis& a,
                                                             const ModeBasis& b) {
    std::vector<ModeLabel> raw;
    raw.reserve(a.dim() * b.dim());
    for (const auto& la : a.labels()) {
        for (const auto& lb : b.labels()) {
            raw.push_back(merge(la, lb));
        }
    }
    std::vector<std::size_t> order(raw.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return raw[i] < raw[j]; });
    std::vector<ModeLabel> sorted;
    sorted.reserve(raw.size());
    for (auto i : order) sorted.push_back(raw[i]);
    return {ModeBasis(std::move(sorted)), std::move(order)};
}

}  // namespace

std::string ModeLabel::to_string() const {
    std::ostringstream os;
    os << '(';
    bool first = true;
    auto sep = [&] {
        if (!first) os << ',';
        first = false;
    };
    if (path) {
        sep();
        os << *path;
    }
    if (timebin) {
        sep();
        if (*timebin == kEarly && !path) {
            os << 'E';
        } else if (*timebin == kLate && !path) {
            os << 'L';
        } else {
            os << 't' << *timebin;
        }
    }
    if (pol) {
        sep();
        os << (*pol == Polarization::h ? 'h' : 'v');
    }
    os << ')';
    return os.str();
}

ModeBasis::ModeBasis(std::vector<ModeLabel> labels) : labels_(std::move(labels)) {
    std::set<ModeLabel> seen;
    for (const auto& l : labels_) {
        if (!seen.insert(l).second) {
            throw BasisError("duplicate mode label " + l.to_string());
        }
    }
}

ModeBasis ModeBasis::polarization() {
    return ModeBasis({{std::nullopt, std::nullopt, Polarization::h},
                      {std::nullopt, std::nullopt, Polarization::v}});
}

ModeBasis ModeBasis::timebin() {
    return ModeBasis({{std::nullopt, kEarly, std::nullopt}, {std::nullopt, kLate, std::nullopt}});
}

ModeBasis ModeBasis::timebin_polarization() {
    return ModeBasis({{std::nullopt, kEarly, Polarization::h},
                      {std::nullopt, kEarly, Polarization::v},
                      {std::nullopt, kLate, Polarization::h},
                      {std::nullopt, kLate, Polarization::v}});
}

std::optional<std::size_t> ModeBasis::index_of(const ModeLabel& label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - labels_.begin());
}

bool ModeBasis::is_canonical() const { return std::is_sorted(labels_.begin(), labels_.end()); }

bool ModeBasis::uses_path() const {
    return std::any_of(labels_.begin(), labels_.end(), [](const auto& l) { return l.path.has_value(); });
}
bool ModeBasis::uses_timebin() const {
    return std::any_of(labels_.begin(), labels_.end(),
                       [](const auto& l) { return l.timebin.has_value(); });
}
bool ModeBasis::uses_polarization() const {
    return std::any_of(labels_.begin(), labels_.end(), [](const auto& l) { return l.pol.has_value(); });
}

StateVector::StateVector(ModeBasis basis, CVector amps) : basis_(std::move(basis)), amps_(std::move(amps)) {
    if (static_cast<std::size_t>(amps_.size()) != basis_.dim()) {
        throw BasisError("state vector: amplitude count does not match basis dimension");
    }
}

StateVector::StateVector(ModeBasis basis, std::initializer_list<Amplitude> amps)
    : StateVector(std::move(basis), Eigen::Map<const CVector>(amps.begin(),
                                                              static_cast<Eigen::Index>(amps.size()))) {}

StateVector StateVector::basis_state(const ModeBasis& basis, const ModeLabel& label) {
    auto idx = basis.index_of(label);
    if (!idx) throw BasisError("label " + label.to_string() + " not in basis");
    CVector amps = CVector::Zero(static_cast<Eigen::Index>(basis.dim()));
    amps[static_cast<Eigen::Index>(*idx)] = 1.0;
    return StateVector(basis, std::move(amps));
}

StateVector StateVector::zero(const ModeBasis& basis) {
    return StateVector(basis, CVector::Zero(static_cast<Eigen::Index>(basis.dim())));
}

Amplitude StateVector::amplitude(const ModeLabel& label) const {
    auto idx = basis_.index_of(label);
    if (!idx) throw BasisError("label " + label.to_string() + " not in basis");
    return amps_[static_cast<Eigen::Index>(*idx)];
}

bool StateVector::is_normalized(double tol) const { return std::abs(norm2() - 1.0) <= tol; }

StateVector StateVector::normalized() const {
    double n = amps_.norm();
    if (n == 0.0) throw BasisError("cannot normalize the zero vector");
    return StateVector(basis_, amps_ / n);
}

StateVector StateVector::operator+(const StateVector& other) const {
    require_same(basis_, other.basis_, "state sum");
    return StateVector(basis_, amps_ + other.amps_);
}

StateVector StateVector::operator-(const StateVector& other) const {
    require_same(basis_, other.basis_, "state difference");
    return StateVector(basis_, amps_ - other.amps_);
}

StateVector operator*(Amplitude c, const StateVector& v) { return StateVector(v.basis_, c * v.amps_); }

Operator::Operator(ModeBasis in_basis, ModeBasis out_basis, CMatrix matrix)
    : in_(std::move(in_basis)), out_(std::move(out_basis)), matrix_(std::move(matrix)) {
    if (static_cast<std::size_t>(matrix_.rows()) != out_.dim() ||
        static_cast<std::size_t>(matrix_.cols()) != in_.dim()) {
        throw BasisError("operator: matrix shape does not match bases");
    }
}

Operator Operator::identity(const ModeBasis& basis) {
    auto n = static_cast<Eigen::Index>(basis.dim());
    return Operator(basis, basis, CMatrix::Identity(n, n));
}

Operator Operator::outer(const StateVector& ket, const StateVector& bra) {
    return Operator(bra.basis(), ket.basis(), ket.amps() * bra.amps().adjoint());
}

Operator Operator::adjoint() const { return Operator(out_, in_, matrix_.adjoint()); }

double Operator::unitarity_defect() const {
    if (matrix_.rows() != matrix_.cols()) return std::numeric_limits<double>::infinity();
    CMatrix d = matrix_.adjoint() * matrix_ - CMatrix::Identity(matrix_.cols(), matrix_.cols());
    return d.cwiseAbs().maxCoeff();
}

bool Operator::is_unitary(double tol) const { return unitarity_defect() <= tol; }

bool Operator::is_hermitian(double tol) const {
    if (!(in_ == out_)) return false;
    return (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

Operator Operator::operator*(const Operator& rhs) const {
    require_same(in_, rhs.out_, "operator composition");
    return Operator(rhs.in_, out_, matrix_ * rhs.matrix_);
}

Operator Operator::operator+(const Operator& rhs) const {
    require_same(in_, rhs.in_, "operator sum");
    require_same(out_, rhs.out_, "operator sum");
    return Operator(in_, out_, matrix_ + rhs.matrix_);
}

Operator Operator::operator-(const Operator& rhs) const {
    require_same(in_, rhs.in_, "operator difference");
    require_same(out_, rhs.out_, "operator difference");
    return Operator(in_, out_, matrix_ - rhs.matrix_);
}

Operator operator*(Amplitude c, const Operator& op) { return Operator(op.in_, op.out_, c * op.matrix_); }

Amplitude inner(const StateVector& a, const StateVector& b) {
    require_same(a.basis(), b.basis(), "inner");
    return a.amps().dot(b.amps());  // Eigen's dot conjugates the left operand
}

double fidelity(const StateVector& a, const StateVector& b) { return std::norm(inner(a, b)); }

StateVector tensor(const StateVector& a, const StateVector& b) {
    require_disjoint(a.basis(), b.basis());
    auto [basis, order] = product_basis(a.basis(), b.basis());
    CVector raw(static_cast<Eigen::Index>(a.dim() * b.dim()));
    for (Eigen::Index i = 0; i < a.amps().size(); ++i) {
        for (Eigen::Index j = 0; j < b.amps().size(); ++j) {
            raw[i * b.amps().size() + j] = a.amps()[i] * b.amps()[j];
        }
    }
    CVector amps(raw.size());
    for (std::size_t k = 0; k < order.size(); ++k) {
        amps[static_cast<Eigen::Index>(k)] = raw[static_cast<Eigen::Index>(order[k])];
    }
    return StateVector(std::move(basis), std::move(amps));
}

Operator tensor(const Operator& a, const Operator& b) {
    require_disjoint(a.in_basis(), b.in_basis());
    require_disjoint(a.out_basis(), b.out_basis());
    auto [in, in_order] = product_basis(a.in_basis(), b.in_basis());
    auto [out, out_order] = product_basis(a.out_basis(), b.out_basis());
    const auto& ma = a.matrix();
    const auto& mb = b.matrix();
    CMatrix raw(ma.rows() * mb.rows(), ma.cols() * mb.cols());
    for (Eigen::Index i = 0; i < ma.rows(); ++i) {
        for (Eigen::Index j = 0; j < ma.cols(); ++j) {
            raw.block(i * mb.rows(), j * mb.cols(), mb.rows(), mb.cols()) = ma(i, j) * mb;
        }
    }
    CMatrix m(raw.rows(), raw.cols());
    for (std::size_t r = 0; r < out_order.size(); ++r) {
        for (std::size_t c = 0; c < in_order.size(); ++c) {
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                raw(static_cast<Eigen::Index>(out_order[r]), static_cast<Eigen::Index>(in_order[c]));
        }
    }
    return Operator(std::move(in), std::move(out), std::move(m));
}

StateVector apply(const Operator& op, const StateVector& v) {
    require_same(op.in_basis(), v.basis(), "apply");
    return StateVector(op.out_basis(), op.matrix() * v.amps());
}

Operator lift(const Operator& polarization_op) {
    const auto pol = ModeBasis::polarization();
    if (!(polarization_op.in_basis() == pol) || !(polarization_op.out_basis() == pol)) {
        throw BasisError("lift: operator must act on the polarization basis");
    }
    return tensor(Operator::identity(ModeBasis::timebin()), polarization_op);
}

Operator sigma_x() {
    CMatrix m(2, 2);
    m << 0, 1, 1, 0;
    return Operator(ModeBasis::polarization(), ModeBasis::polarization(), m);
}

Operator sigma_y() {
    const Amplitude i{0.0, 1.0};
    CMatrix m(2, 2);
    m << 0, -i, i, 0;
    return Operator(ModeBasis::polarization(), ModeBasis::polarization(), m);
}

Operator sigma_z() {
    CMatrix m(2, 2);
    m << 1, 0, 0, -1;
    return Operator(ModeBasis::polarization(), ModeBasis::polarization(), m);
}

double orthonormality_defect(const std::vector<StateVector>& states) {
    double worst = 0.0;
    for (std::size_t i = 0; i < states.size(); ++i) {
        for (std::size_t j = 0; j < states.size(); ++j) {
            Amplitude g = inner(states[i], states[j]);
            worst = std::max(worst, std::abs(g - (i == j ? 1.0 : 0.0)));
        }
    }
    return worst;
}

std::vector<double> born_probabilities(const StateVector& state, const std::vector<StateVector>& basis,
                                       double tol) {
    if (basis.size() != state.dim()) {
        throw BasisError("measurement basis is incomplete");
    }
    if (orthonormality_defect(basis) > tol) {
        throw BasisError("measurement basis is not orthonormal");
    }
    std::vector<double> p;
    p.reserve(basis.size());
    for (const auto& b : basis) p.push_back(std::norm(inner(b, state)));
    return p;
}

CVector canonical_phase(const CVector& v) {
    double largest = v.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v[i]) >= largest - 1e-9) {
            return v * (std::abs(v[i]) / v[i]);
        }
    }
    return v;
}

CVector null_space_vector(const std::vector<CVector>& constraints) {
    if (constraints.empty()) throw BasisError("null space: no constraints");
    const auto n = constraints.front().size();
    if (static_cast<std::size_t>(n) != constraints.size() + 1) {
        throw BasisError("null space: need exactly dim-1 constraints");
    }
    CMatrix a(static_cast<Eigen::Index>(constraints.size()), n);
    for (std::size_t r = 0; r < constraints.size(); ++r) {
        if (constraints[r].size() != n) throw BasisError("null space: ragged constraints");
        // row r of A is <c_r|, so A x = 0 means x is orthogonal to every c_r
        a.row(static_cast<Eigen::Index>(r)) = constraints[r].adjoint();
    }
    Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv[sv.size() - 1] < 1e-9 * sv[0]) {
        throw BasisError("null space: constraints are linearly dependent");
    }
    CVector x = svd.matrixV().col(n - 1);
    return canonical_phase(x.normalized());
}

}  // namespace meanking
