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

#include "meanking/optics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

namespace meanking {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDeg = kPi / 180.0;
constexpr double kElementTolerance = 1e-12;

const Amplitude kI{0.0, 1.0};

ModeBasis port_basis(const std::vector<std::string>& paths) {
    std::vector<ModeLabel> labels;
    for (const auto& p : paths) {
        labels.push_back({p, std::nullopt, Polarization::h});
        labels.push_back({p, std::nullopt, Polarization::v});
    }
    return ModeBasis(std::move(labels));
}

OpticalElement single_port(ElementKind kind, std::string name, std::string from, std::string to) {
    OpticalElement e;
    e.kind = kind;
    e.name = std::move(name);
    e.inputs = {std::move(from)};
    e.outputs = {std::move(to)};
    return e;
}

void append_plate(OpticalNetwork& net, WaveplateKind kind, const std::string& name, const std::string& path,
                  double degrees) {
    net.elements.push_back(OpticalElement::waveplate(kind, name, path, degrees * kDeg));
}

int polarization_index(Polarization p) { return p == Polarization::h ? 0 : 1; }

}  // namespace

std::string_view to_string(ElementKind kind) {
    switch (kind) {
        case ElementKind::HalfWavePlate: return "HWP";
        case ElementKind::QuarterWavePlate: return "QWP";
        case ElementKind::PolarizingBeamSplitter: return "PBS";
        case ElementKind::BeamSplitter: return "BS";
        case ElementKind::Phase: return "Phase";
        case ElementKind::Delay: return "Delay";
        case ElementKind::Mirror: return "Mirror";
    }
    return "?";
}

OpticalElement OpticalElement::waveplate(WaveplateKind kind, std::string name, std::string path, double angle) {
    auto e = single_port(kind == WaveplateKind::Half ? ElementKind::HalfWavePlate : ElementKind::QuarterWavePlate,
                         std::move(name), path, path);
    e.angle = angle;
    return e;
}

OpticalElement OpticalElement::pbs(std::string name, std::array<std::string, 2> in, std::array<std::string, 2> out) {
    OpticalElement e;
    e.kind = ElementKind::PolarizingBeamSplitter;
    e.name = std::move(name);
    e.inputs = {in[0], in[1]};
    e.outputs = {out[0], out[1]};
    return e;
}

OpticalElement OpticalElement::beam_splitter(std::string name, std::array<std::string, 2> in,
                                             std::array<std::string, 2> out, double reflectivity) {
    auto e = pbs(std::move(name), std::move(in), std::move(out));
    e.kind = ElementKind::BeamSplitter;
    e.reflectivity = reflectivity;
    return e;
}

OpticalElement OpticalElement::phase_shift(std::string name, std::string path, double phase, bool interferometer) {
    auto e = single_port(ElementKind::Phase, std::move(name), path, path);
    e.phase = phase;
    e.interferometer_phase = interferometer;
    return e;
}

OpticalElement OpticalElement::delay(std::string name, std::string from, std::string to) {
    return single_port(ElementKind::Delay, std::move(name), std::move(from), std::move(to));
}

OpticalElement OpticalElement::mirror(std::string name, std::string from, std::string to) {
    return single_port(ElementKind::Mirror, std::move(name), std::move(from), std::move(to));
}

void ImperfectionConfig::validate() const {
    auto bad = [](const char* what) { throw OpticsError(std::string("imperfection config: ") + what); };
    if (!(waveplate_angle_sigma >= 0.0) || !std::isfinite(waveplate_angle_sigma)) {
        bad("waveplate_angle_sigma must be a finite non-negative angle");
    }
    if (!(mzi_phase_sigma >= 0.0) || !std::isfinite(mzi_phase_sigma)) {
        bad("mzi_phase_sigma must be a finite non-negative angle");
    }
    if (!(std::abs(bs_ratio_delta) <= 0.5)) bad("bs_ratio_delta must lie in [-0.5, 0.5]");
    if (!(detector_efficiency >= 0.0 && detector_efficiency <= 1.0)) bad("detector_efficiency must lie in [0, 1]");
    if (!(dark_click_prob >= 0.0 && dark_click_prob <= 1.0)) bad("dark_click_prob must lie in [0, 1]");
}

bool ImperfectionConfig::is_ideal() const { return *this == ImperfectionConfig{}; }

ImperfectionConfig demonstration_config() {
    ImperfectionConfig cfg;
    cfg.waveplate_angle_sigma = 2.0 * kDeg;
    cfg.mzi_phase_sigma = 0.3;
    cfg.bs_ratio_delta = 0.01;
    cfg.detector_efficiency = 0.5;
    cfg.dark_click_prob = 2e-4;
    return cfg;
}

OpticalNetwork OpticalNetwork::then(const OpticalNetwork& next) const {
    if (output_path.empty() || output_path != next.input_path) {
        throw OpticsError("cannot chain fragment '" + next.input_path + "' after output '" + output_path + "'");
    }
    OpticalNetwork out = *this;
    out.output_path = next.output_path;
    out.elements.insert(out.elements.end(), next.elements.begin(), next.elements.end());
    out.detectors.insert(out.detectors.end(), next.detectors.begin(), next.detectors.end());
    return out;
}

OpticalField OpticalField::single(const OpticalMode& mode) {
    OpticalField f;
    f.add(mode, 1.0);
    return f;
}

OpticalField OpticalField::from_timebin_state(const StateVector& state, const std::string& path, int first_bin) {
    if (!(state.basis() == ModeBasis::timebin_polarization())) {
        throw OpticsError("from_timebin_state: expected a time-bin (x) polarization state");
    }
    OpticalField f;
    for (std::size_t k = 0; k < state.dim(); ++k) {
        const auto& label = state.basis()[k];
        f.add({path, first_bin + *label.timebin, *label.pol}, state[k]);
    }
    return f;
}

OpticalField OpticalField::from_state(const StateVector& state) {
    OpticalField f;
    for (std::size_t k = 0; k < state.dim(); ++k) {
        const auto& label = state.basis()[k];
        if (!label.path || !label.timebin || !label.pol) {
            throw OpticsError("optical states need path, timebin and polarization on every label");
        }
        f.add({*label.path, *label.timebin, *label.pol}, state[k]);
    }
    return f;
}

StateVector OpticalField::timebin_state(const std::string& path, int first_bin) const {
    const auto basis = ModeBasis::timebin_polarization();
    CVector amps = CVector::Zero(4);
    for (std::size_t k = 0; k < 4; ++k) {
        const auto& label = basis[k];
        auto it = modes_.find({path, first_bin + *label.timebin, *label.pol});
        if (it != modes_.end()) amps[static_cast<Eigen::Index>(k)] = it->second;
    }
    return StateVector(basis, std::move(amps));
}

StateVector OpticalField::to_state() const {
    std::vector<ModeLabel> labels;
    CVector amps(static_cast<Eigen::Index>(modes_.size()));
    Eigen::Index k = 0;
    for (const auto& [mode, a] : modes_) {
        labels.push_back({mode.path, mode.timebin, mode.pol});
        amps[k++] = a;
    }
    return StateVector(ModeBasis(std::move(labels)), std::move(amps));
}

double OpticalField::norm2() const {
    double s = 0.0;
    for (const auto& [mode, a] : modes_) s += std::norm(a);
    return s;
}

double OpticalField::norm2_on(const std::string& path) const {
    double s = 0.0;
    for (const auto& [mode, a] : modes_) {
        if (mode.path == path) s += std::norm(a);
    }
    return s;
}

void OpticalField::add(const OpticalMode& mode, Amplitude a) {
    if (a == Amplitude{}) return;
    modes_[mode] += a;
}

double DetectionDistribution::click_probability() const {
    double s = 0.0;
    for (double c : clicks) s += c;
    return s;
}

double DetectionDistribution::total() const { return click_probability() + out_of_gate + undetected + no_photon; }

std::vector<double> DetectionDistribution::conditional() const {
    std::vector<double> out(photon_in_gate.size(), 0.0);
    double s = 0.0;
    for (double p : photon_in_gate) s += p;
    if (s <= 0.0) return out;
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = photon_in_gate[k] / s;
    return out;
}

Operator jones(WaveplateKind kind, double angle) {
    const double retardance = kind == WaveplateKind::Half ? kPi : kPi / 2.0;
    const double c = std::cos(angle), s = std::sin(angle);
    CMatrix rot(2, 2), ret(2, 2);
    rot << c, -s, s, c;
    ret << 1.0, 0.0, 0.0, std::polar(1.0, retardance);
    const auto pol = ModeBasis::polarization();
    return Operator(pol, pol, rot * ret * rot.transpose());
}

Operator element_map(const OpticalElement& e, const ElementOffsets& off) {
    if (e.inputs.size() != e.outputs.size() || e.inputs.empty() || e.inputs.size() > 2) {
        throw OpticsError("element '" + e.name + "' has malformed ports");
    }
    const auto in = port_basis(e.inputs);
    const auto out = port_basis(e.outputs);
    CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(out.dim()), static_cast<Eigen::Index>(in.dim()));
    switch (e.kind) {
        case ElementKind::HalfWavePlate:
        case ElementKind::QuarterWavePlate: {
            const auto kind = e.kind == ElementKind::HalfWavePlate ? WaveplateKind::Half : WaveplateKind::Quarter;
            m = jones(kind, e.angle + off.angle_error).matrix();
            break;
        }
        case ElementKind::Phase:
            m = std::polar(1.0, e.phase + off.phase_error) * CMatrix::Identity(2, 2);
            break;
        case ElementKind::Delay:
        case ElementKind::Mirror:
            m = CMatrix::Identity(2, 2);
            break;
        case ElementKind::PolarizingBeamSplitter:
            if (e.inputs.size() != 2) throw OpticsError("PBS '" + e.name + "' needs two ports");
            // (a,h)->(c,h)  (a,v)->(d,v)  (b,h)->(d,h)  (b,v)->(c,v)
            m(0, 0) = 1.0;
            m(3, 1) = 1.0;
            m(2, 2) = 1.0;
            m(1, 3) = 1.0;
            break;
        case ElementKind::BeamSplitter: {
            if (e.inputs.size() != 2) throw OpticsError("BS '" + e.name + "' needs two ports");
            const double r2 = e.reflectivity + off.ratio_deviation;
            if (r2 < 0.0 || r2 > 1.0) throw OpticsError("BS '" + e.name + "' reflectivity out of range");
            const Amplitude t = std::sqrt(1.0 - r2);
            const Amplitude r = kI * std::sqrt(r2);
            for (int p = 0; p < 2; ++p) {
                m(p, p) = t;          // a -> c
                m(2 + p, p) = r;      // a -> d
                m(p, 2 + p) = r;      // b -> c
                m(2 + p, 2 + p) = t;  // b -> d
            }
            break;
        }
    }
    return Operator(in, out, std::move(m));
}

ImperfectionDraw nominal_draws(const OpticalNetwork& net, const ImperfectionConfig& cfg) {
    ImperfectionDraw draws(net.elements.size());
    for (std::size_t k = 0; k < net.elements.size(); ++k) {
        if (net.elements[k].kind == ElementKind::BeamSplitter) draws[k].ratio_deviation = cfg.bs_ratio_delta;
    }
    return draws;
}

OpticalField transmit(const OpticalNetwork& net, OpticalField field, const ImperfectionDraw& draws) {
    if (draws.size() != net.elements.size()) {
        throw OpticsError("imperfection draw has " + std::to_string(draws.size()) + " entries for " +
                          std::to_string(net.elements.size()) + " elements");
    }
    for (std::size_t k = 0; k < net.elements.size(); ++k) {
        const auto& e = net.elements[k];
        const Operator op = element_map(e, draws[k]);
        if (op.unitarity_defect() > kElementTolerance) {
            throw OpticsError("element '" + e.name + "' is not unitary");
        }
        const int shift = e.kind == ElementKind::Delay ? 1 : 0;
        const auto n_in = static_cast<Eigen::Index>(2 * e.inputs.size());

        // Gather the touched amplitudes per timebin, then scatter M * in.
        std::map<int, CVector> by_bin;
        OpticalField rest;
        for (const auto& [mode, a] : field.modes()) {
            auto port = std::find(e.inputs.begin(), e.inputs.end(), mode.path);
            if (port == e.inputs.end()) {
                rest.add(mode, a);
                continue;
            }
            auto& v = by_bin.try_emplace(mode.timebin, CVector::Zero(n_in)).first->second;
            v[2 * (port - e.inputs.begin()) + polarization_index(mode.pol)] += a;
        }
        for (const auto& [bin, v] : by_bin) {
            const CVector outv = op.matrix() * v;
            for (Eigen::Index j = 0; j < outv.size(); ++j) {
                const auto& path = e.outputs[static_cast<std::size_t>(j / 2)];
                rest.add({path, bin + shift, j % 2 == 0 ? Polarization::h : Polarization::v}, outv[j]);
            }
        }
        field = std::move(rest);
    }
    return field;
}

DetectionDistribution detect(const OpticalNetwork& net, const OpticalField& field, const ImperfectionConfig& cfg) {
    const std::size_t n = net.detectors.size();
    DetectionDistribution d;
    d.clicks.assign(n, 0.0);
    d.photon_in_gate.assign(n, 0.0);
    d.real_clicks.assign(n, 0.0);

    double out_of_gate = 0.0;
    double routed_away = 0.0;
    for (const auto& [mode, a] : field.modes()) {
        const double p = std::norm(a);
        auto it = std::find_if(net.detectors.begin(), net.detectors.end(),
                               [&](const Detector& det) { return det.path == mode.path; });
        if (it == net.detectors.end()) {
            routed_away += p;
        } else if (mode.timebin == it->gate_bin) {
            d.photon_in_gate[static_cast<std::size_t>(it - net.detectors.begin())] += p;
        } else {
            out_of_gate += p;
        }
    }
    const double absent = std::max(0.0, 1.0 - field.norm2());

    double missed = 0.0;
    double real_total = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double eta = net.detectors[k].efficiency * cfg.detector_efficiency;
        d.real_clicks[k] = eta * d.photon_in_gate[k];
        missed += (1.0 - eta) * d.photon_in_gate[k];
        real_total += d.real_clicks[k];
    }
    // Dark clicks only matter when the photon did not click; the first dark
    // detector in index order wins.
    const double silent_photon = 1.0 - real_total;
    const double q = cfg.dark_click_prob;
    double survive = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
        d.clicks[k] = d.real_clicks[k] + silent_photon * survive * q;
        survive *= 1.0 - q;
    }
    d.out_of_gate = out_of_gate * survive;
    d.undetected = (routed_away + missed) * survive;
    d.no_photon = absent * survive;
    return d;
}

DetectionDistribution propagate(const OpticalNetwork& net, const OpticalField& input, const ImperfectionConfig& cfg,
                                const ImperfectionDraw& draws) {
    const double n2 = input.norm2();
    if (n2 > 1e-15 && std::abs(n2 - 1.0) > 1e-9) throw OpticsError("input field is not normalized");
    return detect(net, transmit(net, input, draws), cfg);
}

DetectionDistribution propagate(const OpticalNetwork& net, const StateVector& input, const ImperfectionConfig& cfg,
                                const ImperfectionDraw& draws) {
    return propagate(net, OpticalField::from_state(input), cfg, draws);
}

OpticalField source_photon() { return OpticalField::single({kSourcePath, 0, Polarization::h}); }

OpticalNetwork build_stage1() {
    OpticalNetwork net;
    net.input_path = kSourcePath;
    net.output_path = kAlicePath;
    append_plate(net, WaveplateKind::Half, "stage1.hwp", kSourcePath, 22.5);
    net.elements.push_back(
        OpticalElement::pbs("stage1.pbs_in", {kSourcePath, "stage1.pbs_in.vac"}, {"stage1.short", "stage1.long"}));
    net.elements.push_back(OpticalElement::mirror("stage1.m1", "stage1.long", "stage1.detour"));
    net.elements.push_back(OpticalElement::delay("stage1.delay", "stage1.detour", "stage1.detour2"));
    net.elements.push_back(OpticalElement::mirror("stage1.m2", "stage1.detour2", "stage1.long2"));
    net.elements.push_back(OpticalElement::phase_shift("stage1.mzi_phase", "stage1.long2", 0.0));
    net.elements.push_back(
        OpticalElement::pbs("stage1.pbs_out", {"stage1.short", "stage1.long2"}, {kAlicePath, "stage1.dump"}));
    return net;
}

OpticalNetwork build_stage2(ProjectionLabel label) {
    OpticalNetwork net;
    net.input_path = kAlicePath;
    net.output_path = kBobPath;
    // (plate, angle) turning the target into h, and the plate turning h back.
    struct Plates {
        bool present;
        WaveplateKind kind;
        double pre;
        double post;
    };
    Plates p{false, WaveplateKind::Half, 0.0, 0.0};
    switch (label) {
        case ProjectionLabel::h: break;
        case ProjectionLabel::v: p = {true, WaveplateKind::Half, 45.0, 45.0}; break;
        case ProjectionLabel::plus: p = {true, WaveplateKind::Half, 22.5, 22.5}; break;
        case ProjectionLabel::minus: p = {true, WaveplateKind::Half, -22.5, -22.5}; break;
        case ProjectionLabel::r: p = {true, WaveplateKind::Quarter, 45.0, -45.0}; break;
        case ProjectionLabel::l: p = {true, WaveplateKind::Quarter, -45.0, 45.0}; break;
    }
    if (p.present) append_plate(net, p.kind, "stage2.pre", kAlicePath, p.pre);
    net.elements.push_back(OpticalElement::pbs("stage2.pbs", {kAlicePath, "stage2.pbs.vac"}, {"bob.pass", "bob.reject"}));
    if (p.present) append_plate(net, p.kind, "stage2.post", "bob.pass", p.post);
    net.elements.push_back(OpticalElement::mirror("stage2.exit", "bob.pass", kBobPath));
    return net;
}

OpticalNetwork build_stage2(UnitaryLabel label) {
    OpticalNetwork net;
    net.input_path = kAlicePath;
    net.output_path = kBobPath;
    using W = WaveplateKind;
    auto qhq = [&](double q1, double h, double q2) {
        append_plate(net, W::Quarter, "stage2.qwp1", kAlicePath, q1);
        append_plate(net, W::Half, "stage2.hwp", kAlicePath, h);
        append_plate(net, W::Quarter, "stage2.qwp2", kAlicePath, q2);
    };
    switch (label) {
        case UnitaryLabel::x_plus_y: qhq(-45.0, -22.5, 45.0); break;
        case UnitaryLabel::x_minus_y: qhq(-45.0, 22.5, 45.0); break;
        case UnitaryLabel::y_plus_z: qhq(0.0, -22.5, 90.0); break;
        case UnitaryLabel::y_minus_z: qhq(0.0, -67.5, 90.0); break;
        case UnitaryLabel::z_plus_x: append_plate(net, W::Half, "stage2.hwp", kAlicePath, 22.5); break;
        case UnitaryLabel::z_minus_x: append_plate(net, W::Half, "stage2.hwp", kAlicePath, -22.5); break;
    }
    net.elements.push_back(OpticalElement::mirror("stage2.exit", kAlicePath, kBobPath));
    return net;
}

OpticalNetwork build_stage3(VaaVariant variant) {
    const double connecting = variant == VaaVariant::First ? 0.0 : kPi;
    const double polarizing = variant == VaaVariant::First ? 0.75 * kPi : 1.25 * kPi;

    OpticalNetwork net;
    net.input_path = kBobPath;
    auto& el = net.elements;
    // E/L -> D/R conversion: the reflected (D) arm carries the matched delay.
    el.push_back(OpticalElement::beam_splitter("stage3.bs", {kBobPath, "stage3.bs.vac"}, {"stage3.R", "stage3.D"}));
    el.push_back(OpticalElement::mirror("stage3.m1", "stage3.D", "stage3.D.detour"));
    el.push_back(OpticalElement::delay("stage3.delay", "stage3.D.detour", "stage3.D.detour2"));
    el.push_back(OpticalElement::mirror("stage3.m2", "stage3.D.detour2", "stage3.D2"));
    el.push_back(OpticalElement::phase_shift("stage3.connecting_phase", "stage3.R", connecting));
    el.push_back(OpticalElement::pbs("stage3.pbs_a", {"stage3.D2", "stage3.R"}, {"stage3.c1", "stage3.c2"}));
    append_plate(net, WaveplateKind::Half, "stage3.polarizing_hwp", "stage3.c2", 22.5);
    el.push_back(OpticalElement::phase_shift("stage3.polarizing_phase", "stage3.c2", polarizing));
    el.push_back(OpticalElement::pbs("stage3.pbs_b", {"stage3.c1", "stage3.c2"}, {"stage3.o1", "stage3.o2"}));
    append_plate(net, WaveplateKind::Half, "stage3.hwp_o1", "stage3.o1", 22.5);
    append_plate(net, WaveplateKind::Half, "stage3.hwp_o2", "stage3.o2", 22.5);
    el.push_back(OpticalElement::pbs("stage3.pbs_o1", {"stage3.o1", "stage3.pbs_o1.vac"}, {"det.0", "det.1"}));
    el.push_back(OpticalElement::pbs("stage3.pbs_o2", {"stage3.o2", "stage3.pbs_o2.vac"}, {"det.2", "det.3"}));
    for (int k = 0; k < 4; ++k) {
        net.detectors.push_back({"D" + std::to_string(k), "det." + std::to_string(k), kGateBin, 1.0});
    }
    return net;
}

OpticalNetwork projection_pipeline(ProjectionLabel label, VaaVariant variant) {
    return build_stage1().then(build_stage2(label)).then(build_stage3(variant));
}

OpticalNetwork challenge_pipeline(UnitaryLabel label, VaaVariant variant) {
    return build_stage1().then(build_stage2(label)).then(build_stage3(variant));
}

const std::array<VaaOutcome, 4>& detector_outcomes(VaaVariant variant) {
    static const std::array<VaaOutcome, 4> first = [] {
        auto o = vaa_outcomes(VaaVariant::First);  // +rh +lv -rv -lh
        return std::array<VaaOutcome, 4>{o[0], o[3], o[2], o[1]};
    }();
    static const std::array<VaaOutcome, 4> second = [] {
        auto o = vaa_outcomes(VaaVariant::Second);  // -lv -rh +lh +rv
        return std::array<VaaOutcome, 4>{o[2], o[1], o[0], o[3]};
    }();
    return variant == VaaVariant::First ? first : second;
}

}  // namespace meanking
