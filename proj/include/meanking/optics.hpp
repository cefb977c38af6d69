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

// Jones-calculus model of the three-stage optical setup.
//
// A photon is tracked as amplitudes over modes (path, timebin, polarization).
// One timebin is one detour delay. Elements act on named paths; everything
// else passes through untouched. Loss is modeled only by routing amplitude
// into paths that have no detector.
//
// Conventions:
//   * Retarder with fast axis at angle a from h and retardance G:
//       J = R(a) diag(1, e^{iG}) R(-a),  R(a) = [[cos a, -sin a], [sin a, cos a]]
//     so HWP(a) = [[cos 2a, sin 2a], [sin 2a, -cos 2a]].
//   * PBS with inputs (a, b) and outputs (c, d): h goes a->c and b->d with
//     amplitude 1, v goes a->d and b->c with amplitude 1.
//   * BS with reflectivity R: a -> sqrt(1-R) c + i sqrt(R) d,
//                            b -> i sqrt(R) c + sqrt(1-R) d.
//   * Delay moves a path one timebin later; Mirror only renames the path.
//
// Stage 3 layout (both variants):
//   BS -> arm D (delay) and arm R (connecting-loop phase) -> PBS_a
//      -> arm c1 and arm c2 (HWP +22.5 deg, polarizing-MZI phase) -> PBS_b
//      -> o1, o2, each HWP +22.5 deg -> PBS -> two detectors.
// The first variant sets the connecting-loop phase to 0 and the polarizing
// phase to 3pi/4; the second adds pi and pi/2 respectively.

#include <array>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "meanking/linalg.hpp"
#include "meanking/protocol.hpp"

namespace meanking {

struct OpticalMode {
    std::string path;
    int timebin = 0;
    Polarization pol = Polarization::h;

    auto operator<=>(const OpticalMode&) const = default;
    bool operator==(const OpticalMode&) const = default;
};

enum class ElementKind : unsigned char {
    HalfWavePlate,
    QuarterWavePlate,
    PolarizingBeamSplitter,
    BeamSplitter,
    Phase,
    Delay,
    Mirror,
};

enum class WaveplateKind : unsigned char { Half, Quarter };

std::string_view to_string(ElementKind kind);

struct OpticalElement {
    ElementKind kind = ElementKind::Mirror;
    std::string name;
    /// One path for single-port elements, two for (P)BS.
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
    double angle = 0.0;         ///< wave plates, radians from h
    double phase = 0.0;         ///< Phase, radians
    double reflectivity = 0.5;  ///< BeamSplitter
    /// Phase elements that set the arm difference of an interferometer; these
    /// receive the MZI phase noise.
    bool interferometer_phase = false;

    static OpticalElement waveplate(WaveplateKind kind, std::string name, std::string path, double angle);
    static OpticalElement pbs(std::string name, std::array<std::string, 2> in, std::array<std::string, 2> out);
    static OpticalElement beam_splitter(std::string name, std::array<std::string, 2> in,
                                        std::array<std::string, 2> out, double reflectivity = 0.5);
    static OpticalElement phase_shift(std::string name, std::string path, double phase,
                                      bool interferometer = true);
    static OpticalElement delay(std::string name, std::string from, std::string to);
    static OpticalElement mirror(std::string name, std::string from, std::string to);
};

/// Perturbation of one element for one run.
struct ElementOffsets {
    double angle_error = 0.0;
    double phase_error = 0.0;
    double ratio_deviation = 0.0;
};

/// One ElementOffsets per network element, in element order.
using ImperfectionDraw = std::vector<ElementOffsets>;

struct Detector {
    std::string name;
    std::string path;
    int gate_bin = 0;
    double efficiency = 1.0;
};

class OpticsError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct ImperfectionConfig {
    double waveplate_angle_sigma = 0.0;  ///< radians, per wave plate per run
    double mzi_phase_sigma = 0.0;        ///< radians, per interferometer per run
    double bs_ratio_delta = 0.0;         ///< reflectivity offset of every BS
    double detector_efficiency = 1.0;    ///< [0, 1]
    double dark_click_prob = 0.0;        ///< per gate per detector, [0, 1]

    /// Throws OpticsError when a parameter is out of range.
    void validate() const;
    bool is_ideal() const;
    /// True when sample_draws consumes randomness.
    bool is_stochastic() const { return waveplate_angle_sigma > 0.0 || mzi_phase_sigma > 0.0; }
    bool operator==(const ImperfectionConfig&) const = default;
};

/// Illustrative imperfections giving success rates in the experimentally
/// reported regime. Not a fit to any apparatus.
ImperfectionConfig demonstration_config();

struct OpticalNetwork {
    std::string input_path;
    /// Path the fragment hands on to the next one; empty once detectors are attached.
    std::string output_path;
    std::vector<OpticalElement> elements;
    std::vector<Detector> detectors;

    /// Appends a fragment whose input path is this fragment's output path.
    OpticalNetwork then(const OpticalNetwork& next) const;
};

/// Amplitudes over optical modes.
class OpticalField {
  public:
    OpticalField() = default;
    static OpticalField single(const OpticalMode& mode);
    /// Embeds a time-bin (x) polarization state on a path, with E at
    /// timebin first_bin and L one bin later.
    static OpticalField from_timebin_state(const StateVector& state, const std::string& path, int first_bin = 0);
    /// Conversion from a StateVector whose labels carry all three slots.
    static OpticalField from_state(const StateVector& state);

    /// Unnormalized 4-dim state of the given path restricted to bins
    /// first_bin and first_bin + 1.
    StateVector timebin_state(const std::string& path, int first_bin = 0) const;
    StateVector to_state() const;

    double norm2() const;
    double norm2_on(const std::string& path) const;
    const std::map<OpticalMode, Amplitude>& modes() const { return modes_; }
    void add(const OpticalMode& mode, Amplitude a);

  private:
    std::map<OpticalMode, Amplitude> modes_;
};

struct DetectionDistribution {
    /// Probability that each detector fires in its gate, real or dark.
    std::vector<double> clicks;
    /// Photon probability arriving in each detector's gate before efficiency.
    std::vector<double> photon_in_gate;
    /// Part of clicks caused by the photon itself.
    std::vector<double> real_clicks;
    /// Silent outcomes; these and clicks sum to one.
    double out_of_gate = 0.0;
    double undetected = 0.0;
    double no_photon = 0.0;

    double click_probability() const;
    double total() const;
    /// photon_in_gate normalized to sum one (the analyzer's conditional
    /// distribution); all zeros when nothing reaches a gate.
    std::vector<double> conditional() const;
};

/// 2x2 Jones matrix on the (h, v) basis.
Operator jones(WaveplateKind kind, double angle);

/// Local map of an element from its input (path, pol) modes to its output
/// modes, with offsets applied. Delays are unitary in this picture.
Operator element_map(const OpticalElement& element, const ElementOffsets& offsets = {});

ImperfectionDraw nominal_draws(const OpticalNetwork& net, const ImperfectionConfig& cfg = {});

template <class URBG>
ImperfectionDraw sample_draws(const OpticalNetwork& net, const ImperfectionConfig& cfg, URBG& rng) {
    ImperfectionDraw draws = nominal_draws(net, cfg);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (std::size_t k = 0; k < net.elements.size(); ++k) {
        const auto& e = net.elements[k];
        if (e.kind == ElementKind::HalfWavePlate || e.kind == ElementKind::QuarterWavePlate) {
            if (cfg.waveplate_angle_sigma > 0.0) draws[k].angle_error = cfg.waveplate_angle_sigma * normal(rng);
        } else if (e.kind == ElementKind::Phase && e.interferometer_phase) {
            if (cfg.mzi_phase_sigma > 0.0) draws[k].phase_error = cfg.mzi_phase_sigma * normal(rng);
        }
    }
    return draws;
}

/// Pushes a field through every element in order. Throws OpticsError if an
/// element map is not unitary or the draw list has the wrong length.
OpticalField transmit(const OpticalNetwork& net, OpticalField field, const ImperfectionDraw& draws);

/// Detector statistics for a field that has left the network.
DetectionDistribution detect(const OpticalNetwork& net, const OpticalField& field, const ImperfectionConfig& cfg);

/// transmit then detect. The input must be normalized or the vacuum (norm 0).
DetectionDistribution propagate(const OpticalNetwork& net, const StateVector& input,
                                const ImperfectionConfig& cfg, const ImperfectionDraw& draws);
DetectionDistribution propagate(const OpticalNetwork& net, const OpticalField& input,
                                const ImperfectionConfig& cfg, const ImperfectionDraw& draws);

/// Path names of the stage interfaces.
inline constexpr const char* kSourcePath = "source";
inline constexpr const char* kAlicePath = "alice.out";
inline constexpr const char* kBobPath = "bob.out";
inline constexpr int kGateBin = 1;

/// |source, 0, h>
OpticalField source_photon();

/// HWP at 22.5 deg then an unbalanced PBS interferometer: h short, v one bin late.
OpticalNetwork build_stage1();
/// Wave-plate sandwich around a PBS; rejected amplitude leaves on "bob.reject".
OpticalNetwork build_stage2(ProjectionLabel label);
/// Wave plates realizing (sigma_a +- sigma_b)/sqrt2 up to global phase.
OpticalNetwork build_stage2(UnitaryLabel label);
OpticalNetwork build_stage3(VaaVariant variant);

OpticalNetwork projection_pipeline(ProjectionLabel label, VaaVariant variant);
OpticalNetwork challenge_pipeline(UnitaryLabel label, VaaVariant variant);

/// VAA outcome announced for each detector index of build_stage3(variant).
const std::array<VaaOutcome, 4>& detector_outcomes(VaaVariant variant);

}  // namespace meanking
