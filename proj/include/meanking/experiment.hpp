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

// Monte Carlo harness for the full optical pipeline: repeat-until-click runs,
// per-choice count tables with binomial errors, and threshold reports against
// the single-qubit optima.

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "meanking/optics.hpp"
#include "meanking/protocol.hpp"

namespace meanking {

/// Bob's choice: a projection in the projection game, a unitary in the
/// Second Challenge.
using BobChoice = std::variant<ProjectionLabel, UnitaryLabel>;

std::string to_string(const BobChoice& choice);
BobChoice parse_bob_choice(Game game, std::string_view text);
std::vector<BobChoice> all_choices(Game game);

struct BobPolicy {
    enum class Kind : unsigned char { Uniform, Fixed, Scripted };
    Kind kind = Kind::Uniform;
    /// One entry for Fixed, the cycle for Scripted, unused for Uniform.
    std::vector<BobChoice> choices;

    static BobPolicy uniform() { return {}; }
    static BobPolicy fixed(BobChoice c) { return {Kind::Fixed, {c}}; }
    static BobPolicy scripted(std::vector<BobChoice> cs) { return {Kind::Scripted, std::move(cs)}; }
};

inline constexpr std::uint64_t kDefaultSeed = 20020830;

struct TrialPlan {
    Game game = Game::Projection;
    VaaVariant variant = VaaVariant::First;
    BobPolicy policy;
    std::uint64_t trials_per_setting = 1000;
    std::uint32_t max_resends = 1000;
    std::uint64_t seed = kDefaultSeed;
    ImperfectionConfig imperfections;

    /// Throws std::invalid_argument for an unusable plan.
    void validate() const;
    /// uniform: 6 x trials_per_setting; fixed: trials_per_setting;
    /// scripted: trials_per_setting per script entry.
    std::uint64_t total_trials() const;
};

struct RunRecord {
    BobChoice bob_choice;
    /// Photons sent after the first one.
    std::uint32_t resend_count = 0;
    std::optional<int> detector_fired;
    bool in_gate = false;
    /// The firing detector was triggered by a dark count.
    bool dark_click = false;
    std::optional<VaaOutcome> outcome;
    std::optional<BobChoice> alice_guess;
    bool correct = false;
};

/// Independent 64-bit stream for one trial, keyed by (seed, trial).
std::mt19937_64 trial_stream(std::uint64_t seed, std::uint64_t trial);

/// Prebuilt pipelines for a plan, shared read-only by concurrent trials.
class Experiment {
  public:
    explicit Experiment(TrialPlan plan);

    const TrialPlan& plan() const { return plan_; }
    const OpticalNetwork& network(const BobChoice& choice) const;
    /// Detection statistics of one photon under fixed draws.
    DetectionDistribution distribution(const BobChoice& choice, const ImperfectionDraw& draws) const;

    RunRecord run(std::uint64_t trial) const;
    /// Every trial of the plan; identical for any worker count.
    std::vector<RunRecord> run_all(unsigned workers = 0) const;

    /// Alice's guess for a fired detector.
    BobChoice guess(int detector, const BobChoice& choice) const;

    /// Exact probability of a correct guess given a click, averaged over
    /// `samples` imperfection draws per choice (common random numbers across
    /// calls with the same seed).
    double expected_success(const BobChoice& choice, std::uint64_t samples) const;

  private:
    std::size_t slot(const BobChoice& choice) const;
    BobChoice draw_choice(std::uint64_t trial, std::mt19937_64& rng) const;

    TrialPlan plan_;
    std::vector<OpticalNetwork> networks_;
    /// Present when the imperfections need no random draws.
    std::vector<std::optional<DetectionDistribution>> fixed_;
};

RunRecord simulate_run(const TrialPlan& plan, std::uint64_t trial);
std::vector<RunRecord> simulate(const TrialPlan& plan, unsigned workers = 0);

struct CountRow {
    BobChoice choice;
    std::array<std::uint64_t, 4> clicks{};
    std::uint64_t runs = 0;
    std::uint64_t clicked = 0;
    std::uint64_t no_click = 0;
    std::uint64_t correct = 0;
    std::uint64_t dark = 0;
    /// Undefined when no run of this choice produced a click.
    std::optional<double> fraction;
    double stderr_ = 0.0;
};

struct CountTable {
    Game game = Game::Projection;
    std::vector<CountRow> rows;
    /// Mean of the defined per-choice fractions.
    std::optional<double> average;
    /// sqrt(sum se_i^2) / K for the K averaged fractions.
    double average_stderr = 0.0;
    std::uint64_t total_runs = 0;
    std::uint64_t total_clicked = 0;
    std::uint64_t total_no_click = 0;

    std::string to_csv() const;
};

/// sqrt(p (1 - p) / n)
double binomial_stderr(double p, std::uint64_t n);

/// Throws std::invalid_argument on an empty record list.
CountTable tally(const std::vector<RunRecord>& records, Game game);

struct ChannelVerdict {
    std::string name;
    std::optional<double> fraction;
    double margin = 0.0;
    bool pass = false;
};

struct ThresholdReport {
    Game game = Game::Projection;
    double threshold = 0.0;
    std::vector<ChannelVerdict> channels;
    ChannelVerdict average;
    /// Every channel and the average strictly above threshold.
    bool all_pass = false;

    std::string to_text() const;
};

ThresholdReport threshold_report(const CountTable& table, Game game);

}  // namespace meanking
