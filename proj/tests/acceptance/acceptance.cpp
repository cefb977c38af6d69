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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. Tolerances and sample sizes are pinned below.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "meanking/experiment.hpp"
#include "meanking/serialization.hpp"
#include "meanking/strategies.hpp"

namespace {

using namespace meanking;

constexpr double kAlgebraTol = 1e-12;
constexpr double kAlgebraSeconds = 1.0;
constexpr std::uint64_t kRetrodictionTrials = 10000;  // per label or unitary
constexpr double kMinuteSeconds = 60.0;
constexpr int kGridResolution = 128;
constexpr double kGridTol = 1e-3;
constexpr double kExplicitTol = 1e-12;
constexpr double kOracleTol = 1e-9;
constexpr int kSweepPoints = 100;
constexpr double kConservationTol = 1e-9;
constexpr std::uint64_t kResendRuns = 10000;
constexpr double kResendSigmas = 3.0;
constexpr std::uint64_t kDemoTrialsPerSetting = 10000;  // 6e4 runs
constexpr double kProjectionBar = 0.9024;
constexpr std::uint64_t kLadderTrialsPerSetting = 5000;
constexpr std::array<double, 4> kLadder = {0.5, 1.0, 1.5, 2.0};
constexpr std::array<unsigned, 3> kWorkerCounts = {1, 4, 7};

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double x) {
    char buf[96];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

Outcome exact_algebra() {
    const auto t0 = std::chrono::steady_clock::now();
    double worst_orth = 0.0, worst_comp = 0.0;
    for (auto v : kVaaVariants) {
        const auto& b = vaa_basis(v);
        worst_orth = std::max(worst_orth, orthonormality_defect(b.state_list()));
        for (std::size_t k = 0; k < 4; ++k) {
            for (auto l : {b.outcomes[k].x, b.outcomes[k].y, b.outcomes[k].z}) {
                worst_comp = std::max(worst_comp, std::abs(inner(projected_state(complement(l)), b.states[k])));
            }
        }
    }
    const double s = seconds_since(t0);
    return {worst_orth <= kAlgebraTol && worst_comp <= kAlgebraTol && s < kAlgebraSeconds,
            "orthonormality defect " + fmt("%.2e", worst_orth) + ", complement overlap " + fmt("%.2e", worst_comp) +
                ", " + fmt("%.3f s", s)};
}

// Every channel of a scripted plan covering all six choices.
Outcome perfect(Game game) {
    const auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool pass = true;
    for (auto v : kVaaVariants) {
        TrialPlan plan;
        plan.game = game;
        plan.variant = v;
        plan.policy = BobPolicy::scripted(all_choices(game));
        plan.trials_per_setting = kRetrodictionTrials;
        const auto table = tally(simulate(plan), game);
        for (const auto& row : table.rows) {
            const bool ok = row.fraction && *row.fraction == 1.0 && row.clicked == kRetrodictionTrials;
            if (!ok) detail += " " + to_string(row.choice) + "@" + std::string(to_string(v));
            pass = pass && ok;
        }
        pass = pass && table.rows.size() == 6;
    }
    const double s = seconds_since(t0);
    pass = pass && s < kMinuteSeconds;
    return {pass, (pass ? "all 12 channels 1.0" : "imperfect:" + detail) + ", " + fmt("%.1f s", s)};
}

Outcome uniform_overlap() {
    double worst = 0.0;
    for (auto l : kProjectionLabels) {
        worst = std::max(worst, std::abs(std::norm(inner(projected_state(l), init_state())) - 0.5));
        worst = std::max(worst, std::abs(project(init_state(), l).probability - 0.5));
    }
    return {worst <= kAlgebraTol, "max |overlap - 1/2| " + fmt("%.2e", worst)};
}

Outcome projection_threshold() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = search_optimum(Game::Projection, kGridResolution);
    const double s = seconds_since(t0);
    const SingleQubitStrategy explicit_s{{M_PI / 2, M_PI / 2}, {M_PI / 4, 0.0}};  // prep r, measure x+z
    const double target = (2.0 + std::pow(2.0, -0.5)) / 3.0;
    const double e = std::abs(evaluate_projection_game(explicit_s) - target);
    const double g = std::abs(r.value - target);
    return {g <= kGridTol && e <= kExplicitTol && s < kMinuteSeconds,
            "grid optimum " + fmt("%.10f", r.value) + " (|d| " + fmt("%.1e", g) + "), explicit |d| " +
                fmt("%.1e", e) + ", " + fmt("%.1f s", s)};
}

Outcome challenge_threshold() {
    const auto r = search_optimum(Game::SecondChallenge, kGridResolution);
    const double g = std::abs(r.value - 5.0 / 6.0);
    const auto sim = perfect(Game::SecondChallenge);
    return {g <= kGridTol && sim.pass,
            "grid optimum " + fmt("%.10f", r.value) + " (|d| " + fmt("%.1e", g) + "); simulation: " + sim.detail};
}

Outcome oracle_equivalence() {
    double worst = 0.0;
    for (auto v : kVaaVariants) {
        const auto& b = vaa_basis(v);
        for (auto l : kProjectionLabels) {
            const auto net = projection_pipeline(l, v);
            const auto cond = propagate(net, source_photon(), {}, nominal_draws(net)).conditional();
            const auto theory = measure_in_basis(projected_state(l), b);
            for (std::size_t k = 0; k < 4; ++k) {
                worst = std::max(worst, std::abs(cond[k] - theory[b.index_of(detector_outcomes(v)[k])]));
            }
        }
    }
    return {worst <= kOracleTol, "max deviation " + fmt("%.2e", worst) + " over 6 labels x 2 variants"};
}

Outcome conservation() {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<OpticalNetwork> nets;
    for (auto v : kVaaVariants) {
        for (auto l : kProjectionLabels) nets.push_back(projection_pipeline(l, v));
        for (auto c : kUnitaryLabels) nets.push_back(challenge_pipeline(c, v));
    }
    double worst = 0.0;
    for (int i = 0; i < kSweepPoints; ++i) {
        ImperfectionConfig cfg;
        cfg.waveplate_angle_sigma = 0.2 * u(rng);
        cfg.mzi_phase_sigma = 2.0 * u(rng);
        cfg.bs_ratio_delta = 0.4 * u(rng) - 0.2;
        cfg.detector_efficiency = u(rng);
        cfg.dark_click_prob = 0.05 * u(rng);
        const auto& net = nets[static_cast<std::size_t>(i) % nets.size()];
        const auto d = propagate(net, source_photon(), cfg, sample_draws(net, cfg, rng));
        worst = std::max(worst, std::abs(d.total() - 1.0));
    }
    return {worst <= kConservationTol, "max |total - 1| " + fmt("%.2e", worst) + " over 100 points"};
}

Outcome resend_geometry() {
    double worst_click = 0.0;
    for (auto l : kProjectionLabels) {
        const auto net = projection_pipeline(l, VaaVariant::First);
        worst_click = std::max(worst_click,
                               std::abs(propagate(net, source_photon(), {}, nominal_draws(net)).click_probability() - 0.25));
    }
    TrialPlan plan;
    plan.trials_per_setting = kResendRuns / 6 + 1;
    plan.seed = 8;
    auto records = simulate(plan);
    records.resize(kResendRuns);
    double mean = 0.0;
    for (const auto& r : records) mean += r.resend_count;
    mean /= static_cast<double>(kResendRuns);
    const double q = 0.25;
    const double expect = (1 - q) / q;
    const double sigma = std::sqrt((1 - q) / (q * q) / static_cast<double>(kResendRuns));
    const double z = (mean - expect) / sigma;
    return {worst_click <= kAlgebraTol && std::abs(z) <= kResendSigmas,
            "per-photon click 1/4 (|d| " + fmt("%.1e", worst_click) + "), mean resends " + fmt("%.4f", mean) +
                " vs 3 (" + fmt("%+.2f sigma", z) + ")"};
}

CountTable demo_table(Game game, double scale, std::uint64_t trials) {
    TrialPlan plan;
    plan.game = game;
    plan.trials_per_setting = trials;
    plan.imperfections = demonstration_config();
    plan.imperfections.waveplate_angle_sigma *= scale;
    plan.imperfections.mzi_phase_sigma *= scale;
    return tally(simulate(plan), game);
}

Outcome threshold_dominance() {
    bool pass = true;
    std::string detail;
    const auto band = load_json_file(MEANKING_SOURCE_DIR "/data/golden/demo_band.json");
    for (auto game : {Game::Projection, Game::SecondChallenge}) {
        const double bar = game == Game::Projection ? kProjectionBar : 5.0 / 6.0;
        const auto table = demo_table(game, 1.0, kDemoTrialsPerSetting);
        double worst = 1.0;
        for (const auto& row : table.rows) worst = std::min(worst, row.fraction.value_or(0.0));
        const auto& b = band.at(std::string(to_string(game)));
        const double avg = table.average.value_or(0.0);
        const bool in_band = std::abs(avg - b.at("average").get<double>()) <= band.at("half_width").get<double>();
        const bool beats = worst > bar && table.total_runs == 6 * kDemoTrialsPerSetting;

        std::vector<double> ladder;
        for (double s : kLadder) ladder.push_back(demo_table(game, s, kLadderTrialsPerSetting).average.value_or(0.0));
        bool monotone = true;
        for (std::size_t i = 1; i < ladder.size(); ++i) monotone = monotone && ladder[i] < ladder[i - 1];

        pass = pass && beats && in_band && monotone;
        detail += std::string(detail.empty() ? "" : "; ") + std::string(to_string(game)) + " worst " +
                  fmt("%.4f", worst) + " > " + fmt("%.4f", bar) + ", average " + fmt("%.4f", avg) +
                  (in_band ? " in band" : " OUT OF BAND") + ", ladder";
        for (double a : ladder) detail += fmt(" %.4f", a);
        if (!monotone) detail += " NOT MONOTONE";
    }
    return {pass, detail};
}

Outcome determinism() {
    TrialPlan plan;
    plan.trials_per_setting = 2000;
    plan.seed = 31337;
    plan.imperfections = demonstration_config();
    bool pass = true;
    for (auto game : {Game::Projection, Game::SecondChallenge}) {
        plan.game = game;
        std::string reference;
        for (unsigned w : kWorkerCounts) {
            const auto csv = tally(simulate(plan, w), game).to_csv();
            if (reference.empty()) reference = csv;
            pass = pass && csv == reference;
        }
    }
    return {pass, "CSV byte-identical for 1, 4 and 7 workers, both games"};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"exact algebra", exact_algebra},
        {"perfect retrodiction", [] { return perfect(Game::Projection); }},
        {"uniform overlap", uniform_overlap},
        {"single-qubit threshold", projection_threshold},
        {"second challenge threshold", challenge_threshold},
        {"optics/protocol oracle equivalence", oracle_equivalence},
        {"probability conservation", conservation},
        {"resend geometry", resend_geometry},
        {"threshold dominance demonstration", threshold_dominance},
        {"determinism", determinism},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += o.pass ? 0 : 1;
        std::printf("%s criterion %zu (%s): %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                    o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
