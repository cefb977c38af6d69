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

#include "meanking/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "meanking/strategies.hpp"

namespace meanking {

namespace {

std::string fmt12(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::size_t label_index(const BobChoice& c) {
    return std::visit(
        [](auto label) -> std::size_t {
            using T = decltype(label);
            if constexpr (std::is_same_v<T, ProjectionLabel>) {
                return static_cast<std::size_t>(
                    std::find(kProjectionLabels.begin(), kProjectionLabels.end(), label) - kProjectionLabels.begin());
            } else {
                return static_cast<std::size_t>(
                    std::find(kUnitaryLabels.begin(), kUnitaryLabels.end(), label) - kUnitaryLabels.begin());
            }
        },
        c);
}

bool matches_game(const BobChoice& c, Game game) {
    return game == Game::Projection ? std::holds_alternative<ProjectionLabel>(c)
                                    : std::holds_alternative<UnitaryLabel>(c);
}

}  // namespace

std::string to_string(const BobChoice& choice) {
    return std::visit([](auto label) { return std::string(to_string(label)); }, choice);
}

BobChoice parse_bob_choice(Game game, std::string_view text) {
    if (game == Game::Projection) return parse_projection_label(text);
    return parse_unitary_label(text);
}

std::vector<BobChoice> all_choices(Game game) {
    std::vector<BobChoice> out;
    if (game == Game::Projection) {
        out.assign(kProjectionLabels.begin(), kProjectionLabels.end());
    } else {
        out.assign(kUnitaryLabels.begin(), kUnitaryLabels.end());
    }
    return out;
}

void TrialPlan::validate() const {
    if (trials_per_setting < 1) throw std::invalid_argument("trials_per_setting must be at least 1");
    if (max_resends < 1) throw std::invalid_argument("max_resends must be at least 1");
    if (policy.kind != BobPolicy::Kind::Uniform && policy.choices.empty()) {
        throw std::invalid_argument("fixed and scripted policies need at least one choice");
    }
    if (policy.kind == BobPolicy::Kind::Fixed && policy.choices.size() != 1) {
        throw std::invalid_argument("a fixed policy takes exactly one choice");
    }
    for (const auto& c : policy.choices) {
        if (!matches_game(c, game)) {
            throw std::invalid_argument("choice '" + to_string(c) + "' does not belong to the " +
                                        std::string(to_string(game)) + " game");
        }
    }
    try {
        imperfections.validate();
    } catch (const OpticsError& e) {
        throw std::invalid_argument(e.what());
    }
}

std::uint64_t TrialPlan::total_trials() const {
    switch (policy.kind) {
        case BobPolicy::Kind::Uniform: return 6 * trials_per_setting;
        case BobPolicy::Kind::Fixed: return trials_per_setting;
        case BobPolicy::Kind::Scripted: return trials_per_setting * policy.choices.size();
    }
    return 0;
}

std::mt19937_64 trial_stream(std::uint64_t seed, std::uint64_t trial) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
    return std::mt19937_64(seq);
}

Experiment::Experiment(TrialPlan plan) : plan_(std::move(plan)) {
    plan_.validate();
    for (const auto& c : all_choices(plan_.game)) {
        if (plan_.game == Game::Projection) {
            networks_.push_back(projection_pipeline(std::get<ProjectionLabel>(c), plan_.variant));
        } else {
            networks_.push_back(challenge_pipeline(std::get<UnitaryLabel>(c), plan_.variant));
        }
        if (plan_.imperfections.is_stochastic()) {
            fixed_.emplace_back();
        } else {
            const auto& net = networks_.back();
            fixed_.emplace_back(propagate(net, source_photon(), plan_.imperfections,
                                          nominal_draws(net, plan_.imperfections)));
        }
    }
}

std::size_t Experiment::slot(const BobChoice& choice) const {
    if (!matches_game(choice, plan_.game)) throw std::invalid_argument("choice does not belong to this game");
    return label_index(choice);
}

const OpticalNetwork& Experiment::network(const BobChoice& choice) const { return networks_[slot(choice)]; }

DetectionDistribution Experiment::distribution(const BobChoice& choice, const ImperfectionDraw& draws) const {
    return propagate(network(choice), source_photon(), plan_.imperfections, draws);
}

BobChoice Experiment::guess(int detector, const BobChoice& choice) const {
    const auto& outcome = detector_outcomes(plan_.variant).at(static_cast<std::size_t>(detector));
    if (plan_.game == Game::Projection) {
        return alice_answer(outcome, pair_of(std::get<ProjectionLabel>(choice)));
    }
    return challenge_infer(outcome, pair_of(std::get<UnitaryLabel>(choice)), plan_.variant);
}

BobChoice Experiment::draw_choice(std::uint64_t trial, std::mt19937_64& rng) const {
    switch (plan_.policy.kind) {
        case BobPolicy::Kind::Uniform: {
            std::uniform_int_distribution<int> pick(0, 5);
            return all_choices(plan_.game)[static_cast<std::size_t>(pick(rng))];
        }
        case BobPolicy::Kind::Fixed: return plan_.policy.choices.front();
        case BobPolicy::Kind::Scripted:
            return plan_.policy.choices[trial % plan_.policy.choices.size()];
    }
    return plan_.policy.choices.front();
}

RunRecord Experiment::run(std::uint64_t trial) const {
    auto rng = trial_stream(plan_.seed, trial);
    RunRecord rec;
    rec.bob_choice = draw_choice(trial, rng);
    const std::size_t k = slot(rec.bob_choice);

    DetectionDistribution dist;
    if (fixed_[k]) {
        dist = *fixed_[k];
    } else {
        const auto draws = sample_draws(networks_[k], plan_.imperfections, rng);
        dist = propagate(networks_[k], source_photon(), plan_.imperfections, draws);
    }

    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    const std::size_t n = dist.clicks.size();
    for (std::uint32_t photon = 0; photon <= plan_.max_resends; ++photon) {
        rec.resend_count = photon;
        double u = uniform(rng);
        for (std::size_t d = 0; d < n && !rec.detector_fired; ++d) {
            if (u < dist.real_clicks[d]) {
                rec.detector_fired = static_cast<int>(d);
            } else if (u < dist.clicks[d]) {
                rec.detector_fired = static_cast<int>(d);
                rec.dark_click = true;
            }
            u -= dist.clicks[d];
        }
        if (rec.detector_fired) break;
    }
    if (rec.detector_fired) {
        rec.in_gate = true;
        rec.outcome = detector_outcomes(plan_.variant)[static_cast<std::size_t>(*rec.detector_fired)];
        rec.alice_guess = guess(*rec.detector_fired, rec.bob_choice);
        rec.correct = *rec.alice_guess == rec.bob_choice;
    }
    return rec;
}

std::vector<RunRecord> Experiment::run_all(unsigned workers) const {
    const std::uint64_t n = plan_.total_trials();
    std::vector<RunRecord> records(n);
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, std::max<std::uint64_t>(n, 1)));
    auto body = [&](unsigned w) {
        for (std::uint64_t t = n * w / workers; t < n * (w + 1) / workers; ++t) records[t] = run(t);
    };
    if (workers == 1) {
        body(0);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(body, w);
    }
    return records;
}

double Experiment::expected_success(const BobChoice& choice, std::uint64_t samples) const {
    const std::size_t k = slot(choice);
    auto success_of = [&](const DetectionDistribution& d) {
        double hit = 0.0;
        for (std::size_t det = 0; det < d.clicks.size(); ++det) {
            if (guess(static_cast<int>(det), choice) == choice) hit += d.clicks[det];
        }
        const double c = d.click_probability();
        return c > 0.0 ? hit / c : 0.0;
    };
    if (fixed_[k]) return success_of(*fixed_[k]);
    double total = 0.0;
    for (std::uint64_t s = 0; s < samples; ++s) {
        // A stream per (choice, sample) shared by every config with this seed.
        auto rng = trial_stream(plan_.seed, (static_cast<std::uint64_t>(k) << 40) | s);
        const auto draws = sample_draws(networks_[k], plan_.imperfections, rng);
        total += success_of(propagate(networks_[k], source_photon(), plan_.imperfections, draws));
    }
    return total / static_cast<double>(samples);
}

RunRecord simulate_run(const TrialPlan& plan, std::uint64_t trial) { return Experiment(plan).run(trial); }

std::vector<RunRecord> simulate(const TrialPlan& plan, unsigned workers) {
    return Experiment(plan).run_all(workers);
}

double binomial_stderr(double p, std::uint64_t n) {
    if (n == 0) return 0.0;
    return std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(n));
}

CountTable tally(const std::vector<RunRecord>& records, Game game) {
    if (records.empty()) throw std::invalid_argument("tally: no records");
    CountTable table;
    table.game = game;
    const auto choices = all_choices(game);
    std::vector<CountRow> rows(choices.size());
    std::vector<bool> seen(choices.size(), false);
    for (std::size_t k = 0; k < choices.size(); ++k) rows[k].choice = choices[k];

    for (const auto& r : records) {
        if (!matches_game(r.bob_choice, game)) throw std::invalid_argument("tally: record from another game");
        const std::size_t k = label_index(r.bob_choice);
        seen[k] = true;
        auto& row = rows[k];
        ++row.runs;
        if (r.detector_fired) {
            ++row.clicked;
            ++row.clicks.at(static_cast<std::size_t>(*r.detector_fired));
            if (r.correct) ++row.correct;
            if (r.dark_click) ++row.dark;
        } else {
            ++row.no_click;
        }
    }

    double sum = 0.0, var = 0.0;
    std::size_t defined = 0;
    for (std::size_t k = 0; k < rows.size(); ++k) {
        if (!seen[k]) continue;
        auto& row = rows[k];
        if (row.clicked > 0) {
            const double p = static_cast<double>(row.correct) / static_cast<double>(row.clicked);
            row.fraction = p;
            row.stderr_ = binomial_stderr(p, row.clicked);
            sum += p;
            var += row.stderr_ * row.stderr_;
            ++defined;
        }
        table.total_runs += row.runs;
        table.total_clicked += row.clicked;
        table.total_no_click += row.no_click;
        table.rows.push_back(row);
    }
    if (defined > 0) {
        table.average = sum / static_cast<double>(defined);
        table.average_stderr = std::sqrt(var) / static_cast<double>(defined);
    }
    return table;
}

std::string CountTable::to_csv() const {
    std::ostringstream os;
    os << "bob_choice,D0,D1,D2,D3,runs,clicked,no_click,correct,success_fraction,stderr\n";
    std::uint64_t correct = 0;
    for (const auto& r : rows) {
        os << to_string(r.choice);
        for (auto c : r.clicks) os << ',' << c;
        os << ',' << r.runs << ',' << r.clicked << ',' << r.no_click << ',' << r.correct << ',';
        os << (r.fraction ? fmt12(*r.fraction) : "undefined") << ',' << fmt12(r.stderr_) << '\n';
        correct += r.correct;
    }
    os << "average,,,,," << total_runs << ',' << total_clicked << ',' << total_no_click << ',' << correct << ','
       << (average ? fmt12(*average) : "undefined") << ',' << fmt12(average_stderr) << '\n';
    return os.str();
}

ThresholdReport threshold_report(const CountTable& table, Game game) {
    ThresholdReport rep;
    rep.game = game;
    rep.threshold = single_qubit_threshold(game);
    auto verdict = [&](std::string name, std::optional<double> f) {
        ChannelVerdict v;
        v.name = std::move(name);
        v.fraction = f;
        v.margin = f ? *f - rep.threshold : -rep.threshold;
        v.pass = f && *f > rep.threshold;
        return v;
    };
    rep.all_pass = !table.rows.empty();
    for (const auto& r : table.rows) {
        rep.channels.push_back(verdict(to_string(r.choice), r.fraction));
        rep.all_pass = rep.all_pass && rep.channels.back().pass;
    }
    rep.average = verdict("average", table.average);
    rep.all_pass = rep.all_pass && rep.average.pass;
    return rep;
}

std::string ThresholdReport::to_text() const {
    std::ostringstream os;
    os << "threshold " << fmt12(threshold) << " (" << to_string(game) << ")\n";
    auto line = [&](const ChannelVerdict& v) {
        os << (v.pass ? "PASS " : "FAIL ") << v.name << ' '
           << (v.fraction ? fmt12(*v.fraction) : std::string("undefined")) << " margin " << fmt12(v.margin)
           << '\n';
    };
    for (const auto& c : channels) line(c);
    line(average);
    return os.str();
}

}  // namespace meanking
