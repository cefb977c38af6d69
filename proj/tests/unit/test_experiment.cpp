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

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "generators.hpp"
#include "meanking/experiment.hpp"
#include "meanking/strategies.hpp"

namespace meanking {
namespace {

TrialPlan ideal_plan(Game game, VaaVariant variant, std::uint64_t trials) {
    TrialPlan p;
    p.game = game;
    p.variant = variant;
    p.trials_per_setting = trials;
    p.seed = 99;
    return p;
}

RunRecord record(BobChoice c, bool clicked, bool correct) {
    RunRecord r;
    r.bob_choice = c;
    if (clicked) {
        r.detector_fired = 0;
        r.in_gate = true;
        r.correct = correct;
        r.alice_guess = c;
    }
    return r;
}

TEST(Plan, Validation) {
    TrialPlan p;
    p.trials_per_setting = 0;
    EXPECT_THROW(p.validate(), std::invalid_argument);
    p = TrialPlan{};
    p.max_resends = 0;
    EXPECT_THROW(p.validate(), std::invalid_argument);
    p = TrialPlan{};
    p.policy = BobPolicy::fixed(UnitaryLabel::x_plus_y);
    EXPECT_THROW(p.validate(), std::invalid_argument);
    p = TrialPlan{};
    p.policy = BobPolicy::scripted({});
    EXPECT_THROW(p.validate(), std::invalid_argument);
    p = TrialPlan{};
    p.imperfections.detector_efficiency = 2;
    EXPECT_THROW(p.validate(), std::invalid_argument);
}

TEST(Plan, TrialCounts) {
    TrialPlan p;
    p.trials_per_setting = 7;
    EXPECT_EQ(p.total_trials(), 42u);
    p.policy = BobPolicy::fixed(ProjectionLabel::v);
    EXPECT_EQ(p.total_trials(), 7u);
    p.policy = BobPolicy::scripted({ProjectionLabel::v, ProjectionLabel::h, ProjectionLabel::r});
    EXPECT_EQ(p.total_trials(), 21u);
}

TEST(Streams, KeyedBySeedAndTrial) {
    EXPECT_EQ(trial_stream(1, 2)(), trial_stream(1, 2)());
    EXPECT_NE(trial_stream(1, 2)(), trial_stream(1, 3)());
    EXPECT_NE(trial_stream(1, 2)(), trial_stream(2, 2)());
    EXPECT_NE(trial_stream(1ull << 32, 0)(), trial_stream(0, 1)());
}

TEST(Run, IdealRetrodictionIsPerfect) {
    for (auto game : {Game::Projection, Game::SecondChallenge}) {
        for (auto v : kVaaVariants) {
            const auto plan = ideal_plan(game, v, 1000);
            const auto records = simulate(plan, 1);
            for (const auto& r : records) {
                ASSERT_TRUE(r.detector_fired);
                EXPECT_TRUE(r.correct);
                EXPECT_FALSE(r.dark_click);
            }
            const auto t = tally(records, game);
            ASSERT_TRUE(t.average);
            EXPECT_EQ(*t.average, 1.0);
            EXPECT_EQ(t.rows.size(), 6u);
        }
    }
}

TEST(Run, CorrectMeansGuessEqualsChoice) {
    TrialPlan p;
    p.trials_per_setting = 300;
    p.imperfections = demonstration_config();
    p.imperfections.waveplate_angle_sigma = 0.2;
    const Experiment e(p);
    int wrong = 0;
    for (std::uint64_t t = 0; t < p.total_trials(); ++t) {
        const auto r = e.run(t);
        if (!r.detector_fired) continue;
        ASSERT_TRUE(r.alice_guess);
        EXPECT_EQ(r.correct, *r.alice_guess == r.bob_choice);
        EXPECT_EQ(*r.alice_guess, e.guess(*r.detector_fired, r.bob_choice));
        wrong += r.correct ? 0 : 1;
    }
    EXPECT_GT(wrong, 0);
}

TEST(Run, FixedHSplitsEvenlyOverTheHDetectors) {
    TrialPlan p;
    p.policy = BobPolicy::fixed(ProjectionLabel::h);
    p.trials_per_setting = 10000;
    const auto t = tally(simulate(p, 1), Game::Projection);
    ASSERT_EQ(t.rows.size(), 1u);
    const auto& row = t.rows[0];
    EXPECT_EQ(row.clicks[2] + row.clicks[3], 0u);
    const double n = static_cast<double>(row.clicked);
    EXPECT_LT(std::abs(static_cast<double>(row.clicks[0]) - n / 2), 3 * std::sqrt(n / 4));
}

TEST(Run, BlindDetectorsExhaustEveryRun) {
    TrialPlan p;
    p.trials_per_setting = 20;
    p.max_resends = 30;
    p.imperfections.detector_efficiency = 0.0;
    const auto records = simulate(p, 1);
    for (const auto& r : records) {
        EXPECT_FALSE(r.detector_fired);
        EXPECT_EQ(r.resend_count, 30u);
    }
    const auto t = tally(records, Game::Projection);
    EXPECT_EQ(t.total_no_click, records.size());
    EXPECT_FALSE(t.average);
    for (const auto& row : t.rows) EXPECT_FALSE(row.fraction);
}

TEST(Run, ResendCountIsGeometricWithSuccessOneQuarter) {
    auto p = ideal_plan(Game::Projection, VaaVariant::First, 2000);
    const auto records = simulate(p, 1);
    const double n = static_cast<double>(records.size());
    double mean = 0.0;
    for (const auto& r : records) mean += r.resend_count;
    mean /= n;
    // failures before the first success: mean (1-p)/p, variance (1-p)/p^2
    const double q = 0.25;
    EXPECT_LT(std::abs(mean - (1 - q) / q), 3 * std::sqrt((1 - q) / (q * q) / n));
}

TEST(Run, ScriptedPolicyCycles) {
    TrialPlan p;
    p.policy = BobPolicy::scripted({ProjectionLabel::r, ProjectionLabel::v});
    p.trials_per_setting = 3;
    const auto records = simulate(p, 1);
    ASSERT_EQ(records.size(), 6u);
    for (std::size_t i = 0; i < records.size(); ++i) {
        EXPECT_EQ(records[i].bob_choice, BobChoice(i % 2 ? ProjectionLabel::v : ProjectionLabel::r));
    }
}

TEST(Run, DeterministicAcrossWorkerCounts) {
    TrialPlan p;
    p.trials_per_setting = 500;
    p.imperfections = demonstration_config();
    const auto a = tally(simulate(p, 1), p.game).to_csv();
    const auto b = tally(simulate(p, 3), p.game).to_csv();
    const auto c = tally(simulate(p, 8), p.game).to_csv();
    EXPECT_EQ(a, b);
    EXPECT_EQ(a, c);
    p.seed += 1;
    EXPECT_NE(a, tally(simulate(p, 1), p.game).to_csv());
}

TEST(Run, ExpectedSuccessIsExactWhenIdeal) {
    const Experiment e(ideal_plan(Game::SecondChallenge, VaaVariant::Second, 1));
    for (const auto& c : all_choices(Game::SecondChallenge)) EXPECT_NEAR(e.expected_success(c, 1), 1.0, 1e-12);
}

TEST(Tally, BinomialExample) {
    std::vector<RunRecord> records;
    for (int i = 0; i < 1000; ++i) records.push_back(record(ProjectionLabel::r, true, i < 956));
    const auto t = tally(records, Game::Projection);
    ASSERT_EQ(t.rows.size(), 1u);
    EXPECT_NEAR(*t.rows[0].fraction, 0.956, 1e-15);
    EXPECT_NEAR(t.rows[0].stderr_, 0.0065, 5e-5);
}

TEST(Tally, AllCorrectHasNoError) {
    std::vector<RunRecord> records;
    for (int i = 0; i < 60; ++i) records.push_back(record(all_choices(Game::Projection)[i % 6], true, true));
    const auto t = tally(records, Game::Projection);
    EXPECT_EQ(*t.average, 1.0);
    EXPECT_EQ(t.average_stderr, 0.0);
}

TEST(Tally, UndefinedFractionAndCsv) {
    std::vector<RunRecord> records = {record(ProjectionLabel::h, false, false), record(ProjectionLabel::v, true, true)};
    const auto t = tally(records, Game::Projection);
    ASSERT_EQ(t.rows.size(), 2u);
    EXPECT_EQ(t.rows[0].choice, BobChoice(ProjectionLabel::h));
    EXPECT_FALSE(t.rows[0].fraction);
    EXPECT_EQ(*t.rows[1].fraction, 1.0);
    EXPECT_EQ(*t.average, 1.0);
    const auto csv = t.to_csv();
    EXPECT_NE(csv.find("undefined"), std::string::npos);
    EXPECT_EQ(csv.substr(0, csv.find('\n')),
              "bob_choice,D0,D1,D2,D3,runs,clicked,no_click,correct,success_fraction,stderr");
    EXPECT_THROW(tally({}, Game::Projection), std::invalid_argument);
    EXPECT_THROW(tally(records, Game::SecondChallenge), std::invalid_argument);
}

TEST(TallyProperty, CountsAddUp) {
    testing::Gen g(51);
    for (int i = 0; i < 100; ++i) {
        std::vector<RunRecord> records;
        const int n = g.integer(1, 200);
        for (int k = 0; k < n; ++k) {
            auto r = record(all_choices(Game::SecondChallenge)[static_cast<std::size_t>(g.integer(0, 5))],
                            g.uniform(0, 1) < 0.7, g.uniform(0, 1) < 0.9);
            if (r.detector_fired) r.detector_fired = g.integer(0, 3);
            records.push_back(r);
        }
        const auto t = tally(records, Game::SecondChallenge);
        std::uint64_t runs = 0;
        for (const auto& row : t.rows) {
            EXPECT_EQ(std::accumulate(row.clicks.begin(), row.clicks.end(), std::uint64_t{0}), row.clicked);
            EXPECT_EQ(row.clicked + row.no_click, row.runs);
            if (row.fraction) {
                EXPECT_GE(*row.fraction, 0.0);
                EXPECT_LE(*row.fraction, 1.0);
            }
            runs += row.runs;
        }
        EXPECT_EQ(runs, static_cast<std::uint64_t>(n));
        EXPECT_EQ(t.total_runs, runs);
    }
}

TEST(Stderr, ShrinksAsInverseSquareRoot) {
    for (double p : {0.5, 0.9, 0.956}) {
        const double base = binomial_stderr(p, 100) * 10.0;
        EXPECT_NEAR(binomial_stderr(p, 1000) * std::sqrt(1000.0), base, 1e-12);
        EXPECT_NEAR(binomial_stderr(p, 10000) * 100.0, base, 1e-12);
    }
    // and empirically, on simulated tables
    TrialPlan plan;
    plan.imperfections = demonstration_config();
    plan.policy = BobPolicy::fixed(ProjectionLabel::plus);
    std::vector<double> scaled;
    for (std::uint64_t n : {100u, 1000u, 10000u}) {
        plan.trials_per_setting = n;
        const auto row = tally(simulate(plan, 1), Game::Projection).rows.at(0);
        scaled.push_back(row.stderr_ * std::sqrt(static_cast<double>(row.clicked)));
    }
    EXPECT_NEAR(scaled[0], scaled[2], 0.1);
    EXPECT_NEAR(scaled[1], scaled[2], 0.05);
}

TEST(Report, IdealPassesWithFullMargin) {
    const auto t = tally(simulate(ideal_plan(Game::Projection, VaaVariant::First, 200), 1), Game::Projection);
    const auto r = threshold_report(t, Game::Projection);
    EXPECT_TRUE(r.all_pass);
    for (const auto& c : r.channels) EXPECT_NEAR(c.margin, 1.0 - projection_game_threshold(), 1e-15);
    const auto c = threshold_report(
        tally(simulate(ideal_plan(Game::SecondChallenge, VaaVariant::First, 200), 1), Game::SecondChallenge),
        Game::SecondChallenge);
    EXPECT_TRUE(c.all_pass);
    EXPECT_NEAR(c.threshold, 5.0 / 6.0, 1e-15);
}

TEST(Report, AtOrBelowThresholdFails) {
    CountTable t;
    t.game = Game::Projection;
    CountRow row;
    row.choice = ProjectionLabel::h;
    row.fraction = 0.95;
    t.rows.push_back(row);
    t.average = 0.95;
    EXPECT_TRUE(threshold_report(t, Game::Projection).all_pass);
    t.rows[0].fraction = projection_game_threshold();
    EXPECT_FALSE(threshold_report(t, Game::Projection).all_pass);
    t.rows[0].fraction.reset();
    const auto r = threshold_report(t, Game::Projection);
    EXPECT_FALSE(r.all_pass);
    EXPECT_NE(r.to_text().find("FAIL h undefined"), std::string::npos);
}

}  // namespace
}  // namespace meanking
