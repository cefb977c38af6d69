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

#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "meanking/experiment.hpp"
#include "meanking/serialization.hpp"
#include "meanking/strategies.hpp"

#ifndef MEANKING_GOLDEN_DIR
#define MEANKING_GOLDEN_DIR "data/golden"
#endif

namespace meanking::cli {

namespace {

constexpr double kExact = 1e-12;
constexpr double kGoldenTol = 1e-9;

std::string fmt12(double x) {
    if (std::abs(x) < 1e-15) x = 0.0;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::string fmt_amps(const CVector& v) {
    std::string s = "[";
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i) s += ", ";
        s += "(" + fmt12(v[i].real()) + ", " + fmt12(v[i].imag()) + ")";
    }
    return s + "]";
}

Check check(std::string name, const std::function<std::string()>& body) {
    Check c{std::move(name), false, {}};
    try {
        c.detail = body();
        c.pass = c.detail.empty();
    } catch (const std::exception& e) {
        c.detail = e.what();
    }
    return c;
}

std::vector<OpticalNetwork> all_pipelines() {
    std::vector<OpticalNetwork> nets;
    for (auto v : kVaaVariants) {
        for (auto l : kProjectionLabels) nets.push_back(projection_pipeline(l, v));
        for (auto u : kUnitaryLabels) nets.push_back(challenge_pipeline(u, v));
    }
    return nets;
}

double max_diff(const CVector& a, const CVector& b) {
    if (a.size() != b.size()) return INFINITY;
    return (a - b).cwiseAbs().maxCoeff();
}

std::string compare_number(const std::string& what, double got, double want, double tol = kGoldenTol) {
    if (std::abs(got - want) <= tol) return {};
    return what + ": " + fmt12(got) + " != " + fmt12(want);
}

std::string compare_amps(const std::string& what, const CVector& got, const Json& want) {
    const CVector w = vector_from_json(want);
    if (max_diff(got, w) <= kGoldenTol) return {};
    return what + ": " + fmt_amps(got) + " != " + fmt_amps(w);
}

std::string compare_series(const std::string& what, const std::vector<double>& got, const Json& want) {
    if (!want.is_array() || want.size() != got.size()) return what + ": length mismatch";
    for (std::size_t k = 0; k < got.size(); ++k) {
        auto d = compare_number(what + "[" + std::to_string(k) + "]", got[k], want[k].get<double>());
        if (!d.empty()) return d;
    }
    return {};
}

std::string variant_key(VaaVariant v) { return std::string(to_string(v)); }

// Average in-gate probabilities with every interferometer phase stepped over
// an 8-point grid.
std::vector<double> dephased_in_gate(const OpticalNetwork& net) {
    std::vector<std::size_t> phases;
    for (std::size_t k = 0; k < net.elements.size(); ++k) {
        const auto& e = net.elements[k];
        if (e.kind == ElementKind::Phase && e.interferometer_phase) phases.push_back(k);
    }
    const int steps = 8;
    std::size_t combos = 1;
    for (std::size_t i = 0; i < phases.size(); ++i) combos *= steps;
    std::vector<double> acc(net.detectors.size(), 0.0);
    auto draws = nominal_draws(net);
    for (std::size_t c = 0; c < combos; ++c) {
        std::size_t rest = c;
        for (auto k : phases) {
            draws[k].phase_error = 2.0 * M_PI * static_cast<double>(rest % steps) / steps;
            rest /= steps;
        }
        const auto d = propagate(net, source_photon(), {}, draws);
        for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += d.photon_in_gate[k];
    }
    for (auto& x : acc) x /= static_cast<double>(combos);
    return acc;
}

using GoldenBody = std::function<std::string(const Json&)>;

std::string golden_vaa(const Json& j) {
    for (auto v : kVaaVariants) {
        const auto& basis = vaa_basis(v);
        const auto& entries = j.at(variant_key(v));
        if (entries.size() != 4) return variant_key(v) + ": expected 4 states";
        for (std::size_t k = 0; k < 4; ++k) {
            if (entries[k].at("outcome").get<std::string>() != to_string(basis.outcomes[k])) {
                return variant_key(v) + ": outcome order differs at " + std::to_string(k);
            }
            auto d = compare_amps(variant_key(v) + " " + to_string(basis.outcomes[k]), basis.states[k].amps(),
                                  entries[k].at("amplitudes"));
            if (!d.empty()) return d;
        }
    }
    return {};
}

std::string golden_projected(const Json& j) {
    if (auto d = compare_amps("init", init_state().amps(), j.at("init")); !d.empty()) return d;
    for (auto l : kProjectionLabels) {
        const std::string key(to_string(l));
        if (auto d = compare_amps(key, projected_state(l).amps(), j.at("states").at(key)); !d.empty()) return d;
        if (auto d = compare_number("overlap " + key, project(init_state(), l).probability,
                                    j.at("overlaps").at(key).get<double>());
            !d.empty()) {
            return d;
        }
    }
    for (auto g : {Game::Projection, Game::SecondChallenge}) {
        const std::string key(to_string(g));
        if (auto d = compare_number("threshold " + key, single_qubit_threshold(g),
                                    j.at("thresholds").at(key).get<double>(), kExact);
            !d.empty()) {
            return d;
        }
    }
    return {};
}

std::string golden_post_states(const Json& j) {
    for (auto u : kUnitaryLabels) {
        const std::string key(to_string(u));
        if (auto d = compare_amps(key, challenge_post_state(u).amps(), j.at(key)); !d.empty()) return d;
    }
    return {};
}

std::string golden_inference(const Json& j) {
    for (auto v : kVaaVariants) {
        const auto& table = challenge_table(v);
        const auto& entry = j.at(variant_key(v));
        std::size_t n = 0;
        for (const auto& e : entry.at("entries")) {
            const auto outcome = parse_vaa_outcome(e.at("outcome").get<std::string>());
            const auto pair = parse_observable_pair(e.at("pair").get<std::string>());
            const auto want = parse_unitary_label(e.at("unitary").get<std::string>());
            if (table.infer(outcome, pair) != want) {
                return variant_key(v) + ": " + to_string(outcome) + " with " + std::string(to_string(pair)) +
                       " infers " + std::string(to_string(table.infer(outcome, pair)));
            }
            ++n;
        }
        if (n != 12) return variant_key(v) + ": expected 12 table entries";
        for (auto u : kUnitaryLabels) {
            std::vector<std::string> got, want;
            for (const auto& o : table.support(u)) got.push_back(to_string(o));
            for (const auto& o : entry.at("supports").at(std::string(to_string(u)))) want.push_back(o);
            std::sort(got.begin(), got.end());
            std::sort(want.begin(), want.end());
            if (got != want) return variant_key(v) + ": support of " + std::string(to_string(u)) + " differs";
        }
    }
    return {};
}

std::string golden_optics(const Json& j) {
    for (auto v : kVaaVariants) {
        const auto& entry = j.at(variant_key(v));
        const auto& outcomes = detector_outcomes(v);
        for (std::size_t k = 0; k < 4; ++k) {
            if (entry.at("detectors")[k].get<std::string>() != to_string(outcomes[k])) {
                return variant_key(v) + ": detector " + std::to_string(k) + " routing differs";
            }
        }
        auto cmp = [&](const std::string& game, const std::string& key, const OpticalNetwork& net) {
            const auto d = propagate(net, source_photon(), {}, nominal_draws(net));
            const auto& want = entry.at(game).at(key);
            auto what = variant_key(v) + " " + key;
            if (auto m = compare_number(what + " click", d.click_probability(),
                                        want.at("click_probability").get<double>());
                !m.empty()) {
                return m;
            }
            return compare_series(what, d.conditional(), want.at("conditional"));
        };
        for (auto l : kProjectionLabels) {
            if (auto d = cmp("projection", std::string(to_string(l)), projection_pipeline(l, v)); !d.empty()) return d;
        }
        for (auto u : kUnitaryLabels) {
            if (auto d = cmp("second-challenge", std::string(to_string(u)), challenge_pipeline(u, v)); !d.empty()) {
                return d;
            }
        }
    }
    return {};
}

std::string golden_jones(const Json& j) {
    const double deg = M_PI / 180.0;
    auto cmp = [&](const char* key, const Operator& op) -> std::string {
        const CMatrix want = matrix_from_json(j.at(key));
        if (want.rows() != 2 || want.cols() != 2 || (op.matrix() - want).cwiseAbs().maxCoeff() > kGoldenTol) {
            return std::string(key) + " differs";
        }
        return {};
    };
    for (auto [key, op] : {std::pair{"hwp_22.5", jones(WaveplateKind::Half, 22.5 * deg)},
                           std::pair{"hwp_45", jones(WaveplateKind::Half, 45.0 * deg)},
                           std::pair{"qwp_45", jones(WaveplateKind::Quarter, 45.0 * deg)},
                           std::pair{"qwp_-45", jones(WaveplateKind::Quarter, -45.0 * deg)}}) {
        if (auto d = cmp(key, op); !d.empty()) return d;
    }
    const auto out = apply(jones(WaveplateKind::Quarter, 45.0 * deg), polarization_ket(ProjectionLabel::r));
    if (auto d = compare_amps("qwp_45_on_r", out.amps(), j.at("qwp_45_on_r")); !d.empty()) return d;
    return compare_number("qwp_45_on_r_fidelity_h", fidelity(out, polarization_ket(ProjectionLabel::h)),
                          j.at("qwp_45_on_r_fidelity_h").get<double>());
}

std::string golden_dephased(const Json& j) {
    for (auto v : kVaaVariants) {
        for (auto l : kProjectionLabels) {
            const std::string key(to_string(l));
            const auto got = dephased_in_gate(projection_pipeline(l, v));
            if (auto d = compare_series(variant_key(v) + " " + key, got, j.at(variant_key(v)).at(key).at("in_gate"));
                !d.empty()) {
                return d;
            }
        }
    }
    return {};
}

std::string golden_demo(const Json& j) {
    if (imperfections_from_json(j.at("config")) != demonstration_config()) {
        return "recorded config differs from the built-in demonstration config";
    }
    for (const char* g : {"projection", "second-challenge"}) {
        const double worst = j.at(g).at("worst").get<double>();
        const double half = j.at("half_width").get<double>();
        if (!(worst - half > single_qubit_threshold(parse_game(g)))) {
            return std::string(g) + ": recorded band reaches the threshold";
        }
    }
    return {};
}

void print_checks(const std::vector<Check>& checks, bool json, std::ostream& out) {
    bool all = std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
    if (json) {
        Json arr = Json::array();
        for (const auto& c : checks) arr.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
        out << Json{{"checks", arr}, {"all_pass", all}}.dump(1) << '\n';
        return;
    }
    for (const auto& c : checks) {
        out << (c.pass ? "PASS " : "FAIL ") << c.name;
        if (!c.pass) out << ": " << c.detail;
        out << '\n';
    }
    out << (all ? "all checks passed" : "some checks FAILED") << '\n';
}

// ---------------------------------------------------------------- table

Json table_json() {
    Json j;
    for (auto v : kVaaVariants) j["vaa_bases"][variant_key(v)] = to_json(vaa_basis(v))["states"];
    j["init"] = to_json(init_state());
    for (auto l : kProjectionLabels) {
        const std::string key(to_string(l));
        j["projected_states"][key] = to_json(projected_state(l));
        j["overlaps"][key] = round12(project(init_state(), l).probability);
    }
    for (auto u : kUnitaryLabels) j["challenge_post_states"][std::string(to_string(u))] = to_json(challenge_post_state(u));
    j["thresholds"]["projection"] = round12(projection_game_threshold());
    j["thresholds"]["second-challenge"] = round12(second_challenge_threshold());
    return j;
}

void table_text(std::ostream& out) {
    for (auto v : kVaaVariants) {
        out << "VAA basis (" << to_string(v) << ")\n";
        const auto& b = vaa_basis(v);
        for (std::size_t k = 0; k < 4; ++k) out << "  " << to_string(b.outcomes[k]) << "  " << fmt_amps(b.states[k].amps()) << '\n';
    }
    out << "initial state\n  " << fmt_amps(init_state().amps()) << '\n';
    out << "projected states, overlap with the initial state\n";
    for (auto l : kProjectionLabels) {
        out << "  " << to_string(l) << "  " << fmt_amps(projected_state(l).amps()) << "  overlap "
            << fmt12(project(init_state(), l).probability) << '\n';
    }
    out << "second challenge post-states\n";
    for (auto u : kUnitaryLabels) out << "  " << to_string(u) << "  " << fmt_amps(challenge_post_state(u).amps()) << '\n';
    out << "thresholds\n";
    out << "  projection        " << fmt12(projection_game_threshold()) << " = (2+2^(-1/2))/3\n";
    out << "  second-challenge  " << fmt12(second_challenge_threshold()) << " = 5/6\n";
}

// ---------------------------------------------------------------- game

int play(Game game, VaaVariant variant, const ImperfectionConfig& cfg, std::uint64_t seed, int rounds,
         std::istream& in, std::ostream& out) {
    const auto choices = all_choices(game);
    std::string menu;
    for (const auto& c : choices) menu += (menu.empty() ? "" : " ") + to_string(c);
    out << (game == Game::Projection ? "Projection game" : "Second Challenge") << ", " << to_string(variant)
        << " VAA analyzer. You are Bob; Alice guesses.\n";

    int played = 0, correct = 0;
    for (int round = 1; rounds <= 0 || round <= rounds;) {
        out << "Round " << round << ". Choose [" << menu << "] or quit: " << std::flush;
        std::string line;
        if (!std::getline(in, line)) break;
        line.erase(0, line.find_first_not_of(" \t\r"));
        line.erase(line.find_last_not_of(" \t\r") + 1);
        if (line == "quit" || line == "q") break;
        BobChoice choice;
        try {
            choice = parse_bob_choice(game, line);
        } catch (const ProtocolError&) {
            out << "Unrecognised choice '" << line << "'.\n";
            continue;
        }

        TrialPlan plan;
        plan.game = game;
        plan.variant = variant;
        plan.policy = BobPolicy::fixed(choice);
        plan.trials_per_setting = 1;
        plan.seed = seed;
        plan.imperfections = cfg;
        const auto rec = Experiment(plan).run(static_cast<std::uint64_t>(round - 1));
        for (std::uint32_t k = 0; k < rec.resend_count; ++k) {
            out << "  No detector fired. Alice sends another photon.\n";
        }
        ++round;
        if (!rec.detector_fired) {
            out << "  No detector fired after " << (rec.resend_count + 1) << " photons; the round is void.\n";
            continue;
        }
        ++played;
        correct += rec.correct ? 1 : 0;
        out << "  Detector D" << *rec.detector_fired << " fired";
        if (rec.dark_click) out << " (dark count)";
        out << ". Alice records outcome " << to_string(*rec.outcome) << ".\n";
        const auto pair = std::visit([](auto l) { return pair_of(l); }, choice);
        out << "  Bob reveals " << to_string(pair) << ". Alice guesses " << to_string(*rec.alice_guess) << ": "
            << (rec.correct ? "correct" : "wrong") << ". Score " << correct << "/" << played << ".\n";
    }
    out << "Final score " << correct << "/" << played << ".\n";
    return 0;
}

std::uint64_t parse_seed(const std::string& text) {
    std::size_t used = 0;
    const auto value = std::stoull(text, &used, 0);
    if (used != text.size()) throw std::invalid_argument("seed '" + text + "' is not an integer");
    return value;
}

}  // namespace

std::filesystem::path default_golden_dir() {
    if (const char* env = std::getenv(kGoldenEnv); env && *env) return env;
    return MEANKING_GOLDEN_DIR;
}

std::uint64_t default_seed() {
    if (const char* env = std::getenv(kSeedEnv); env && *env) {
        try {
            return parse_seed(env);
        } catch (const std::exception&) {
        }
    }
    return kDefaultSeed;
}

std::vector<Check> invariant_checks() {
    std::vector<Check> checks;
    for (auto v : kVaaVariants) {
        const std::string key = variant_key(v);
        checks.push_back(check("vaa." + key + ".orthonormal", [v] {
            const double d = orthonormality_defect(vaa_basis(v).state_list());
            return d <= kExact ? std::string() : "defect " + fmt12(d);
        }));
        checks.push_back(check("vaa." + key + ".complement_orthogonal", [v] {
            const auto& b = vaa_basis(v);
            for (std::size_t k = 0; k < 4; ++k) {
                for (auto label : {b.outcomes[k].x, b.outcomes[k].y, b.outcomes[k].z}) {
                    const double a = std::abs(inner(projected_state(complement(label)), b.states[k]));
                    if (a > kExact) return to_string(b.outcomes[k]) + " overlaps " + std::string(to_string(complement(label)));
                }
            }
            return std::string();
        }));
    }
    checks.push_back(check("protocol.uniform_overlap", [] {
        for (auto l : kProjectionLabels) {
            const double p = project(init_state(), l).probability;
            if (std::abs(p - 0.5) > kExact) return std::string(to_string(l)) + ": " + fmt12(p);
        }
        return std::string();
    }));
    checks.push_back(check("optics.unitarity", [] {
        std::mt19937_64 rng(1);
        for (const auto& net : all_pipelines()) {
            for (const auto& draws : {nominal_draws(net, demonstration_config()),
                                      sample_draws(net, demonstration_config(), rng)}) {
                for (std::size_t k = 0; k < net.elements.size(); ++k) {
                    const double d = element_map(net.elements[k], draws[k]).unitarity_defect();
                    if (d > kExact) return net.elements[k].name + ": defect " + fmt12(d);
                }
            }
        }
        return std::string();
    }));
    for (auto v : kVaaVariants) {
        checks.push_back(check("optics." + variant_key(v) + ".oracle_equivalence", [v] {
            const auto& outcomes = detector_outcomes(v);
            const auto& basis = vaa_basis(v);
            for (auto l : kProjectionLabels) {
                const auto net = projection_pipeline(l, v);
                const auto cond = propagate(net, source_photon(), {}, nominal_draws(net)).conditional();
                const auto theory = measure_in_basis(projected_state(l), basis);
                for (std::size_t k = 0; k < 4; ++k) {
                    const double want = theory[basis.index_of(outcomes[k])];
                    if (std::abs(cond[k] - want) > 1e-9) {
                        return std::string(to_string(l)) + " D" + std::to_string(k) + ": " + fmt12(cond[k]) +
                               " != " + fmt12(want);
                    }
                }
            }
            return std::string();
        }));
        checks.push_back(check("retrodiction.projection." + variant_key(v), [v] {
            const auto& basis = vaa_basis(v);
            for (auto l : kProjectionLabels) {
                const auto p = measure_in_basis(projected_state(l), basis);
                for (std::size_t k = 0; k < 4; ++k) {
                    if (p[k] > 1e-9 && alice_answer(basis.outcomes[k], pair_of(l)) != l) {
                        return std::string(to_string(l)) + " misread from " + to_string(basis.outcomes[k]);
                    }
                }
            }
            return std::string();
        }));
        checks.push_back(check("retrodiction.challenge." + variant_key(v), [v] {
            const auto& basis = vaa_basis(v);
            for (auto u : kUnitaryLabels) {
                const auto p = measure_in_basis(challenge_post_state(u), basis);
                for (std::size_t k = 0; k < 4; ++k) {
                    if (p[k] > 1e-9 && challenge_infer(basis.outcomes[k], pair_of(u), v) != u) {
                        return std::string(to_string(u)) + " misread from " + to_string(basis.outcomes[k]);
                    }
                }
            }
            return std::string();
        }));
    }
    checks.push_back(check("strategies.explicit_threshold", [] {
        const SingleQubitStrategy s{{M_PI / 2, M_PI / 2}, {M_PI / 4, 0.0}};
        return compare_number("(r, x+z)", evaluate_projection_game(s), projection_game_threshold(), kExact);
    }));
    checks.push_back(check("optics.conservation", [] {
        std::mt19937_64 rng(2);
        for (const auto& net : all_pipelines()) {
            const auto d = propagate(net, source_photon(), demonstration_config(),
                                     sample_draws(net, demonstration_config(), rng));
            if (std::abs(d.total() - 1.0) > 1e-9) return "total " + fmt12(d.total());
        }
        return std::string();
    }));
    return checks;
}

std::vector<Check> golden_checks(const std::filesystem::path& dir) {
    const std::vector<std::pair<std::string, GoldenBody>> files = {
        {"vaa_bases.json", golden_vaa},
        {"projected_states.json", golden_projected},
        {"challenge_post_states.json", golden_post_states},
        {"inference_tables.json", golden_inference},
        {"optics_ideal.json", golden_optics},
        {"jones_conventions.json", golden_jones},
        {"dephased.json", golden_dephased},
        {"demo_band.json", golden_demo},
    };
    std::vector<Check> checks;
    for (const auto& [file, body] : files) {
        const auto path = dir / file;
        Check c = check("golden." + file, [&] { return body(load_json_file(path)); });
        if (!c.pass && c.detail.find(path.string()) == std::string::npos) c.detail = path.string() + ": " + c.detail;
        checks.push_back(std::move(c));
    }
    return checks;
}

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"Mean King retrodiction toolkit", "meanking"};
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);

    bool json = false;
    std::string golden_dir;
    auto* verify = app.add_subcommand("verify", "Run invariant and golden-file checks");
    verify->add_flag("--json", json, "Machine-readable output");
    verify->add_option("--golden-dir", golden_dir, "Directory holding the golden JSON files");

    auto* table = app.add_subcommand("table", "Print the exact states, overlaps and thresholds");
    table->add_flag("--json", json, "Machine-readable output");

    std::string plan_path;
    unsigned workers = 0;
    std::optional<std::string> seed_text;
    bool enforce = false, csv = false;
    auto* simulate_cmd = app.add_subcommand("simulate", "Run a trial plan and print the count table");
    simulate_cmd->add_option("plan", plan_path, "Trial plan (JSON)")->required()->check(CLI::ExistingFile);
    simulate_cmd->add_flag("--csv", csv, "CSV output (default)");
    simulate_cmd->add_flag("--json", json, "JSON output");
    simulate_cmd->add_option("--workers", workers, "Worker threads (0 = hardware)");
    simulate_cmd->add_option("--seed", seed_text, "Override the plan seed");
    simulate_cmd->add_flag("--enforce-threshold", enforce, "Exit 1 unless every channel beats the threshold");

    std::string game_name = "projection";
    int resolution = 128;
    auto* optimize = app.add_subcommand("optimize", "Grid search for the best single-qubit strategy");
    optimize->add_option("--game", game_name, "projection | second-challenge")->check(
        CLI::IsMember({"projection", "challenge", "second-challenge"}));
    optimize->add_option("--resolution", resolution, "Grid cells per angle (>= 64)");
    optimize->add_option("--workers", workers, "Worker threads (0 = hardware)");

    std::string variant_name = "first";
    bool challenge = false;
    std::string imperfections_path;
    int rounds = 0;
    auto* game_cmd = app.add_subcommand("game", "Play Bob against the simulated Alice");
    game_cmd->add_option("--variant", variant_name, "first | second")->check(CLI::IsMember({"first", "second"}));
    game_cmd->add_flag("--challenge", challenge, "Play the Second Challenge");
    game_cmd->add_option("--imperfections", imperfections_path, "Imperfection config (JSON)")
        ->check(CLI::ExistingFile);
    game_cmd->add_option("--seed", seed_text, "Random seed");
    game_cmd->add_option("--rounds", rounds, "Stop after this many rounds (0 = until quit)");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    if (!rev.empty()) rev.pop_back();
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (verify->parsed()) {
            auto checks = invariant_checks();
            auto golden = golden_checks(golden_dir.empty() ? default_golden_dir() : std::filesystem::path(golden_dir));
            checks.insert(checks.end(), golden.begin(), golden.end());
            print_checks(checks, json, out);
            return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; }) ? 0 : 1;
        }
        if (table->parsed()) {
            if (json) {
                out << table_json().dump(1) << '\n';
            } else {
                table_text(out);
            }
            return 0;
        }
        if (simulate_cmd->parsed()) {
            const Json doc = load_json_file(plan_path);
            TrialPlan plan = plan_from_json(doc);
            if (seed_text) {
                plan.seed = parse_seed(*seed_text);
            } else if (!doc.contains("seed")) {
                plan.seed = default_seed();
            }
            const auto table_out = tally(simulate(plan, workers), plan.game);
            const auto report = threshold_report(table_out, plan.game);
            if (json) {
                out << Json{{"plan", to_json(plan)}, {"table", to_json(table_out)}, {"report", to_json(report)}}.dump(1)
                    << '\n';
            } else {
                out << table_out.to_csv();
            }
            if (enforce) {
                err << report.to_text();
                return report.all_pass ? 0 : 1;
            }
            return 0;
        }
        if (optimize->parsed()) {
            const auto result = search_optimum(parse_game(game_name), resolution, workers);
            out << to_json(result).dump(1) << '\n';
            return 0;
        }
        if (game_cmd->parsed()) {
            ImperfectionConfig cfg;
            if (!imperfections_path.empty()) cfg = imperfections_from_json(load_json_file(imperfections_path));
            const std::uint64_t seed = seed_text ? parse_seed(*seed_text) : default_seed();
            return play(challenge ? Game::SecondChallenge : Game::Projection, parse_vaa_variant(variant_name), cfg,
                        seed, rounds, in, out);
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}

}  // namespace meanking::cli
