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

#include "meanking/serialization.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>

namespace meanking {

namespace {

void reject_unknown(const Json& j, const std::set<std::string>& allowed, const char* what) {
    if (!j.is_object()) throw SerializationError(std::string(what) + ": expected an object");
    for (const auto& [key, _] : j.items()) {
        if (!allowed.count(key)) throw SerializationError(std::string(what) + ": unknown key '" + key + "'");
    }
}

Amplitude amplitude_from_json(const Json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw SerializationError("amplitude must be a [re, im] pair");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

template <class T>
T get_number(const Json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    const auto& v = j.at(key);
    if (!v.is_number()) throw SerializationError(std::string("'") + key + "' must be a number");
    if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_integer()) throw SerializationError(std::string("'") + key + "' must be an integer");
        if (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0) {
            throw SerializationError(std::string("'") + key + "' must be non-negative");
        }
    }
    return v.get<T>();
}

Json optional_number(const std::optional<double>& x) {
    return x ? Json(round12(*x)) : Json("undefined");
}

}  // namespace

double round12(double x) {
    if (std::abs(x) < 1e-15) return 0.0;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return std::strtod(buf, nullptr);
}

Json to_json(const CVector& v) {
    Json out = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back({round12(v[i].real()), round12(v[i].imag())});
    return out;
}

CVector vector_from_json(const Json& j) {
    if (!j.is_array()) throw SerializationError("vector must be an array of [re, im] pairs");
    CVector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = amplitude_from_json(j[i]);
    return v;
}

Json to_json(const StateVector& s) { return to_json(s.amps()); }

Json to_json(const Operator& op) {
    Json out = Json::array();
    const auto& m = op.matrix();
    for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(to_json(CVector(m.row(r).transpose())));
    return out;
}

CMatrix matrix_from_json(const Json& j) {
    if (!j.is_array() || j.empty()) throw SerializationError("matrix must be a non-empty array of rows");
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = static_cast<Eigen::Index>(j[0].size());
    CMatrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const CVector row = vector_from_json(j[static_cast<std::size_t>(r)]);
        if (row.size() != cols) throw SerializationError("matrix rows differ in length");
        m.row(r) = row.transpose();
    }
    return m;
}

Json to_json(const VaaBasis& basis) {
    Json states = Json::array();
    for (std::size_t k = 0; k < 4; ++k) {
        states.push_back({{"outcome", to_string(basis.outcomes[k])}, {"amplitudes", to_json(basis.states[k])}});
    }
    return {{"variant", to_string(basis.variant)}, {"states", states}};
}

Json to_json(const ImperfectionConfig& cfg) {
    return {{"waveplate_angle_sigma", cfg.waveplate_angle_sigma},
            {"mzi_phase_sigma", cfg.mzi_phase_sigma},
            {"bs_ratio_delta", cfg.bs_ratio_delta},
            {"detector_efficiency", cfg.detector_efficiency},
            {"dark_click_prob", cfg.dark_click_prob}};
}

ImperfectionConfig imperfections_from_json(const Json& j) {
    reject_unknown(j,
                   {"waveplate_angle_sigma", "mzi_phase_sigma", "bs_ratio_delta", "detector_efficiency",
                    "dark_click_prob"},
                   "imperfections");
    ImperfectionConfig cfg;
    cfg.waveplate_angle_sigma = get_number(j, "waveplate_angle_sigma", cfg.waveplate_angle_sigma);
    cfg.mzi_phase_sigma = get_number(j, "mzi_phase_sigma", cfg.mzi_phase_sigma);
    cfg.bs_ratio_delta = get_number(j, "bs_ratio_delta", cfg.bs_ratio_delta);
    cfg.detector_efficiency = get_number(j, "detector_efficiency", cfg.detector_efficiency);
    cfg.dark_click_prob = get_number(j, "dark_click_prob", cfg.dark_click_prob);
    try {
        cfg.validate();
    } catch (const OpticsError& e) {
        throw SerializationError(std::string("imperfections: ") + e.what());
    }
    return cfg;
}

Json to_json(const BobPolicy& policy) {
    switch (policy.kind) {
        case BobPolicy::Kind::Uniform: return {{"kind", "uniform"}};
        case BobPolicy::Kind::Fixed: return {{"kind", "fixed"}, {"label", to_string(policy.choices.at(0))}};
        case BobPolicy::Kind::Scripted: {
            Json labels = Json::array();
            for (const auto& c : policy.choices) labels.push_back(to_string(c));
            return {{"kind", "scripted"}, {"labels", labels}};
        }
    }
    return {};
}

BobPolicy policy_from_json(const Json& j, Game game) {
    if (j.is_string()) {
        if (j.get<std::string>() == "uniform") return BobPolicy::uniform();
        throw SerializationError("policy: expected \"uniform\" or an object");
    }
    reject_unknown(j, {"kind", "label", "labels"}, "policy");
    const std::string kind = j.value("kind", "");
    try {
        if (kind == "uniform") return BobPolicy::uniform();
        if (kind == "fixed") {
            if (!j.contains("label")) throw SerializationError("policy: fixed needs 'label'");
            return BobPolicy::fixed(parse_bob_choice(game, j.at("label").get<std::string>()));
        }
        if (kind == "scripted") {
            if (!j.contains("labels") || !j.at("labels").is_array()) {
                throw SerializationError("policy: scripted needs a 'labels' array");
            }
            std::vector<BobChoice> cs;
            for (const auto& l : j.at("labels")) cs.push_back(parse_bob_choice(game, l.get<std::string>()));
            return BobPolicy::scripted(std::move(cs));
        }
    } catch (const ProtocolError& e) {
        throw SerializationError(std::string("policy: ") + e.what());
    } catch (const Json::exception& e) {
        throw SerializationError(std::string("policy: ") + e.what());
    }
    throw SerializationError("policy: unknown kind '" + kind + "'");
}

Json to_json(const TrialPlan& plan) {
    return {{"game", to_string(plan.game)},
            {"variant", to_string(plan.variant)},
            {"policy", to_json(plan.policy)},
            {"trials_per_setting", plan.trials_per_setting},
            {"max_resends", plan.max_resends},
            {"seed", plan.seed},
            {"imperfections", to_json(plan.imperfections)}};
}

TrialPlan plan_from_json(const Json& j) {
    reject_unknown(j, {"game", "variant", "policy", "trials_per_setting", "max_resends", "seed", "imperfections"},
                   "plan");
    TrialPlan plan;
    try {
        if (j.contains("game")) plan.game = parse_game(j.at("game").get<std::string>());
        if (j.contains("variant")) plan.variant = parse_vaa_variant(j.at("variant").get<std::string>());
    } catch (const ProtocolError& e) {
        throw SerializationError(std::string("plan: ") + e.what());
    } catch (const Json::exception& e) {
        throw SerializationError(std::string("plan: ") + e.what());
    }
    if (j.contains("policy")) plan.policy = policy_from_json(j.at("policy"), plan.game);
    plan.trials_per_setting = get_number(j, "trials_per_setting", plan.trials_per_setting);
    plan.max_resends = get_number(j, "max_resends", plan.max_resends);
    plan.seed = get_number(j, "seed", plan.seed);
    if (j.contains("imperfections")) plan.imperfections = imperfections_from_json(j.at("imperfections"));
    try {
        plan.validate();
    } catch (const std::invalid_argument& e) {
        throw SerializationError(std::string("plan: ") + e.what());
    }
    return plan;
}

Json to_json(const CountTable& table) {
    Json rows = Json::array();
    for (const auto& r : table.rows) {
        rows.push_back({{"bob_choice", to_string(r.choice)},
                        {"clicks", r.clicks},
                        {"runs", r.runs},
                        {"clicked", r.clicked},
                        {"no_click", r.no_click},
                        {"correct", r.correct},
                        {"dark", r.dark},
                        {"success_fraction", optional_number(r.fraction)},
                        {"stderr", round12(r.stderr_)}});
    }
    return {{"game", to_string(table.game)},
            {"rows", rows},
            {"average", optional_number(table.average)},
            {"average_stderr", round12(table.average_stderr)},
            {"total_runs", table.total_runs},
            {"total_clicked", table.total_clicked},
            {"total_no_click", table.total_no_click}};
}

Json to_json(const ThresholdReport& report) {
    auto channel = [](const ChannelVerdict& v) {
        return Json{{"name", v.name},
                    {"fraction", optional_number(v.fraction)},
                    {"margin", round12(v.margin)},
                    {"pass", v.pass}};
    };
    Json channels = Json::array();
    for (const auto& c : report.channels) channels.push_back(channel(c));
    return {{"game", to_string(report.game)},
            {"threshold", round12(report.threshold)},
            {"channels", channels},
            {"average", channel(report.average)},
            {"all_pass", report.all_pass}};
}

Json to_json(const SearchResult& result) {
    const auto& s = result.argmax;
    return {{"game", to_string(result.game)},
            {"resolution", result.resolution},
            {"optimum", round12(result.value)},
            {"argmax_angles",
             {{"prep_theta", round12(s.prep.theta)},
              {"prep_phi", round12(s.prep.phi)},
              {"meas_theta", round12(s.meas.theta)},
              {"meas_phi", round12(s.meas.phi)}}},
            {"runtime_ms", round12(result.runtime_ms)}};
}

Json to_json(const DetectionDistribution& d) {
    auto rounded = [](const std::vector<double>& xs) {
        Json out = Json::array();
        for (double x : xs) out.push_back(round12(x));
        return out;
    };
    return {{"clicks", rounded(d.clicks)},
            {"conditional", rounded(d.conditional())},
            {"out_of_gate", round12(d.out_of_gate)},
            {"undetected", round12(d.undetected)},
            {"no_photon", round12(d.no_photon)}};
}

Json load_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw SerializationError(path.string() + ": cannot open");
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw SerializationError(path.string() + ": " + e.what());
    }
}

}  // namespace meanking
