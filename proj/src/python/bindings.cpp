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

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cli.hpp"
#include "meanking/experiment.hpp"
#include "meanking/serialization.hpp"
#include "meanking/strategies.hpp"

namespace py = pybind11;
using namespace meanking;

namespace {

std::vector<Amplitude> to_list(const StateVector& s) {
    return {s.amps().data(), s.amps().data() + s.amps().size()};
}

StateVector from_list(const std::vector<Amplitude>& a) {
    if (a.size() != 4) throw py::value_error("expected four amplitudes over (E,h), (E,v), (L,h), (L,v)");
    return StateVector(ModeBasis::timebin_polarization(), {a[0], a[1], a[2], a[3]});
}

py::object json_to_py(const Json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

Json py_to_json(const py::object& o) {
    return Json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

OpticalNetwork pipeline(Game game, const std::string& choice, VaaVariant variant) {
    if (game == Game::Projection) return projection_pipeline(parse_projection_label(choice), variant);
    return challenge_pipeline(parse_unitary_label(choice), variant);
}

}  // namespace

PYBIND11_MODULE(_meanking, m) {
    m.doc() = "Native core of the meanking package";

    py::register_exception<ProtocolError>(m, "ProtocolError", PyExc_ValueError);
    py::register_exception<SerializationError>(m, "SerializationError", PyExc_ValueError);
    py::register_exception<OpticsError>(m, "OpticsError", PyExc_ValueError);

    m.def("projection_game_threshold", &projection_game_threshold);
    m.def("second_challenge_threshold", &second_challenge_threshold);

    m.def("init_state", [] { return to_list(init_state()); });
    m.def("projected_state", [](const std::string& l) { return to_list(projected_state(parse_projection_label(l))); });
    m.def("challenge_post_state",
          [](const std::string& u) { return to_list(challenge_post_state(parse_unitary_label(u))); });
    m.def("vaa_basis", [](const std::string& variant) {
        std::vector<std::pair<std::string, std::vector<Amplitude>>> out;
        const auto& b = vaa_basis(parse_vaa_variant(variant));
        for (std::size_t k = 0; k < 4; ++k) out.emplace_back(to_string(b.outcomes[k]), to_list(b.states[k]));
        return out;
    });
    m.def(
        "measure_in_basis",
        [](const std::vector<Amplitude>& state, const std::string& variant) {
            const auto& b = vaa_basis(parse_vaa_variant(variant));
            const auto p = measure_in_basis(from_list(state), b);
            std::vector<std::pair<std::string, double>> out;
            for (std::size_t k = 0; k < 4; ++k) out.emplace_back(to_string(b.outcomes[k]), p[k]);
            return out;
        },
        py::arg("state"), py::arg("variant") = "first");
    m.def("project", [](const std::vector<Amplitude>& state, const std::string& label) {
        const auto r = project(from_list(state), parse_projection_label(label));
        return py::make_tuple(r.probability, r.post_state ? py::cast(to_list(*r.post_state)) : py::none());
    });
    m.def("alice_answer", [](const std::string& outcome, const std::string& pair) {
        return std::string(to_string(alice_answer(parse_vaa_outcome(outcome), parse_observable_pair(pair))));
    });
    m.def(
        "challenge_infer",
        [](const std::string& outcome, const std::string& pair, const std::string& variant) {
            return std::string(to_string(
                challenge_infer(parse_vaa_outcome(outcome), parse_observable_pair(pair), parse_vaa_variant(variant))));
        },
        py::arg("outcome"), py::arg("pair"), py::arg("variant") = "first");

    m.def(
        "evaluate",
        [](const std::string& game, double prep_theta, double prep_phi, double meas_theta, double meas_phi) {
            return evaluate(parse_game(game), {{prep_theta, prep_phi}, {meas_theta, meas_phi}});
        },
        py::arg("game"), py::arg("prep_theta"), py::arg("prep_phi"), py::arg("meas_theta"), py::arg("meas_phi"));
    m.def(
        "search_optimum",
        [](const std::string& game, int resolution, unsigned workers) {
            SearchResult r;
            {
                py::gil_scoped_release release;
                r = search_optimum(parse_game(game), resolution, workers);
            }
            return json_to_py(to_json(r));
        },
        py::arg("game"), py::arg("resolution") = 128, py::arg("workers") = 0);

    m.def(
        "ideal_distribution",
        [](const std::string& game, const std::string& choice, const std::string& variant) {
            const auto net = pipeline(parse_game(game), choice, parse_vaa_variant(variant));
            return json_to_py(to_json(propagate(net, source_photon(), {}, nominal_draws(net))));
        },
        py::arg("game"), py::arg("choice"), py::arg("variant") = "first");
    m.def("detector_outcomes", [](const std::string& variant) {
        std::vector<std::string> out;
        for (const auto& o : detector_outcomes(parse_vaa_variant(variant))) out.push_back(to_string(o));
        return out;
    });
    m.def("demonstration_config", [] { return json_to_py(to_json(demonstration_config())); });

    m.def(
        "simulate",
        [](const py::object& plan, unsigned workers) {
            const TrialPlan p = plan_from_json(py_to_json(plan));
            CountTable table;
            {
                py::gil_scoped_release release;
                table = tally(simulate(p, workers), p.game);
            }
            const auto report = threshold_report(table, p.game);
            return py::make_tuple(json_to_py(to_json(table)), json_to_py(to_json(report)), table.to_csv());
        },
        py::arg("plan"), py::arg("workers") = 0);

    m.def(
        "verify",
        [](const std::string& golden_dir) {
            auto checks = cli::invariant_checks();
            const auto golden =
                cli::golden_checks(golden_dir.empty() ? cli::default_golden_dir() : std::filesystem::path(golden_dir));
            checks.insert(checks.end(), golden.begin(), golden.end());
            std::vector<std::tuple<std::string, bool, std::string>> out;
            for (const auto& c : checks) out.emplace_back(c.name, c.pass, c.detail);
            return out;
        },
        py::arg("golden_dir") = "");
}
