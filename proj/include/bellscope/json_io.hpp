#pragma once

// JSON wire formats. Term lists are emitted in canonical (lexicographic)
// occupation order so repeated runs produce identical files.
//
//   polynomial  { "modes": D, "terms": [ { "occ": [..], "re": x, "im": y } ] }
//   matrix      { "d": D, "re": [[..]], "im": [[..]] }
//   elements    [ {"type":"bs","i":0,"j":1,"theta":t,"phi":p}, {"type":"ps","i":0,"phi":p} ]
//   strategy    { "network": <matrix|elements>, "aux": <polynomial>, "measure": m,
//                 "on": { "0": <child|label>, ... }, "otherwise": label }

#include <json.hpp>

#include <string>
#include <vector>

#include "bellscope/bell.hpp"
#include "bellscope/errors.hpp"
#include "bellscope/fock.hpp"
#include "bellscope/measurement.hpp"
#include "bellscope/network.hpp"
#include "bellscope/nogo_verify.hpp"
#include "bellscope/optimize.hpp"

namespace bellscope {

using Json = nlohmann::json;

inline Json to_json(const ModePolynomial& p) {
    Json terms = Json::array();
    for (const auto& [occ, amp] : p.terms())
        terms.push_back({{"occ", occ}, {"re", amp.real()}, {"im", amp.imag()}});
    return Json{{"modes", p.modes()}, {"terms", std::move(terms)}};
}

inline ModePolynomial polynomial_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("modes") || !j.contains("terms"))
        throw ValidationError("polynomial JSON needs \"modes\" and \"terms\"");
    const int modes = j.at("modes").get<int>();
    ModePolynomial::TermMap terms;
    for (const auto& t : j.at("terms")) {
        OccupationVector occ = t.at("occ").get<OccupationVector>();
        const Complex amp(t.at("re").get<double>(), t.value("im", 0.0));
        terms[std::move(occ)] += amp;
    }
    return ModePolynomial::from_terms(modes, std::move(terms));
}

inline Json to_json(const ModeUnitary& u) {
    const int d = u.dim();
    Json re = Json::array(), im = Json::array();
    for (int r = 0; r < d; ++r) {
        Json re_row = Json::array(), im_row = Json::array();
        for (int c = 0; c < d; ++c) {
            re_row.push_back(u.matrix()(r, c).real());
            im_row.push_back(u.matrix()(r, c).imag());
        }
        re.push_back(std::move(re_row));
        im.push_back(std::move(im_row));
    }
    return Json{{"d", d}, {"re", std::move(re)}, {"im", std::move(im)}};
}

inline ModeUnitary unitary_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("d") || !j.contains("re"))
        throw ValidationError("matrix JSON needs \"d\" and \"re\" (and optional \"im\")");
    const int d = j.at("d").get<int>();
    Eigen::MatrixXcd m(d, d);
    const Json& re = j.at("re");
    const Json* im = j.contains("im") ? &j.at("im") : nullptr;
    if (static_cast<int>(re.size()) != d)
        throw ValidationError("matrix JSON: \"re\" must have d rows");
    for (int r = 0; r < d; ++r) {
        if (static_cast<int>(re.at(r).size()) != d)
            throw ValidationError("matrix JSON: row " + std::to_string(r) + " must have d entries");
        for (int c = 0; c < d; ++c) {
            const double real = re.at(r).at(c).get<double>();
            const double imag = im != nullptr ? im->at(r).at(c).get<double>() : 0.0;
            m(r, c) = Complex(real, imag);
        }
    }
    return ModeUnitary(std::move(m));
}

inline Json to_json(const std::vector<NetworkElement>& elements) {
    Json arr = Json::array();
    for (const auto& e : elements) {
        if (const auto* bs = std::get_if<BeamSplitter>(&e))
            arr.push_back({{"type", "bs"},
                           {"i", bs->mode_i},
                           {"j", bs->mode_j},
                           {"theta", bs->theta},
                           {"phi", bs->phi}});
        else {
            const auto& ps = std::get<PhaseShifter>(e);
            arr.push_back({{"type", "ps"}, {"i", ps.mode}, {"phi", ps.phi}});
        }
    }
    return arr;
}

inline std::vector<NetworkElement> elements_from_json(const Json& j) {
    if (!j.is_array()) throw ValidationError("element list JSON must be an array");
    std::vector<NetworkElement> out;
    for (const auto& e : j) {
        const std::string type = e.at("type").get<std::string>();
        if (type == "bs")
            out.push_back(BeamSplitter{e.at("i").get<int>(), e.at("j").get<int>(),
                                       e.at("theta").get<double>(), e.value("phi", 0.0)});
        else if (type == "ps")
            out.push_back(PhaseShifter{e.at("i").get<int>(), e.at("phi").get<double>()});
        else
            throw ValidationError("unknown network element type \"" + type + "\"");
    }
    return out;
}

// Circuit files: either the matrix object, a bare element array (mode count
// inferred from the highest index), or { "modes": D, "elements": [...] }.
inline ModeUnitary circuit_from_json(const Json& j) {
    if (j.is_object() && j.contains("d")) return unitary_from_json(j);
    Json elements_json;
    int modes = -1;
    if (j.is_array()) {
        elements_json = j;
    } else if (j.is_object() && j.contains("elements")) {
        elements_json = j.at("elements");
        if (j.contains("modes")) modes = j.at("modes").get<int>();
    } else {
        throw ValidationError("circuit JSON: expected a matrix, an element array, or "
                              "{\"modes\", \"elements\"}");
    }
    const auto elements = elements_from_json(elements_json);
    if (modes < 0) {
        for (const auto& e : elements) {
            if (const auto* bs = std::get_if<BeamSplitter>(&e))
                modes = std::max({modes, bs->mode_i + 1, bs->mode_j + 1});
            else
                modes = std::max(modes, std::get<PhaseShifter>(e).mode + 1);
        }
        if (modes < 1) throw ValidationError("circuit JSON: cannot infer mode count");
    }
    return compose(elements, modes);
}

inline Json to_json(const ConditionalStrategy& s);

namespace detail {
inline Json strategy_node_to_json(const StrategyNode& node) {
    Json on = Json::object();
    for (const auto& [count, child] : node.on) {
        if (const auto* label = std::get_if<std::string>(&child))
            on[std::to_string(count)] = *label;
        else
            on[std::to_string(count)] =
                strategy_node_to_json(*std::get<std::shared_ptr<const StrategyNode>>(child));
    }
    return Json{{"network", to_json(node.network)},
                {"aux", to_json(node.aux)},
                {"measure", node.measure_mode},
                {"on", std::move(on)},
                {"otherwise", node.otherwise}};
}

inline std::shared_ptr<const StrategyNode> strategy_node_from_json(const Json& j) {
    ModeUnitary network = j.at("network").contains("d") ? unitary_from_json(j.at("network"))
                                                        : circuit_from_json(j.at("network"));
    ModePolynomial aux =
        j.contains("aux") && !j.at("aux").is_null() ? polynomial_from_json(j.at("aux"))
                                                    : ModePolynomial::vacuum(0);
    std::map<int, StrategyChild> on;
    if (j.contains("on")) {
        for (const auto& [key, value] : j.at("on").items()) {
            int count = 0;
            try {
                count = std::stoi(key);
            } catch (const std::exception&) {
                throw ValidationError("strategy JSON: \"on\" key \"" + key +
                                      "\" is not a photon count");
            }
            if (value.is_string())
                on.emplace(count, value.get<std::string>());
            else
                on.emplace(count, strategy_node_from_json(value));
        }
    }
    return std::make_shared<const StrategyNode>(std::move(network), std::move(aux),
                                                j.at("measure").get<int>(), std::move(on),
                                                j.value("otherwise", std::string("inconclusive")));
}
}  // namespace detail

inline Json to_json(const ConditionalStrategy& s) {
    Json j = detail::strategy_node_to_json(*s.root);
    j["input_modes"] = s.input_modes;
    return j;
}

inline ConditionalStrategy strategy_from_json(const Json& j) {
    ConditionalStrategy s;
    s.input_modes = j.at("input_modes").get<int>();
    s.root = detail::strategy_node_from_json(j);
    validate(s);
    return s;
}

inline Json to_json(const DiscriminationReport& report) {
    Json outcomes = Json::array();
    for (const auto& row : report.outcomes) {
        outcomes.push_back(
            {{"counts", row.counts},
             {"probs", row.probs},
             {"attribution",
              row.attribution ? std::string(to_string(*row.attribution)) : "ambiguous"}});
    }
    Json confusion = Json::array();
    for (const auto& row : report.confusion) confusion.push_back(row);
    return Json{{"success_fraction", report.success_fraction},
                {"outcomes", std::move(outcomes)},
                {"confusion", std::move(confusion)}};
}

inline DiscriminationReport report_from_json(const Json& j) {
    DiscriminationReport report;
    report.success_fraction = j.at("success_fraction").get<double>();
    for (const auto& row : j.at("outcomes")) {
        OutcomeAttribution out;
        out.counts = row.at("counts").get<OutcomeRecord>();
        out.probs = row.at("probs").get<std::array<double, 4>>();
        const std::string label = row.at("attribution").get<std::string>();
        out.attribution = bell_label_from_string(label);
        report.outcomes.push_back(std::move(out));
    }
    if (j.contains("confusion"))
        report.confusion = j.at("confusion").get<std::array<std::array<double, 5>, 4>>();
    return report;
}

inline Json to_json(const ScanOutcome& scan) {
    Json j{{"samples", scan.samples},
           {"violations", scan.violations},
           {"max_residual", scan.max_residual}};
    if (!scan.first_violation.empty()) j["first_violation"] = scan.first_violation;
    return j;
}

inline Json to_json(const NogoVerifyReport& report) {
    Json overlap = to_json(report.overlap_oracle);
    overlap["classification_mismatches"] = report.overlap_classification_mismatches;
    Json contradiction = to_json(report.contradiction);
    contradiction["min_overlap"] = report.contradiction_min_overlap;
    return Json{{"two_photon_scan", to_json(report.two_photon_scan)},
                {"factorization", to_json(report.factorization)},
                {"overlap_oracle", std::move(overlap)},
                {"contradiction", std::move(contradiction)},
                {"seed", report.seed},
                {"passed", report.all_passed()}};
}

inline Json to_json(const Parameterization& p) {
    return Json{{"modes", p.modes},
                {"thetas", p.thetas},
                {"phis", p.phis},
                {"output_phases", p.output_phases},
                {"aux_occupation", p.aux_occupation}};
}

inline Parameterization parameterization_from_json(const Json& j) {
    Parameterization p;
    p.modes = j.at("modes").get<int>();
    p.thetas = j.at("thetas").get<std::vector<double>>();
    p.phis = j.at("phis").get<std::vector<double>>();
    p.output_phases = j.at("output_phases").get<std::vector<double>>();
    p.aux_occupation = j.value("aux_occupation", OccupationVector{});
    if (p.aux_occupation.empty())
        p.aux_occupation.assign(static_cast<std::size_t>(std::max(0, p.modes - 4)), 0);
    validate(p);
    return p;
}

inline Json to_json(const OptimizeResult& result) {
    Json trace = Json::array();
    for (const auto& t : result.trace)
        trace.push_back({{"start", t.start_index},
                         {"sub_seed", t.sub_seed},
                         {"initial_s", t.initial_s},
                         {"final_s", t.final_s},
                         {"iterations", t.iterations},
                         {"evaluations", t.evaluations}});
    return Json{{"best_s", result.best_s},
                {"best_parameters", to_json(result.best)},
                {"trace", std::move(trace)}};
}

}  // namespace bellscope
