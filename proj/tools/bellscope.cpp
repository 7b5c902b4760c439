// bellscope command-line tool: reproducible simulation, verification, and
// search runs over linear-optical Bell measurements. Every command is
// deterministic given its flags and seed.
//
// Exit codes: 0 success, 1 check failure, 2 usage or parse error,
// 3 resource guard.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "bellscope/bellscope.hpp"

namespace {

using namespace bellscope;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitResourceGuard = 3;

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

class Stopwatch {
public:
    double elapsed_ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

Json make_manifest(const std::string& command, Json config, std::uint64_t seed, double wall_ms) {
    return Json{{"command", command},
                {"config", std::move(config)},
                {"seed", seed},
                {"version", std::string(kVersion)},
                {"wall_time_ms", wall_ms}};
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open output file: " + path);
    out << content;
}

// JSON payloads go to --out when given, stdout otherwise.
void emit(const std::optional<std::string>& out_path, const std::string& content) {
    if (out_path) write_text_file(*out_path, content);
    else std::cout << content;
}

Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open file: " + path);
    return Json::parse(in);  // parse errors carry line/position context
}

DetectorKind parse_detector(const std::string& name) {
    if (name == "number") return DetectorKind::NumberResolving;
    if (name == "threshold") return DetectorKind::Threshold;
    throw ValidationError("unknown detector model \"" + name + "\" (number|threshold)");
}

// Input specs: a Bell label (Psi1..Psi4), "vacuum", mode tokens such as
// "a1b2" or "a1 b1 c1", a bare occupation list "1,0,0,1", or @file.json.
ModePolynomial parse_input_state(const std::string& spec, int modes) {
    if (!spec.empty() && spec[0] == '@') {
        ModePolynomial p = polynomial_from_json(load_json_file(spec.substr(1)));
        if (p.modes() != modes)
            throw DimensionError("input file has " + std::to_string(p.modes()) +
                                 " modes, circuit has " + std::to_string(modes));
        return p.normalized();
    }
    if (auto label = bell_label_from_string(spec)) {
        if (modes < 4) throw DimensionError("Bell-state input needs at least 4 modes");
        return tensor_product(bell_state(*label), ModePolynomial::vacuum(modes - 4));
    }
    if (spec == "vacuum") return ModePolynomial::vacuum(modes);
    if (spec.find(',') != std::string::npos) {
        OccupationVector occ;
        std::stringstream ss(spec);
        std::string item;
        while (std::getline(ss, item, ',')) {
            try {
                occ.push_back(std::stoi(item));
            } catch (const std::exception&) {
                throw ValidationError("cannot parse occupation entry \"" + item + "\"");
            }
        }
        if (static_cast<int>(occ.size()) != modes)
            throw DimensionError("occupation list has " + std::to_string(occ.size()) +
                                 " entries, circuit has " + std::to_string(modes) + " modes");
        return ModePolynomial::monomial(modes, occ, 1.0).normalized();
    }
    // mode tokens: ports a and b carry the polarization modes (two per port
    // from four modes up, one per port below), c1, c2, ... are the auxiliary
    // modes after them. So a1b2 on 4 modes is modes {0, 3}; a1b1 on a 2-mode
    // splitter is modes {0, 1}.
    const int per_port = modes >= 4 ? 2 : 1;
    OccupationVector occ(static_cast<std::size_t>(modes), 0);
    std::size_t i = 0;
    while (i < spec.size()) {
        if (std::isspace(static_cast<unsigned char>(spec[i]))) {
            ++i;
            continue;
        }
        const char kind = spec[i];
        ++i;
        std::string digits;
        while (i < spec.size() && std::isdigit(static_cast<unsigned char>(spec[i])))
            digits += spec[i++];
        if (digits.empty()) throw ValidationError("cannot parse input token in \"" + spec + "\"");
        const int index = std::stoi(digits);
        int mode = -1;
        if (kind == 'a' && index >= 1 && index <= per_port) mode = index - 1;
        else if (kind == 'b' && index >= 1 && index <= per_port) mode = per_port + index - 1;
        else if (kind == 'c' && index >= 1) mode = 2 * per_port + index - 1;
        if (mode < 0 || mode >= modes)
            throw DimensionError("input token " + std::string(1, kind) + std::to_string(index) +
                                 " does not fit a " + std::to_string(modes) + "-mode circuit");
        ++occ[static_cast<std::size_t>(mode)];
    }
    return ModePolynomial::monomial(modes, occ, 1.0).normalized();
}

std::string detector_row_label(const OutcomeRecord& counts) {
    std::vector<int> fired;
    for (std::size_t m = 0; m < counts.size(); ++m)
        if (counts[m] > 0) fired.push_back(static_cast<int>(m) + 1);
    std::ostringstream out;
    if (fired.size() == 1 && counts[static_cast<std::size_t>(fired[0] - 1)] > 1) {
        out << "\"" << fired[0] << "\" sees " << counts[static_cast<std::size_t>(fired[0] - 1)]
            << " photons";
    } else {
        for (std::size_t k = 0; k < fired.size(); ++k) {
            if (k) out << (k + 1 == fired.size() ? " and " : ", ");
            out << "\"" << fired[k] << "\"";
        }
        out << (fired.size() == 1 ? " clicks" : " click");
    }
    return out.str();
}

std::string report_table(const DiscriminationReport& report) {
    std::ostringstream out;
    out << "outcome          event                       P(Psi1)  P(Psi2)  P(Psi3)  P(Psi4)  attribution\n";
    for (const auto& row : report.outcomes) {
        char line[256];
        std::snprintf(line, sizeof(line), "%-16s %-27s %-8.4g %-8.4g %-8.4g %-8.4g %s",
                      occupation_to_string(row.counts).c_str(),
                      detector_row_label(row.counts).c_str(), row.probs[0], row.probs[1],
                      row.probs[2], row.probs[3],
                      row.attribution ? std::string(to_string(*row.attribution)).c_str()
                                      : "ambiguous");
        out << line << "\n";
    }
    char s_line[64];
    std::snprintf(s_line, sizeof(s_line), "S = %.6f", report.success_fraction);
    out << s_line << "\n";
    return out.str();
}

// --- subcommands -------------------------------------------------------------

struct InnsbruckArgs {
    std::string detector = "number";
    std::string format = "text";
    double epsilon = kDefaultAttributionEpsilon;
    double tolerance = 1e-9;
    std::optional<std::string> out;
};

int cmd_innsbruck(const InnsbruckArgs& args) {
    Stopwatch watch;
    const DiscriminationReport report =
        analyze(innsbruck_analyzer(parse_detector(args.detector)), args.epsilon);
    const bool ok = std::abs(report.success_fraction - 0.5) < args.tolerance;
    if (args.format == "json") {
        Json j = to_json(report);
        j["manifest"] = make_manifest(
            "innsbruck",
            Json{{"detector", args.detector}, {"epsilon", args.epsilon}, {"tolerance", args.tolerance}},
            0, watch.elapsed_ms());
        emit(args.out, j.dump(2) + "\n");
    } else {
        emit(args.out, report_table(report));
    }
    return ok ? kExitOk : kExitCheckFailed;
}

struct SimulateArgs {
    std::string circuit;
    std::string input;
    std::string detector = "number";
    std::string format = "text";
    std::optional<std::string> out;
};

int cmd_simulate(const SimulateArgs& args) {
    Stopwatch watch;
    const ModeUnitary u = circuit_from_json(load_json_file(args.circuit));
    const ModePolynomial input = parse_input_state(args.input, u.dim());
    const auto dist = outcome_distribution(apply(u, input), parse_detector(args.detector));
    if (args.format == "json") {
        Json rows = Json::array();
        for (const auto& [counts, prob] : dist) {
            if (prob < kProbabilityFloor) continue;
            rows.push_back({{"counts", counts}, {"probability", prob}});
        }
        Json j{{"distribution", std::move(rows)}};
        j["manifest"] = make_manifest(
            "simulate",
            Json{{"circuit", args.circuit}, {"input", args.input}, {"detector", args.detector}},
            0, watch.elapsed_ms());
        emit(args.out, j.dump(2) + "\n");
    } else {
        std::ostringstream text;
        for (const auto& [counts, prob] : dist) {
            if (prob < kProbabilityFloor) continue;
            text << occupation_to_string(counts) << "  " << format_double(prob) << "\n";
        }
        emit(args.out, text.str());
    }
    return kExitOk;
}

struct VerifyArgs {
    long samples = 100000;
    std::uint64_t seed = 0;
    double tolerance = 1e-10;
    std::optional<std::string> out;
};

int cmd_verify_nogo(const VerifyArgs& args) {
    Stopwatch watch;
    NogoVerifyConfig cfg = NogoVerifyConfig::from_total_samples(args.samples, args.seed);
    cfg.factorization_tolerance = args.tolerance;
    cfg.overlap_tolerance = args.tolerance;
    const NogoVerifyReport report = verify_nogo(cfg);
    Json j = to_json(report);
    j["manifest"] = make_manifest(
        "verify-nogo",
        Json{{"samples", args.samples}, {"seed", args.seed}, {"tolerance", args.tolerance}},
        args.seed, watch.elapsed_ms());
    if (args.out) write_text_file(*args.out, j.dump(2) + "\n");
    auto line = [](const std::string& name, const ScanOutcome& scan) {
        std::cout << name << ": samples=" << scan.samples << " violations=" << scan.violations
                  << " max_residual=" << format_double(scan.max_residual) << "\n";
        if (!scan.first_violation.empty())
            std::cout << "  first violation: " << scan.first_violation << "\n";
    };
    line("two_photon_scan", report.two_photon_scan);
    line("factorization", report.factorization);
    line("overlap_oracle", report.overlap_oracle);
    std::cout << "  classification_mismatches=" << report.overlap_classification_mismatches << "\n";
    line("contradiction", report.contradiction);
    std::cout << "  min_overlap=" << format_double(report.contradiction_min_overlap) << "\n";
    std::cout << (report.all_passed() ? "all checks passed" : "CHECK FAILURE") << "\n";
    return report.all_passed() ? kExitOk : kExitCheckFailed;
}

struct OptimizeArgs {
    int modes = 4;
    int aux = 0;
    int starts = 50;
    int iters = 200;
    std::uint64_t seed = 0;
    double epsilon = kDefaultAttributionEpsilon;
    bool innsbruck_start = false;
    std::string format = "text";
    std::optional<std::string> out;
};

OptimizerConfig optimizer_config(const OptimizeArgs& args) {
    OptimizerConfig cfg;
    cfg.multistarts = args.starts;
    cfg.max_iterations = args.iters;
    cfg.seed = args.seed;
    cfg.classification_epsilon = args.epsilon;
    cfg.innsbruck_start = args.innsbruck_start;
    return cfg;
}

int cmd_optimize(const OptimizeArgs& args) {
    Stopwatch watch;
    const OptimizeResult result = optimize(optimizer_config(args), args.modes, args.aux);
    Json j = to_json(result);
    j["manifest"] = make_manifest("optimize",
                                  Json{{"modes", args.modes},
                                       {"aux", args.aux},
                                       {"starts", args.starts},
                                       {"iters", args.iters},
                                       {"epsilon", args.epsilon},
                                       {"innsbruck_start", args.innsbruck_start}},
                                  args.seed, watch.elapsed_ms());
    if (args.format == "json" || args.out) emit(args.out, j.dump(2) + "\n");
    if (args.format != "json")
        std::cout << "best_S = " << format_double(result.best_s) << " (modes=" << args.modes
                  << ", aux=" << args.aux << ", starts=" << args.starts << ", seed=" << args.seed
                  << ")\n";
    return kExitOk;
}

struct SweepArgs {
    std::string modes = "4..6";
    std::string aux = "0..0";
    int starts = 20;
    int iters = 120;
    std::uint64_t seed = 0;
    std::optional<std::string> out;
};

std::pair<int, int> parse_range(const std::string& text) {
    try {
        const auto dots = text.find("..");
        if (dots == std::string::npos) {
            const int v = std::stoi(text);
            return {v, v};
        }
        return {std::stoi(text.substr(0, dots)), std::stoi(text.substr(dots + 2))};
    } catch (const std::exception&) {
        throw ValidationError("cannot parse range \"" + text + "\" (expected N or A..B)");
    }
}

int cmd_sweep(const SweepArgs& args) {
    Stopwatch watch;
    const auto [modes_lo, modes_hi] = parse_range(args.modes);
    const auto [aux_lo, aux_hi] = parse_range(args.aux);
    OptimizerConfig cfg;
    cfg.multistarts = args.starts;
    cfg.max_iterations = args.iters;
    cfg.seed = args.seed;
    const auto cells = sweep(cfg, modes_lo, modes_hi, aux_lo, aux_hi);
    std::ostringstream csv;
    csv << "D,aux_photons,best_S,seed,iterations,wall_time_ms\n";
    for (const auto& c : cells)
        csv << c.modes << "," << c.aux_photons << "," << format_double(c.best_s) << "," << c.seed
            << "," << c.iterations << "," << format_double(c.wall_time_ms) << "\n";
    emit(args.out, csv.str());
    if (args.out) {
        const Json manifest = make_manifest(
            "sweep",
            Json{{"modes", args.modes}, {"aux", args.aux}, {"starts", args.starts}, {"iters", args.iters}},
            args.seed, watch.elapsed_ms());
        write_text_file(*args.out + ".manifest.json", manifest.dump(2) + "\n");
    }
    return kExitOk;
}

struct ReckArgs {
    std::string in;
    std::string out;
    int modes = -1;
};

int cmd_reck_decompose(const ReckArgs& args) {
    const ModeUnitary u = unitary_from_json(load_json_file(args.in));
    const Json j = to_json(reck_decompose(u));
    if (args.out.empty()) std::cout << j.dump(2) << "\n";
    else write_text_file(args.out, j.dump(2) + "\n");
    return kExitOk;
}

int cmd_reck_compose(const ReckArgs& args) {
    const Json input = load_json_file(args.in);
    ModeUnitary u = circuit_from_json(args.modes > 0 && input.is_array()
                                          ? Json{{"modes", args.modes}, {"elements", input}}
                                          : input);
    const Json j = to_json(u);
    if (args.out.empty()) std::cout << j.dump(2) << "\n";
    else write_text_file(args.out, j.dump(2) + "\n");
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"linear-optics Bell measurement simulator and verifier"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    InnsbruckArgs innsbruck_args;
    auto* innsbruck = app.add_subcommand(
        "innsbruck", "four-detector analyzer built from two 50/50 splitters; checks S = 0.5");
    innsbruck->add_option("--detector", innsbruck_args.detector, "number|threshold")
        ->check(CLI::IsMember({"number", "threshold"}));
    innsbruck->add_option("--format", innsbruck_args.format, "text|json")
        ->check(CLI::IsMember({"text", "json"}));
    innsbruck->add_option("--epsilon", innsbruck_args.epsilon, "attribution threshold")
        ->check(CLI::PositiveNumber);
    innsbruck->add_option("--tolerance", innsbruck_args.tolerance, "pass tolerance on |S - 0.5|")
        ->check(CLI::PositiveNumber);
    std::string innsbruck_out;
    innsbruck->add_option("--out", innsbruck_out, "write the report here");

    SimulateArgs simulate_args;
    auto* simulate = app.add_subcommand("simulate", "outcome distribution of a circuit on an input");
    simulate->add_option("--circuit", simulate_args.circuit, "circuit JSON file")->required();
    simulate->add_option("--input", simulate_args.input,
                         "Psi1..Psi4, vacuum, mode tokens (a1b2), occupation list, or @file.json")
        ->required();
    simulate->add_option("--detector", simulate_args.detector, "number|threshold")
        ->check(CLI::IsMember({"number", "threshold"}));
    simulate->add_option("--format", simulate_args.format, "text|json")
        ->check(CLI::IsMember({"text", "json"}));
    std::string simulate_out;
    simulate->add_option("--out", simulate_out, "write the distribution here");

    VerifyArgs verify_args;
    auto* verify = app.add_subcommand("verify-nogo", "run the verification battery");
    verify->add_option("--samples", verify_args.samples, "scan size; sub-checks scale from it")
        ->check(CLI::PositiveNumber);
    verify->add_option("--seed", verify_args.seed, "random seed");
    verify->add_option("--tolerance", verify_args.tolerance, "residual tolerance")
        ->check(CLI::PositiveNumber);
    std::string verify_out;
    verify->add_option("--out", verify_out, "write the JSON report here");

    OptimizeArgs optimize_args;
    auto* opt = app.add_subcommand("optimize", "multistart search for the best success fraction");
    opt->add_option("--modes", optimize_args.modes, "mode count D >= 4")->check(CLI::Range(4, 12));
    opt->add_option("--aux", optimize_args.aux, "auxiliary photons")->check(CLI::NonNegativeNumber);
    opt->add_option("--starts", optimize_args.starts, "multistart count")->check(CLI::PositiveNumber);
    opt->add_option("--iters", optimize_args.iters, "pattern-search sweeps per start")
        ->check(CLI::NonNegativeNumber);
    opt->add_option("--seed", optimize_args.seed, "random seed");
    opt->add_option("--epsilon", optimize_args.epsilon, "attribution threshold")
        ->check(CLI::PositiveNumber);
    opt->add_flag("--innsbruck-start", optimize_args.innsbruck_start,
                  "seed start 0 at the known 50% network");
    opt->add_option("--format", optimize_args.format, "text|json")
        ->check(CLI::IsMember({"text", "json"}));
    std::string optimize_out;
    opt->add_option("--out", optimize_out, "write the JSON result here");

    SweepArgs sweep_args;
    auto* sweep_cmd = app.add_subcommand("sweep", "best S per (modes, aux) cell, CSV output");
    sweep_cmd->add_option("--modes", sweep_args.modes, "range, e.g. 4..6");
    sweep_cmd->add_option("--aux", sweep_args.aux, "range, e.g. 0..1");
    sweep_cmd->add_option("--starts", sweep_args.starts, "multistart count per cell")
        ->check(CLI::PositiveNumber);
    sweep_cmd->add_option("--iters", sweep_args.iters, "pattern-search sweeps per start")
        ->check(CLI::NonNegativeNumber);
    sweep_cmd->add_option("--seed", sweep_args.seed, "random seed");
    std::string sweep_out;
    sweep_cmd->add_option("--out", sweep_out, "write the CSV here (manifest written alongside)");

    ReckArgs reck_args;
    auto* reck = app.add_subcommand("reck", "triangular-mesh factorization of a unitary");
    auto* decompose = reck->add_subcommand("decompose", "matrix file -> element list");
    decompose->add_option("--in", reck_args.in, "matrix JSON file")->required();
    decompose->add_option("--out", reck_args.out, "element list output");
    auto* compose_cmd = reck->add_subcommand("compose", "element list -> matrix file");
    compose_cmd->add_option("--in", reck_args.in, "element list JSON file")->required();
    compose_cmd->add_option("--modes", reck_args.modes, "mode count for bare element arrays");
    compose_cmd->add_option("--out", reck_args.out, "matrix output");
    reck->require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*innsbruck) {
            if (!innsbruck_out.empty()) innsbruck_args.out = innsbruck_out;
            return cmd_innsbruck(innsbruck_args);
        }
        if (*simulate) {
            if (!simulate_out.empty()) simulate_args.out = simulate_out;
            return cmd_simulate(simulate_args);
        }
        if (*verify) {
            if (!verify_out.empty()) verify_args.out = verify_out;
            return cmd_verify_nogo(verify_args);
        }
        if (*opt) {
            if (!optimize_out.empty()) optimize_args.out = optimize_out;
            return cmd_optimize(optimize_args);
        }
        if (*sweep_cmd) {
            if (!sweep_out.empty()) sweep_args.out = sweep_out;
            return cmd_sweep(sweep_args);
        }
        if (*reck) {
            if (*decompose) return cmd_reck_decompose(reck_args);
            return cmd_reck_compose(reck_args);
        }
    } catch (const ResourceLimitError& e) {
        std::cerr << "resource guard: " << e.what() << "\n";
        return kExitResourceGuard;
    } catch (const Json::exception& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {  // bad inputs of any kind
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCheckFailed;
    }
    return kExitUsage;
}
