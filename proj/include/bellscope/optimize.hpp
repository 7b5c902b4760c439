#pragma once

// Derivative-free maximization of the unambiguous success fraction over
// triangular-mesh network parameterizations, with optional single-placement
// auxiliary photons. Exploratory: results are empirical values found by the
// search, not bounds.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bellscope/bell.hpp"
#include "bellscope/errors.hpp"
#include "bellscope/network.hpp"
#include "bellscope/parallel.hpp"
#include "bellscope/rng.hpp"

namespace bellscope {

// Beam-splitter slots of the triangular mesh in the order reck_decompose
// emits them: pairs (i, j), i < j, column-major.
inline std::vector<std::pair<int, int>> reck_mesh_pairs(int modes) {
    std::vector<std::pair<int, int>> pairs;
    for (int col = 0; col < modes - 1; ++col)
        for (int row = col + 1; row < modes; ++row) pairs.emplace_back(col, row);
    return pairs;
}

struct Parameterization {
    int modes = 4;
    std::vector<double> thetas;         // one per mesh pair
    std::vector<double> phis;           // one per mesh pair
    std::vector<double> output_phases;  // one per mode, applied after the mesh
    OccupationVector aux_occupation;    // photons on modes 4..D-1

    int beam_splitter_count() const { return modes * (modes - 1) / 2; }
};

inline void validate(const Parameterization& p) {
    if (p.modes < 4) throw ValidationError("parameterization: need at least the four Bell modes");
    const auto n = static_cast<std::size_t>(p.beam_splitter_count());
    if (p.thetas.size() != n || p.phis.size() != n)
        throw ValidationError("parameterization: angle count must be D(D-1)/2 per kind");
    if (p.output_phases.size() != static_cast<std::size_t>(p.modes))
        throw ValidationError("parameterization: need one output phase per mode");
    if (p.aux_occupation.size() != static_cast<std::size_t>(p.modes - 4))
        throw ValidationError("parameterization: auxiliary occupation must cover modes beyond 4");
    for (int n_aux : p.aux_occupation)
        if (n_aux < 0) throw ValidationError("parameterization: negative auxiliary occupation");
    auto finite = [](double v) { return std::isfinite(v); };
    if (!std::all_of(p.thetas.begin(), p.thetas.end(), finite) ||
        !std::all_of(p.phis.begin(), p.phis.end(), finite) ||
        !std::all_of(p.output_phases.begin(), p.output_phases.end(), finite))
        throw ValidationError("parameterization: angles must be finite");
}

inline ModeUnitary network_from_parameters(const Parameterization& p) {
    validate(p);
    std::vector<NetworkElement> elements;
    const auto pairs = reck_mesh_pairs(p.modes);
    for (std::size_t k = 0; k < pairs.size(); ++k)
        elements.push_back(BeamSplitter{pairs[k].first, pairs[k].second, p.thetas[k], p.phis[k]});
    for (int m = 0; m < p.modes; ++m)
        elements.push_back(PhaseShifter{m, p.output_phases[static_cast<std::size_t>(m)]});
    return compose(elements, p.modes);
}

// Mesh angles realizing the given unitary, from its triangular factorization.
inline Parameterization parameters_from_unitary(const ModeUnitary& u,
                                                OccupationVector aux_occupation = {}) {
    Parameterization p;
    p.modes = u.dim();
    const auto pairs = reck_mesh_pairs(p.modes);
    p.thetas.assign(pairs.size(), 0.0);
    p.phis.assign(pairs.size(), 0.0);
    p.output_phases.assign(static_cast<std::size_t>(p.modes), 0.0);
    if (aux_occupation.empty()) aux_occupation.assign(static_cast<std::size_t>(p.modes - 4), 0);
    p.aux_occupation = std::move(aux_occupation);
    for (const NetworkElement& e : reck_decompose(u)) {
        if (const auto* bs = std::get_if<BeamSplitter>(&e)) {
            const auto it = std::find(pairs.begin(), pairs.end(),
                                      std::make_pair(bs->mode_i, bs->mode_j));
            const auto k = static_cast<std::size_t>(it - pairs.begin());
            p.thetas[k] = bs->theta;
            p.phis[k] = bs->phi;
        } else {
            const auto& ps = std::get<PhaseShifter>(e);
            p.output_phases[static_cast<std::size_t>(ps.mode)] = ps.phi;
        }
    }
    validate(p);
    return p;
}

// Number of Fock outcomes for `photons` photons over `modes` modes.
inline long outcome_lattice_size(int modes, int photons) {
    long size = 1;  // C(photons + modes - 1, modes - 1)
    for (int k = 1; k <= modes - 1; ++k) size = size * (photons + k) / k;
    return size;
}

// Success fraction of the depth-1 analyzer described by the parameters.
inline double evaluate(const Parameterization& p,
                       double epsilon = kDefaultAttributionEpsilon,
                       DetectorKind detector = DetectorKind::NumberResolving) {
    validate(p);
    ModePolynomial aux = p.modes > 4
                             ? ModePolynomial::monomial(p.modes - 4, p.aux_occupation, 1.0).normalized()
                             : ModePolynomial::vacuum(0);
    const AnalyzerSpec spec{network_from_parameters(p), std::move(aux), detector};
    return analyze(spec, epsilon).success_fraction;
}

struct OptimizerConfig {
    int multistarts = 50;
    int max_iterations = 200;       // pattern-search sweeps per start
    double s_tolerance = 1e-9;      // minimum accepted improvement in S
    std::uint64_t seed = 0;
    double classification_epsilon = kDefaultAttributionEpsilon;
    double initial_step = std::numbers::pi / 8.0;
    double step_floor = 1e-4;       // stop once the probe step shrinks below this
    long lattice_bound = 100000;    // resource guard on the outcome lattice
    bool innsbruck_start = false;   // make start 0 the known 50% network
};

inline void validate(const OptimizerConfig& cfg) {
    if (cfg.multistarts < 1) throw ValidationError("optimizer: need at least one start");
    if (cfg.max_iterations < 0) throw ValidationError("optimizer: negative iteration limit");
    if (cfg.s_tolerance <= 0 || cfg.initial_step <= 0 || cfg.step_floor <= 0 ||
        cfg.classification_epsilon <= 0)
        throw ValidationError("optimizer: tolerances and steps must be positive");
    if (cfg.lattice_bound < 1) throw ValidationError("optimizer: lattice bound must be positive");
}

struct StartTrace {
    int start_index = 0;
    std::uint64_t sub_seed = 0;
    double initial_s = 0.0;
    double final_s = 0.0;
    int iterations = 0;
    long evaluations = 0;
};

struct OptimizeResult {
    Parameterization best;
    double best_s = 0.0;
    std::vector<StartTrace> trace;  // one entry per start, in start order
};

namespace detail {

struct PatternSearchOutcome {
    Parameterization params;
    double s = 0.0;
    int iterations = 0;
    long evaluations = 0;
};

// Coordinate-wise pattern search over (theta, phi) with shrinking step.
// Output phases never change photon-count statistics, so they stay fixed.
inline PatternSearchOutcome pattern_search(Parameterization p, const OptimizerConfig& cfg) {
    PatternSearchOutcome out;
    double best = evaluate(p, cfg.classification_epsilon);
    ++out.evaluations;
    double step = cfg.initial_step;
    const std::size_t n_bs = p.thetas.size();
    int iter = 0;
    for (; iter < cfg.max_iterations && step > cfg.step_floor; ++iter) {
        bool improved = false;
        for (std::size_t k = 0; k < 2 * n_bs; ++k) {
            double& angle = k < n_bs ? p.thetas[k] : p.phis[k - n_bs];
            const double saved = angle;
            for (double sign : {1.0, -1.0}) {
                angle = saved + sign * step;
                const double s = evaluate(p, cfg.classification_epsilon);
                ++out.evaluations;
                if (s > best + cfg.s_tolerance) {
                    best = s;
                    improved = true;
                    break;
                }
                angle = saved;
            }
        }
        if (!improved) step *= 0.5;
    }
    out.params = std::move(p);
    out.s = best;
    out.iterations = iter;
    return out;
}

inline Parameterization random_start(int modes, int aux_photons, SeededRng& rng) {
    Parameterization p;
    p.modes = modes;
    const auto n = static_cast<std::size_t>(p.beam_splitter_count());
    p.thetas.resize(n);
    p.phis.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        p.thetas[k] = rng.uniform(0.0, std::numbers::pi / 2.0);
        p.phis[k] = rng.uniform(-std::numbers::pi, std::numbers::pi);
    }
    p.output_phases.assign(static_cast<std::size_t>(modes), 0.0);
    p.aux_occupation.assign(static_cast<std::size_t>(modes - 4), 0);
    if (aux_photons > 0 && p.aux_occupation.empty())
        throw ValidationError("auxiliary photons need auxiliary modes");
    // drop the auxiliary photons one at a time into random fresh modes
    for (int n_left = aux_photons; n_left > 0; --n_left) {
        auto slot = static_cast<std::size_t>(rng.uniform() * static_cast<double>(modes - 4));
        if (slot >= p.aux_occupation.size()) slot = p.aux_occupation.size() - 1;
        ++p.aux_occupation[slot];
    }
    return p;
}

}  // namespace detail

inline Parameterization innsbruck_parameters(int modes, int aux_photons = 0) {
    const ModeUnitary net = modes == 4
                                ? innsbruck_network()
                                : embed(innsbruck_network(), {0, 1, 2, 3}, modes);
    OccupationVector aux(static_cast<std::size_t>(modes - 4), 0);
    if (aux_photons > 0) {
        if (aux.empty()) throw ValidationError("auxiliary photons need auxiliary modes");
        aux[0] = aux_photons;
    }
    return parameters_from_unitary(net, std::move(aux));
}

// Multistart local search; returns the best parameters found together with a
// per-start convergence trace. Starts run concurrently on forked substreams;
// ties go to the lower start index.
inline OptimizeResult optimize(const OptimizerConfig& cfg, int modes, int aux_photons) {
    validate(cfg);
    if (modes < 4) throw ValidationError("optimize: need at least four modes");
    if (aux_photons < 0) throw ValidationError("optimize: negative auxiliary photon count");
    if (aux_photons > 0 && modes == 4)
        throw ValidationError("optimize: auxiliary photons need modes beyond the Bell four");
    if (outcome_lattice_size(modes, 2 + aux_photons) > cfg.lattice_bound)
        throw ResourceLimitError("optimize: outcome lattice exceeds the configured bound");

    const SeededRng root(cfg.seed);
    struct Slot {
        StartTrace trace;
        std::optional<detail::PatternSearchOutcome> outcome;
    };
    auto run_start = [&](long index) {
        SeededRng rng = root.fork(static_cast<std::uint64_t>(index));
        Parameterization start =
            (cfg.innsbruck_start && index == 0)
                ? innsbruck_parameters(modes, aux_photons)
                : detail::random_start(modes, aux_photons, rng);
        Slot slot;
        slot.trace.start_index = static_cast<int>(index);
        slot.trace.sub_seed = rng.seed();
        slot.trace.initial_s = evaluate(start, cfg.classification_epsilon);
        auto outcome = detail::pattern_search(std::move(start), cfg);
        slot.trace.final_s = outcome.s;
        slot.trace.iterations = outcome.iterations;
        slot.trace.evaluations = outcome.evaluations + 1;
        slot.outcome = std::move(outcome);
        return std::vector<Slot>{std::move(slot)};
    };
    auto slots = parallel_map_reduce(
        cfg.multistarts, std::vector<Slot>{}, run_start,
        [](std::vector<Slot> acc, std::vector<Slot> one) {
            for (auto& s : one) acc.push_back(std::move(s));
            return acc;
        });
    std::sort(slots.begin(), slots.end(), [](const Slot& x, const Slot& y) {
        return x.trace.start_index < y.trace.start_index;
    });

    OptimizeResult result;
    result.best_s = -1.0;
    for (auto& slot : slots) {
        result.trace.push_back(slot.trace);
        if (slot.outcome->s > result.best_s) {
            result.best_s = slot.outcome->s;
            result.best = std::move(slot.outcome->params);
        }
    }
    return result;
}

struct SweepCell {
    int modes = 0;
    int aux_photons = 0;
    double best_s = 0.0;
    std::uint64_t seed = 0;
    long iterations = 0;  // pattern-search sweeps summed over starts
    double wall_time_ms = 0.0;
};

// One optimize run per (modes, aux_photons) cell with a recorded sub-seed.
inline std::vector<SweepCell> sweep(const OptimizerConfig& cfg, int modes_lo, int modes_hi,
                                    int aux_lo, int aux_hi) {
    validate(cfg);
    std::vector<SweepCell> cells;
    const SeededRng root(cfg.seed);
    for (int modes = modes_lo; modes <= modes_hi; ++modes) {
        for (int aux = aux_lo; aux <= aux_hi; ++aux) {
            SeededRng cell_rng =
                root.fork(static_cast<std::uint64_t>(modes) * 64 + static_cast<std::uint64_t>(aux));
            OptimizerConfig cell_cfg = cfg;
            cell_cfg.seed = cell_rng.seed();
            const auto t0 = std::chrono::steady_clock::now();
            const OptimizeResult r = optimize(cell_cfg, modes, aux);
            const auto dt = std::chrono::duration<double, std::milli>(
                std::chrono::steady_clock::now() - t0);
            SweepCell cell;
            cell.modes = modes;
            cell.aux_photons = aux;
            cell.best_s = r.best_s;
            cell.seed = cell_cfg.seed;
            for (const auto& t : r.trace) cell.iterations += t.iterations;
            cell.wall_time_ms = dt.count();
            cells.push_back(cell);
        }
    }
    return cells;
}

}  // namespace bellscope
