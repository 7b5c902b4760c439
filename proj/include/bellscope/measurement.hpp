#pragma once

// Photon counting on selected modes: conditional states from the expansion of
// a polynomial in powers of one mode operator, exhaustive outcome
// distributions, and multi-stage conditional strategies.

#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "bellscope/errors.hpp"
#include "bellscope/fock.hpp"
#include "bellscope/network.hpp"

namespace bellscope {

enum class DetectorKind { NumberResolving, Threshold };

// Detected photons per monitored mode. Under a threshold detector an entry 1
// stands for "one or more".
using OutcomeRecord = std::vector<int>;

// Outcomes below this probability are dropped from reports; they still count
// toward normalization checks.
inline constexpr double kProbabilityFloor = 1e-12;

struct Projection {
    double weight = 0.0;         // probability of the count, for normalized input
    ModePolynomial conditional;  // raw coefficient of (op+_mode)^n with the mode removed
};

// Writes P = sum_k (op+_mode)^k Q_k(other modes) and returns Q_n together
// with the probability n! <Q_n|Q_n> / <P|P> of detecting n photons there.
// A zero conditional with weight zero is a legitimate outcome.
inline Projection project_mode(const ModePolynomial& p, int mode, int n) {
    p.check_mode_index(mode);
    if (p.is_zero()) throw DegenerateStateError("project_mode: input polynomial is zero");
    if (n < 0) throw ValidationError("project_mode: negative photon count");
    ModePolynomial::TermMap terms;
    for (const auto& [occ, amp] : p.terms()) {
        if (occ[static_cast<std::size_t>(mode)] != n) continue;
        OccupationVector reduced;
        reduced.reserve(occ.size() - 1);
        for (std::size_t m = 0; m < occ.size(); ++m)
            if (static_cast<int>(m) != mode) reduced.push_back(occ[m]);
        terms.emplace(std::move(reduced), amp);
    }
    ModePolynomial conditional = ModePolynomial::from_terms(p.modes() - 1, std::move(terms));
    const double weight = factorial(n) * conditional.norm_squared() / p.norm_squared();
    return {weight, std::move(conditional)};
}

// Joint photon-count distribution over all modes. Enumeration is exhaustive:
// every monomial is one Fock outcome with probability |amp|^2 prod n_m!.
inline std::map<OutcomeRecord, double> outcome_distribution(const ModePolynomial& p,
                                                            DetectorKind detector) {
    const double nsq = p.is_zero() ? 0.0 : p.norm_squared();
    if (std::abs(nsq - 1.0) > 1e-9)
        throw NormalizationError("outcome_distribution: input is not normalized (<P|P> = " +
                                 std::to_string(nsq) + ")");
    std::map<OutcomeRecord, double> dist;
    for (const auto& [occ, amp] : p.terms()) {
        const double prob = std::norm(amp) * ModePolynomial::occupation_factorial(occ);
        if (detector == DetectorKind::NumberResolving) {
            dist[occ] += prob;
        } else {
            OccupationVector clicks(occ.size());
            for (std::size_t m = 0; m < occ.size(); ++m) clicks[m] = occ[m] > 0 ? 1 : 0;
            dist[std::move(clicks)] += prob;
        }
    }
    return dist;
}

// --- conditional strategies ------------------------------------------------

struct StrategyNode;

// A detected count continues into a child stage or ends in a classification
// label such as "Psi1" or "inconclusive".
using StrategyChild = std::variant<std::string, std::shared_ptr<const StrategyNode>>;

struct StrategyNode {
    ModeUnitary network;        // dim = incoming modes + aux modes
    ModePolynomial aux;         // state of the fresh modes appended before mixing
    int measure_mode = 0;       // output mode detected (and consumed) at this stage
    std::map<int, StrategyChild> on;
    std::string otherwise = "inconclusive";  // label for counts not listed in `on`

    StrategyNode(ModeUnitary net, ModePolynomial aux_state, int measure,
                 std::map<int, StrategyChild> children = {},
                 std::string fallback = "inconclusive")
        : network(std::move(net)),
          aux(std::move(aux_state)),
          measure_mode(measure),
          on(std::move(children)),
          otherwise(std::move(fallback)) {}
};

struct ConditionalStrategy {
    int input_modes = 0;
    std::shared_ptr<const StrategyNode> root;
};

namespace detail {
inline void validate_node(const StrategyNode& node, int incoming,
                          std::set<const StrategyNode*>& path) {
    if (!path.insert(&node).second)
        throw ValidationError("strategy: cycle detected in the stage graph");
    if (node.aux.is_zero())
        throw ValidationError("strategy: auxiliary input state is zero");
    const int dim = incoming + node.aux.modes();
    if (dim < 1) throw ValidationError("strategy: stage has no modes to measure");
    if (node.network.dim() != dim)
        throw ValidationError("strategy: stage network has dimension " +
                              std::to_string(node.network.dim()) + ", expected " +
                              std::to_string(dim));
    if (node.measure_mode < 0 || node.measure_mode >= dim)
        throw ValidationError("strategy: measured mode out of range");
    for (const auto& [count, child] : node.on) {
        if (count < 0) throw ValidationError("strategy: negative detected count");
        if (const auto* next = std::get_if<std::shared_ptr<const StrategyNode>>(&child)) {
            if (!*next) throw ValidationError("strategy: null child stage");
            validate_node(**next, dim - 1, path);
        }
    }
    path.erase(&node);
}
}  // namespace detail

// Checks mode bookkeeping along every path: each stage consumes exactly one
// mode, and stage networks match incoming + auxiliary mode counts.
inline void validate(const ConditionalStrategy& s) {
    if (!s.root) throw ValidationError("strategy: missing root stage");
    if (s.input_modes < 1) throw ValidationError("strategy: input_modes must be positive");
    std::set<const StrategyNode*> path;
    detail::validate_node(*s.root, s.input_modes, path);
}

struct StrategyOutcome {
    std::string label;
    std::vector<int> path;  // detected counts, first stage first

    auto operator<=>(const StrategyOutcome&) const = default;
};

namespace detail {
inline void run_node(const StrategyNode& node, const ModePolynomial& state, double prefix,
                     std::vector<int>& path, std::map<StrategyOutcome, double>& out) {
    const ModePolynomial mixed = apply(node.network, tensor_product(state, node.aux.normalized()));
    const int bound = mixed.max_degree(node.measure_mode);
    for (int n = 0; n <= bound; ++n) {
        Projection proj = project_mode(mixed, node.measure_mode, n);
        if (proj.weight <= 0.0) continue;
        const double prob = prefix * proj.weight;
        path.push_back(n);
        auto it = node.on.find(n);
        const StrategyChild* child = it == node.on.end() ? nullptr : &it->second;
        if (child != nullptr &&
            std::holds_alternative<std::shared_ptr<const StrategyNode>>(*child)) {
            run_node(*std::get<std::shared_ptr<const StrategyNode>>(*child),
                     proj.conditional.normalized(), prob, path, out);
        } else {
            const std::string& label =
                child != nullptr ? std::get<std::string>(*child) : node.otherwise;
            out[StrategyOutcome{label, path}] += prob;
        }
        path.pop_back();
    }
}
}  // namespace detail

// Exhaustive enumeration of all measurement paths with exact probabilities.
inline std::map<StrategyOutcome, double> run_strategy(const ConditionalStrategy& s,
                                                      const ModePolynomial& input) {
    validate(s);
    if (input.modes() != s.input_modes)
        throw DimensionError("run_strategy: input has " + std::to_string(input.modes()) +
                             " modes, strategy expects " + std::to_string(s.input_modes));
    std::map<StrategyOutcome, double> out;
    std::vector<int> path;
    detail::run_node(*s.root, input.normalized(), 1.0, path, out);
    return out;
}

}  // namespace bellscope
