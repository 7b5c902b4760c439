#pragma once

// The four Bell states as two-photon polynomials over modes (a1, a2, b1, b2),
// the standard four-detector analyzer, and unambiguous-discrimination scoring.

#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bellscope/errors.hpp"
#include "bellscope/fock.hpp"
#include "bellscope/measurement.hpp"
#include "bellscope/network.hpp"

namespace bellscope {

enum class BellLabel { Psi1 = 0, Psi2 = 1, Psi3 = 2, Psi4 = 3 };

inline constexpr std::array<BellLabel, 4> kAllBellLabels{BellLabel::Psi1, BellLabel::Psi2,
                                                         BellLabel::Psi3, BellLabel::Psi4};

inline std::string_view to_string(BellLabel label) {
    switch (label) {
        case BellLabel::Psi1: return "Psi1";
        case BellLabel::Psi2: return "Psi2";
        case BellLabel::Psi3: return "Psi3";
        case BellLabel::Psi4: return "Psi4";
    }
    return "?";
}

inline std::optional<BellLabel> bell_label_from_string(std::string_view s) {
    for (BellLabel l : kAllBellLabels)
        if (s == to_string(l)) return l;
    return std::nullopt;
}

// Mode order (a1, a2, b1, b2):
//   Psi1 = (a1 b2 - a2 b1)/sqrt2      Psi2 = (a1 b2 + a2 b1)/sqrt2
//   Psi3 = (a1 b1 - a2 b2)/sqrt2      Psi4 = (a1 b1 + a2 b2)/sqrt2
inline ModePolynomial bell_state(BellLabel label) {
    const double w = 1.0 / std::sqrt(2.0);
    switch (label) {
        case BellLabel::Psi1:
            return ModePolynomial::monomial(4, {1, 0, 0, 1}, w) +
                   ModePolynomial::monomial(4, {0, 1, 1, 0}, -w);
        case BellLabel::Psi2:
            return ModePolynomial::monomial(4, {1, 0, 0, 1}, w) +
                   ModePolynomial::monomial(4, {0, 1, 1, 0}, w);
        case BellLabel::Psi3:
            return ModePolynomial::monomial(4, {1, 0, 1, 0}, w) +
                   ModePolynomial::monomial(4, {0, 1, 0, 1}, -w);
        case BellLabel::Psi4:
            return ModePolynomial::monomial(4, {1, 0, 1, 0}, w) +
                   ModePolynomial::monomial(4, {0, 1, 0, 1}, w);
    }
    throw ValidationError("unknown Bell label");
}

inline ModePolynomial weighted_bell(const std::array<Complex, 4>& mu) {
    ModePolynomial sum(4);
    for (int i = 0; i < 4; ++i) sum = sum + bell_state(kAllBellLabels[i]) * mu[i];
    return sum;
}

// Two 50/50 beam splitters pairing each polarization across the two spatial
// ports: (a1,b1) and (a2,b2). The polarizing splitters that follow only route
// the four mode/polarization combinations onto detectors 1..4, which is the
// identity on this mode layout.
inline ModeUnitary innsbruck_network() {
    const double quarter = std::numbers::pi / 4.0;
    return compose({BeamSplitter{0, 2, quarter, 0.0}, BeamSplitter{1, 3, quarter, 0.0}}, 4);
}

inline constexpr double kDefaultAttributionEpsilon = 1e-10;

// Fixed network, simultaneous detection on every output mode. Multi-stage
// trees live in ConditionalStrategy; nothing here consumes them.
struct AnalyzerSpec {
    ModeUnitary network;              // dim = 4 + auxiliary modes
    ModePolynomial aux;               // state of modes 4..D-1 (0-mode scalar for none)
    DetectorKind detector = DetectorKind::NumberResolving;
};

inline AnalyzerSpec innsbruck_analyzer(DetectorKind detector = DetectorKind::NumberResolving) {
    return AnalyzerSpec{innsbruck_network(), ModePolynomial::vacuum(0), detector};
}

using BellDistributions = std::array<std::map<OutcomeRecord, double>, 4>;

inline BellDistributions bell_outcome_distributions(const AnalyzerSpec& spec) {
    if (spec.network.dim() != 4 + spec.aux.modes())
        throw DimensionError("analyzer network dimension must be 4 + auxiliary modes");
    BellDistributions dists;
    const ModePolynomial aux = spec.aux.modes() > 0 ? spec.aux.normalized() : spec.aux;
    for (int i = 0; i < 4; ++i) {
        const ModePolynomial input = tensor_product(bell_state(kAllBellLabels[i]), aux);
        dists[i] = outcome_distribution(apply(spec.network, input), spec.detector);
    }
    return dists;
}

struct OutcomeAttribution {
    OutcomeRecord counts;
    std::array<double, 4> probs{};               // p(outcome | Psi_i)
    std::optional<BellLabel> attribution;        // nullopt = ambiguous
};

struct DiscriminationReport {
    double success_fraction = 0.0;
    std::vector<OutcomeAttribution> outcomes;    // canonical order; rows under the floor dropped
    // row: true label; columns: attributed Psi1..Psi4, then ambiguous
    std::array<std::array<double, 5>, 4> confusion{};
};

// An outcome is unambiguous for Psi_i when p(outcome|Psi_i) > eps and every
// other label stays at or below eps. S averages the unambiguous mass over
// equally probable Bell inputs.
inline DiscriminationReport classify(const BellDistributions& dists,
                                     double epsilon = kDefaultAttributionEpsilon) {
    if (epsilon <= 0.0) throw ValidationError("classify: epsilon must be positive");
    std::map<OutcomeRecord, std::array<double, 4>> table;
    std::optional<std::size_t> record_size;
    for (int i = 0; i < 4; ++i) {
        for (const auto& [counts, prob] : dists[i]) {
            if (!record_size) record_size = counts.size();
            if (counts.size() != *record_size)
                throw ValidationError("classify: outcome records of mixed lengths");
            table[counts][static_cast<std::size_t>(i)] += prob;
        }
    }
    DiscriminationReport report;
    for (const auto& [counts, probs] : table) {
        int above = 0;
        int winner = -1;
        double max_prob = 0.0;
        for (int i = 0; i < 4; ++i) {
            if (probs[static_cast<std::size_t>(i)] > epsilon) {
                ++above;
                winner = i;
            }
            max_prob = std::max(max_prob, probs[static_cast<std::size_t>(i)]);
        }
        OutcomeAttribution row{counts, probs, std::nullopt};
        if (above == 1) {
            row.attribution = kAllBellLabels[static_cast<std::size_t>(winner)];
            report.success_fraction += 0.25 * probs[static_cast<std::size_t>(winner)];
        }
        for (int i = 0; i < 4; ++i) {
            const std::size_t col = above == 1 ? static_cast<std::size_t>(winner) : 4u;
            report.confusion[static_cast<std::size_t>(i)][col] += probs[static_cast<std::size_t>(i)];
        }
        if (max_prob >= kProbabilityFloor) report.outcomes.push_back(std::move(row));
    }
    return report;
}

inline DiscriminationReport analyze(const AnalyzerSpec& spec,
                                    double epsilon = kDefaultAttributionEpsilon) {
    return classify(bell_outcome_distributions(spec), epsilon);
}

}  // namespace bellscope
