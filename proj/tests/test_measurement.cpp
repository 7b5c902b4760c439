#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "bellscope/bell.hpp"
#include "bellscope/json_io.hpp"
#include "bellscope/measurement.hpp"
#include "bellscope/rng.hpp"

using namespace bellscope;

namespace {
const double kQuarter = std::numbers::pi / 4.0;

ModePolynomial random_homogeneous(int modes, int photons, SeededRng& rng) {
    ModePolynomial::TermMap terms;
    for (const auto& occ : enumerate_occupations(modes, photons))
        terms[occ] = rng.complex_normal();
    return ModePolynomial::from_terms(modes, std::move(terms)).normalized();
}
}  // namespace

TEST_CASE("project_mode extracts the coefficient polynomial") {
    // coalesced pair (d1^2 - d2^2)/2: detecting 2 photons in mode 0 has
    // weight 1/2 and leaves vacuum
    const auto hom = ModePolynomial::monomial(2, {2, 0}, 0.5) +
                     ModePolynomial::monomial(2, {0, 2}, -0.5);
    const auto [w2, cond2] = project_mode(hom, 0, 2);
    CHECK(w2 == Catch::Approx(0.5).margin(1e-12));
    CHECK(distance(cond2.normalized(), ModePolynomial::vacuum(1)) < 1e-12);

    const auto psi1 = bell_state(BellLabel::Psi1);
    const auto [w0, cond0] = project_mode(psi1, 0, 0);
    CHECK(w0 == Catch::Approx(0.5).margin(1e-12));
    CHECK(std::abs(cond0.coefficient({1, 1, 0}) - Complex(-1.0 / std::sqrt(2.0))) < 1e-12);

    const auto [w9, cond9] = project_mode(psi1, 0, 9);  // beyond the degree
    CHECK(w9 == 0.0);
    CHECK(cond9.is_zero());

    CHECK_THROWS_AS(project_mode(ModePolynomial(2), 0, 0), DegenerateStateError);
    CHECK_THROWS_AS(project_mode(psi1, 7, 0), DimensionError);
}

TEST_CASE("projection weights sum to one and the expansion is complete") {
    SeededRng rng(21);
    for (int trial = 0; trial < 12; ++trial) {
        const int d = 3 + static_cast<int>(rng.uniform() * 3);
        const int photons = 1 + static_cast<int>(rng.uniform() * 3);
        const auto p = random_homogeneous(d, photons, rng);
        double sum = 0.0;
        double reconstructed = 0.0;  // sum_n n! <Q_n|Q_n>, must equal <P|P>
        for (int n = 0; n <= photons; ++n) {
            const auto proj = project_mode(p, 0, n);
            sum += proj.weight;
            if (!proj.conditional.is_zero())
                reconstructed += factorial(n) * proj.conditional.norm_squared();
        }
        CHECK(sum == Catch::Approx(1.0).margin(1e-12));
        CHECK(reconstructed == Catch::Approx(p.norm_squared()).margin(1e-12));
    }
}

TEST_CASE("outcome distributions of Bell states") {
    const auto psi1 = bell_state(BellLabel::Psi1);
    const auto direct = outcome_distribution(psi1, DetectorKind::NumberResolving);
    REQUIRE(direct.size() == 2);
    CHECK(direct.at({1, 0, 0, 1}) == Catch::Approx(0.5).margin(1e-12));
    CHECK(direct.at({0, 1, 1, 0}) == Catch::Approx(0.5).margin(1e-12));

    const auto net = innsbruck_network();
    const auto through = outcome_distribution(apply(net, psi1), DetectorKind::NumberResolving);
    REQUIRE(through.size() == 2);
    CHECK(through.at({1, 0, 0, 1}) == Catch::Approx(0.5).margin(1e-12));
    CHECK(through.at({0, 1, 1, 0}) == Catch::Approx(0.5).margin(1e-12));

    const auto psi4 = outcome_distribution(apply(net, bell_state(BellLabel::Psi4)),
                                           DetectorKind::NumberResolving);
    REQUIRE(psi4.size() == 4);
    for (int m = 0; m < 4; ++m) {
        OccupationVector two(4, 0);
        two[static_cast<std::size_t>(m)] = 2;
        CHECK(psi4.at(two) == Catch::Approx(0.25).margin(1e-12));
    }

    CHECK_THROWS_AS(outcome_distribution(psi1 * Complex(2.0), DetectorKind::NumberResolving),
                    NormalizationError);
}

TEST_CASE("distributions sum to one and marginals match projections") {
    SeededRng rng(22);
    for (int trial = 0; trial < 10; ++trial) {
        const int d = 3 + static_cast<int>(rng.uniform() * 3);
        const int photons = 1 + static_cast<int>(rng.uniform() * 3);
        const ModeUnitary u{random_unitary_matrix(d, rng)};
        const auto p = apply(u, random_homogeneous(d, photons, rng));
        const auto dist = outcome_distribution(p, DetectorKind::NumberResolving);
        double sum = 0.0;
        std::map<int, double> marginal;
        for (const auto& [occ, prob] : dist) {
            sum += prob;
            marginal[occ[0]] += prob;
        }
        CHECK(sum == Catch::Approx(1.0).margin(1e-12));
        for (const auto& [n, mass] : marginal)
            CHECK(mass == Catch::Approx(project_mode(p, 0, n).weight).margin(1e-10));
    }
}

TEST_CASE("threshold detection coarse-grains number resolution") {
    SeededRng rng(23);
    for (int trial = 0; trial < 8; ++trial) {
        const int d = 3;
        const auto p = apply(ModeUnitary{random_unitary_matrix(d, rng)},
                             random_homogeneous(d, 3, rng));
        const auto fine = outcome_distribution(p, DetectorKind::NumberResolving);
        const auto coarse = outcome_distribution(p, DetectorKind::Threshold);
        std::map<OutcomeRecord, double> folded;
        for (const auto& [occ, prob] : fine) {
            OccupationVector clicks(occ.size());
            for (std::size_t m = 0; m < occ.size(); ++m) clicks[m] = occ[m] > 0 ? 1 : 0;
            folded[clicks] += prob;
        }
        REQUIRE(folded.size() == coarse.size());
        for (const auto& [occ, prob] : coarse)
            CHECK(prob == Catch::Approx(folded.at(occ)).margin(1e-12));
    }
}

TEST_CASE("depth-1 strategy reproduces project_mode") {
    auto root = std::make_shared<const StrategyNode>(ModeUnitary::identity(4),
                                                     ModePolynomial::vacuum(0), 0);
    const ConditionalStrategy s{4, root};
    const auto outcomes = run_strategy(s, bell_state(BellLabel::Psi1));
    REQUIRE(outcomes.size() == 2);
    CHECK(outcomes.at({"inconclusive", {0}}) == Catch::Approx(0.5).margin(1e-12));
    CHECK(outcomes.at({"inconclusive", {1}}) == Catch::Approx(0.5).margin(1e-12));
}

TEST_CASE("conditional second stage separates the four product states") {
    // photon 1 measured in the up/down basis; the basis for photon 2 is then
    // chosen from the result. A fixed network cannot do this.
    const ModePolynomial vac0 = ModePolynomial::vacuum(0);
    auto measure_b1 = std::make_shared<const StrategyNode>(
        ModeUnitary::identity(2), vac0, 0,
        std::map<int, StrategyChild>{{1, std::string("down-up")}, {0, std::string("down-down")}});
    auto measure_rotated = std::make_shared<const StrategyNode>(
        element_unitary(BeamSplitter{1, 2, kQuarter, 0.0}, 3), vac0, 1,
        std::map<int, StrategyChild>{{1, std::string("up-left")}, {0, std::string("up-right")}});
    auto check_a2 = std::make_shared<const StrategyNode>(
        ModeUnitary::identity(3), vac0, 0, std::map<int, StrategyChild>{{1, measure_b1}});
    auto root = std::make_shared<const StrategyNode>(
        ModeUnitary::identity(4), vac0, 0,
        std::map<int, StrategyChild>{{1, measure_rotated}, {0, check_a2}});
    const ConditionalStrategy strategy{4, root};

    const double w = 1.0 / std::sqrt(2.0);
    const std::pair<std::string, ModePolynomial> cases[] = {
        {"up-left", ModePolynomial::monomial(4, {1, 0, 1, 0}, w) +
                        ModePolynomial::monomial(4, {1, 0, 0, 1}, -w)},
        {"up-right", ModePolynomial::monomial(4, {1, 0, 1, 0}, w) +
                         ModePolynomial::monomial(4, {1, 0, 0, 1}, w)},
        {"down-up", ModePolynomial::monomial(4, {0, 1, 1, 0}, 1.0)},
        {"down-down", ModePolynomial::monomial(4, {0, 1, 0, 1}, 1.0)},
    };
    for (const auto& [expected, state] : cases) {
        double mass_on_expected = 0.0;
        double total = 0.0;
        for (const auto& [outcome, p] : run_strategy(strategy, state)) {
            total += p;
            if (outcome.label == expected) mass_on_expected += p;
        }
        CHECK(total == Catch::Approx(1.0).margin(1e-12));
        CHECK(mass_on_expected == Catch::Approx(1.0).margin(1e-12));
    }
}

TEST_CASE("strategy on vacuum yields the all-zero path") {
    auto root = std::make_shared<const StrategyNode>(ModeUnitary::identity(3),
                                                     ModePolynomial::vacuum(0), 1);
    const auto outcomes = run_strategy(ConditionalStrategy{3, root}, ModePolynomial::vacuum(3));
    REQUIRE(outcomes.size() == 1);
    CHECK(outcomes.at({"inconclusive", {0}}) == Catch::Approx(1.0).margin(1e-15));
}

TEST_CASE("path probabilities sum to one across stages") {
    SeededRng rng(24);
    auto inner = std::make_shared<const StrategyNode>(
        ModeUnitary{random_unitary_matrix(4, rng)}, ModePolynomial::monomial(1, {1}, 1.0), 2);
    auto root = std::make_shared<const StrategyNode>(
        ModeUnitary{random_unitary_matrix(4, rng)}, ModePolynomial::vacuum(0), 0,
        std::map<int, StrategyChild>{{0, inner}, {1, inner}});
    const auto outcomes = run_strategy(ConditionalStrategy{4, root}, bell_state(BellLabel::Psi3));
    double total = 0.0;
    for (const auto& [outcome, p] : outcomes) total += p;
    CHECK(total == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("strategy validation catches bookkeeping errors") {
    // network dimension must equal incoming + aux modes
    auto wrong_dim = std::make_shared<const StrategyNode>(ModeUnitary::identity(3),
                                                          ModePolynomial::vacuum(0), 0);
    CHECK_THROWS_AS(validate(ConditionalStrategy{4, wrong_dim}), ValidationError);

    auto bad_mode = std::make_shared<const StrategyNode>(ModeUnitary::identity(4),
                                                         ModePolynomial::vacuum(0), 4);
    CHECK_THROWS_AS(validate(ConditionalStrategy{4, bad_mode}), ValidationError);

    CHECK_THROWS_AS(validate(ConditionalStrategy{4, nullptr}), ValidationError);

    auto ok = std::make_shared<const StrategyNode>(ModeUnitary::identity(4),
                                                   ModePolynomial::vacuum(0), 0);
    CHECK_THROWS_AS(run_strategy(ConditionalStrategy{4, ok}, ModePolynomial::vacuum(3)),
                    DimensionError);
}

TEST_CASE("strategy JSON rejects non-numeric outcome keys") {
    Json j = Json{{"input_modes", 4},
                  {"network", to_json(ModeUnitary::identity(4))},
                  {"measure", 0},
                  {"on", Json{{"two", "Psi1"}}}};
    CHECK_THROWS_AS(strategy_from_json(j), ValidationError);
}

TEST_CASE("strategy JSON round-trip") {
    auto leafy = std::make_shared<const StrategyNode>(
        innsbruck_network(), ModePolynomial::vacuum(0), 1,
        std::map<int, StrategyChild>{{0, std::string("Psi1")},
                                     {2, std::make_shared<const StrategyNode>(
                                             ModeUnitary::identity(3), ModePolynomial::vacuum(0),
                                             0)}});
    const ConditionalStrategy s{4, leafy};
    const auto round = strategy_from_json(to_json(s));
    CHECK(round.input_modes == 4);
    const auto a = run_strategy(s, bell_state(BellLabel::Psi2));
    const auto b = run_strategy(round, bell_state(BellLabel::Psi2));
    REQUIRE(a.size() == b.size());
    for (const auto& [outcome, p] : a) CHECK(b.at(outcome) == Catch::Approx(p).margin(1e-12));
}
