#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "bellscope/json_io.hpp"
#include "bellscope/network.hpp"
#include "bellscope/nogo.hpp"
#include "bellscope/rng.hpp"

using namespace bellscope;

namespace {
const double kQuarter = std::numbers::pi / 4.0;

Eigen::MatrixXcd fifty_fifty() {
    Eigen::MatrixXcd m(2, 2);
    const double w = 1.0 / std::sqrt(2.0);
    m << w, w, w, -w;
    return m;
}

ModePolynomial random_homogeneous(int modes, int photons, SeededRng& rng) {
    ModePolynomial::TermMap terms;
    for (const auto& occ : enumerate_occupations(modes, photons))
        terms[occ] = rng.complex_normal();
    return ModePolynomial::from_terms(modes, std::move(terms)).normalized();
}
}  // namespace

TEST_CASE("element unitaries match their defining blocks") {
    const auto bs = element_unitary(BeamSplitter{0, 1, kQuarter, 0.0}, 2);
    Eigen::MatrixXcd expected(2, 2);
    const double w = 1.0 / std::sqrt(2.0);
    expected << w, w, -w, w;
    CHECK((bs.matrix() - expected).cwiseAbs().maxCoeff() < 1e-15);

    const auto ps = element_unitary(PhaseShifter{0, std::numbers::pi}, 2);
    CHECK(std::abs(ps.matrix()(0, 0) - Complex(-1.0)) < 1e-15);
    CHECK(std::abs(ps.matrix()(1, 1) - Complex(1.0)) < 1e-15);

    const auto transparent = element_unitary(BeamSplitter{0, 1, 0.0, 1.3}, 3);
    CHECK((transparent.matrix() - Eigen::MatrixXcd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-15);

    CHECK_THROWS_AS(element_unitary(BeamSplitter{0, 5, 0.1, 0.0}, 3), DimensionError);
    CHECK_THROWS_AS(element_unitary(BeamSplitter{1, 1, 0.1, 0.0}, 3), ValidationError);
}

TEST_CASE("non-unitary matrices are rejected, not repaired") {
    Eigen::MatrixXcd bad = Eigen::MatrixXcd::Identity(3, 3);
    bad(0, 0) = 1.1;
    CHECK_THROWS_AS(ModeUnitary(bad), UnitarityError);
}

TEST_CASE("apply substitutes rows of the unitary") {
    const auto id = ModeUnitary::identity(4);
    const auto psi2 = bell_state(BellLabel::Psi2);
    CHECK(distance(apply(id, psi2), psi2) < 1e-15);

    const ModeUnitary half{fifty_fifty()};
    const auto single = apply(half, ModePolynomial::monomial(2, {1, 0}, 1.0));
    const double w = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(single.coefficient({1, 0}) - Complex(w)) < 1e-15);
    CHECK(std::abs(single.coefficient({0, 1}) - Complex(w)) < 1e-15);
}

TEST_CASE("two photons coalesce on a 50/50 splitter") {
    // by hand: a1 -> (d1+d2)/sqrt2, a2 -> (d1-d2)/sqrt2, so
    // a1 a2 -> (d1^2 - d2^2)/2 and the (1,1) outcome cancels
    const ModeUnitary half{fifty_fifty()};
    const auto out = apply(half, ModePolynomial::monomial(2, {1, 1}, 1.0));
    CHECK(std::abs(out.coefficient({2, 0}) - Complex(0.5)) < 1e-15);
    CHECK(std::abs(out.coefficient({0, 2}) - Complex(-0.5)) < 1e-15);
    CHECK(std::abs(out.coefficient({1, 1})) < 1e-15);
}

TEST_CASE("apply preserves inner products and photon number") {
    SeededRng rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        const int d = 3 + static_cast<int>(rng.uniform() * 3);
        const int photons = 1 + static_cast<int>(rng.uniform() * 3);
        const ModeUnitary u{random_unitary_matrix(d, rng)};
        const auto p = random_homogeneous(d, photons, rng);
        const auto q = random_homogeneous(d, photons, rng);
        const auto up = apply(u, p);
        const auto uq = apply(u, q);
        CHECK(std::abs(inner_product(up, uq) - inner_product(p, q)) < 1e-10);
        CHECK(up.total_photon_number() == photons);
    }
}

TEST_CASE("composition order is left to right") {
    SeededRng rng(12);
    const ModeUnitary u1{random_unitary_matrix(3, rng)};
    const ModeUnitary u2{random_unitary_matrix(3, rng)};
    const auto p = random_homogeneous(3, 2, rng);
    const auto sequential = apply(u2, apply(u1, p));
    const ModeUnitary product{u1.matrix() * u2.matrix()};
    CHECK(distance(sequential, apply(product, p)) < 1e-10);
}

TEST_CASE("quadratic forms transform by congruence under apply") {
    SeededRng rng(13);
    for (int trial = 0; trial < 8; ++trial) {
        const int d = 4 + static_cast<int>(rng.uniform() * 2);
        Eigen::MatrixXcd m(d, d);
        for (int r = 0; r < d; ++r)
            for (int c = r; c < d; ++c) m(r, c) = m(c, r) = rng.complex_normal();
        const ModeUnitary u{random_unitary_matrix(d, rng)};
        const auto lhs = apply(u, quadratic_form_polynomial(m));
        const auto rhs = quadratic_form_polynomial(u.matrix().transpose() * m * u.matrix());
        CHECK(distance(lhs, rhs) < 1e-10 * (1.0 + rhs.norm()));
    }
}

TEST_CASE("embed places blocks and preserves unitarity") {
    const auto id4 = embed(ModeUnitary::identity(2), {0, 1}, 4);
    CHECK((id4.matrix() - Eigen::MatrixXcd::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-15);

    const ModeUnitary half{fifty_fifty()};
    const auto spread = embed(half, {0, 2}, 3);
    CHECK(std::abs(spread.matrix()(1, 1) - Complex(1.0)) < 1e-15);
    CHECK(std::abs(spread.matrix()(0, 2) - half.matrix()(0, 1)) < 1e-15);
    CHECK(spread.unitarity_residual() < 1e-12);

    CHECK_THROWS_AS(embed(half, {0, 0}, 3), DimensionError);
    CHECK_THROWS_AS(embed(half, {0, 3}, 3), DimensionError);
}

TEST_CASE("reck decomposition round-trips random unitaries") {
    SeededRng rng(14);
    for (int trial = 0; trial < 25; ++trial) {
        const int d = 2 + static_cast<int>(rng.uniform() * 7);  // 2..8
        const ModeUnitary u{random_unitary_matrix(d, rng)};
        const auto elements = reck_decompose(u);
        const auto rebuilt = compose(elements, d);
        CHECK((rebuilt.matrix() - u.matrix()).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("reck decomposition of simple cases") {
    const auto identity_elements = reck_decompose(ModeUnitary::identity(3));
    for (const auto& e : identity_elements) {
        REQUIRE(std::holds_alternative<PhaseShifter>(e));
        CHECK(std::abs(std::get<PhaseShifter>(e).phi) < 1e-15);
    }

    const ModeUnitary half{fifty_fifty()};
    const auto elements = reck_decompose(half);
    int splitters = 0;
    for (const auto& e : elements) {
        if (const auto* bs = std::get_if<BeamSplitter>(&e)) {
            ++splitters;
            CHECK(bs->theta == Catch::Approx(kQuarter).margin(1e-12));
        }
    }
    CHECK(splitters == 1);
}

TEST_CASE("matrix and element JSON round-trips") {
    SeededRng rng(15);
    const ModeUnitary u{random_unitary_matrix(4, rng)};
    const auto back = unitary_from_json(to_json(u));
    CHECK((back.matrix() - u.matrix()).cwiseAbs().maxCoeff() < 1e-15);

    const std::vector<NetworkElement> elements{BeamSplitter{0, 2, 0.3, -0.7}, PhaseShifter{1, 2.1}};
    const auto round = elements_from_json(to_json(elements));
    REQUIRE(round.size() == 2);
    CHECK(std::get<BeamSplitter>(round[0]).theta == 0.3);
    CHECK(std::get<PhaseShifter>(round[1]).phi == 2.1);

    const auto inferred = circuit_from_json(to_json(elements));
    CHECK(inferred.dim() == 3);
}
