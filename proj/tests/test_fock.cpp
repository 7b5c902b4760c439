#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "bellscope/fock.hpp"
#include "bellscope/json_io.hpp"
#include "bellscope/rng.hpp"

using namespace bellscope;

namespace {
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

ModePolynomial random_polynomial(int modes, int max_photons, SeededRng& rng) {
    ModePolynomial::TermMap terms;
    for (int n = 0; n <= max_photons; ++n)
        for (const auto& occ : enumerate_occupations(modes, n))
            if (rng.uniform() < 0.4) terms[occ] = rng.complex_normal();
    auto p = ModePolynomial::from_terms(modes, std::move(terms));
    return p.is_zero() ? ModePolynomial::vacuum(modes) : p;
}
}  // namespace

TEST_CASE("monomial builds single-term polynomials") {
    const auto p = ModePolynomial::monomial(4, {1, 0, 0, 1}, kInvSqrt2);
    CHECK(p.term_count() == 1);
    CHECK(p.coefficient({1, 0, 0, 1}) == Complex(kInvSqrt2));

    const auto vac = ModePolynomial::monomial(2, {0, 0}, 1.0);
    CHECK(vac == ModePolynomial::vacuum(2));

    const auto two = ModePolynomial::monomial(3, {2, 0, 0}, 1.0);
    CHECK(two.total_photon_number() == 2);

    CHECK_THROWS_AS(ModePolynomial::monomial(3, {1, 0}, 1.0), DimensionError);
    CHECK_THROWS_AS(ModePolynomial::monomial(2, {-1, 0}, 1.0), ValidationError);
}

TEST_CASE("inner product carries the occupation factorials") {
    const auto psi1 = ModePolynomial::monomial(4, {1, 0, 0, 1}, kInvSqrt2) +
                      ModePolynomial::monomial(4, {0, 1, 1, 0}, -kInvSqrt2);
    const auto psi2 = ModePolynomial::monomial(4, {1, 0, 0, 1}, kInvSqrt2) +
                      ModePolynomial::monomial(4, {0, 1, 1, 0}, kInvSqrt2);
    CHECK(std::abs(inner_product(psi1, psi1) - Complex(1.0)) < 1e-12);
    CHECK(std::abs(inner_product(psi1, psi2)) < 1e-15);

    const auto doubly = ModePolynomial::monomial(1, {2}, 1.0);
    CHECK(inner_product(doubly, doubly) == Complex(2.0));  // 2! from the double excitation

    CHECK_THROWS_AS(inner_product(psi1, doubly), DimensionError);
}

TEST_CASE("tensor product concatenates modes and multiplies amplitudes") {
    const auto psi1 = ModePolynomial::monomial(4, {1, 0, 0, 1}, kInvSqrt2) +
                      ModePolynomial::monomial(4, {0, 1, 1, 0}, -kInvSqrt2);

    const auto embedded = tensor_product(ModePolynomial::vacuum(2), psi1);
    CHECK(embedded.modes() == 6);
    CHECK(embedded.term_count() == 2);
    CHECK(embedded.coefficient({0, 0, 1, 0, 0, 1}) == Complex(kInvSqrt2));

    const auto one_aux = tensor_product(ModePolynomial::monomial(1, {1}, 1.0), psi1);
    CHECK(one_aux.modes() == 5);
    CHECK(one_aux.term_count() == 2);
    CHECK(one_aux.total_photon_number() == 3);

    const auto psi4 = ModePolynomial::monomial(4, {1, 0, 1, 0}, kInvSqrt2) +
                      ModePolynomial::monomial(4, {0, 1, 0, 1}, kInvSqrt2);
    const auto two_aux = tensor_product(ModePolynomial::monomial(1, {2}, 1.0), psi4);
    CHECK(two_aux.total_photon_number() == 4);
}

TEST_CASE("total photon number distinguishes homogeneous from mixed") {
    const auto psi3 = ModePolynomial::monomial(4, {1, 0, 1, 0}, kInvSqrt2) +
                      ModePolynomial::monomial(4, {0, 1, 0, 1}, -kInvSqrt2);
    CHECK(psi3.total_photon_number() == 2);
    CHECK(ModePolynomial::vacuum(3).total_photon_number() == 0);

    const auto mixed = ModePolynomial::vacuum(1) + ModePolynomial::monomial(1, {1}, 1.0);
    CHECK_FALSE(mixed.total_photon_number().has_value());

    CHECK_THROWS_AS(ModePolynomial(2).total_photon_number(), DegenerateStateError);
}

TEST_CASE("linear-space arithmetic and normalize") {
    const auto psi1 = ModePolynomial::monomial(4, {1, 0, 0, 1}, kInvSqrt2) +
                      ModePolynomial::monomial(4, {0, 1, 1, 0}, -kInvSqrt2);

    const auto scaled = psi1 * Complex(2.0);
    CHECK(distance(scaled.normalized(), psi1) < 1e-12);

    CHECK((psi1 - psi1).is_zero());

    const auto raw = ModePolynomial::monomial(4, {1, 0, 0, 1}, 1.0) +
                     ModePolynomial::monomial(4, {0, 1, 1, 0}, -1.0);
    CHECK(distance(raw.normalized(), psi1) < 1e-12);

    CHECK_THROWS_AS(ModePolynomial(4).normalized(), DegenerateStateError);
}

TEST_CASE("zero polynomial is distinct from vacuum") {
    const ModePolynomial zero(3);
    CHECK(zero.is_zero());
    CHECK_FALSE(ModePolynomial::vacuum(3).is_zero());
    CHECK(zero != ModePolynomial::vacuum(3));
}

TEST_CASE("amplitudes below the prune threshold are dropped") {
    const auto tiny = ModePolynomial::monomial(2, {1, 0}, 1e-15);
    CHECK(tiny.is_zero());

    const auto p = ModePolynomial::monomial(2, {1, 0}, 1.0);
    const auto q = ModePolynomial::monomial(2, {1, 0}, 1.0 - 5e-15);
    CHECK((p - q).is_zero());
}

TEST_CASE("inner product is conjugate-symmetric and positive-definite") {
    SeededRng rng(101);
    for (int trial = 0; trial < 30; ++trial) {
        const auto p = random_polynomial(3, 3, rng);
        const auto q = random_polynomial(3, 3, rng);
        const Complex pq = inner_product(p, q);
        const Complex qp = inner_product(q, p);
        CHECK(std::abs(pq - std::conj(qp)) < 1e-12);
        CHECK(inner_product(p, p).real() > 0.0);
        CHECK(std::abs(inner_product(p, p).imag()) < 1e-14);
    }
}

TEST_CASE("tensor factorization of inner products over disjoint ranges") {
    SeededRng rng(202);
    for (int trial = 0; trial < 20; ++trial) {
        const auto p = random_polynomial(2, 2, rng);
        const auto p2 = random_polynomial(2, 2, rng);
        const auto q = random_polynomial(3, 2, rng);
        const auto q2 = random_polynomial(3, 2, rng);
        const Complex joint = inner_product(tensor_product(p, q), tensor_product(p2, q2));
        const Complex split = inner_product(p, p2) * inner_product(q, q2);
        CHECK(std::abs(joint - split) < 1e-10 * (1.0 + std::abs(split)));
    }
}

TEST_CASE("photon number adds over tensor products") {
    SeededRng rng(303);
    for (int trial = 0; trial < 20; ++trial) {
        const int na = static_cast<int>(rng.uniform() * 3);
        const int nb = static_cast<int>(rng.uniform() * 3);
        ModePolynomial::TermMap ta, tb;
        for (const auto& occ : enumerate_occupations(2, na)) ta[occ] = rng.complex_normal();
        for (const auto& occ : enumerate_occupations(2, nb)) tb[occ] = rng.complex_normal();
        const auto a = ModePolynomial::from_terms(2, std::move(ta));
        const auto b = ModePolynomial::from_terms(2, std::move(tb));
        if (a.is_zero() || b.is_zero()) continue;
        CHECK(tensor_product(a, b).total_photon_number() == na + nb);
    }
}

TEST_CASE("normalize is idempotent") {
    SeededRng rng(404);
    for (int trial = 0; trial < 20; ++trial) {
        const auto p = random_polynomial(3, 3, rng).normalized();
        CHECK(distance(p.normalized(), p) < 1e-12);
        CHECK(std::abs(p.norm() - 1.0) < 1e-12);
    }
}

TEST_CASE("polynomial JSON round-trips in canonical term order") {
    SeededRng rng(505);
    const auto p = random_polynomial(3, 3, rng);
    const Json j = to_json(p);
    CHECK(j.at("modes").get<int>() == 3);

    OccupationVector previous;
    for (const auto& term : j.at("terms")) {
        const auto occ = term.at("occ").get<OccupationVector>();
        if (!previous.empty()) CHECK(previous < occ);  // lexicographic, strictly increasing
        previous = occ;
    }

    const auto round = polynomial_from_json(j);
    CHECK(round == p);
    CHECK(to_json(round).dump() == j.dump());

    CHECK_THROWS_AS(polynomial_from_json(Json{{"modes", 2}}), ValidationError);
}
