#pragma once

// Coefficient-matrix machinery for two-photon states through linear networks,
// closed forms for the photon-count analysis of one selected output mode, and
// a verification battery that cross-checks every closed form against the
// polynomial simulator.
//
// The quadratic-form decomposition works in the basis
//   q0 = (a1 b1 + a2 b2)/sqrt2   q1 = (a1 b1 - a2 b2)/sqrt2
//   q2 = (a1 b2 + a2 b1)/sqrt2   q3 = (a1 b2 - a2 b1)/sqrt2
// which in Bell labels reads (Psi4, Psi3, Psi2, Psi1); closed-form coefficient
// arrays below follow this order, kQuadraticBasisLabels maps slots to labels.

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "bellscope/bell.hpp"
#include "bellscope/errors.hpp"
#include "bellscope/fock.hpp"
#include "bellscope/measurement.hpp"
#include "bellscope/network.hpp"

namespace bellscope {

inline constexpr std::array<BellLabel, 4> kQuadraticBasisLabels{
    BellLabel::Psi4, BellLabel::Psi3, BellLabel::Psi2, BellLabel::Psi1};

// The polynomial v^T m v |0> with v the vector of mode creation operators.
inline ModePolynomial quadratic_form_polynomial(const Eigen::MatrixXcd& m) {
    const int d = static_cast<int>(m.rows());
    if (m.cols() != d) throw DimensionError("quadratic_form_polynomial: matrix must be square");
    ModePolynomial::TermMap terms;
    for (int i = 0; i < d; ++i) {
        for (int j = i; j < d; ++j) {
            const Complex coeff = i == j ? m(i, i) : m(i, j) + m(j, i);
            if (coeff == Complex(0.0)) continue;
            OccupationVector occ(static_cast<std::size_t>(d), 0);
            ++occ[static_cast<std::size_t>(i)];
            ++occ[static_cast<std::size_t>(j)];
            terms[std::move(occ)] += coeff;
        }
    }
    return ModePolynomial::from_terms(d, std::move(terms));
}

// Four symmetric matrices with bell_state(label) == v^T m[label] v |0>,
// zero-padded beyond the four Bell modes.
struct BellCoefficientMatrix {
    std::array<Eigen::MatrixXcd, 4> m;  // indexed by BellLabel
    int dim = 4;

    static BellCoefficientMatrix bell_basis(int dim) {
        if (dim < 4) throw DimensionError("BellCoefficientMatrix: dimension must be at least 4");
        const double w = 1.0 / (2.0 * std::sqrt(2.0));
        BellCoefficientMatrix out;
        out.dim = dim;
        for (auto& mat : out.m) mat = Eigen::MatrixXcd::Zero(dim, dim);
        auto set = [&](BellLabel label, int r, int c, double v) {
            out.m[static_cast<std::size_t>(label)](r, c) = v;
            out.m[static_cast<std::size_t>(label)](c, r) = v;
        };
        set(BellLabel::Psi1, 0, 3, w);
        set(BellLabel::Psi1, 1, 2, -w);
        set(BellLabel::Psi2, 0, 3, w);
        set(BellLabel::Psi2, 1, 2, w);
        set(BellLabel::Psi3, 0, 2, w);
        set(BellLabel::Psi3, 1, 3, -w);
        set(BellLabel::Psi4, 0, 2, w);
        set(BellLabel::Psi4, 1, 3, w);
        return out;
    }

    Eigen::MatrixXcd combined(const std::array<Complex, 4>& mu) const {
        Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(dim, dim);
        for (int i = 0; i < 4; ++i) sum += mu[static_cast<std::size_t>(i)] * m[static_cast<std::size_t>(i)];
        return sum;
    }
};

// Congruence m -> U^T m U for each label; equivalent to rewriting the
// quadratic form in output operators.
inline BellCoefficientMatrix transform_matrix(const BellCoefficientMatrix& mats,
                                              const ModeUnitary& u) {
    if (u.dim() != mats.dim)
        throw DimensionError("transform_matrix: unitary dimension does not match matrices");
    BellCoefficientMatrix out;
    out.dim = mats.dim;
    for (int i = 0; i < 4; ++i)
        out.m[static_cast<std::size_t>(i)] =
            u.matrix().transpose() * mats.m[static_cast<std::size_t>(i)] * u.matrix();
    return out;
}

// First column of a candidate network unitary, v1 = (a, b, c, d, ...)^T.
struct FirstColumn {
    Eigen::VectorXcd v;

    explicit FirstColumn(Eigen::VectorXcd column) : v(std::move(column)) {
        if (v.size() < 4) throw DimensionError("FirstColumn: need at least four entries");
        if (v.norm() > 1.0 + 1e-10)
            throw ValidationError("FirstColumn: norm exceeds 1, not a column of a unitary");
    }

    Complex a() const { return v(0); }
    Complex b() const { return v(1); }
    Complex c() const { return v(2); }
    Complex d() const { return v(3); }
};

// Entry (0,0) of U^T M U depends on the first column alone. Returns the
// coefficients of the four quadratic-basis states in that entry, order
// kQuadraticBasisLabels:
//   (ac + bd, ac - bd, ad + bc, ad - bc) / sqrt2.
inline std::array<Complex, 4> m11_coefficients(const FirstColumn& v1) {
    const Complex a = v1.a(), b = v1.b(), c = v1.c(), d = v1.d();
    const double w = 1.0 / std::sqrt(2.0);
    return {w * (a * c + b * d), w * (a * c - b * d), w * (a * d + b * c), w * (a * d - b * c)};
}

// Rows of U with the first column removed; rows 2 and 3 (c_r, d_r) drive all
// single-photon conditional states when v1 = (a, b, 0, 0, ...).
struct ReducedRows {
    Eigen::VectorXcd a_r, b_r, c_r, d_r;
};

inline ReducedRows reduced_rows(const ModeUnitary& u) {
    if (u.dim() < 5) throw DimensionError("reduced_rows: need at least five modes");
    const auto& m = u.matrix();
    const int k = u.dim() - 1;
    ReducedRows rows;
    rows.a_r = m.row(0).tail(k).transpose();
    rows.b_r = m.row(1).tail(k).transpose();
    rows.c_r = m.row(2).tail(k).transpose();
    rows.d_r = m.row(3).tail(k).transpose();
    return rows;
}

// Conditional states of the remaining modes after one photon in the selected
// mode, for v1 = (a, b, 0, 0, ...), in quadratic-basis order:
//   (a c_r + b d_r) e+, (a c_r - b d_r) e+, (a d_r + b c_r) e+, (a d_r - b c_r) e+.
inline std::array<ModePolynomial, 4> single_photon_conditionals(Complex a, Complex b,
                                                                const Eigen::VectorXcd& c_r,
                                                                const Eigen::VectorXcd& d_r) {
    if (c_r.size() != d_r.size())
        throw DimensionError("single_photon_conditionals: row lengths differ");
    const int k = static_cast<int>(c_r.size());
    std::array<Eigen::VectorXcd, 4> weights{a * c_r + b * d_r, a * c_r - b * d_r,
                                            a * d_r + b * c_r, a * d_r - b * c_r};
    std::array<ModePolynomial, 4> states{ModePolynomial(k), ModePolynomial(k), ModePolynomial(k),
                                         ModePolynomial(k)};
    for (int s = 0; s < 4; ++s) {
        ModePolynomial::TermMap terms;
        for (int j = 0; j < k; ++j) {
            const Complex w = weights[static_cast<std::size_t>(s)](j);
            if (w == Complex(0.0)) continue;
            OccupationVector occ(static_cast<std::size_t>(k), 0);
            occ[static_cast<std::size_t>(j)] = 1;
            terms.emplace(std::move(occ), w);
        }
        states[static_cast<std::size_t>(s)] = ModePolynomial::from_terms(k, std::move(terms));
    }
    return states;
}

// Pairwise overlaps of the four conditional states above, assuming c_r and
// d_r are rows of one unitary (so c_r . d_r* = 0). Pair order:
// (0,1) (0,2) (0,3) (1,2) (1,3) (2,3).
inline std::array<Complex, 6> six_overlaps(Complex a, Complex b, const Eigen::VectorXcd& c_r,
                                           const Eigen::VectorXcd& d_r) {
    const double cs = c_r.squaredNorm();
    const double ds = d_r.squaredNorm();
    const double aa = std::norm(a);
    const double bb = std::norm(b);
    const Complex ab = std::conj(a) * b;  // a* b
    const Complex ba = std::conj(b) * a;  // b* a
    return {
        Complex(aa * cs - bb * ds),  // <0|1>
        ab * cs + ba * ds,           // <0|2>
        ba * ds - ab * cs,           // <0|3>
        ab * cs - ba * ds,           // <1|2>
        -ab * cs - ba * ds,          // <1|3>
        Complex(aa * ds - bb * cs),  // <2|3>
    };
}

// --- factorization of the maximal-count conditional state -------------------

struct FactorizationCheck {
    Complex lhs;       // overlap of full conditional states at the maximal count
    Complex rhs;       // <Q_aux|Q_aux> <Q_i|Q_j> from the factorized route
    int max_count = 0; // the count N = N_aux + N_bell projected on
};

// Both sides of the auxiliary-photon factorization identity for Bell inputs
// i and j mixed with `aux` (definite photon number) through `u`; the selected
// mode is output 0. lhs goes through the full product state, rhs through the
// factors separately.
inline FactorizationCheck factorization_check(const ModePolynomial& aux, BellLabel i, BellLabel j,
                                              const ModeUnitary& u) {
    const int d = u.dim();
    if (aux.modes() != d - 4)
        throw DimensionError("factorization_check: aux must cover the non-Bell modes");
    if (!aux.is_zero() && !aux.total_photon_number())
        throw ValidationError("factorization_check: aux must have definite photon number");
    const ModePolynomial aux_embedded = tensor_product(ModePolynomial::vacuum(4), aux);
    const ModePolynomial aux_out = apply(u, aux_embedded);
    const int n_aux = aux_out.max_degree(0);

    std::array<ModePolynomial, 4> bell_out{ModePolynomial(d), ModePolynomial(d), ModePolynomial(d),
                                           ModePolynomial(d)};
    int n_bell = 0;
    for (int k = 0; k < 4; ++k) {
        bell_out[static_cast<std::size_t>(k)] = apply(
            u, tensor_product(bell_state(kAllBellLabels[static_cast<std::size_t>(k)]),
                              ModePolynomial::vacuum(d - 4)));
        n_bell = std::max(n_bell, bell_out[static_cast<std::size_t>(k)].max_degree(0));
    }
    const int n = n_aux + n_bell;

    auto conditional_at = [&](BellLabel label, int count) {
        const ModePolynomial total =
            apply(u, tensor_product(bell_state(label), aux));
        return project_mode(total, 0, count).conditional;
    };
    const ModePolynomial lhs_i = conditional_at(i, n);
    const ModePolynomial lhs_j = conditional_at(j, n);

    const ModePolynomial q_aux = project_mode(aux_out, 0, n_aux).conditional;
    const ModePolynomial q_i =
        project_mode(bell_out[static_cast<std::size_t>(i)], 0, n_bell).conditional;
    const ModePolynomial q_j =
        project_mode(bell_out[static_cast<std::size_t>(j)], 0, n_bell).conditional;

    FactorizationCheck out;
    out.lhs = inner_product(lhs_i, lhs_j);
    out.rhs = inner_product(q_aux, q_aux) * inner_product(q_i, q_j);
    out.max_count = n;
    return out;
}

// --- the orthogonality system for single-photon counts ----------------------

struct ContradictionCertificate {
    double forced_c_norm_sq = 0.0;  // unique solution for |c_r|^2
    double forced_d_norm_sq = 0.0;  // unique solution for |d_r|^2
    double margin = 0.0;            // magnitude of the coefficient that forces the zero
    std::string forcing_equation;   // which equation does the forcing
    bool unitary_completion_possible = true;
};

// Solves { |c_r|^2 = |d_r|^2,  (|a|^2-|b|^2)|c_r|^2 = 0,  (b* a)|c_r|^2 = 0 }
// for nonzero (a, b). The only solution is |c_r|^2 = |d_r|^2 = 0, which wipes
// out two full rows of U: no rank-4 unitary completion exists.
inline ContradictionCertificate orthogonality_contradiction(Complex a, Complex b) {
    const double total = std::norm(a) + std::norm(b);
    if (total <= 0.0)
        throw ValidationError("orthogonality_contradiction: (a, b) must not both vanish");
    const double alpha = std::norm(a) - std::norm(b);  // population imbalance
    const double beta = std::abs(std::conj(b) * a);    // cross term
    ContradictionCertificate cert;
    if (std::abs(alpha) >= beta) {
        cert.margin = std::abs(alpha);
        cert.forcing_equation = "(|a|^2 - |b|^2) |c_r|^2 = 0";
    } else {
        cert.margin = beta;
        cert.forcing_equation = "b* a |c_r|^2 = 0";
    }
    // alpha and beta cannot both vanish when (a,b) != 0, so |c_r|^2 = 0 is
    // forced and |c_r|^2 = |d_r|^2 drags |d_r|^2 with it.
    cert.forced_c_norm_sq = 0.0;
    cert.forced_d_norm_sq = 0.0;
    cert.unitary_completion_possible = false;
    return cert;
}

}  // namespace bellscope
