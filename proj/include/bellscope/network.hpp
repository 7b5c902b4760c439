#pragma once

// D-mode linear networks acting on creation-operator polynomials.
//
// Convention: a ModeUnitary U rewrites input operators in terms of output
// operators,
//
//     in+_i  =  sum_j U(i,j) out+_j.
//
// Composition therefore reads left to right: applying U1 and then U2 equals
// applying the single matrix U1*U2, and a two-photon quadratic form v^T M v
// transforms as M -> U^T M U.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "bellscope/errors.hpp"
#include "bellscope/fock.hpp"

namespace bellscope {

inline constexpr double kUnitarityTolerance = 1e-10;

class ModeUnitary {
public:
    // Rejects matrices whose unitarity residual exceeds the tolerance;
    // inputs are never silently re-orthonormalized.
    explicit ModeUnitary(Eigen::MatrixXcd entries) : m_(std::move(entries)) {
        if (m_.rows() != m_.cols() || m_.rows() < 1)
            throw DimensionError("ModeUnitary: matrix must be square and non-empty");
        const double r = residual(m_);
        if (r > kUnitarityTolerance)
            throw UnitarityError("ModeUnitary: unitarity residual " + std::to_string(r) +
                                 " exceeds tolerance");
    }

    static ModeUnitary identity(int dim) {
        return ModeUnitary(Eigen::MatrixXcd::Identity(dim, dim));
    }

    int dim() const { return static_cast<int>(m_.rows()); }
    const Eigen::MatrixXcd& matrix() const { return m_; }

    double unitarity_residual() const { return residual(m_); }

    static double residual(const Eigen::MatrixXcd& m) {
        const Eigen::MatrixXcd delta =
            m * m.adjoint() - Eigen::MatrixXcd::Identity(m.rows(), m.cols());
        return delta.cwiseAbs().maxCoeff();
    }

private:
    Eigen::MatrixXcd m_;
};

struct BeamSplitter {
    int mode_i = 0;
    int mode_j = 1;
    double theta = 0.0;  // mixing angle, radians
    double phi = 0.0;    // relative phase, radians
};

struct PhaseShifter {
    int mode = 0;
    double phi = 0.0;
};

using NetworkElement = std::variant<BeamSplitter, PhaseShifter>;

// Identity except the element's block:
//   beam splitter rows (i,j): [[cos t, e^{i phi} sin t], [-e^{-i phi} sin t, cos t]]
//   phase shifter entry (i,i): e^{i phi}
inline ModeUnitary element_unitary(const NetworkElement& e, int dim) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(dim, dim);
    if (const auto* bs = std::get_if<BeamSplitter>(&e)) {
        if (bs->mode_i < 0 || bs->mode_j < 0 || bs->mode_i >= dim || bs->mode_j >= dim)
            throw DimensionError("beam splitter mode index out of range");
        if (bs->mode_i == bs->mode_j)
            throw ValidationError("beam splitter requires two distinct modes");
        const double c = std::cos(bs->theta);
        const double s = std::sin(bs->theta);
        const Complex ph = std::polar(1.0, bs->phi);
        m(bs->mode_i, bs->mode_i) = c;
        m(bs->mode_i, bs->mode_j) = ph * s;
        m(bs->mode_j, bs->mode_i) = -std::conj(ph) * s;
        m(bs->mode_j, bs->mode_j) = c;
    } else {
        const auto& ps = std::get<PhaseShifter>(e);
        if (ps.mode < 0 || ps.mode >= dim)
            throw DimensionError("phase shifter mode index out of range");
        m(ps.mode, ps.mode) = std::polar(1.0, ps.phi);
    }
    return ModeUnitary(std::move(m));
}

// Product of element matrices in application order (first element leftmost).
inline ModeUnitary compose(const std::vector<NetworkElement>& elements, int dim) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(dim, dim);
    for (const auto& e : elements) m *= element_unitary(e, dim).matrix();
    return ModeUnitary(std::move(m));
}

// Places a k-mode unitary on the listed modes, identity elsewhere.
inline ModeUnitary embed(const ModeUnitary& u, const std::vector<int>& positions, int dim) {
    if (static_cast<int>(positions.size()) != u.dim())
        throw DimensionError("embed: position count does not match the embedded dimension");
    std::vector<bool> seen(static_cast<std::size_t>(dim), false);
    for (int p : positions) {
        if (p < 0 || p >= dim) throw DimensionError("embed: position out of range");
        if (seen[static_cast<std::size_t>(p)]) throw DimensionError("embed: repeated position");
        seen[static_cast<std::size_t>(p)] = true;
    }
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(dim, dim);
    for (int r = 0; r < u.dim(); ++r)
        for (int c = 0; c < u.dim(); ++c) m(positions[r], positions[c]) = u.matrix()(r, c);
    return ModeUnitary(std::move(m));
}

// Substitutes in+_i -> sum_j U(i,j) out+_j in every term and expands.
// Preserves total photon number exactly and inner products up to rounding.
inline ModePolynomial apply(const ModeUnitary& u, const ModePolynomial& p) {
    if (u.dim() != p.modes())
        throw DimensionError("apply: unitary dimension " + std::to_string(u.dim()) +
                             " does not match polynomial modes " + std::to_string(p.modes()));
    const int d = p.modes();
    const auto& m = u.matrix();
    ModePolynomial::TermMap result;
    ModePolynomial::TermMap scratch;
    for (const auto& [occ, amp] : p.terms()) {
        // expand prod_i (sum_j U(i,j) out_j)^{occ[i]} one linear factor at a time
        ModePolynomial::TermMap cur;
        cur.emplace(OccupationVector(static_cast<std::size_t>(d), 0), amp);
        for (int i = 0; i < d; ++i) {
            for (int rep = 0; rep < occ[static_cast<std::size_t>(i)]; ++rep) {
                scratch.clear();
                for (const auto& [base, coeff] : cur) {
                    for (int j = 0; j < d; ++j) {
                        const Complex w = m(i, j);
                        if (w == Complex(0.0)) continue;
                        OccupationVector key = base;
                        ++key[static_cast<std::size_t>(j)];
                        scratch[std::move(key)] += coeff * w;
                    }
                }
                cur.swap(scratch);
            }
        }
        for (auto& [key, coeff] : cur) result[key] += coeff;
    }
    return ModePolynomial::from_terms(d, std::move(result));
}

// Triangular mesh factorization: beam splitters on mode pairs (i, j), i < j,
// visited column-major, followed by one phase shifter per mode. The returned
// sequence satisfies compose(elements) == u up to rounding.
inline std::vector<NetworkElement> reck_decompose(const ModeUnitary& u) {
    const int d = u.dim();
    Eigen::MatrixXcd v = u.matrix();
    std::vector<NetworkElement> elements;
    for (int col = 0; col < d - 1; ++col) {
        for (int row = col + 1; row < d; ++row) {
            const Complex pivot = v(col, col);
            const Complex target = v(row, col);
            if (std::abs(target) == 0.0) continue;
            double theta;
            double phi;
            if (std::abs(pivot) == 0.0) {
                theta = std::numbers::pi / 2.0;
                phi = 0.0;
            } else {
                const Complex w = -target / pivot;
                theta = std::atan(std::abs(w));
                phi = -std::arg(w);
            }
            // peel E+ off the left: rows (col,row) <- [[c, -e^{i phi} s], [e^{-i phi} s, c]] * rows
            const double c = std::cos(theta);
            const double s = std::sin(theta);
            const Complex ph = std::polar(1.0, phi);
            const Eigen::RowVectorXcd top = v.row(col);
            const Eigen::RowVectorXcd bottom = v.row(row);
            v.row(col) = c * top - ph * s * bottom;
            v.row(row) = std::conj(ph) * s * top + c * bottom;
            elements.push_back(BeamSplitter{col, row, theta, phi});
        }
    }
    for (int k = 0; k < d; ++k) elements.push_back(PhaseShifter{k, std::arg(v(k, k))});
    return elements;
}

}  // namespace bellscope
