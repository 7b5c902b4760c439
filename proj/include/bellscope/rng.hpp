#pragma once

// Seeded randomness with bit-reproducible output. Distributions are derived
// from raw mt19937_64 words by hand (std::normal_distribution and friends are
// implementation-defined, which would break cross-build determinism).

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "bellscope/fock.hpp"

namespace bellscope {

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}
}  // namespace detail

class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : seed_(seed), engine_(detail::splitmix64(seed)) {}

    std::uint64_t seed() const { return seed_; }

    // Independent deterministic substream; does not consume state from the
    // parent, so forked work is schedule-independent.
    SeededRng fork(std::uint64_t stream) const {
        return SeededRng(detail::splitmix64(seed_ ^ detail::splitmix64(stream + 1)));
    }

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Box-Muller; one fresh pair per two calls.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(t);
        have_spare_ = true;
        return r * std::cos(t);
    }

    Complex complex_normal() {
        const double re = normal();
        const double im = normal();
        return {re, im};
    }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

inline Eigen::VectorXcd random_unit_vector(int dim, SeededRng& rng) {
    Eigen::VectorXcd v(dim);
    for (int i = 0; i < dim; ++i) v(i) = rng.complex_normal();
    const double n = v.norm();
    if (n == 0.0) {
        v.setZero();
        v(0) = Complex(1.0);
        return v;
    }
    return v / n;
}

// Rotation-invariant ensemble: QR of a complex Gaussian matrix with the
// R-diagonal phases folded back into Q.
inline Eigen::MatrixXcd random_unitary_matrix(int dim, SeededRng& rng) {
    Eigen::MatrixXcd g(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) g(i, j) = rng.complex_normal();
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
    Eigen::MatrixXcd q = qr.householderQ();
    const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int k = 0; k < dim; ++k) {
        const Complex rkk = r(k, k);
        const double mag = std::abs(rkk);
        q.col(k) *= (mag > 0.0) ? rkk / mag : Complex(1.0);
    }
    return q;
}

// Unitary with a prescribed first column: Gram-Schmidt completion with
// Gaussian fill vectors.
inline Eigen::MatrixXcd random_unitary_with_first_column(const Eigen::VectorXcd& first, SeededRng& rng) {
    const int dim = static_cast<int>(first.size());
    Eigen::MatrixXcd u(dim, dim);
    u.col(0) = first.normalized();
    for (int k = 1; k < dim; ++k) {
        Eigen::VectorXcd v(dim);
        for (;;) {
            for (int i = 0; i < dim; ++i) v(i) = rng.complex_normal();
            for (int j = 0; j < k; ++j) v -= u.col(j).dot(v) * u.col(j);
            const double n = v.norm();
            if (n > 1e-8) {
                u.col(k) = v / n;
                break;
            }
        }
    }
    return u;
}

}  // namespace bellscope
