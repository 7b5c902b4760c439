#pragma once

// Seeded verification battery over the nogo closed forms. Four scans, each
// cross-checking a closed form against an independent route (the polynomial
// simulator or a derivative-free minimizer); all samples are drawn from
// per-index forked substreams so results are schedule-independent.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "bellscope/nogo.hpp"
#include "bellscope/parallel.hpp"
#include "bellscope/rng.hpp"

namespace bellscope {

struct NogoVerifyConfig {
    std::uint64_t seed = 0;
    long two_photon_samples = 100000;
    long factorization_samples = 1000;
    long overlap_samples = 1000;
    long contradiction_samples = 10000;

    double coefficient_above = 1e-9;      // "clearly nonzero" for the mu-coefficient scan
    double coefficient_below = 1e-12;     // "clearly zero"
    double family_zero = 1e-14;           // bound for the two exact solution families
    double factorization_tolerance = 1e-10;
    double overlap_tolerance = 1e-10;
    double classification_epsilon = 1e-10;
    double forced_zero_tolerance = 1e-10;
    double min_overlap_bound = 0.05;

    // One knob for the whole battery, scaled the way the standard run uses:
    // scan = n, factorization = n/100, overlaps = n/100, contradiction = n/10.
    static NogoVerifyConfig from_total_samples(long n, std::uint64_t seed) {
        NogoVerifyConfig cfg;
        cfg.seed = seed;
        cfg.two_photon_samples = std::max<long>(1, n);
        cfg.factorization_samples = std::max<long>(1, n / 100);
        cfg.overlap_samples = std::max<long>(1, n / 100);
        cfg.contradiction_samples = std::max<long>(1, n / 10);
        return cfg;
    }
};

struct ScanOutcome {
    long samples = 0;
    long violations = 0;
    double max_residual = 0.0;
    std::string first_violation;  // parameters of the first offending sample, if any

    void merge(const ScanOutcome& other) {
        samples += other.samples;
        violations += other.violations;
        max_residual = std::max(max_residual, other.max_residual);
        if (first_violation.empty()) first_violation = other.first_violation;
    }
};

struct NogoVerifyReport {
    ScanOutcome two_photon_scan;
    ScanOutcome factorization;
    ScanOutcome overlap_oracle;
    long overlap_classification_mismatches = 0;
    ScanOutcome contradiction;
    double contradiction_min_overlap = 1.0;  // min over samples of the minimized max-overlap
    std::uint64_t seed = 0;

    bool all_passed() const {
        return two_photon_scan.violations == 0 && factorization.violations == 0 &&
               overlap_oracle.violations == 0 && overlap_classification_mismatches == 0 &&
               contradiction.violations == 0;
    }
};

namespace detail {

inline std::string describe_vector(const Eigen::VectorXcd& v) {
    std::ostringstream out;
    out.precision(17);
    out << "[";
    for (int i = 0; i < v.size(); ++i) {
        if (i) out << ", ";
        out << v(i).real() << (v(i).imag() < 0 ? "-" : "+") << std::abs(v(i).imag()) << "i";
    }
    out << "]";
    return out.str();
}

// Exactly one coefficient clearly nonzero while the rest are clearly zero
// would certify an unambiguous two-photon event; the scan must never see it.
inline bool single_coefficient_pattern(const std::array<Complex, 4>& coeffs, double above,
                                       double below) {
    int big = 0, small = 0;
    for (const Complex& c : coeffs) {
        const double mag = std::abs(c);
        if (mag > above) ++big;
        if (mag < below) ++small;
    }
    return big == 1 && small == 3;
}

}  // namespace detail

inline ScanOutcome run_two_photon_scan(const NogoVerifyConfig& cfg, const SeededRng& base) {
    return parallel_map_reduce(
        cfg.two_photon_samples, ScanOutcome{},
        [&](long index) {
            SeededRng rng = base.fork(static_cast<std::uint64_t>(index));
            ScanOutcome out;
            out.samples = 1;
            const Eigen::VectorXcd v = random_unit_vector(4, rng);
            const FirstColumn v1(v);
            const auto coeffs = m11_coefficients(v1);
            if (detail::single_coefficient_pattern(coeffs, cfg.coefficient_above, cfg.coefficient_below)) {
                out.violations = 1;
                out.first_violation = "v1 = " + detail::describe_vector(v);
            }
            // the two displayed solution families must vanish identically
            Eigen::VectorXcd fam(4);
            fam << Complex(0), Complex(0), v(2), v(3);
            for (const Complex& c : m11_coefficients(FirstColumn(fam)))
                out.max_residual = std::max(out.max_residual, std::abs(c));
            fam << v(0), v(1), Complex(0), Complex(0);
            for (const Complex& c : m11_coefficients(FirstColumn(fam)))
                out.max_residual = std::max(out.max_residual, std::abs(c));
            if (out.max_residual >= cfg.family_zero && out.violations == 0) {
                out.violations = 1;
                out.first_violation = "solution family residual at v1 = " + detail::describe_vector(v);
            }
            return out;
        },
        [](ScanOutcome acc, const ScanOutcome& one) {
            acc.merge(one);
            return acc;
        });
}

// Random auxiliary state of definite photon number over `modes` modes.
inline ModePolynomial random_homogeneous_state(int modes, int photons, SeededRng& rng) {
    if (modes == 0) return ModePolynomial::vacuum(0);
    ModePolynomial::TermMap terms;
    for (const auto& occ : enumerate_occupations(modes, photons))
        terms.emplace(occ, rng.complex_normal());
    return ModePolynomial::from_terms(modes, std::move(terms)).normalized();
}

inline ScanOutcome run_factorization_scan(const NogoVerifyConfig& cfg, const SeededRng& base) {
    return parallel_map_reduce(
        cfg.factorization_samples, ScanOutcome{},
        [&](long index) {
            SeededRng rng = base.fork(static_cast<std::uint64_t>(index));
            ScanOutcome out;
            out.samples = 1;
            const int aux_photons = static_cast<int>(index % 3);
            const int dim = 5 + static_cast<int>((index / 3) % 4);  // 5..8
            const ModeUnitary u{random_unitary_matrix(dim, rng)};
            const ModePolynomial aux = random_homogeneous_state(dim - 4, aux_photons, rng);
            for (int i = 0; i < 4 && out.violations == 0; ++i) {
                for (int j = i + 1; j < 4; ++j) {
                    const auto check =
                        factorization_check(aux, kAllBellLabels[static_cast<std::size_t>(i)],
                                            kAllBellLabels[static_cast<std::size_t>(j)], u);
                    const double diff = std::abs(check.lhs - check.rhs);
                    out.max_residual = std::max(out.max_residual, diff);
                    if (diff >= cfg.factorization_tolerance) {
                        out.violations = 1;
                        out.first_violation = "sample " + std::to_string(index) + " D=" +
                                              std::to_string(dim) + " aux_photons=" +
                                              std::to_string(aux_photons) + " pair (" +
                                              std::to_string(i + 1) + "," + std::to_string(j + 1) +
                                              ") |lhs-rhs|=" + std::to_string(diff);
                        break;
                    }
                }
            }
            return out;
        },
        [](ScanOutcome acc, const ScanOutcome& one) {
            acc.merge(one);
            return acc;
        });
}

struct OverlapScanOutcome {
    ScanOutcome scan;
    long classification_mismatches = 0;
};

inline OverlapScanOutcome run_overlap_scan(const NogoVerifyConfig& cfg, const SeededRng& base) {
    return parallel_map_reduce(
        cfg.overlap_samples, OverlapScanOutcome{},
        [&](long index) {
            SeededRng rng = base.fork(static_cast<std::uint64_t>(index));
            OverlapScanOutcome out;
            out.scan.samples = 1;
            const int dim = 5;
            const Eigen::VectorXcd ab = random_unit_vector(2, rng);
            Eigen::VectorXcd v1 = Eigen::VectorXcd::Zero(dim);
            v1(0) = ab(0);
            v1(1) = ab(1);
            const ModeUnitary u{random_unitary_with_first_column(v1, rng)};
            const ReducedRows rows = reduced_rows(u);
            const auto closed = six_overlaps(ab(0), ab(1), rows.c_r, rows.d_r);
            const auto conds = single_photon_conditionals(ab(0), ab(1), rows.c_r, rows.d_r);
            int k = 0;
            for (int i = 0; i < 4; ++i) {
                for (int j = i + 1; j < 4; ++j, ++k) {
                    const Complex sim =
                        inner_product(conds[static_cast<std::size_t>(i)],
                                      conds[static_cast<std::size_t>(j)]);
                    const double diff = std::abs(sim - closed[static_cast<std::size_t>(k)]);
                    out.scan.max_residual = std::max(out.scan.max_residual, diff);
                    if (diff >= cfg.overlap_tolerance && out.scan.violations == 0) {
                        out.scan.violations = 1;
                        out.scan.first_violation =
                            "sample " + std::to_string(index) + " pair (" + std::to_string(i) +
                            "," + std::to_string(j) + ") |closed-sim|=" + std::to_string(diff);
                    }
                    const bool closed_zero =
                        std::abs(closed[static_cast<std::size_t>(k)]) <= cfg.classification_epsilon;
                    const bool sim_zero = std::abs(sim) <= cfg.classification_epsilon;
                    if (closed_zero != sim_zero) ++out.classification_mismatches;
                }
            }
            return out;
        },
        [](OverlapScanOutcome acc, const OverlapScanOutcome& one) {
            acc.scan.merge(one.scan);
            acc.classification_mismatches += one.classification_mismatches;
            return acc;
        });
}

// Max |overlap| over the six conditional-state pairs for explicit unit rows.
// Overlaps are Hermitian dots of the single-photon coefficient vectors, which
// is what the polynomial inner product reduces to for one-photon states.
inline double max_overlap_for_rows(Complex a, Complex b, const Eigen::VectorXcd& c_r,
                                   const Eigen::VectorXcd& d_r) {
    const std::array<Eigen::VectorXcd, 4> w{a * c_r + b * d_r, a * c_r - b * d_r,
                                            a * d_r + b * c_r, a * d_r - b * c_r};
    double worst = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            worst = std::max(worst, std::abs(w[static_cast<std::size_t>(i)].dot(
                                        w[static_cast<std::size_t>(j)])));
    return worst;
}

// Derivative-free minimization of the max overlap over unit-norm rows
// (c_r, d_r) in C^4; confirms no row choice makes all six overlaps small.
inline double minimize_max_overlap(Complex a, Complex b, SeededRng& rng) {
    constexpr int kRowDim = 4;
    constexpr int kParams = 4 * kRowDim;  // re/im of both rows
    auto objective = [&](const std::vector<double>& x) {
        Eigen::VectorXcd c_r(kRowDim), d_r(kRowDim);
        for (int i = 0; i < kRowDim; ++i) {
            c_r(i) = Complex(x[static_cast<std::size_t>(2 * i)],
                             x[static_cast<std::size_t>(2 * i + 1)]);
            d_r(i) = Complex(x[static_cast<std::size_t>(2 * kRowDim + 2 * i)],
                             x[static_cast<std::size_t>(2 * kRowDim + 2 * i + 1)]);
        }
        const double cn = c_r.norm(), dn = d_r.norm();
        if (cn < 1e-9 || dn < 1e-9) return 1e6;  // keep the search on unit rows
        return max_overlap_for_rows(a, b, c_r / cn, d_r / dn);
    };
    double best_found = 1e6;
    for (int restart = 0; restart < 2; ++restart) {
        std::vector<double> x(kParams);
        for (double& v : x) v = rng.normal();
        double best = objective(x);
        double step = 0.5;
        for (int sweep = 0; sweep < 200 && step > 1e-3; ++sweep) {
            bool improved = false;
            for (int k = 0; k < kParams; ++k) {
                for (double sign : {1.0, -1.0}) {
                    std::vector<double> y = x;
                    y[static_cast<std::size_t>(k)] += sign * step;
                    const double val = objective(y);
                    if (val < best - 1e-12) {
                        best = val;
                        x = std::move(y);
                        improved = true;
                        break;
                    }
                }
            }
            if (!improved) step *= 0.5;
        }
        best_found = std::min(best_found, best);
    }
    return best_found;
}

struct ContradictionOutcome {
    ScanOutcome scan;
    double min_overlap = 1e6;
};

inline ContradictionOutcome run_contradiction_scan(const NogoVerifyConfig& cfg, const SeededRng& base) {
    return parallel_map_reduce(
        cfg.contradiction_samples, ContradictionOutcome{},
        [&](long index) {
            SeededRng rng = base.fork(static_cast<std::uint64_t>(index));
            ContradictionOutcome out;
            out.scan.samples = 1;
            const Eigen::VectorXcd ab = random_unit_vector(2, rng);
            const auto cert = orthogonality_contradiction(ab(0), ab(1));
            const double forced = cert.forced_c_norm_sq + cert.forced_d_norm_sq;
            out.scan.max_residual = forced;
            const double minimized = minimize_max_overlap(ab(0), ab(1), rng);
            out.min_overlap = minimized;
            if (forced >= cfg.forced_zero_tolerance || cert.unitary_completion_possible ||
                minimized <= cfg.min_overlap_bound) {
                out.scan.violations = 1;
                out.scan.first_violation = "(a,b) = " + detail::describe_vector(ab) +
                                           " forced=" + std::to_string(forced) +
                                           " min_overlap=" + std::to_string(minimized);
            }
            return out;
        },
        [](ContradictionOutcome acc, const ContradictionOutcome& one) {
            acc.scan.merge(one.scan);
            acc.min_overlap = std::min(acc.min_overlap, one.min_overlap);
            return acc;
        });
}

inline NogoVerifyReport verify_nogo(const NogoVerifyConfig& cfg) {
    if (cfg.two_photon_samples < 1 || cfg.factorization_samples < 1 || cfg.overlap_samples < 1 ||
        cfg.contradiction_samples < 1)
        throw ValidationError("verify_nogo: sample counts must be positive");
    if (cfg.factorization_tolerance <= 0 || cfg.overlap_tolerance <= 0 ||
        cfg.classification_epsilon <= 0 || cfg.forced_zero_tolerance <= 0)
        throw ValidationError("verify_nogo: tolerances must be positive");
    const SeededRng root(cfg.seed);
    NogoVerifyReport report;
    report.seed = cfg.seed;
    report.two_photon_scan = run_two_photon_scan(cfg, root.fork(0x7770));
    report.factorization = run_factorization_scan(cfg, root.fork(0x7771));
    const auto overlaps = run_overlap_scan(cfg, root.fork(0x7772));
    report.overlap_oracle = overlaps.scan;
    report.overlap_classification_mismatches = overlaps.classification_mismatches;
    const auto contradiction = run_contradiction_scan(cfg, root.fork(0x7773));
    report.contradiction = contradiction.scan;
    report.contradiction_min_overlap = contradiction.min_overlap;
    return report;
}

}  // namespace bellscope
