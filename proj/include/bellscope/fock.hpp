#pragma once

// States of the form P(creation operators)|0> over a fixed set of bosonic
// modes, stored as a sparse map from occupation vectors to monomial
// coefficients. Coefficients carry no Fock normalization: the factorials
// from <0|a^m (a+)^n|0> = n! delta_mn enter through inner_product only.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "bellscope/errors.hpp"

namespace bellscope {

using Complex = std::complex<double>;

// Photons per mode. Length is the ambient mode count.
using OccupationVector = std::vector<int>;

// Amplitudes below this magnitude are dropped after every arithmetic step.
inline constexpr double kPruneThreshold = 1e-14;

inline double factorial(int n) {
    double r = 1.0;
    for (int k = 2; k <= n; ++k) r *= k;
    return r;
}

inline int total_photons(const OccupationVector& occ) {
    return std::accumulate(occ.begin(), occ.end(), 0);
}

inline std::string occupation_to_string(const OccupationVector& occ) {
    std::ostringstream out;
    out << '(';
    for (std::size_t i = 0; i < occ.size(); ++i) {
        if (i) out << ',';
        out << occ[i];
    }
    out << ')';
    return out.str();
}

// All occupation vectors over `modes` modes with the given photon total,
// in lexicographic order.
inline std::vector<OccupationVector> enumerate_occupations(int modes, int photons) {
    if (modes < 0 || photons < 0) throw ValidationError("enumerate_occupations: negative argument");
    if (modes == 0) {
        if (photons == 0) return {OccupationVector{}};
        return {};
    }
    std::vector<OccupationVector> out;
    OccupationVector cur(static_cast<std::size_t>(modes), 0);
    // lexicographic order means mode 0 varies slowest
    auto rec = [&](auto&& self, int mode, int remaining) -> void {
        if (mode == modes - 1) {
            cur[static_cast<std::size_t>(mode)] = remaining;
            out.push_back(cur);
            return;
        }
        for (int n = 0; n <= remaining; ++n) {
            cur[static_cast<std::size_t>(mode)] = n;
            self(self, mode + 1, remaining - n);
        }
    };
    rec(rec, 0, photons);
    return out;
}

class ModePolynomial {
public:
    using TermMap = std::map<OccupationVector, Complex>;

    // Zero polynomial (empty term map). Distinct from vacuum(), which is the
    // empty monomial with coefficient one.
    explicit ModePolynomial(int modes) : modes_(checked_modes(modes)) {}

    static ModePolynomial vacuum(int modes) {
        return monomial(modes, OccupationVector(static_cast<std::size_t>(modes), 0), Complex(1.0));
    }

    static ModePolynomial monomial(int modes, const OccupationVector& occ, Complex amplitude) {
        ModePolynomial p(modes);
        p.check_key(occ);
        if (std::abs(amplitude) >= kPruneThreshold) p.terms_[occ] = amplitude;
        return p;
    }

    static ModePolynomial from_terms(int modes, TermMap terms) {
        ModePolynomial p(modes);
        for (const auto& [occ, amp] : terms) p.check_key(occ);
        p.terms_ = std::move(terms);
        p.prune();
        return p;
    }

    int modes() const { return modes_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }

    Complex coefficient(const OccupationVector& occ) const {
        auto it = terms_.find(occ);
        return it == terms_.end() ? Complex(0.0) : it->second;
    }

    ModePolynomial operator+(const ModePolynomial& rhs) const {
        require_same_modes(rhs, "add");
        ModePolynomial out(modes_);
        out.terms_ = terms_;
        for (const auto& [occ, amp] : rhs.terms_) out.terms_[occ] += amp;
        out.prune();
        return out;
    }

    ModePolynomial operator-(const ModePolynomial& rhs) const { return *this + (-rhs); }

    ModePolynomial operator-() const {
        ModePolynomial out(modes_);
        for (const auto& [occ, amp] : terms_) out.terms_.emplace(occ, -amp);
        return out;
    }

    ModePolynomial operator*(Complex scale) const {
        ModePolynomial out(modes_);
        for (const auto& [occ, amp] : terms_) out.terms_.emplace(occ, amp * scale);
        out.prune();
        return out;
    }

    // Product over the same mode set. Creation operators commute, so this is
    // ordinary multivariate polynomial multiplication.
    ModePolynomial operator*(const ModePolynomial& rhs) const {
        require_same_modes(rhs, "multiply");
        ModePolynomial out(modes_);
        OccupationVector key(static_cast<std::size_t>(modes_));
        for (const auto& [occ_a, amp_a] : terms_) {
            for (const auto& [occ_b, amp_b] : rhs.terms_) {
                for (std::size_t m = 0; m < key.size(); ++m) key[m] = occ_a[m] + occ_b[m];
                out.terms_[key] += amp_a * amp_b;
            }
        }
        out.prune();
        return out;
    }

    double norm_squared() const {
        double s = 0.0;
        for (const auto& [occ, amp] : terms_) s += std::norm(amp) * occupation_factorial(occ);
        return s;
    }

    double norm() const { return std::sqrt(norm_squared()); }

    ModePolynomial normalized() const {
        const double n = norm();
        if (n <= 0.0) throw DegenerateStateError("cannot normalize the zero polynomial");
        return *this * Complex(1.0 / n);
    }

    // N when every term carries N photons in total, nullopt when mixed.
    std::optional<int> total_photon_number() const {
        if (is_zero()) throw DegenerateStateError("photon number of the zero polynomial is undefined");
        std::optional<int> n;
        for (const auto& [occ, amp] : terms_) {
            const int t = total_photons(occ);
            if (!n) n = t;
            else if (*n != t) return std::nullopt;
        }
        return n;
    }

    // Highest power of the given mode operator appearing in any term.
    int max_degree(int mode) const {
        check_mode_index(mode);
        int deg = 0;
        for (const auto& [occ, amp] : terms_) deg = std::max(deg, occ[static_cast<std::size_t>(mode)]);
        return deg;
    }

    bool operator==(const ModePolynomial&) const = default;

    static double occupation_factorial(const OccupationVector& occ) {
        double f = 1.0;
        for (int n : occ) f *= factorial(n);
        return f;
    }

    void check_mode_index(int mode) const {
        if (mode < 0 || mode >= modes_)
            throw DimensionError("mode index " + std::to_string(mode) + " out of range for " +
                                 std::to_string(modes_) + " modes");
    }

private:
    static int checked_modes(int modes) {
        if (modes < 0) throw DimensionError("mode count must be non-negative");
        return modes;
    }

    void check_key(const OccupationVector& occ) const {
        if (static_cast<int>(occ.size()) != modes_)
            throw DimensionError("occupation vector " + occupation_to_string(occ) + " does not have " +
                                 std::to_string(modes_) + " modes");
        for (int n : occ)
            if (n < 0) throw ValidationError("occupation vector has a negative count");
    }

    void require_same_modes(const ModePolynomial& rhs, const char* op) const {
        if (modes_ != rhs.modes_)
            throw DimensionError(std::string(op) + ": mode counts differ (" + std::to_string(modes_) +
                                 " vs " + std::to_string(rhs.modes_) + ")");
    }

    void prune() {
        for (auto it = terms_.begin(); it != terms_.end();) {
            if (std::abs(it->second) < kPruneThreshold) it = terms_.erase(it);
            else ++it;
        }
    }

    int modes_;
    TermMap terms_;
};

inline ModePolynomial operator*(Complex scale, const ModePolynomial& p) { return p * scale; }

// <P|Q> = sum_n conj(P[n]) Q[n] prod_m n_m!
inline Complex inner_product(const ModePolynomial& p, const ModePolynomial& q) {
    if (p.modes() != q.modes())
        throw DimensionError("inner_product: mode counts differ (" + std::to_string(p.modes()) + " vs " +
                             std::to_string(q.modes()) + ")");
    Complex s(0.0);
    const auto& a = p.terms();
    const auto& b = q.terms();
    if (a.size() <= b.size()) {
        for (const auto& [occ, amp] : a) {
            auto it = b.find(occ);
            if (it != b.end()) s += std::conj(amp) * it->second * ModePolynomial::occupation_factorial(occ);
        }
    } else {
        for (const auto& [occ, amp] : b) {
            auto it = a.find(occ);
            if (it != a.end()) s += std::conj(it->second) * amp * ModePolynomial::occupation_factorial(occ);
        }
    }
    return s;
}

// Product state on concatenated mode ranges: `front` keeps its modes, the
// modes of `back` are appended after them.
inline ModePolynomial tensor_product(const ModePolynomial& front, const ModePolynomial& back) {
    const int d = front.modes() + back.modes();
    ModePolynomial::TermMap terms;
    OccupationVector key(static_cast<std::size_t>(d));
    for (const auto& [occ_f, amp_f] : front.terms()) {
        std::copy(occ_f.begin(), occ_f.end(), key.begin());
        for (const auto& [occ_b, amp_b] : back.terms()) {
            std::copy(occ_b.begin(), occ_b.end(), key.begin() + front.modes());
            terms[key] += amp_f * amp_b;
        }
    }
    return ModePolynomial::from_terms(d, std::move(terms));
}

inline double distance(const ModePolynomial& p, const ModePolynomial& q) { return (p - q).norm(); }

}  // namespace bellscope
