// Two photons entering a 50/50 splitter from different ports always leave
// together: the (1,1) outcome cancels exactly.

#include <iostream>

#include "bellscope/bellscope.hpp"

int main() {
    using namespace bellscope;
    const ModeUnitary splitter = element_unitary(BeamSplitter{0, 1, std::numbers::pi / 4.0, 0.0}, 2);
    const ModePolynomial in = ModePolynomial::monomial(2, {1, 1}, 1.0);
    const ModePolynomial out = apply(splitter, in);

    std::cout << "input  a+1 a+2 |0>\n";
    for (const auto& [occ, amp] : out.terms())
        std::cout << "  " << occupation_to_string(occ) << "  amplitude " << amp << "\n";
    for (const auto& [counts, p] : outcome_distribution(out, DetectorKind::NumberResolving))
        std::cout << "P" << occupation_to_string(counts) << " = " << p << "\n";
    std::cout << "coincidence amplitude: " << out.coefficient({1, 1}) << "\n";
    return 0;
}
