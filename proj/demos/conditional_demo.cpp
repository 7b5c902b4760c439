// A two-stage conditional strategy that perfectly separates the four product
// states  up-left, up-right, down-up, down-down  (photon 1 on modes a1/a2,
// photon 2 on b1/b2, left/right the +-45 degree combinations). Measuring
// photon 1 first and choosing the second-stage basis from the result is what
// a fixed network cannot do.

#include <iostream>

#include "bellscope/bellscope.hpp"

int main() {
    using namespace bellscope;
    const double quarter = std::numbers::pi / 4.0;
    const ModePolynomial vac0 = ModePolynomial::vacuum(0);

    // stage 3 (reached when photon 1 was "down"): photon 2 measured in the
    // computational basis, modes (b1, b2)
    auto measure_b1 = std::make_shared<const StrategyNode>(
        ModeUnitary::identity(2), vac0, 0,
        std::map<int, StrategyChild>{{1, std::string("down-up")}, {0, std::string("down-down")}});

    // stage 2a (photon 1 was "up"): remaining modes are (a2, b1, b2); rotate
    // (b1, b2) by 45 degrees so right/left land on separate modes, measure b1
    auto measure_rotated = std::make_shared<const StrategyNode>(
        element_unitary(BeamSplitter{1, 2, quarter, 0.0}, 3), vac0, 1,
        std::map<int, StrategyChild>{{1, std::string("up-left")}, {0, std::string("up-right")}});

    // stage 2b: photon 1 absent from a1; confirm it sits in a2, then fall
    // through to the computational-basis stage
    auto check_a2 = std::make_shared<const StrategyNode>(
        ModeUnitary::identity(3), vac0, 0,
        std::map<int, StrategyChild>{{1, measure_b1}});

    // stage 1: measure a1
    auto root = std::make_shared<const StrategyNode>(
        ModeUnitary::identity(4), vac0, 0,
        std::map<int, StrategyChild>{{1, measure_rotated}, {0, check_a2}});

    const ConditionalStrategy strategy{4, root};

    const double w = 1.0 / std::sqrt(2.0);
    struct Case {
        const char* name;
        ModePolynomial state;
    };
    const Case cases[] = {
        {"up-left", ModePolynomial::monomial(4, {1, 0, 1, 0}, w) +
                        ModePolynomial::monomial(4, {1, 0, 0, 1}, -w)},
        {"up-right", ModePolynomial::monomial(4, {1, 0, 1, 0}, w) +
                         ModePolynomial::monomial(4, {1, 0, 0, 1}, w)},
        {"down-up", ModePolynomial::monomial(4, {0, 1, 1, 0}, 1.0)},
        {"down-down", ModePolynomial::monomial(4, {0, 1, 0, 1}, 1.0)},
    };

    for (const auto& c : cases) {
        std::cout << c.name << ":\n";
        for (const auto& [outcome, p] : run_strategy(strategy, c.state)) {
            std::cout << "  label=" << outcome.label << " path=(";
            for (std::size_t i = 0; i < outcome.path.size(); ++i)
                std::cout << (i ? "," : "") << outcome.path[i];
            std::cout << ") p=" << p << "\n";
        }
    }
    return 0;
}
