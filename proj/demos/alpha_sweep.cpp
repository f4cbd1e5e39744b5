// Stopping distance against switch-off rate, exact solution only.

#include <cmath>
#include <cstdio>

#include "slowlight/core.hpp"

using namespace slowlight;

int main() {
    const MediumParams mp;
    const SolitonParams sp = SolitonParams::imaginary(2.1);
    std::printf("# alpha      L_s        Re z(inf)\n");
    for (double alpha : {0.01, 0.03, 0.1, 0.3, 1.0, 3.0, 10.0, 100.0, 1e4}) {
        const ControlField cf{2.0, alpha};
        std::printf("%-9g  %.6f  %+.6e\n", alpha, stopping_distance(mp, sp, cf), wz_limit(sp.lambda, cf).real());
    }
    std::printf("sudden     %.6f\n", ExactSolution(mp, sp, ControlField{2.0, 1.0}).stopping_distance_sudden());
}
