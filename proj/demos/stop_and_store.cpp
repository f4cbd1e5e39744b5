// Integrates the Maxwell-Bloch system from the exact boundary data and
// prints where the pulse stops and what it leaves behind.

#include <cstdio>

#include "slowlight/scenario.hpp"

using namespace slowlight;

int main() {
    Scenario scn;  // nu0 = 10, Omega0 = 2, epsilon0 = 2.1, alpha = 1
    scn.frame = Frame::retarded;
    const SampledData run = sample(scn, Source::numeric);
    const SolutionGrid& s = run.retarded;
    const Grid2D& g = s.grid;

    std::printf("# tau   zeta(max |Omega_a|)   max |Omega_a|   |Omega_b| there\n");
    for (std::size_t j = 0; j < g.n_tau; j += 20) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < g.n_zeta; ++i)
            if (std::abs(s.field(i, j).omega_a) > std::abs(s.field(best, j).omega_a)) best = i;
        std::printf("%6.2f  %8.3f  %12.5e  %10.5f\n", g.tau(j), g.zeta(best),
                    std::abs(s.field(best, j).omega_a), std::abs(s.field(best, j).omega_b));
    }

    const std::size_t last = g.n_tau - 1;
    std::printf("\n# stored population P2(zeta) at tau = %.1f\n", g.tau(last));
    for (std::size_t i = 0; i < g.n_zeta; i += 5)
        std::printf("%6.3f  %.6f\n", g.zeta(i), s.atom(i, last).populations()[1]);

    const SummaryReport r = make_summary(scn);
    std::printf("\nL_s = %.6f  L_s(sudden) = %.6f  W_s = %.6f  max norm drift = %.2e\n", *r.stopping_distance,
                r.stopping_distance_sudden, r.memory_width, run.max_norm_drift);
}
