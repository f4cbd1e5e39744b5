#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "slowlight/grid.hpp"
#include "slowlight/mb.hpp"

using namespace slowlight;

namespace {

const MediumParams kMedium{};
const ControlField kControl{};
const SolitonParams kSoliton = SolitonParams::imaginary(2.1, -3.0);

double integrate_error(const Grid2D& g) {
    const ExactSolution sol(kMedium, kSoliton, kControl);
    std::vector<FieldSample> boundary(g.n_tau);
    for (std::size_t j = 0; j < g.n_tau; ++j) boundary[j] = sol.fields(g.zeta_min, g.tau(j));
    std::vector<AtomState> initial(g.n_zeta);
    for (std::size_t i = 0; i < g.n_zeta; ++i) initial[i] = sol.atom_state(g.zeta(i), g.tau_min);
    IntegrateStats stats;
    const SolutionGrid num = integrate(kMedium, boundary, initial, g, {}, &stats);
    EXPECT_LT(stats.max_norm_drift, 1e-8 * (g.tau_max - g.tau_min));
    const SolutionGrid ex = tabulate_exact(sol, g);
    double peak = 0.0, err = 0.0;
    for (std::size_t n = 0; n < ex.fields.size(); ++n) {
        peak = std::max(peak, std::abs(ex.fields[n].omega_a));
        err = std::max(err, std::abs(num.fields[n].omega_a - ex.fields[n].omega_a));
    }
    return err / peak;
}

} // namespace

TEST(Hamiltonian, Structure) {
    const Matrix3c h0 = hamiltonian({}, 0.8);
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < 3; ++c)
            EXPECT_EQ(h0[r][c], r != c ? Complex(0.0) : Complex(r == 2 ? 0.4 : -0.4));
    const Complex oa = std::polar(2.476, 0.7);
    const Matrix3c h = hamiltonian({oa, Complex(-1.3, 0.4)}, 0.3);
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < 3; ++c) EXPECT_EQ(h[r][c], std::conj(h[c][r]));
    EXPECT_EQ(h[2][0], -oa / 2.0);
}

TEST(Schrodinger, NormPreservingAndDarkState) {
    const Matrix3c zero{};
    const AtomState one{};
    const AtomState d0 = schrodinger_rhs(one, zero);
    EXPECT_EQ(d0.norm_squared(), 0.0);

    const AtomState dark = schrodinger_rhs(one, hamiltonian({Complex(0.0), Complex(1.7, -0.2)}, 0.0));
    EXPECT_EQ(dark.norm_squared(), 0.0);

    std::mt19937_64 rng(1);
    std::normal_distribution<double> n;
    for (int k = 0; k < 100; ++k) {
        const AtomState psi{Complex(n(rng), n(rng)), Complex(n(rng), n(rng)), Complex(n(rng), n(rng))};
        const Matrix3c h = hamiltonian({Complex(n(rng), n(rng)), Complex(n(rng), n(rng))}, n(rng));
        const AtomState d = schrodinger_rhs(psi, h);
        const double dn = 2.0 * (std::conj(psi.c1) * d.c1 + std::conj(psi.c2) * d.c2 + std::conj(psi.c3) * d.c3).real();
        EXPECT_NEAR(dn, 0.0, 1e-13);
    }
}

TEST(Maxwell, Rhs) {
    FieldSample f = maxwell_rhs(AtomState{}, 10.0);
    EXPECT_EQ(f.omega_a, Complex(0.0));
    EXPECT_EQ(f.omega_b, Complex(0.0));
    f = maxwell_rhs({0.0, 0.0, 1.0}, 10.0);
    EXPECT_EQ(f.omega_a, Complex(0.0));
    const double s = std::sqrt(0.5);
    f = maxwell_rhs({s, 0.0, s}, 10.0);
    EXPECT_NEAR(std::abs(f.omega_a - Complex(0.0, 5.0)), 0.0, 1e-14);
    EXPECT_EQ(f.omega_b, Complex(0.0));
}

TEST(Integrate, DarkStateTransparency) {
    const Grid2D g{0.0, 3.0, -5.0, 20.0, 61, 2001};
    std::vector<FieldSample> boundary(g.n_tau);
    for (std::size_t j = 0; j < g.n_tau; ++j) boundary[j] = {0.0, -kControl.at(g.tau(j))};
    const SolutionGrid out = integrate(kMedium, boundary, AtomState{}, g);
    double worst = 0.0;
    for (std::size_t i = 0; i < g.n_zeta; ++i)
        for (std::size_t j = 0; j < g.n_tau; ++j) {
            worst = std::max(worst, std::abs(out.field(i, j).omega_b - boundary[j].omega_b));
            worst = std::max(worst, std::abs(out.field(i, j).omega_a));
        }
    EXPECT_LT(worst, 1e-8);
}

TEST(Integrate, SecondOrderConvergence) {
    const Grid2D coarse{0.0, 3.0, -15.0, 30.0, 151, 1501};
    const double e1 = integrate_error(coarse);
    const double e2 = integrate_error(coarse.refined(2, 2));
    EXPECT_LT(e1, 1e-2);
    EXPECT_GE(e1 / e2, 3.0);
    EXPECT_LE(e1 / e2, 5.0);
}

TEST(Integrate, StrideAndSliceCallback) {
    const Grid2D g{0.0, 1.0, -2.0, 2.0, 11, 41};
    std::vector<FieldSample> boundary(g.n_tau, FieldSample{0.0, -2.0});
    IntegrateOptions opts;
    opts.stride_zeta = 5;
    opts.stride_tau = 10;
    std::size_t calls = 0;
    opts.on_slice = [&](std::size_t, double, std::span<const FieldSample> f, std::span<const AtomState> a) {
        EXPECT_EQ(f.size(), g.n_tau);
        EXPECT_EQ(a.size(), g.n_tau);
        ++calls;
    };
    const SolutionGrid out = integrate(kMedium, boundary, AtomState{}, g, opts);
    EXPECT_EQ(calls, g.n_zeta);
    EXPECT_EQ(out.grid.n_zeta, 3u);
    EXPECT_EQ(out.grid.n_tau, 5u);
}

TEST(Integrate, Errors) {
    const Grid2D g{0.0, 1.0, -2.0, 2.0, 11, 41};
    std::vector<FieldSample> bad(7);
    EXPECT_THROW(integrate(kMedium, bad, AtomState{}, g), ConfigError);
    std::vector<FieldSample> boundary(g.n_tau);
    std::vector<AtomState> initial(3);
    EXPECT_THROW(integrate(kMedium, boundary, initial, g), ConfigError);
    EXPECT_THROW(integrate(kMedium, boundary, AtomState{}, Grid2D{0.0, 1.0, 2.0, 2.0, 11, 41}), ConfigError);

    // Coarse tau steps against a strong field break normalization.
    const Grid2D coarse{0.0, 1.0, -5.0, 5.0, 11, 11};
    std::vector<FieldSample> strong(coarse.n_tau, FieldSample{Complex(3.0), Complex(-2.0)});
    EXPECT_THROW(integrate(kMedium, strong, AtomState{}, coarse), NormDriftError);
}

TEST(Residual, ZeroForDarkBackground) {
    const Grid2D g{0.0, 1.0, -2.0, 2.0, 11, 41};
    SolutionGrid s(g);
    for (auto& f : s.fields) f = {0.0, -2.0};
    const ResidualReport r = residual(s, kMedium);
    EXPECT_EQ(r.liouville_max, 0.0);
    EXPECT_EQ(r.maxwell_a_max, 0.0);
    EXPECT_EQ(r.maxwell_b_max, 0.0);
}

TEST(Residual, SecondOrderAndSensitivity) {
    const ExactSolution sol(kMedium, kSoliton, kControl);
    const Grid2D g{0.0, 3.0, -15.0, 30.0, 151, 451};
    ResidualOptions opts;
    opts.tau_breaks = {0.0};
    const SolutionGrid exact = tabulate_exact(sol, g);
    const ResidualReport r1 = residual(exact, kMedium, opts);
    const ResidualReport r2 = residual(tabulate_exact(sol, g.refined(2, 2)), kMedium, opts);
    for (double ratio : {r1.liouville_max / r2.liouville_max, r1.maxwell_a_max / r2.maxwell_a_max,
                         r1.maxwell_b_max / r2.maxwell_b_max}) {
        EXPECT_GE(ratio, 3.5);
        EXPECT_LE(ratio, 4.5);
    }
    // On a fine grid the discretization part is small enough for a 1%
    // amplitude error to dominate.
    const SolutionGrid fine = tabulate_exact(sol, Grid2D{0.0, 3.0, -15.0, 30.0, 301, 3001});
    const double base = residual(fine, kMedium, opts).liouville_max;
    SolutionGrid perturbed = fine;
    for (auto& f : perturbed.fields) f.omega_a *= 1.01;
    EXPECT_GE(residual(perturbed, kMedium, opts).liouville_max, 10.0 * base);
}
