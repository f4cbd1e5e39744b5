#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "oracle_values.hpp"
#include "slowlight/specfun.hpp"

using namespace slowlight;
using namespace slowlight::specfun;

namespace {

double rel(Complex a, Complex b) { return std::abs(a - b) / std::abs(b); }

} // namespace

TEST(Gamma, KnownValues) {
    EXPECT_NEAR(std::abs(specfun::gamma(1.0) - 1.0), 0.0, 1e-14);
    EXPECT_LT(rel(specfun::gamma(0.5), std::sqrt(std::numbers::pi)), 1e-13);
    EXPECT_LT(rel(specfun::gamma(Complex(1.0, 1.0)), oracle::gamma_1_plus_i), 1e-13);
    EXPECT_LT(rel(specfun::gamma(Complex(0.3, -2.7)), oracle::gamma_03_m27i), 1e-12);
    EXPECT_LT(rel(specfun::gamma(Complex(-3.5, 0.25)), oracle::gamma_m35_025i), 1e-12);
    EXPECT_LT(rel(specfun::gamma(11.0), 3628800.0), 1e-13);
}

TEST(Gamma, Poles) {
    EXPECT_THROW(specfun::gamma(0.0), PoleError);
    EXPECT_THROW(specfun::gamma(-3.0), PoleError);
    EXPECT_THROW(specfun::gamma(Complex(-2.0, 1e-13)), PoleError);
    EXPECT_NO_THROW(specfun::gamma(Complex(-2.0, 1e-9)));
}

TEST(Gamma, ReflectionAndLargeImaginary) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-6.0, 6.0);
    for (int k = 0; k < 50; ++k) {
        const Complex z(u(rng), u(rng));
        const Complex lhs = gamma(z) * specfun::gamma(1.0 - z);
        const Complex rhs = std::numbers::pi / std::sin(std::numbers::pi * z);
        EXPECT_LT(rel(lhs, rhs), 1e-10) << z;
    }
    // |Gamma(1/2 + iy)|^2 = pi / cosh(pi y), far out where sin(pi z) overflows.
    const double y = 120.0;
    const Complex lg = log_gamma(Complex(0.5, y));
    EXPECT_NEAR(2.0 * lg.real(), std::log(std::numbers::pi) - (std::numbers::pi * y - std::log(2.0)), 1e-9);
}

TEST(Gamma, Recursion) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> r(0.0, 10.0), a(-std::numbers::pi, std::numbers::pi);
    int n = 0;
    while (n < 100) {
        const Complex z = std::polar(r(rng), a(rng));
        if (detail::near_nonpositive_integer(z) || std::abs(z - std::round(z.real())) < 1e-3) continue;
        EXPECT_LT(rel(gamma(z + 1.0), z * gamma(z)), 1e-11) << z;
        ++n;
    }
}

TEST(Bessel, KnownValues) {
    EXPECT_EQ(bessel_j(0.0, 0.0), Complex(1.0, 0.0));
    EXPECT_EQ(bessel_j(2.5, 0.0), Complex(0.0, 0.0));
    EXPECT_THROW(bessel_j(-0.5, 0.0), DomainError);
    const double half = std::sqrt(2.0 / (std::numbers::pi * 2.0)) * std::sin(2.0);
    EXPECT_NEAR(std::abs(bessel_j(0.5, 2.0) - half), 0.0, 1e-14);
    EXPECT_NEAR(half, 0.513016136562, 1e-12);
    EXPECT_LT(rel(bessel_j(1.55, 1.0), oracle::j_155_at_1), 1e-13);
    EXPECT_LT(rel(bessel_j(1.55, -1.0), oracle::j_155_at_m1), 1e-13);
    EXPECT_LT(rel(bessel_j(Complex(0.3, 2.0), Complex(-7.5, 1.0)), oracle::j_03p2i_at_m75p1i), 1e-11);
    // Large argument: the series terms peak near 1e10 times the result.
    EXPECT_LT(rel(bessel_j(Complex(1.05, 1.05), -25.0), oracle::j_105p105i_at_m25), 1e-11);
}

TEST(Bessel, NegativeIntegerOrder) {
    for (int n = 1; n <= 4; ++n) {
        const Complex jn = bessel_j(static_cast<double>(n), 2.3);
        const Complex jm = bessel_j(static_cast<double>(-n), 2.3);
        EXPECT_NEAR(std::abs(jm - (n % 2 ? -jn : jn)), 0.0, 1e-15);
    }
}

TEST(Bessel, DomainLimit) {
    EXPECT_NO_THROW(bessel_j(0.3, 30.0));
    EXPECT_THROW(bessel_j(0.3, 30.01), DomainError);
    EXPECT_THROW(bessel_j_scaled(0.3, Complex(0.0, 31.0)), DomainError);
}

TEST(Bessel, BranchConsistencyIsExact) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> nu(-3.0, 3.0), x(0.05, 29.0);
    for (int k = 0; k < 100; ++k) {
        const Complex v(nu(rng), nu(rng));
        const double u = x(rng);
        EXPECT_EQ(bessel_j(v, -u), arg_phase(v, std::numbers::pi) * bessel_j(v, u)) << v << " " << u;
        EXPECT_EQ(bessel_j(v, -u, ArgBranch::lower), arg_phase(v, -std::numbers::pi) * bessel_j(v, u));
    }
}

TEST(Bessel, WronskianAndRecurrence) {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> r(0.0, 3.0), a(-std::numbers::pi, std::numbers::pi), xs(0.1, 5.0);
    for (int k = 0; k < 100; ++k) {
        const Complex nu = std::polar(r(rng), a(rng));
        const double x = xs(rng);
        const Complex w = bessel_j(nu, x) * bessel_j(1.0 - nu, x) + bessel_j(-nu, x) * bessel_j(nu - 1.0, x);
        const Complex expect = 2.0 * std::sin(nu * std::numbers::pi) / (std::numbers::pi * x);
        EXPECT_LT(std::abs(w - expect), 1e-10) << nu << " " << x;

        const Complex lhs = bessel_j(nu - 1.0, x) + bessel_j(nu + 1.0, x);
        const Complex rhs = 2.0 * nu / x * bessel_j(nu, x);
        EXPECT_LT(std::abs(lhs - rhs), 1e-9 * std::max(std::abs(rhs), std::abs(bessel_j(nu - 1.0, x))));
    }
}

TEST(Bessel, ScaledMatchesPlain) {
    for (Complex nu : {Complex(0.5, 0.0), Complex(1.5, -1.05), Complex(-0.2, 3.0)}) {
        for (double x : {-1.0, 0.3, -12.0, 25.0}) {
            EXPECT_LT(rel(bessel_j_scaled(nu, x).value(), bessel_j(nu, x)), 1e-13) << nu << " " << x;
        }
    }
    // Orders whose values leave the double range keep a finite ratio.
    const Complex big(0.5, -1050.0);
    const auto a = bessel_j_scaled(big, -1e-3);
    const auto b = bessel_j_scaled(big + 1.0, -1e-3);
    EXPECT_TRUE(std::isfinite(a.log_scale));
    EXPECT_GT(a.log_scale, 700.0);
    const Complex ratio = (b / a).value();
    // J_{nu+1}/J_nu ~ x / (2 (nu+1)) for small x.
    EXPECT_LT(rel(ratio, -1e-3 / (2.0 * (big + 1.0))), 1e-6);
}
