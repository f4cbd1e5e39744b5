#pragma once

// Complex gamma function and Bessel functions of the first kind with
// complex order and complex argument.
//
// J_nu(x) is evaluated from its power series
//
//     J_nu(x) = (x/2)^nu / Gamma(nu+1) * sum_k t_k,
//     t_0 = 1,  t_{k+1} = t_k * (-x^2/4) / ((k+1)(nu+k+1)),
//
// with the sum carried in double-double arithmetic. The prefactor is a single
// multiplicative factor, so all cancellation lives inside the sum; 106 bits
// leave ample headroom for |x| <= 30 where the largest term can exceed the
// result by twelve orders of magnitude.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>

#include "slowlight/errors.hpp"

namespace slowlight {

using Complex = std::complex<double>;

namespace specfun {

inline constexpr double kPoleTolerance = 1e-12;
inline constexpr double kMaxBesselArgument = 30.0;
inline constexpr double kSeriesTruncation = 1e-18;

/// Which side of the cut arg(x) takes for negative real x.
enum class ArgBranch { upper, lower };

namespace detail {

// ---- double-double ------------------------------------------------------

struct dd {
    double hi = 0.0;
    double lo = 0.0;
};

inline dd two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    double err = (a - (s - bb)) + (b - bb);
    return {s, err};
}

inline dd quick_two_sum(double a, double b) {
    double s = a + b;
    return {s, b - (s - a)};
}

inline dd two_prod(double a, double b) {
    double p = a * b;
    return {p, std::fma(a, b, -p)};
}

inline dd operator+(dd a, dd b) {
    dd s = two_sum(a.hi, b.hi);
    dd t = two_sum(a.lo, b.lo);
    s.lo += t.hi;
    s = quick_two_sum(s.hi, s.lo);
    s.lo += t.lo;
    return quick_two_sum(s.hi, s.lo);
}

inline dd operator-(dd a) { return {-a.hi, -a.lo}; }
inline dd operator-(dd a, dd b) { return a + (-b); }

inline dd operator*(dd a, dd b) {
    dd p = two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    return quick_two_sum(p.hi, p.lo);
}

inline dd operator/(dd a, dd b) {
    double q1 = a.hi / b.hi;
    dd r = a - b * dd{q1, 0.0};
    double q2 = r.hi / b.hi;
    r = r - b * dd{q2, 0.0};
    double q3 = r.hi / b.hi;
    dd q = quick_two_sum(q1, q2);
    return q + dd{q3, 0.0};
}

struct cdd {
    dd re;
    dd im;
};

inline cdd operator+(const cdd& a, const cdd& b) { return {a.re + b.re, a.im + b.im}; }
inline cdd operator*(const cdd& a, const cdd& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
inline cdd operator/(const cdd& a, const cdd& b) {
    dd den = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / den, (a.im * b.re - a.re * b.im) / den};
}
inline double magnitude(const cdd& a) { return std::hypot(a.re.hi, a.im.hi); }

// ---- gamma ----------------------------------------------------------------

// Lanczos coefficients, g = 7, n = 9.
inline constexpr double kLanczosG = 7.0;
inline constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

// log(sin(pi z)) up to a multiple of 2 pi i; safe for large |Im z|.
inline Complex log_sin_pi(Complex z) {
    const double pi = std::numbers::pi;
    const Complex i(0.0, 1.0);
    if (std::abs(z.imag()) < 20.0) return std::log(std::sin(pi * z));
    if (z.imag() > 0.0) {
        return -i * pi * z + std::log(Complex(0.0, 0.5)) +
               std::log(1.0 - std::exp(2.0 * i * pi * z));
    }
    return i * pi * z + std::log(Complex(0.0, -0.5)) +
           std::log(1.0 - std::exp(-2.0 * i * pi * z));
}

inline bool near_nonpositive_integer(Complex z) {
    if (z.real() > 0.5) return false;
    double n = std::round(z.real());
    return std::abs(z - Complex(n, 0.0)) < kPoleTolerance;
}

} // namespace detail

/// log Gamma(z), determined up to an additive multiple of 2 pi i. Only
/// exp() of the result is meaningful; that is all the library uses.
inline Complex log_gamma(Complex z) {
    using namespace detail;
    if (near_nonpositive_integer(z))
        throw PoleError("gamma pole at z = (" + std::to_string(z.real()) + ", " +
                        std::to_string(z.imag()) + ")");
    if (z.real() < 0.5) {
        return std::log(std::numbers::pi) - log_sin_pi(z) - log_gamma(1.0 - z);
    }
    z -= 1.0;
    Complex series = kLanczos[0];
    for (std::size_t k = 1; k < kLanczos.size(); ++k)
        series += kLanczos[k] / (z + static_cast<double>(k));
    Complex t = z + kLanczosG + 0.5;
    return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t +
           std::log(series);
}

/// Gamma(z). Throws PoleError within 1e-12 of 0, -1, -2, ...
inline Complex gamma(Complex z) { return std::exp(log_gamma(z)); }

/// exp(i nu arg): the factor relating the two sides of the cut.
inline Complex arg_phase(Complex nu, double arg) {
    return std::exp(Complex(-nu.imag() * arg, nu.real() * arg));
}

/// mantissa * exp(log_scale); keeps Bessel values of large order, whose
/// magnitude leaves the double range, usable in ratios.
struct ScaledComplex {
    Complex mantissa{0.0, 0.0};
    double log_scale = 0.0;

    Complex value() const { return mantissa * std::exp(log_scale); }
    Complex log() const { return std::log(mantissa) + log_scale; }
};

inline ScaledComplex normalize(ScaledComplex a) {
    const double m = std::abs(a.mantissa);
    if (m == 0.0 || !std::isfinite(m)) return a;
    const double shift = std::log(m);
    return {a.mantissa / m, a.log_scale + shift};
}

inline ScaledComplex operator*(const ScaledComplex& a, const ScaledComplex& b) {
    return normalize({a.mantissa * b.mantissa, a.log_scale + b.log_scale});
}
inline ScaledComplex operator*(Complex a, const ScaledComplex& b) {
    return normalize({a * b.mantissa, b.log_scale});
}
inline ScaledComplex operator/(const ScaledComplex& a, const ScaledComplex& b) {
    return normalize({a.mantissa / b.mantissa, a.log_scale - b.log_scale});
}
inline ScaledComplex operator+(const ScaledComplex& a, const ScaledComplex& b) {
    if (a.mantissa == Complex(0.0, 0.0)) return b;
    if (b.mantissa == Complex(0.0, 0.0)) return a;
    const double s = std::max(a.log_scale, b.log_scale);
    return normalize({a.mantissa * std::exp(a.log_scale - s) + b.mantissa * std::exp(b.log_scale - s), s});
}
inline ScaledComplex operator-(const ScaledComplex& a) { return {-a.mantissa, a.log_scale}; }
inline ScaledComplex operator-(const ScaledComplex& a, const ScaledComplex& b) { return a + (-b); }

namespace detail {

// Power series of J_nu(x) without the (x/2)^nu / Gamma(nu+1) prefactor.
inline Complex bessel_series(Complex nu, Complex x) {
    const Complex q = -0.25 * x * x;
    const cdd qq{{q.real(), 0.0}, {q.imag(), 0.0}};
    cdd term{{1.0, 0.0}, {0.0, 0.0}};
    cdd sum = term;
    const double qmag = std::abs(q);
    for (int k = 0; k < 4000; ++k) {
        const double kp1 = k + 1.0;
        dd re = two_sum(nu.real(), kp1);
        cdd denom{re * dd{kp1, 0.0}, dd{nu.imag(), 0.0} * dd{kp1, 0.0}};
        term = (term * qq) / denom;
        sum = sum + term;
        const double tmag = magnitude(term);
        const bool decreasing = kp1 * std::abs(nu + kp1) > qmag;
        if (decreasing && tmag <= kSeriesTruncation * magnitude(sum)) break;
    }
    return {sum.re.hi + sum.re.lo, sum.im.hi + sum.im.lo};
}

inline void check_bessel_domain(Complex x) {
    const double ax = std::abs(x);
    if (!(ax <= kMaxBesselArgument))
        throw DomainError("bessel_j: |x| = " + std::to_string(ax) + " exceeds " +
                          std::to_string(kMaxBesselArgument));
}

inline double bessel_arg(Complex x, ArgBranch branch) {
    if (x.imag() == 0.0 && x.real() < 0.0)
        return branch == ArgBranch::upper ? std::numbers::pi : -std::numbers::pi;
    return std::arg(x);
}

inline bool negative_integer_order(Complex nu, double& n) {
    if (std::abs(nu.imag()) >= kPoleTolerance || nu.real() >= -0.5) return false;
    n = std::round(nu.real());
    return std::abs(nu.real() - n) < kPoleTolerance;
}

} // namespace detail

/// Bessel function of the first kind J_nu(x).
///
/// (x/2)^nu uses the principal logarithm. For negative real x the argument
/// is +pi (ArgBranch::upper, the default) or -pi (ArgBranch::lower). The
/// result is assembled as arg_phase(nu, arg x) * (|x/2|^nu / Gamma(nu+1) * S)
/// so that J_nu(-u) == arg_phase(nu, pi) * J_nu(u) holds bit for bit.
inline Complex bessel_j(Complex nu, Complex x, ArgBranch branch = ArgBranch::upper) {
    detail::check_bessel_domain(x);

    // Negative integer order: J_{-n} = (-1)^n J_n. Gamma(nu+1) has a pole
    // there and the general prefactor is 0 * inf.
    if (double n = 0.0; detail::negative_integer_order(nu, n)) {
        Complex j = bessel_j(Complex(-n, 0.0), x, branch);
        return (static_cast<long long>(-n) % 2 == 0) ? j : -j;
    }

    const double ax = std::abs(x);
    if (ax == 0.0) {
        if (nu == Complex(0.0, 0.0)) return 1.0;
        if (nu.real() > 0.0) return 0.0;
        throw DomainError("bessel_j: J_nu(0) is unbounded for Re(nu) <= 0, nu != 0");
    }

    const double arg = detail::bessel_arg(x, branch);
    const Complex series = detail::bessel_series(nu, x);
    const Complex log_mag = nu * std::log(0.5 * ax) - log_gamma(nu + 1.0);
    const Complex body = std::exp(log_mag) * series;
    if (arg == 0.0) return body;
    return arg_phase(nu, arg) * body;
}

/// J_nu(x) as mantissa * exp(log_scale). Same branch rules as bessel_j.
inline ScaledComplex bessel_j_scaled(Complex nu, Complex x, ArgBranch branch = ArgBranch::upper) {
    detail::check_bessel_domain(x);
    if (double n = 0.0; detail::negative_integer_order(nu, n)) {
        ScaledComplex j = bessel_j_scaled(Complex(-n, 0.0), x, branch);
        return (static_cast<long long>(-n) % 2 == 0) ? j : -j;
    }
    const double ax = std::abs(x);
    if (ax == 0.0) return {bessel_j(nu, x, branch), 0.0};

    const double arg = detail::bessel_arg(x, branch);
    const Complex series = detail::bessel_series(nu, x);
    // (x/2)^nu / Gamma(nu+1) with the phase arg * nu folded in.
    const Complex log_pre = nu * Complex(std::log(0.5 * ax), arg) - log_gamma(nu + 1.0);
    return normalize({std::exp(Complex(0.0, log_pre.imag())) * series, log_pre.real()});
}

} // namespace specfun
} // namespace slowlight
