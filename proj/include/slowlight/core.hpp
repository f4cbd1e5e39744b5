#pragma once

// Exact single-soliton solution of the Lambda-medium Maxwell-Bloch system
// with a control field that is constant for tau < 0 and decays as
// exp(-alpha tau) afterwards.
//
// Everything is dimensionless: frequencies in units of a reference Rabi
// frequency, times in its inverse, c = 1 unless set otherwise. The retarded
// coordinates are zeta = (z - z0)/c and tau = t - (z - z0)/c.
//
// The solution is built from two auxiliary functions of tau alone, w and z.
// They obey
//
//     dw/dtau = (i/2) Omega(tau) (1 - w^2) - i lambda w,
//     dz/dtau = (i/2) Omega(tau) w,
//
// with w(0) = w0 and z(0) = 0. For tau >= 0 and alpha > 0 they are ratios of
// Bessel functions of order +-gamma, gamma = (alpha + i lambda) / (2 alpha),
// evaluated at -Omega(tau)/(2 alpha).

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "slowlight/errors.hpp"
#include "slowlight/specfun.hpp"

namespace slowlight {

struct MediumParams {
    double nu0 = 10.0;   ///< coupling constant nu_0
    double delta = 0.0;  ///< detuning Delta
    double c = 1.0;      ///< speed of light

    void validate() const {
        if (!(nu0 > 0.0)) throw DomainError("medium.nu0 must be > 0");
        if (!(c > 0.0)) throw DomainError("medium.c must be > 0");
        if (!std::isfinite(delta)) throw DomainError("medium.delta must be finite");
    }
};

/// Omega(tau) = omega0 for tau < 0, omega0 exp(-alpha tau) for tau >= 0.
/// alpha = 0 is the constant-background case.
struct ControlField {
    double omega0 = 2.0;
    double alpha = 1.0;

    double at(double tau) const {
        return tau < 0.0 ? omega0 : omega0 * std::exp(-alpha * tau);
    }

    void validate() const {
        if (!(omega0 >= 0.0) || !std::isfinite(omega0))
            throw DomainError("control.omega0 must be >= 0");
        if (!(alpha >= 0.0) || !std::isfinite(alpha))
            throw DomainError("control.alpha must be >= 0");
    }
};

struct SolitonParams {
    Complex lambda{0.0, -2.1};  ///< spectral parameter, Im < 0
    double phi0 = 0.0;          ///< position offset of the soliton phase
    double theta0 = 0.0;        ///< carrier phase offset

    /// lambda = -i epsilon0.
    static SolitonParams imaginary(double epsilon0, double phi0 = 0.0, double theta0 = 0.0) {
        return {Complex(0.0, -epsilon0), phi0, theta0};
    }

    double epsilon0() const { return -lambda.imag(); }

    void validate(const ControlField& cf) const {
        if (!(lambda.imag() < 0.0))
            throw DomainError("soliton: Im(lambda) must be < 0");
        if (lambda.real() == 0.0 && !(epsilon0() > cf.omega0))
            throw DomainError("soliton: epsilon0 must exceed control.omega0 (epsilon0 = " +
                              std::to_string(epsilon0()) +
                              ", omega0 = " + std::to_string(cf.omega0) + ")");
        if (!std::isfinite(phi0) || !std::isfinite(theta0))
            throw DomainError("soliton: phases must be finite");
    }
};

/// Amplitudes of |1>, |2>, |3>.
struct AtomState {
    Complex c1{1.0, 0.0};
    Complex c2{0.0, 0.0};
    Complex c3{0.0, 0.0};

    double norm_squared() const { return std::norm(c1) + std::norm(c2) + std::norm(c3); }
    std::array<double, 3> populations() const {
        return {std::norm(c1), std::norm(c2), std::norm(c3)};
    }
};

/// Rabi frequencies of the two channels at one (zeta, tau).
struct FieldSample {
    Complex omega_a{0.0, 0.0};
    Complex omega_b{0.0, 0.0};
};

struct WZPair {
    Complex w;
    Complex z;
};

struct SolitonPhase {
    double phi;
    double theta;
};

inline double control_field(double tau, const ControlField& cf) { return cf.at(tau); }

/// w0 = omega0 / (lambda + s), s^2 = lambda^2 + omega0^2, with s taken on the
/// same side as lambda (Re(s conj(lambda)) >= 0).
inline Complex w_initial(Complex lambda, double omega0) {
    if (!(lambda.imag() < 0.0)) throw DomainError("w_initial: Im(lambda) must be < 0");
    Complex s = std::sqrt(lambda * lambda + omega0 * omega0);
    if ((s * std::conj(lambda)).real() < 0.0) s = -s;
    Complex denom = lambda + s;
    if (std::abs(denom) < 1e-14) throw DegenerateError("w_initial: lambda + s vanishes");
    return omega0 / denom;
}

namespace detail {

inline void check_alpha_positive(const ControlField& cf, const char* who) {
    if (!(cf.alpha > 0.0)) throw DomainError(std::string(who) + ": requires alpha > 0");
}

// The four Bessel values that enter w, z and C at one argument, log-scaled
// because J_{+-gamma} leave the double range once |gamma| reaches ~100.
struct BesselQuad {
    specfun::ScaledComplex j_gamma;        // J_gamma
    specfun::ScaledComplex j_minus_gamma;  // J_{-gamma}
    specfun::ScaledComplex j_one_minus;    // J_{1-gamma}
    specfun::ScaledComplex j_gamma_minus;  // J_{gamma-1}
};

inline BesselQuad bessel_quad(Complex gamma, double x, specfun::ArgBranch branch) {
    using specfun::bessel_j_scaled;
    return {bessel_j_scaled(gamma, x, branch), bessel_j_scaled(-gamma, x, branch),
            bessel_j_scaled(1.0 - gamma, x, branch), bessel_j_scaled(gamma - 1.0, x, branch)};
}

inline specfun::ScaledComplex coefficient_from(const BesselQuad& b, Complex w0) {
    const Complex i(0.0, 1.0);
    auto num = (-i * w0) * b.j_gamma + b.j_gamma_minus;
    auto den = b.j_one_minus + (i * w0) * b.j_minus_gamma;
    if (std::abs(den.mantissa) == 0.0 || den.log_scale < -690.0)
        throw DegenerateError("coefficient_C: denominator vanishes");
    return num / den;
}

// Riccati + quadrature system integrated from (tau0, w0, z0) to tau1.
inline WZPair integrate_riccati(Complex lambda, const ControlField& cf, double tau0,
                                WZPair start, double tau1) {
    using state = std::array<double, 4>;
    const Complex i(0.0, 1.0);
    auto rhs = [&](const state& y, state& dy, double tau) {
        Complex w(y[0], y[1]);
        double omega = cf.at(tau);
        Complex dw = 0.5 * i * omega * (1.0 - w * w) - i * lambda * w;
        Complex dz = 0.5 * i * omega * w;
        dy = {dw.real(), dw.imag(), dz.real(), dz.imag()};
    };
    state y{start.w.real(), start.w.imag(), start.z.real(), start.z.imag()};
    if (tau1 > tau0) {
        namespace ode = boost::numeric::odeint;
        auto stepper = ode::make_controlled(1e-13, 1e-13, ode::runge_kutta_dopri5<state>());
        ode::integrate_adaptive(stepper, rhs, y, tau0, tau1, 1e-3);
    }
    return {Complex(y[0], y[1]), Complex(y[2], y[3])};
}

} // namespace detail

/// Coefficient fixing w(0) = w0 in the Bessel representation of w.
inline Complex coefficient_C(Complex lambda, const ControlField& cf,
                             specfun::ArgBranch branch = specfun::ArgBranch::upper) {
    detail::check_alpha_positive(cf, "coefficient_C");
    const Complex w0 = w_initial(lambda, cf.omega0);
    const Complex gamma = (cf.alpha + Complex(0.0, 1.0) * lambda) / (2.0 * cf.alpha);
    const double x0 = -cf.omega0 / (2.0 * cf.alpha);
    return detail::coefficient_from(detail::bessel_quad(gamma, x0, branch), w0).value();
}

/// w(tau) and z(tau) for one (lambda, control) pair, with the tau-independent
/// pieces computed once.
///
/// When omega0/(2 alpha) exceeds the Bessel domain the Riccati system is
/// integrated numerically from tau = 0 until Omega(tau)/(2 alpha) has fallen
/// to kReseedArgument; the Bessel representation takes over from there with
/// its coefficient refitted to the integrated w.
///
/// For integer gamma (purely imaginary lambda with alpha = |lambda|/(2n-1))
/// J_gamma and J_{-gamma} are linearly dependent and the representation
/// breaks down; within kIntegerBand of an integer, w and z are instead
/// interpolated (cubic Lagrange in lambda) from four solutions whose gamma
/// sits 1 and 2 band widths either side of the integer.
class WZSolution {
public:
    static constexpr double kReseedArgument = 25.0;
    static constexpr double kIntegerBand = 1e-4;

    WZSolution(Complex lambda, const ControlField& cf,
               specfun::ArgBranch branch = specfun::ArgBranch::upper)
        : WZSolution(lambda, cf, branch, true) {}

    Complex lambda() const { return lambda_; }
    const ControlField& control() const { return cf_; }
    Complex w0() const { return w0_; }
    Complex gamma() const { return gamma_; }
    /// Bessel coefficient; equals coefficient_C() unless the seed was moved.
    Complex coefficient() const {
        if (!nodes_.empty()) throw DegenerateError("wz: no Bessel coefficient at integer gamma");
        return coeff_.value();
    }
    /// Start of the Bessel representation (0 unless the Riccati system had
    /// to be integrated first).
    double seed_tau() const { return nodes_.empty() ? seed_tau_ : nodes_.front().seed_tau(); }
    bool interpolated() const { return !nodes_.empty(); }

    WZPair operator()(double tau) const {
        const Complex i(0.0, 1.0);
        if (tau < 0.0 || cf_.alpha == 0.0) return {w0_, 0.5 * i * cf_.omega0 * w0_ * tau};
        if (!nodes_.empty()) {
            std::array<WZPair, 4> v;
            for (std::size_t k = 0; k < 4; ++k) v[k] = nodes_[k](tau);
            return combine(v);
        }
        if (tau < seed_tau_) return detail::integrate_riccati(lambda_, cf_, 0.0, {w0_, 0.0}, tau);
        const double x = -cf_.at(tau) / (2.0 * cf_.alpha);
        if (x == 0.0) return limit_pair();
        auto b = detail::bessel_quad(gamma_, x, branch_);
        auto den = coeff_ * b.j_minus_gamma + b.j_gamma;
        auto num = coeff_ * b.j_one_minus - b.j_gamma_minus;
        Complex w = i * (num / den).value();
        Complex z = seed_.z - cf_.alpha * gamma_ * (tau - seed_tau_) + (den / seed_den_).log();
        return {w, z};
    }

    /// z(tau -> infinity). Needs alpha > 0.
    Complex limit() const {
        detail::check_alpha_positive(cf_, "wz_limit");
        if (!nodes_.empty()) {
            std::array<WZPair, 4> v;
            for (std::size_t k = 0; k < 4; ++k) v[k] = nodes_[k].limit_pair();
            return combine(v).z;
        }
        // C (x/2)^(-gamma) / Gamma(1-gamma) is the surviving term of
        // C J_{-gamma}(x) + J_gamma(x) as x -> 0; its exp(alpha gamma tau)
        // growth cancels the linear term of z.
        const double half_x = 0.5 * std::abs(seed_x_);
        const double arg = branch_ == specfun::ArgBranch::upper ? std::numbers::pi
                                                                 : -std::numbers::pi;
        const Complex log_power = -gamma_ * Complex(std::log(half_x), arg);
        return seed_.z + coeff_.log() + log_power - specfun::log_gamma(1.0 - gamma_) -
               seed_den_.log();
    }

private:
    WZSolution(Complex lambda, const ControlField& cf, specfun::ArgBranch branch, bool interpolate)
        : lambda_(lambda), cf_(cf), branch_(branch) {
        cf_.validate();
        w0_ = w_initial(lambda, cf.omega0);
        if (cf_.alpha > 0.0) {
            gamma_ = (cf_.alpha + Complex(0.0, 1.0) * lambda_) / (2.0 * cf_.alpha);
            const double n = std::round(gamma_.real());
            if (interpolate && n >= 1.0 && std::abs(gamma_ - n) < kIntegerBand) {
                build_nodes(n);
                return;
            }
            const double arg0 = cf_.omega0 / (2.0 * cf_.alpha);
            WZPair start{w0_, 0.0};
            if (arg0 > specfun::kMaxBesselArgument) {
                seed_tau_ = std::log(arg0 / kReseedArgument) / cf_.alpha;
                start = detail::integrate_riccati(lambda_, cf_, 0.0, start, seed_tau_);
            }
            seed_ = start;
            seed_x_ = -cf_.at(seed_tau_) / (2.0 * cf_.alpha);
            auto b = detail::bessel_quad(gamma_, seed_x_, branch_);
            coeff_ = detail::coefficient_from(b, seed_.w);
            seed_den_ = coeff_ * b.j_minus_gamma + b.j_gamma;
            if (std::abs(seed_den_.mantissa) == 0.0)
                throw DegenerateError("wz: vanishing denominator");
        }
    }

    WZPair limit_pair() const { return {Complex(0.0, 0.0), limit()}; }

    void build_nodes(double n) {
        static constexpr std::array<double, 4> offsets{-2.0, -1.0, 1.0, 2.0};
        const Complex t = (gamma_ - n) / kIntegerBand;
        for (std::size_t k = 0; k < 4; ++k) {
            // gamma_k = n + offsets[k] * band, i.e. lambda shifted along the imaginary axis.
            const Complex shift = n + offsets[k] * kIntegerBand - gamma_;
            nodes_.push_back(WZSolution(lambda_ - Complex(0.0, 2.0 * cf_.alpha) * shift, cf_, branch_, false));
            Complex wk = 1.0;
            for (std::size_t m = 0; m < 4; ++m)
                if (m != k) wk *= (t - offsets[m]) / (offsets[k] - offsets[m]);
            weights_[k] = wk;
        }
    }

    // z is defined modulo 2 pi i; bring the nodes onto one sheet first.
    WZPair combine(std::array<WZPair, 4> v) const {
        WZPair out{Complex(0.0, 0.0), Complex(0.0, 0.0)};
        for (std::size_t k = 0; k < 4; ++k) {
            const double d = std::remainder(v[k].z.imag() - v[0].z.imag(), 2.0 * std::numbers::pi);
            v[k].z.imag(v[0].z.imag() + d);
            out.w += weights_[k] * v[k].w;
            out.z += weights_[k] * v[k].z;
        }
        return out;
    }

    Complex lambda_;
    ControlField cf_;
    specfun::ArgBranch branch_;
    Complex w0_;
    Complex gamma_{0.0, 0.0};
    specfun::ScaledComplex coeff_{};
    double seed_tau_ = 0.0;
    WZPair seed_{};
    double seed_x_ = 0.0;
    specfun::ScaledComplex seed_den_{Complex(1.0, 0.0), 0.0};
    std::vector<WZSolution> nodes_;
    std::array<Complex, 4> weights_{};
};

inline WZPair wz(double tau, Complex lambda, const ControlField& cf) {
    return WZSolution(lambda, cf)(tau);
}

inline Complex wz_limit(Complex lambda, const ControlField& cf) {
    detail::check_alpha_positive(cf, "wz_limit");
    return WZSolution(lambda, cf).limit();
}

/// Full exact solution: soliton phase, both fields and the atomic state.
/// Every per-point method has an overload taking a precomputed WZPair so that
/// grid sampling evaluates w, z once per tau column.
class ExactSolution {
public:
    ExactSolution(const MediumParams& mp, const SolitonParams& sp, const ControlField& cf,
                  specfun::ArgBranch branch = specfun::ArgBranch::upper)
        : mp_(mp), sp_(sp), cf_(cf), wz_(validated_lambda(mp, sp, cf), cf, branch) {
        const Complex lam_d = sp_.lambda - mp_.delta;
        detuned_abs_ = std::abs(lam_d);
        inv_lam_d_ = 1.0 / lam_d;
    }

    const MediumParams& medium() const { return mp_; }
    const SolitonParams& soliton() const { return sp_; }
    const ControlField& control() const { return cf_; }
    const WZSolution& wz_solution() const { return wz_; }

    WZPair wz(double tau) const { return wz_(tau); }

    SolitonPhase phase(double zeta, const WZPair& p) const {
        const double a2 = detuned_abs_ * detuned_abs_;
        double phi = sp_.phi0 - mp_.nu0 * sp_.lambda.imag() * zeta / (2.0 * a2) + p.z.real() +
                     0.5 * std::log1p(std::norm(p.w));
        double theta = sp_.theta0 - 0.5 * mp_.nu0 * zeta * inv_lam_d_.real() + p.z.imag();
        return {phi, theta};
    }
    SolitonPhase phase(double zeta, double tau) const { return phase(zeta, wz(tau)); }

    FieldSample fields(double zeta, double tau, const WZPair& p) const {
        const SolitonPhase ph = phase(zeta, p);
        const Complex lam = sp_.lambda;
        const double nw = 1.0 + std::norm(p.w);
        const double sech = 1.0 / std::cosh(ph.phi);
        const double exp_sech = 2.0 / (1.0 + std::exp(-2.0 * ph.phi));
        Complex a = (std::conj(lam) - lam) * p.w / std::sqrt(nw) * std::polar(1.0, ph.theta) * sech;
        Complex b = (lam - std::conj(lam)) * p.w / nw * exp_sech - cf_.at(tau);
        return {a, b};
    }
    FieldSample fields(double zeta, double tau) const { return fields(zeta, tau, wz(tau)); }

    /// The |1> and |2> amplitudes are written with the factor w of
    /// Omega_a already divided out, so they stay finite as w -> 0.
    AtomState atom_state(double zeta, double tau, const WZPair& p) const {
        const SolitonPhase ph = phase(zeta, p);
        const Complex i(0.0, 1.0);
        const Complex lam = sp_.lambda;
        const double a = detuned_abs_;
        const double nw = 1.0 + std::norm(p.w);
        const double sech = 1.0 / std::cosh(ph.phi);
        const double expm_sech = 2.0 / (1.0 + std::exp(2.0 * ph.phi));
        const Complex pre = std::polar(1.0, 0.5 * mp_.delta * tau);
        const Complex carrier = std::polar(1.0, ph.theta);
        Complex c1 = pre * ((std::conj(lam) - mp_.delta) / a + i * lam.imag() * expm_sech / a);
        Complex omega_a_over_w = (std::conj(lam) - lam) / std::sqrt(nw) * carrier * sech;
        Complex c2 = pre * omega_a_over_w / (2.0 * a);
        Complex c3 = -pre * omega_a_over_w * p.w / (2.0 * a);
        return {c1, c2, c3};
    }
    AtomState atom_state(double zeta, double tau) const { return atom_state(zeta, tau, wz(tau)); }

    double group_velocity(const WZPair& p) const {
        const double w2 = std::norm(p.w);
        const double a2 = detuned_abs_ * detuned_abs_;
        return w2 / (mp_.nu0 * (1.0 + w2) / (2.0 * a2) + w2);
    }
    double group_velocity(double tau) const { return group_velocity(wz(tau)); }

    /// Lab-frame distance covered between switch-off and arrest.
    double stopping_distance() const {
        const double a2 = detuned_abs_ * detuned_abs_;
        const Complex zinf = wz_.limit();
        return 2.0 * mp_.c * a2 / (mp_.nu0 * std::abs(sp_.lambda.imag())) *
               (0.5 * std::log1p(std::norm(wz_.w0())) - zinf.real());
    }

    /// Stopping distance for an instantaneous switch-off (Re z(inf) -> 0).
    double stopping_distance_sudden() const {
        const double a2 = detuned_abs_ * detuned_abs_;
        return 2.0 * mp_.c * a2 / (mp_.nu0 * std::abs(sp_.lambda.imag())) * 0.5 *
               std::log1p(std::norm(wz_.w0()));
    }

private:
    static Complex validated_lambda(const MediumParams& mp, const SolitonParams& sp,
                                    const ControlField& cf) {
        mp.validate();
        cf.validate();
        sp.validate(cf);
        return sp.lambda;
    }

    MediumParams mp_;
    SolitonParams sp_;
    ControlField cf_;
    WZSolution wz_;
    double detuned_abs_ = 1.0;
    Complex inv_lam_d_{1.0, 0.0};
};

inline SolitonPhase soliton_phase(double zeta, double tau, const MediumParams& mp,
                                  const SolitonParams& sp, const ControlField& cf) {
    return ExactSolution(mp, sp, cf).phase(zeta, tau);
}

inline FieldSample fields(double zeta, double tau, const MediumParams& mp,
                          const SolitonParams& sp, const ControlField& cf) {
    return ExactSolution(mp, sp, cf).fields(zeta, tau);
}

inline AtomState atom_state(double zeta, double tau, const MediumParams& mp,
                            const SolitonParams& sp, const ControlField& cf) {
    return ExactSolution(mp, sp, cf).atom_state(zeta, tau);
}

/// v_g / c.
inline double group_velocity(double tau, const MediumParams& mp, const SolitonParams& sp,
                             const ControlField& cf) {
    return ExactSolution(mp, sp, cf).group_velocity(tau);
}

inline double stopping_distance(const MediumParams& mp, const SolitonParams& sp,
                                const ControlField& cf) {
    detail::check_alpha_positive(cf, "stopping_distance");
    return ExactSolution(mp, sp, cf).stopping_distance();
}

/// Half-width of the imprinted polarization flip. Does not involve alpha.
inline double memory_width(const MediumParams& mp, const SolitonParams& sp) {
    if (!(sp.lambda.imag() < 0.0)) throw DomainError("memory_width: Im(lambda) must be < 0");
    mp.validate();
    const double a2 = std::norm(sp.lambda - mp.delta);
    return 4.0 * mp.c * std::log(2.0 + std::sqrt(3.0)) * a2 /
           (mp.nu0 * std::abs(sp.lambda.imag()));
}

/// Constant-background soliton for Delta = 0, lambda = -i epsilon0:
/// Omega_a = -i sqrt(2 eps) omega0 / sqrt(eps + r) sech(phi),
/// Omega_b = omega0 tanh(phi),  r = sqrt(eps^2 - omega0^2),
/// phi = nu0 zeta / (2 eps) - tau (eps - r) / 2 + phi0.
inline FieldSample constant_bg_reference(double zeta, double tau, const MediumParams& mp,
                                         double epsilon0, double phi0, double omega0) {
    if (mp.delta != 0.0) throw DomainError("constant_bg_reference: requires delta = 0");
    if (!(epsilon0 > omega0)) throw DomainError("constant_bg_reference: requires epsilon0 > omega0");
    const double r = std::sqrt(epsilon0 * epsilon0 - omega0 * omega0);
    const double phi = mp.nu0 * zeta / (2.0 * epsilon0) - 0.5 * tau * (epsilon0 - r) + phi0;
    const double amp = std::sqrt(2.0 * epsilon0) * omega0 / std::sqrt(epsilon0 + r);
    return {Complex(0.0, -amp / std::cosh(phi)), omega0 * std::tanh(phi)};
}

} // namespace slowlight
