#pragma once

// Self-checks run by `slowlight verify`: auxiliary-function invariants, the
// tau < 0 boundary, normalization, residual convergence of the exact
// solution, and agreement of the integrator with the exact solution.

#include <cmath>
#include <string>
#include <numbers>
#include <vector>

#include "json.hpp"

#include "slowlight/scenario.hpp"

namespace slowlight {

struct CheckResult {
    std::string name;
    double value;
    double tolerance;
    bool passed;
    std::string detail;
};

struct VerifyReport {
    std::vector<CheckResult> checks;
    bool passed() const {
        for (const auto& c : checks)
            if (!c.passed) return false;
        return true;
    }
};

inline nlohmann::json to_json(const VerifyReport& r) {
    nlohmann::json j;
    j["passed"] = r.passed();
    j["checks"] = nlohmann::json::array();
    for (const auto& c : r.checks)
        j["checks"].push_back({{"name", c.name},
                               {"value", c.value},
                               {"tolerance", c.tolerance},
                               {"passed", c.passed},
                               {"detail", c.detail}});
    return j;
}

/// Max over the scenario's tau nodes of the finite-difference defect of
/// dw/dtau = (i/2) Omega (1 - w^2) - i lambda w and dz/dtau = (i/2) Omega w.
/// Central differences, one-sided within h of the switch-off.
inline double riccati_defect(const ExactSolution& sol, const Grid2D& g, double h) {
    const Complex i(0.0, 1.0);
    const Complex lam = sol.soliton().lambda;
    const ControlField& cf = sol.control();
    double worst = 0.0;
    // z is defined modulo 2 pi i.
    auto dz = [](Complex a, Complex b) {
        Complex d = a - b;
        d.imag(std::remainder(d.imag(), 2.0 * std::numbers::pi));
        return d;
    };
    for (std::size_t j = 0; j < g.n_tau; ++j) {
        const double tau = g.tau(j);
        Complex dw, dzz;
        if (std::abs(tau) < h) {
            // Stay on one side of the kink: at tau = 0 use the right limit.
            const double s = tau < 0.0 ? -1.0 : 1.0;
            const WZPair p0 = sol.wz(tau), p1 = sol.wz(tau + s * h), p2 = sol.wz(tau + 2.0 * s * h);
            dw = s * (-3.0 * p0.w + 4.0 * p1.w - p2.w) / (2.0 * h);
            dzz = s * (4.0 * dz(p1.z, p0.z) - dz(p2.z, p0.z)) / (2.0 * h);
            const double om = tau < 0.0 ? cf.omega0 : cf.at(std::max(tau, 0.0));
            const Complex rw = 0.5 * i * om * (1.0 - p0.w * p0.w) - i * lam * p0.w;
            const Complex rz = 0.5 * i * om * p0.w;
            worst = std::max({worst, std::abs(dw - rw), std::abs(dzz - rz)});
            continue;
        }
        const WZPair pm = sol.wz(tau - h), p0 = sol.wz(tau), pp = sol.wz(tau + h);
        dw = (pp.w - pm.w) / (2.0 * h);
        dzz = dz(pp.z, pm.z) / (2.0 * h);
        const double om = cf.at(tau);
        const Complex rw = 0.5 * i * om * (1.0 - p0.w * p0.w) - i * lam * p0.w;
        const Complex rz = 0.5 * i * om * p0.w;
        worst = std::max({worst, std::abs(dw - rw), std::abs(dzz - rz)});
    }
    return worst;
}

/// Error of a numeric solution against the exact one on the same grid:
/// max |Omega_a error| / max |Omega_a| and max |P2 error|.
struct ComparisonError {
    double field = 0.0;
    double population = 0.0;
};

inline ComparisonError compare(const SolutionGrid& numeric, const SolutionGrid& exact) {
    double peak = 0.0, ef = 0.0, ep = 0.0;
    for (std::size_t n = 0; n < exact.fields.size(); ++n) {
        peak = std::max(peak, std::abs(exact.fields[n].omega_a));
        ef = std::max(ef, std::abs(numeric.fields[n].omega_a - exact.fields[n].omega_a));
        ep = std::max(ep, std::abs(numeric.atoms[n].populations()[1] - exact.atoms[n].populations()[1]));
    }
    return {peak > 0.0 ? ef / peak : ef, ep};
}

inline VerifyReport run_verification(const Scenario& scn) {
    VerifyReport rep;
    const ExactSolution sol(scn.medium, scn.soliton, scn.control);
    const Grid2D& g = scn.grid;
    const auto& tol = scn.verify;
    auto add = [&](std::string name, double value, double t, std::string detail = {}) {
        rep.checks.push_back({std::move(name), value, t, value <= t, std::move(detail)});
    };

    add("riccati_invariants", riccati_defect(sol, g, tol.fd_step), tol.riccati,
        "finite-difference defect of the w and z equations");

    double bnd = 0.0;
    for (std::size_t j = 0; j < g.n_tau && g.tau(j) <= 0.0; ++j)
        bnd = std::max(bnd, std::abs(sol.wz(g.tau(j)).w - sol.wz_solution().w0()));
    bnd = std::max(bnd, std::abs(sol.wz(0.0).w - sol.wz_solution().w0()));
    add("boundary_w0", bnd, tol.boundary, "|w(tau) - w0| for tau <= 0");

    const SolutionGrid exact = tabulate_exact(sol, g);
    double norm = 0.0;
    for (const auto& a : exact.atoms) norm = std::max(norm, std::abs(a.norm_squared() - 1.0));
    add("exact_norm", norm, tol.norm, "max | |psi|^2 - 1 | of the exact state");

    ResidualOptions ropts;
    if (g.tau_min < 0.0 && g.tau_max > 0.0 && scn.control.alpha > 0.0) ropts.tau_breaks = {0.0};
    const ResidualReport coarse = residual(exact, scn.medium, ropts);
    const ResidualReport fine = residual(tabulate_exact(sol, g.refined(2, 2)), scn.medium, ropts);
    const double ratio_l = coarse.liouville_max / fine.liouville_max;
    const double ratio_a = coarse.maxwell_a_max / fine.maxwell_a_max;
    for (auto [name, r] : {std::pair{"residual_order_liouville", ratio_l},
                           std::pair{"residual_order_maxwell_a", ratio_a}}) {
        const bool ok = r >= tol.residual_ratio_min && r <= tol.residual_ratio_max;
        rep.checks.push_back({name, r, tol.residual_ratio_min, ok,
                              "residual ratio under halving h, expected in [" +
                                  format_float(tol.residual_ratio_min) + ", " +
                                  format_float(tol.residual_ratio_max) + "]"});
    }

    Scenario retarded = scn;
    retarded.frame = Frame::retarded;
    SampledData num;
    try {
        num = sample(retarded, Source::numeric);
    } catch (const NormDriftError& e) {
        rep.checks.push_back({"numeric_norm", 1.0, 0.0, false, e.what()});
        return rep;
    }
    const ComparisonError err = compare(num.retarded, exact);
    add("numeric_field", err.field, tol.numeric_field, "max |Omega_a error| / peak |Omega_a|");
    add("numeric_population", err.population, tol.numeric_population, "max |P2 error|");
    return rep;
}

} // namespace slowlight
