#pragma once

// Direct numerical integration of the Maxwell-Bloch system in retarded
// coordinates, and a finite-difference residual for any tabulated candidate.
//
//   d psi / d tau     = -i H psi
//   d Omega_a / dzeta = i nu0 psi_3 conj(psi_1)
//   d Omega_b / dzeta = i nu0 psi_3 conj(psi_2)
//
// The field equations follow from d_zeta H_I = i nu0/4 [D, rho] with
// rho = |psi><psi|: the (3,1) entry gives -Omega_a'/2 = i nu0/4 (-2 rho_31).

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "slowlight/core.hpp"
#include "slowlight/errors.hpp"
#include "slowlight/grid.hpp"

namespace slowlight {

using Matrix3c = std::array<std::array<Complex, 3>, 3>;

/// H = -(Delta/2) diag(1, 1, -1) - (Omega_a |3><1| + Omega_b |3><2|)/2 + h.c.
inline Matrix3c hamiltonian(const FieldSample& fs, double delta) {
    Matrix3c h{};
    h[0][0] = -0.5 * delta;
    h[1][1] = -0.5 * delta;
    h[2][2] = 0.5 * delta;
    h[2][0] = -0.5 * fs.omega_a;
    h[2][1] = -0.5 * fs.omega_b;
    h[0][2] = std::conj(h[2][0]);
    h[1][2] = std::conj(h[2][1]);
    return h;
}

/// -i H psi.
inline AtomState schrodinger_rhs(const AtomState& psi, const Matrix3c& h) {
    const std::array<Complex, 3> v{psi.c1, psi.c2, psi.c3};
    std::array<Complex, 3> out{};
    for (std::size_t r = 0; r < 3; ++r) {
        Complex acc = h[r][0] * v[0] + h[r][1] * v[1] + h[r][2] * v[2];
        out[r] = Complex(acc.imag(), -acc.real());
    }
    return {out[0], out[1], out[2]};
}

/// (d Omega_a/d zeta, d Omega_b/d zeta).
inline FieldSample maxwell_rhs(const AtomState& psi, double nu0) {
    const Complex i(0.0, 1.0);
    return {i * nu0 * psi.c3 * std::conj(psi.c1), i * nu0 * psi.c3 * std::conj(psi.c2)};
}

namespace detail {

inline AtomState axpy(const AtomState& y, double h, const AtomState& k) {
    return {y.c1 + h * k.c1, y.c2 + h * k.c2, y.c3 + h * k.c3};
}

inline FieldSample axpy(const FieldSample& y, double h, const FieldSample& k) {
    return {y.omega_a + h * k.omega_a, y.omega_b + h * k.omega_b};
}

inline FieldSample midpoint(const FieldSample& a, const FieldSample& b) {
    return {0.5 * (a.omega_a + b.omega_a), 0.5 * (a.omega_b + b.omega_b)};
}

} // namespace detail

struct IntegrateOptions {
    /// Keep every `stride_zeta`-th / `stride_tau`-th node in the returned grid.
    std::size_t stride_zeta = 1;
    std::size_t stride_tau = 1;
    /// Largest tolerated | |psi|^2 - 1 | at any node.
    double norm_tolerance = 1e-6;
    /// Called once per zeta slice with the full-resolution slice data.
    std::function<void(std::size_t i_zeta, double zeta, std::span<const FieldSample>,
                       std::span<const AtomState>)>
        on_slice;
};

/// Largest | |psi|^2 - 1 | seen by the last integrate() call is reported here.
struct IntegrateStats {
    double max_norm_drift = 0.0;
};

/// Marches the Maxwell-Bloch system in zeta.
///
/// `boundary` holds the fields at zeta = zeta_min on every tau node of
/// `grid`; `initial` holds the atomic state at tau = tau_min on every zeta
/// node (a single entry is broadcast to all of them). Each zeta slice is a
/// classical RK4 sweep in tau with fields linearly interpolated at the half
/// step; the fields then advance with a trapezoidal predictor-corrector.
inline SolutionGrid integrate(const MediumParams& mp, std::span<const FieldSample> boundary,
                              std::span<const AtomState> initial, const Grid2D& grid,
                              const IntegrateOptions& opts = {}, IntegrateStats* stats = nullptr) {
    grid.validate();
    mp.validate();
    if (boundary.size() != grid.n_tau)
        throw ConfigError("integrate: boundary has " + std::to_string(boundary.size()) +
                          " samples, grid has " + std::to_string(grid.n_tau) + " tau nodes");
    if (initial.size() != 1 && initial.size() != grid.n_zeta)
        throw ConfigError("integrate: initial state count must be 1 or n_zeta");
    if (opts.stride_zeta == 0 || opts.stride_tau == 0 ||
        (grid.n_zeta - 1) % opts.stride_zeta != 0 || (grid.n_tau - 1) % opts.stride_tau != 0)
        throw ConfigError("integrate: strides must divide the interval counts");
    for (const auto& s : initial)
        if (std::abs(s.norm_squared() - 1.0) > opts.norm_tolerance)
            throw ConfigError("integrate: initial state is not normalized");

    Grid2D out_grid = grid;
    out_grid.n_zeta = (grid.n_zeta - 1) / opts.stride_zeta + 1;
    out_grid.n_tau = (grid.n_tau - 1) / opts.stride_tau + 1;
    SolutionGrid out(out_grid);

    const std::size_t nt = grid.n_tau;
    const double dt = grid.d_tau();
    const double dz = grid.d_zeta();
    double max_drift = 0.0;

    std::vector<FieldSample> fields(boundary.begin(), boundary.end());
    std::vector<FieldSample> trial(nt);
    std::vector<FieldSample> source(nt);
    std::vector<FieldSample> trial_source(nt);
    std::vector<AtomState> psi(nt);

    auto sweep = [&](const std::vector<FieldSample>& f, const AtomState& start,
                     std::vector<FieldSample>& src) {
        psi[0] = start;
        src[0] = maxwell_rhs(start, mp.nu0);
        Matrix3c h0 = hamiltonian(f[0], mp.delta);
        for (std::size_t j = 0; j + 1 < nt; ++j) {
            const Matrix3c hm = hamiltonian(detail::midpoint(f[j], f[j + 1]), mp.delta);
            const Matrix3c h1 = hamiltonian(f[j + 1], mp.delta);
            const AtomState& y = psi[j];
            AtomState k1 = schrodinger_rhs(y, h0);
            AtomState k2 = schrodinger_rhs(detail::axpy(y, 0.5 * dt, k1), hm);
            AtomState k3 = schrodinger_rhs(detail::axpy(y, 0.5 * dt, k2), hm);
            AtomState k4 = schrodinger_rhs(detail::axpy(y, dt, k3), h1);
            AtomState next = y;
            next = detail::axpy(next, dt / 6.0, k1);
            next = detail::axpy(next, dt / 3.0, k2);
            next = detail::axpy(next, dt / 3.0, k3);
            next = detail::axpy(next, dt / 6.0, k4);
            psi[j + 1] = next;
            src[j + 1] = maxwell_rhs(next, mp.nu0);
            h0 = h1;
        }
    };

    auto check_and_store = [&](std::size_t i) {
        for (std::size_t j = 0; j < nt; ++j) {
            const double drift = std::abs(psi[j].norm_squared() - 1.0);
            max_drift = std::max(max_drift, drift);
            if (drift > opts.norm_tolerance)
                throw NormDriftError("integrate: norm drift " + std::to_string(drift) +
                                     " at zeta=" + std::to_string(grid.zeta(i)) +
                                     ", tau=" + std::to_string(grid.tau(j)));
        }
        if (opts.on_slice) opts.on_slice(i, grid.zeta(i), fields, psi);
        if (i % opts.stride_zeta != 0) return;
        const std::size_t io = i / opts.stride_zeta;
        for (std::size_t jo = 0; jo < out_grid.n_tau; ++jo) {
            out.field(io, jo) = fields[jo * opts.stride_tau];
            out.atom(io, jo) = psi[jo * opts.stride_tau];
        }
    };

    auto start_state = [&](std::size_t i) -> const AtomState& {
        return initial.size() == 1 ? initial[0] : initial[i];
    };

    sweep(fields, start_state(0), source);
    check_and_store(0);
    for (std::size_t i = 0; i + 1 < grid.n_zeta; ++i) {
        for (std::size_t j = 0; j < nt; ++j) trial[j] = detail::axpy(fields[j], dz, source[j]);
        sweep(trial, start_state(i + 1), trial_source);
        for (std::size_t j = 0; j < nt; ++j) {
            fields[j].omega_a += 0.5 * dz * (source[j].omega_a + trial_source[j].omega_a);
            fields[j].omega_b += 0.5 * dz * (source[j].omega_b + trial_source[j].omega_b);
        }
        sweep(fields, start_state(i + 1), source);
        check_and_store(i + 1);
    }
    if (stats) stats->max_norm_drift = max_drift;
    return out;
}

inline SolutionGrid integrate(const MediumParams& mp, std::span<const FieldSample> boundary,
                              const AtomState& initial, const Grid2D& grid,
                              const IntegrateOptions& opts = {}, IntegrateStats* stats = nullptr) {
    return integrate(mp, boundary, std::span<const AtomState>(&initial, 1), grid, opts, stats);
}

struct ResidualReport {
    double liouville_max = 0.0;
    double liouville_l2 = 0.0;
    double maxwell_a_max = 0.0;
    double maxwell_a_l2 = 0.0;
    double maxwell_b_max = 0.0;
    double maxwell_b_l2 = 0.0;
    double d_zeta = 0.0;
    double d_tau = 0.0;
};

struct ResidualOptions {
    /// tau values where the candidate is only once differentiable in tau
    /// (the control-field switch-off). Stencils straddling one are replaced
    /// by one-sided second-order differences.
    std::vector<double> tau_breaks;
};

/// Second-order finite-difference residual of the Maxwell-Bloch equations.
/// The tau derivative is taken at every zeta and interior tau node, the
/// zeta derivative at interior zeta and every tau node. L2 values are RMS.
inline ResidualReport residual(const SolutionGrid& cand, const MediumParams& mp,
                               const ResidualOptions& opts = {}) {
    const Grid2D& g = cand.grid;
    if (g.n_zeta < 3 || g.n_tau < 3) throw ConfigError("residual: need >= 3 nodes per axis");
    ResidualReport rep;
    rep.d_zeta = g.d_zeta();
    rep.d_tau = g.d_tau();
    const double ht = rep.d_tau;
    const double hz = rep.d_zeta;

    auto psi_vec = [](const AtomState& s) { return std::array<Complex, 3>{s.c1, s.c2, s.c3}; };

    // -1: backward, 0: central, +1: forward
    std::vector<int> stencil(g.n_tau, 0);
    for (double b : opts.tau_breaks) {
        for (std::size_t j = 1; j + 1 < g.n_tau; ++j) {
            if (g.tau(j - 1) < b && b < g.tau(j + 1)) stencil[j] = g.tau(j) >= b ? 1 : -1;
        }
    }

    double l_sum = 0.0;
    std::size_t l_count = 0;
    for (std::size_t i = 0; i < g.n_zeta; ++i) {
        for (std::size_t j = 1; j + 1 < g.n_tau; ++j) {
            std::array<Complex, 3> d{};
            const auto c = psi_vec(cand.atom(i, j));
            if (stencil[j] == 0) {
                auto p = psi_vec(cand.atom(i, j + 1));
                auto m = psi_vec(cand.atom(i, j - 1));
                for (int k = 0; k < 3; ++k) d[k] = (p[k] - m[k]) / (2.0 * ht);
            } else if (stencil[j] > 0 && j + 2 < g.n_tau) {
                auto p1 = psi_vec(cand.atom(i, j + 1));
                auto p2 = psi_vec(cand.atom(i, j + 2));
                for (int k = 0; k < 3; ++k) d[k] = (-3.0 * c[k] + 4.0 * p1[k] - p2[k]) / (2.0 * ht);
            } else if (stencil[j] < 0 && j >= 2) {
                auto m1 = psi_vec(cand.atom(i, j - 1));
                auto m2 = psi_vec(cand.atom(i, j - 2));
                for (int k = 0; k < 3; ++k) d[k] = (3.0 * c[k] - 4.0 * m1[k] + m2[k]) / (2.0 * ht);
            } else {
                continue;
            }
            const AtomState rhs = schrodinger_rhs(cand.atom(i, j), hamiltonian(cand.field(i, j), mp.delta));
            const double r = std::sqrt(std::norm(d[0] - rhs.c1) + std::norm(d[1] - rhs.c2) +
                                       std::norm(d[2] - rhs.c3));
            rep.liouville_max = std::max(rep.liouville_max, r);
            l_sum += r * r;
            ++l_count;
        }
    }

    double a_sum = 0.0;
    double b_sum = 0.0;
    std::size_t m_count = 0;
    for (std::size_t i = 1; i + 1 < g.n_zeta; ++i) {
        for (std::size_t j = 0; j < g.n_tau; ++j) {
            const FieldSample& p = cand.field(i + 1, j);
            const FieldSample& m = cand.field(i - 1, j);
            const FieldSample src = maxwell_rhs(cand.atom(i, j), mp.nu0);
            const double ra = std::abs((p.omega_a - m.omega_a) / (2.0 * hz) - src.omega_a);
            const double rb = std::abs((p.omega_b - m.omega_b) / (2.0 * hz) - src.omega_b);
            rep.maxwell_a_max = std::max(rep.maxwell_a_max, ra);
            rep.maxwell_b_max = std::max(rep.maxwell_b_max, rb);
            a_sum += ra * ra;
            b_sum += rb * rb;
            ++m_count;
        }
    }
    rep.liouville_l2 = l_count ? std::sqrt(l_sum / static_cast<double>(l_count)) : 0.0;
    rep.maxwell_a_l2 = m_count ? std::sqrt(a_sum / static_cast<double>(m_count)) : 0.0;
    rep.maxwell_b_l2 = m_count ? std::sqrt(b_sum / static_cast<double>(m_count)) : 0.0;
    return rep;
}

} // namespace slowlight
