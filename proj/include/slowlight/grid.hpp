#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "slowlight/core.hpp"
#include "slowlight/errors.hpp"

namespace slowlight {

/// Uniform (zeta, tau) node set.
struct Grid2D {
    double zeta_min = 0.0;
    double zeta_max = 3.0;
    double tau_min = -15.0;
    double tau_max = 30.0;
    std::size_t n_zeta = 151;
    std::size_t n_tau = 301;

    void validate() const {
        if (!(zeta_min >= 0.0)) throw ConfigError("grid: zeta_min must be >= 0");
        if (!(zeta_max > zeta_min)) throw ConfigError("grid: zeta_max must exceed zeta_min");
        if (!(tau_max > tau_min)) throw ConfigError("grid: tau_max must exceed tau_min");
        if (n_zeta < 2 || n_tau < 2) throw ConfigError("grid: need at least 2 nodes per axis");
    }

    double d_zeta() const { return (zeta_max - zeta_min) / static_cast<double>(n_zeta - 1); }
    double d_tau() const { return (tau_max - tau_min) / static_cast<double>(n_tau - 1); }
    double zeta(std::size_t i) const {
        return i + 1 == n_zeta ? zeta_max : zeta_min + static_cast<double>(i) * d_zeta();
    }
    double tau(std::size_t j) const {
        return j + 1 == n_tau ? tau_max : tau_min + static_cast<double>(j) * d_tau();
    }
    std::size_t size() const { return n_zeta * n_tau; }

    /// Same extent, each interval split into `rz` (zeta) and `rt` (tau) parts.
    Grid2D refined(std::size_t rz, std::size_t rt) const {
        Grid2D g = *this;
        g.n_zeta = (n_zeta - 1) * rz + 1;
        g.n_tau = (n_tau - 1) * rt + 1;
        return g;
    }
};

/// Fields and atomic amplitudes at every node, zeta-major.
struct SolutionGrid {
    Grid2D grid;
    std::vector<FieldSample> fields;
    std::vector<AtomState> atoms;

    SolutionGrid() = default;
    explicit SolutionGrid(const Grid2D& g) : grid(g), fields(g.size()), atoms(g.size()) {}

    std::size_t index(std::size_t i_zeta, std::size_t j_tau) const {
        return i_zeta * grid.n_tau + j_tau;
    }
    const FieldSample& field(std::size_t i, std::size_t j) const { return fields[index(i, j)]; }
    const AtomState& atom(std::size_t i, std::size_t j) const { return atoms[index(i, j)]; }
    FieldSample& field(std::size_t i, std::size_t j) { return fields[index(i, j)]; }
    AtomState& atom(std::size_t i, std::size_t j) { return atoms[index(i, j)]; }
};

/// Samples the exact solution at every node of `g`.
inline SolutionGrid tabulate_exact(const ExactSolution& sol, const Grid2D& g) {
    g.validate();
    SolutionGrid out(g);
    for (std::size_t j = 0; j < g.n_tau; ++j) {
        const double tau = g.tau(j);
        const WZPair p = sol.wz(tau);
        for (std::size_t i = 0; i < g.n_zeta; ++i) {
            const double zeta = g.zeta(i);
            out.field(i, j) = sol.fields(zeta, tau, p);
            out.atom(i, j) = sol.atom_state(zeta, tau, p);
        }
    }
    return out;
}

} // namespace slowlight
