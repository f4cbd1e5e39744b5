#pragma once

// Scenario documents, grid sampling of the exact or integrated solution, and
// the on-disk output set (CSV grids, summary and manifest JSON).
//
// Scenario document (JSON; every key optional):
//
//   {
//     "medium":  {"nu0": 10, "delta": 0, "c": 1},
//     "control": {"omega0": 2, "alpha": 1},
//     "soliton": {"epsilon0": 2.1, "lambda_re": 0, "phi0": -3, "theta0": 0},
//     "grid":    {"zeta_min": 0, "zeta_max": 3, "tau_min": -15, "tau_max": 30,
//                 "n_zeta": 151, "n_tau": 301},
//     "solver":  {"refine_zeta": 4, "refine_tau": 20},
//     "verify":  {...tolerances, see VerifyTolerances...},
//     "z0": 0,
//     "frame": "lab",
//     "outputs": ["fields", "populations", "summary"]
//   }
//
// lambda = lambda_re - i epsilon0.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <openssl/evp.h>
#include <unistd.h>

#include "json.hpp"

#include "slowlight/core.hpp"
#include "slowlight/errors.hpp"
#include "slowlight/grid.hpp"
#include "slowlight/mb.hpp"

namespace slowlight {

enum class Frame { retarded, lab };
enum class OutputKind { fields, populations, summary, residuals };
enum class Source { exact, numeric };

inline std::string to_string(Frame f) { return f == Frame::lab ? "lab" : "retarded"; }

inline std::string to_string(OutputKind k) {
    switch (k) {
    case OutputKind::fields: return "fields";
    case OutputKind::populations: return "populations";
    case OutputKind::summary: return "summary";
    case OutputKind::residuals: return "residuals";
    }
    return "?";
}

struct SolverSettings {
    std::size_t refine_zeta = 4;
    std::size_t refine_tau = 20;
    bool operator==(const SolverSettings&) const = default;
};

/// Thresholds used by `verify`.
struct VerifyTolerances {
    double riccati = 1e-6;            ///< max |FD dw/dtau - RHS|, same for z
    double fd_step = 1e-4;
    double boundary = 1e-10;          ///< |w(0) - w0|
    double norm = 1e-10;              ///< exact-solution norm defect
    double numeric_field = 1e-3;      ///< max |Omega_a error| / peak
    double numeric_population = 1e-3;
    double residual_ratio_min = 3.5;
    double residual_ratio_max = 4.5;
    bool operator==(const VerifyTolerances&) const = default;
};

struct Scenario {
    MediumParams medium;
    SolitonParams soliton = SolitonParams::imaginary(2.1, -3.0, 0.0);
    ControlField control;
    Grid2D grid;
    SolverSettings solver;
    VerifyTolerances verify;
    double z0 = 0.0;
    Frame frame = Frame::lab;
    std::vector<OutputKind> outputs{OutputKind::fields, OutputKind::populations,
                                    OutputKind::summary};

    bool wants(OutputKind k) const {
        return std::find(outputs.begin(), outputs.end(), k) != outputs.end();
    }
    Grid2D solver_grid() const { return grid.refined(solver.refine_zeta, solver.refine_tau); }
};

inline bool operator==(const Scenario& a, const Scenario& b) {
    auto grid_eq = [](const Grid2D& x, const Grid2D& y) {
        return x.zeta_min == y.zeta_min && x.zeta_max == y.zeta_max && x.tau_min == y.tau_min &&
               x.tau_max == y.tau_max && x.n_zeta == y.n_zeta && x.n_tau == y.n_tau;
    };
    return a.medium.nu0 == b.medium.nu0 && a.medium.delta == b.medium.delta &&
           a.medium.c == b.medium.c && a.soliton.lambda == b.soliton.lambda &&
           a.soliton.phi0 == b.soliton.phi0 && a.soliton.theta0 == b.soliton.theta0 &&
           a.control.omega0 == b.control.omega0 && a.control.alpha == b.control.alpha &&
           grid_eq(a.grid, b.grid) && a.solver == b.solver && a.verify == b.verify &&
           a.z0 == b.z0 && a.frame == b.frame && a.outputs == b.outputs;
}

namespace detail {

using nlohmann::json;

class SchemaReader {
public:
    SchemaReader(const json& doc, std::string path) : doc_(doc), path_(std::move(path)) {
        if (!doc_.is_object()) throw SchemaError(path_.empty() ? "<root>" : path_, "expected an object");
    }

    void number(const char* key, double& out) {
        seen_.push_back(key);
        if (!doc_.contains(key)) return;
        const json& v = doc_.at(key);
        if (!v.is_number()) throw SchemaError(join(key), "expected a number");
        out = v.get<double>();
        if (!std::isfinite(out)) throw SchemaError(join(key), "must be finite");
    }

    void count(const char* key, std::size_t& out) {
        seen_.push_back(key);
        if (!doc_.contains(key)) return;
        const json& v = doc_.at(key);
        if (!v.is_number_integer() || v.get<long long>() < 0)
            throw SchemaError(join(key), "expected a non-negative integer");
        out = v.get<std::size_t>();
    }

    const json* section(const char* key) {
        seen_.push_back(key);
        if (!doc_.contains(key)) return nullptr;
        return &doc_.at(key);
    }

    std::string join(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    void reject_unknown() const {
        for (auto it = doc_.begin(); it != doc_.end(); ++it) {
            if (std::find(seen_.begin(), seen_.end(), it.key()) == seen_.end())
                throw SchemaError(join(it.key()), "unknown key");
        }
    }

private:
    const json& doc_;
    std::string path_;
    std::vector<std::string> seen_;
};

} // namespace detail

/// Builds and validates a Scenario from a parsed document.
inline Scenario parse_scenario_document(const nlohmann::json& doc) {
    using detail::SchemaReader;
    Scenario s;
    SchemaReader root(doc, "");

    if (const auto* m = root.section("medium")) {
        SchemaReader r(*m, "medium");
        r.number("nu0", s.medium.nu0);
        r.number("delta", s.medium.delta);
        r.number("c", s.medium.c);
        r.reject_unknown();
    }
    if (const auto* m = root.section("control")) {
        SchemaReader r(*m, "control");
        r.number("omega0", s.control.omega0);
        r.number("alpha", s.control.alpha);
        r.reject_unknown();
    }
    if (const auto* m = root.section("soliton")) {
        SchemaReader r(*m, "soliton");
        double eps = s.soliton.epsilon0();
        double re = s.soliton.lambda.real();
        r.number("epsilon0", eps);
        r.number("lambda_re", re);
        r.number("phi0", s.soliton.phi0);
        r.number("theta0", s.soliton.theta0);
        r.reject_unknown();
        s.soliton.lambda = Complex(re, -eps);
    }
    if (const auto* m = root.section("grid")) {
        SchemaReader r(*m, "grid");
        r.number("zeta_min", s.grid.zeta_min);
        r.number("zeta_max", s.grid.zeta_max);
        r.number("tau_min", s.grid.tau_min);
        r.number("tau_max", s.grid.tau_max);
        r.count("n_zeta", s.grid.n_zeta);
        r.count("n_tau", s.grid.n_tau);
        r.reject_unknown();
    }
    if (const auto* m = root.section("solver")) {
        SchemaReader r(*m, "solver");
        r.count("refine_zeta", s.solver.refine_zeta);
        r.count("refine_tau", s.solver.refine_tau);
        r.reject_unknown();
    }
    if (const auto* m = root.section("verify")) {
        SchemaReader r(*m, "verify");
        auto& v = s.verify;
        r.number("riccati", v.riccati);
        r.number("fd_step", v.fd_step);
        r.number("boundary", v.boundary);
        r.number("norm", v.norm);
        r.number("numeric_field", v.numeric_field);
        r.number("numeric_population", v.numeric_population);
        r.number("residual_ratio_min", v.residual_ratio_min);
        r.number("residual_ratio_max", v.residual_ratio_max);
        r.reject_unknown();
    }
    root.number("z0", s.z0);
    if (const auto* f = root.section("frame")) {
        if (!f->is_string()) throw SchemaError("frame", "expected \"retarded\" or \"lab\"");
        const auto v = f->get<std::string>();
        if (v == "lab") s.frame = Frame::lab;
        else if (v == "retarded") s.frame = Frame::retarded;
        else throw SchemaError("frame", "expected \"retarded\" or \"lab\", got \"" + v + "\"");
    }
    if (const auto* o = root.section("outputs")) {
        if (!o->is_array()) throw SchemaError("outputs", "expected an array of strings");
        s.outputs.clear();
        for (std::size_t k = 0; k < o->size(); ++k) {
            const auto& e = (*o)[k];
            const std::string p = "outputs[" + std::to_string(k) + "]";
            if (!e.is_string()) throw SchemaError(p, "expected a string");
            const auto v = e.get<std::string>();
            OutputKind kind;
            if (v == "fields") kind = OutputKind::fields;
            else if (v == "populations") kind = OutputKind::populations;
            else if (v == "summary") kind = OutputKind::summary;
            else if (v == "residuals") kind = OutputKind::residuals;
            else throw SchemaError(p, "unknown output \"" + v + "\"");
            if (!s.wants(kind)) s.outputs.push_back(kind);
        }
        std::sort(s.outputs.begin(), s.outputs.end());
    }
    root.reject_unknown();

    // Invariants.
    if (s.outputs.empty()) throw ValidationError("outputs: at least one output is required");
    try {
        s.medium.validate();
        s.control.validate();
        s.soliton.validate(s.control);
        s.grid.validate();
    } catch (const ValidationError&) {
        throw;
    } catch (const Error& e) {
        throw ValidationError(e.what());
    }
    if (s.solver.refine_zeta == 0 || s.solver.refine_tau == 0)
        throw ValidationError("solver: refinement factors must be >= 1");
    if (s.frame == Frame::lab && !(s.grid.tau_max + s.grid.zeta_min > s.grid.tau_min + s.grid.zeta_max))
        throw ValidationError("grid: lab frame needs tau_max - tau_min > zeta_max - zeta_min");
    if (!(s.verify.fd_step > 0.0)) throw ValidationError("verify.fd_step must be > 0");
    return s;
}

inline Scenario parse_scenario(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError("<document>", std::string("malformed JSON: ") + e.what());
    }
    return parse_scenario_document(doc);
}

/// Serializes every field, defaults included; parse_scenario() inverts it.
inline nlohmann::json to_json(const Scenario& s) {
    nlohmann::json j;
    j["medium"] = {{"nu0", s.medium.nu0}, {"delta", s.medium.delta}, {"c", s.medium.c}};
    j["control"] = {{"omega0", s.control.omega0}, {"alpha", s.control.alpha}};
    j["soliton"] = {{"epsilon0", s.soliton.epsilon0()},
                    {"lambda_re", s.soliton.lambda.real()},
                    {"phi0", s.soliton.phi0},
                    {"theta0", s.soliton.theta0}};
    j["grid"] = {{"zeta_min", s.grid.zeta_min}, {"zeta_max", s.grid.zeta_max},
                 {"tau_min", s.grid.tau_min},   {"tau_max", s.grid.tau_max},
                 {"n_zeta", s.grid.n_zeta},     {"n_tau", s.grid.n_tau}};
    j["solver"] = {{"refine_zeta", s.solver.refine_zeta}, {"refine_tau", s.solver.refine_tau}};
    const auto& v = s.verify;
    j["verify"] = {{"riccati", v.riccati},
                   {"fd_step", v.fd_step},
                   {"boundary", v.boundary},
                   {"norm", v.norm},
                   {"numeric_field", v.numeric_field},
                   {"numeric_population", v.numeric_population},
                   {"residual_ratio_min", v.residual_ratio_min},
                   {"residual_ratio_max", v.residual_ratio_max}};
    j["z0"] = s.z0;
    j["frame"] = to_string(s.frame);
    j["outputs"] = nlohmann::json::array();
    for (auto k : s.outputs) j["outputs"].push_back(to_string(k));
    return j;
}

/// Applies `path=value` to a document. `value` is read as JSON when it
/// parses, otherwise as a bare string. Intermediate objects are created.
inline void apply_override(nlohmann::json& doc, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
        throw SchemaError(assignment, "override must look like key.path=value");
    const std::string path = assignment.substr(0, eq);
    const std::string raw = assignment.substr(eq + 1);
    nlohmann::json value;
    try {
        value = nlohmann::json::parse(raw);
    } catch (const nlohmann::json::parse_error&) {
        value = raw;
    }
    nlohmann::json* node = &doc;
    std::size_t start = 0;
    while (true) {
        const auto dot = path.find('.', start);
        const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (key.empty()) throw SchemaError(path, "empty path component");
        if (!node->is_object()) throw SchemaError(path, "cannot descend into a non-object");
        if (dot == std::string::npos) {
            (*node)[key] = value;
            return;
        }
        node = &(*node)[key];
        if (node->is_null()) *node = nlohmann::json::object();
        start = dot + 1;
    }
}

// ---------------------------------------------------------------------------
// Sampling

/// One scalar quantity over the output grid; index = m * z.size() + k.
struct QuantityGrid {
    std::string name;
    std::vector<double> values;
};

struct SampledData {
    Frame frame = Frame::lab;
    std::vector<double> t;  ///< lab time (lab frame) or tau (retarded frame)
    std::vector<double> z;  ///< lab position (lab frame) or zeta (retarded frame)
    std::vector<QuantityGrid> quantities;  ///< I_a, I_b, P1, P2, P3
    SolutionGrid retarded;                 ///< the source solution on the output (zeta, tau) grid
    double max_norm_drift = 0.0;           ///< numeric source only

    const QuantityGrid& quantity(std::string_view name) const {
        for (const auto& q : quantities)
            if (q.name == name) return q;
        throw Error("no quantity named " + std::string(name));
    }
    double at(std::string_view name, std::size_t m, std::size_t k) const {
        return quantity(name).values[m * z.size() + k];
    }
};

inline constexpr std::array<const char*, 5> kQuantityNames = {"I_a", "I_b", "P1", "P2", "P3"};

namespace detail {

inline std::array<double, 5> quantities_of(const FieldSample& f, const AtomState& a) {
    const auto p = a.populations();
    return {std::norm(f.omega_a), std::norm(f.omega_b), p[0], p[1], p[2]};
}

inline FieldSample lerp(const FieldSample& a, const FieldSample& b, double s) {
    return {a.omega_a + s * (b.omega_a - a.omega_a), a.omega_b + s * (b.omega_b - a.omega_b)};
}

inline AtomState lerp(const AtomState& a, const AtomState& b, double s) {
    return {a.c1 + s * (b.c1 - a.c1), a.c2 + s * (b.c2 - a.c2), a.c3 + s * (b.c3 - a.c3)};
}

} // namespace detail

/// Lab-frame time axis implied by a retarded grid: the span of t = tau + zeta
/// covered at every zeta, with n_tau nodes.
inline std::vector<double> lab_time_axis(const Grid2D& g) {
    std::vector<double> t(g.n_tau);
    const double t0 = g.tau_min + g.zeta_max;
    const double t1 = g.tau_max + g.zeta_min;
    for (std::size_t m = 0; m < g.n_tau; ++m)
        t[m] = m + 1 == g.n_tau ? t1 : t0 + (t1 - t0) * static_cast<double>(m) / static_cast<double>(g.n_tau - 1);
    return t;
}

/// Boundary fields at zeta_min and initial states at tau_min for the
/// integrator, both taken from the exact solution.
inline std::pair<std::vector<FieldSample>, std::vector<AtomState>>
exact_boundary_data(const ExactSolution& sol, const Grid2D& g) {
    std::vector<FieldSample> boundary(g.n_tau);
    for (std::size_t j = 0; j < g.n_tau; ++j) boundary[j] = sol.fields(g.zeta_min, g.tau(j));
    std::vector<AtomState> initial(g.n_zeta);
    const WZPair p = sol.wz(g.tau_min);
    for (std::size_t i = 0; i < g.n_zeta; ++i) initial[i] = sol.atom_state(g.zeta(i), g.tau_min, p);
    return {std::move(boundary), std::move(initial)};
}

/// Grids of I_a, I_b, P1, P2, P3 over the scenario's output grid in the
/// requested frame. Lab frame: z = z0 + c zeta on the zeta nodes, t on
/// lab_time_axis(); retarded frame: the (zeta, tau) nodes themselves.
inline SampledData sample(const Scenario& scn, Source source) {
    const ExactSolution sol(scn.medium, scn.soliton, scn.control);
    const Grid2D& g = scn.grid;
    SampledData out;
    out.frame = scn.frame;
    out.z.resize(g.n_zeta);
    for (std::size_t k = 0; k < g.n_zeta; ++k)
        out.z[k] = scn.frame == Frame::lab ? scn.z0 + scn.medium.c * g.zeta(k) : g.zeta(k);
    if (scn.frame == Frame::lab) {
        out.t = lab_time_axis(g);
    } else {
        out.t.resize(g.n_tau);
        for (std::size_t m = 0; m < g.n_tau; ++m) out.t[m] = g.tau(m);
    }
    for (auto name : kQuantityNames) out.quantities.push_back({name, std::vector<double>(g.size())});
    const std::size_t nz = g.n_zeta;

    auto store = [&](std::size_t m, std::size_t k, const FieldSample& f, const AtomState& a) {
        const auto q = detail::quantities_of(f, a);
        for (std::size_t n = 0; n < q.size(); ++n) out.quantities[n].values[m * nz + k] = q[n];
    };

    if (source == Source::exact) {
        out.retarded = tabulate_exact(sol, g);
        if (scn.frame == Frame::retarded) {
            for (std::size_t m = 0; m < g.n_tau; ++m)
                for (std::size_t k = 0; k < nz; ++k)
                    store(m, k, out.retarded.field(k, m), out.retarded.atom(k, m));
        } else {
            for (std::size_t m = 0; m < g.n_tau; ++m) {
                for (std::size_t k = 0; k < nz; ++k) {
                    const double zeta = g.zeta(k);
                    const double tau = out.t[m] - zeta;
                    const WZPair p = sol.wz(tau);
                    store(m, k, sol.fields(zeta, tau, p), sol.atom_state(zeta, tau, p));
                }
            }
        }
        return out;
    }

    // Numeric: integrate on the refined grid, keep the output nodes, and
    // interpolate lab-frame samples from the full-resolution tau slices.
    const Grid2D sg = scn.solver_grid();
    auto [boundary, initial] = exact_boundary_data(sol, sg);
    IntegrateOptions opts;
    opts.stride_zeta = scn.solver.refine_zeta;
    opts.stride_tau = scn.solver.refine_tau;
    if (scn.frame == Frame::lab) {
        opts.on_slice = [&](std::size_t i, double zeta, std::span<const FieldSample> f,
                            std::span<const AtomState> a) {
            if (i % scn.solver.refine_zeta != 0) return;
            const std::size_t k = i / scn.solver.refine_zeta;
            const double dt = sg.d_tau();
            for (std::size_t m = 0; m < out.t.size(); ++m) {
                const double pos = (out.t[m] - zeta - sg.tau_min) / dt;
                std::size_t j = static_cast<std::size_t>(std::clamp(std::floor(pos), 0.0, static_cast<double>(sg.n_tau - 2)));
                const double s = std::clamp(pos - static_cast<double>(j), 0.0, 1.0);
                store(m, k, detail::lerp(f[j], f[j + 1], s), detail::lerp(a[j], a[j + 1], s));
            }
        };
    }
    IntegrateStats stats;
    out.retarded = integrate(scn.medium, boundary, initial, sg, opts, &stats);
    out.max_norm_drift = stats.max_norm_drift;
    if (scn.frame == Frame::retarded) {
        for (std::size_t m = 0; m < g.n_tau; ++m)
            for (std::size_t k = 0; k < nz; ++k)
                store(m, k, out.retarded.field(k, m), out.retarded.atom(k, m));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Summary

struct VelocityPoint {
    double tau;
    double v_over_c;
};

struct SummaryReport {
    Scenario scenario;
    Complex w0;
    std::optional<double> stopping_distance;  ///< absent for alpha = 0
    double stopping_distance_sudden = 0.0;
    double memory_width = 0.0;
    std::vector<VelocityPoint> group_velocity;
    std::optional<ResidualReport> residuals;
};

inline SummaryReport make_summary(const Scenario& scn) {
    const ExactSolution sol(scn.medium, scn.soliton, scn.control);
    SummaryReport r;
    r.scenario = scn;
    r.w0 = sol.wz_solution().w0();
    if (scn.control.alpha > 0.0) r.stopping_distance = sol.stopping_distance();
    r.stopping_distance_sudden = sol.stopping_distance_sudden();
    r.memory_width = memory_width(scn.medium, scn.soliton);
    for (std::size_t j = 0; j < scn.grid.n_tau; ++j) {
        const double tau = scn.grid.tau(j);
        r.group_velocity.push_back({tau, sol.group_velocity(tau)});
    }
    return r;
}

inline nlohmann::json to_json(const ResidualReport& r) {
    return {{"liouville_max", r.liouville_max}, {"liouville_l2", r.liouville_l2},
            {"maxwell_a_max", r.maxwell_a_max}, {"maxwell_a_l2", r.maxwell_a_l2},
            {"maxwell_b_max", r.maxwell_b_max}, {"maxwell_b_l2", r.maxwell_b_l2},
            {"d_zeta", r.d_zeta},               {"d_tau", r.d_tau}};
}

inline nlohmann::json to_json(const SummaryReport& r) {
    nlohmann::json j;
    j["scenario"] = to_json(r.scenario);
    j["w0"] = {{"re", r.w0.real()}, {"im", r.w0.imag()}};
    j["stopping_distance"] = r.stopping_distance ? nlohmann::json(*r.stopping_distance) : nlohmann::json(nullptr);
    j["stopping_distance_sudden"] = r.stopping_distance_sudden;
    j["memory_width"] = r.memory_width;
    j["group_velocity"] = nlohmann::json::array();
    for (const auto& p : r.group_velocity) j["group_velocity"].push_back({{"tau", p.tau}, {"v_over_c", p.v_over_c}});
    if (r.residuals) j["residuals"] = to_json(*r.residuals);
    return j;
}

// ---------------------------------------------------------------------------
// Emission

/// printf("%.9e"): scientific notation, 10 significant digits.
inline std::string format_float(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9e", v);
    return buf;
}

inline std::string sha256_hex(std::string_view bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw Error("sha256 failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[md[i] >> 4]);
        out.push_back(hex[md[i] & 15]);
    }
    return out;
}

/// Long-format CSV, header `t,z,value`, rows t-outer, z-inner, LF line
/// endings. In the retarded frame the two coordinate columns hold tau, zeta.
inline std::string render_csv(const SampledData& d, const QuantityGrid& q) {
    std::string s = "t,z,value\n";
    s.reserve(s.size() + q.values.size() * 50);
    for (std::size_t m = 0; m < d.t.size(); ++m) {
        const std::string tm = format_float(d.t[m]);
        for (std::size_t k = 0; k < d.z.size(); ++k) {
            s += tm;
            s += ',';
            s += format_float(d.z[k]);
            s += ',';
            s += format_float(q.values[m * d.z.size() + k]);
            s += '\n';
        }
    }
    return s;
}

struct ManifestEntry {
    std::string name;
    std::string sha256;
    std::size_t bytes;
};

/// Files to be written, in manifest order.
using FileSet = std::vector<std::pair<std::string, std::string>>;

inline std::string dump_json(const nlohmann::json& j) { return j.dump(2) + "\n"; }

/// Writes `files` plus manifest.json into `dest`. Everything is staged in a
/// sibling temporary directory and moved into place only after all writes
/// succeed; the manifest is moved last.
inline std::vector<ManifestEntry> write_file_set(const FileSet& files, const std::filesystem::path& dest) {
    namespace fs = std::filesystem;
    std::vector<ManifestEntry> manifest;
    nlohmann::json mj;
    mj["files"] = nlohmann::json::array();
    for (const auto& [name, content] : files) {
        manifest.push_back({name, sha256_hex(content), content.size()});
        mj["files"].push_back({{"name", name}, {"sha256", manifest.back().sha256}, {"bytes", content.size()}});
    }
    const std::string manifest_text = dump_json(mj);

    const fs::path target = fs::absolute(dest);
    const fs::path staging = target.parent_path() /
                             ("." + target.filename().string() + ".tmp-" + std::to_string(::getpid()));
    std::error_code ec;
    fs::remove_all(staging, ec);
    try {
        fs::create_directories(staging);
        auto write = [&](const std::string& name, const std::string& content) {
            std::ofstream f(staging / name, std::ios::binary | std::ios::trunc);
            if (!f) throw IoError((staging / name).string(), "cannot open for writing");
            f.write(content.data(), static_cast<std::streamsize>(content.size()));
            f.close();
            if (!f) throw IoError((staging / name).string(), "write failed");
        };
        for (const auto& [name, content] : files) write(name, content);
        write("manifest.json", manifest_text);
        fs::create_directories(target);
        for (const auto& [name, content] : files) fs::rename(staging / name, target / name);
        fs::rename(staging / "manifest.json", target / "manifest.json");
        fs::remove_all(staging);
    } catch (const fs::filesystem_error& e) {
        fs::remove_all(staging, ec);
        throw IoError(e.path1().empty() ? target.string() : e.path1().string(), e.code().message());
    } catch (...) {
        fs::remove_all(staging, ec);
        throw;
    }
    manifest.push_back({"manifest.json", sha256_hex(manifest_text), manifest_text.size()});
    return manifest;
}

/// CSV grids for the requested outputs, summary.json and residuals.json when
/// asked for, then manifest.json. Returns the manifest (manifest.json last).
inline std::vector<ManifestEntry> emit_outputs(const Scenario& scn, const SampledData& data,
                                               const std::optional<SummaryReport>& summary,
                                               const std::optional<ResidualReport>& residuals,
                                               const std::filesystem::path& dest) {
    FileSet files;
    if (scn.wants(OutputKind::fields)) {
        files.emplace_back("I_a.csv", render_csv(data, data.quantity("I_a")));
        files.emplace_back("I_b.csv", render_csv(data, data.quantity("I_b")));
    }
    if (scn.wants(OutputKind::populations)) {
        for (auto name : {"P1", "P2", "P3"})
            files.emplace_back(std::string(name) + ".csv", render_csv(data, data.quantity(name)));
    }
    if (scn.wants(OutputKind::summary) && summary) files.emplace_back("summary.json", dump_json(to_json(*summary)));
    if (scn.wants(OutputKind::residuals) && residuals)
        files.emplace_back("residuals.json", dump_json(to_json(*residuals)));
    return write_file_set(files, dest);
}

} // namespace slowlight
