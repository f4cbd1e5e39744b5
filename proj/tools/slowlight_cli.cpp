// slowlight: exact / simulate / verify / summary.
//
// Exit codes: 0 ok, 1 verification or numerical failure, 2 bad
// configuration, 3 I/O failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "slowlight/scenario.hpp"
#include "slowlight/verify.hpp"

namespace fs = std::filesystem;
using namespace slowlight;

namespace {

struct Options {
    std::string scenario;
    std::string out = "slowlight-out";
    std::vector<std::string> sets;
    std::string frame;
};

Scenario load(const Options& o) {
    nlohmann::json doc = nlohmann::json::object();
    if (!o.scenario.empty()) {
        std::ifstream f(o.scenario, std::ios::binary);
        if (!f) throw IoError(o.scenario, "cannot open scenario");
        std::stringstream ss;
        ss << f.rdbuf();
        try {
            doc = nlohmann::json::parse(ss.str());
        } catch (const nlohmann::json::parse_error& e) {
            throw SchemaError(o.scenario, std::string("malformed JSON: ") + e.what());
        }
    }
    for (const auto& s : o.sets) apply_override(doc, s);
    if (!o.frame.empty()) doc["frame"] = o.frame;
    return parse_scenario_document(doc);
}

void report(const std::vector<ManifestEntry>& manifest, const fs::path& out) {
    for (const auto& e : manifest) std::cout << (out / e.name).string() << "  " << e.sha256 << "\n";
}

int run_emit(const Options& o, Source source) {
    const Scenario scn = load(o);
    const SampledData data = sample(scn, source);
    std::optional<SummaryReport> summary;
    if (scn.wants(OutputKind::summary)) summary = make_summary(scn);
    std::optional<ResidualReport> res;
    if (scn.wants(OutputKind::residuals)) {
        ResidualOptions ro;
        if (scn.grid.tau_min < 0.0 && scn.grid.tau_max > 0.0 && scn.control.alpha > 0.0) ro.tau_breaks = {0.0};
        res = residual(data.retarded, scn.medium, ro);
        if (summary) summary->residuals = res;
    }
    report(emit_outputs(scn, data, summary, res, o.out), o.out);
    return 0;
}

int run_summary(const Options& o) {
    const Scenario scn = load(o);
    const SummaryReport s = make_summary(scn);
    report(write_file_set({{"summary.json", dump_json(to_json(s))}}, o.out), o.out);
    return 0;
}

int run_verify(const Options& o) {
    const Scenario scn = load(o);
    const VerifyReport rep = run_verification(scn);
    for (const auto& c : rep.checks)
        std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << " = " << format_float(c.value)
                  << " (tolerance " << format_float(c.tolerance) << ")\n";
    report(write_file_set({{"verify.json", dump_json(to_json(rep))}}, o.out), o.out);
    return rep.passed() ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Soliton stopping in a Lambda medium: exact solution and Maxwell-Bloch integration"};
    app.require_subcommand(1);
    Options o;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--scenario", o.scenario, "scenario JSON (defaults apply when omitted)");
        sub->add_option("--out", o.out, "output directory")->capture_default_str();
        sub->add_option("--set", o.sets, "override, e.g. control.alpha=0.5 (repeatable)");
        sub->add_option("--frame", o.frame, "output frame")->check(CLI::IsMember({"retarded", "lab"}));
    };
    auto* exact = app.add_subcommand("exact", "sample the exact solution");
    auto* simulate = app.add_subcommand("simulate", "integrate from exact boundary data");
    auto* verify = app.add_subcommand("verify", "run self-checks; exit 1 on failure");
    auto* summary = app.add_subcommand("summary", "write summary.json only");
    for (auto* s : {exact, simulate, verify, summary}) add_common(s);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*exact) return run_emit(o, Source::exact);
        if (*simulate) return run_emit(o, Source::numeric);
        if (*verify) return run_verify(o);
        return run_summary(o);
    } catch (const IoError& e) {
        std::cerr << "slowlight: I/O error: " << e.what() << "\n";
        return 3;
    } catch (const SchemaError& e) {
        std::cerr << "slowlight: configuration error at " << e.path() << ": " << e.what() << "\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "slowlight: configuration error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "slowlight: configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "slowlight: " << e.what() << "\n";
        return 1;
    }
}
