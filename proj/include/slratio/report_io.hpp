#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "slratio/eigensolver.hpp"
#include "slratio/format.hpp"
#include "slratio/harness.hpp"

namespace slratio {

inline constexpr const char* report_schema = "slratio.report/1";
inline constexpr const char* spectrum_schema = "slratio.spectrum/1";

inline nlohmann::ordered_json to_json(const VerificationReport& r) {
    using nlohmann::ordered_json;
    ordered_json j;
    j["schema"] = report_schema;
    j["theorem"] = std::string(to_string(r.theorem));
    j["potential"] = r.potential;
    j["ell"] = r.ell;
    if (r.x0) j["x0"] = *r.x0;
    j["sense"] = r.sense() == Sense::lower ? "lower" : "upper";
    ordered_json checks = ordered_json::array();
    for (const Check& c : r.checks) {
        ordered_json e;
        if (c.z) {
            e["z"] = *c.z;
        } else {
            e["m"] = c.m;
            e["n"] = c.n;
        }
        e["lhs"] = c.lhs;
        e["rhs"] = c.rhs;
        e["margin"] = c.margin;
        checks.push_back(std::move(e));
    }
    j["checks"] = std::move(checks);
    ordered_json inel = ordered_json::array();
    for (const IndexPair& p : r.ineligible) inel.push_back({{"m", p.m}, {"n", p.n}});
    j["ineligible"] = std::move(inel);
    j["eligible_count"] = r.eligible_count;
    j["pass"] = r.pass;
    j["tolerances"] = {
        {"slack", r.tolerances.slack},
        {"slack_scale", "max(1,|bound|)"},
        {"rel_tol", r.tolerances.rel_tol},
        {"eligibility_threshold", r.tolerances.eligibility_threshold},
        {"spectrum_source", std::string(to_string(r.tolerances.source))},
    };
    if (r.l0)
        j["l0"] = {{"ell0", r.l0->ell0}, {"lambda1", r.l0->lambda1}, {"threshold", r.l0->threshold},
                   {"gap", r.l0->gap}};
    return j;
}

/// Inverse of to_json. Throws ParseError on schema mismatch or missing fields.
inline VerificationReport report_from_json(const nlohmann::json& j) {
    try {
        if (j.at("schema").get<std::string>() != report_schema) throw ParseError(0, "unsupported report schema");
        VerificationReport r;
        const auto t = parse_theorem(j.at("theorem").get<std::string>());
        if (!t) throw ParseError(0, "unknown theorem id");
        r.theorem = *t;
        r.potential = j.at("potential").get<std::string>();
        r.ell = j.at("ell").get<double>();
        if (j.contains("x0")) r.x0 = j.at("x0").get<double>();
        for (const auto& e : j.at("checks")) {
            Check c;
            if (e.contains("z")) {
                c.z = e.at("z").get<double>();
            } else {
                c.m = e.at("m").get<int>();
                c.n = e.at("n").get<int>();
            }
            c.lhs = e.at("lhs").get<double>();
            c.rhs = e.at("rhs").get<double>();
            c.margin = e.at("margin").get<double>();
            r.checks.push_back(c);
        }
        for (const auto& e : j.at("ineligible")) r.ineligible.push_back({e.at("m").get<int>(), e.at("n").get<int>()});
        r.eligible_count = j.at("eligible_count").get<int>();
        r.pass = j.at("pass").get<bool>();
        const auto& tol = j.at("tolerances");
        r.tolerances.slack = tol.at("slack").get<double>();
        r.tolerances.rel_tol = tol.at("rel_tol").get<double>();
        r.tolerances.eligibility_threshold = tol.at("eligibility_threshold").get<double>();
        r.tolerances.source =
            tol.at("spectrum_source").get<std::string>() == "oracle" ? SpectrumSource::oracle : SpectrumSource::shooting;
        if (j.contains("l0")) {
            const auto& l = j.at("l0");
            r.l0 = L0Result{l.at("ell0").get<double>(), l.at("lambda1").get<double>(),
                            l.at("threshold").get<double>(), l.at("gap").get<double>()};
        }
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(0, std::string("malformed report: ") + e.what());
    }
}

inline void write_json(const VerificationReport& r, std::ostream& out) { out << to_json(r).dump(2) << '\n'; }

/// One row per check. T1: z,lhs,rhs,margin,pass. Ratio theorems: m,n,lhs,rhs,margin,pass.
inline void write_csv(const VerificationReport& r, std::ostream& out) {
    const bool t1 = r.theorem == Theorem::t1;
    out << (t1 ? "z,lhs,rhs,margin,pass\n" : "m,n,lhs,rhs,margin,pass\n");
    for (const Check& c : r.checks) {
        if (t1)
            out << format_real(c.z.value_or(0.0));
        else
            out << c.m << ',' << c.n;
        out << ',' << format_real(c.lhs) << ',' << format_real(c.rhs) << ',' << format_real(c.margin) << ','
            << (check_passes(c, r.sense(), r.tolerances.slack) ? 1 : 0) << '\n';
    }
}

/// Plot-ready table. T1: z,theta_dot. Ratio theorems: m,n,ratio,bound,margin.
inline void emit_plot_data(const VerificationReport& r, std::ostream& out) {
    const Sense s = r.sense();
    if (r.theorem == Theorem::t1) {
        out << "z,theta_dot\n";
        for (const Check& c : r.checks) out << format_real(c.z.value_or(0.0)) << ',' << format_real(c.rhs) << '\n';
    } else {
        out << "m,n,ratio,bound,margin\n";
        for (const Check& c : r.checks)
            out << c.m << ',' << c.n << ',' << format_real(value_of(c, s)) << ',' << format_real(bound_of(c, s)) << ','
                << format_real(c.margin) << '\n';
    }
    if (!out) throw Error("write failure while emitting plot data");
}

/// Spectrum serialisation used by the `eigs` and `oracle` commands.
struct SpectrumOutput {
    std::string potential;
    BoundaryCondition bc = BoundaryCondition::dirichlet;
    double ell = 1.0;
    std::vector<EigenvalueRecord> records;
};

inline nlohmann::ordered_json to_json(const SpectrumOutput& s) {
    nlohmann::ordered_json j;
    j["schema"] = spectrum_schema;
    j["potential"] = s.potential;
    j["bc"] = std::string(to_string(s.bc));
    j["ell"] = s.ell;
    auto arr = nlohmann::ordered_json::array();
    for (const auto& r : s.records)
        arr.push_back({{"n", r.n},
                       {"z", r.z},
                       {"lambda", r.lambda},
                       {"residual", r.residual},
                       {"method", std::string(to_string(r.method))}});
    j["eigenvalues"] = std::move(arr);
    return j;
}

inline void write_json(const SpectrumOutput& s, std::ostream& out) { out << to_json(s).dump(2) << '\n'; }

inline void write_csv(const SpectrumOutput& s, std::ostream& out) {
    out << "n,z,lambda,residual,method\n";
    for (const auto& r : s.records)
        out << r.n << ',' << format_real(r.z) << ',' << format_real(r.lambda) << ',' << format_real(r.residual) << ','
            << to_string(r.method) << '\n';
}

inline void write_table(const SpectrumOutput& s, std::ostream& out) {
    out << "# potential " << s.potential << "  bc " << to_string(s.bc) << "  ell " << format_real(s.ell) << '\n';
    char line[160];
    std::snprintf(line, sizeof line, "%4s  %24s  %24s  %10s  %s\n", "n", "lambda", "z", "residual", "method");
    out << line;
    for (const auto& r : s.records) {
        std::snprintf(line, sizeof line, "%4d  %24.16e  %24.16e  %10.3e  %s\n", r.n, r.lambda, r.z, r.residual,
                      std::string(to_string(r.method)).c_str());
        out << line;
    }
}

inline void write_table(const VerificationReport& r, std::ostream& out) {
    out << "# " << to_string(r.theorem) << "  potential " << r.potential << "  ell " << format_real(r.ell)
        << "  eligible " << r.eligible_count << "  ineligible " << r.ineligible.size() << "  "
        << (r.pass ? "PASS" : "FAIL") << '\n';
    char line[160];
    const Sense s = r.sense();
    if (r.theorem == Theorem::t1) {
        std::snprintf(line, sizeof line, "%24s  %24s\n", "z", "theta_dot");
        out << line;
        for (const Check& c : r.checks) {
            std::snprintf(line, sizeof line, "%24.16e  %24.16e\n", c.z.value_or(0.0), c.rhs);
            out << line;
        }
        return;
    }
    std::snprintf(line, sizeof line, "%4s %4s  %24s  %24s  %12s\n", "m", "n", "ratio", "bound", "margin");
    out << line;
    for (const Check& c : r.checks) {
        std::snprintf(line, sizeof line, "%4d %4d  %24.16e  %24.16e  %12.4e\n", c.m, c.n, value_of(c, s),
                      bound_of(c, s), c.margin);
        out << line;
    }
}

}  // namespace slratio
