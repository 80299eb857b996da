#pragma once

// Command-line front end. Only parsing, validation, dispatch and serialisation live here;
// every number comes from the library calls it forwards to.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "slratio/boundary.hpp"
#include "slratio/eigensolver.hpp"
#include "slratio/errors.hpp"
#include "slratio/format.hpp"
#include "slratio/harness.hpp"
#include "slratio/oracle.hpp"
#include "slratio/potential.hpp"
#include "slratio/report_io.hpp"

namespace slratio::cli {

enum ExitCode : int { ok = 0, verification_failed = 1, usage_error = 2, numerical_failure = 3 };

/// Overrides the default integrator tolerance when --rel-tol is not given.
inline constexpr const char* rel_tol_env = "SLRATIO_REL_TOL";

enum class Command { eigs, oracle, verify, find_l0, families };
enum class OutputFormat { json, csv, table };

struct RunConfig {
    Command command = Command::eigs;
    std::string family;    // "name:p1,p2,..."
    std::string csv_path;  // alternative to family
    BoundaryCondition bc = BoundaryCondition::dirichlet;
    double ell = 1.0;
    int n_max = 10;
    double rel_tol = default_rel_tol;
    std::optional<std::size_t> grid;  // oracle coarse grid N
    OutputFormat format = OutputFormat::table;
    std::string out_path;   // empty: standard output
    std::string plot_path;  // verify only: plot-ready CSV
    Theorem theorem = Theorem::t2;
    SpectrumSource source = SpectrumSource::shooting;
    double x0 = 1.0;
    int z_count = 64;
    int l0_grid = 16;
    double slack = 1e-8;
};

inline constexpr std::size_t default_oracle_grid = 100000;
inline constexpr std::size_t default_verify_grid = 2000;

class UsageError : public Error {
public:
    using Error::Error;
};

/// Builds a potential from the `name:p1,p2,...` mini-syntax.
inline Potential parse_family(std::string_view spec) {
    const auto colon = spec.find(':');
    const std::string name(spec.substr(0, colon));
    std::vector<double> params;
    if (colon != std::string_view::npos) {
        std::string_view rest = spec.substr(colon + 1);
        while (true) {
            const auto comma = rest.find(',');
            double v = 0.0;
            if (!parse_real(rest.substr(0, comma), v))
                throw UsageError("bad parameter list in family spec \"" + std::string(spec) + "\"");
            params.push_back(v);
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
    }
    auto need = [&](std::size_t k) {
        if (params.size() != k)
            throw UsageError("family " + name + " takes " + std::to_string(k) + " parameter(s), got " +
                             std::to_string(params.size()));
    };
    if (name == "zero") {
        need(0);
        return Potential::constant(0.0);
    }
    if (name == "constant") {
        need(1);
        return Potential::constant(params[0]);
    }
    if (name == "barrier_sin") {
        need(2);
        return Potential::barrier_sin(params[0], params[1]);
    }
    if (name == "ramp") {
        need(2);
        return Potential::ramp(params[0], params[1]);
    }
    if (name == "poly") {
        if (params.empty()) throw UsageError("family poly needs at least one coefficient");
        return Potential::poly(params);
    }
    throw UsageError("unknown family \"" + name + "\" (see `families`)");
}

inline void validate(const RunConfig& c) {
    if (c.command == Command::families) return;
    if (c.family.empty() == c.csv_path.empty()) throw UsageError("give exactly one of --family or --csv");
    if (!(c.ell > 0.0 && c.ell <= 1.0)) throw UsageError("--ell must lie in (0, 1]");
    if (c.n_max < 1) throw UsageError("--n must be >= 1");
    if (!(c.rel_tol > 0.0 && c.rel_tol < 1e-2)) throw UsageError("--rel-tol must lie in (0, 1e-2)");
    if (c.grid) {
        if (*c.grid < min_fd_nodes) throw UsageError("--grid must be >= 8");
        if (4 * static_cast<std::size_t>(c.n_max) > *c.grid) throw UsageError("--grid must be >= 4 * n");
    }
    if (c.command == Command::verify) {
        if (c.theorem == Theorem::t1 && !(c.x0 > 0.0 && c.x0 <= c.ell)) throw UsageError("--x0 must lie in (0, ell]");
        if (c.z_count < 1) throw UsageError("--z-count must be >= 1");
        if (!std::isfinite(c.slack)) throw UsageError("--slack must be a finite number");
    }
    if (c.command == Command::find_l0 && c.l0_grid < 1) throw UsageError("--l0-grid must be >= 1");
}

inline Potential load_potential(const RunConfig& c) {
    Potential p = Potential::constant(0.0);
    if (!c.csv_path.empty()) {
        std::ifstream in(c.csv_path);
        if (!in) throw UsageError("cannot open " + c.csv_path);
        p = load_samples(in);
    } else {
        p = parse_family(c.family);
    }
    return p.with_domain_end(c.ell);
}

inline HarnessOptions harness_options(const RunConfig& c) {
    HarnessOptions o;
    o.slack = c.slack;
    o.source = c.source;
    o.solver.rel_tol = c.rel_tol;
    o.oracle_nodes = c.grid.value_or(default_verify_grid);
    o.l0_grid = c.l0_grid;
    return o;
}

inline void write_families(std::ostream& out) {
    out << "zero                     q(x) = 0\n"
           "constant:c               q(x) = c\n"
           "barrier_sin:a,b          q(x) = a + b sin(pi x)\n"
           "ramp:a,b                 q(x) = a + b x\n"
           "poly:c0,c1,...           q(x) = c0 + c1 x + c2 x^2 + ...\n"
           "--csv path               piecewise linear through \"x,q\" rows, x from 0 to 1\n";
}

inline void write_l0(const std::string& potential, const L0Result& r, OutputFormat f, std::ostream& out) {
    switch (f) {
        case OutputFormat::json: {
            nlohmann::ordered_json j;
            j["schema"] = "slratio.l0/1";
            j["potential"] = potential;
            j["ell0"] = r.ell0;
            j["lambda1"] = r.lambda1;
            j["threshold"] = r.threshold;
            j["gap"] = r.gap;
            out << j.dump(2) << '\n';
            break;
        }
        case OutputFormat::csv:
            out << "ell0,lambda1,threshold,gap\n"
                << format_real(r.ell0) << ',' << format_real(r.lambda1) << ',' << format_real(r.threshold) << ','
                << format_real(r.gap) << '\n';
            break;
        case OutputFormat::table:
            out << "potential  " << potential << "\nell0       " << format_real(r.ell0) << "\nlambda1    "
                << format_real(r.lambda1) << "\nthreshold  " << format_real(r.threshold) << "\ngap        "
                << format_real(r.gap) << '\n';
            break;
    }
}

/// Executes a validated configuration. Output is buffered and written only after the
/// computation finishes, so a failing run never leaves a partial document behind.
inline int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
    std::ostringstream buf;
    std::ostringstream plot;
    int status = ok;
    try {
        validate(c);
        if (c.command == Command::families) {
            write_families(buf);
        } else {
            const Potential p = load_potential(c);
            const std::string descriptor = c.csv_path.empty() ? p.describe() : "csv:" + c.csv_path;
            switch (c.command) {
                case Command::eigs:
                case Command::oracle: {
                    SpectrumOutput s{descriptor, c.bc, c.ell, {}};
                    if (c.command == Command::eigs) {
                        SolverOptions so;
                        so.rel_tol = c.rel_tol;
                        if (c.grid) so.oracle_nodes = *c.grid;
                        s.records = solve_range(p, c.n_max, c.bc, c.ell, so);
                    } else {
                        const auto lambda = refined_eigenvalues(p, c.ell, static_cast<std::size_t>(c.n_max),
                                                                c.grid.value_or(default_oracle_grid), c.bc);
                        for (std::size_t i = 0; i < lambda.size(); ++i)
                            s.records.push_back({static_cast<int>(i + 1), std::sqrt(std::max(lambda[i], 0.0)),
                                                 lambda[i], 0.0, Method::oracle});
                    }
                    if (c.format == OutputFormat::json) write_json(s, buf);
                    else if (c.format == OutputFormat::csv) write_csv(s, buf);
                    else write_table(s, buf);
                    break;
                }
                case Command::verify: {
                    VerifyRequest req{c.theorem, c.n_max, c.x0, c.z_count};
                    VerificationReport r = verify(p, req, harness_options(c));
                    if (!c.csv_path.empty()) r.potential = descriptor;
                    if (c.format == OutputFormat::json) write_json(r, buf);
                    else if (c.format == OutputFormat::csv) write_csv(r, buf);
                    else write_table(r, buf);
                    if (!c.plot_path.empty()) emit_plot_data(r, plot);
                    if (!r.pass) status = verification_failed;
                    break;
                }
                case Command::find_l0: {
                    const L0Result r = find_l0(p, c.l0_grid, harness_options(c));
                    write_l0(descriptor, r, c.format, buf);
                    break;
                }
                case Command::families:
                    break;
            }
        }
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return usage_error;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << '\n';
        return usage_error;
    } catch (const ParameterError& e) {
        err << "parameter error: " << e.what() << '\n';
        return usage_error;
    } catch (const DomainError& e) {
        err << "domain error: " << e.what() << '\n';
        return usage_error;
    } catch (const IneligiblePotential& e) {
        err << "ineligible potential: " << e.what() << '\n';
        return usage_error;
    } catch (const std::exception& e) {
        err << "numerical failure: " << e.what() << '\n';
        return numerical_failure;
    }

    auto commit = [&](const std::string& path, const std::string& text, std::ostream& fallback) {
        if (path.empty()) {
            fallback << text;
            return static_cast<bool>(fallback);
        }
        std::ofstream f(path, std::ios::binary);
        f << text;
        return static_cast<bool>(f);
    };
    if (!commit(c.out_path, buf.str(), out)) {
        err << "i/o error: cannot write " << (c.out_path.empty() ? "standard output" : c.out_path) << '\n';
        return numerical_failure;
    }
    if (!c.plot_path.empty() && c.command == Command::verify && !commit(c.plot_path, plot.str(), out)) {
        err << "i/o error: cannot write " << c.plot_path << '\n';
        return numerical_failure;
    }
    return status;
}

struct ParseOutcome {
    std::optional<RunConfig> config;  // empty: exit with `exit_code`
    int exit_code = ok;
};

/// Parses argv into a RunConfig. Help requests exit 0, malformed flags exit 2.
inline ParseOutcome parse_command_line(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig c;
    if (const char* env = std::getenv(rel_tol_env)) {
        if (!parse_real(env, c.rel_tol) || !(c.rel_tol > 0.0)) {
            err << "usage error: " << rel_tol_env << " must be a positive number\n";
            return {std::nullopt, usage_error};
        }
    }

    CLI::App app{"Sturm-Liouville eigenvalues by Pruefer shooting, with eigenvalue-ratio verification", "slratio"};
    app.require_subcommand(1);

    std::string bc_text = "dirichlet", format_text = "table", theorem_text = "t2", source_text = "shooting";
    std::size_t grid = 0;

    auto add_potential = [&](CLI::App* sub) {
        sub->add_option("--family", c.family, "potential family, e.g. barrier_sin:-5,4 (see `families`)");
        sub->add_option("--csv", c.csv_path, "sampled potential: \"x,q\" rows from x = 0 to x = 1");
        sub->add_option("--ell", c.ell, "right end point of the interval (0, 1]");
        sub->add_option("--n", c.n_max, "number of eigenvalues / largest index");
        sub->add_option("--rel-tol", c.rel_tol, std::string("integrator tolerance (env ") + rel_tol_env + ")");
        sub->add_option("--format", format_text, "json | csv | table");
        sub->add_option("--out", c.out_path, "output file (default: standard output)");
    };

    CLI::App* eigs = app.add_subcommand("eigs", "eigenvalues by Pruefer shooting");
    add_potential(eigs);
    eigs->add_option("--bc", bc_text, "dirichlet | dn");
    eigs->add_option("--grid", grid, "coarse grid for the finite-difference fallback");

    CLI::App* oracle = app.add_subcommand("oracle", "eigenvalues by Richardson-refined finite differences");
    add_potential(oracle);
    oracle->add_option("--bc", bc_text, "dirichlet | dn");
    oracle->add_option("--grid", grid, "coarse grid N (the fine grid is 2N)");

    CLI::App* ver = app.add_subcommand("verify", "check an eigenvalue-ratio theorem");
    add_potential(ver);
    ver->add_option("--theorem", theorem_text, "t1 | t2 | t3 | t4 | ab_n2 | ab_ceil | chen_floor | hk_singlewell");
    ver->add_option("--x0", c.x0, "T1: evaluation point x0");
    ver->add_option("--z-count", c.z_count, "T1: number of z samples");
    ver->add_option("--source", source_text, "spectrum source: shooting | oracle");
    ver->add_option("--grid", grid, "coarse grid N when --source oracle");
    ver->add_option("--slack", c.slack, "relative numeric slack on every inequality (negative: demand a strict margin)");
    ver->add_option("--l0-grid", c.l0_grid, "T3: initial scan points of the l0 search");
    ver->add_option("--plot", c.plot_path, "write plot-ready CSV to this file");

    CLI::App* l0 = app.add_subcommand("find-l0", "largest l with lambda_1(l) >= -2 min q on [0, l]");
    add_potential(l0);
    l0->add_option("--l0-grid", c.l0_grid, "initial scan points");
    l0->add_option("--source", source_text, "shooting | oracle");
    l0->add_option("--grid", grid, "coarse grid N when --source oracle");

    CLI::App* fam = app.add_subcommand("families", "list the potential families");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return {std::nullopt, code == 0 ? ok : usage_error};
    }

    if (eigs->parsed()) c.command = Command::eigs;
    else if (oracle->parsed()) c.command = Command::oracle;
    else if (ver->parsed()) c.command = Command::verify;
    else if (l0->parsed()) c.command = Command::find_l0;
    else if (fam->parsed()) c.command = Command::families;

    if (grid != 0) c.grid = grid;
    if (auto bc = parse_boundary_condition(bc_text)) c.bc = *bc;
    else {
        err << "usage error: unknown boundary condition \"" << bc_text << "\"\n";
        return {std::nullopt, usage_error};
    }
    if (format_text == "json") c.format = OutputFormat::json;
    else if (format_text == "csv") c.format = OutputFormat::csv;
    else if (format_text == "table") c.format = OutputFormat::table;
    else {
        err << "usage error: unknown format \"" << format_text << "\"\n";
        return {std::nullopt, usage_error};
    }
    if (auto t = parse_theorem(theorem_text)) c.theorem = *t;
    else {
        err << "usage error: unknown theorem \"" << theorem_text << "\"\n";
        return {std::nullopt, usage_error};
    }
    if (source_text == "shooting") c.source = SpectrumSource::shooting;
    else if (source_text == "oracle") c.source = SpectrumSource::oracle;
    else {
        err << "usage error: unknown spectrum source \"" << source_text << "\"\n";
        return {std::nullopt, usage_error};
    }
    return {c, ok};
}

inline int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    ParseOutcome parsed = parse_command_line(argc, argv, out, err);
    if (!parsed.config) return parsed.exit_code;
    return run(*parsed.config, out, err);
}

}  // namespace slratio::cli
