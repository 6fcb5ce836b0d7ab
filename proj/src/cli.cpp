#include "transurf/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "CLI11.hpp"
#include "json.hpp"

#include "transurf/catalog.hpp"
#include "transurf/curvature.hpp"
#include "transurf/polynomial.hpp"

namespace transurf {

namespace {

using ordered_json = nlohmann::ordered_json;

// command-level misuse that is not a flag-parser error (exit 1)
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string fmt_g(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
}

// Everything is assembled in memory and emitted in one write, so a failure
// mid-computation leaves no partial file behind.
void emit(const std::string& payload, const std::string& out_path,
          std::ostream& out) {
    if (out_path.empty()) {
        out << payload;
        return;
    }
    std::ofstream file(out_path, std::ios::binary);
    if (!file) throw UsageError("cannot open output file '" + out_path + "'");
    file << payload;
    file.flush();
    if (!file) throw UsageError("failed while writing '" + out_path + "'");
}

double parse_number_arg(const std::string& text, const std::string& flag) {
    const char* begin = text.c_str();
    char* end = nullptr;
    const double value = std::strtod(begin, &end);
    if (end == begin || *end != '\0' || !std::isfinite(value))
        throw UsageError(flag + " expects a finite number, got '" + text + "'");
    return value;
}

Bindings parse_param_overrides(const std::vector<std::string>& flags) {
    Bindings overrides;
    for (const std::string& flag : flags) {
        const auto eq = flag.find('=');
        if (eq == std::string::npos || eq == 0)
            throw UsageError("--param expects NAME=VALUE, got '" + flag + "'");
        overrides[flag.substr(0, eq)] =
            parse_number_arg(flag.substr(eq + 1), "--param " + flag.substr(0, eq));
    }
    return overrides;
}

std::string relation_text(const Relation& r) {
    switch (r.kind) {
        case Relation::Kind::KiiZero:
            return "K_II = 0";
        case Relation::Kind::DegenerateII:
            return "degenerate_II";
        case Relation::Kind::Weingarten:
        default:
            if (r.both_vanish) return "K_II = H = 0";
            return "K_II = " + fmt_g(r.lambda) + "*H";
    }
}

std::string params_text(const Bindings& params) {
    std::string text;
    for (const auto& [name, value] : params) {
        if (!text.empty()) text += ",";
        text += name + "=" + fmt_g(value);
    }
    return text;
}

struct GridSpec {
    std::vector<double> us, vs;
};

GridSpec surface_grid(const SurfaceFile& sf, int grid_override) {
    const int nu = grid_override > 0 ? grid_override : sf.nu;
    const int nv = grid_override > 0 ? grid_override : sf.nv;
    const Rect& dom = sf.surface.domain();
    return {grid_centers(dom.u_min, dom.u_max, nu),
            grid_centers(dom.v_min, dom.v_max, nv)};
}

// ---- field ----------------------------------------------------------------

int cmd_field(const std::string& path, int grid, const std::string& out_path,
              std::ostream& out, std::ostream& err) {
    const SurfaceFile sf = load_surface_file(path);
    const GridSpec g = surface_grid(sf, grid);
    const SurfaceDef& s = sf.surface;

    std::string buf = "u,v,z,E,F,G,e,f,g,K,H,K_II,H_II,nondegenerate\n";
    for (const double u : g.us) {
        for (const double v : g.vs) {
            try {
                const double z = s.eval_f(u) + s.eval_g(v);
                const FormBundle b = forms_at(s, u, v);
                const CurvatureSample c = curvature_sample(b);
                buf += fmt17(u) + "," + fmt17(v) + "," + fmt17(z) + "," +
                       fmt17(b.E) + "," + fmt17(b.F) + "," + fmt17(b.G) + "," +
                       fmt17(b.e) + "," + fmt17(b.f) + "," + fmt17(b.g) + "," +
                       fmt17(c.K) + "," + fmt17(c.H) + ",";
                buf += c.K_II ? fmt17(*c.K_II) : "nan";
                buf += ",";
                buf += c.H_II ? fmt17(*c.H_II) : "nan";
                buf += b.nondegenerate ? ",1\n" : ",0\n";
            } catch (const std::runtime_error& ex) {
                err << "error at (u=" << fmt17(u) << ", v=" << fmt17(v)
                    << "): " << ex.what() << "\n";
                return 2;
            }
        }
    }
    emit(buf, out_path, out);
    return 0;
}

// ---- mesh -----------------------------------------------------------------

int cmd_mesh(const std::string& path, int grid, const std::string& out_path,
             std::ostream& out, std::ostream& err) {
    const SurfaceFile sf = load_surface_file(path);
    const GridSpec g = surface_grid(sf, grid);
    const SurfaceDef& s = sf.surface;
    const int nu = static_cast<int>(g.us.size());
    const int nv = static_cast<int>(g.vs.size());

    std::string buf;
    for (const double u : g.us) {
        for (const double v : g.vs) {
            try {
                const double z = s.eval_f(u) + s.eval_g(v);
                if (!std::isfinite(z))
                    throw EvalError("height is not finite", "f(u) + g(v)");
                buf += "v " + fmt17(u) + " " + fmt17(v) + " " + fmt17(z) + "\n";
            } catch (const std::runtime_error& ex) {
                err << "error at (u=" << fmt17(u) << ", v=" << fmt17(v)
                    << "): " << ex.what() << "\n";
                return 2;
            }
        }
    }
    // two triangles per cell, counterclockwise as seen from +z
    const auto index = [nv](int i, int j) { return i * nv + j + 1; };
    for (int i = 0; i + 1 < nu; ++i) {
        for (int j = 0; j + 1 < nv; ++j) {
            buf += "f " + std::to_string(index(i, j)) + " " +
                   std::to_string(index(i + 1, j)) + " " +
                   std::to_string(index(i + 1, j + 1)) + "\n";
            buf += "f " + std::to_string(index(i, j)) + " " +
                   std::to_string(index(i + 1, j + 1)) + " " +
                   std::to_string(index(i, j + 1)) + "\n";
        }
    }
    emit(buf, out_path, out);
    return 0;
}

// ---- verify ---------------------------------------------------------------

std::string verify_table(const std::vector<VerifyReport>& reports) {
    char line[256];
    std::snprintf(line, sizeof line, "%-25s %-22s %-14s %5s  %12s  %-24s %s\n",
                  "name", "params", "relation", "grid", "max_residual",
                  "worst point", "status");
    std::string buf = line;
    int passed = 0;
    for (const VerifyReport& r : reports) {
        const std::string worst =
            "(" + fmt_g(r.worst_u) + ", " + fmt_g(r.worst_v) + ")";
        std::snprintf(line, sizeof line, "%-25s %-22s %-14s %5d  %12.5e  %-24s %s\n",
                      r.name.c_str(), params_text(r.params).c_str(),
                      relation_text(r.relation).c_str(), r.grid_n,
                      r.max_abs_residual, worst.c_str(),
                      r.pass ? "pass" : "FAIL");
        buf += line;
        passed += r.pass;
    }
    std::snprintf(line, sizeof line, "entries: %zu  passed: %d  failed: %d\n",
                  reports.size(), passed, static_cast<int>(reports.size()) - passed);
    buf += line;
    return buf;
}

std::string verify_json(const std::vector<VerifyReport>& reports) {
    std::string buf;
    for (const VerifyReport& r : reports) {
        ordered_json j;
        j["name"] = r.name;
        j["params"] = ordered_json::object();
        for (const auto& [name, value] : r.params) j["params"][name] = value;
        j["relation"] = relation_text(r.relation);
        j["max_residual"] = r.max_abs_residual;
        j["worst_u"] = r.worst_u;
        j["worst_v"] = r.worst_v;
        j["pass"] = r.pass;
        buf += j.dump() + "\n";
    }
    return buf;
}

int cmd_verify(bool all, const std::string& name,
               const std::vector<std::string>& param_flags, int grid, bool json,
               const std::string& out_path, std::ostream& out) {
    if (all && !param_flags.empty())
        throw UsageError("--param applies to a single --entry, not --all");
    const Bindings overrides = parse_param_overrides(param_flags);

    std::vector<const CatalogEntry*> selected;
    if (all) {
        for (const CatalogEntry& e : catalog_entries()) selected.push_back(&e);
    } else {
        const CatalogEntry* e = find_entry(name);
        if (e == nullptr) throw UsageError("unknown entry '" + name + "'");
        selected.push_back(e);
    }

    std::vector<VerifyReport> reports;
    reports.reserve(selected.size());
    for (const CatalogEntry* e : selected)
        reports.push_back(verify_entry(*e, overrides, grid));

    emit(json ? verify_json(reports) : verify_table(reports), out_path, out);
    for (const VerifyReport& r : reports)
        if (!r.pass) return 3;
    return 0;
}

// ---- polyscan -------------------------------------------------------------

std::string rational_text(const Rational& r) {
    std::ostringstream os;
    os << r;
    return os.str();
}

std::string monomial_text(std::pair<int, int> degrees) {
    return "u^" + std::to_string(degrees.first) + "*v^" +
           std::to_string(degrees.second);
}

int cmd_polyscan(int max_m, int max_n, int draws, unsigned long long seed,
                 bool json, const std::string& out_path, std::ostream& out) {
    const Theorem1Report report = theorem1_scan(max_m, max_n, draws,
                                                static_cast<std::uint64_t>(seed));
    std::string buf;
    int zeros = 0;
    if (json) {
        for (const Theorem1Row& row : report.rows) {
            ordered_json j;
            j["m"] = row.m;
            j["n"] = row.n;
            j["draw"] = row.draw;
            j["status"] = row.nonzero ? "ok" : "zero";
            j["witness_u"] = row.witness.first;
            j["witness_v"] = row.witness.second;
            j["coeff"] = rational_text(row.coeff);
            buf += j.dump() + "\n";
            zeros += !row.nonzero;
        }
    } else {
        char line[160];
        std::snprintf(line, sizeof line, "%4s %4s %5s  %-6s %-12s %s\n", "m",
                      "n", "draw", "status", "witness", "coeff");
        buf = line;
        for (const Theorem1Row& row : report.rows) {
            std::snprintf(line, sizeof line, "%4d %4d %5d  %-6s %-12s %s\n",
                          row.m, row.n, row.draw, row.nonzero ? "ok" : "zero",
                          monomial_text(row.witness).c_str(),
                          rational_text(row.coeff).c_str());
            buf += line;
            zeros += !row.nonzero;
        }
        std::snprintf(line, sizeof line,
                      "combinations: %zu  zero numerators: %d\n",
                      report.rows.size(), zeros);
        buf += line;
    }
    emit(buf, out_path, out);
    return report.all_nonzero ? 0 : 3;
}

// ---- powerscan ------------------------------------------------------------

int cmd_powerscan(int exp_den, int exp_max, int coeff_max, bool json,
                  const std::string& out_path, std::ostream& out) {
    const std::vector<Rational> exponents = exponent_grid(exp_den, exp_max);
    const std::vector<Rational> coeffs = coefficient_grid(coeff_max);
    const std::vector<PowerSolution> solutions = power_scan(exponents, coeffs);

    // the full solution family restricted to the searched grid
    using Key = std::tuple<Rational, Rational, Rational, Rational>;
    std::set<Key> expected;
    const Rational third(1, 3);
    const bool third_in_grid =
        std::find(exponents.begin(), exponents.end(), third) != exponents.end();
    if (third_in_grid)
        for (const Rational& a : coeffs) {
            if (a == 0) continue;
            if (std::find(coeffs.begin(), coeffs.end(), -a) == coeffs.end())
                continue;
            expected.insert({third, third, a, -a});
        }
    std::set<Key> found;
    for (const PowerSolution& s : solutions)
        found.insert({s.p, s.q, s.a, s.b});

    std::string buf;
    for (const PowerSolution& s : solutions) {
        if (json) {
            ordered_json j;
            j["p"] = rational_text(s.p);
            j["q"] = rational_text(s.q);
            j["a"] = rational_text(s.a);
            j["b"] = rational_text(s.b);
            buf += j.dump() + "\n";
        } else {
            buf += "p=" + rational_text(s.p) + "  q=" + rational_text(s.q) +
                   "  a=" + rational_text(s.a) + "  b=" + rational_text(s.b) +
                   "\n";
        }
    }
    if (!json)
        buf += "solutions: " + std::to_string(solutions.size()) + "\n";
    emit(buf, out_path, out);
    return found == expected ? 0 : 3;
}

}  // namespace

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"fundamental-form geometry of translation surfaces z = f(u) + g(v)"};
    app.name("transurf");
    app.require_subcommand(1);

    std::string field_file, field_out;
    int field_grid = 0;
    CLI::App* field = app.add_subcommand("field", "sample curvatures on a grid to CSV");
    field->add_option("surface", field_file, "surface definition file")->required();
    field->add_option("--grid", field_grid, "override grid to N x N")
        ->check(CLI::Range(2, 100000));
    field->add_option("--out", field_out, "output path (default stdout)");

    std::string mesh_file, mesh_out;
    int mesh_grid = 0;
    CLI::App* mesh = app.add_subcommand("mesh", "export the graph as a Wavefront OBJ mesh");
    mesh->add_option("surface", mesh_file, "surface definition file")->required();
    mesh->add_option("--grid", mesh_grid, "override grid to N x N")
        ->check(CLI::Range(2, 100000));
    mesh->add_option("--out", mesh_out, "output path (default stdout)");

    std::string verify_entry_name, verify_out;
    std::vector<std::string> verify_params;
    int verify_grid = 40;
    bool verify_all = false, verify_json_flag = false;
    CLI::App* verify = app.add_subcommand("verify", "check catalog surfaces against their curvature relations");
    CLI::Option* entry_opt =
        verify->add_option("--entry", verify_entry_name, "catalog entry name");
    verify->add_flag("--all", verify_all, "verify every catalog entry");
    entry_opt->excludes("--all");
    verify->add_option("--param", verify_params, "override NAME=VALUE (repeatable)");
    verify->add_option("--grid", verify_grid, "verification grid N x N")
        ->check(CLI::Range(1, 100000));
    verify->add_flag("--json", verify_json_flag, "JSON-lines report");
    verify->add_option("--out", verify_out, "output path (default stdout)");

    int scan_max_m = 6, scan_max_n = 6, scan_draws = 100;
    unsigned long long scan_seed = 42;
    bool scan_json = false;
    std::string scan_out;
    CLI::App* polyscan = app.add_subcommand("polyscan", "scan polynomial surfaces for a vanishing K_II numerator");
    polyscan->add_option("--max-m", scan_max_m, "largest degree of f'")
        ->check(CLI::Range(1, 64));
    polyscan->add_option("--max-n", scan_max_n, "largest degree of g'")
        ->check(CLI::Range(1, 64));
    polyscan->add_option("--draws", scan_draws, "random draws per degree pair")
        ->check(CLI::Range(1, 1000000));
    polyscan->add_option("--seed", scan_seed, "random seed");
    polyscan->add_flag("--json", scan_json, "JSON-lines report");
    polyscan->add_option("--out", scan_out, "output path (default stdout)");

    int power_exp_den = 6, power_exp_max = 12, power_coeff_max = 2;
    bool power_json = false;
    std::string power_out;
    CLI::App* powerscan = app.add_subcommand("powerscan", "search power surfaces a*u^p + b*v^q with K_II = 0");
    powerscan->add_option("--exp-den", power_exp_den, "exponent grid denominator")
        ->check(CLI::Range(1, 1000));
    powerscan->add_option("--exp-max", power_exp_max, "largest exponent numerator")
        ->check(CLI::Range(1, 1000));
    powerscan->add_option("--coeff-max", power_coeff_max, "largest |coefficient|")
        ->check(CLI::Range(1, 1000));
    powerscan->add_flag("--json", power_json, "JSON-lines report");
    powerscan->add_option("--out", power_out, "output path (default stdout)");

    std::vector<std::string> argv_storage;
    argv_storage.reserve(args.size() + 1);
    argv_storage.push_back("transurf");
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    argv.reserve(argv_storage.size());
    for (const std::string& s : argv_storage) argv.push_back(s.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);  // prints help, exits 0
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return 1;
    }

    try {
        if (field->parsed())
            return cmd_field(field_file, field_grid, field_out, out, err);
        if (mesh->parsed())
            return cmd_mesh(mesh_file, mesh_grid, mesh_out, out, err);
        if (verify->parsed()) {
            if (!verify_all && verify_entry_name.empty())
                throw UsageError("verify needs --entry NAME or --all");
            return cmd_verify(verify_all, verify_entry_name, verify_params,
                              verify_grid, verify_json_flag, verify_out, out);
        }
        if (polyscan->parsed())
            return cmd_polyscan(scan_max_m, scan_max_n, scan_draws, scan_seed,
                                scan_json, scan_out, out);
        if (powerscan->parsed())
            return cmd_powerscan(power_exp_den, power_exp_max, power_coeff_max,
                                 power_json, power_out, out);
        throw UsageError("no command given");
    } catch (const UsageError& ex) {
        err << "error: " << ex.what() << "\n";
        return 1;
    } catch (const FileFormatError& ex) {
        err << "error: " << ex.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& ex) {
        err << "error: " << ex.what() << "\n";
        return 1;
    } catch (const OutOfDomainError& ex) {
        err << "error: " << ex.what() << "\n";
        return 2;
    } catch (const EvalError& ex) {
        err << "error: " << ex.what() << "\n";
        return 2;
    } catch (const UndefinedCurvatureError& ex) {
        err << "error: " << ex.what() << "\n";
        return 2;
    }
}

}  // namespace transurf
