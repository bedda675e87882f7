// hyperfund command-line interface: solve, identities, residual, tail, tlin.
//
// A run is described by a RunConfig assembled from (in increasing priority)
// built-in defaults, an optional --config JSON document, and command-line
// flags. All numeric settings end up in the output metadata so a run can be
// reproduced byte-for-byte from its artifacts.

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hyperfund/io.hpp"
#include "hyperfund/tails.hpp"
#include "hyperfund/transform.hpp"
#include "hyperfund/verify.hpp"

using namespace hyperfund;
using kernels::MassSign;
using kernels::OperatorFamily;
using nlohmann::json;
using wavecore::SourceFamily;

namespace {

struct RunConfig {
    std::string family = "desitter";
    double mass = 1.0;
    double k = 1.0;
    int m_int = 1;
    std::string mass_sign = "large";

    std::string source = "const1";
    std::string phi0;
    std::string phi1;
    bool weighted = false;
    double t0 = 0.0;

    Grid grid{-1.0, 1.0, 5, 0.0, 2.0, 5};
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    int max_depth = 48;
    std::string endpoint_mode = "plain";
    int threads = 0;

    int id_n = 10;
    double id_tol = 1e-6;

    double stencil_h = 0.05;
    double residual_tol = 1e-3;

    double tlin_a = 0.75;
    double tlin_b = 0.75;
    double tlin_c0 = 1.0;
    double tlin_c1 = 0.0;
    double tlin_t_min = 0.5;
    double tlin_t_split = 2.0;
    double tlin_t_max = 4.0;
    int tlin_nt = 8;
    int tlin_nx = 7;

    std::string out = "-";
    std::string format = "csv";
};

OperatorFamily make_family(const RunConfig& cfg) {
    const std::string& f = cfg.family;
    if (f == "klein-gordon") return OperatorFamily::klein_gordon(cfg.mass);
    if (f == "klein-gordon-imag")
        return OperatorFamily::klein_gordon_imag(cfg.mass);
    if (f == "tricomi") return OperatorFamily::tricomi(cfg.k);
    if (f == "desitter") return OperatorFamily::de_sitter();
    if (f == "anti-desitter") return OperatorFamily::anti_de_sitter();
    if (f == "edes") return OperatorFamily::einstein_de_sitter(cfg.m_int);
    if (f == "desitter-kg") {
        if (cfg.mass_sign == "large")
            return OperatorFamily::de_sitter_kg(cfg.mass, MassSign::Large);
        if (cfg.mass_sign == "small")
            return OperatorFamily::de_sitter_kg(cfg.mass, MassSign::Small);
        throw ConfigError("mass-sign must be 'large' or 'small', got '" +
                          cfg.mass_sign + "'");
    }
    throw ConfigError(
        "unknown family '" + f +
        "' (expected klein-gordon, klein-gordon-imag, tricomi, desitter, "
        "anti-desitter, edes, desitter-kg)");
}

quad::QuadratureSpec make_quad(const RunConfig& cfg) {
    quad::QuadratureSpec spec;
    spec.rel_tol = cfg.rel_tol;
    spec.abs_tol = cfg.abs_tol;
    spec.max_depth = cfg.max_depth;
    if (cfg.endpoint_mode == "plain")
        spec.endpoint_mode = quad::EndpointMode::Plain;
    else if (cfg.endpoint_mode == "singular-endpoint-substitution")
        spec.endpoint_mode = quad::EndpointMode::SingularEndpointSubstitution;
    else
        throw ConfigError("endpoint-mode must be 'plain' or "
                          "'singular-endpoint-substitution'");
    if (!(spec.rel_tol > 0.0) || !(spec.abs_tol > 0.0) || spec.max_depth < 1)
        throw ConfigError("quadrature tolerances must be positive, max-depth >= 1");
    return spec;
}

std::vector<double> parse_numbers(const std::string& list,
                                  const std::string& what) {
    std::vector<double> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stod(item));
        } catch (...) {
            throw ConfigError("bad number '" + item + "' in " + what);
        }
    }
    return out;
}

Profile make_profile(const std::string& spec_str, const std::string& field) {
    if (spec_str.empty() || spec_str == "zero") return Profile::zero();
    const auto colon = spec_str.find(':');
    const std::string head = spec_str.substr(0, colon);
    const std::string args =
        colon == std::string::npos ? "" : spec_str.substr(colon + 1);
    if (head == "heaviside") return Profile::heaviside();
    if (head == "gaussian") {
        if (args.empty()) return Profile::gaussian(0.0, 1.0);
        const auto v = parse_numbers(args, field);
        if (v.size() != 2)
            throw ConfigError(field + ": gaussian takes center,width");
        return Profile::gaussian(v[0], v[1]);
    }
    if (head == "powerlaw") {
        const auto v = parse_numbers(args, field);
        if (v.empty() || v.size() > 2)
            throw ConfigError(field + ": powerlaw takes exponent[,coefficient]");
        return Profile::power_law(v[0], v.size() == 2 ? v[1] : 1.0);
    }
    if (head == "poly") {
        const auto v = parse_numbers(args, field);
        if (v.empty()) throw ConfigError(field + ": poly needs coefficients");
        return Profile::polynomial(v);
    }
    throw ConfigError(field + ": unknown profile '" + head +
                      "' (zero, heaviside, gaussian[:c,w], powerlaw:a[,C], "
                      "poly:c0,c1,...)");
}

SourceFamily make_source(const std::string& name) {
    if (name == "const1") return SourceFamily::constant(1.0);
    if (name.rfind("const:", 0) == 0)
        return SourceFamily::constant(std::stod(name.substr(6)));
    if (name == "linear-t")
        return SourceFamily::from_1d([](double, double t) { return t; });
    if (name == "sin-t")
        return SourceFamily::from_1d([](double, double t) { return std::sin(t); });
    if (name == "gaussian")
        return SourceFamily::from_1d(
            [](double x, double) { return std::exp(-x * x); });
    if (name == "gaussian-t")
        return SourceFamily::from_1d(
            [](double x, double t) { return std::exp(-x * x) * (1.0 + t); });
    throw ConfigError("unknown source '" + name +
                      "' (const1, const:<v>, linear-t, sin-t, gaussian, "
                      "gaussian-t)");
}

json metadata_json(const RunConfig& cfg, const std::string& command) {
    json meta;
    meta["command"] = command;
    meta["family"] = {{"name", cfg.family},    {"mass", cfg.mass},
                      {"k", cfg.k},            {"m_int", cfg.m_int},
                      {"mass_sign", cfg.mass_sign}};
    meta["quad"] = {{"rel_tol", cfg.rel_tol},
                    {"abs_tol", cfg.abs_tol},
                    {"max_depth", cfg.max_depth},
                    {"endpoint_mode", cfg.endpoint_mode}};
    meta["grid"] = {{"x_min", cfg.grid.x_min}, {"x_max", cfg.grid.x_max},
                    {"nx", cfg.grid.nx},       {"t_min", cfg.grid.t_min},
                    {"t_max", cfg.grid.t_max}, {"nt", cfg.grid.nt}};
    meta["threads"] = resolve_threads(cfg.threads);
    meta["seed"] = nullptr; // no sampling in CLI pipelines
    return meta;
}

class OutputSink {
public:
    explicit OutputSink(const std::string& path) {
        if (path != "-") {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw ConfigError("cannot open output path '" + path + "'");
        }
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

void apply_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    json doc;
    try {
        in >> doc;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    auto get = [&](const json& j, const char* key, auto& field) {
        if (j.contains(key)) j.at(key).get_to(field);
    };
    if (doc.contains("family") && doc["family"].is_object()) {
        const auto& f = doc["family"];
        get(f, "name", cfg.family);
        get(f, "mass", cfg.mass);
        get(f, "k", cfg.k);
        get(f, "m_int", cfg.m_int);
        get(f, "mass_sign", cfg.mass_sign);
    } else if (doc.contains("family")) {
        doc.at("family").get_to(cfg.family);
    }
    if (doc.contains("grid")) {
        const auto& g = doc["grid"];
        get(g, "x_min", cfg.grid.x_min);
        get(g, "x_max", cfg.grid.x_max);
        get(g, "nx", cfg.grid.nx);
        get(g, "t_min", cfg.grid.t_min);
        get(g, "t_max", cfg.grid.t_max);
        get(g, "nt", cfg.grid.nt);
    }
    if (doc.contains("quad")) {
        const auto& q = doc["quad"];
        get(q, "rel_tol", cfg.rel_tol);
        get(q, "abs_tol", cfg.abs_tol);
        get(q, "max_depth", cfg.max_depth);
        get(q, "endpoint_mode", cfg.endpoint_mode);
    }
    get(doc, "source", cfg.source);
    get(doc, "phi0", cfg.phi0);
    get(doc, "phi1", cfg.phi1);
    get(doc, "weighted", cfg.weighted);
    get(doc, "t0", cfg.t0);
    get(doc, "threads", cfg.threads);
    get(doc, "out", cfg.out);
    get(doc, "format", cfg.format);
    get(doc, "id_n", cfg.id_n);
    get(doc, "id_tol", cfg.id_tol);
    get(doc, "stencil_h", cfg.stencil_h);
    get(doc, "residual_tol", cfg.residual_tol);
    get(doc, "tlin_a", cfg.tlin_a);
    get(doc, "tlin_b", cfg.tlin_b);
    get(doc, "tlin_c0", cfg.tlin_c0);
    get(doc, "tlin_c1", cfg.tlin_c1);
    get(doc, "tlin_t_min", cfg.tlin_t_min);
    get(doc, "tlin_t_split", cfg.tlin_t_split);
    get(doc, "tlin_t_max", cfg.tlin_t_max);
    get(doc, "tlin_nt", cfg.tlin_nt);
    get(doc, "tlin_nx", cfg.tlin_nx);
}

void validate_grid(const RunConfig& cfg) {
    if (cfg.grid.nx < 2 || cfg.grid.nt < 2)
        throw ConfigError("grid: nx and nt must be >= 2");
    if (!(cfg.grid.x_max > cfg.grid.x_min) || !(cfg.grid.t_max > cfg.grid.t_min))
        throw ConfigError("grid: empty extent");
}

int run_solve(const RunConfig& cfg) {
    validate_grid(cfg);
    const auto spec = make_quad(cfg);
    OutputSink sink(cfg.out);
    SolutionField field;
    std::string warning;
    if (!cfg.phi0.empty() || !cfg.phi1.empty()) {
        if (cfg.family != "desitter")
            throw ConfigError("profile data (phi0/phi1) solve only the "
                              "de Sitter Cauchy problem; use --family desitter");
        const auto p0 = make_profile(cfg.phi0, "phi0");
        const auto p1 = make_profile(cfg.phi1, "phi1");
        field = transform::solve_desitter_cauchy(p0, p1, cfg.grid, spec,
                                                 cfg.threads);
    } else if (cfg.weighted) {
        if (cfg.family != "edes")
            throw ConfigError("--weighted applies to --family edes only");
        field = transform::solve_edes_weighted(make_source(cfg.source), cfg.grid,
                                               spec, cfg.threads, 1.0, &warning);
    } else {
        field = transform::solve_source_problem(make_family(cfg),
                                                make_source(cfg.source),
                                                cfg.grid, spec, cfg.t0,
                                                cfg.threads);
    }
    if (!warning.empty()) std::cerr << "warning: " << warning << "\n";
    if (cfg.format == "csv") {
        io::write_solution_csv(sink.stream(), field, "solve");
    } else {
        json out = io::solution_to_json(field, "solve");
        out["metadata"] = metadata_json(cfg, "solve");
        sink.stream() << out.dump(2) << "\n";
    }
    return 0;
}

int run_identities(const RunConfig& cfg) {
    const auto fam = make_family(cfg);
    const auto spec = make_quad(cfg).tightened(0.01);
    const auto report = verify::identity_residual_grid(
        fam, cfg.grid.t_max, cfg.id_n, spec, cfg.id_tol);
    OutputSink sink(cfg.out);
    if (cfg.format == "csv") {
        io::write_residual_csv(sink.stream(), report);
    } else {
        json out = io::residual_to_json(report);
        out["metadata"] = metadata_json(cfg, "identities");
        sink.stream() << out.dump(2) << "\n";
    }
    std::cerr << "identities " << fam.name() << ": max residual "
              << report.max_abs << " (tol " << report.tolerance_used << ") -> "
              << report.verdict() << "\n";
    return report.pass() ? 0 : 1;
}

int run_residual(const RunConfig& cfg) {
    validate_grid(cfg);
    const auto spec = make_quad(cfg).tightened(0.01);
    const auto src = make_source(cfg.source);
    SolutionField field;
    if (cfg.weighted) {
        if (cfg.family != "edes")
            throw ConfigError("--weighted applies to --family edes only");
        field = transform::solve_edes_weighted(src, cfg.grid, spec, cfg.threads);
    } else {
        field = transform::solve_source_problem(make_family(cfg), src, cfg.grid,
                                                spec, cfg.t0, cfg.threads);
    }
    // interior probes, clear of degenerate time boundaries
    const double t_lo =
        std::max(cfg.grid.t_min + 2 * cfg.stencil_h,
                 field.family.time_min() == 0.0 ? 0.05 + 2 * cfg.stencil_h
                                                : cfg.grid.t_min + 2 * cfg.stencil_h);
    std::vector<double> probe_t;
    for (double t : field.grid_t)
        if (t >= t_lo && t <= cfg.grid.t_max - 2 * cfg.stencil_h)
            probe_t.push_back(t);
    if (probe_t.empty()) probe_t.push_back(0.5 * (t_lo + cfg.grid.t_max));
    std::vector<double> probe_x;
    for (double x : field.grid_x)
        if (x >= cfg.grid.x_min + 2 * cfg.stencil_h &&
            x <= cfg.grid.x_max - 2 * cfg.stencil_h)
            probe_x.push_back(x);
    if (probe_x.empty())
        probe_x.push_back(0.5 * (cfg.grid.x_min + cfg.grid.x_max));
    const auto report = verify::pde_residual(field, src, cfg.stencil_h, probe_x,
                                             probe_t, cfg.residual_tol);
    OutputSink sink(cfg.out);
    if (cfg.format == "csv") {
        io::write_residual_csv(sink.stream(), report);
    } else {
        json out = io::residual_to_json(report);
        out["metadata"] = metadata_json(cfg, "residual");
        sink.stream() << out.dump(2) << "\n";
    }
    std::cerr << "residual " << field.family.name() << ": max " << report.max_abs
              << " (tol " << report.tolerance_used << ") -> "
              << report.verdict() << "\n";
    return report.pass() ? 0 : 1;
}

int run_tail(const RunConfig& cfg) {
    validate_grid(cfg);
    const auto spec = make_quad(cfg);
    const auto p0 = make_profile(cfg.phi0, "phi0");
    const auto p1 = make_profile(cfg.phi1, "phi1");
    std::vector<tails::TailDecomposition> rows;
    for (double t : cfg.grid.ts()) {
        if (!(t > 0.0)) continue;
        for (double x : cfg.grid.xs())
            rows.push_back(tails::tail_eval(p0, p1, x, t, spec));
    }
    OutputSink sink(cfg.out);
    if (cfg.format == "csv") {
        io::write_tail_csv(sink.stream(), rows);
    } else {
        json arr = json::array();
        for (const auto& d : rows)
            arr.push_back({{"x", d.x},
                           {"t", d.t},
                           {"u", d.u()},
                           {"huygensian", d.huygensian},
                           {"tail", d.tail},
                           {"ratio", d.ratio}});
        json out;
        out["metadata"] = metadata_json(cfg, "tail");
        out["rows"] = arr;
        sink.stream() << out.dump(2) << "\n";
    }
    return 0;
}

int run_tlin(const RunConfig& cfg) {
    const auto spec = make_quad(cfg);
    tails::TLinConfig tl{cfg.tlin_a, cfg.tlin_b, cfg.tlin_c0, cfg.tlin_c1};
    tails::TLinGrid grid;
    grid.t_min = cfg.tlin_t_min;
    grid.t_split = cfg.tlin_t_split;
    grid.t_max = cfg.tlin_t_max;
    grid.nt = cfg.tlin_nt;
    grid.nx = cfg.tlin_nx;
    const auto res = tails::tlin_bound_check(tl, grid, spec);
    OutputSink sink(cfg.out);
    if (cfg.format == "csv") {
        io::write_tlin_csv(sink.stream(), res.samples);
    } else {
        json out = io::residual_to_json(res.report);
        out["metadata"] = metadata_json(cfg, "tlin");
        out["c_small"] = res.c_small;
        out["c_full"] = res.c_full;
        out["c_fit"] = res.c_fit;
        out["growth"] = res.growth;
        out["heldout_max"] = res.heldout_max;
        sink.stream() << out.dump(2) << "\n";
    }
    std::cerr << "tlin a=" << tl.a << " b=" << tl.b << " C0=" << tl.C0
              << " C1=" << tl.C1 << ": C_fit=" << res.c_fit
              << " growth=" << res.growth * 100 << "% -> "
              << res.report.verdict() << "\n";
    return res.report.pass() ? 0 : 1;
}

void add_common(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--family", cfg.family, "operator family");
    sub->add_option("--mass", cfg.mass, "mass parameter (m or curved M)");
    sub->add_option("--k", cfg.k, "Tricomi exponent parameter (l = 2k)");
    sub->add_option("--m-int", cfg.m_int, "Einstein-de Sitter integer m");
    sub->add_option("--mass-sign", cfg.mass_sign,
                    "curved-mass branch: large | small");
    sub->add_option("--rel-tol", cfg.rel_tol, "quadrature relative tolerance");
    sub->add_option("--abs-tol", cfg.abs_tol, "quadrature absolute tolerance");
    sub->add_option("--max-depth", cfg.max_depth, "max quadrature subdivisions");
    sub->add_option("--endpoint-mode", cfg.endpoint_mode,
                    "plain | singular-endpoint-substitution");
    sub->add_option("--threads", cfg.threads,
                    "worker threads (0: HYPERFUND_THREADS or cores)");
    sub->add_option("--out", cfg.out, "output path ('-' for stdout)");
    sub->add_option("--format", cfg.format, "csv | json");
    sub->add_option("--x-min", cfg.grid.x_min, "grid x minimum");
    sub->add_option("--x-max", cfg.grid.x_max, "grid x maximum");
    sub->add_option("--nx", cfg.grid.nx, "grid points in x");
    sub->add_option("--t-min", cfg.grid.t_min, "grid t minimum");
    sub->add_option("--t-max", cfg.grid.t_max, "grid t maximum");
    sub->add_option("--nt", cfg.grid.nt, "grid points in t");
}

} // namespace

int main(int argc, char** argv) {
    RunConfig cfg;
    // --config is applied before flag parsing so flags win
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--config") {
            try {
                apply_config_file(cfg, argv[i + 1]);
            } catch (const ConfigError& e) {
                std::cerr << io::error_to_json("config", e.what()).dump() << "\n";
                return 2;
            }
        }
    }

    CLI::App app{"hyperfund: variable-coefficient hyperbolic solutions via the "
                 "kernel integral transform"};
    app.require_subcommand(1);
    app.fallthrough(); // parent options (--config) usable after a subcommand
    std::string config_path;
    app.add_option("--config", config_path, "JSON run configuration")
        ->expected(1);

    auto* solve = app.add_subcommand("solve", "solve a source or Cauchy problem");
    add_common(solve, cfg);
    solve->add_option("--source", cfg.source, "source family name");
    solve->add_option("--phi0", cfg.phi0, "first Cauchy datum (de Sitter)");
    solve->add_option("--phi1", cfg.phi1, "second Cauchy datum (de Sitter)");
    solve->add_flag("--weighted", cfg.weighted,
                    "solve the weighted Einstein-de Sitter problem");
    solve->add_option("--t0", cfg.t0, "vanishing-data time");

    auto* identities =
        app.add_subcommand("identities", "check the kernel-integral identities");
    add_common(identities, cfg);
    identities->add_option("--id-n", cfg.id_n, "grid size per axis");
    identities->add_option("--id-tol", cfg.id_tol, "pass tolerance");

    auto* residual =
        app.add_subcommand("residual", "finite-difference residual of a solve");
    add_common(residual, cfg);
    residual->add_option("--source", cfg.source, "source family name");
    residual->add_flag("--weighted", cfg.weighted,
                       "check the weighted Einstein-de Sitter equation");
    residual->add_option("--t0", cfg.t0, "vanishing-data time");
    residual->add_option("--stencil-h", cfg.stencil_h, "stencil spacing");
    residual->add_option("--tol", cfg.residual_tol, "pass tolerance");

    auto* tail = app.add_subcommand("tail", "de Sitter tail decomposition table");
    add_common(tail, cfg);
    tail->add_option("--phi0", cfg.phi0, "first Cauchy datum");
    tail->add_option("--phi1", cfg.phi1, "second Cauchy datum");

    auto* tlin = app.add_subcommand("tlin", "pointwise tail-envelope check");
    add_common(tlin, cfg);
    tlin->add_option("--a", cfg.tlin_a, "first datum exponent in (1/2,1)");
    tlin->add_option("--b", cfg.tlin_b, "second datum exponent in (1/2,1)");
    tlin->add_option("--c0", cfg.tlin_c0, "first datum coefficient");
    tlin->add_option("--c1", cfg.tlin_c1, "second datum coefficient");
    tlin->add_option("--tlin-t-min", cfg.tlin_t_min, "grid start");
    tlin->add_option("--t-split", cfg.tlin_t_split, "calibration boundary");
    tlin->add_option("--tlin-t-max", cfg.tlin_t_max, "grid end");
    tlin->add_option("--tlin-nt", cfg.tlin_nt, "t nodes");
    tlin->add_option("--tlin-nx", cfg.tlin_nx, "x nodes per t");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (solve->parsed()) return run_solve(cfg);
        if (identities->parsed()) return run_identities(cfg);
        if (residual->parsed()) return run_residual(cfg);
        if (tail->parsed()) return run_tail(cfg);
        if (tlin->parsed()) return run_tlin(cfg);
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << io::error_to_json("config", e.what()).dump() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << io::error_to_json("computation", e.what()).dump() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << io::error_to_json("internal", e.what()).dump() << "\n";
        return 1;
    }
}
