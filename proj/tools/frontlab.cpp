// frontlab: singular-point analysis of frontal surfaces from the command line.

#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "frontlab/analysis.hpp"
#include "frontlab/mesh.hpp"

using namespace frontlab;

namespace {

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text)) throw Error("cannot write '" + path + "'");
}

Params collect_params(const std::vector<std::string>& raw) {
    Params p;
    for (const auto& s : raw) {
        auto [k, v] = parse_param(s);
        p[k] = v;
    }
    return p;
}

int jet_order(int flag) {
    // --order wins over FRONTLAB_JET_ORDER, which wins over the built-in default
    int n = flag;
    if (n <= 0) {
        try {
            n = default_jet_order();
        } catch (const DomainError& e) {
            throw ArgumentError(e.what());
        }
    }
    if (n < 3 || n > max_user_jet_order) throw ArgumentError("--order must be in [3, 12]");
    return n;
}

FrontalSurface load_surface(const std::string& ref, const std::vector<std::string>& params, int order, double tol) {
    return resolve_normal(load_spec(ref, collect_params(params)), order, tol);
}

Point2 point_or_seed(const std::string& at, const FrontalSurface& F) {
    if (!at.empty()) return parse_point(at, "--at");
    if (F.spec().seed) return *F.spec().seed;
    throw ArgumentError("no point: pass --at u,v");
}

struct Common {
    std::vector<std::string> params;
    int order = 0;
    double tolerance = 1e-8;
    std::string json_out, csv_out;
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--param", c.params, "parameter override name=value (repeatable)");
    sub->add_option("--order", c.order, "jet order (default 5 or FRONTLAB_JET_ORDER)");
    sub->add_option("--tolerance", c.tolerance, "relative zero tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--json", c.json_out, "write the JSON report here instead of stdout");
    sub->add_option("--csv", c.csv_out, "write CSV data here");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"frontlab: singular points and curvature invariants of frontal surfaces"};
    app.require_subcommand(1);
    app.set_version_flag("--version", tool_version);

    // analyze
    Common ac;
    std::string a_spec, a_seed, a_slice;
    double a_step = 0.02;
    int a_max = 200, a_threads = 0;
    bool a_no_probe = false;
    auto* analyze_cmd = app.add_subcommand("analyze", "trace, classify, invariants, boundedness, optional slice");
    analyze_cmd->add_option("spec", a_spec, "spec file or catalog:NAME")->required();
    analyze_cmd->add_option("--seed", a_seed, "seed point u,v (default: the spec's seed)");
    analyze_cmd->add_option("--slice-at", a_slice, "slice at u (point on the traced curve) or at u,v");
    analyze_cmd->add_option("--step", a_step, "trace step")->check(CLI::PositiveNumber);
    analyze_cmd->add_option("--max-samples", a_max, "trace sample budget")->check(CLI::Range(3, 100000));
    analyze_cmd->add_option("--threads", a_threads, "worker threads (0: all cores)")->check(CLI::NonNegativeNumber);
    analyze_cmd->add_flag("--no-probe", a_no_probe, "skip blow-up probes at non-front points");
    add_common(analyze_cmd, ac);

    // catalog
    std::string c_name, c_out = ".";
    auto* catalog_cmd = app.add_subcommand("catalog", "list built-in examples or write one as a spec file");
    catalog_cmd->add_option("name", c_name, "entry to materialize");
    catalog_cmd->add_option("--out", c_out, "output directory");

    // export-mesh
    Common mc;
    std::string m_spec, m_grid = "100", m_out, m_curve;
    auto* mesh_cmd = app.add_subcommand("export-mesh", "triangulated parameter grid plus singular-curve CSV");
    mesh_cmd->add_option("spec", m_spec, "spec file or catalog:NAME")->required();
    mesh_cmd->add_option("--grid", m_grid, "N or NxM vertices");
    mesh_cmd->add_option("--out", m_out, "mesh file")->required();
    mesh_cmd->add_option("--curve", m_curve, "singular curve CSV (default: <out>.singular.csv)");
    mesh_cmd->add_option("--param", mc.params, "parameter override name=value (repeatable)");

    // probe
    Common pc;
    std::string p_spec, p_at, p_scalar = "K";
    ProbeConfig p_cfg;
    auto* probe_cmd = app.add_subcommand("probe", "polar blow-up probe of K, H, vK or vH at a singular point");
    probe_cmd->add_option("spec", p_spec, "spec file or catalog:NAME")->required();
    probe_cmd->add_option("--at,--seed", p_at, "singular point u,v (default: the spec's seed)");
    probe_cmd->add_option("--scalar", p_scalar, "K, H, vK or vH");
    probe_cmd->add_option("--r-min", p_cfg.r_min, "smallest radius")->check(CLI::PositiveNumber);
    probe_cmd->add_option("--r-max", p_cfg.r_max, "largest radius")->check(CLI::PositiveNumber);
    probe_cmd->add_option("--theta", p_cfg.n_theta, "angular samples per circle")->check(CLI::Range(8, 100000));
    probe_cmd->add_option("--sector", p_cfg.sector_halfwidth, "excluded half-width around singular directions");
    add_common(probe_cmd, pc);

    // slice
    Common sc;
    std::string s_spec, s_at;
    double s_span = 0.2;
    int s_points = 101;
    auto* slice_cmd = app.add_subcommand("slice", "planar cusp cut orthogonal to the singular curve");
    slice_cmd->add_option("spec", s_spec, "spec file or catalog:NAME")->required();
    slice_cmd->add_option("--at,--seed", s_at, "first-kind point u,v (default: the spec's seed)");
    slice_cmd->add_option("--span", s_span, "polyline half-range in t")->check(CLI::PositiveNumber);
    slice_cmd->add_option("--points", s_points, "polyline sample count")->check(CLI::Range(2, 100000));
    add_common(slice_cmd, sc);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? exit_ok : exit_parse;
    }

    try {
        if (*analyze_cmd) {
            AnalyzeConfig cfg;
            cfg.spec_ref = a_spec;
            cfg.params = collect_params(ac.params);
            if (!a_seed.empty()) cfg.seed = parse_point(a_seed, "--seed");
            cfg.order = jet_order(ac.order);
            cfg.tolerance = ac.tolerance;
            if (!a_slice.empty()) cfg.slice_at = parse_numbers(a_slice, "--slice-at");
            cfg.step = a_step;
            cfg.max_samples = a_max;
            cfg.probe = !a_no_probe;
            cfg.threads = a_threads;
            const AnalyzeResult r = analyze(cfg);
            write_text(ac.json_out, dump_json(r.report));
            if (!ac.csv_out.empty()) write_text(ac.csv_out, profile_csv(r.profile));
            for (const auto& e : r.report.value("errors", Json::array()))
                std::cerr << "frontlab: " << e["stage"].get<std::string>() << ": " << e["message"].get<std::string>()
                          << "\n";
            return r.exit_code;
        }
        if (*catalog_cmd) {
            if (c_name.empty()) {
                for (const auto& e : catalog()) {
                    std::cout << e.name << "  " << e.summary << "\n";
                    for (const auto& [k, v] : e.golden) std::cout << "    " << k << " = " << v << "\n";
                }
                return exit_ok;
            }
            const CatalogEntry* entry = nullptr;
            try {
                entry = &catalog_entry(c_name);
            } catch (const Error& e) {
                throw ArgumentError(e.what());
            }
            std::filesystem::create_directories(c_out);
            const auto path = std::filesystem::path(c_out) / (std::string(entry->name) + ".toml");
            write_text(path.string(), std::string(entry->text));
            std::cout << path.string() << "\n";
            return exit_ok;
        }
        if (*mesh_cmd) {
            const FrontalSurface F = load_surface(m_spec, mc.params, jet_order(0), 1e-8);
            const auto [nu, nv] = parse_grid(m_grid);
            if (nu < 2 || nv < 2) throw ArgumentError("mesh grid needs at least 2 vertices per direction");
            std::ofstream out(m_out, std::ios::binary);
            if (!out) throw Error("cannot write '" + m_out + "'");
            const MeshStats st = write_mesh(F, nu, nv, out);
            std::cout << m_out << ": " << st.vertices << " vertices, " << st.triangles << " triangles\n";
            const std::string curve = m_curve.empty() ? m_out + ".singular.csv" : m_curve;
            if (F.spec().seed) {
                const TraceResult tr = trace_singular_curve(F, *F.spec().seed);
                write_text(curve, singular_curve_csv(F, tr));
                std::cout << curve << ": " << tr.samples.size() << " singular samples\n";
            } else {
                std::cerr << "frontlab: no seed in spec, singular curve not written\n";
            }
            return exit_ok;
        }
        if (*probe_cmd) {
            const FrontalSurface F = load_surface(p_spec, pc.params, jet_order(pc.order), pc.tolerance);
            const ProbeScalar s = parse_probe_scalar(p_scalar);
            if (!(p_cfg.r_min < p_cfg.r_max)) throw ArgumentError("--r-min must be below --r-max");
            const BlowupProbe b = blowup_probe(F, s, point_or_seed(p_at, F), p_cfg);
            Json j{{"tool", Json{{"name", "frontlab"}, {"version", tool_version}}}};
            j["surface"] = surface_json(F);
            j["probe"] = to_json(b);
            write_text(pc.json_out, dump_json(j));
            if (!pc.csv_out.empty()) {
                std::string csv = "r,theta,value\n";
                for (const auto& x : b.samples)
                    csv += csv_number(x.r) + "," + csv_number(x.theta) + "," + csv_number(x.value) + "\n";
                write_text(pc.csv_out, csv);
            }
            return exit_ok;
        }
        if (*slice_cmd) {
            const int order = jet_order(sc.order);
            const FrontalSurface F = load_surface(s_spec, sc.params, order, sc.tolerance);
            const SliceCurve curve = orthogonal_slice(F, point_or_seed(s_at, F), order);
            Json j{{"tool", Json{{"name", "frontlab"}, {"version", tool_version}}}};
            j["surface"] = surface_json(F);
            j["curve"] = to_json(curve);
            j["check"] = to_json(slice_cusp_check(F, curve.p));
            write_text(sc.json_out, dump_json(j));
            if (!sc.csv_out.empty()) write_text(sc.csv_out, slice_polyline_csv(curve, s_span, s_points));
            return exit_ok;
        }
    } catch (const ParseError& e) {
        std::cerr << "frontlab: parse error: " << e.what() << "\n";
        return exit_parse;
    } catch (const ArgumentError& e) {
        std::cerr << "frontlab: " << e.what() << "\n";
        return exit_parse;
    } catch (const DegenerateError& e) {
        std::cerr << "frontlab: degenerate: " << e.what() << "\n";
        return exit_degenerate;
    } catch (const std::exception& e) {
        std::cerr << "frontlab: " << e.what() << "\n";
        return exit_numeric;
    }
    return exit_ok;
}
