#pragma once

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "frontlab/boundedness.hpp"
#include "frontlab/catalog.hpp"
#include "frontlab/classify.hpp"
#include "frontlab/invariants.hpp"
#include "frontlab/report.hpp"
#include "frontlab/slicing.hpp"

namespace frontlab {

inline constexpr const char* tool_version = "0.3.0";

enum ExitCode : int { exit_ok = 0, exit_parse = 2, exit_degenerate = 3, exit_numeric = 4 };

/// Document text for "catalog:NAME" or a file path.
inline std::string read_spec_text(const std::string& ref) {
    constexpr std::string_view prefix = "catalog:";
    if (ref.rfind(prefix, 0) == 0) {
        const std::string name = ref.substr(prefix.size());
        try {
            return std::string(catalog_entry(name).text);
        } catch (const Error& e) {
            throw ArgumentError(e.what());
        }
    }
    std::ifstream in(ref, std::ios::binary);
    if (!in) throw ArgumentError("cannot read spec file '" + ref + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline SurfaceSpec load_spec(const std::string& ref, const Params& overrides = {}) {
    SurfaceSpec s = parse_surface_spec(read_spec_text(ref));
    apply_params(s, overrides);
    return s;
}

/// "k=v" into a parameter binding.
inline std::pair<std::string, double> parse_param(const std::string& s) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) throw ArgumentError("--param expects name=value, got '" + s + "'");
    const std::string name = s.substr(0, eq), val = s.substr(eq + 1);
    char* end = nullptr;
    const double x = std::strtod(val.c_str(), &end);
    if (val.empty() || *end != '\0' || !std::isfinite(x)) throw ArgumentError("bad value in --param '" + s + "'");
    return {name, x};
}

/// "x" or "x,y".
inline std::vector<double> parse_numbers(const std::string& s, const std::string& what) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        const auto comma = s.find(',', pos);
        const std::string tok = s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        char* end = nullptr;
        const double x = std::strtod(tok.c_str(), &end);
        if (tok.empty() || *end != '\0' || !std::isfinite(x)) throw ArgumentError("bad number in " + what + ": '" + s + "'");
        out.push_back(x);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

inline Point2 parse_point(const std::string& s, const std::string& what) {
    const auto v = parse_numbers(s, what);
    if (v.size() != 2) throw ArgumentError(what + " expects u,v");
    return {v[0], v[1]};
}

struct AnalyzeConfig {
    std::string spec_ref;
    Params params;                 // overrides
    std::optional<Point2> seed;
    int order = 5;
    double tolerance = 1e-8;
    std::optional<std::vector<double>> slice_at;  // {u} or {u, v}
    double step = 0.02;
    int max_samples = 200;
    bool probe = true;             // empirical verdicts at second-kind non-front points
    int threads = 0;               // 0: hardware concurrency
};

struct AnalyzeResult {
    Json report;
    int exit_code = exit_ok;
    std::vector<InvariantSample> profile;  // first-kind samples, for CSV export
};

namespace detail {

template <class Fn>
void parallel_for(std::size_t n, int threads, Fn fn) {
    unsigned hw = threads > 0 ? static_cast<unsigned>(threads) : std::max(1u, std::thread::hardware_concurrency());
    hw = static_cast<unsigned>(std::min<std::size_t>(hw, std::max<std::size_t>(n, 1)));
    if (hw <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < hw; ++w)
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += hw) fn(i);
        });
    for (auto& t : pool) t.join();
}

inline ChartOptions sample_chart_options(const SingularSample& s, double tol) {
    ChartOptions co;
    co.tangent_hint = s.tangent;
    co.normal_ref = s.nu;
    co.kind_tolerance = tol;
    return co;
}

struct Failure {
    int code = exit_ok;
    std::string message;
};

// Runs fn, turning library errors into a recorded failure.
template <class Fn>
Failure guarded(Fn fn) {
    try {
        fn();
        return {};
    } catch (const DegenerateError& e) {
        return {exit_degenerate, e.what()};
    } catch (const ArgumentError& e) {
        return {exit_parse, e.what()};
    } catch (const ParseError& e) {
        return {exit_parse, e.what()};
    } catch (const std::exception& e) {
        return {exit_numeric, e.what()};
    }
}

inline int worse(int a, int b) {
    auto rank = [](int c) { return c == exit_ok ? 0 : c == exit_numeric ? 1 : c == exit_degenerate ? 2 : 3; };
    return rank(b) > rank(a) ? b : a;
}

inline Json sample_row(const FrontalSurface& F, const SingularSample& s, std::size_t index, double tol,
                       std::optional<InvariantSample>* first_row, Failure* fail) {
    Json j{{"index", index}, {"t", s.t}, {"p", to_json(s.p)}, {"kind", to_string(s.kind)}, {"located", s.located}};
    *fail = guarded([&] {
        const LocalChart c = chart_at(F, s.p, sample_chart_options(s, tol));
        j["label"] = to_string(classify_chart(c, tol).label);
        if (c.kind() == SingularKind::first) {
            const InvariantSample row = invariant_sample(F, s);
            *first_row = row;
            j["invariants"] = to_json(row.inv);
            j["hat_H"] = row.hat_H;
            j["hat_K"] = row.hat_K;
            j["psi_ccr"] = row.psi_ccr;
        } else {
            j["invariants"] = to_json(second_kind_invariants(c, tol));
        }
    });
    if (fail->code != exit_ok) j["error"] = fail->message;
    return j;
}

// Samples within arclength `radius` of sample i, for the bounded-near test.
inline std::vector<SingularSample> arc_window(const std::vector<SingularSample>& all, const SingularSample& s,
                                              double radius) {
    std::vector<SingularSample> out;
    for (const auto& x : all)
        if (std::abs(x.t - s.t) <= radius) out.push_back(x);
    return out;
}

inline Json point_report(const FrontalSurface& F, const SingularSample& s, const std::string& role,
                         const std::vector<SingularSample>& samples, const AnalyzeConfig& cfg, Failure* fail) {
    Json j{{"role", role}, {"p", to_json(s.p)}};
    *fail = guarded([&] {
        const ClassificationResult cls = classify_sample(F, s, cfg.tolerance);
        j["classification"] = to_json(cls);
        if (cls.label == Classification::DegenerateSingular) throw DegenerateError(cls.evidence.note);
        if (cls.label == Classification::Regular) return;
        const LocalChart c = chart_at(F, s.p, sample_chart_options(s, cfg.tolerance));
        if (c.kind() == SingularKind::first) j["invariants"] = to_json(first_kind_invariants(c));
        else j["invariants"] = to_json(second_kind_invariants(c, cfg.tolerance));
        j["gauss_map"] = to_json(gauss_map_singular(c, cfg.tolerance));
        const auto arc = arc_window(samples, s, 0.2);
        BoundednessOptions bo;
        bo.tolerance = cfg.tolerance;
        bo.arc = &arc;
        if (!cfg.probe && cls.label == Classification::SecondKindNonFront) {
            j["boundedness"] = nullptr;
            return;
        }
        j["boundedness"] = to_json(boundedness_report(F, s.p, cls.label, bo));
    });
    if (fail->code != exit_ok) j["error"] = fail->message;
    return j;
}

inline Point2 slice_point(const FrontalSurface& F, const std::vector<SingularSample>& samples,
                          const std::vector<double>& at) {
    if (at.size() == 2) return {at[0], at[1]};
    if (at.size() != 1) throw ArgumentError("--slice-at expects u or u,v");
    if (samples.empty()) throw DomainError("no singular samples to slice along");
    const auto best = std::min_element(samples.begin(), samples.end(), [&](const auto& a, const auto& b) {
        return std::abs(a.p.u - at[0]) < std::abs(b.p.u - at[0]);
    });
    return F.correct_to_singular({at[0], best->p.v}, best->nu);
}

} // namespace detail

inline Json config_json(const AnalyzeConfig& cfg, const SurfaceSpec& spec, Point2 seed) {
    Json c;
    c["spec"] = cfg.spec_ref;
    Json params = Json::object();
    for (const auto& [k, v] : spec.params) params[k] = v;
    c["params"] = params;
    c["seed"] = to_json(seed);
    c["order"] = cfg.order;
    c["tolerance"] = cfg.tolerance;
    c["step"] = cfg.step;
    c["max_samples"] = cfg.max_samples;
    c["probe"] = cfg.probe;
    c["slice_at"] = cfg.slice_at ? Json(*cfg.slice_at) : Json(nullptr);
    return c;
}

inline Json surface_json(const FrontalSurface& F) {
    const SurfaceSpec& s = F.spec();
    Json j{{"name", s.name}};
    j["f"] = Json::array({s.f_text[0], s.f_text[1], s.f_text[2]});
    if (s.normal) j["normal"] = Json::array({s.normal_text[0], s.normal_text[1], s.normal_text[2]});
    else j["normal"] = to_string(NormalMode::adjugate);
    j["metric"] = s.metric_label;
    j["domain"] = Json{{"u", {s.domain.u_lo, s.domain.u_hi}}, {"v", {s.domain.v_lo, s.domain.v_hi}}};
    return j;
}

/// Trace, classify, invariants, boundedness and an optional slice. Library
/// failures become exit codes with whatever part of the report was built.
inline AnalyzeResult analyze(const AnalyzeConfig& cfg) {
    AnalyzeResult out;
    Json& rep = out.report;
    rep["tool"] = Json{{"name", "frontlab"}, {"version", tool_version}};

    const SurfaceSpec spec = load_spec(cfg.spec_ref, cfg.params);
    const Point2 seed = cfg.seed ? *cfg.seed : spec.seed ? *spec.seed : throw ArgumentError("no seed: pass --seed u,v");
    rep["config"] = config_json(cfg, spec, seed);

    std::optional<FrontalSurface> Fopt;
    auto status = [&](int code, const std::string& msg, const std::string& stage) {
        out.exit_code = detail::worse(out.exit_code, code);
        rep["errors"].push_back(Json{{"stage", stage}, {"message", msg}});
    };
    auto f0 = detail::guarded([&] { Fopt.emplace(resolve_normal(spec, cfg.order, cfg.tolerance)); });
    if (f0.code != exit_ok) {
        status(f0.code, f0.message, "normal");
        rep["status"] = "failed";
        return out;
    }
    const FrontalSurface& F = *Fopt;
    rep["surface"] = surface_json(F);
    rep["normal_mode"] = to_string(F.normal_mode());

    TraceResult tr;
    TraceOptions to;
    to.step = cfg.step;
    to.max_samples = cfg.max_samples;
    to.kind_tolerance = cfg.tolerance;
    auto ft = detail::guarded([&] { tr = trace_singular_curve(F, seed, to); });
    if (ft.code != exit_ok) {
        status(ft.code, ft.message, "trace");
        rep["status"] = "failed";
        return out;
    }
    Json trace{{"samples", tr.samples.size()},
               {"seed_index", tr.seed_index},
               {"stop_forward", tr.stop_forward},
               {"stop_backward", tr.stop_backward}};
    trace["degenerate_at"] = tr.degenerate_at ? to_json(*tr.degenerate_at) : Json(nullptr);
    rep["trace"] = trace;
    if (tr.degenerate_at) status(exit_degenerate, "trace stopped at a degenerate singular point", "trace");

    // per-sample profile
    const std::size_t n = tr.samples.size();
    std::vector<Json> rows(n);
    std::vector<std::optional<InvariantSample>> first(n);
    std::vector<detail::Failure> fails(n);
    detail::parallel_for(n, cfg.threads, [&](std::size_t i) {
        rows[i] = detail::sample_row(F, tr.samples[i], i, cfg.tolerance, &first[i], &fails[i]);
    });
    Json profile = Json::array();
    for (std::size_t i = 0; i < n; ++i) {
        profile.push_back(std::move(rows[i]));
        if (first[i]) out.profile.push_back(*first[i]);
        if (fails[i].code != exit_ok) status(fails[i].code, fails[i].message, "sample " + std::to_string(i));
    }
    rep["profile"] = std::move(profile);

    // distinguished points: the seed, located second-kind points, ψ_ccr zeros
    std::vector<std::pair<std::string, SingularSample>> pts;
    if (n > 0) pts.emplace_back("seed", tr.samples[tr.seed_index]);
    // isolated second-kind samples; a curve that is second kind throughout
    // (cone-like) contributes only its seed
    auto kind_at = [&](std::size_t i) { return tr.samples[i].kind; };
    for (std::size_t i = 0; i < n; ++i) {
        if (kind_at(i) != SingularKind::second || i == tr.seed_index) continue;
        const bool isolated = (i > 0 && kind_at(i - 1) == SingularKind::first) ||
                              (i + 1 < n && kind_at(i + 1) == SingularKind::first);
        if (tr.samples[i].located || isolated) pts.emplace_back("second_kind", tr.samples[i]);
    }
    auto fz = detail::guarded([&] {
        for (const auto& s : locate_psi_zeros(F, tr.samples, cfg.tolerance)) pts.emplace_back("psi_ccr_zero", s);
    });
    if (fz.code != exit_ok) status(fz.code, fz.message, "psi_ccr zeros");
    std::vector<Json> prows(pts.size());
    std::vector<detail::Failure> pfails(pts.size());
    detail::parallel_for(pts.size(), cfg.threads, [&](std::size_t i) {
        prows[i] = detail::point_report(F, pts[i].second, pts[i].first, tr.samples, cfg, &pfails[i]);
    });
    Json points = Json::array();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        points.push_back(std::move(prows[i]));
        if (pfails[i].code != exit_ok) status(pfails[i].code, pfails[i].message, "point " + pts[i].first);
    }
    rep["points"] = std::move(points);

    if (cfg.slice_at) {
        Json sl;
        auto fs = detail::guarded([&] {
            const Point2 q = detail::slice_point(F, tr.samples, *cfg.slice_at);
            const SliceCurve curve = orthogonal_slice(F, q, cfg.order);
            sl["curve"] = to_json(curve);
            sl["check"] = to_json(slice_cusp_check(F, curve.p));
        });
        if (fs.code != exit_ok) {
            sl["error"] = fs.message;
            status(fs.code, fs.message, "slice");
        }
        rep["slice"] = sl;
    }
    rep["status"] = out.exit_code == exit_ok ? "ok" : out.exit_code == exit_degenerate ? "degenerate" : "failed";
    return out;
}

/// First-kind profile rows as CSV.
inline std::string profile_csv(const std::vector<InvariantSample>& rows) {
    std::string out = "t,u,v,kappa_s,kappa_nu,kappa_c,kappa_pi,d_kappa_s,d_kappa_nu,d_kappa_c,hat_H,hat_K,psi_ccr\n";
    for (const auto& r : rows) {
        const double xs[] = {r.t, r.p.u, r.p.v, r.inv.kappa_s, r.inv.kappa_nu, r.inv.kappa_c, r.inv.kappa_pi,
                             r.inv.d_kappa_s, r.inv.d_kappa_nu, r.inv.d_kappa_c, r.hat_H, r.hat_K, r.psi_ccr};
        for (std::size_t i = 0; i < std::size(xs); ++i) out += (i ? "," : "") + csv_number(xs[i]);
        out += "\n";
    }
    return out;
}

/// Traced singular curve, one row per sample.
inline std::string singular_curve_csv(const FrontalSurface& F, const TraceResult& tr) {
    std::string out = "u,v,t,kind,lambda_u,lambda_v,eta_u,eta_v,x,y,z\n";
    for (const auto& s : tr.samples) {
        const Vec3 x = F.map_value(s.p);
        const double xs[] = {s.lambda_grad.u, s.lambda_grad.v, s.eta.u, s.eta.v, x[0], x[1], x[2]};
        out += csv_number(s.p.u) + "," + csv_number(s.p.v) + "," + csv_number(s.t) + "," + to_string(s.kind);
        for (double v : xs) out += "," + csv_number(v);
        out += "\n";
    }
    return out;
}

} // namespace frontlab
