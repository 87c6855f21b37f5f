#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include "frontlab/ambient.hpp"
#include "frontlab/errors.hpp"
#include "frontlab/expr.hpp"
#include "frontlab/jet.hpp"
#include "frontlab/linalg.hpp"
#include "frontlab/surface_spec.hpp"

namespace frontlab {

enum class NormalMode { supplied, adjugate };
enum class SingularKind { first, second };

inline const char* to_string(NormalMode m) { return m == NormalMode::supplied ? "supplied" : "adjugate"; }
inline const char* to_string(SingularKind k) { return k == SingularKind::first ? "first" : "second"; }

constexpr int max_user_jet_order = 12;

/// Default jet order: 5, or FRONTLAB_JET_ORDER when set.
inline int default_jet_order() {
    if (const char* env = std::getenv("FRONTLAB_JET_ORDER")) {
        char* end = nullptr;
        const long n = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || n < 3 || n > max_user_jet_order)
            throw DomainError("FRONTLAB_JET_ORDER must be an integer in [3, 12]");
        return static_cast<int>(n);
    }
    return 5;
}

template <class T>
int sign_of(T x) {
    return (x > T(0)) - (x < T(0));
}

/// Flip `a` so that its largest-magnitude component is positive.
inline Vec3 canonical_sign(const Vec3& a) {
    std::size_t k = 0;
    for (std::size_t i = 1; i < 3; ++i)
        if (std::abs(a[i]) > std::abs(a[k]) + 1e-12 * std::abs(a[k])) k = i;
    return a[k] < 0 ? neg(a) : a;
}

/// A surface together with its unit normal field (supplied or adjugate).
class FrontalSurface {
public:
    explicit FrontalSurface(SurfaceSpec spec, int jet_order = default_jet_order())
        : spec_(std::move(spec)), jet_order_(jet_order) {
        if (jet_order_ < 3 || jet_order_ > max_user_jet_order)
            throw DomainError("jet order must be in [3, 12]");
    }

    const SurfaceSpec& spec() const noexcept { return spec_; }
    NormalMode normal_mode() const noexcept {
        return spec_.normal ? NormalMode::supplied : NormalMode::adjugate;
    }
    const Params& params() const noexcept { return spec_.params; }
    const AmbientChart& chart() const noexcept { return spec_.chart; }
    const Domain& domain() const noexcept { return spec_.domain; }
    int jet_order() const noexcept { return jet_order_; }

    Vec3J map_jet(Point2 p, int order) const { return eval3(spec_.f, p, order); }

    Vec3 map_value(Point2 p) const {
        std::vector<double> vars{p.u, p.v};
        return {spec_.f[0].evaluate(vars, params()), spec_.f[1].evaluate(vars, params()),
                spec_.f[2].evaluate(vars, params())};
    }

    Vec3J supplied_normal_jet(Point2 p, int order) const {
        if (!spec_.normal) throw std::logic_error("no supplied normal");
        return eval3(*spec_.normal, p, order);
    }

    MetricAt<Jet2> metric_along(const Vec3J& f, bool christoffel = true) const {
        return metric_at(chart(), f, params(), christoffel);
    }

    /// First-order data at a parameter point.
    struct Frame {
        Point2 p;
        Vec3 f, fu, fv;
        Vec3 C, Cu, Cv;       // C = f_u ×_g f_v and its partial derivatives
        MetricAt<double> g;   // metric at f(p)
    };

    Frame frame(Point2 p) const {
        const Vec3J f = map_jet(p, 2);
        const Vec3J fu = partial(f, Axis::u), fv = partial(f, Axis::v);
        const auto m = metric_along(truncated(f, 1), false);
        const Vec3J C = cross_metric(m, fu, fv);
        Frame fr;
        fr.p = p;
        fr.f = values(f);
        fr.fu = values(fu);
        fr.fv = values(fv);
        fr.C = values(C);
        fr.Cu = values(partial(C, Axis::u));
        fr.Cv = values(partial(C, Axis::v));
        fr.g = metric_at<double>(chart(), fr.f, params(), true);
        return fr;
    }

    /// Size of f_u, f_v used to scale λ-type tolerances.
    static double lambda_scale(const Frame& fr) {
        const double a = norm_g(fr.g, fr.fu) + norm_g(fr.g, fr.fv);
        return a * a + 1e-300;
    }

    /// Unit normal at p. Adjugate normals are oriented by `ref` when given,
    /// otherwise by the largest-component-positive rule.
    Vec3 normal_value(Point2 p, const std::optional<Vec3>& ref = std::nullopt) const {
        if (normal_mode() == NormalMode::supplied) {
            std::vector<double> vars{p.u, p.v};
            const auto& n = *spec_.normal;
            return {n[0].evaluate(vars, params()), n[1].evaluate(vars, params()), n[2].evaluate(vars, params())};
        }
        return adjugate_normal(frame(p), ref);
    }

    Vec3 adjugate_normal(const Frame& fr, const std::optional<Vec3>& ref) const {
        const double c = norm_g(fr.g, fr.C);
        const double dc = norm_g(fr.g, fr.Cu) + norm_g(fr.g, fr.Cv);
        Vec3 n;
        if (c > 1e-7 * dc && c > 1e-300) {
            n = scale(1.0 / c, fr.C);
        } else {
            // On the singular set dC = ν ⊗ dλ: take the dominant column.
            const double a = norm_g(fr.g, fr.Cu), b = norm_g(fr.g, fr.Cv);
            if (std::max(a, b) <= 1e-14 * lambda_scale(fr))
                throw DegenerateError("adjugate normal direction vanishes");
            n = a >= b ? scale(1.0 / a, fr.Cu) : scale(1.0 / b, fr.Cv);
        }
        if (ref) return inner(fr.g, n, *ref) < 0 ? neg(n) : n;
        return canonical_sign(n);
    }

    /// The function whose zero set is the singular curve near p: λ itself
    /// for supplied normals, ⟨f_u ×_g f_v, n_ref⟩ for adjugate normals.
    Jet2 root_function_jet(Point2 p, int order, const Vec3& n_ref) const {
        const Vec3J f = map_jet(p, order + 1);
        const Vec3J fu = partial(f, Axis::u), fv = partial(f, Axis::v);
        const auto m = metric_along(truncated(f, order), false);
        const Vec3J C = cross_metric(m, fu, fv);
        if (normal_mode() == NormalMode::supplied) return inner(m, C, supplied_normal_jet(p, order));
        return inner(m, C, constant_vec(C[0], n_ref));
    }

    /// Newton projection of q onto the singular set along the gradient of
    /// the root function.
    Point2 correct_to_singular(Point2 q, const Vec3& n_ref, int max_iter = 60) const {
        const double sc = lambda_scale(frame(q));
        for (int it = 0; it < max_iter; ++it) {
            const Jet2 r = root_function_jet(q, 1, n_ref);
            const double lam = r.value();
            const Vec2 g{r.coeff(1, 0), r.coeff(0, 1)};
            const double g2 = dot2(g, g);
            if (std::abs(lam) <= 1e-13 * sc) return q;
            if (!(g2 > 0.0) || !std::isfinite(lam)) throw NumericError("singular-set correction failed");
            const Vec2 step = (-lam / g2) * g;
            q = q + step;
            if (norm2(step) < 1e-16 * (1.0 + std::abs(q.u) + std::abs(q.v))) return q;
        }
        const Jet2 r = root_function_jet(q, 1, n_ref);
        if (std::abs(r.value()) <= 1e-10 * sc) return q;
        throw NumericError("point is not near the singular set");
    }

private:
    Vec3J eval3(const std::array<Expression, 3>& e, Point2 p, int order) const {
        std::vector<Jet2> vars{Jet2::variable(Axis::u, order, p), Jet2::variable(Axis::v, order, p)};
        return {e[0].evaluate(vars, params()), e[1].evaluate(vars, params()), e[2].evaluate(vars, params())};
    }

    SurfaceSpec spec_;
    int jet_order_;
};

/// Validate a supplied normal (unit length, orthogonal to f_u and f_v) on a
/// grid over the domain, or select adjugate mode when none is supplied.
inline FrontalSurface resolve_normal(SurfaceSpec spec, int jet_order = default_jet_order(),
                                     double tolerance = 1e-8, int grid = 9) {
    FrontalSurface F(std::move(spec), jet_order);
    if (F.normal_mode() == NormalMode::adjugate) return F;
    const Domain& d = F.domain();
    int checked = 0;
    for (int i = 0; i < grid; ++i)
        for (int j = 0; j < grid; ++j) {
            const Point2 p{d.u_lo + (d.u_hi - d.u_lo) * (i + 0.5) / grid,
                           d.v_lo + (d.v_hi - d.v_lo) * (j + 0.5) / grid};
            try {
                const auto fr = F.frame(p);
                const Vec3 n = F.normal_value(p);
                const double len = norm_g(fr.g, n);
                const double su = norm_g(fr.g, fr.fu), sv = norm_g(fr.g, fr.fv);
                if (std::abs(len - 1.0) > tolerance)
                    throw DomainError("supplied normal is not unit length at (" + std::to_string(p.u) + ", " +
                                      std::to_string(p.v) + ")");
                if (std::abs(inner(fr.g, n, fr.fu)) > tolerance * std::max(1.0, su) ||
                    std::abs(inner(fr.g, n, fr.fv)) > tolerance * std::max(1.0, sv))
                    throw DomainError("supplied normal is not orthogonal to the surface at (" +
                                      std::to_string(p.u) + ", " + std::to_string(p.v) + ")");
                ++checked;
            } catch (const DomainError& e) {
                const std::string what = e.what();
                if (what.rfind("supplied normal", 0) == 0) throw;
            }
        }
    if (checked == 0) throw DomainError("supplied normal could not be evaluated on the validation grid");
    return F;
}

struct ChartOptions {
    std::optional<Vec2> tangent_hint;   // preferred direction of the singular curve
    std::optional<Vec3> normal_ref;     // orientation reference for adjugate normals
    bool correct = true;                // project the point onto the singular set first
    double kind_tolerance = 1e-8;
};

/// Local chart at a non-degenerate singular point p.
///
/// The chart φ(s, w) has unit Jacobian determinant, maps w = 0 onto the
/// singular curve and s to its graph variable (possibly reversed). In it
/// λ∘φ = w Λ and f_u ×_g f_v = w N.
class LocalChart {
public:
    /// Working order used for a requested invariant order.
    static int internal_order(int user_order) { return user_order + 3; }

    LocalChart(const FrontalSurface& F, Point2 p, int order, ChartOptions opt = {})
        : surface_(&F), order_(order), opt_(opt) {
        if (order < 4) throw DomainError("local chart needs jet order >= 4");
        prepare(p);
        int d = 1;
        if (opt_.tangent_hint) {
            const Vec2 t = raw_tangent(1);
            if (dot2(t, *opt_.tangent_hint) < 0) d = -1;
        }
        build(d);
        if (kind_ == SingularKind::second) {
            const double T = transversality();
            if (T > 1e-10 * std::max(1.0, eta_scale_)) build(-d);
        }
    }

    const FrontalSurface& surface() const { return *surface_; }
    Point2 point() const noexcept { return p_; }
    int order() const noexcept { return order_; }
    bool graph_over_u() const noexcept { return over_u_; }
    int direction() const noexcept { return dir_; }
    /// Graph of the singular curve: v − v0 = g(u − u0) or u − u0 = h(v − v0).
    const Jet2& graph() const noexcept { return graph_; }
    const Jet2& du() const noexcept { return du_; }
    const Jet2& dv() const noexcept { return dv_; }
    const Vec3J& F() const noexcept { return F_; }
    const Vec3J& Fs() const noexcept { return Fs_; }
    const Vec3J& Fw() const noexcept { return Fw_; }
    const MetricAt<Jet2>& metric() const noexcept { return metric_; }
    const Vec3J& nu() const noexcept { return nu_; }
    const Jet2& Lambda() const noexcept { return Lambda_; }
    const Jet2& eta_s() const noexcept { return eta_s_; }
    const Jet2& eta_w() const noexcept { return eta_w_; }
    SingularKind kind() const noexcept { return kind_; }
    /// |det(γ̂', η̂)| at p in the parameter plane.
    double kind_measure() const noexcept { return kind_measure_; }
    Vec2 tangent_uv() const noexcept { return tangent_uv_; }
    Vec2 eta_uv() const noexcept { return eta_uv_; }
    Vec2 lambda_grad_uv() const noexcept { return lambda_grad_; }
    Vec3 normal_at_point() const { return values(nu_); }
    /// Euclidean size of dν at p (for zero tests).
    double nu_derivative_scale() const {
        return norm(values(cov(Axis::u, nu_))) + norm(values(cov(Axis::v, nu_)));
    }
    double eta_scale() const noexcept { return eta_scale_; }

    /// d/ds det(γ', η) along the curve at p (equals ∂_s η^w).
    double transversality() const { return eta_w_.coeff(1, 0); }

    /// ∇ along ∂_s (Axis::u) or ∂_w (Axis::v).
    Vec3J cov(Axis dir, const Vec3J& X) const {
        return covariant(metric_, dir == Axis::u ? Fs_ : Fw_, X, dir);
    }

    Vec3J cov_eta(const Vec3J& X) const {
        const Vec3J a = cov(Axis::u, X), b = cov(Axis::v, X);
        return add(scale(eta_s_, a), scale(eta_w_, b));
    }

    Vec3J f_eta() const { return add(scale(eta_s_, Fs_), scale(eta_w_, Fw_)); }

    /// Re-expand a chart jet in the original (u, v) coordinates at p.
    Jet2 to_uv(const Jet2& j) const {
        const int n = j.order();
        const Jet2 a = Jet2::offset(Axis::u, n, p_);
        const Jet2 b = Jet2::offset(Axis::v, n, p_);
        const Jet2 zero(n, 0.0, p_);
        Jet2 S, W;
        if (over_u_) {
            S = dir_ * a;
            W = dir_ * (b - compose(graph_.truncated(n), a, zero));
        } else {
            S = dir_ * b;
            W = dir_ * (compose(graph_.truncated(n), b, zero) - a);
        }
        return compose(j, S, W);
    }

    Vec3J to_uv(const Vec3J& x) const { return {to_uv(x[0]), to_uv(x[1]), to_uv(x[2])}; }

private:
    void prepare(Point2 p) {
        const FrontalSurface& F = *surface_;
        Vec3 n_ref{0.0, 0.0, 1.0};
        if (F.normal_mode() == NormalMode::adjugate) n_ref = F.normal_value(p, opt_.normal_ref);
        if (opt_.correct) p = F.correct_to_singular(p, n_ref);
        p_ = p;
        const auto fr = F.frame(p);
        const double su = norm_g(fr.g, fr.fu), sv = norm_g(fr.g, fr.fv);
        const Vec3J f2 = F.map_jet(p, 2);
        double second = 0.0;
        for (Axis a : {Axis::u, Axis::v})
            for (Axis b : {Axis::u, Axis::v}) second += norm(values(partial(partial(f2, a), b)));
        if (su + sv <= 1e-10 * (1.0 + second)) throw DegenerateError("rank-zero singular point");

        if (F.normal_mode() == NormalMode::adjugate) n_ref = F.adjugate_normal(fr, opt_.normal_ref);
        n_ref_ = n_ref;
        root_ = F.root_function_jet(p, order_, n_ref);
        const double lu = root_.coeff(1, 0), lv = root_.coeff(0, 1);
        const double gscale = (su + sv) * (second + 1e-300);
        if (std::hypot(lu, lv) <= 1e-8 * gscale) throw DegenerateError("degenerate singular point (dλ = 0)");
        over_u_ = std::abs(lv) >= std::abs(lu);

        // Solve root(a, graph(a)) = 0 order by order.
        const Point2 o{0.0, 0.0};
        const Jet2 a = Jet2::offset(Axis::u, order_, o);
        const Jet2 zero(order_, 0.0, o);
        const double lead = over_u_ ? lv : lu;
        graph_ = Jet2(order_, 0.0, o);
        graph_.at(1, 0) = -(over_u_ ? lu : lv) / lead;
        for (int k = 2; k <= order_; ++k) {
            const Jet2 r = over_u_ ? compose(root_, a, graph_) : compose(root_, graph_, a);
            graph_.at(k, 0) = -r.coeff(k, 0) / lead;
        }
        f_jet_ = F.map_jet(p, order_ + 1);
        if (F.normal_mode() == NormalMode::supplied) nu_jet_ = F.supplied_normal_jet(p, order_);
    }

    Vec2 raw_tangent(int d) const {
        return over_u_ ? Vec2{double(d), d * graph_.coeff(1, 0)} : Vec2{d * graph_.coeff(1, 0), double(d)};
    }

    void build(int d) {
        const FrontalSurface& F = *surface_;
        dir_ = d;
        const Point2 o{0.0, 0.0};
        const Jet2 S = Jet2::offset(Axis::u, order_, o);
        const Jet2 W = Jet2::offset(Axis::v, order_, o);
        const Jet2 zero(order_, 0.0, o);
        Jet2 gd = graph_;
        for (int k = 1; k <= order_; ++k) gd.at(k, 0) *= std::pow(double(d), k);
        const Jet2 gs = compose(gd, S, zero);
        if (over_u_) {
            du_ = d * S;
            dv_ = gs + d * W;
        } else {
            du_ = gs - d * W;
            dv_ = d * S;
        }
        tangent_uv_ = raw_tangent(d);

        F_ = compose(f_jet_, du_, dv_);
        metric_ = F.metric_along(F_, true);
        Fs_ = partial(F_, Axis::u);
        Fw_ = partial(F_, Axis::v);
        const Vec3J C = cross_metric(metric_, Fs_, Fw_);
        double cmax = 0.0;
        for (const auto& c : C) cmax = std::max(cmax, c.max_abs());
        Vec3J N;
        for (std::size_t i = 0; i < 3; ++i) N[i] = C[i].deflate(Axis::v, 1e-9, cmax);
        if (F.normal_mode() == NormalMode::supplied) {
            nu_ = compose(nu_jet_, du_, dv_);
        } else {
            const auto mN = F.metric_along(truncated(F_, min_order(N)), false);
            const Jet2 len = sqrt(inner(mN, N, N));
            nu_ = scale(1.0 / len, N);
            const Vec3 n0 = values(nu_);
            const double orient = inner(mN, constant_vec(len, n0), constant_vec(len, n_ref_)).value();
            if (orient < 0) nu_ = neg(nu_);
        }
        {
            const auto mN = F.metric_along(truncated(F_, min_order(N)), false);
            Lambda_ = inner(mN, N, truncated(nu_, min_order(N)));
        }

        // Null field from the dominant column at p.
        const Vec3 fs0 = values(Fs_), fw0 = values(Fw_);
        const Vec3 e = norm(fs0) >= norm(fw0) ? scale(1.0 / norm(fs0), fs0) : scale(1.0 / norm(fw0), fw0);
        const Vec3J ej = constant_vec(Fs_[0], e);
        Jet2 es = dot(Fw_, ej), ew = -dot(Fs_, ej);
        const double as = du_.coeff(1, 0), aw = du_.coeff(0, 1), bs = dv_.coeff(1, 0), bw = dv_.coeff(0, 1);
        const Vec2 raw_uv{as * es.value() + aw * ew.value(), bs * es.value() + bw * ew.value()};
        const double len = norm2(raw_uv);
        if (!(len > 0)) throw DegenerateError("null direction undefined");
        kind_measure_ = std::abs(ew.value()) / (len * norm2(tangent_uv_));
        kind_ = kind_measure_ < opt_.kind_tolerance ? SingularKind::second : SingularKind::first;
        const double sgn = kind_ == SingularKind::first ? sign_of(ew.value()) : sign_of(es.value());
        const double c = (sgn == 0 ? 1.0 : sgn) / len;
        eta_s_ = c * es;
        eta_w_ = c * ew;
        eta_uv_ = c * raw_uv;
        eta_scale_ = std::abs(eta_s_.coeff(1, 0)) + std::abs(eta_s_.coeff(0, 1)) + std::abs(eta_w_.coeff(1, 0)) +
                     std::abs(eta_w_.coeff(0, 1));
        lambda_grad_ = lambda_gradient();
    }

    // dλ at p in (u, v): λ∘φ = wΛ, so dλ = Λ(p) dw.
    Vec2 lambda_gradient() const {
        // dw = (∂w/∂u, ∂w/∂v) from the inverse of Dφ(0) (unit determinant)
        const Vec2 dw{-dv_.coeff(1, 0), du_.coeff(1, 0)};
        return Lambda_.value() * dw;
    }

    const FrontalSurface* surface_;
    int order_;
    ChartOptions opt_;
    Point2 p_;
    Vec3 n_ref_{0.0, 0.0, 1.0};
    Jet2 root_;
    bool over_u_ = true;
    int dir_ = 1;
    Jet2 graph_;
    Vec3J f_jet_;
    Vec3J nu_jet_;
    Jet2 du_, dv_;
    Vec3J F_, Fs_, Fw_;
    MetricAt<Jet2> metric_;
    Vec3J nu_;
    Jet2 Lambda_;
    Jet2 eta_s_, eta_w_;
    SingularKind kind_ = SingularKind::first;
    double kind_measure_ = 0.0;
    double eta_scale_ = 0.0;
    Vec2 tangent_uv_, eta_uv_, lambda_grad_;
};

/// λ = det_g(f_u, f_v, ν) expanded at p.
inline Jet2 lambda_jet(const FrontalSurface& F, Point2 p, int order) {
    if (F.normal_mode() == NormalMode::supplied) return F.root_function_jet(p, order, {0.0, 0.0, 1.0});
    const auto fr = F.frame(p);
    const double c = norm_g(fr.g, fr.C);
    const double dc = norm_g(fr.g, fr.Cu) + norm_g(fr.g, fr.Cv);
    if (c > 1e-6 * dc && c > 1e-300) {
        // Regular point: λ = ±|C| with the sign of the canonical normal.
        const Vec3J f = F.map_jet(p, order + 1);
        const auto m = F.metric_along(truncated(f, order), false);
        const Vec3J C = cross_metric(m, partial(f, Axis::u), partial(f, Axis::v));
        const Jet2 len = sqrt(inner(m, C, C));
        const Vec3 n = F.normal_value(p);
        return inner(fr.g, n, fr.C) < 0 ? -len : len;
    }
    // On (or next to) the singular set: Λ from a local chart, pulled back.
    LocalChart chart(F, p, std::max(order + 2, 4));
    Jet2 lam = chart.Lambda().times_increment(Axis::v);
    return chart.to_uv(lam).truncated(order);
}

/// Kernel direction of df at a rank-one point: unit, with {γ', η} positive.
inline Vec2 null_direction(const FrontalSurface& F, Point2 p) {
    LocalChart chart(F, p, 4);
    return chart.eta_uv();
}

/// Jets of the singular curve through p in its graph parametrization.
struct SingularCurveJets {
    Point2 p;
    bool graph_over_u = true;
    Jet2 graph;          // v − v0 = g(u − u0) or u − u0 = h(v − v0); univariate in the first variable
    Vec3J f_gamma;       // f along the curve, univariate in the graph variable
    Vec3J nu_gamma;      // ν along the curve
};

inline SingularCurveJets singular_curve_jets(const FrontalSurface& F, Point2 p, int order) {
    LocalChart chart(F, p, std::max(order, 4));
    SingularCurveJets r;
    r.p = chart.point();
    r.graph_over_u = chart.graph_over_u();
    r.graph = chart.graph().truncated(order);
    // Chart curve s ↦ F(s, 0) with s = direction · (graph variable).
    const int n = order;
    const Point2 o{0.0, 0.0};
    const Jet2 a = chart.direction() * Jet2::offset(Axis::u, n, o);
    const Jet2 zero(n, 0.0, o);
    r.f_gamma = compose(along(chart.F(), Axis::u), a, zero);
    r.nu_gamma = compose(along(chart.nu(), Axis::u), a, zero);
    return r;
}

// ---------------------------------------------------------------------------
// Tracing

enum class TraceDirection { both, forward, backward };

struct TraceOptions {
    double step = 0.02;
    int max_samples = 200;
    TraceDirection direction = TraceDirection::both;
    std::optional<Domain> domain;          // defaults to the surface domain
    std::optional<Vec2> initial_direction; // orients "forward"
    double kind_tolerance = 1e-8;
    bool locate_second_kind = true;
};

struct SingularSample {
    Point2 p;
    Vec2 lambda_grad;
    Vec2 eta;             // unit null direction in the parameter plane
    Vec2 tangent;         // unit γ' in the parameter plane (trace direction)
    SingularKind kind = SingularKind::first;
    int sign_dlambda_eta = 0;
    double t = 0.0;       // signed arclength of f∘γ from the seed
    Vec3 nu;              // unit normal at p
    bool located = false; // inserted by root location between samples
};

struct TraceResult {
    std::vector<SingularSample> samples;
    std::size_t seed_index = 0;
    std::string stop_forward = "not traced";
    std::string stop_backward = "not traced";
    std::optional<Point2> degenerate_at;
};

namespace detail {

struct SampleProbe {
    SingularSample s;
    Vec2 eta_raw;   // not kind-oriented
};

inline SampleProbe probe_sample(const FrontalSurface& F, Point2 q, Vec2 hint, const std::optional<Vec3>& ref,
                                double kind_tol) {
    const auto fr = F.frame(q);
    SampleProbe out;
    SingularSample& s = out.s;
    s.p = q;
    s.nu = F.normal_value(q, ref);
    if (F.normal_mode() == NormalMode::supplied) {
        const Jet2 lam = F.root_function_jet(q, 1, s.nu);
        s.lambda_grad = {lam.coeff(1, 0), lam.coeff(0, 1)};
    } else {
        s.lambda_grad = {inner(fr.g, fr.Cu, s.nu), inner(fr.g, fr.Cv, s.nu)};
    }
    const double gl = norm2(s.lambda_grad);
    if (!(gl > 0.0)) throw DegenerateError("dλ vanishes");
    Vec2 t{-s.lambda_grad.v / gl, s.lambda_grad.u / gl};
    if (dot2(t, hint) < 0) t = -1.0 * t;
    s.tangent = t;
    const Vec3& e0 = norm(fr.fu) >= norm(fr.fv) ? fr.fu : fr.fv;
    const double le = norm(e0);
    if (!(le > 0.0)) throw DegenerateError("rank-zero singular point");
    const Vec3 e = scale(1.0 / le, e0);
    Vec2 eta{dot(fr.fv, e), -dot(fr.fu, e)};
    eta = (1.0 / norm2(eta)) * eta;
    out.eta_raw = eta;
    const double m = std::abs(det2(t, eta));
    s.kind = m < kind_tol ? SingularKind::second : SingularKind::first;
    if (s.kind == SingularKind::first ? det2(t, eta) < 0 : dot2(t, eta) < 0) eta = -1.0 * eta;
    s.eta = eta;
    s.sign_dlambda_eta = sign_of(dot2(s.lambda_grad, eta));
    if (s.kind == SingularKind::second) s.sign_dlambda_eta = 0;
    return out;
}

inline double gradient_threshold(const FrontalSurface& F, Point2 q) {
    const Vec3J f2 = F.map_jet(q, 2);
    double second = 0.0;
    for (Axis a : {Axis::u, Axis::v})
        for (Axis b : {Axis::u, Axis::v}) second += norm(values(partial(partial(f2, a), b)));
    const double first = norm(values(partial(f2, Axis::u))) + norm(values(partial(f2, Axis::v)));
    return 1e-8 * first * second;
}

inline double chord(const FrontalSurface& F, Point2 a, Point2 b) {
    const Vec3 fa = F.map_value(a), fb = F.map_value(b);
    const Vec3 d = sub(fb, fa);
    if (F.chart().is_euclidean()) return norm(d);
    const Vec3 mid = scale(0.5, add(fa, fb));
    const auto m = metric_at<double>(F.chart(), mid, F.params(), false);
    return std::sqrt(inner(m, d, d));
}

} // namespace detail

/// Trace {λ = 0} from a seed by tangent prediction and Newton correction.
inline TraceResult trace_singular_curve(const FrontalSurface& F, Point2 seed, const TraceOptions& opt = {}) {
    const Domain dom = opt.domain.value_or(F.domain());
    const std::optional<Vec3> no_ref;
    Vec3 n0 = F.normal_mode() == NormalMode::adjugate ? F.normal_value(seed) : Vec3{0, 0, 1};
    Point2 p0;
    try {
        p0 = F.correct_to_singular(seed, n0);
    } catch (const NumericError&) {
        throw NumericError("seed is not near the singular set");
    }
    if (!dom.contains(p0)) throw NumericError("corrected seed lies outside the domain");
    const Vec2 hint0 = opt.initial_direction.value_or(Vec2{1.0, 0.0});
    auto first = detail::probe_sample(F, p0, hint0, std::nullopt, opt.kind_tolerance);
    if (norm2(first.s.lambda_grad) <= detail::gradient_threshold(F, p0))
        throw DegenerateError("seed lies at a degenerate singular point");
    if (!opt.initial_direction && std::abs(first.s.tangent.u) < 1e-12 && first.s.tangent.v < 0)
        first = detail::probe_sample(F, p0, Vec2{0.0, 1.0}, std::nullopt, opt.kind_tolerance);

    TraceResult result;
    std::vector<detail::SampleProbe> fwd, bwd;

    auto march = [&](int sigma, std::vector<detail::SampleProbe>& out) -> std::string {
        detail::SampleProbe cur = first;
        Vec2 tau = sigma * 1.0 * first.s.tangent;
        double h = opt.step;
        double t = 0.0;
        const int limit = opt.direction == TraceDirection::both ? opt.max_samples / 2 : opt.max_samples - 1;
        while (static_cast<int>(out.size()) < limit) {
            const Point2 q = cur.s.p;
            const Point2 pred = q + h * tau;
            if (!dom.contains(pred)) {
                if (h > 1e-3 * opt.step) { h *= 0.5; continue; }
                return "domain boundary";
            }
            const Vec3 ref = cur.s.nu;
            const double sc = FrontalSurface::lambda_scale(F.frame(q));
            bool ok = false;
            Point2 r = pred;
            try {
                for (int it = 0; it < 12; ++it) {
                    const Jet2 lam = F.root_function_jet(r, 1, ref);
                    const Vec2 g{lam.coeff(1, 0), lam.coeff(0, 1)};
                    const double g2 = dot2(g, g);
                    if (!(g2 > 0)) break;
                    if (std::abs(lam.value()) <= 1e-12 * sc) { ok = true; break; }
                    r = r + (-lam.value() / g2) * g;
                }
            } catch (const DomainError&) {
                ok = false;
            }
            if (ok) {
                const Vec2 step = r - q;
                ok = norm2(r - pred) < 0.5 * h && dot2(step, tau) > 0 && dom.contains(r);
            }
            if (!ok) {
                h *= 0.5;
                if (h < 1e-6) return "corrector failure";
                continue;
            }
            detail::SampleProbe next;
            try {
                next = detail::probe_sample(F, r, tau, ref, opt.kind_tolerance);
            } catch (const DegenerateError&) {
                result.degenerate_at = r;
                return "degenerate point";
            }
            if (norm2(next.s.lambda_grad) <= detail::gradient_threshold(F, r)) {
                result.degenerate_at = r;
                return "degenerate point";
            }
            t += sigma * detail::chord(F, q, r);
            next.s.t = t;
            out.push_back(next);
            cur = next;
            tau = next.s.tangent;
            h = std::min(opt.step, 2.0 * h);
        }
        return "max samples";
    };

    if (opt.direction != TraceDirection::backward) result.stop_forward = march(+1, fwd);
    if (opt.direction != TraceDirection::forward) result.stop_backward = march(-1, bwd);

    // Backward samples carry tangents pointing backwards; re-orient them to
    // the forward direction so the whole list is one oriented curve.
    std::vector<detail::SampleProbe> all;
    for (auto it = bwd.rbegin(); it != bwd.rend(); ++it) {
        auto s = *it;
        s.s = detail::probe_sample(F, s.s.p, -1.0 * s.s.tangent, s.s.nu, opt.kind_tolerance).s;
        s.s.t = it->s.t;
        all.push_back(s);
    }
    result.seed_index = all.size();
    all.push_back(first);
    for (auto& s : fwd) all.push_back(s);
    if (opt.direction == TraceDirection::backward) {
        // Report in the traversal order of the requested direction.
        std::reverse(all.begin(), all.end());
        result.seed_index = 0;
        for (auto& s : all) {
            s.s = detail::probe_sample(F, s.s.p, -1.0 * s.s.tangent, s.s.nu, opt.kind_tolerance).s;
        }
        double t = 0;
        for (std::size_t i = 1; i < all.size(); ++i) {
            t += detail::chord(F, all[i - 1].s.p, all[i].s.p);
            all[i].s.t = t;
        }
    }

    if (opt.locate_second_kind && all.size() >= 2) {
        std::vector<detail::SampleProbe> out;
        // orient raw η continuously along the list
        for (std::size_t i = 1; i < all.size(); ++i)
            if (dot2(all[i].eta_raw, all[i - 1].eta_raw) < 0) all[i].eta_raw = -1.0 * all[i].eta_raw;
        out.push_back(all[0]);
        for (std::size_t i = 1; i < all.size(); ++i) {
            const auto& A = all[i - 1];
            const auto& B = all[i];
            const double da = det2(A.s.tangent, A.eta_raw), db = det2(B.s.tangent, B.eta_raw);
            if (A.s.kind == SingularKind::first && B.s.kind == SingularKind::first && da * db < 0) {
                // bisection on the segment, corrected onto the curve
                double lo = 0.0, hi = 1.0, flo = da;
                detail::SampleProbe best = A;
                for (int it = 0; it < 60; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    const Point2 guess{A.s.p.u + mid * (B.s.p.u - A.s.p.u), A.s.p.v + mid * (B.s.p.v - A.s.p.v)};
                    Point2 r;
                    try {
                        r = F.correct_to_singular(guess, A.s.nu);
                    } catch (const Error&) {
                        break;
                    }
                    auto pm = detail::probe_sample(F, r, A.s.tangent, A.s.nu, opt.kind_tolerance);
                    if (dot2(pm.eta_raw, A.eta_raw) < 0) pm.eta_raw = -1.0 * pm.eta_raw;
                    const double fm = det2(pm.s.tangent, pm.eta_raw);
                    best = pm;
                    if (pm.s.kind == SingularKind::second || std::abs(fm) < 1e-14) break;
                    if (fm * flo < 0) hi = mid;
                    else { lo = mid; flo = fm; }
                }
                if (best.s.kind == SingularKind::second) {
                    best.s.located = true;
                    best.s.t = A.s.t + (A.s.t <= B.s.t ? 1 : -1) * detail::chord(F, A.s.p, best.s.p);
                    out.push_back(best);
                }
            }
            out.push_back(B);
        }
        // Even-order zeros of det(γ', η) (peaks) do not change sign: look for
        // interior minima of |det| that reach the kind threshold.
        std::vector<detail::SampleProbe> merged;
        merged.push_back(out[0]);
        auto measure = [](const detail::SampleProbe& x) { return std::abs(det2(x.s.tangent, x.eta_raw)); };
        for (std::size_t i = 1; i + 1 < out.size(); ++i) {
            merged.push_back(out[i]);
            const auto& A = out[i - 1];
            const auto& B = out[i];
            const auto& C = out[i + 1];
            if (A.s.kind != SingularKind::first || B.s.kind != SingularKind::first || C.s.kind != SingularKind::first)
                continue;
            if (!(measure(B) < measure(A) && measure(B) < measure(C))) continue;
            auto at = [&](double x) -> std::optional<detail::SampleProbe> {
                const detail::SampleProbe& P = x < 0 ? A : C;
                const double a = std::abs(x);
                const Point2 guess{B.s.p.u + a * (P.s.p.u - B.s.p.u), B.s.p.v + a * (P.s.p.v - B.s.p.v)};
                try {
                    const Point2 r = F.correct_to_singular(guess, B.s.nu);
                    return detail::probe_sample(F, r, B.s.tangent, B.s.nu, opt.kind_tolerance);
                } catch (const Error&) {
                    return std::nullopt;
                }
            };
            // golden-section search on x in [-1, 1] (x < 0 towards A)
            const double g = 0.5 * (std::sqrt(5.0) - 1.0);
            double lo = -1.0, hi = 1.0;
            double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
            auto p1 = at(x1), p2 = at(x2);
            std::optional<detail::SampleProbe> best;
            double best_x = 0.0;
            for (int it = 0; it < 80 && p1 && p2; ++it) {
                for (auto [px, xx] : {std::pair{&p1, x1}, std::pair{&p2, x2}})
                    if ((*px)->s.kind == SingularKind::second && (!best || measure(**px) < measure(*best))) {
                        best = *px;
                        best_x = xx;
                    }
                if (hi - lo < 1e-12) break;
                if (measure(*p1) < measure(*p2)) {
                    hi = x2; x2 = x1; p2 = p1;
                    x1 = hi - g * (hi - lo); p1 = at(x1);
                } else {
                    lo = x1; x1 = x2; p1 = p2;
                    x2 = lo + g * (hi - lo); p2 = at(x2);
                }
            }
            if (!best) continue;
            best->s.located = true;
            const double dt = detail::chord(F, B.s.p, best->s.p);
            const bool toward_c = best_x > 0;
            best->s.t = B.s.t + ((C.s.t >= B.s.t) == toward_c ? dt : -dt);
            if (toward_c) {
                merged.push_back(*best);
            } else {
                merged.insert(merged.end() - 1, *best);
            }
        }
        if (out.size() > 1) merged.push_back(out.back());
        out = std::move(merged);
        std::size_t seed_idx = 0;
        for (std::size_t i = 0; i < out.size(); ++i)
            if (out[i].s.p == all[result.seed_index].s.p) { seed_idx = i; break; }
        result.seed_index = seed_idx;
        all = std::move(out);
    }
    for (auto& s : all) result.samples.push_back(s.s);
    return result;
}

} // namespace frontlab
