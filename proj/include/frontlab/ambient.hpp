#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "frontlab/errors.hpp"
#include "frontlab/expr.hpp"
#include "frontlab/linalg.hpp"

namespace frontlab {

/// Riemannian metric on a coordinate chart of the ambient 3-manifold.
class AmbientChart {
public:
    enum class Kind { euclidean, general };
    using ExprMatrix = std::array<std::array<Expression, 3>, 3>;

    AmbientChart() = default;

    static AmbientChart euclidean() { return AmbientChart(); }

    /// `g` must be symmetric as written (entry (i,j) and (j,i) are both read).
    static AmbientChart general(const ExprMatrix& g, std::string label = "custom") {
        AmbientChart c;
        c.kind_ = Kind::general;
        c.label_ = std::move(label);
        c.g_ = g;
        for (int k = 0; k < 3; ++k)
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) {
                    c.dg_[k][i][j] = g[i][j].derivative(k);
                    for (int l = 0; l < 3; ++l) c.d2g_[l][k][i][j] = c.dg_[k][i][j].derivative(l);
                }
        return c;
    }

    /// Conformally flat chart g = phi(x) δ.
    static AmbientChart conformal(const Expression& phi, std::string label) {
        ExprMatrix g;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) g[i][j] = i == j ? phi : Expression::constant(0.0);
        return general(g, std::move(label));
    }

    /// Stereographic chart of the unit sphere, constant curvature +1.
    static AmbientChart sphere() {
        return conformal(parse_expression("4/(1 + x1^2 + x2^2 + x3^2)^2", ambient_variables()), "sphere");
    }

    /// Poincaré ball chart of hyperbolic space, constant curvature -1.
    static AmbientChart hyperbolic() {
        return conformal(parse_expression("4/(1 - x1^2 - x2^2 - x3^2)^2", ambient_variables()),
                         "hyperbolic");
    }

    Kind kind() const noexcept { return kind_; }
    bool is_euclidean() const noexcept { return kind_ == Kind::euclidean; }
    const std::string& label() const noexcept { return label_; }
    const ExprMatrix& g() const noexcept { return g_; }
    const ExprMatrix& dg(int k) const { return dg_[static_cast<std::size_t>(k)]; }
    const ExprMatrix& d2g(int l, int k) const {
        return d2g_[static_cast<std::size_t>(l)][static_cast<std::size_t>(k)];
    }

    void collect_parameters(std::set<std::string>& out) const {
        if (is_euclidean()) return;
        for (const auto& row : g_)
            for (const auto& e : row) e.collect_parameters(out);
    }

private:
    Kind kind_ = Kind::euclidean;
    std::string label_ = "euclidean";
    ExprMatrix g_;
    std::array<ExprMatrix, 3> dg_;
    std::array<std::array<ExprMatrix, 3>, 3> d2g_;
};

/// Metric data evaluated along a point (value or jet): g, g^{-1}, sqrt(det g),
/// and optionally the Christoffel symbols gamma[k][i][j] = Γ^k_ij.
template <class T>
struct MetricAt {
    bool euclidean = true;
    Mat3T<T> g;
    Mat3T<T> ginv;
    T sqrt_det;
    std::array<Mat3T<T>, 3> gamma;
    bool has_christoffel = false;
};

namespace detail {

inline double const_term(double x) { return x; }
inline double const_term(const Jet2& x) { return x.value(); }

template <class T>
Mat3T<T> evaluate_matrix(const AmbientChart::ExprMatrix& m, const Vec3T<T>& x, const Params& params) {
    std::vector<T> vars{x[0], x[1], x[2]};
    Mat3T<T> r;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) r[i][j] = m[i][j].evaluate(vars, params);
    return r;
}

template <class T>
void check_positive_definite(const Mat3T<T>& g) {
    const double a = const_term(g[0][0]);
    const double b = const_term(g[0][0]) * const_term(g[1][1]) - const_term(g[0][1]) * const_term(g[1][0]);
    Mat3 m;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) m[i][j] = const_term(g[i][j]);
    const double c = det3(m);
    if (!(a > 0.0 && b > 0.0 && c > 0.0)) throw DomainError("metric not positive definite");
}

} // namespace detail

template <class T>
MetricAt<T> metric_at(const AmbientChart& chart, const Vec3T<T>& x, const Params& params,
                      bool with_christoffel = true) {
    MetricAt<T> m;
    const T one = lift_like(x[0], 1.0);
    const T zero = lift_like(x[0], 0.0);
    if (chart.is_euclidean()) {
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) {
                m.g[i][j] = i == j ? one : zero;
                m.ginv[i][j] = m.g[i][j];
                for (std::size_t k = 0; k < 3; ++k) m.gamma[k][i][j] = zero;
            }
        m.sqrt_det = one;
        m.has_christoffel = true;
        return m;
    }
    m.euclidean = false;
    m.g = detail::evaluate_matrix(chart.g(), x, params);
    detail::check_positive_definite(m.g);
    const T det = det3(m.g);
    using std::sqrt;
    m.sqrt_det = sqrt(det);
    m.ginv = inverse3(m.g, det);
    if (with_christoffel) {
        std::array<Mat3T<T>, 3> dg;
        for (int k = 0; k < 3; ++k) dg[static_cast<std::size_t>(k)] = detail::evaluate_matrix(chart.dg(k), x, params);
        for (std::size_t k = 0; k < 3; ++k)
            for (std::size_t i = 0; i < 3; ++i)
                for (std::size_t j = 0; j < 3; ++j) {
                    T s = zero;
                    for (std::size_t l = 0; l < 3; ++l)
                        s = s + m.ginv[k][l] * (dg[i][l][j] + dg[j][l][i] - dg[l][i][j]);
                    m.gamma[k][i][j] = 0.5 * s;
                }
        m.has_christoffel = true;
    }
    return m;
}

template <class T>
T inner(const MetricAt<T>& m, const Vec3T<T>& a, const Vec3T<T>& b) {
    if (m.euclidean) return dot(a, b);
    T s = lift_like(a[0], 0.0);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) s = s + m.g[i][j] * a[i] * b[j];
    return s;
}

template <class T>
T norm_g(const MetricAt<T>& m, const Vec3T<T>& a) {
    using std::sqrt;
    return sqrt(inner(m, a, a));
}

template <class T>
T volume(const MetricAt<T>& m, const Vec3T<T>& a, const Vec3T<T>& b, const Vec3T<T>& c) {
    if (m.euclidean) return det3(a, b, c);
    return m.sqrt_det * det3(a, b, c);
}

template <class T>
Vec3T<T> cross_metric(const MetricAt<T>& m, const Vec3T<T>& a, const Vec3T<T>& b) {
    if (m.euclidean) return cross(a, b);
    return scale(m.sqrt_det, mat_vec(m.ginv, cross(a, b)));
}

/// ∇_{∂dir} X along a surface: ∂X/∂dir + Γ(∂f/∂dir, X).
/// `m` holds the metric along f (same base, Christoffels included).
inline Vec3J covariant(const MetricAt<Jet2>& m, const Vec3J& f_dir, const Vec3J& X, Axis dir) {
    Vec3J r = partial(X, dir);
    if (m.euclidean) return r;
    for (std::size_t k = 0; k < 3; ++k)
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) r[k] = r[k] + m.gamma[k][i][j] * f_dir[i] * X[j];
    return r;
}

/// Covariant derivative along a tangent direction with known components.
inline Vec3 covariant_value(const MetricAt<double>& m, const Vec3& f_dir, const Vec3& dX, const Vec3& X) {
    Vec3 r = dX;
    if (m.euclidean) return r;
    for (std::size_t k = 0; k < 3; ++k)
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) r[k] += m.gamma[k][i][j] * f_dir[i] * X[j];
    return r;
}

// Free-function forms taking the chart directly.

inline Jet2 inner_product(const AmbientChart& chart, const Vec3J& x, const Vec3J& a, const Vec3J& b,
                          const Params& params = {}) {
    return inner(metric_at(chart, x, params, false), a, b);
}

inline Jet2 det_g(const AmbientChart& chart, const Vec3J& x, const Vec3J& a, const Vec3J& b,
                  const Vec3J& c, const Params& params = {}) {
    return volume(metric_at(chart, x, params, false), a, b, c);
}

inline Vec3J cross_g(const AmbientChart& chart, const Vec3J& x, const Vec3J& a, const Vec3J& b,
                     const Params& params = {}) {
    return cross_metric(metric_at(chart, x, params, false), a, b);
}

/// Covariant derivative of a field along the surface map f in direction u or v.
inline Vec3J covariant_derivative(const AmbientChart& chart, const Vec3J& f, const Vec3J& field, Axis dir,
                                  const Params& params = {}) {
    if (min_order(f) < 1 || min_order(field) < 1) throw DomainError("insufficient jet order");
    auto m = metric_at(chart, truncated(f, min_order(field) - 1), params, true);
    return covariant(m, partial(f, dir), field, dir);
}

/// Sectional curvature of the plane spanned by a and b at x.
inline double sectional_curvature(const AmbientChart& chart, const Vec3& x, const Vec3& a, const Vec3& b,
                                  const Params& params = {}) {
    auto m = metric_at<double>(chart, x, params, true);
    const double aa = inner(m, a, a), bb = inner(m, b, b), ab = inner(m, a, b);
    const double area2 = aa * bb - ab * ab;
    if (!(area2 > 1e-24 * aa * bb) || aa <= 0.0 || bb <= 0.0) throw DomainError("degenerate plane");
    if (chart.is_euclidean()) return 0.0;

    // dg[m][i][j] = ∂_m g_ij ; d2g[n][m][i][j] = ∂_n ∂_m g_ij
    std::array<Mat3, 3> dg;
    std::array<std::array<Mat3, 3>, 3> d2g;
    for (int k = 0; k < 3; ++k) {
        dg[static_cast<std::size_t>(k)] = detail::evaluate_matrix<double>(chart.dg(k), x, params);
        for (int l = 0; l < 3; ++l)
            d2g[static_cast<std::size_t>(l)][static_cast<std::size_t>(k)] =
                detail::evaluate_matrix<double>(chart.d2g(l, k), x, params);
    }
    // S[l][i][j] = ∂_i g_lj + ∂_j g_li − ∂_l g_ij and its derivatives.
    double S[3][3][3], dS[3][3][3][3], dginv[3][3][3], dGamma[3][3][3][3];
    for (int l = 0; l < 3; ++l)
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                S[l][i][j] = dg[i][l][j] + dg[j][l][i] - dg[l][i][j];
                for (int n = 0; n < 3; ++n)
                    dS[n][l][i][j] = d2g[n][i][l][j] + d2g[n][j][l][i] - d2g[n][l][i][j];
            }
    for (int n = 0; n < 3; ++n)
        for (int k = 0; k < 3; ++k)
            for (int l = 0; l < 3; ++l) {
                double s = 0.0;
                for (int p = 0; p < 3; ++p)
                    for (int q = 0; q < 3; ++q) s -= m.ginv[k][p] * dg[n][p][q] * m.ginv[q][l];
                dginv[n][k][l] = s;
            }
    for (int n = 0; n < 3; ++n)
        for (int k = 0; k < 3; ++k)
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) {
                    double s = 0.0;
                    for (int l = 0; l < 3; ++l) s += dginv[n][k][l] * S[l][i][j] + m.ginv[k][l] * dS[n][l][i][j];
                    dGamma[n][k][i][j] = 0.5 * s;
                }
    // R(X,Y)Y with R^l_ijk = ∂_iΓ^l_jk − ∂_jΓ^l_ik + Γ^l_ip Γ^p_jk − Γ^l_jp Γ^p_ik
    const auto& G = m.gamma;
    Vec3 r{0.0, 0.0, 0.0};
    for (int l = 0; l < 3; ++l)
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k) {
                    double R = dGamma[i][l][j][k] - dGamma[j][l][i][k];
                    for (int p = 0; p < 3; ++p) R += G[l][i][p] * G[p][j][k] - G[l][j][p] * G[p][i][k];
                    r[static_cast<std::size_t>(l)] += R * a[i] * b[j] * b[k];
                }
    return inner(m, r, a) / area2;
}

} // namespace frontlab
