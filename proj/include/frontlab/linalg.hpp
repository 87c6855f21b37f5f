#pragma once

#include <array>
#include <cmath>

#include "frontlab/jet.hpp"

namespace frontlab {

template <class T>
using Vec3T = std::array<T, 3>;
template <class T>
using Mat3T = std::array<std::array<T, 3>, 3>;

using Vec3 = Vec3T<double>;
using Vec3J = Vec3T<Jet2>;
using Mat3 = Mat3T<double>;

struct Vec2 {
    double u = 0.0;
    double v = 0.0;
};

inline double dot2(Vec2 a, Vec2 b) { return a.u * b.u + a.v * b.v; }
inline double det2(Vec2 a, Vec2 b) { return a.u * b.v - a.v * b.u; }
inline double norm2(Vec2 a) { return std::hypot(a.u, a.v); }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.u, s * a.v}; }
inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.u + b.u, a.v + b.v}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.u - b.u, a.v - b.v}; }
inline Point2 operator+(Point2 p, Vec2 a) { return {p.u + a.u, p.v + a.v}; }
inline Vec2 operator-(Point2 a, Point2 b) { return {a.u - b.u, a.v - b.v}; }

template <class T>
Vec3T<T> add(const Vec3T<T>& a, const Vec3T<T>& b) {
    return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}

template <class T>
Vec3T<T> sub(const Vec3T<T>& a, const Vec3T<T>& b) {
    return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}

template <class T, class S>
Vec3T<T> scale(const S& s, const Vec3T<T>& a) {
    return {s * a[0], s * a[1], s * a[2]};
}

template <class T>
Vec3T<T> neg(const Vec3T<T>& a) {
    return {-a[0], -a[1], -a[2]};
}

template <class T>
T dot(const Vec3T<T>& a, const Vec3T<T>& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

template <class T>
Vec3T<T> cross(const Vec3T<T>& a, const Vec3T<T>& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

template <class T>
T det3(const Vec3T<T>& a, const Vec3T<T>& b, const Vec3T<T>& c) {
    return dot(a, cross(b, c));
}

template <class T>
Vec3T<T> mat_vec(const Mat3T<T>& m, const Vec3T<T>& x) {
    return {m[0][0] * x[0] + m[0][1] * x[1] + m[0][2] * x[2],
            m[1][0] * x[0] + m[1][1] * x[1] + m[1][2] * x[2],
            m[2][0] * x[0] + m[2][1] * x[1] + m[2][2] * x[2]};
}

template <class T>
T det3(const Mat3T<T>& m) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

/// Inverse through the adjugate; `det` must be invertible.
template <class T>
Mat3T<T> inverse3(const Mat3T<T>& m, const T& det) {
    const T inv = 1.0 / det;
    Mat3T<T> r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            const int a = (j + 1) % 3, b = (j + 2) % 3, c = (i + 1) % 3, d = (i + 2) % 3;
            r[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                (m[a][c] * m[b][d] - m[a][d] * m[b][c]) * inv;
        }
    return r;
}

inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

inline Vec3 values(const Vec3J& a) { return {a[0].value(), a[1].value(), a[2].value()}; }

inline Vec3J constant_vec(const Jet2& proto, const Vec3& a) {
    return {lift_like(proto, a[0]), lift_like(proto, a[1]), lift_like(proto, a[2])};
}

inline Vec3J partial(const Vec3J& a, Axis axis) {
    return {a[0].partial(axis), a[1].partial(axis), a[2].partial(axis)};
}

inline Vec3J truncated(const Vec3J& a, int order) {
    return {a[0].truncated(order), a[1].truncated(order), a[2].truncated(order)};
}

inline Vec3J deflate(const Vec3J& a, Axis axis, double rel_tol = 1e-9) {
    return {a[0].deflate(axis, rel_tol), a[1].deflate(axis, rel_tol), a[2].deflate(axis, rel_tol)};
}

inline Vec3J along(const Vec3J& a, Axis axis) {
    return {a[0].along(axis), a[1].along(axis), a[2].along(axis)};
}

inline Vec3J compose(const Vec3J& a, const Jet2& du, const Jet2& dv) {
    return {compose(a[0], du, dv), compose(a[1], du, dv), compose(a[2], du, dv)};
}

inline int min_order(const Vec3J& a) {
    return std::min({a[0].order(), a[1].order(), a[2].order()});
}

} // namespace frontlab
