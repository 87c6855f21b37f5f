#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "frontlab/errors.hpp"

namespace frontlab {

struct Point2 {
    double u = 0.0;
    double v = 0.0;

    friend bool operator==(const Point2&, const Point2&) = default;
};

enum class Axis { u, v };

/// Truncated bivariate Taylor expansion at a base point.
///
/// Coefficient (i, j) is the Taylor coefficient of du^i dv^j, i.e. the mixed
/// partial derivative divided by i! j!. Coefficients are stored by total
/// degree so that truncation to a lower order is a prefix.
class Jet2 {
public:
    Jet2() : Jet2(0) {}

    explicit Jet2(int order, double value = 0.0, Point2 base = {})
        : order_(order), base_(base) {
        if (order < 0) throw std::invalid_argument("Jet2: negative order");
        c_.assign(coefficient_count(order), 0.0);
        c_[0] = value;
    }

    /// The coordinate function of `axis` itself: value base.u (or base.v),
    /// unit linear coefficient.
    static Jet2 variable(Axis axis, int order, Point2 base = {}) {
        Jet2 j(order, axis == Axis::u ? base.u : base.v, base);
        if (order >= 1) j.at(axis == Axis::u ? 1 : 0, axis == Axis::u ? 0 : 1) = 1.0;
        return j;
    }

    /// The increment du (or dv) with zero constant term.
    static Jet2 offset(Axis axis, int order, Point2 base = {}) {
        Jet2 j = variable(axis, order, base);
        j.c_[0] = 0.0;
        return j;
    }

    static std::size_t coefficient_count(int order) {
        return static_cast<std::size_t>(order + 1) * static_cast<std::size_t>(order + 2) / 2;
    }

    int order() const noexcept { return order_; }
    Point2 base() const noexcept { return base_; }
    std::size_t size() const noexcept { return c_.size(); }

    /// Coefficient of du^i dv^j; zero beyond the truncation order.
    double coeff(int i, int j) const {
        if (i < 0 || j < 0 || i + j > order_) return 0.0;
        return c_[index(i, j)];
    }

    double& at(int i, int j) {
        if (i < 0 || j < 0 || i + j > order_)
            throw std::out_of_range("Jet2::at: index beyond order");
        return c_[index(i, j)];
    }

    double value() const noexcept { return c_[0]; }

    /// ∂^{i+j}/∂u^i∂v^j at the base point.
    double derivative(int i, int j) const {
        return coeff(i, j) * factorial(i) * factorial(j);
    }

    double max_abs() const {
        double m = 0.0;
        for (double x : c_) m = std::max(m, std::abs(x));
        return m;
    }

    /// Sum of the truncated series at base + (du, dv).
    double evaluate(double du, double dv) const {
        double total = 0.0;
        double pu = 1.0;
        for (int i = 0; i <= order_; ++i) {
            double inner = 0.0;
            for (int j = order_ - i; j >= 0; --j) inner = inner * dv + coeff(i, j);
            total += pu * inner;
            pu *= du;
        }
        return total;
    }

    Jet2 truncated(int order) const {
        if (order >= order_) return *this;
        Jet2 r(std::max(order, 0), 0.0, base_);
        std::copy_n(c_.begin(), r.c_.size(), r.c_.begin());
        return r;
    }

    Jet2 with_base(Point2 base) const {
        Jet2 r = *this;
        r.base_ = base;
        return r;
    }

    /// Partial derivative; the order drops by one.
    Jet2 partial(Axis axis) const {
        if (order_ == 0) throw DomainError("insufficient jet order for differentiation");
        Jet2 r(order_ - 1, 0.0, base_);
        for (int d = 0; d <= order_ - 1; ++d)
            for (int j = 0; j <= d; ++j) {
                int i = d - j;
                r.c_[index(i, j)] = axis == Axis::u ? (i + 1) * coeff(i + 1, j)
                                                    : (j + 1) * coeff(i, j + 1);
            }
        return r;
    }

    /// Divide by the named increment. Every coefficient free of that
    /// variable must vanish to `rel_tol` times the largest coefficient, or
    /// times `scale_hint` when that is larger (cancellation in products).
    Jet2 deflate(Axis axis, double rel_tol = 1e-9, double scale_hint = 0.0) const {
        if (order_ == 0) throw DomainError("insufficient jet order for deflation");
        const double scale = std::max(max_abs(), scale_hint);
        for (int k = 0; k <= order_; ++k) {
            double r = axis == Axis::u ? coeff(0, k) : coeff(k, 0);
            if (std::abs(r) > rel_tol * scale)
                throw DomainError("non-divisible jet: quantity does not vanish on the axis");
        }
        Jet2 r(order_ - 1, 0.0, base_);
        for (int d = 0; d <= order_ - 1; ++d)
            for (int j = 0; j <= d; ++j) {
                int i = d - j;
                r.c_[index(i, j)] = axis == Axis::u ? coeff(i + 1, j) : coeff(i, j + 1);
            }
        return r;
    }

    /// Multiply by the named increment; the order grows by one so that
    /// deflation undoes it exactly.
    Jet2 times_increment(Axis axis) const {
        Jet2 r(order_ + 1, 0.0, base_);
        for (int d = 0; d <= order_; ++d)
            for (int j = 0; j <= d; ++j) {
                int i = d - j;
                if (axis == Axis::u) r.at(i + 1, j) = coeff(i, j);
                else r.at(i, j + 1) = coeff(i, j);
            }
        return r;
    }

    /// Restriction to the line through the base along `axis` (the other
    /// increment set to zero). The result depends on that axis only.
    Jet2 along(Axis axis) const {
        Jet2 r(order_, 0.0, base_);
        for (int k = 0; k <= order_; ++k) {
            if (axis == Axis::u) r.at(k, 0) = coeff(k, 0);
            else r.at(0, k) = coeff(0, k);
        }
        return r;
    }

    Jet2 operator-() const {
        Jet2 r = *this;
        for (double& x : r.c_) x = -x;
        return r;
    }

    Jet2& operator+=(const Jet2& o) { return *this = *this + o; }
    Jet2& operator-=(const Jet2& o) { return *this = *this - o; }
    Jet2& operator*=(const Jet2& o) { return *this = *this * o; }
    Jet2& operator/=(const Jet2& o) { return *this = *this / o; }
    Jet2& operator+=(double s) { c_[0] += s; return *this; }
    Jet2& operator-=(double s) { c_[0] -= s; return *this; }
    Jet2& operator*=(double s) { for (double& x : c_) x *= s; return *this; }
    Jet2& operator/=(double s) { for (double& x : c_) x /= s; return *this; }

    friend Jet2 operator+(const Jet2& a, const Jet2& b) {
        Jet2 r(std::min(a.order_, b.order_), 0.0, common_base(a, b));
        for (std::size_t k = 0; k < r.c_.size(); ++k) r.c_[k] = a.c_[k] + b.c_[k];
        return r;
    }

    friend Jet2 operator-(const Jet2& a, const Jet2& b) {
        Jet2 r(std::min(a.order_, b.order_), 0.0, common_base(a, b));
        for (std::size_t k = 0; k < r.c_.size(); ++k) r.c_[k] = a.c_[k] - b.c_[k];
        return r;
    }

    friend Jet2 operator*(const Jet2& a, const Jet2& b) {
        const int n = std::min(a.order_, b.order_);
        Jet2 r(n, 0.0, common_base(a, b));
        for (int d1 = 0; d1 <= n; ++d1)
            for (int j1 = 0; j1 <= d1; ++j1) {
                const double x = a.c_[index(d1 - j1, j1)];
                if (x == 0.0) continue;
                for (int d2 = 0; d2 <= n - d1; ++d2) {
                    const std::size_t base_r = static_cast<std::size_t>(d1 + d2) * (d1 + d2 + 1) / 2 + j1;
                    const std::size_t base_b = static_cast<std::size_t>(d2) * (d2 + 1) / 2;
                    for (int j2 = 0; j2 <= d2; ++j2) r.c_[base_r + j2] += x * b.c_[base_b + j2];
                }
            }
        return r;
    }

    friend Jet2 operator/(const Jet2& a, const Jet2& b) { return a * reciprocal(b); }

    friend Jet2 operator+(Jet2 a, double s) { a.c_[0] += s; return a; }
    friend Jet2 operator+(double s, Jet2 a) { a.c_[0] += s; return a; }
    friend Jet2 operator-(Jet2 a, double s) { a.c_[0] -= s; return a; }
    friend Jet2 operator-(double s, const Jet2& a) { Jet2 r = -a; r.c_[0] += s; return r; }
    friend Jet2 operator*(Jet2 a, double s) { a *= s; return a; }
    friend Jet2 operator*(double s, Jet2 a) { a *= s; return a; }
    friend Jet2 operator/(Jet2 a, double s) { a /= s; return a; }
    friend Jet2 operator/(double s, const Jet2& a) { return s * reciprocal(a); }

    /// φ(a) for a univariate function given by its Taylor coefficients
    /// taylor[k] = φ^(k)(a0)/k! at a0 = a.value().
    friend Jet2 compose_taylor(const Jet2& a, const std::vector<double>& taylor) {
        const int n = a.order_;
        Jet2 h = a;
        h.c_[0] = 0.0;
        Jet2 r(n, taylor.empty() ? 0.0 : taylor.back(), a.base_);
        for (int k = static_cast<int>(taylor.size()) - 2; k >= 0; --k) {
            r = r * h;
            r.c_[0] += taylor[static_cast<std::size_t>(k)];
        }
        return r;
    }

    friend Jet2 reciprocal(const Jet2& a) {
        const double a0 = a.value();
        if (a0 == 0.0 || !std::isfinite(a0))
            throw DomainError("division by a jet with zero constant term");
        std::vector<double> t(static_cast<std::size_t>(a.order_) + 1);
        double p = 1.0 / a0;
        for (auto& x : t) { x = p; p *= -1.0 / a0; }
        return compose_taylor(a, t);
    }

    friend Jet2 pow_real(const Jet2& a, double r) {
        const double a0 = a.value();
        if (!(a0 > 0.0)) throw DomainError("real power of a jet with non-positive constant term");
        std::vector<double> t(static_cast<std::size_t>(a.order_) + 1);
        double binom = 1.0;
        double p = std::pow(a0, r);
        for (std::size_t k = 0; k < t.size(); ++k) {
            t[k] = binom * p;
            binom *= (r - static_cast<double>(k)) / static_cast<double>(k + 1);
            p /= a0;
        }
        return compose_taylor(a, t);
    }

    friend Jet2 sqrt(const Jet2& a) {
        if (!(a.value() > 0.0)) throw DomainError("sqrt of a non-positive value");
        return pow_real(a, 0.5);
    }

    friend Jet2 exp(const Jet2& a) {
        std::vector<double> t(static_cast<std::size_t>(a.order_) + 1);
        double p = std::exp(a.value());
        for (std::size_t k = 0; k < t.size(); ++k) { t[k] = p; p /= static_cast<double>(k + 1); }
        return compose_taylor(a, t);
    }

    friend Jet2 log(const Jet2& a) {
        const double a0 = a.value();
        if (!(a0 > 0.0)) throw DomainError("log of a non-positive value");
        std::vector<double> t(static_cast<std::size_t>(a.order_) + 1);
        t[0] = std::log(a0);
        double p = 1.0 / a0;
        for (std::size_t k = 1; k < t.size(); ++k) {
            t[k] = ((k % 2) ? 1.0 : -1.0) * p / static_cast<double>(k);
            p /= a0;
        }
        return compose_taylor(a, t);
    }

    friend Jet2 sin(const Jet2& a) { return trig(a, 0); }
    friend Jet2 cos(const Jet2& a) { return trig(a, 1); }
    friend Jet2 tan(const Jet2& a) { return sin(a) / cos(a); }

    friend Jet2 pow_int(const Jet2& a, long n) {
        if (n < 0) return reciprocal(pow_int(a, -n));
        Jet2 r(a.order_, 1.0, a.base_);
        Jet2 b = a;
        while (n > 0) {
            if (n & 1) r = r * b;
            n >>= 1;
            if (n > 0) b = b * b;
        }
        return r;
    }

    /// outer(du, dv) for increment jets du, dv with zero constant terms.
    /// The result lives at the base of du and is exact through
    /// min(outer order, increment order).
    friend Jet2 compose(const Jet2& outer, const Jet2& du, const Jet2& dv) {
        const double tiny = 1e-14 * (1.0 + std::abs(du.value()) + std::abs(dv.value()));
        if (std::abs(du.value()) > tiny || std::abs(dv.value()) > tiny)
            throw std::invalid_argument("compose: increments must have zero constant term");
        const int n = std::min({outer.order_, du.order_, dv.order_});
        const Point2 b = common_base(du, dv);
        Jet2 x = du.truncated(n);
        Jet2 y = dv.truncated(n);
        x.c_[0] = 0.0;
        y.c_[0] = 0.0;
        Jet2 total(n, 0.0, b);
        for (int i = n; i >= 0; --i) {
            Jet2 inner(n, outer.coeff(i, n - i), b);
            for (int j = n - i - 1; j >= 0; --j) {
                inner = inner * y;
                inner.c_[0] += outer.coeff(i, j);
            }
            total = total * x + inner;
        }
        return total;
    }

private:
    static std::size_t index(int i, int j) {
        const std::size_t d = static_cast<std::size_t>(i + j);
        return d * (d + 1) / 2 + static_cast<std::size_t>(j);
    }

    static double factorial(int n) {
        double r = 1.0;
        for (int k = 2; k <= n; ++k) r *= k;
        return r;
    }

    static Point2 common_base(const Jet2& a, const Jet2& b) {
        if (!(a.base_ == b.base_))
            throw std::invalid_argument("Jet2: operands expanded at different base points");
        return a.base_;
    }

    // phase 0: sine, phase 1: cosine
    static Jet2 trig(const Jet2& a, int phase) {
        const double s = std::sin(a.value());
        const double c = std::cos(a.value());
        const double cycle[4] = {s, c, -s, -c};
        std::vector<double> t(static_cast<std::size_t>(a.order_) + 1);
        double fact = 1.0;
        for (std::size_t k = 0; k < t.size(); ++k) {
            if (k > 0) fact *= static_cast<double>(k);
            t[k] = cycle[(k + static_cast<std::size_t>(phase)) % 4] / fact;
        }
        return compose_taylor(a, t);
    }

    int order_;
    Point2 base_;
    std::vector<double> c_;
};

/// Constant jet shaped like `proto`.
inline Jet2 lift_like(const Jet2& proto, double x) { return Jet2(proto.order(), x, proto.base()); }
inline double lift_like(double, double x) { return x; }

inline double pow_int(double a, long n) {
    double r = 1.0;
    const bool neg = n < 0;
    unsigned long m = static_cast<unsigned long>(neg ? -n : n);
    double b = a;
    while (m > 0) {
        if (m & 1u) r *= b;
        m >>= 1;
        b *= b;
    }
    return neg ? 1.0 / r : r;
}

inline double reciprocal(double a) {
    if (a == 0.0) throw DomainError("division by zero");
    return 1.0 / a;
}

} // namespace frontlab
