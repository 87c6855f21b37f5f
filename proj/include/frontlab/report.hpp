#pragma once

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>

#include "json.hpp"

#include "frontlab/boundedness.hpp"
#include "frontlab/classify.hpp"
#include "frontlab/invariants.hpp"
#include "frontlab/slicing.hpp"

namespace frontlab {

using Json = nlohmann::ordered_json;

/// Shortest fixed-width-free rendering with 17 significant digits.
inline std::string json_number(double x) {
    if (!std::isfinite(x)) return "null";
    if (x == 0.0) return std::signbit(x) ? "-0.0" : "0.0";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline std::string csv_number(double x) {
    if (std::isnan(x)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

namespace detail {

inline void write_json(std::ostringstream& os, const Json& j, int indent, int depth) {
    const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
    const std::string close(static_cast<std::size_t>(indent * depth), ' ');
    switch (j.type()) {
    case Json::value_t::object: {
        if (j.empty()) { os << "{}"; return; }
        os << "{\n";
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first) os << ",\n";
            first = false;
            os << pad << Json(it.key()).dump() << ": ";
            write_json(os, it.value(), indent, depth + 1);
        }
        os << "\n" << close << "}";
        return;
    }
    case Json::value_t::array: {
        if (j.empty()) { os << "[]"; return; }
        // arrays of scalars stay on one line
        bool flat = true;
        for (const auto& x : j) flat = flat && !x.is_structured();
        if (flat) {
            os << "[";
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) os << ", ";
                write_json(os, j[i], indent, depth + 1);
            }
            os << "]";
            return;
        }
        os << "[\n";
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (i) os << ",\n";
            os << pad;
            write_json(os, j[i], indent, depth + 1);
        }
        os << "\n" << close << "]";
        return;
    }
    case Json::value_t::number_float: os << json_number(j.get<double>()); return;
    default: os << j.dump(); return;
    }
}

} // namespace detail

/// JSON text with floats at 17 significant digits and NaN/inf as null.
inline std::string dump_json(const Json& j, int indent = 2) {
    std::ostringstream os;
    detail::write_json(os, j, indent, 0);
    os << "\n";
    return os.str();
}

inline Json to_json(Point2 p) { return Json::array({p.u, p.v}); }
inline Json to_json(Vec2 a) { return Json::array({a.u, a.v}); }
inline Json to_json(const Vec3& a) { return Json::array({a[0], a[1], a[2]}); }

template <class T>
Json opt_json(const std::optional<T>& x) {
    return x ? Json(*x) : Json(nullptr);
}

inline Json to_json(const Evidence& e) {
    Json j;
    j["p"] = to_json(e.p);
    j["lambda"] = e.lambda;
    j["lambda_grad"] = to_json(e.lambda_grad);
    j["kind"] = e.kind ? Json(to_string(*e.kind)) : Json(nullptr);
    j["kind_measure"] = e.kind_measure;
    j["is_front"] = e.is_front;
    j["front_measure"] = e.front_measure;
    j["psi_ccr"] = opt_json(e.psi_ccr);
    j["d_psi_ccr"] = opt_json(e.d_psi_ccr);
    j["transversality"] = opt_json(e.transversality);
    if (!e.note.empty()) j["note"] = e.note;
    return j;
}

inline Json to_json(const ClassificationResult& r) {
    return Json{{"label", to_string(r.label)}, {"evidence", to_json(r.evidence)}};
}

inline Json to_json(const FirstKindInvariants& v) {
    return Json{{"kappa_s", v.kappa_s},   {"kappa_nu", v.kappa_nu},     {"kappa_c", v.kappa_c},
                {"kappa_pi", v.kappa_pi}, {"d_kappa_s", v.d_kappa_s},   {"d_kappa_nu", v.d_kappa_nu},
                {"d_kappa_c", v.d_kappa_c}, {"d_kappa_pi", v.d_kappa_pi}};
}

inline Json to_json(const SecondKindInvariants& v) {
    Json j{{"kappa_nu", v.kappa_nu},
           {"kappa_H", v.kappa_H},
           {"d_kappa_nu", v.d_kappa_nu_du},
           {"derivative_variable", v.parametrization},
           {"hat_H", v.hat_H},
           {"hat_K", v.hat_K},
           {"swallowtail", v.swallowtail}};
    j["tau_s"] = opt_json(v.tau_s);
    j["tau_c"] = opt_json(v.tau_c);
    return j;
}

inline Json to_json(const InvariantSample& s) {
    Json j{{"t", s.t}, {"p", to_json(s.p)}};
    j["invariants"] = to_json(s.inv);
    j["hat_H"] = s.hat_H;
    j["hat_K"] = s.hat_K;
    j["psi_ccr"] = s.psi_ccr;
    j["d_psi_ccr"] = s.d_psi_ccr;
    return j;
}

inline Json to_json(const FunctionVerdict& v) {
    return Json{{"bounded_near", v.bounded_near},
                {"rationally_bounded", v.rationally_bounded},
                {"rationally_continuous", v.rationally_continuous}};
}

inline Json to_json(const BoundednessVerdict& v) {
    Json j{{"K", to_json(v.K)}, {"H", to_json(v.H)}, {"method", to_string(v.method)}};
    Json w = Json::object();
    for (const auto& [k, x] : v.witnesses) w[k] = x;
    j["witnesses"] = w;
    if (!v.note.empty()) j["note"] = v.note;
    return j;
}

inline Json to_json(const GaussMapTest& g) {
    Json j;
    j["gauss_singular"] = opt_json(g.gauss_singular);
    j["gauss_sigma_min"] = opt_json(g.gauss_sigma_min);
    j["kappa_nu"] = g.kappa_nu;
    j["kappa_nu_zero"] = g.kappa_nu_zero;
    j["KdA"] = g.KdA;
    j["KdA_zero"] = g.KdA_zero;
    j["agree"] = g.agree();
    return j;
}

inline Json to_json(const BlowupProbe& b) {
    Json j{{"scalar", to_string(b.scalar)}, {"p", to_json(b.p)}};
    j["radii"] = b.radii;
    j["n_theta"] = b.n_theta;
    j["excluded_directions"] = b.excluded;
    j["sector_halfwidth"] = b.sector_halfwidth;
    j["max_per_radius"] = b.max_per_radius;
    j["decade_max"] = b.decade_max;
    j["failures"] = b.failures;
    j["empirical_max"] = b.empirical_max;
    j["bounded"] = b.bounded;
    j["continuous"] = b.continuous;
    j["limit"] = opt_json(b.limit);
    return j;
}

inline Json to_json(const SliceCurve& s) {
    Json j{{"p", to_json(s.p)}, {"origin", to_json(s.origin)}, {"normal", to_json(s.normal)}};
    j["e1"] = to_json(s.e1);
    j["e2"] = to_json(s.e2);
    j["u_of_t"] = s.u_of_t;
    j["x"] = s.x;
    j["y"] = s.y;
    return j;
}

inline Json to_json(const SliceCheck& c) {
    return Json{{"kappa_c_surface", c.kappa_c_surface}, {"tau_slice", c.tau_slice}, {"rel_diff", c.rel_diff}};
}

/// σ(t) sampled from its Taylor coefficients, as "t,x,y" rows.
inline std::string slice_polyline_csv(const SliceCurve& s, double span, int n) {
    auto horner = [](const std::vector<double>& c, double t) {
        double r = 0.0;
        for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * t + *it;
        return r;
    };
    std::string out = "t,x,y\n";
    for (int i = 0; i < n; ++i) {
        const double t = n == 1 ? 0.0 : -span + 2.0 * span * i / (n - 1);
        out += csv_number(t) + "," + csv_number(horner(s.x, t)) + "," + csv_number(horner(s.y, t)) + "\n";
    }
    return out;
}

} // namespace frontlab
