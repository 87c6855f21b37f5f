#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "frontlab/errors.hpp"
#include "frontlab/frontal.hpp"

namespace frontlab {

struct MeshStats {
    std::size_t vertices = 0;
    std::size_t triangles = 0;
};

/// Triangulated parameter grid of nu x nv vertices over the surface domain,
/// written as `v x y z` / `f i j k` records (1-based indices).
inline MeshStats write_mesh(const FrontalSurface& F, int nu, int nv, std::ostream& os) {
    if (nu < 2 || nv < 2) throw ArgumentError("mesh grid needs at least 2 vertices per direction");
    const Domain& d = F.domain();
    MeshStats st;
    char buf[128];
    os << "# " << F.spec().name << " " << nu << "x" << nv << "\n";
    for (int j = 0; j < nv; ++j) {
        const double v = d.v_lo + (d.v_hi - d.v_lo) * j / (nv - 1);
        for (int i = 0; i < nu; ++i) {
            const double u = d.u_lo + (d.u_hi - d.u_lo) * i / (nu - 1);
            const Vec3 x = F.map_value({u, v});
            std::snprintf(buf, sizeof buf, "v %.10g %.10g %.10g\n", x[0], x[1], x[2]);
            os << buf;
            ++st.vertices;
        }
    }
    auto id = [nu](int i, int j) { return j * nu + i + 1; };
    for (int j = 0; j + 1 < nv; ++j)
        for (int i = 0; i + 1 < nu; ++i) {
            const int a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1), e = id(i, j + 1);
            std::snprintf(buf, sizeof buf, "f %d %d %d\nf %d %d %d\n", a, b, c, a, c, e);
            os << buf;
            st.triangles += 2;
        }
    if (!os) throw Error("mesh write failed");
    return st;
}

/// Parses "N" or "NxM".
inline std::pair<int, int> parse_grid(const std::string& s) {
    int a = 0, b = 0;
    char x = 0, tail = 0;
    const int got = std::sscanf(s.c_str(), "%d%c%d%c", &a, &x, &b, &tail);
    if (got == 1) return {a, a};
    if (got == 3 && (x == 'x' || x == 'X')) return {a, b};
    throw ArgumentError("grid must look like N or NxM, got '" + s + "'");
}

} // namespace frontlab
