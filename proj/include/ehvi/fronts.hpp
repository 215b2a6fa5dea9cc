#pragma once

// Pareto-front point-set generators for the shape families used by the
// experiments (linear, concave sphere/ellipsoid, convex, DTLZ7-style
// disconnected), CSV ingestion, and reference-point policies. Fronts are
// sampled surfaces, not decision-space optimisations: every estimator sees
// the same point set, which is all the rank-correlation studies need.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ehvi/errors.hpp"
#include "ehvi/gaussians.hpp"
#include "ehvi/hypervolume.hpp"
#include "ehvi/numerics.hpp"

namespace ehvi {

enum class FrontShape { LINEAR, CONCAVE_SPHERE, CONCAVE_ELLIPSOID, CONVEX, DISCONNECTED };

inline const char* shape_name(FrontShape s) {
    switch (s) {
        case FrontShape::LINEAR: return "linear";
        case FrontShape::CONCAVE_SPHERE: return "concave-sphere";
        case FrontShape::CONCAVE_ELLIPSOID: return "concave-ellipsoid";
        case FrontShape::CONVEX: return "convex";
        case FrontShape::DISCONNECTED: return "disconnected";
    }
    return "?";
}

inline FrontShape shape_from_name(const std::string& name) {
    for (FrontShape s : {FrontShape::LINEAR, FrontShape::CONCAVE_SPHERE,
                         FrontShape::CONCAVE_ELLIPSOID, FrontShape::CONVEX,
                         FrontShape::DISCONNECTED})
        if (name == shape_name(s)) return s;
    throw InvalidSpec("unknown front shape '" + name + "'");
}

struct FrontSpec {
    FrontShape shape = FrontShape::CONCAVE_SPHERE;
    int dim = 2;
    int count = 50;
    std::vector<double> radii;  // ellipsoid semi-axes; defaults to 2, 4, ..., 2m
};

enum class ReferencePolicy { BOX_UPPER, NADIR_PLUS_MARGIN };

/// Order-preserving maximal mutually nondominated subset (duplicates removed).
inline std::vector<ObjectiveVector> nondominated_filter(
    const std::vector<ObjectiveVector>& points) {
    if (points.empty()) throw EmptyFront("nondominated_filter: empty input");
    return detail::filter_weak(points);
}

namespace detail {

inline std::pair<ObjectiveVector, ObjectiveVector> point_bounds(
    const std::vector<ObjectiveVector>& points) {
    ObjectiveVector lo(points.front()), hi(points.front());
    for (const auto& p : points)
        for (std::size_t i = 0; i < p.size(); ++i) {
            lo[i] = std::min(lo[i], p[i]);
            hi[i] = std::max(hi[i], p[i]);
        }
    return {lo, hi};
}

/// Uniform direction on the positive orthant of the unit sphere.
inline ObjectiveVector sphere_direction(RngStream& rng, int m) {
    ObjectiveVector g(m);
    double norm = 0.0;
    do {
        norm = 0.0;
        for (int i = 0; i < m; ++i) {
            g[i] = std::abs(rng.normal());
            norm += g[i] * g[i];
        }
    } while (norm == 0.0);
    norm = std::sqrt(norm);
    for (double& v : g) v /= norm;
    return g;
}

/// Uniform point on the unit simplex (normalised exponentials).
inline ObjectiveVector simplex_direction(RngStream& rng, int m) {
    ObjectiveVector d(m);
    double sum = 0.0;
    for (int i = 0; i < m; ++i) {
        d[i] = -std::log(rng.uniform_pos());
        sum += d[i];
    }
    for (double& v : d) v /= sum;
    return d;
}

/// DTLZ7-style last objective at the surface's minimal g.
inline double disconnected_last(const ObjectiveVector& f, int m) {
    double s = 0.0;
    for (int i = 0; i < m - 1; ++i)
        s += 0.5 * f[i] * (1.0 + std::sin(3.0 * std::numbers::pi * f[i]));
    return 2.0 * (m - s);
}

}  // namespace detail

/// Points on the requested surface, nondominated-filtered. At m == 2 the
/// parameterisation is spaced deterministically; higher dimensions sample
/// random directions from the stream. DISCONNECTED generates `count`
/// candidates before filtering, so the surviving set is usually smaller.
inline std::vector<ObjectiveVector> generate_front_points(const FrontSpec& spec,
                                                          RngStream& rng) {
    const int m = spec.dim;
    if (m < 2) throw InvalidSpec("generate_front_points: dimension must be >= 2");
    if (spec.count < 1) throw InvalidSpec("generate_front_points: count must be >= 1");
    std::vector<double> radii = spec.radii;
    if (spec.shape == FrontShape::CONCAVE_ELLIPSOID) {
        if (radii.empty())
            for (int i = 1; i <= m; ++i) radii.push_back(2.0 * i);
        if (static_cast<int>(radii.size()) != m)
            throw InvalidSpec("generate_front_points: need one radius per objective");
        for (double r : radii)
            if (!(r > 0.0)) throw InvalidSpec("generate_front_points: radii must be positive");
    }

    std::vector<ObjectiveVector> pts;
    pts.reserve(spec.count);
    for (int c = 0; c < spec.count; ++c) {
        ObjectiveVector f(m);
        if (spec.shape == FrontShape::DISCONNECTED) {
            for (int i = 0; i < m - 1; ++i) {
                if (m == 2)
                    f[i] = spec.count == 1 ? 0.5
                                           : static_cast<double>(c) / (spec.count - 1);
                else
                    f[i] = rng.uniform();
            }
            f[m - 1] = detail::disconnected_last(f, m);
        } else {
            ObjectiveVector dir;
            if (m == 2) {
                const double t =
                    spec.count == 1 ? 0.5 : static_cast<double>(c) / (spec.count - 1);
                if (spec.shape == FrontShape::LINEAR)
                    dir = {t, 1.0 - t};
                else
                    dir = {std::sin(t * std::numbers::pi / 2.0),
                           std::cos(t * std::numbers::pi / 2.0)};
            } else {
                dir = spec.shape == FrontShape::LINEAR ? detail::simplex_direction(rng, m)
                                                       : detail::sphere_direction(rng, m);
            }
            switch (spec.shape) {
                case FrontShape::LINEAR:
                    for (int i = 0; i < m; ++i) f[i] = 0.5 * dir[i];
                    break;
                case FrontShape::CONCAVE_SPHERE:
                    f = dir;
                    break;
                case FrontShape::CONCAVE_ELLIPSOID:
                    for (int i = 0; i < m; ++i) f[i] = radii[i] * dir[i];
                    break;
                case FrontShape::CONVEX:
                    for (int i = 0; i < m; ++i) f[i] = 1.0 - dir[i];
                    break;
                case FrontShape::DISCONNECTED:
                    break;  // handled above
            }
        }
        pts.push_back(std::move(f));
    }
    return nondominated_filter(pts);
}

/// Reference point for a point set: BOX_UPPER reuses the upper corner of the
/// 30%-extended bounding box; NADIR_PLUS_MARGIN adds a fixed margin to the
/// per-objective maxima.
inline ObjectiveVector reference_point(const std::vector<ObjectiveVector>& points,
                                       ReferencePolicy policy, double margin = 0.1) {
    if (points.empty()) throw EmptyFront("reference_point: empty point set");
    const auto [lo, hi] = detail::point_bounds(points);
    const int m = static_cast<int>(lo.size());
    ObjectiveVector r(m);
    for (int i = 0; i < m; ++i) {
        if (policy == ReferencePolicy::BOX_UPPER) {
            const double s = hi[i] - lo[i];
            if (s == 0.0)
                throw DegenerateSpan("reference_point: zero span in objective " +
                                     std::to_string(i));
            r[i] = hi[i] + 0.3 * s;
        } else {
            r[i] = hi[i] + margin;
        }
    }
    for (const auto& p : points)
        for (int i = 0; i < m; ++i)
            if (!(p[i] < r[i]))
                throw ReferenceNotDominated(
                    "reference_point: reference not strictly dominated");
    return r;
}

inline ParetoFrontSet generate_front(const FrontSpec& spec, RngStream& rng,
                                     ReferencePolicy policy = ReferencePolicy::BOX_UPPER,
                                     double margin = 0.1) {
    auto pts = generate_front_points(spec, rng);
    auto ref = reference_point(pts, policy, margin);
    return ParetoFrontSet(std::move(pts), std::move(ref));
}

/// CSV: one point per line, comma-separated coordinates, optional header.
inline std::vector<ObjectiveVector> load_front_points(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("load_front_points: cannot open '" + path + "'");
    std::vector<ObjectiveVector> pts;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;
        ObjectiveVector p;
        std::stringstream row(line);
        std::string cell;
        bool bad = false;
        while (std::getline(row, cell, ',')) {
            try {
                std::size_t used = 0;
                const double v = std::stod(cell, &used);
                while (used < cell.size() &&
                       (cell[used] == ' ' || cell[used] == '\t' || cell[used] == '\r'))
                    ++used;
                if (used != cell.size()) throw std::invalid_argument(cell);
                p.push_back(v);
            } catch (const std::exception&) {
                bad = true;
                break;
            }
        }
        if (bad || p.empty()) {
            if (first) {
                first = false;  // header line
                continue;
            }
            throw ParseError("load_front_points: malformed line '" + line + "'");
        }
        if (!pts.empty() && p.size() != pts.front().size())
            throw ParseError("load_front_points: inconsistent column count");
        pts.push_back(std::move(p));
        first = false;
    }
    if (pts.empty()) throw ParseError("load_front_points: no points in '" + path + "'");
    return pts;
}

inline ParetoFrontSet load_front(const std::string& path,
                                 ReferencePolicy policy = ReferencePolicy::BOX_UPPER,
                                 double margin = 0.1) {
    auto pts = nondominated_filter(load_front_points(path));
    auto ref = reference_point(pts, policy, margin);
    return ParetoFrontSet(std::move(pts), std::move(ref));
}

inline void save_front(const std::vector<ObjectiveVector>& points, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("save_front: cannot open '" + path + "' for writing");
    char buf[32];
    for (const auto& p : points) {
        for (std::size_t i = 0; i < p.size(); ++i) {
            std::snprintf(buf, sizeof(buf), "%.17g", p[i]);
            out << (i ? "," : "") << buf;
        }
        out << "\n";
    }
}

}  // namespace ehvi
