#pragma once

// Exact hypervolume indicator, contribution, and improvement for minimisation
// problems at desk scale (fronts up to a few hundred points). Dimension
// dispatch: sweep for m=2 and m=3, recursive objective slicing for m>=4.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "ehvi/errors.hpp"

namespace ehvi {

/// A point in m-dimensional objective space (minimisation).
using ObjectiveVector = std::vector<double>;

/// z dominates y iff z_i <= y_i for all i and z_j < y_j for at least one j.
inline bool dominates(const ObjectiveVector& a, const ObjectiveVector& b) {
    if (a.size() != b.size()) throw DimensionMismatch("dominates: dimension mismatch");
    bool strict = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] > b[i]) return false;
        if (a[i] < b[i]) strict = true;
    }
    return strict;
}

namespace detail {

/// a_i <= b_i for all i (covers equality, unlike dominates()).
inline bool weakly_dominates(const double* a, const double* b, int m) {
    for (int i = 0; i < m; ++i)
        if (a[i] > b[i]) return false;
    return true;
}

/// HV of points (x,y) stored row-major, sorted by nondecreasing x. Dominated
/// and out-of-box rows are skipped by the sweep itself.
inline double hv2_sorted(const double* pts, int k, double r1, double r2) {
    double hv = 0.0;
    double y_prev = r2;  // rows with y >= y_prev are dominated or outside the box
    for (int i = 0; i < k; ++i) {
        const double x = pts[2 * i];
        const double y = pts[2 * i + 1];
        if (x >= r1) break;
        if (y < y_prev) {
            hv += (r1 - x) * (y_prev - y);
            y_prev = y;
        }
    }
    return hv;
}

/// HV of points (x,y,z) row-major, sorted by nondecreasing z. Sweeps slabs
/// along z while maintaining the 2-D front of the accumulated projections.
inline double hv3_sorted(const double* pts, int k, const double* r) {
    thread_local std::vector<std::pair<double, double>> front2d;
    front2d.clear();
    double hv = 0.0;
    for (int i = 0; i < k; ++i) {
        const double x = pts[3 * i], y = pts[3 * i + 1], z = pts[3 * i + 2];
        if (z >= r[2]) break;
        if (x < r[0] && y < r[1]) {
            // insert (x,y), keeping x strictly increasing / y strictly decreasing
            auto u = std::upper_bound(front2d.begin(), front2d.end(), x,
                                      [](double v, const std::pair<double, double>& e) {
                                          return v < e.first;
                                      });
            bool dominated = false;
            if (u != front2d.begin()) {
                auto pred = std::prev(u);
                if (pred->second <= y) dominated = true;
                else if (pred->first == x) u = front2d.erase(pred);
            }
            if (!dominated) {
                auto e = u;
                while (e != front2d.end() && e->second >= y) ++e;
                u = front2d.erase(u, e);
                front2d.insert(u, {x, y});
            }
        }
        const double z_hi = (i + 1 < k) ? std::min(pts[3 * (i + 1) + 2], r[2]) : r[2];
        const double thickness = z_hi - z;
        if (thickness > 0.0 && !front2d.empty()) {
            double area = 0.0, y_prev = r[1];
            for (const auto& e : front2d) {
                area += (r[0] - e.first) * (y_prev - e.second);
                y_prev = e.second;
            }
            hv += thickness * area;
        }
    }
    return hv;
}

/// Order-preserving maximal nondominated subset; later duplicates are dropped.
inline std::vector<ObjectiveVector> filter_weak(const std::vector<ObjectiveVector>& pts) {
    const std::size_t n = pts.size();
    std::vector<ObjectiveVector> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        bool drop = false;
        for (std::size_t j = 0; j < n && !drop; ++j) {
            if (j == i) continue;
            if (weakly_dominates(pts[j].data(), pts[i].data(), static_cast<int>(pts[i].size())) &&
                (pts[j] != pts[i] || j < i))
                drop = true;
        }
        if (!drop) out.push_back(pts[i]);
    }
    return out;
}

/// Generic recursive slicing over the last objective; m >= 2.
inline double hv_recursive(std::vector<ObjectiveVector> pts, const ObjectiveVector& ref) {
    const int m = static_cast<int>(ref.size());
    if (pts.empty()) return 0.0;
    if (m == 1) {
        double best = ref[0];
        for (const auto& p : pts) best = std::min(best, p[0]);
        return ref[0] - best;
    }
    if (m == 2) {
        std::sort(pts.begin(), pts.end());
        std::vector<double> flat;
        flat.reserve(pts.size() * 2);
        for (const auto& p : pts) {
            flat.push_back(p[0]);
            flat.push_back(p[1]);
        }
        return hv2_sorted(flat.data(), static_cast<int>(pts.size()), ref[0], ref[1]);
    }
    std::sort(pts.begin(), pts.end(), [m](const ObjectiveVector& a, const ObjectiveVector& b) {
        return a[m - 1] < b[m - 1];
    });
    ObjectiveVector sub_ref(ref.begin(), ref.end() - 1);
    double hv = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (pts[i][m - 1] >= ref[m - 1]) break;
        const double z_hi = (i + 1 < pts.size()) ? std::min(pts[i + 1][m - 1], ref[m - 1])
                                                 : ref[m - 1];
        const double thickness = z_hi - pts[i][m - 1];
        if (thickness <= 0.0) continue;
        std::vector<ObjectiveVector> proj;
        proj.reserve(i + 1);
        for (std::size_t j = 0; j <= i; ++j)
            proj.emplace_back(pts[j].begin(), pts[j].end() - 1);
        hv += thickness * hv_recursive(filter_weak(proj), sub_ref);
    }
    return hv;
}

}  // namespace detail

/// Mutually nondominated points plus a reference point strictly dominated by
/// every member. Points are kept in lexicographic order; an index ordering by
/// the last objective is precomputed for the m=3 sweep.
class ParetoFrontSet {
public:
    ParetoFrontSet(std::vector<ObjectiveVector> points, ObjectiveVector reference)
        : points_(std::move(points)), reference_(std::move(reference)) {
        if (points_.empty()) throw EmptyFront("ParetoFrontSet: empty point set");
        const std::size_t m = reference_.size();
        if (m < 1) throw DimensionMismatch("ParetoFrontSet: reference has dimension 0");
        for (const auto& p : points_) {
            if (p.size() != m)
                throw DimensionMismatch("ParetoFrontSet: point/reference dimension mismatch");
            for (double v : p)
                if (!std::isfinite(v)) throw InvalidSpec("ParetoFrontSet: non-finite coordinate");
            for (std::size_t i = 0; i < m; ++i)
                if (!(p[i] < reference_[i]))
                    throw ReferenceNotDominated(
                        "ParetoFrontSet: point does not strictly dominate the reference");
        }
        std::sort(points_.begin(), points_.end());
        for (std::size_t i = 0; i < points_.size(); ++i)
            for (std::size_t j = 0; j < points_.size(); ++j) {
                if (i == j) continue;
                if (detail::weakly_dominates(points_[j].data(), points_[i].data(),
                                             static_cast<int>(m)) &&
                    (points_[j] != points_[i] || j < i))
                    throw InvalidSpec("ParetoFrontSet: points not mutually nondominated");
            }
        order_by_last_.resize(points_.size());
        std::iota(order_by_last_.begin(), order_by_last_.end(), 0);
        std::stable_sort(order_by_last_.begin(), order_by_last_.end(),
                         [this, m](std::size_t a, std::size_t b) {
                             return points_[a][m - 1] < points_[b][m - 1];
                         });
    }

    const std::vector<ObjectiveVector>& points() const { return points_; }
    const ObjectiveVector& reference() const { return reference_; }
    int dim() const { return static_cast<int>(reference_.size()); }
    std::size_t size() const { return points_.size(); }

    /// Indices of points() sorted by the last objective, ascending.
    const std::vector<std::size_t>& order_by_last() const { return order_by_last_; }

private:
    std::vector<ObjectiveVector> points_;
    ObjectiveVector reference_;
    std::vector<std::size_t> order_by_last_;
};

/// Exact hypervolume indicator of the front.
inline double hv(const ParetoFrontSet& front) {
    const int m = front.dim();
    const auto& pts = front.points();
    const auto& r = front.reference();
    if (m == 1) {
        return r[0] - pts.front()[0];  // points are sorted; front[0] is minimal
    }
    if (m == 2) {
        std::vector<double> flat;
        flat.reserve(pts.size() * 2);
        for (const auto& p : pts) {
            flat.push_back(p[0]);
            flat.push_back(p[1]);
        }
        return detail::hv2_sorted(flat.data(), static_cast<int>(pts.size()), r[0], r[1]);
    }
    if (m == 3) {
        std::vector<double> flat;
        flat.reserve(pts.size() * 3);
        for (std::size_t idx : front.order_by_last()) {
            flat.push_back(pts[idx][0]);
            flat.push_back(pts[idx][1]);
            flat.push_back(pts[idx][2]);
        }
        return detail::hv3_sorted(flat.data(), static_cast<int>(pts.size()), r.data());
    }
    return detail::hv_recursive(pts, r);
}

/// HI(P) - HI(P \ {p}); p must be a member (exact coordinate match).
inline double hv_contribution(const ParetoFrontSet& front, const ObjectiveVector& p) {
    auto it = std::find(front.points().begin(), front.points().end(), p);
    if (it == front.points().end())
        throw PointNotInSet("hv_contribution: point is not a member of the front");
    if (front.size() == 1) return hv(front);
    std::vector<ObjectiveVector> rest;
    rest.reserve(front.size() - 1);
    for (const auto& q : front.points())
        if (q != p) rest.push_back(q);
    return hv(front) - hv(ParetoFrontSet(std::move(rest), front.reference()));
}

/// Hypervolume improvement I(p, P) = HI(P u {p}) - HI(P), computed through the
/// clipping identity: prod(r_i - p_i) minus the HV of the front clipped to
/// max(q, p) componentwise. Returns 0 for dominated points and for points that
/// do not strictly dominate the reference.
inline double hv_improvement(const ObjectiveVector& p, const ParetoFrontSet& front) {
    const int m = front.dim();
    if (static_cast<int>(p.size()) != m)
        throw DimensionMismatch("hv_improvement: point dimension mismatch");
    const auto& r = front.reference();
    double box = 1.0;
    for (int i = 0; i < m; ++i) {
        if (!(p[i] < r[i])) return 0.0;
        box *= r[i] - p[i];
    }
    const auto& pts = front.points();
    const int k = static_cast<int>(pts.size());
    for (const auto& q : pts)
        if (detail::weakly_dominates(q.data(), p.data(), m)) return 0.0;

    thread_local std::vector<double> clipped;
    clipped.resize(static_cast<std::size_t>(k) * m);
    double hv_clip = 0.0;
    if (m == 2) {
        for (int i = 0; i < k; ++i) {
            clipped[2 * i] = std::max(pts[i][0], p[0]);
            clipped[2 * i + 1] = std::max(pts[i][1], p[1]);
        }
        hv_clip = detail::hv2_sorted(clipped.data(), k, r[0], r[1]);
    } else if (m == 3) {
        const auto& order = front.order_by_last();
        for (int i = 0; i < k; ++i) {
            const auto& q = pts[order[i]];
            clipped[3 * i] = std::max(q[0], p[0]);
            clipped[3 * i + 1] = std::max(q[1], p[1]);
            clipped[3 * i + 2] = std::max(q[2], p[2]);
        }
        hv_clip = detail::hv3_sorted(clipped.data(), k, r.data());
    } else if (m == 1) {
        double best = r[0];
        for (const auto& q : pts) best = std::min(best, std::max(q[0], p[0]));
        hv_clip = r[0] - best;
    } else {
        std::vector<ObjectiveVector> cl(pts);
        for (auto& q : cl)
            for (int i = 0; i < m; ++i) q[i] = std::max(q[i], p[i]);
        hv_clip = detail::hv_recursive(std::move(cl), r);
    }
    return std::max(0.0, box - hv_clip);
}

}  // namespace ehvi
