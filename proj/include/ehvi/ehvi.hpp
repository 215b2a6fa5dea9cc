#pragma once

// The four EHVI computation routes: Monte Carlo over density samples,
// Gauss-Hermite weighted sums over pruned transformed grids, an exact closed
// form for independent bivariate densities (strip decomposition with normal
// partial moments), and a dense midpoint-rule reference oracle with a
// refinement acceptance check.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <iostream>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ehvi/errors.hpp"
#include "ehvi/gaussians.hpp"
#include "ehvi/hypervolume.hpp"
#include "ehvi/numerics.hpp"
#include "ehvi/quadrature.hpp"

namespace ehvi {

enum class EhviMethod { MC, GH, EXACT2D, REFERENCE };

inline const char* method_name(EhviMethod m) {
    switch (m) {
        case EhviMethod::MC: return "mc";
        case EhviMethod::GH: return "gh";
        case EhviMethod::EXACT2D: return "exact2d";
        case EhviMethod::REFERENCE: return "reference";
    }
    return "?";
}

struct EhviEstimate {
    double value = 0.0;
    EhviMethod method = EhviMethod::MC;
    std::size_t evaluations = 0;           // hypervolume-improvement calls
    std::optional<double> mc_std_error;    // present iff method == MC
};

namespace detail {

inline double normal_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

/// Partial moment psi(a, b, mu, sigma) = integral_{-inf}^{b} (a - z) phi(z; mu, sigma) dz.
inline double psi(double a, double b, double mu, double sigma) {
    const double t = (b - mu) / sigma;
    return sigma * normal_pdf(t) + (a - mu) * normal_cdf(t);
}

/// Variance floor for the closed-form/reference routes; below it the
/// normalised pdf/cdf arguments lose all meaning.
inline double clamped_sigma(double variance) {
    if (variance < 1e-15) {
        static std::atomic<bool> warned{false};
        if (!warned.exchange(true))
            std::cerr << "ehvi: variance below 1e-15 clamped\n";
        variance = 1e-15;
    }
    return std::sqrt(variance);
}

/// Vertical strips of a 2-D front for improvement/EHVI decompositions.
/// Strip i covers f1 in [lo[i], hi[i]) and is non-dominated below f2 < top[i].
/// Strips are ordered from the reference edge leftwards; the last strip has
/// lo = -infinity and top = r2.
struct Strips2D {
    std::vector<double> hi, lo, top;

    /// points: a strict 2-D front sorted by ascending f1 (f2 descending).
    Strips2D(const std::vector<std::pair<double, double>>& points, double r1, double r2) {
        const int q = static_cast<int>(points.size());
        hi.resize(q + 1);
        lo.resize(q + 1);
        top.resize(q + 1);
        double upper = r1;
        for (int i = 0; i < q; ++i) {
            const auto& p = points[q - 1 - i];  // descending f1
            hi[i] = upper;
            lo[i] = p.first;
            top[i] = p.second;
            upper = p.first;
        }
        hi[q] = upper;
        lo[q] = -std::numeric_limits<double>::infinity();
        top[q] = r2;
    }

    /// Hypervolume improvement of (x, y) against the front.
    double improvement(double x, double y) const {
        double total = 0.0;
        for (std::size_t i = 0; i < hi.size(); ++i) {
            const double width = hi[i] - std::max(x, lo[i]);
            if (width <= 0.0) continue;
            const double height = top[i] - y;
            if (height > 0.0) total += width * height;
        }
        return total;
    }
};

inline std::vector<std::pair<double, double>> front_as_pairs(const ParetoFrontSet& front) {
    std::vector<std::pair<double, double>> pts;
    pts.reserve(front.size());
    for (const auto& p : front.points()) pts.emplace_back(p[0], p[1]);
    return pts;  // front points are lex-sorted, so f1 ascending / f2 descending
}

}  // namespace detail

/// Monte Carlo estimate: mean hypervolume improvement over c draws from g,
/// with the sample standard error sigma_M / sqrt(c). Deterministic given the
/// stream's seed and state.
inline EhviEstimate ehvi_mc(const GaussianDensity& g, const ParetoFrontSet& front,
                            std::size_t c, RngStream& rng) {
    if (c < 1) throw InvalidSpec("ehvi_mc: sample count must be >= 1");
    if (g.dim() != front.dim())
        throw DimensionMismatch("ehvi_mc: density/front dimension mismatch");
    const int m = g.dim();
    const Matrix l = cholesky(g.covariance());
    ObjectiveVector x(m);
    std::vector<double> z(m);
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t s = 0; s < c; ++s) {
        for (int i = 0; i < m; ++i) z[i] = rng.normal();
        for (int i = 0; i < m; ++i) {
            double v = g.mean()[i];
            for (int j = 0; j <= i; ++j) v += l(i, j) * z[j];
            x[i] = v;
        }
        const double imp = hv_improvement(x, front);
        sum += imp;
        sum_sq += imp * imp;
    }
    EhviEstimate est;
    est.method = EhviMethod::MC;
    est.evaluations = c;
    est.value = sum / static_cast<double>(c);
    double std_err = 0.0;
    if (c > 1) {
        const double var =
            std::max(0.0, (sum_sq - sum * sum / static_cast<double>(c)) /
                              static_cast<double>(c - 1));
        std_err = std::sqrt(var / static_cast<double>(c));
    }
    est.mc_std_error = std_err;
    return est;
}

/// Gauss-Hermite estimate: weighted sum of improvements over the pruned,
/// transformed grid. Fully deterministic.
inline EhviEstimate ehvi_gh(const GaussianDensity& g, const ParetoFrontSet& front, int n,
                            double prune_rate,
                            std::size_t node_budget = kDefaultNodeBudget,
                            bool renormalize = false) {
    if (g.dim() != front.dim())
        throw DimensionMismatch("ehvi_gh: density/front dimension mismatch");
    const QuadratureGrid grid = gh_grid(g, n, prune_rate, node_budget, renormalize);
    const int m = g.dim();
    ObjectiveVector x(m);
    double sum = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        x.assign(grid.node(i), grid.node(i) + m);
        sum += grid.weights[i] * hv_improvement(x, front);
    }
    EhviEstimate est;
    est.method = EhviMethod::GH;
    est.evaluations = grid.size();
    est.value = std::max(0.0, sum);
    return est;
}

/// Exact EHVI for an independent bivariate density. The front (sorted by
/// descending f1, with sentinels from the reference) cuts the plane into
/// vertical strips; within strip i the improvement factorises, so
/// EHVI = sum_i E[(hi_i - max(z1, lo_i))^+] * E[(top_i - z2)^+], and both
/// factors are normal partial moments.
inline EhviEstimate ehvi_exact_2d(const GaussianDensity& g, const ParetoFrontSet& front) {
    if (front.dim() != 2 || g.dim() != 2)
        throw NotBivariate("ehvi_exact_2d: requires m == 2");
    if (!g.independent())
        throw NotIndependent("ehvi_exact_2d: requires a diagonal covariance");

    const double mu1 = g.mean()[0], mu2 = g.mean()[1];
    const double s1 = detail::clamped_sigma(g.variance(0));
    const double s2 = detail::clamped_sigma(g.variance(1));
    const auto& r = front.reference();
    const detail::Strips2D strips(detail::front_as_pairs(front), r[0], r[1]);

    double total = 0.0;
    const std::size_t count = strips.hi.size();
    for (std::size_t i = 0; i < count; ++i) {
        const double u = strips.hi[i], lo = strips.lo[i];
        double a;  // E[(u - max(z1, lo))^+]
        if (i + 1 == count) {
            a = detail::psi(u, u, mu1, s1);
        } else {
            a = (u - lo) * detail::normal_cdf((lo - mu1) / s1) +
                (detail::psi(u, u, mu1, s1) - detail::psi(u, lo, mu1, s1));
        }
        total += std::max(0.0, a) * std::max(0.0, detail::psi(strips.top[i], strips.top[i], mu2, s2));
    }
    EhviEstimate est;
    est.method = EhviMethod::EXACT2D;
    est.evaluations = 0;
    est.value = std::max(0.0, total);
    return est;
}

namespace detail {

/// Midpoint axes in standardised coordinates, mu +/- 6 sigma per principal axis.
struct MidpointAxis {
    std::vector<double> z;  // cell centres
    std::vector<double> w;  // phi(z) * h
    explicit MidpointAxis(int cells) {
        const double h = 12.0 / cells;
        z.resize(cells);
        w.resize(cells);
        for (int i = 0; i < cells; ++i) {
            z[i] = -6.0 + (i + 0.5) * h;
            w[i] = normal_pdf(z[i]) * h;
        }
    }
};

/// Plain midpoint sum over the full m-dimensional lattice.
inline double reference_generic(const GaussianDensity& g, const ParetoFrontSet& front,
                                int cells) {
    const int m = g.dim();
    const MidpointAxis axis(cells);
    const EigenDecomposition eig = eigen_sym(g.covariance());
    for (double lambda : eig.eigenvalues)
        if (!(lambda > 0.0))
            throw NotPositiveDefinite("ehvi_reference: covariance not positive definite");
    std::vector<double> scaled(static_cast<std::size_t>(m) * m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            scaled[i * m + j] = eig.eigenvectors(i, j) * std::sqrt(eig.eigenvalues[j]);

    std::vector<int> idx(m, 0);
    ObjectiveVector p(m);
    std::size_t total = 1;
    for (int i = 0; i < m; ++i) total *= static_cast<std::size_t>(cells);
    double sum = 0.0;
    for (std::size_t t = 0; t < total; ++t) {
        double w = 1.0;
        for (int i = 0; i < m; ++i) w *= axis.w[idx[i]];
        for (int i = 0; i < m; ++i) {
            double v = g.mean()[i];
            for (int j = 0; j < m; ++j) v += scaled[i * m + j] * axis.z[idx[j]];
            p[i] = v;
        }
        sum += w * hv_improvement(p, front);
        for (int i = m - 1; i >= 0; --i) {
            if (++idx[i] < cells) break;
            idx[i] = 0;
        }
    }
    return sum;
}

/// Independent m=3 midpoint sum, reorganised exactly: the improvement of
/// (x, y, c) is the layer-cake sum over f3 slabs of 2-D improvements against
/// the prefix fronts, so the third axis folds into per-slab weights and the
/// lattice collapses to 2-D.
inline double reference_independent_3d(const GaussianDensity& g,
                                       const ParetoFrontSet& front, int cells) {
    const MidpointAxis axis(cells);
    const auto& r = front.reference();
    const auto& pts = front.points();
    const auto& order = front.order_by_last();
    const int k = static_cast<int>(pts.size());

    // prefix 2-D fronts F_0 (empty) .. F_k as strip tables
    std::vector<Strips2D> strips;
    strips.reserve(k + 1);
    std::vector<std::pair<double, double>> front2d;
    strips.emplace_back(front2d, r[0], r[1]);
    std::vector<double> levels(k);
    for (int s = 0; s < k; ++s) {
        const auto& q = pts[order[s]];
        levels[s] = q[2];
        const double x = q[0], y = q[1];
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
        strips.emplace_back(front2d, r[0], r[1]);
    }

    // slab s spans f3 in [lower_s, upper_s) against prefix front F_s
    std::vector<double> slab_weight(k + 1, 0.0);
    const double sz = std::sqrt(g.variance(2));
    for (int l = 0; l < cells; ++l) {
        const double c = g.mean()[2] + sz * axis.z[l];
        if (c >= r[2]) continue;
        for (int s = 0; s <= k; ++s) {
            const double upper = (s < k) ? levels[s] : r[2];
            const double lower = (s == 0) ? c : std::max(levels[s - 1], c);
            if (upper > lower) slab_weight[s] += axis.w[l] * (upper - lower);
        }
    }

    const double sx = std::sqrt(g.variance(0)), sy = std::sqrt(g.variance(1));
    double sum = 0.0;
    for (int i = 0; i < cells; ++i) {
        const double x = g.mean()[0] + sx * axis.z[i];
        if (x >= r[0]) continue;
        for (int j = 0; j < cells; ++j) {
            const double y = g.mean()[1] + sy * axis.z[j];
            if (y >= r[1]) continue;
            double imp = 0.0;
            for (int s = 0; s <= k; ++s)
                if (slab_weight[s] > 0.0) imp += slab_weight[s] * strips[s].improvement(x, y);
            sum += axis.w[i] * axis.w[j] * imp;
        }
    }
    return sum;
}

inline double reference_midpoint(const GaussianDensity& g, const ParetoFrontSet& front,
                                 int cells) {
    if (g.dim() == 3 && g.independent()) return reference_independent_3d(g, front, cells);
    return reference_generic(g, front, cells);
}

}  // namespace detail

/// Deterministic dense-quadrature oracle for m <= 3: midpoint integration of
/// improvement times density over mu +/- 6 sigma per principal axis. The
/// result is accepted only if doubling the resolution moves it by less than
/// 0.5% (with a tiny absolute floor so exact zeros pass).
inline EhviEstimate ehvi_reference(const GaussianDensity& g, const ParetoFrontSet& front,
                                   int cells_per_dim) {
    if (g.dim() != front.dim())
        throw DimensionMismatch("ehvi_reference: density/front dimension mismatch");
    if (g.dim() > 3) throw InvalidSpec("ehvi_reference: supports m <= 3");
    if (cells_per_dim < 50) throw InvalidSpec("ehvi_reference: needs >= 50 cells per dim");

    const double coarse = detail::reference_midpoint(g, front, cells_per_dim);
    const double fine = detail::reference_midpoint(g, front, 2 * cells_per_dim);
    const double abs_floor = 1e-12 * (1.0 + hv(front));
    if (std::abs(fine - coarse) >
        std::max(0.005 * std::max(std::abs(fine), std::abs(coarse)), abs_floor))
        throw ResolutionTooLow("ehvi_reference: refinement moved the value by " +
                               std::to_string(std::abs(fine - coarse)) + " at " +
                               std::to_string(cells_per_dim) + " cells/dim");
    EhviEstimate est;
    est.method = EhviMethod::REFERENCE;
    std::size_t evals = 1;
    for (int i = 0; i < g.dim(); ++i) evals *= static_cast<std::size_t>(cells_per_dim);
    std::size_t evals_fine = 1;
    for (int i = 0; i < g.dim(); ++i) evals_fine *= static_cast<std::size_t>(2 * cells_per_dim);
    est.evaluations = evals + evals_fine;
    est.value = std::max(0.0, fine);
    return est;
}

}  // namespace ehvi
