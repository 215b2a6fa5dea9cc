#pragma once

// Gauss-Hermite quadrature for the standard-Gaussian kernel (probabilists'
// convention, so weights sum to one), tensor expansion to m dimensions,
// lowest-weight pruning, and the eigen-based rotate/scale/translate that fits
// a grid to a given Gaussian density.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "ehvi/errors.hpp"
#include "ehvi/gaussians.hpp"
#include "ehvi/numerics.hpp"

namespace ehvi {

inline constexpr std::size_t kDefaultNodeBudget = 10'000'000;

/// 1-D rule: nodes ascending and symmetric about 0, positive weights summing
/// to one. A rule of order n integrates polynomials of degree <= 2n-1 exactly
/// against the standard normal density.
struct QuadratureRule1D {
    int order = 0;
    std::vector<double> nodes;
    std::vector<double> weights;
};

struct GridProvenance {
    int order = 0;          // nodes per dimension
    double prune_rate = 0;  // fraction of lowest-weight nodes dropped
    bool transformed = false;
    bool renormalized = false;
};

/// K weighted nodes in m dimensions, nodes stored row-major (K x m).
struct QuadratureGrid {
    int dim = 0;
    std::vector<double> nodes;
    std::vector<double> weights;
    GridProvenance provenance;

    std::size_t size() const { return weights.size(); }
    const double* node(std::size_t i) const { return nodes.data() + i * dim; }
};

inline QuadratureRule1D hermite_rule(int n) {
    if (n < 1 || n > 100)
        throw OrderOutOfRange("hermite_rule: order " + std::to_string(n) +
                              " outside [1, 100]");
    QuadratureRule1D rule;
    rule.order = n;
    if (n == 1) {
        rule.nodes = {0.0};
        rule.weights = {1.0};
        return rule;
    }

    // Nodes are the eigenvalues of the Jacobi matrix of the probabilists'
    // Hermite recurrence (zero diagonal, off-diagonals sqrt(i)).
    SymMatrix jacobi(n);
    for (int i = 1; i < n; ++i) jacobi.set(i - 1, i, std::sqrt(static_cast<double>(i)));
    EigenDecomposition eig = eigen_sym(jacobi);
    rule.nodes.assign(eig.eigenvalues.rbegin(), eig.eigenvalues.rend());

    // Golub-Welsch weight w_i = 1 / sum_{k<n} p_k(x_i)^2 with the orthonormal
    // recurrence p_{k+1} = (x p_k - sqrt(k) p_{k-1}) / sqrt(k+1). All terms in
    // the sum are nonnegative, which keeps tiny extreme weights relatively
    // accurate where squared eigenvector components would not be.
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        const double x = rule.nodes[i];
        double pk_minus = 0.0, pk = 1.0, total = 1.0;
        for (int k = 1; k < n; ++k) {
            const double pk_next =
                (x * pk - std::sqrt(static_cast<double>(k - 1)) * pk_minus) /
                std::sqrt(static_cast<double>(k));
            pk_minus = pk;
            pk = pk_next;
            total += pk * pk;
        }
        rule.weights[i] = 1.0 / total;
    }

    // Symmetrise: node[i] == -node[n-1-i] exactly, middle node of an odd rule
    // exactly zero, paired weights equal.
    for (int i = 0; i < n / 2; ++i) {
        const int j = n - 1 - i;
        const double x = 0.5 * (rule.nodes[j] - rule.nodes[i]);
        rule.nodes[i] = -x;
        rule.nodes[j] = x;
        const double w = 0.5 * (rule.weights[i] + rule.weights[j]);
        rule.weights[i] = w;
        rule.weights[j] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

/// Full m-dimensional product grid: n^m nodes, weights are products of the
/// 1-D weights. Refuses to materialise more than node_budget nodes; callers
/// should fall back to Monte Carlo past that point.
inline QuadratureGrid tensor_grid(const QuadratureRule1D& rule, int m,
                                  std::size_t node_budget = kDefaultNodeBudget) {
    if (m < 1) throw DimensionMismatch("tensor_grid: dimension must be >= 1");
    const std::size_t n = static_cast<std::size_t>(rule.order);
    std::size_t total = 1;
    for (int j = 0; j < m; ++j) {
        total *= n;
        if (total > node_budget)
            throw NodeBudgetExceeded("tensor_grid: " + std::to_string(rule.order) + "^" +
                                     std::to_string(m) + " nodes exceed budget " +
                                     std::to_string(node_budget));
    }

    QuadratureGrid grid;
    grid.dim = m;
    grid.provenance.order = rule.order;
    grid.nodes.resize(total * m);
    grid.weights.resize(total);
    std::vector<std::size_t> idx(m, 0);
    for (std::size_t i = 0; i < total; ++i) {
        double w = 1.0;
        for (int j = 0; j < m; ++j) {
            grid.nodes[i * m + j] = rule.nodes[idx[j]];
            w *= rule.weights[idx[j]];
        }
        grid.weights[i] = w;
        for (int j = m - 1; j >= 0; --j) {  // last dimension fastest
            if (++idx[j] < n) break;
            idx[j] = 0;
        }
    }
    return grid;
}

/// Keeps the K = floor(n^m (1-rate)) highest-weight nodes. Ties are broken by
/// the node's lexicographic multi-index; surviving nodes keep their original
/// order. Weights are not renormalised unless asked, so a pruned grid
/// integrates constants to slightly less than one and the elimination bias
/// stays observable.
inline QuadratureGrid prune(const QuadratureGrid& grid, double rate,
                            bool renormalize = false) {
    if (grid.provenance.transformed)
        throw InvalidSpec("prune: grid is already transformed");
    if (!(rate >= 0.0 && rate <= 1.0))
        throw InvalidSpec("prune: rate must lie in [0, 1]");
    const std::size_t total = grid.size();
    // The small epsilon absorbs the binary representation of rates like 0.2 so
    // that exact-integer products floor to the intended K.
    const std::size_t keep = static_cast<std::size_t>(std::floor(
        static_cast<double>(total) * (1.0 - rate) + 1e-9));
    if (keep == 0) throw EmptyGrid("prune: all nodes pruned (rate too high)");

    QuadratureGrid out;
    out.dim = grid.dim;
    out.provenance = grid.provenance;
    out.provenance.prune_rate = rate;
    if (keep == total && !renormalize) {
        out.nodes = grid.nodes;
        out.weights = grid.weights;
        return out;
    }

    // top-K selection under (weight desc, lexicographic multi-index asc); the
    // comparator is a total order, so the surviving set is unique
    std::vector<std::pair<double, std::size_t>> order(total);
    for (std::size_t i = 0; i < total; ++i) order[i] = {grid.weights[i], i};
    const auto heavier = [](const std::pair<double, std::size_t>& a,
                            const std::pair<double, std::size_t>& b) {
        return a.first != b.first ? a.first > b.first : a.second < b.second;
    };
    std::nth_element(order.begin(), order.begin() + (keep - 1), order.end(), heavier);
    std::vector<std::size_t> kept(keep);
    for (std::size_t i = 0; i < keep; ++i) kept[i] = order[i].second;
    std::sort(kept.begin(), kept.end());  // survivors keep their original order

    out.nodes.resize(keep * grid.dim);
    out.weights.resize(keep);
    for (std::size_t i = 0; i < keep; ++i) {
        const std::size_t src = kept[i];
        std::copy_n(grid.nodes.data() + src * grid.dim, grid.dim,
                    out.nodes.data() + i * grid.dim);
        out.weights[i] = grid.weights[src];
    }
    if (renormalize) {
        const double sum = std::accumulate(out.weights.begin(), out.weights.end(), 0.0);
        for (double& w : out.weights) w /= sum;
        out.provenance.renormalized = true;
    }
    return out;
}

/// Maps each standard-space node z to mu + E diag(sqrt(lambda)) z, where
/// (lambda, E) is the eigendecomposition of the covariance. Weights are
/// unchanged.
inline QuadratureGrid transform(const QuadratureGrid& grid, const GaussianDensity& g) {
    if (grid.dim != g.dim())
        throw DimensionMismatch("transform: grid/density dimension mismatch");
    const int m = grid.dim;
    const EigenDecomposition eig = eigen_sym(g.covariance());
    for (double lambda : eig.eigenvalues)
        if (!(lambda > 0.0))
            throw NotPositiveDefinite("transform: covariance eigenvalue " +
                                      std::to_string(lambda) + " is not positive");
    std::vector<double> scaled(static_cast<std::size_t>(m) * m);  // E diag(sqrt(lambda))
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            scaled[i * m + j] = eig.eigenvectors(i, j) * std::sqrt(eig.eigenvalues[j]);

    QuadratureGrid out;
    out.dim = m;
    out.provenance = grid.provenance;
    out.provenance.transformed = true;
    out.weights = grid.weights;
    out.nodes.resize(grid.nodes.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double* z = grid.node(k);
        for (int i = 0; i < m; ++i) {
            double s = g.mean()[i];
            for (int j = 0; j < m; ++j) s += scaled[i * m + j] * z[j];
            out.nodes[k * m + i] = s;
        }
    }
    return out;
}

/// Full pipeline: 1-D rule -> tensor grid -> prune -> fit to the density.
inline QuadratureGrid gh_grid(const GaussianDensity& g, int n, double prune_rate,
                              std::size_t node_budget = kDefaultNodeBudget,
                              bool renormalize = false) {
    return transform(prune(tensor_grid(hermite_rule(n), g.dim(), node_budget),
                           prune_rate, renormalize),
                     g);
}

}  // namespace ehvi
