#pragma once

// Dense linear-algebra and RNG kernel: Cholesky, cyclic-Jacobi symmetric
// eigendecomposition, a counter-based uniform/normal generator, and Wishart
// sampling via the Bartlett construction. Everything is sized for small
// matrices (objective-space dimensions, quadrature Jacobi matrices).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include "ehvi/errors.hpp"

namespace ehvi {

/// Dense row-major matrix.
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {}

    static Matrix identity(int n) {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    double& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
    double operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }

    const std::vector<double>& data() const { return data_; }

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;
};

/// Symmetric matrix; construction mirrors the upper triangle so that
/// entries(i,j) == entries(j,i) holds exactly.
class SymMatrix {
public:
    SymMatrix() = default;
    explicit SymMatrix(int dim, double fill = 0.0)
        : dim_(dim), data_(static_cast<std::size_t>(dim) * dim, fill) {
        if (dim < 1) throw DimensionMismatch("SymMatrix: dim must be >= 1");
    }

    static SymMatrix identity(int n) {
        SymMatrix m(n);
        for (int i = 0; i < n; ++i) m.set(i, i, 1.0);
        return m;
    }

    static SymMatrix diagonal(const std::vector<double>& d) {
        SymMatrix m(static_cast<int>(d.size()));
        for (int i = 0; i < m.dim(); ++i) m.set(i, i, d[i]);
        return m;
    }

    /// Builds from a full row-major buffer; requires exact symmetry.
    static SymMatrix from_rows(int dim, const std::vector<double>& rows) {
        if (static_cast<int>(rows.size()) != dim * dim)
            throw DimensionMismatch("SymMatrix::from_rows: size mismatch");
        SymMatrix m(dim);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) {
                if (rows[i * dim + j] != rows[j * dim + i])
                    throw DimensionMismatch("SymMatrix::from_rows: input not symmetric");
                m.data_[i * dim + j] = rows[i * dim + j];
            }
        return m;
    }

    int dim() const { return dim_; }

    double operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * dim_ + j]; }

    /// Sets (i,j) and (j,i) together.
    void set(int i, int j, double v) {
        data_[static_cast<std::size_t>(i) * dim_ + j] = v;
        data_[static_cast<std::size_t>(j) * dim_ + i] = v;
    }

    double max_abs() const {
        double m = 0.0;
        for (double v : data_) m = std::max(m, std::abs(v));
        return m;
    }

    const std::vector<double>& data() const { return data_; }

private:
    int dim_ = 0;
    std::vector<double> data_;
};

/// Result of eigen_sym: eigenvalues sorted descending, orthonormal eigenvector
/// columns with the first component of magnitude > 1e-12 made positive.
struct EigenDecomposition {
    std::vector<double> eigenvalues;
    Matrix eigenvectors;  // column j pairs with eigenvalues[j]
};

/// Lower-triangular L with L*L^T == a. The pivot threshold is relative to the
/// largest entry so that uniformly tiny (but well-conditioned) covariances,
/// e.g. near-point-mass predictive densities, still factor.
inline Matrix cholesky(const SymMatrix& a) {
    const int n = a.dim();
    const double tol = 1e-12 * a.max_abs();
    Matrix l(n, n);
    for (int j = 0; j < n; ++j) {
        double pivot = a(j, j);
        for (int k = 0; k < j; ++k) pivot -= l(j, k) * l(j, k);
        if (!(pivot > tol))
            throw NotPositiveDefinite("cholesky: pivot " + std::to_string(pivot) +
                                      " at column " + std::to_string(j));
        const double d = std::sqrt(pivot);
        l(j, j) = d;
        for (int i = j + 1; i < n; ++i) {
            double s = a(i, j);
            for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            l(i, j) = s / d;
        }
    }
    return l;
}

/// Cyclic-Jacobi eigendecomposition of a symmetric matrix. Accuracy over
/// speed; fine at the dimensions this library meets (m <= ~100).
inline EigenDecomposition eigen_sym(const SymMatrix& a, int max_sweeps = 64) {
    const int n = a.dim();
    Matrix w(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) w(i, j) = a(i, j);
    Matrix v = Matrix::identity(n);

    const double scale = std::max(a.max_abs(), 1e-300);
    const double stop = 1e-15 * scale;

    auto max_off = [&]() {
        double m = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) m = std::max(m, std::abs(w(i, j)));
        return m;
    };

    int sweep = 0;
    while (max_off() > stop) {
        if (sweep++ >= max_sweeps)
            throw NoConvergence("eigen_sym: no convergence after " +
                                std::to_string(max_sweeps) + " sweeps");
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = w(p, q);
                if (std::abs(apq) <= stop) continue;
                const double theta = (w(q, q) - w(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double tau = s / (1.0 + c);
                const double wpp = w(p, p), wqq = w(q, q);
                w(p, p) = wpp - t * apq;
                w(q, q) = wqq + t * apq;
                w(p, q) = 0.0;
                w(q, p) = 0.0;
                for (int k = 0; k < n; ++k) {
                    if (k != p && k != q) {
                        const double wkp = w(k, p), wkq = w(k, q);
                        w(k, p) = wkp - s * (wkq + tau * wkp);
                        w(k, q) = wkq + s * (wkp - tau * wkq);
                        w(p, k) = w(k, p);
                        w(q, k) = w(k, q);
                    }
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = vkp - s * (vkq + tau * vkp);
                    v(k, q) = vkq + s * (vkp - tau * vkq);
                }
            }
        }
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return w(i, i) > w(j, j); });

    EigenDecomposition e;
    e.eigenvalues.resize(n);
    e.eigenvectors = Matrix(n, n);
    for (int j = 0; j < n; ++j) {
        const int src = order[j];
        e.eigenvalues[j] = w(src, src);
        double flip = 1.0;
        for (int i = 0; i < n; ++i) {
            if (std::abs(v(i, src)) > 1e-12) {
                flip = v(i, src) > 0.0 ? 1.0 : -1.0;
                break;
            }
        }
        for (int i = 0; i < n; ++i) e.eigenvectors(i, j) = flip * v(i, src);
    }
    return e;
}

/// Deterministic counter-based RNG: splitmix64 over (seed, counter). Identical
/// seeds give identical uniform bit streams on every platform. Normal draws go
/// through Box-Muller (two uniforms per normal, cosine branch), so they are
/// reproducible up to the platform's libm.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed = 0) : seed_(seed) {}

    std::uint64_t seed() const { return seed_; }
    std::uint64_t counter() const { return counter_; }

    /// Stream for an independent task: seed' = seed XOR index.
    RngStream derived(std::uint64_t index) const { return RngStream(seed_ ^ index); }

    std::uint64_t next_u64() {
        std::uint64_t z = seed_ + (++counter_) * 0x9E3779B97F4A7C15ull;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1]; safe as a log argument.
    double uniform_pos() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    /// One standard normal draw (Box-Muller, cosine branch).
    double normal() {
        const double u1 = uniform_pos();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::uint64_t seed_ = 0;
    std::uint64_t counter_ = 0;
};

inline std::vector<double> standard_normal(RngStream& rng, std::size_t count) {
    if (count < 1) throw DimensionMismatch("standard_normal: count must be >= 1");
    std::vector<double> out(count);
    for (auto& x : out) x = rng.normal();
    return out;
}

/// Wishart(identity scale, integer dof) sample by the Bartlett decomposition:
/// W = A A^T with A lower-triangular, A_ii^2 ~ chi-square(dof - i) built as a
/// sum of squared normals, A_ij ~ N(0,1) below the diagonal.
inline SymMatrix sample_wishart(RngStream& rng, int dim, int dof) {
    if (dim < 1) throw DimensionMismatch("sample_wishart: dim must be >= 1");
    if (dof < dim)
        throw DofTooSmall("sample_wishart: dof " + std::to_string(dof) +
                          " < dim " + std::to_string(dim));
    Matrix a(dim, dim);
    for (int i = 0; i < dim; ++i) {
        double chi2 = 0.0;
        for (int k = 0; k < dof - i; ++k) {
            const double z = rng.normal();
            chi2 += z * z;
        }
        a(i, i) = std::sqrt(chi2);
        for (int j = 0; j < i; ++j) a(i, j) = rng.normal();
    }
    SymMatrix w(dim);
    for (int i = 0; i < dim; ++i)
        for (int j = i; j < dim; ++j) {
            double s = 0.0;
            for (int k = 0; k <= std::min(i, j); ++k) s += a(i, k) * a(j, k);
            w.set(i, j, s);
        }
    return w;
}

}  // namespace ehvi
