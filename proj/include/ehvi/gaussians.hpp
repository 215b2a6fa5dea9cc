#pragma once

// Multivariate Gaussian predictive densities, sampling, and the two random
// test-distribution generators used by the experiment harness: independent
// (diagonal covariance drawn uniformly) and correlated (Wishart-based).

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "ehvi/errors.hpp"
#include "ehvi/hypervolume.hpp"
#include "ehvi/numerics.hpp"

namespace ehvi {

/// Mean + SPD covariance. The independence flag is derived from the
/// off-diagonal magnitudes (<= 1e-12 means diagonal), never supplied.
class GaussianDensity {
public:
    GaussianDensity(ObjectiveVector mean, SymMatrix covariance)
        : mean_(std::move(mean)), cov_(std::move(covariance)) {
        if (static_cast<int>(mean_.size()) != cov_.dim())
            throw DimensionMismatch("GaussianDensity: mean/covariance dimension mismatch");
        cholesky(cov_);  // validates positive definiteness
        independent_ = true;
        for (int i = 0; i < cov_.dim() && independent_; ++i)
            for (int j = i + 1; j < cov_.dim(); ++j)
                if (std::abs(cov_(i, j)) > 1e-12) {
                    independent_ = false;
                    break;
                }
    }

    const ObjectiveVector& mean() const { return mean_; }
    const SymMatrix& covariance() const { return cov_; }
    bool independent() const { return independent_; }
    int dim() const { return cov_.dim(); }

    double variance(int i) const { return cov_(i, i); }
    double stddev(int i) const { return std::sqrt(cov_(i, i)); }

private:
    ObjectiveVector mean_;
    SymMatrix cov_;
    bool independent_ = false;
};

/// Hyper-rectangle around a front: each objective's span extended by 30% on
/// both sides.
struct FrontBox {
    ObjectiveVector lower;
    ObjectiveVector upper;

    double span(int i) const { return upper[i] - lower[i]; }
};

inline FrontBox bounding_box(const ParetoFrontSet& front) {
    const int m = front.dim();
    FrontBox box{ObjectiveVector(m), ObjectiveVector(m)};
    for (int i = 0; i < m; ++i) {
        double lo = front.points().front()[i], hi = lo;
        for (const auto& p : front.points()) {
            lo = std::min(lo, p[i]);
            hi = std::max(hi, p[i]);
        }
        const double s = hi - lo;
        if (s == 0.0)
            throw DegenerateSpan("bounding_box: zero span in objective " + std::to_string(i));
        box.lower[i] = lo - 0.3 * s;
        box.upper[i] = hi + 0.3 * s;
    }
    return box;
}

/// Independent density: mean uniform in the front box, each variance uniform
/// in [eps, u_i - l_i]. The tiny floor keeps the covariance factorable; the
/// sampled range is otherwise the full box span.
inline GaussianDensity random_independent(const ParetoFrontSet& front, RngStream& rng) {
    const FrontBox box = bounding_box(front);
    const int m = front.dim();
    ObjectiveVector mean(m);
    SymMatrix cov(m);
    for (int i = 0; i < m; ++i) {
        mean[i] = box.lower[i] + box.span(i) * rng.uniform();
        const double eps = 1e-9 * box.span(i);
        cov.set(i, i, eps + (box.span(i) - eps) * rng.uniform());
    }
    return GaussianDensity(std::move(mean), std::move(cov));
}

inline constexpr int kDefaultWishartDofOffset = 2;

/// Correlated density: mean uniform in the front box and
/// Sigma = (1/dof) * D * W * D with W ~ Wishart(I, dof) and
/// D = diag(sqrt(u_i - l_i)), so E[Sigma] = diag(u_i - l_i) matches the
/// independent generator's variance range.
inline GaussianDensity random_correlated(const ParetoFrontSet& front, RngStream& rng,
                                         int dof_offset = kDefaultWishartDofOffset) {
    const FrontBox box = bounding_box(front);
    const int m = front.dim();
    ObjectiveVector mean(m);
    for (int i = 0; i < m; ++i) mean[i] = box.lower[i] + box.span(i) * rng.uniform();
    const int dof = m + dof_offset;
    const SymMatrix w = sample_wishart(rng, m, dof);
    SymMatrix cov(m);
    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j) {
            const double d = std::sqrt(box.span(i)) * std::sqrt(box.span(j));
            cov.set(i, j, w(i, j) * d / dof);
        }
    return GaussianDensity(std::move(mean), std::move(cov));
}

/// Draws from N(mu, Sigma) via x = mu + L z, L = cholesky(Sigma).
inline std::vector<ObjectiveVector> sample(const GaussianDensity& g, RngStream& rng,
                                           std::size_t count) {
    if (count < 1) throw DimensionMismatch("sample: count must be >= 1");
    const int m = g.dim();
    const Matrix l = cholesky(g.covariance());
    std::vector<ObjectiveVector> out(count, ObjectiveVector(m));
    std::vector<double> z(m);
    for (auto& x : out) {
        for (int i = 0; i < m; ++i) z[i] = rng.normal();
        for (int i = 0; i < m; ++i) {
            double s = g.mean()[i];
            for (int j = 0; j <= i; ++j) s += l(i, j) * z[j];
            x[i] = s;
        }
    }
    return out;
}

/// Restriction to the diagonal of the covariance (drops all correlation).
/// Identity for an already-independent density.
inline GaussianDensity diag_only(const GaussianDensity& g) {
    if (g.independent()) return g;
    SymMatrix cov(g.dim());
    for (int i = 0; i < g.dim(); ++i) cov.set(i, i, g.variance(i));
    return GaussianDensity(g.mean(), std::move(cov));
}

inline nlohmann::json to_json(const GaussianDensity& g) {
    nlohmann::json j;
    j["mean"] = g.mean();
    j["covariance"] = g.covariance().data();  // row-major
    j["independent"] = g.independent();
    return j;
}

inline GaussianDensity density_from_json(const nlohmann::json& j) {
    if (!j.contains("mean") || !j.contains("covariance"))
        throw ParseError("density_from_json: missing 'mean' or 'covariance'");
    ObjectiveVector mean = j.at("mean").get<ObjectiveVector>();
    std::vector<double> cov = j.at("covariance").get<std::vector<double>>();
    const int m = static_cast<int>(mean.size());
    if (static_cast<int>(cov.size()) != m * m)
        throw ParseError("density_from_json: covariance is not m*m row-major");
    return GaussianDensity(std::move(mean), SymMatrix::from_rows(m, cov));
}

}  // namespace ehvi
