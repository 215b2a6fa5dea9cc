#pragma once

// Kendall's tau-b rank correlation with a tie-corrected normal-approximation
// p-value. Tau-b is the right variant here: EHVI value lists routinely
// contain exact-zero ties from fully dominated densities. Plain O(n^2) pair
// enumeration; the experiments use n ~ 100.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "ehvi/errors.hpp"

namespace ehvi {

struct KendallResult {
    double tau = 0.0;
    double p_value = 1.0;
    int n = 0;
};

inline KendallResult kendall_tau(const std::vector<double>& a,
                                 const std::vector<double>& b) {
    if (a.size() != b.size()) throw LengthMismatch("kendall_tau: length mismatch");
    const int n = static_cast<int>(a.size());
    if (n < 2) throw TooFewSamples("kendall_tau: need at least two samples");

    long long concordant = 0, discordant = 0, ties_a = 0, ties_b = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double da = a[i] - a[j];
            const double db = b[i] - b[j];
            if (da == 0.0) ++ties_a;
            if (db == 0.0) ++ties_b;
            if (da == 0.0 || db == 0.0) continue;
            if ((da > 0.0) == (db > 0.0)) ++concordant;
            else ++discordant;
        }
    }
    const double n0 = 0.5 * n * (n - 1.0);
    const double denom = (n0 - ties_a) * (n0 - ties_b);

    KendallResult res;
    res.n = n;
    if (denom <= 0.0) return res;  // a fully tied list carries no ordering signal
    const double s = static_cast<double>(concordant - discordant);
    res.tau = s / std::sqrt(denom);

    // tie-corrected variance of S under independence
    auto tie_groups = [n](const std::vector<double>& xs, double& t1, double& t2,
                          double& t3) {
        std::vector<double> sorted(xs);
        std::sort(sorted.begin(), sorted.end());
        t1 = t2 = t3 = 0.0;
        int i = 0;
        while (i < n) {
            int j = i;
            while (j < n && sorted[j] == sorted[i]) ++j;
            const double t = j - i;
            t1 += t * (t - 1.0);
            t2 += t * (t - 1.0) * (2.0 * t + 5.0);
            t3 += t * (t - 1.0) * (t - 2.0);
            i = j;
        }
    };
    double a1, a2, a3, b1, b2, b3;
    tie_groups(a, a1, a2, a3);
    tie_groups(b, b1, b2, b3);
    const double nn = n;
    double var = (nn * (nn - 1.0) * (2.0 * nn + 5.0) - a2 - b2) / 18.0 +
                 a1 * b1 / (2.0 * nn * (nn - 1.0));
    if (n > 2) var += a3 * b3 / (9.0 * nn * (nn - 1.0) * (nn - 2.0));
    if (var > 0.0) {
        const double z = s / std::sqrt(var);
        res.p_value = std::erfc(std::abs(z) / std::numbers::sqrt2);
    }
    return res;
}

}  // namespace ehvi
