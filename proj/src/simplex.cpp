#include "simplex.hpp"

#include <cmath>
#include <limits>

namespace lorentz::detail {

LpResult maximize_packing(const std::vector<std::vector<double>>& A, const std::vector<double>& b,
                          const std::vector<double>& c, std::size_t max_pivots) {
    const std::size_t m = A.size();
    const std::size_t n = c.size();
    constexpr double eps = 1e-12;
    // Tableau columns: n structural, m slack, rhs.
    const std::size_t width = n + m + 1;
    std::vector<std::vector<double>> T(m + 1, std::vector<double>(width, 0.0));
    std::vector<std::size_t> basis(m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) T[i][j] = A[i][j];
        T[i][n + i] = 1.0;
        T[i][width - 1] = b[i] < 0.0 ? 0.0 : b[i];
        basis[i] = n + i;
    }
    // Objective row holds reduced costs -c.
    for (std::size_t j = 0; j < n; ++j) T[m][j] = -c[j];

    LpResult res;
    std::size_t pivots = 0;
    for (; pivots < max_pivots; ++pivots) {
        std::size_t enter = width;
        for (std::size_t j = 0; j + 1 < width; ++j)
            if (T[m][j] < -eps) {
                enter = j;
                break;
            }
        if (enter == width) {
            res.optimal = true;
            break;
        }
        std::size_t leave = m;
        double best_ratio = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < m; ++i) {
            if (T[i][enter] > eps) {
                const double ratio = T[i][width - 1] / T[i][enter];
                if (ratio < best_ratio - eps ||
                    (std::fabs(ratio - best_ratio) <= eps && leave < m && basis[i] < basis[leave])) {
                    best_ratio = ratio;
                    leave = i;
                }
            }
        }
        if (leave == m) {
            res.value = std::numeric_limits<double>::infinity();
            return res;
        }
        const double piv = T[leave][enter];
        for (double& v : T[leave]) v /= piv;
        for (std::size_t i = 0; i <= m; ++i) {
            if (i == leave) continue;
            const double f = T[i][enter];
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < width; ++j) T[i][j] -= f * T[leave][j];
        }
        basis[leave] = enter;
    }
    res.x.assign(n, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        if (basis[i] < n) res.x[basis[i]] = std::max(0.0, T[i][width - 1]);
    // Recompute the objective from a feasibility-repaired x so the bound is
    // not inflated by accumulated pivot error beyond roundoff.
    double scale = 1.0;
    for (std::size_t i = 0; i < m; ++i) {
        double lhs = 0.0, mag = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            lhs += A[i][j] * res.x[j];
            mag += std::fabs(A[i][j] * res.x[j]);
        }
        if (lhs > b[i] + 1e-12 * mag) scale = std::min(scale, b[i] / lhs);
    }
    res.value = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        res.x[j] *= scale;
        res.value += c[j] * res.x[j];
    }
    return res;
}

}  // namespace lorentz::detail
