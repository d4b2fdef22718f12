#include "qkd/linprog.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace qkd {

namespace {

constexpr int kMaxVars = 12;
constexpr int kMaxRows = 8;
constexpr double kFeasTol = 1e-9;
constexpr double kPivotTol = 1e-11;

// Solves the square system in place; returns false when singular.
bool solve_square(double a[kMaxRows][kMaxRows + 1], int m) {
    for (int col = 0; col < m; ++col) {
        int piv = col;
        for (int r = col + 1; r < m; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        if (std::abs(a[piv][col]) < kPivotTol) return false;
        if (piv != col)
            for (int k = col; k <= m; ++k) std::swap(a[piv][k], a[col][k]);
        for (int r = 0; r < m; ++r) {
            if (r == col) continue;
            const double factor = a[r][col] / a[col][col];
            if (factor == 0.0) continue;
            for (int k = col; k <= m; ++k) a[r][k] -= factor * a[col][k];
        }
    }
    for (int r = 0; r < m; ++r) a[r][m] /= a[r][r];
    return true;
}

}  // namespace

std::optional<LpVertex> lp_solve_enumerate(const BoxedLp& lp) {
    const int n = lp.n;
    const int me = static_cast<int>(lp.eq_a.size());
    const int mi = static_cast<int>(lp.ineq_g.size());
    if (n < 1 || n > kMaxVars)
        throw std::invalid_argument("lp_solve_enumerate: supports 1..12 variables");
    if (me > kMaxRows - 2 || mi > 4)
        throw std::invalid_argument("lp_solve_enumerate: too many rows");

    std::optional<LpVertex> best;
    std::vector<double> x(n);

    // Active-set choice: a subset of inequality rows treated as equalities,
    // plus a bound value (0 or 1) for every variable outside the free set.
    for (int imask = 0; imask < (1 << mi); ++imask) {
        const int s = std::popcount(static_cast<unsigned>(imask));
        const int nfree = me + s;
        if (nfree > n) continue;

        // Iterate over free-variable subsets of size nfree via bitmask.
        for (std::uint32_t fmask = 0; fmask < (1u << n); ++fmask) {
            if (std::popcount(fmask) != nfree) continue;

            int free_idx[kMaxRows];
            int k = 0;
            for (int v = 0; v < n; ++v)
                if (fmask & (1u << v)) free_idx[k++] = v;

            const int nfixed = n - nfree;
            for (std::uint32_t bmask = 0; bmask < (1u << nfixed); ++bmask) {
                // Assign fixed variables to bounds.
                int b = 0;
                for (int v = 0; v < n; ++v) {
                    if (fmask & (1u << v)) continue;
                    x[v] = (bmask & (1u << b)) ? 1.0 : 0.0;
                    ++b;
                }

                // Build the square system for the free variables.
                double a[kMaxRows][kMaxRows + 1];
                int row = 0;
                auto add_row = [&](const std::vector<double>& coef, double rhs) {
                    double acc = rhs;
                    for (int v = 0; v < n; ++v)
                        if (!(fmask & (1u << v))) acc -= coef[v] * x[v];
                    for (int j = 0; j < nfree; ++j)
                        a[row][j] = coef[free_idx[j]];
                    a[row][nfree] = acc;
                    ++row;
                };
                for (int e = 0; e < me; ++e) add_row(lp.eq_a[e], lp.eq_b[e]);
                for (int i = 0; i < mi; ++i)
                    if (imask & (1 << i)) add_row(lp.ineq_g[i], lp.ineq_h[i]);

                if (nfree > 0 && !solve_square(a, nfree)) continue;

                bool ok = true;
                for (int j = 0; j < nfree && ok; ++j) {
                    const double v = a[j][nfree];
                    if (v < -kFeasTol || v > 1.0 + kFeasTol) ok = false;
                    x[free_idx[j]] = v;
                }
                if (!ok) continue;

                // Verify equalities (fully fixed corners skip solve_square)
                // and all inactive inequalities.
                for (int e = 0; e < me && ok; ++e) {
                    double acc = -lp.eq_b[e];
                    for (int v = 0; v < n; ++v) acc += lp.eq_a[e][v] * x[v];
                    if (std::abs(acc) > kFeasTol) ok = false;
                }
                for (int i = 0; i < mi && ok; ++i) {
                    double acc = -lp.ineq_h[i];
                    for (int v = 0; v < n; ++v) acc += lp.ineq_g[i][v] * x[v];
                    if (acc > kFeasTol) ok = false;
                }
                if (!ok) continue;

                double value = 0.0;
                for (int v = 0; v < n; ++v) value += lp.c[v] * x[v];
                if (!best || value > best->value) best = LpVertex{x, value};
            }
        }
    }
    return best;
}

bool lp_feasible(const BoxedLp& lp) { return lp_solve_enumerate(lp).has_value(); }

}  // namespace qkd
