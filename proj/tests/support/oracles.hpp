#pragma once

// Slow, independent reference solvers used only by the test and acceptance
// suites. Nothing here shares a code path with the solver it checks: the
// tridiagonal reference is dense elimination, the coordinate reference is a
// grid scan, and the whole-problem reference is a subgradient method.

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <random>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include <flsa/loss.hpp>
#include <flsa/solver.hpp>
#include <flsa/tridiagonal.hpp>

namespace flsa::oracle {

struct OracleConfig {
    std::size_t grid_points = 10001;
    std::size_t subgrad_iters = 200000;
    double subgrad_step0 = 1.0;  ///< step k uses subgrad_step0 / sqrt(k)
};

/// Minimizes a convex function on [lo, hi]: full grid scan, then one
/// golden-section pass on the bracket around the best grid point, down to
/// `resolution`. Convexity makes the result accurate to `resolution`.
template <typename F>
double grid_minimize_1d(F&& f, double lo, double hi, double resolution,
                        std::size_t grid_points = 10001) {
    if (!(lo < hi)) throw std::invalid_argument("grid_minimize_1d: need lo < hi");
    const double step = (hi - lo) / static_cast<double>(grid_points - 1);
    std::size_t best = 0;
    double best_f = f(lo);
    for (std::size_t i = 1; i < grid_points; ++i) {
        const double x = lo + static_cast<double>(i) * step;
        const double fx = f(x);
        if (fx < best_f) {
            best_f = fx;
            best = i;
        }
    }
    double a = lo + static_cast<double>(best > 0 ? best - 1 : 0) * step;
    double b = lo + static_cast<double>(best + 1 < grid_points ? best + 1 : grid_points - 1) * step;

    constexpr double kInvGolden = 0.6180339887498949;
    double x1 = b - kInvGolden * (b - a);
    double x2 = a + kInvGolden * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    while (b - a > resolution) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kInvGolden * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kInvGolden * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

/// Dense Gaussian elimination with partial pivoting, for cross-checking the
/// Thomas solver on small systems.
inline std::vector<double> dense_solve(const TridiagonalSystem& sys) {
    const std::size_t n = sys.main.size();
    std::vector<std::vector<double>> a(n, std::vector<double>(n + 1, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        a[i][i] = sys.main[i];
        if (i > 0) a[i][i - 1] = sys.sub[i - 1];
        if (i + 1 < n) a[i][i + 1] = sys.sup[i];
        a[i][n] = sys.rhs[i];
    }
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t row = col + 1; row < n; ++row) {
            if (std::abs(a[row][col]) > std::abs(a[pivot][col])) pivot = row;
        }
        std::swap(a[col], a[pivot]);
        if (a[col][col] == 0.0) throw std::runtime_error("dense_solve: singular matrix");
        for (std::size_t row = col + 1; row < n; ++row) {
            const double factor = a[row][col] / a[col][col];
            for (std::size_t k = col; k <= n; ++k) a[row][k] -= factor * a[col][k];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double acc = a[i][n];
        for (std::size_t k = i + 1; k < n; ++k) acc -= a[i][k] * x[k];
        x[i] = acc / a[i][i];
    }
    return x;
}

/// Central-difference gradient of a multivariate function.
template <typename F>
std::vector<double> finite_difference_gradient(F&& f, std::span<const double> x,
                                               double step = 1e-6) {
    std::vector<double> point(x.begin(), x.end());
    std::vector<double> grad(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double saved = point[i];
        point[i] = saved + step;
        const double fp = f(point);
        point[i] = saved - step;
        const double fm = f(point);
        point[i] = saved;
        grad[i] = (fp - fm) / (2.0 * step);
    }
    return grad;
}

/// 2-D grid minimization with window refinement, for the n=2 closed forms.
/// Convexity keeps the continuous minimizer near the grid argmin, so a 10x
/// window shrink per pass is safe with 101 points per axis.
template <typename F>
std::array<double, 2> grid_minimize_2d(F&& f, double lo, double hi, int passes = 8) {
    constexpr std::size_t kPoints = 101;
    double cx = 0.5 * (lo + hi);
    double cy = cx;
    double half = 0.5 * (hi - lo);
    std::array<double, 2> best{cx, cy};
    for (int pass = 0; pass < passes; ++pass) {
        double best_f = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < kPoints; ++i) {
            const double x = cx - half + 2.0 * half * static_cast<double>(i) / (kPoints - 1);
            for (std::size_t j = 0; j < kPoints; ++j) {
                const double y = cy - half + 2.0 * half * static_cast<double>(j) / (kPoints - 1);
                const double fx = f(x, y);
                if (fx < best_f) {
                    best_f = fx;
                    best = {x, y};
                }
            }
        }
        cx = best[0];
        cy = best[1];
        half *= 0.1;
    }
    return best;
}

namespace detail {

inline double sign_or_zero(double x) {
    if (x > 0.0) return 1.0;
    if (x < 0.0) return -1.0;
    return 0.0;  // ties pick 0, a valid subgradient element
}

}  // namespace detail

/// Whole-problem reference for the FLSA objective: subgradient descent with
/// diminishing steps step0/sqrt(k), returning the best iterate seen (plain
/// subgradient methods are not descent methods). Desk scale only.
inline std::vector<double> subgradient_solve(std::span<const double> y, const LossModel& loss,
                                             double lambda1, double lambda2,
                                             const OracleConfig& cfg = {}) {
    const std::size_t n = y.size();
    if (n == 0 || n > 200) {
        throw std::invalid_argument("subgradient_solve: n must be in [1, 200]");
    }

    auto value = [&](const std::vector<double>& beta) {
        double f = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            f += loss.evaluate(beta[i], y[i]) + lambda1 * std::abs(beta[i]);
        }
        for (std::size_t i = 1; i < n; ++i) {
            f += lambda2 * std::abs(beta[i] - beta[i - 1]);
        }
        return f;
    };

    std::vector<double> beta(y.begin(), y.end());
    std::vector<double> grad(n);
    std::vector<double> best = beta;
    double best_f = value(beta);

    for (std::size_t k = 1; k <= cfg.subgrad_iters; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            const SubgradientInterval s = loss.subgradient(beta[i], y[i]);
            double g = 0.5 * (s.lo + s.hi);
            g += lambda1 * detail::sign_or_zero(beta[i]);
            if (i > 0) g += lambda2 * detail::sign_or_zero(beta[i] - beta[i - 1]);
            if (i + 1 < n) g -= lambda2 * detail::sign_or_zero(beta[i + 1] - beta[i]);
            grad[i] = g;
        }
        const double step = cfg.subgrad_step0 / std::sqrt(static_cast<double>(k));
        for (std::size_t i = 0; i < n; ++i) beta[i] -= step * grad[i];

        const double f = value(beta);
        if (f < best_f) {
            best_f = f;
            best = beta;
        }
    }
    return best;
}

}  // namespace flsa::oracle
