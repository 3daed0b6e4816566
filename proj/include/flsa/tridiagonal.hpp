#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace flsa {

// A pivot smaller than this aborts the elimination. Every system assembled
// by the solver is strictly diagonally dominant, so hitting the floor means
// the caller built a bad system.
inline constexpr double kTridiagonalPivotFloor = 1e-14;

/// Tridiagonal linear system B x = rhs, stored as three diagonals.
struct TridiagonalSystem {
    std::vector<double> sub;   ///< subdiagonal, length n-1: B(i+1, i)
    std::vector<double> main;  ///< main diagonal, length n
    std::vector<double> sup;   ///< superdiagonal, length n-1: B(i, i+1)
    std::vector<double> rhs;   ///< right-hand side, length n

    std::size_t size() const noexcept { return main.size(); }

    void resize(std::size_t n) {
        sub.resize(n > 0 ? n - 1 : 0);
        main.resize(n);
        sup.resize(n > 0 ? n - 1 : 0);
        rhs.resize(n);
    }

    // Throws std::invalid_argument on inconsistent lengths or non-finite
    // entries. Intended for tests and debugging; the solve itself only
    // checks lengths.
    void validate() const {
        const std::size_t n = main.size();
        if (n == 0) throw std::invalid_argument("TridiagonalSystem: empty system");
        if (sub.size() != n - 1 || sup.size() != n - 1 || rhs.size() != n) {
            throw std::invalid_argument("TridiagonalSystem: inconsistent band lengths");
        }
        auto all_finite = [](const std::vector<double>& v) {
            for (double x : v) {
                if (!std::isfinite(x)) return false;
            }
            return true;
        };
        if (!all_finite(sub) || !all_finite(main) || !all_finite(sup) || !all_finite(rhs)) {
            throw std::invalid_argument("TridiagonalSystem: non-finite entry");
        }
    }
};

/// Solves B x = rhs by the Thomas algorithm: one forward elimination sweep,
/// one back substitution, O(n) total. No pivoting; callers guarantee
/// diagonal dominance. `x` receives the solution, `scratch` must hold at
/// least n-1 doubles (it stores the eliminated superdiagonal).
///
/// Throws std::runtime_error if a pivot falls below kTridiagonalPivotFloor.
inline void solve_tridiagonal(const TridiagonalSystem& sys, std::span<double> x,
                              std::span<double> scratch) {
    const std::size_t n = sys.main.size();
    if (n == 0) throw std::invalid_argument("solve_tridiagonal: empty system");
    if (sys.sub.size() != n - 1 || sys.sup.size() != n - 1 || sys.rhs.size() != n) {
        throw std::invalid_argument("solve_tridiagonal: inconsistent band lengths");
    }
    if (x.size() < n || (n > 1 && scratch.size() < n - 1)) {
        throw std::invalid_argument("solve_tridiagonal: output/scratch too small");
    }

    double pivot = sys.main[0];
    if (std::abs(pivot) < kTridiagonalPivotFloor) {
        throw std::runtime_error("solve_tridiagonal: pivot underflow at row 0");
    }
    x[0] = sys.rhs[0] / pivot;
    if (n > 1) scratch[0] = sys.sup[0] / pivot;

    for (std::size_t i = 1; i < n; ++i) {
        pivot = sys.main[i] - sys.sub[i - 1] * scratch[i - 1];
        if (std::abs(pivot) < kTridiagonalPivotFloor) {
            throw std::runtime_error("solve_tridiagonal: pivot underflow at row " +
                                     std::to_string(i));
        }
        x[i] = (sys.rhs[i] - sys.sub[i - 1] * x[i - 1]) / pivot;
        if (i < n - 1) scratch[i] = sys.sup[i] / pivot;
    }

    for (std::size_t i = n - 1; i-- > 0;) {
        x[i] -= scratch[i] * x[i + 1];
    }
}

/// Allocating convenience overload.
inline std::vector<double> solve_tridiagonal(const TridiagonalSystem& sys) {
    std::vector<double> x(sys.main.size());
    std::vector<double> scratch(sys.main.size());
    solve_tridiagonal(sys, x, scratch);
    return x;
}

}  // namespace flsa
