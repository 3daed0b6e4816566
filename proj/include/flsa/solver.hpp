#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "loss.hpp"
#include "tridiagonal.hpp"

namespace flsa {

/// Which augmented Lagrangian the engine iterates on.
///
/// SinglyAugmented splits only the fused differences (theta = D*beta) and
/// requires a quadratic loss with lambda1 = 0, where the beta step is a
/// plain tridiagonal solve. DoublyAugmented adds a second auxiliary block
/// gamma = beta that decouples the loss from the difference penalty, so any
/// convex loss and lambda1 >= 0 work.
enum class AugmentationMode {
    SinglyAugmented,
    DoublyAugmented,
};

enum class Termination {
    Converged,
    MaxIters,
};

struct AlmConfig {
    double c = 5.0;          ///< augmentation weight, > 0
    double lambda1 = 0.0;    ///< l1 penalty on coefficients, >= 0
    double lambda2 = 1.0;    ///< l1 penalty on successive differences, >= 0
    double tol = 1e-10;      ///< stop when ||nu^k-nu^{k-1}|| + ||mu^k-mu^{k-1}|| < tol
    std::size_t max_outer_iters = 100000;
    std::size_t inner_T = 1;   ///< block sweeps per dual update; 1 is the usual choice
    AugmentationMode mode = AugmentationMode::DoublyAugmented;
    double inner_tol = 1e-12;  ///< early exit for the inner sweeps when inner_T > 1
    bool record_traces = true;

    void validate() const {
        if (!(c > 0.0)) throw std::invalid_argument("AlmConfig: c must be > 0");
        if (!(lambda1 >= 0.0) || !(lambda2 >= 0.0)) {
            throw std::invalid_argument("AlmConfig: lambda1 and lambda2 must be >= 0");
        }
        if (!(tol > 0.0)) throw std::invalid_argument("AlmConfig: tol must be > 0");
        if (!(inner_tol > 0.0)) throw std::invalid_argument("AlmConfig: inner_tol must be > 0");
        if (max_outer_iters == 0) throw std::invalid_argument("AlmConfig: max_outer_iters must be > 0");
        if (inner_T == 0) throw std::invalid_argument("AlmConfig: inner_T must be > 0");
    }
};

/// Primal and dual iterates. theta[j] and nu[j] belong to the fused
/// constraint theta = beta[j+1] - beta[j], j = 0..n-2. gamma and mu exist
/// only in DoublyAugmented mode and stay empty otherwise.
struct SolverState {
    std::vector<double> beta;
    std::vector<double> theta;
    std::vector<double> gamma;
    std::vector<double> mu;
    std::vector<double> nu;
    std::size_t outer_iter = 0;
};

struct SolveReport {
    std::vector<double> beta_hat;
    std::vector<double> objective_trace;       ///< f(beta^k) per outer iteration
    /// Stopping metric per outer iteration: ||nu^k-nu^{k-1}||_2 +
    /// ||mu^k-mu^{k-1}||_2, plus an auxiliary-change term in the
    /// configurations where the multiplier changes alone cannot certify
    /// convergence (see solve()).
    std::vector<double> dual_residual_trace;
    std::vector<double> primal_residual_trace; ///< ||theta - D beta||_2 + ||gamma - beta||_2
    std::size_t iterations = 0;
    std::size_t inner_sweeps = 0;              ///< total block sweeps across all outer iterations
    double final_dual_residual = 0.0;          ///< stopping metric at the last iteration
    Termination terminated = Termination::MaxIters;
};

/// Thrown when an iterate turns NaN/Inf, which signals a divergent
/// configuration rather than a recoverable condition.
struct DivergenceError : std::runtime_error {
    explicit DivergenceError(std::size_t iter)
        : std::runtime_error("solver diverged: non-finite iterate at outer iteration " +
                             std::to_string(iter)) {}
};

/// The FLSA objective
///   f(beta) = sum_i F_i(beta_i, y_i) + lambda1 sum_i |beta_i|
///           + lambda2 sum_{i>=1} |beta_i - beta_{i-1}|.
inline double objective(std::span<const double> beta, std::span<const double> y,
                        const LossModel& loss, double lambda1, double lambda2) {
    if (beta.size() != y.size() || beta.empty()) {
        throw std::invalid_argument("objective: beta and y must have equal nonzero length");
    }
    double f = 0.0;
    for (std::size_t i = 0; i < beta.size(); ++i) {
        f += loss.evaluate(beta[i], y[i]);
        f += lambda1 * std::abs(beta[i]);
    }
    for (std::size_t i = 1; i < beta.size(); ++i) {
        f += lambda2 * std::abs(beta[i] - beta[i - 1]);
    }
    return f;
}

/// theta block update: componentwise soft threshold of the shifted
/// differences, theta[j] = soft(beta[j+1] - beta[j] - nu[j]/c, lambda2/c).
inline void theta_update(std::span<const double> beta, std::span<const double> nu, double c,
                         double lambda2, std::span<double> theta_out) {
    const std::size_t m = theta_out.size();
    if (beta.size() != m + 1 || nu.size() != m) {
        throw std::invalid_argument("theta_update: inconsistent lengths");
    }
    const double threshold = lambda2 / c;
    for (std::size_t j = 0; j < m; ++j) {
        theta_out[j] = soft_threshold(beta[j + 1] - beta[j] - nu[j] / c, threshold);
    }
}

inline std::vector<double> theta_update(std::span<const double> beta,
                                        std::span<const double> nu, double c, double lambda2) {
    std::vector<double> theta(nu.size());
    theta_update(beta, nu, c, lambda2, theta);
    return theta;
}

namespace detail {

// Right-hand side shared by both beta systems: the fused-difference terms
//   c*(theta_j - theta_{j+1}) + (nu_j - nu_{j+1})
// with the convention that theta/nu vanish outside their index range.
inline void add_difference_rhs(std::span<const double> theta, std::span<const double> nu,
                               double c, std::span<double> rhs) {
    const std::size_t n = rhs.size();
    for (std::size_t j = 0; j < n; ++j) {
        if (j > 0) rhs[j] += c * theta[j - 1] + nu[j - 1];
        if (j + 1 < n) rhs[j] -= c * theta[j] + nu[j];
    }
}

// Stationarity system of the doubly augmented Lagrangian in beta:
// diagonal (2c, 3c, ..., 3c, 2c), off-diagonals -c,
// rhs_j = c*gamma_j + mu_j + c*(theta_j - theta_{j+1}) + (nu_j - nu_{j+1}).
inline void assemble_beta_doubly(std::span<const double> gamma, std::span<const double> theta,
                                 std::span<const double> mu, std::span<const double> nu,
                                 double c, TridiagonalSystem& sys) {
    const std::size_t n = gamma.size();
    sys.resize(n);
    for (std::size_t j = 0; j + 1 < n; ++j) {
        sys.sub[j] = -c;
        sys.sup[j] = -c;
    }
    for (std::size_t j = 0; j < n; ++j) {
        const bool interior = (j > 0 && j + 1 < n);
        sys.main[j] = n == 1 ? c : (interior ? 3.0 * c : 2.0 * c);
        sys.rhs[j] = c * gamma[j] + mu[j];
    }
    add_difference_rhs(theta, nu, c, sys.rhs);
}

// Stationarity system of the singly augmented Lagrangian (quadratic loss,
// lambda1 = 0): diagonal (1+c, 1+2c, ..., 1+2c, 1+c), off-diagonals -c,
// rhs_j = y_j + c*(theta_j - theta_{j+1}) + (nu_j - nu_{j+1}).
inline void assemble_beta_singly_quadratic(std::span<const double> y,
                                           std::span<const double> theta,
                                           std::span<const double> nu, double c,
                                           TridiagonalSystem& sys) {
    const std::size_t n = y.size();
    sys.resize(n);
    for (std::size_t j = 0; j + 1 < n; ++j) {
        sys.sub[j] = -c;
        sys.sup[j] = -c;
    }
    for (std::size_t j = 0; j < n; ++j) {
        const bool interior = (j > 0 && j + 1 < n);
        sys.main[j] = n == 1 ? 1.0 : (interior ? 1.0 + 2.0 * c : 1.0 + c);
        sys.rhs[j] = y[j];
    }
    add_difference_rhs(theta, nu, c, sys.rhs);
}

}  // namespace detail

/// beta block update in DoublyAugmented mode: the unique minimizer of the
/// augmented Lagrangian over beta with the other blocks fixed.
inline std::vector<double> beta_update_doubly(std::span<const double> gamma,
                                              std::span<const double> theta,
                                              std::span<const double> mu,
                                              std::span<const double> nu, double c) {
    if (!(c > 0.0)) throw std::invalid_argument("beta_update_doubly: c must be > 0");
    const std::size_t n = gamma.size();
    if (mu.size() != n || theta.size() + 1 != n || nu.size() + 1 != n) {
        throw std::invalid_argument("beta_update_doubly: inconsistent lengths");
    }
    TridiagonalSystem sys;
    detail::assemble_beta_doubly(gamma, theta, mu, nu, c, sys);
    return solve_tridiagonal(sys);
}

/// beta block update in SinglyAugmented mode (quadratic loss, lambda1 = 0).
inline std::vector<double> beta_update_singly_quadratic(std::span<const double> y,
                                                        std::span<const double> theta,
                                                        std::span<const double> nu, double c) {
    if (!(c > 0.0)) throw std::invalid_argument("beta_update_singly_quadratic: c must be > 0");
    const std::size_t n = y.size();
    if (theta.size() + 1 != n || nu.size() + 1 != n) {
        throw std::invalid_argument("beta_update_singly_quadratic: inconsistent lengths");
    }
    TridiagonalSystem sys;
    detail::assemble_beta_singly_quadratic(y, theta, nu, c, sys);
    return solve_tridiagonal(sys);
}

/// Dual ascent step:
///   nu_j += c * (theta_j - (beta_{j+1} - beta_j))
///   mu_i += c * (gamma_i - beta_i)        (DoublyAugmented only)
/// Returns ||nu change||_2 + ||mu change||_2, the stopping metric.
inline double dual_update(SolverState& state, double c) {
    double nu_sq = 0.0;
    for (std::size_t j = 0; j < state.nu.size(); ++j) {
        const double step = c * (state.theta[j] - (state.beta[j + 1] - state.beta[j]));
        state.nu[j] += step;
        nu_sq += step * step;
    }
    double mu_sq = 0.0;
    for (std::size_t i = 0; i < state.mu.size(); ++i) {
        const double step = c * (state.gamma[i] - state.beta[i]);
        state.mu[i] += step;
        mu_sq += step * step;
    }
    return std::sqrt(nu_sq) + std::sqrt(mu_sq);
}

/// Constraint violation ||theta - D beta||_2 + ||gamma - beta||_2; the
/// second term is zero (absent) in SinglyAugmented mode.
inline double primal_residual(const SolverState& state) {
    double theta_sq = 0.0;
    for (std::size_t j = 0; j < state.theta.size(); ++j) {
        const double r = state.theta[j] - (state.beta[j + 1] - state.beta[j]);
        theta_sq += r * r;
    }
    double gamma_sq = 0.0;
    for (std::size_t i = 0; i < state.gamma.size(); ++i) {
        const double r = state.gamma[i] - state.beta[i];
        gamma_sq += r * r;
    }
    return std::sqrt(theta_sq) + std::sqrt(gamma_sq);
}

/// Observer invoked once per outer iteration with the current beta.
using IterationCallback = std::function<void(std::size_t iter, std::span<const double> beta)>;

namespace detail {

inline bool all_finite(std::span<const double> v) {
    for (double x : v) {
        if (!std::isfinite(x)) return false;
    }
    return true;
}

inline SolverState initial_state(std::span<const double> y, AugmentationMode mode) {
    const std::size_t n = y.size();
    SolverState s;
    s.beta.assign(y.begin(), y.end());
    s.theta.assign(n - 1, 0.0);
    s.nu.assign(n - 1, 0.0);
    if (mode == AugmentationMode::DoublyAugmented) {
        s.gamma.assign(n, 0.0);
        s.mu.assign(n, 0.0);
    }
    return s;
}

inline void check_state_lengths(const SolverState& s, std::size_t n, AugmentationMode mode) {
    const std::size_t aux = mode == AugmentationMode::DoublyAugmented ? n : 0;
    if (s.beta.size() != n || s.theta.size() != n - 1 || s.nu.size() != n - 1 ||
        s.gamma.size() != aux || s.mu.size() != aux) {
        throw std::invalid_argument("solve: init state has inconsistent lengths");
    }
}

inline double max_abs_change(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a[i] - b[i]));
    }
    return m;
}

inline double l2_distance(std::span<const double> a, std::span<const double> b) {
    double sq = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        sq += d * d;
    }
    return std::sqrt(sq);
}

}  // namespace detail

/// Runs the augmented Lagrangian iteration until the dual residual
/// ||nu^k-nu^{k-1}||_2 + ||mu^k-mu^{k-1}||_2 drops below config.tol or
/// max_outer_iters is reached. Each outer iteration performs inner_T block
/// sweeps (gamma, beta, theta in DoublyAugmented mode; beta, theta in
/// SinglyAugmented mode) followed by one dual ascent step.
///
/// Two configurations need a safeguard on top of the multiplier-change
/// metric. In SinglyAugmented mode, on instances where no difference is
/// fused, nu locks onto -lambda2*sign(theta) exactly and theta tracks the
/// differences exactly, so ||nu^k-nu^{k-1}|| vanishes while beta is still
/// converging; the metric therefore adds c*||theta^k-theta^{k-1}||_2, the
/// quantity the Lyapunov argument for the alternating update controls. The
/// single-coordinate doubly augmented problem degenerates the same way (the
/// beta step satisfies gamma = beta exactly, freezing mu at zero while the
/// gamma prox iteration is still contracting), so it adds
/// c*||gamma^k-gamma^{k-1}||_2.
///
/// If `init` is omitted, beta starts at y and every other vector at zero.
inline SolveReport solve(std::span<const double> y, const LossModel& loss,
                         const AlmConfig& config, std::optional<SolverState> init = std::nullopt,
                         const IterationCallback& on_iteration = {}) {
    config.validate();
    const std::size_t n = y.size();
    if (n == 0) throw std::invalid_argument("solve: empty input");
    if (!detail::all_finite(y)) throw std::invalid_argument("solve: non-finite observation");
    const bool doubly = config.mode == AugmentationMode::DoublyAugmented;
    if (!doubly && (loss.kind() != LossKind::Quadratic || config.lambda1 != 0.0)) {
        throw std::invalid_argument(
            "solve: SinglyAugmented mode requires quadratic loss and lambda1 = 0");
    }

    SolverState state = init ? std::move(*init) : detail::initial_state(y, config.mode);
    detail::check_state_lengths(state, n, config.mode);
    state.outer_iter = 0;

    // Scratch shared across iterations; nothing below allocates per sweep.
    TridiagonalSystem sys;
    sys.resize(n);
    std::vector<double> thomas_scratch(n);
    std::vector<double> prev_gamma, prev_beta, prev_theta;
    const bool track_inner = config.inner_T > 1;
    const double gamma_tol = std::min(1e-12, 0.01 * config.tol);

    // Stopping-metric safeguards for the configurations where the
    // multiplier changes alone are blind (see the doc comment).
    const bool guard_theta = !doubly;
    const bool guard_gamma = doubly && n == 1;
    std::vector<double> theta_before, gamma_before;

    SolveReport report;
    report.terminated = Termination::MaxIters;

    for (std::size_t k = 1; k <= config.max_outer_iters; ++k) {
        if (guard_theta) theta_before = state.theta;
        if (guard_gamma) gamma_before = state.gamma;

        for (std::size_t t = 0; t < config.inner_T; ++t) {
            if (track_inner) {
                prev_gamma = state.gamma;
                prev_beta = state.beta;
                prev_theta = state.theta;
            }
            if (doubly) {
                for (std::size_t i = 0; i < n; ++i) {
                    const CoordinateProblem p{y[i], state.beta[i], state.mu[i], config.c,
                                              config.lambda1};
                    state.gamma[i] = gamma_update(loss, p, gamma_tol);
                }
                detail::assemble_beta_doubly(state.gamma, state.theta, state.mu, state.nu,
                                             config.c, sys);
            } else {
                detail::assemble_beta_singly_quadratic(y, state.theta, state.nu, config.c, sys);
            }
            solve_tridiagonal(sys, state.beta, thomas_scratch);
            theta_update(state.beta, state.nu, config.c, config.lambda2, state.theta);
            ++report.inner_sweeps;

            if (track_inner && t + 1 < config.inner_T) {
                const double change =
                    std::max({detail::max_abs_change(prev_beta, state.beta),
                              detail::max_abs_change(prev_theta, state.theta),
                              detail::max_abs_change(prev_gamma, state.gamma)});
                if (change < config.inner_tol) break;
            }
        }

        double dual_residual = dual_update(state, config.c);
        if (guard_theta) {
            dual_residual += config.c * detail::l2_distance(theta_before, state.theta);
        }
        if (guard_gamma) {
            dual_residual += config.c * detail::l2_distance(gamma_before, state.gamma);
        }
        state.outer_iter = k;

        if (!std::isfinite(dual_residual) || !detail::all_finite(state.beta) ||
            !detail::all_finite(state.theta) || !detail::all_finite(state.gamma) ||
            !detail::all_finite(state.mu) || !detail::all_finite(state.nu)) {
            throw DivergenceError(k);
        }

        if (config.record_traces) {
            report.objective_trace.push_back(
                objective(state.beta, y, loss, config.lambda1, config.lambda2));
            report.dual_residual_trace.push_back(dual_residual);
            report.primal_residual_trace.push_back(primal_residual(state));
        }
        if (on_iteration) on_iteration(k, state.beta);

        report.iterations = k;
        report.final_dual_residual = dual_residual;
        if (dual_residual < config.tol) {
            report.terminated = Termination::Converged;
            break;
        }
    }

    report.beta_hat = std::move(state.beta);
    return report;
}

/// Quadratic-loss shortcut for lambda1 > 0: solve with lambda1 = 0, then
/// soft-threshold each component by lambda1.
inline std::vector<double> fuse_then_threshold(std::span<const double> y, double lambda1,
                                               double lambda2, AlmConfig config) {
    config.lambda1 = 0.0;
    config.lambda2 = lambda2;
    SolveReport report = solve(y, LossModel::quadratic(), config);
    for (double& b : report.beta_hat) {
        b = soft_threshold(b, lambda1);
    }
    return report.beta_hat;
}

}  // namespace flsa
