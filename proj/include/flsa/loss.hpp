#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace flsa {

/// Soft-thresholding map x -> sign(x) * max(|x| - t, 0), the proximal
/// operator of t*|.|.
inline double soft_threshold(double x, double t) noexcept {
    if (x > t) return x - t;
    if (x < -t) return x + t;
    return 0.0;
}

/// Closed subgradient interval [lo, hi] of a convex function at a point.
/// Singleton (lo == hi) wherever the function is differentiable.
struct SubgradientInterval {
    double lo;
    double hi;
};

enum class LossKind {
    Quadratic,               // (y - g)^2 / 2
    LeastAbsoluteDeviation,  // |y - g|
    Huber,                   // Huber(y - g) with knee delta
    Custom,                  // user-supplied evaluation + subgradient
};

/// Per-coordinate data-fit loss F_i(g, y_i). Must be convex and coercive in
/// g for every fixed y_i; the built-in kinds are, custom losses are on the
/// caller. Immutable after construction, safe to share across threads.
class LossModel {
public:
    using EvalFn = std::function<double(double gamma, double y)>;
    using SubgradFn = std::function<SubgradientInterval(double gamma, double y)>;

    static LossModel quadratic() { return LossModel(LossKind::Quadratic, 1.0); }

    static LossModel least_absolute_deviation() {
        return LossModel(LossKind::LeastAbsoluteDeviation, 1.0);
    }

    static LossModel huber(double delta = 1.0) {
        if (!(delta > 0.0)) throw std::invalid_argument("LossModel::huber: delta must be > 0");
        return LossModel(LossKind::Huber, delta);
    }

    static LossModel custom(EvalFn eval, SubgradFn subgrad) {
        if (!eval || !subgrad) {
            throw std::invalid_argument("LossModel::custom: both callbacks required");
        }
        LossModel m(LossKind::Custom, 1.0);
        m.eval_ = std::move(eval);
        m.subgrad_ = std::move(subgrad);
        return m;
    }

    /// Loss selection by name: "quadratic" | "lad" | "huber".
    static LossModel from_name(std::string_view name, double huber_delta = 1.0) {
        if (name == "quadratic") return quadratic();
        if (name == "lad") return least_absolute_deviation();
        if (name == "huber") return huber(huber_delta);
        throw std::invalid_argument("unknown loss '" + std::string(name) +
                                    "' (expected quadratic, lad or huber)");
    }

    LossKind kind() const noexcept { return kind_; }
    double huber_delta() const noexcept { return delta_; }

    double evaluate(double gamma, double y) const {
        switch (kind_) {
            case LossKind::Quadratic: {
                const double r = y - gamma;
                return 0.5 * r * r;
            }
            case LossKind::LeastAbsoluteDeviation:
                return std::abs(y - gamma);
            case LossKind::Huber: {
                const double r = std::abs(y - gamma);
                if (r <= delta_) return 0.5 * r * r;
                return delta_ * (r - 0.5 * delta_);
            }
            case LossKind::Custom:
                return eval_(gamma, y);
        }
        return 0.0;  // unreachable
    }

    /// Subdifferential of g -> evaluate(g, y) at g.
    SubgradientInterval subgradient(double gamma, double y) const {
        switch (kind_) {
            case LossKind::Quadratic: {
                const double d = gamma - y;
                return {d, d};
            }
            case LossKind::LeastAbsoluteDeviation:
                if (gamma < y) return {-1.0, -1.0};
                if (gamma > y) return {1.0, 1.0};
                return {-1.0, 1.0};
            case LossKind::Huber: {
                const double d = std::clamp(gamma - y, -delta_, delta_);
                return {d, d};
            }
            case LossKind::Custom:
                return subgrad_(gamma, y);
        }
        return {0.0, 0.0};  // unreachable
    }

private:
    LossModel(LossKind kind, double delta) : kind_(kind), delta_(delta) {}

    LossKind kind_;
    double delta_;
    EvalFn eval_;
    SubgradFn subgrad_;
};

/// One coordinate of the gamma block: minimize over g
///   loss(g, y) + lambda1*|g| + mu*(g - beta) + c/2*(g - beta)^2.
/// The c/2 term makes the problem strongly convex, so the minimizer is
/// unique for any convex loss.
struct CoordinateProblem {
    double y;        ///< observation y_i
    double beta;     ///< current beta_i (quadratic anchor)
    double mu;       ///< dual variable for the gamma_i = beta_i constraint
    double c;        ///< augmentation weight, > 0
    double lambda1;  ///< l1 weight, >= 0
};

/// Value of the coordinate objective at g.
inline double coordinate_objective(const LossModel& loss, const CoordinateProblem& p, double g) {
    const double d = g - p.beta;
    return loss.evaluate(g, p.y) + p.lambda1 * std::abs(g) + p.mu * d + 0.5 * p.c * d * d;
}

/// Exact coordinate minimizer for the quadratic loss: stationarity of the
/// strictly convex objective reduces to one soft threshold.
inline double quadratic_gamma_update(const CoordinateProblem& p) noexcept {
    return soft_threshold((p.y + p.c * p.beta - p.mu) / (1.0 + p.c), p.lambda1 / (1.0 + p.c));
}

/// Exact coordinate minimizer for the absolute-deviation loss. The objective
/// is strictly convex and differentiable except at 0 and y, so the minimizer
/// is one of six candidates: the two kinks, plus one interior stationary
/// point per sign pattern (sign of g, sign of y - g), kept only when it lies
/// strictly inside the region its signs assume. Ties (a measure-zero event)
/// break toward smaller |g|, then smaller g.
inline double lad_gamma_update(const CoordinateProblem& p) {
    auto objective = [&](double g) {
        const double d = g - p.beta;
        return std::abs(p.y - g) + p.lambda1 * std::abs(g) + p.mu * d + 0.5 * p.c * d * d;
    };

    double best_g = 0.0;
    double best_f = objective(0.0);

    auto consider = [&](double g) {
        const double f = objective(g);
        const bool better =
            f < best_f ||
            (f == best_f && (std::abs(g) < std::abs(best_g) ||
                             (std::abs(g) == std::abs(best_g) && g < best_g)));
        if (better) {
            best_f = f;
            best_g = g;
        }
    };

    consider(p.y);
    for (double sign_resid : {-1.0, 1.0}) {      // sign of y - g
        for (double sign_g : {-1.0, 1.0}) {      // sign of g
            const double g = p.beta + (sign_resid - p.lambda1 * sign_g - p.mu) / p.c;
            const bool sign_ok = (sign_g > 0.0) ? (g > 0.0) : (g < 0.0);
            const bool resid_ok = (sign_resid > 0.0) ? (p.y - g > 0.0) : (p.y - g < 0.0);
            if (sign_ok && resid_ok) consider(g);
        }
    }
    return best_g;
}

namespace detail {

// Subdifferential of the full coordinate objective at g.
inline SubgradientInterval coordinate_subgradient(const LossModel& loss,
                                                  const CoordinateProblem& p, double g) {
    SubgradientInterval s = loss.subgradient(g, p.y);
    if (g > 0.0) {
        s.lo += p.lambda1;
        s.hi += p.lambda1;
    } else if (g < 0.0) {
        s.lo -= p.lambda1;
        s.hi -= p.lambda1;
    } else {
        s.lo -= p.lambda1;
        s.hi += p.lambda1;
    }
    const double smooth = p.mu + p.c * (g - p.beta);
    s.lo += smooth;
    s.hi += smooth;
    return s;
}

}  // namespace detail

/// Coordinate minimizer for an arbitrary convex coercive loss, to within
/// `tol` in the argument. Brackets the minimizer by geometric expansion from
/// beta, then bisects on the sign of the subgradient; strong convexity from
/// the c/2 term guarantees a unique minimizer and a sign change.
///
/// Throws std::runtime_error if bracketing exceeds 200 expansions, which
/// signals a non-coercive loss (a caller contract violation).
inline double generic_gamma_update(const LossModel& loss, const CoordinateProblem& p,
                                   double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("generic_gamma_update: tol must be > 0");

    auto subgrad = [&](double g) { return detail::coordinate_subgradient(loss, p, g); };

    // For a strictly convex objective with minimizer g*:
    //   g < g*  <=>  sup subgradient(g) < 0
    //   g > g*  <=>  inf subgradient(g) > 0
    double half_width = 1.0 + std::abs(p.y - p.beta);
    double lo = p.beta - half_width;
    double hi = p.beta + half_width;

    int expansions = 0;
    while (subgrad(lo).hi > 0.0) {
        if (++expansions > 200) {
            throw std::runtime_error("generic_gamma_update: bracketing failed (loss not coercive?)");
        }
        half_width *= 2.0;
        lo = p.beta - half_width;
    }
    half_width = 1.0 + std::abs(p.y - p.beta);
    while (subgrad(hi).lo < 0.0) {
        if (++expansions > 200) {
            throw std::runtime_error("generic_gamma_update: bracketing failed (loss not coercive?)");
        }
        half_width *= 2.0;
        hi = p.beta + half_width;
    }

    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        const SubgradientInterval s = subgrad(mid);
        if (s.hi < 0.0) {
            lo = mid;
        } else if (s.lo > 0.0) {
            hi = mid;
        } else {
            return mid;  // 0 is in the subdifferential: exact minimizer
        }
    }
    return 0.5 * (lo + hi);
}

/// Dispatches a coordinate update to the cheapest exact method for the loss.
inline double gamma_update(const LossModel& loss, const CoordinateProblem& p, double tol) {
    switch (loss.kind()) {
        case LossKind::Quadratic:
            return quadratic_gamma_update(p);
        case LossKind::LeastAbsoluteDeviation:
            return lad_gamma_update(p);
        case LossKind::Huber:
        case LossKind::Custom:
            return generic_gamma_update(loss, p, tol);
    }
    return 0.0;  // unreachable
}

}  // namespace flsa
