#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include <flsa/loss.hpp>

#include "support/oracles.hpp"

using flsa::CoordinateProblem;
using flsa::LossKind;
using flsa::LossModel;
using flsa::coordinate_objective;
using flsa::generic_gamma_update;
using flsa::lad_gamma_update;
using flsa::quadratic_gamma_update;
using flsa::soft_threshold;
using flsa::oracle::grid_minimize_1d;

namespace {

CoordinateProblem random_problem(std::mt19937& rng, bool allow_lambda1 = true) {
    std::uniform_real_distribution<double> y(-5.0, 5.0);
    std::uniform_real_distribution<double> mu(-3.0, 3.0);
    std::uniform_real_distribution<double> c(0.2, 10.0);
    std::uniform_real_distribution<double> l1(0.0, 3.0);
    std::bernoulli_distribution sparse(0.25);
    CoordinateProblem p;
    p.y = y(rng);
    p.beta = y(rng);
    p.mu = mu(rng);
    p.c = c(rng);
    p.lambda1 = allow_lambda1 && !sparse(rng) ? l1(rng) : 0.0;
    return p;
}

double grid_oracle(const LossModel& loss, const CoordinateProblem& p, double resolution = 1e-8) {
    return grid_minimize_1d([&](double g) { return coordinate_objective(loss, p, g); }, -10.0,
                            10.0, resolution);
}

}  // namespace

TEST_CASE("soft threshold basics") {
    REQUIRE(soft_threshold(2.0, 0.5) == 1.5);
    REQUIRE(soft_threshold(0.3, 0.5) == 0.0);
    REQUIRE(soft_threshold(-1.2, 0.2) == -1.0);
    REQUIRE(soft_threshold(0.0, 0.0) == 0.0);
}

TEST_CASE("soft threshold is odd and 1-Lipschitz", "[property]") {
    std::mt19937 rng(101);
    std::uniform_real_distribution<double> x(-10.0, 10.0);
    std::uniform_real_distribution<double> t(0.0, 5.0);
    for (int i = 0; i < 1000; ++i) {
        const double a = x(rng), b = x(rng), thr = t(rng);
        REQUIRE(soft_threshold(-a, thr) == -soft_threshold(a, thr));
        REQUIRE(std::abs(soft_threshold(a, thr) - soft_threshold(b, thr)) <=
                std::abs(a - b) + 1e-15);
    }
}

TEST_CASE("loss models are convex and coercive", "[property]") {
    const LossModel models[] = {LossModel::quadratic(), LossModel::least_absolute_deviation(),
                                LossModel::huber(1.0), LossModel::huber(0.3)};
    std::mt19937 rng(102);
    std::uniform_real_distribution<double> u(-8.0, 8.0);
    for (const LossModel& loss : models) {
        for (int i = 0; i < 300; ++i) {
            const double y = u(rng), a = u(rng), b = u(rng);
            const double mid = loss.evaluate(0.5 * (a + b), y);
            REQUIRE(mid <= 0.5 * (loss.evaluate(a, y) + loss.evaluate(b, y)) + 1e-12);
        }
        const double y = u(rng);
        const double far = 1e6 * (1.0 + std::abs(y));
        REQUIRE(loss.evaluate(far, y) > loss.evaluate(y, y));
        REQUIRE(loss.evaluate(-far, y) > loss.evaluate(y, y));
    }
}

TEST_CASE("subgradients match finite differences away from kinks", "[property]") {
    const LossModel models[] = {LossModel::quadratic(), LossModel::least_absolute_deviation(),
                                LossModel::huber(1.0)};
    std::mt19937 rng(103);
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    for (const LossModel& loss : models) {
        for (int i = 0; i < 200; ++i) {
            const double y = u(rng);
            double g = u(rng);
            if (std::abs(g - y) < 1e-3) g += 0.5;  // keep clear of the LAD kink
            const auto s = loss.subgradient(g, y);
            REQUIRE(s.lo == s.hi);
            const double fd = (loss.evaluate(g + 1e-6, y) - loss.evaluate(g - 1e-6, y)) / 2e-6;
            REQUIRE_THAT(s.lo, Catch::Matchers::WithinAbs(fd, 1e-5));
        }
    }
}

TEST_CASE("loss selection by name") {
    REQUIRE(LossModel::from_name("quadratic").kind() == LossKind::Quadratic);
    REQUIRE(LossModel::from_name("lad").kind() == LossKind::LeastAbsoluteDeviation);
    const LossModel h = LossModel::from_name("huber", 2.5);
    REQUIRE(h.kind() == LossKind::Huber);
    REQUIRE(h.huber_delta() == 2.5);
    REQUIRE_THROWS_AS(LossModel::from_name("cauchy"), std::invalid_argument);
    REQUIRE_THROWS_AS(LossModel::huber(0.0), std::invalid_argument);
}

TEST_CASE("quadratic coordinate update") {
    REQUIRE(quadratic_gamma_update({1.0, 1.0, 0.0, 1.0, 0.0}) == 1.0);
    REQUIRE(quadratic_gamma_update({0.0, 0.0, 0.0, 1.0, 2.0}) == 0.0);

    // Oracle-derived value for y=2, beta=0, mu=0.5, c=3, lambda1=1.
    const CoordinateProblem p{2.0, 0.0, 0.5, 3.0, 1.0};
    const double v = grid_oracle(LossModel::quadratic(), p);
    REQUIRE_THAT(quadratic_gamma_update(p), Catch::Matchers::WithinAbs(v, 1e-6));
    REQUIRE_THAT(quadratic_gamma_update(p), Catch::Matchers::WithinAbs(0.125, 1e-12));
}

TEST_CASE("absolute-deviation coordinate update") {
    REQUIRE(lad_gamma_update({0.0, 0.0, 0.0, 1.0, 0.0}) == 0.0);
    REQUIRE(lad_gamma_update({0.0, 0.0, 0.0, 4.0, 1.5}) == 0.0);
    REQUIRE(lad_gamma_update({5.0, 5.0, 0.0, 1.0, 0.0}) == 5.0);

    // Oracle-derived value for y=1, beta=-2, mu=0.3, c=2, lambda1=0.5.
    const CoordinateProblem p{1.0, -2.0, 0.3, 2.0, 0.5};
    const double v = grid_oracle(LossModel::least_absolute_deviation(), p);
    REQUIRE_THAT(lad_gamma_update(p), Catch::Matchers::WithinAbs(v, 1e-6));
    REQUIRE_THAT(lad_gamma_update(p), Catch::Matchers::WithinAbs(-1.4, 1e-12));
}

TEST_CASE("generic update at a symmetric Huber problem") {
    const CoordinateProblem p{0.0, 0.0, 0.0, 1.0, 0.0};
    REQUIRE_THAT(generic_gamma_update(LossModel::huber(1.0), p, 1e-9),
                 Catch::Matchers::WithinAbs(0.0, 1e-9));
}

TEST_CASE("generic update agrees with the closed forms", "[property]") {
    std::mt19937 rng(104);
    for (int i = 0; i < 1000; ++i) {
        const CoordinateProblem p = random_problem(rng);
        INFO("trial " << i << ": y=" << p.y << " beta=" << p.beta << " mu=" << p.mu
                      << " c=" << p.c << " lambda1=" << p.lambda1);
        const double via_generic_quad =
            generic_gamma_update(LossModel::quadratic(), p, 1e-10);
        REQUIRE_THAT(via_generic_quad,
                     Catch::Matchers::WithinAbs(quadratic_gamma_update(p), 1e-6));
        const double via_generic_lad =
            generic_gamma_update(LossModel::least_absolute_deviation(), p, 1e-10);
        REQUIRE_THAT(via_generic_lad, Catch::Matchers::WithinAbs(lad_gamma_update(p), 1e-6));
    }
}

TEST_CASE("coordinate updates beat every grid point", "[property]") {
    std::mt19937 rng(105);
    const LossModel quad = LossModel::quadratic();
    const LossModel lad = LossModel::least_absolute_deviation();
    const LossModel huber = LossModel::huber(1.0);
    for (int i = 0; i < 200; ++i) {
        const CoordinateProblem p = random_problem(rng);
        const double sigma = 1.0 + std::abs(p.y) + std::abs(p.beta);

        struct Update {
            const LossModel& loss;
            double gamma;
        } updates[] = {
            {quad, quadratic_gamma_update(p)},
            {lad, lad_gamma_update(p)},
            {huber, generic_gamma_update(huber, p, 1e-10)},
        };
        for (const auto& [loss, gamma] : updates) {
            const double at_gamma = coordinate_objective(loss, p, gamma);
            const double lo = p.beta - 5.0 * sigma;
            const double span = 10.0 * sigma;
            for (int k = 0; k <= 10000; ++k) {
                const double g = lo + span * static_cast<double>(k) / 10000.0;
                REQUIRE(at_gamma <= coordinate_objective(loss, p, g) + 1e-9);
            }
            // Strong convexity: nudging the minimizer must not improve it.
            REQUIRE(coordinate_objective(loss, p, gamma + 1e-4) > at_gamma - 1e-12);
            REQUIRE(coordinate_objective(loss, p, gamma - 1e-4) > at_gamma - 1e-12);
        }
    }
}

TEST_CASE("bracketing failure reports a contract violation") {
    // A "loss" whose subgradient is a huge negative constant cannot belong
    // to any coercive convex function; bracketing must give up.
    const LossModel bogus = LossModel::custom(
        [](double, double) { return 0.0; },
        [](double, double) { return flsa::SubgradientInterval{-1e300, -1e300}; });
    REQUIRE_THROWS_AS(generic_gamma_update(bogus, {0.0, 0.0, 0.0, 1.0, 0.0}, 1e-9),
                      std::runtime_error);
}

TEST_CASE("custom losses run through the generic path") {
    // Quartic loss (y - g)^4: convex, coercive, smooth.
    const LossModel quartic = LossModel::custom(
        [](double g, double y) {
            const double r = y - g;
            return r * r * r * r;
        },
        [](double g, double y) {
            const double r = g - y;
            const double d = 4.0 * r * r * r;
            return flsa::SubgradientInterval{d, d};
        });
    const CoordinateProblem p{2.0, 0.5, -0.25, 1.5, 0.75};
    const double got = generic_gamma_update(quartic, p, 1e-10);
    const double expected = grid_oracle(quartic, p);
    REQUIRE_THAT(got, Catch::Matchers::WithinAbs(expected, 1e-6));
}
