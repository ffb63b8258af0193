#include <catch_amalgamated.hpp>

#include <cmath>

#include "boxlasso/verify.hpp"

#include "oracles.hpp"

using namespace boxlasso;
using Catch::Matchers::WithinAbs;

TEST_CASE("lagrangian evaluation") {
    const Problem p(DenseMatrix(1, 1, {1.0}), {3.0}, {1.0});
    SECTION("no multipliers: plain fidelity") {
        CHECK_THAT(lagrangian(p, {2.0}, Multipliers({0.0})), WithinAbs(1.0, 1e-15));
    }
    SECTION("x = 0: ||b||^2 - sum lambda tau") {
        CHECK_THAT(lagrangian(p, {0.0}, Multipliers({4.0})), WithinAbs(9.0 - 4.0, 1e-15));
    }
    SECTION("worked value") {
        CHECK_THAT(lagrangian(p, {1.0}, Multipliers({4.0})), WithinAbs(4.0, 1e-15));
    }
    CHECK_THROWS_AS(lagrangian(p, {1.0, 2.0}, Multipliers({4.0})), InvalidInput);
}

TEST_CASE("dual value") {
    SECTION("lambda = 0 with invertible design: exact fit") {
        const Problem p(DenseMatrix::identity(2), {1.0, -2.0}, {1.0, 1.0});
        CHECK_THAT(dual_value(p, Multipliers({0.0, 0.0})), WithinAbs(0.0, 1e-10));
    }
    SECTION("scalar worked example: H equals p*") {
        const Problem p(DenseMatrix(1, 1, {1.0}), {3.0}, {1.0});
        // min (x-3)^2 + 4|x| = 8 at x = 1, H = 8 - 4
        CHECK_THAT(dual_value(p, Multipliers({4.0})), WithinAbs(4.0, 1e-9));
        const double pstar = solve_box_ls(p).objective;
        CHECK_THAT(pstar, WithinAbs(4.0, 1e-9));
    }
    SECTION("oversized multipliers still respect weak duality") {
        const Problem p(DenseMatrix(1, 1, {1.0}), {3.0}, {1.0});
        const double pstar = solve_box_ls(p).objective;
        CHECK(dual_value(p, Multipliers({1000.0})) <= pstar + 1e-8);
    }
}

TEST_CASE("KKT residuals") {
    const DenseMatrix a(1, 1, {1.0});
    SECTION("optimal penalized point has zero residual") {
        // g = 2(1-3) = -4, residual |(-4) + 4 sign(1)| = 0
        CHECK(kkt_residuals(a, {3.0}, Multipliers({4.0}), {1.0})[0] == 0.0);
    }
    SECTION("least-squares point with lambda = 0") {
        oracles::TestRng rng(101);
        for (int rep = 0; rep < 20; ++rep) {
            const auto n = rng.index(1, 4);
            const auto m = n + rng.index(0, 3);
            const DenseMatrix mat = oracles::random_matrix(rng, m, n, -1.0, 1.0);
            if (!oracles::gram_condition_below(mat, 1e6)) continue;
            const Vector b = oracles::random_vector(rng, m, -2.0, 2.0);
            const Multipliers zero(Vector(n, 0.0));
            const Vector ls = solve_weighted_tikhonov(mat, b, zero);
            CHECK(inf_norm(kkt_residuals(mat, b, zero, ls)) <= 1e-8);
        }
    }
    SECTION("heavy penalty keeps zero optimal") {
        // |g| = 6 < lambda = 10 at x = 0
        CHECK(kkt_residuals(a, {3.0}, Multipliers({10.0}), {0.0})[0] == 0.0);
        const double oracle = oracles::penalized_scalar_argmin(1.0, 3.0, 10.0);
        CHECK_THAT(oracle, WithinAbs(0.0, 1e-4));
    }
    SECTION("wrong multiplier is detected") {
        // halved lambda: residual |(-4) + 2| = 2
        CHECK_THAT(kkt_residuals(a, {3.0}, Multipliers({2.0}), {1.0})[0], WithinAbs(2.0, 1e-12));
    }
}

TEST_CASE("verify_equivalence on the worked diagonal instance") {
    const Problem p(DenseMatrix::identity(2), {3.0, 0.5}, {1.0, 1.0});
    const VerifyReport rep = verify_equivalence(p, Multipliers({4.0, 0.0}));
    CHECK(rep.gap <= 1e-6);
    CHECK(rep.gap >= -1e-8);
    CHECK(rep.max_kkt_residual <= 1e-6);
    CHECK(rep.max_kkt_residual == inf_norm(rep.kkt_residuals));
    CHECK_THAT(rep.x_constrained[0], WithinAbs(1.0, 1e-6));
    CHECK_THAT(rep.x_constrained[1], WithinAbs(0.5, 1e-6));
    CHECK_THAT(rep.x_penalized[0], WithinAbs(1.0, 1e-6));
    CHECK_THAT(rep.x_penalized[1], WithinAbs(0.5, 1e-6));
    CHECK(rep.solutions_close);
}

TEST_CASE("verify_equivalence with interior optimum and zero multipliers") {
    const Problem p(DenseMatrix::identity(2), {0.3, -0.4}, {1.0, 1.0});
    const VerifyReport rep = verify_equivalence(p, Multipliers({0.0, 0.0}));
    CHECK_THAT(rep.gap, WithinAbs(0.0, 1e-9));
    CHECK(rep.max_kkt_residual <= 1e-9);
}

TEST_CASE("verify_equivalence flags a tampered multiplier") {
    // The uncorrected factor-1 formula (lambda = 2 instead of 4) leaves a
    // visible KKT violation on the scalar instance.
    const Problem p(DenseMatrix(1, 1, {1.0}), {3.0}, {1.0});
    const VerifyReport rep = verify_equivalence(p, Multipliers({2.0}));
    CHECK(rep.max_kkt_residual > 0.1);
}

TEST_CASE("weak duality holds for arbitrary nonneg multipliers") {
    oracles::TestRng rng(103);
    SolverConfig cfg;
    for (int rep = 0; rep < 60; ++rep) {
        const auto n = rng.index(1, 5);
        const auto m = n + rng.index(0, 4);
        const DenseMatrix a = oracles::random_matrix(rng, m, n, -1.0, 1.0);
        if (!oracles::gram_condition_below(a, 1e6)) continue;
        const Problem p(a, oracles::random_vector(rng, m, -2.0, 2.0),
                        oracles::random_vector(rng, n, 0.05, 1.0));
        Vector lam(n);
        for (double& l : lam)
            l = rng.uniform(0.0, 1.0) < 0.2 ? 0.0 : std::exp(rng.uniform(-3.0, 4.0));
        const double pstar = solve_box_ls(p, cfg).objective;
        CHECK(dual_value(p, Multipliers(lam), cfg) <= pstar + 1e-8);
    }
}

TEST_CASE("strong duality at computed multipliers, per method") {
    oracles::TestRng rng(1009);
    SolverConfig cfg;
    cfg.tol = 1e-8; // thresholds below are 1e-6; keep the budget bounded
    cfg.max_iters = 300000;

    const auto check = [&](const Problem& p, const Multipliers& lam) {
        const VerifyReport rep = verify_equivalence(p, lam, cfg);
        CHECK(rep.gap <= 1e-6);
        CHECK(rep.gap >= -1e-8);
        CHECK(rep.max_kkt_residual <= 1e-6);
    };

    SECTION("scalar") {
        for (int rep = 0; rep < 500; ++rep) {
            double a = 0.0;
            while (std::fabs(a) < 0.1) a = rng.uniform(-5.0, 5.0);
            const Problem p(DenseMatrix(1, 1, {a}), {rng.uniform(-5.0, 5.0)},
                            {rng.uniform(0.01, 5.0)});
            check(p, Multipliers({scalar_multiplier(a, p.b[0], p.tau[0])}));
        }
    }
    SECTION("diagonal gram") {
        for (int rep = 0; rep < 500; ++rep) {
            const auto n = rng.index(1, 10);
            const auto m = n + rng.index(0, 2);
            const Problem p = oracles::random_diagonal_problem(rng, n, m, rep % 2 == 0);
            check(p, diagonal_multipliers(p).lambda);
        }
    }
    SECTION("gradient sign") {
        for (int rep = 0; rep < 500; ++rep) {
            const auto n = rng.index(1, 10);
            const auto m = n + rng.index(0, 2);
            const Problem p = oracles::random_gradient_sign_problem(rng, n, m);
            check(p, gradient_sign_multipliers(p).lambda);
        }
    }
    SECTION("gradient sign with signature") {
        for (int rep = 0; rep < 500; ++rep) {
            const auto n = rng.index(1, 10);
            const auto m = n + rng.index(0, 2);
            // flipping column signs moves a gradient-sign instance into a
            // random orthant; the flips become the admissible signature
            const Problem base = oracles::random_gradient_sign_problem(rng, n, m);
            DenseMatrix a = base.a;
            for (std::size_t j = 0; j < n; ++j)
                if (rng.uniform(0.0, 1.0) < 0.5)
                    for (std::size_t i = 0; i < m; ++i) a.at(i, j) = -a(i, j);
            const Problem p(a, base.b, base.tau);
            const MultiplierResult r = gradient_sign_with_signature(p);
            REQUIRE(r.signature_used.has_value());
            check(p, r.lambda);
        }
    }
}

TEST_CASE("complementary slackness on diagonal instances") {
    oracles::TestRng rng(107);
    for (int rep = 0; rep < 30; ++rep) {
        const auto n = rng.index(1, 6);
        const auto m = n + rng.index(0, 3);
        const Problem p = oracles::random_diagonal_problem(rng, n, m, false);
        const Vector lam = diagonal_multipliers(p).lambda.lambda;
        const SolveResult box = solve_box_ls(p);
        REQUIRE(box.converged);
        for (std::size_t j = 0; j < n; ++j)
            if (lam[j] > 0.0) CHECK_THAT(std::fabs(box.x[j]), WithinAbs(p.tau[j], 1e-6));
    }
}
