#include <doctest.h>

#include <cmath>
#include <random>

#include "transops/geometry.hpp"
#include "transops/polynomial.hpp"
#include "transops/spectral.hpp"
#include "transops/weights.hpp"

using namespace transops;

TEST_CASE("ball weight derived constants") {
    BallWeight w(3, {0.0, 0.0, 0.0}, 1.5);
    CHECK(w.lambda_kappa == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(w.lambda_total == doctest::Approx(2.5).epsilon(1e-15));

    BallWeight wk(2, {0.5, 1.5}, 0.5);
    double abs_kappa = 0.5 + 1.5;
    CHECK(wk.lambda_kappa == doctest::Approx(abs_kappa + 0.5).epsilon(1e-15));

    CHECK_THROWS_AS(BallWeight(2, {-0.5, 0.0}, 1.0), parameter_error);
    CHECK_THROWS_AS(BallWeight(2, {}, -1.0), parameter_error);
}

TEST_CASE("a_norm normalizes the weight integral") {
    for (auto& w : {BallWeight(1, {}, 0.5), BallWeight(2, {}, 1.0), BallWeight(3, {}, 2.5),
                    BallWeight(2, {0.5, 1.5}, 0.5)}) {
        auto rule = w.make_rule(8);
        CHECK(w.a_norm * rule.total_weight() == doctest::Approx(1.0).epsilon(1e-11));
    }
    for (auto& w : {SimplexWeight(1, {0.75}, 1.25), SimplexWeight(2, {0.5, 0.5}, 0.5),
                    SimplexWeight(2, {0.5, 1.5}, 1.0)}) {
        auto rule = w.make_rule(8);
        CHECK(w.a_norm * rule.total_weight() == doctest::Approx(1.0).epsilon(1e-11));
    }
}

TEST_CASE("simplex norms transport through psi") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> ud(-1.0, 1.0);
    SimplexWeight sw(2, {0.5, 1.5}, 1.0);
    BallWeight bw = sw.lifted();
    // matched rules: the simplex rule is the pushforward of the ball rule
    auto rs = simplex_rule(2, sw.kappa, sw.mu, 10, 10);
    auto rb = ball_rule(2, sw.mu - 0.5, sw.kappa, 10, 10);

    Polynomial f(2);
    for (int deg = 0; deg <= 3; ++deg)
        for (int i = 0; i + deg <= 3; ++i)
            f.add_term({deg, i}, ud(rng));
    FunctionHandle fs = f.to_function(FnDomain::simplex);
    FunctionHandle fb = compose_psi(fs);

    for (double p : {1.0, 2.0}) {
        double ns = weighted_norm(fs, Weight(sw), rs, p);
        double nb = weighted_norm(fb, Weight(bw), rb, p);
        CHECK(ns == doctest::Approx(nb).epsilon(1e-12));
    }
}

TEST_CASE("weight density against an absorbing rule") {
    BallWeight w(2, {}, 1.5);
    auto rule = w.make_rule(6);           // absorbs (1-|x|^2)^(mu-1/2)
    auto plain = ball_rule(2, 0.0, {}, 16, 16); // absorbs nothing smooth
    auto f = [](const double* x) { return 1.0 + x[0] + x[1] * x[1]; };
    double a = rule.integrate(f);
    double b = plain.integrate([&](const double* x) {
        return f(x) * w.density(std::span<const double>(x, 2));
    });
    CHECK(a == doctest::Approx(b).epsilon(1e-10));
}
