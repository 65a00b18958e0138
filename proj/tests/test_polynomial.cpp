#include <doctest.h>

#include <cmath>
#include <random>

#include "transops/geometry.hpp"
#include "transops/polynomial.hpp"
#include "transops/specialfn.hpp"

using namespace transops;

TEST_CASE("polynomial arithmetic and evaluation") {
    Polynomial p(2);
    p.add_term({1, 0}, 2.0);  // 2x
    p.add_term({0, 2}, -1.0); // -y^2
    p.add_term({0, 0}, 0.5);
    Vec x{0.3, -0.4};
    CHECK(p.eval(x) == doctest::Approx(2 * 0.3 - 0.16 + 0.5).epsilon(1e-15));
    CHECK(p.degree() == 2);

    Polynomial q = p * p;
    CHECK(q.eval(x) == doctest::Approx(p.eval(x) * p.eval(x)).epsilon(1e-14));
    CHECK(q.degree() == 4);

    Polynomial dp = p.derivative(1);
    CHECK(dp.eval(x) == doctest::Approx(-2.0 * (-0.4)).epsilon(1e-15));

    Polynomial sum = p + p.scaled(-1.0);
    CHECK(sum.empty());
}

TEST_CASE("psi composition round trip") {
    Polynomial p(2);
    p.add_term({2, 1}, 3.0);
    p.add_term({0, 0}, 1.0);
    Polynomial lifted = p.compose_psi();
    CHECK(lifted.degree() == 6);
    Polynomial back = lifted.pullback_psi();
    Vec y{0.2, 0.3};
    CHECK(back.eval(y) == doctest::Approx(p.eval(y)).epsilon(1e-15));

    Polynomial odd(1);
    odd.add_term({1}, 1.0);
    CHECK_THROWS_AS(odd.pullback_psi(), internal_error);
}

TEST_CASE("ridge polynomial from univariate coefficients") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> ud(-0.6, 0.6);
    const int n = 5;
    const double lambda = 1.5;
    Vec y{0.6, 0.8};
    Polynomial ridge = Polynomial::from_univariate_in_form(gegenbauer_monomial_coeffs(n, lambda), y);
    for (int trial = 0; trial < 20; ++trial) {
        Vec x{ud(rng), ud(rng)};
        double t = x[0] * y[0] + x[1] * y[1];
        CHECK(ridge.eval(x) ==
              doctest::Approx(gegenbauer_eval(n, GegenbauerParam(lambda), t)).epsilon(1e-12));
    }
}
