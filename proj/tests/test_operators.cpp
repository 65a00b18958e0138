#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "transops/operators.hpp"
#include "transops/polynomial.hpp"
#include "transops/registry.hpp"
#include "transops/smoothness.hpp"

using namespace transops;

namespace {

Polynomial random_poly(std::mt19937_64& rng, int d, int deg) {
    std::uniform_real_distribution<double> ud(-1.0, 1.0);
    Polynomial p(d);
    std::vector<int> e(d, 0);
    for (;;) {
        int total = 0;
        for (int v : e)
            total += v;
        if (total <= deg)
            p.add_term(e, ud(rng));
        int i = 0;
        for (; i < d; ++i) {
            if (++e[i] <= deg)
                break;
            e[i] = 0;
        }
        if (i == d)
            break;
    }
    return p;
}

BallPoint random_ball_point(std::mt19937_64& rng, int d, double rmax = 0.95) {
    std::uniform_real_distribution<double> ud(-1.0, 1.0);
    for (;;) {
        Vec x(d);
        double n2 = 0.0;
        for (double& v : x) {
            v = ud(rng);
            n2 += v * v;
        }
        if (n2 <= rmax * rmax)
            return BallPoint(std::move(x));
    }
}

Vec random_unit(std::mt19937_64& rng, int d) {
    std::normal_distribution<double> nd(0.0, 1.0);
    Vec y(d);
    double n2 = 0.0;
    for (double& v : y) {
        v = nd(rng);
        n2 += v * v;
    }
    for (double& v : y)
        v /= std::sqrt(n2);
    return y;
}

} // namespace

TEST_CASE("translate_1d") {
    GegenbauerParam lam(1.5);
    FunctionHandle f(FnDomain::interval, 1,
                     [](std::span<const double> t) { return std::exp(t[0]) - 0.3 * t[0] * t[0]; });
    SUBCASE("s = 1 is the identity") {
        auto tf = translate_1d(1.0, f, lam, 16);
        for (double t : {-0.8, -0.1, 0.5, 0.99})
            CHECK(tf(t) == doctest::Approx(f(t)).epsilon(1e-13));
    }
    SUBCASE("constants are fixed") {
        auto tf = translate_1d(0.4, constant_fn(FnDomain::interval, 1, 1.0), lam, 16);
        for (double t : {-0.7, 0.0, 0.3})
            CHECK(tf(t) == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("product formula on Gegenbauer polynomials") {
        for (double lambda : {0.8, 1.5, 2.5}) {
            GegenbauerParam gp(lambda);
            for (int n = 0; n <= 8; ++n) {
                FunctionHandle cn(FnDomain::interval, 1, [n, gp](std::span<const double> t) {
                    return gegenbauer_eval(n, gp, t[0]);
                });
                const double s = 0.6;
                auto tf = translate_1d(s, cn, gp, 24);
                for (double t : {-0.9, -0.2, 0.4, 0.8}) {
                    double expected = gegenbauer_eval(n, gp, s) * gegenbauer_eval(n, gp, t) /
                                      gegenbauer_at_one(n, gp);
                    CHECK(tf(t) == doctest::Approx(expected).epsilon(1e-10));
                }
            }
        }
    }
}

TEST_CASE("intertwine_z2d") {
    std::mt19937_64 rng(211);
    FunctionHandle f(FnDomain::ball, 2, [](std::span<const double> x) {
        return std::cos(x[0]) + x[1] * x[1] * x[0];
    });
    SUBCASE("kappa = 0 is the identity") {
        for (int trial = 0; trial < 5; ++trial) {
            BallPoint x = random_ball_point(rng, 2);
            CHECK(intertwine_z2d(f, {0.0, 0.0}, x.coords, 12) ==
                  doctest::Approx(f(x.coords)).epsilon(1e-13));
        }
    }
    SUBCASE("V_kappa 1 = 1") {
        BallPoint x = random_ball_point(rng, 2);
        CHECK(intertwine_z2d(constant_fn(FnDomain::ball, 2, 1.0), {0.5, 1.5}, x.coords, 12) ==
              doctest::Approx(1.0).epsilon(1e-13));
    }
    SUBCASE("linear moment against the Beta oracle") {
        // V_kappa x_1 = x_1 / (2 kappa_1 + 1): the moment of t(1+t) against
        // c_k (1-t^2)^(k-1) is B(3/2,k)/B(1/2,k) = 1/(2k+1)
        FunctionHandle lin(FnDomain::ball, 2, [](std::span<const double> x) { return x[0]; });
        for (double k1 : {0.25, 0.5, 2.0}) {
            BallPoint x = random_ball_point(rng, 2);
            CHECK(intertwine_z2d(lin, {k1, 0.7}, x.coords, 16) ==
                  doctest::Approx(x.coords[0] / (2.0 * k1 + 1.0)).epsilon(1e-12));
        }
    }
}

TEST_CASE("integral translation basics") {
    std::mt19937_64 rng(223);
    SUBCASE("constants and theta = 0") {
        for (int d : {1, 2, 3}) {
            BallWeight w(d, {}, 1.0);
            auto rule = translation_rule(w, 12, 12);
            FunctionHandle one = constant_fn(FnDomain::ball, d, 1.0);
            Polynomial p = random_poly(rng, d, 4);
            FunctionHandle f = p.to_function(FnDomain::ball);
            for (int trial = 0; trial < 3; ++trial) {
                BallPoint x = random_ball_point(rng, d);
                double theta = 0.3 + 0.5 * trial;
                CHECK(translate_ball_integral(theta, one, w, x, rule) ==
                      doctest::Approx(1.0).epsilon(1e-12));
                CHECK(translate_ball_integral(0.0, f, w, x, rule) ==
                      doctest::Approx(f(x.coords)).epsilon(1e-12));
            }
        }
    }
    SUBCASE("capability errors") {
        BallWeight wk(2, {0.5, 0.0}, 1.0);
        CHECK_THROWS_AS(translation_rule(wk, 8, 8), capability_error);
        BallWeight w0(2, {}, 0.0);
        CHECK_THROWS_AS(translation_rule(w0, 8, 8), capability_error);
    }
}

TEST_CASE("multiplier identity for the integral translation") {
    // T_theta C_n(<.,y>) = [C_n(cos theta)/C_n(1)] C_n(<x,y>) on ridge basis
    // functions; the identity behind the explicit integral formula.
    std::mt19937_64 rng(227);
    std::uniform_real_distribution<double> ud(0.0, 1.0);
    for (int d : {1, 2, 3}) {
        for (double mu : {0.5, 1.0, 2.5}) {
            BallWeight w(d, {}, mu);
            GegenbauerParam lam(w.lambda_total);
            auto rule = translation_rule(w, 14, 14);
            for (int n = 0; n <= 6; ++n) {
                Vec y = random_unit(rng, d);
                FunctionHandle ridge(FnDomain::ball, d, [n, lam, y](std::span<const double> x) {
                    double t = 0.0;
                    for (size_t i = 0; i < y.size(); ++i)
                        t += x[i] * y[i];
                    return gegenbauer_eval(n, lam, std::clamp(t, -1.0, 1.0));
                });
                for (int trial = 0; trial < 3; ++trial) {
                    BallPoint x = random_ball_point(rng, d);
                    double theta = std::numbers::pi * ud(rng);
                    double got = translate_ball_integral(theta, ridge, w, x, rule);
                    double mult =
                        gegenbauer_eval(n, lam, std::cos(theta)) / gegenbauer_at_one(n, lam);
                    double expected = mult * ridge(x.coords);
                    CHECK(std::abs(got - expected) <= 1e-8 * std::max(1.0, std::abs(expected)));
                }
            }
        }
    }
}

TEST_CASE("d=1 reduction to translate_1d") {
    std::mt19937_64 rng(229);
    std::uniform_real_distribution<double> ud(-0.95, 0.95);
    const double mu = 1.25;
    BallWeight w(1, {}, mu);
    auto rule = translation_rule(w, 32, 1);
    std::vector<FunctionHandle> fns;
    fns.push_back(constant_fn(FnDomain::interval, 1, 2.0));
    fns.emplace_back(FnDomain::interval, 1,
                     [](std::span<const double> t) { return std::exp(0.7 * t[0]); });
    fns.emplace_back(FnDomain::interval, 1,
                     [](std::span<const double> t) { return t[0] * t[0] * t[0]; });
    fns.emplace_back(FnDomain::interval, 1,
                     [](std::span<const double> t) { return std::cos(2.0 * t[0]); });
    fns.emplace_back(FnDomain::interval, 1,
                     [](std::span<const double> t) { return 1.0 / (2.0 + t[0]); });
    for (const auto& f : fns) {
        FunctionHandle fb(FnDomain::ball, 1, f.eval);
        for (int trial = 0; trial < 10; ++trial) {
            double theta = std::numbers::pi * 0.5 * (ud(rng) + 1.0);
            double x = ud(rng);
            double a = translate_ball_integral(theta, fb, w, BallPoint(Vec{x}), rule);
            auto t1 = translate_1d(std::cos(theta), f, GegenbauerParam(mu), 32);
            CHECK(a == doctest::Approx(t1(x)).epsilon(1e-10));
        }
    }
}

TEST_CASE("frame invariance of the integral translation") {
    std::mt19937_64 rng(233);
    std::uniform_real_distribution<double> ud(-1.0, 1.0);
    for (int d : {2, 3, 4}) {
        BallWeight w(d, {}, 1.0);
        auto rule = translation_rule(w, 10, 10);
        Polynomial p = random_poly(rng, d, 4);
        FunctionHandle f = p.to_function(FnDomain::ball);
        for (int trial = 0; trial < 4; ++trial) {
            BallPoint x = random_ball_point(rng, d);
            const double theta = 0.9;
            auto fr1 = build_frame(x);
            auto fr2 = build_frame_householder(x);
            // randomize the free completion: Givens rotations on columns 2..d
            auto fr3 = fr2;
            for (int a = 1; a < d; ++a)
                for (int b = a + 1; b < d; ++b) {
                    double ang = ud(rng);
                    double c = std::cos(ang), s = std::sin(ang);
                    for (int row = 0; row < d; ++row) {
                        double va = fr3.U[(size_t)row * d + a], vb = fr3.U[(size_t)row * d + b];
                        fr3.U[(size_t)row * d + a] = c * va - s * vb;
                        fr3.U[(size_t)row * d + b] = s * va + c * vb;
                    }
                }
            double v1 = translate_ball_integral_frame(theta, f, w, fr1, rule);
            double v2 = translate_ball_integral_frame(theta, f, w, fr2, rule);
            double v3 = translate_ball_integral_frame(theta, f, w, fr3, rule);
            CHECK(v1 == doctest::Approx(v2).epsilon(1e-9));
            CHECK(v1 == doctest::Approx(v3).epsilon(1e-9));
        }
    }
}

TEST_CASE("spectral path: dual-path consistency") {
    std::mt19937_64 rng(239);
    std::uniform_real_distribution<double> ud(0.0, 1.0);
    for (int d : {1, 2}) {
        for (double mu : {0.5, 1.0}) {
            BallWeight w(d, {}, mu);
            const int N = 8;
            Projector proj(Weight(w), N);
            Polynomial p = random_poly(rng, d, N);
            FunctionHandle f = p.to_function(FnDomain::ball);
            SpectralDecomposition dec = proj.project(f);
            auto rule = translation_rule(w, 16, 16);
            for (int trial = 0; trial < 4; ++trial) {
                double theta = std::numbers::pi * ud(rng);
                SpectralDecomposition tdec = translate_spectral(theta, dec);
                for (int k = 0; k < 4; ++k) {
                    BallPoint x = random_ball_point(rng, d);
                    double spec = tdec.eval_sum(x.coords);
                    double integ = translate_ball_integral(theta, f, w, x, rule);
                    CHECK(spec == doctest::Approx(integ).epsilon(1e-8));
                }
            }
            SpectralDecomposition same = translate_spectral(0.0, dec);
            for (int n = 0; n <= N; ++n)
                CHECK(same.norms[n] == doctest::Approx(dec.norms[n]).epsilon(1e-13));
        }
    }
}

TEST_CASE("ball convolution") {
    std::mt19937_64 rng(241);
    BallWeight w(2, {}, 1.0);
    Weight ww(w);
    const int N = 8;
    Projector proj(ww, N);
    Polynomial p = random_poly(rng, 2, N);
    FunctionHandle f = p.to_function(FnDomain::ball);
    SpectralDecomposition dec = proj.project(f);

    SUBCASE("g = 1 keeps only the mean") {
        auto conv = convolve_ball(dec, constant_fn(FnDomain::interval, 1, 1.0));
        CHECK(conv.norms[0] == doctest::Approx(dec.norms[0]).epsilon(1e-12));
        for (int n = 1; n <= N; ++n)
            CHECK(conv.norms[n] <= 1e-12);
        BallPoint x = random_ball_point(rng, 2);
        double mean = w.a_norm * w.make_rule(2 * N + 4).integrate([&](const double* y) {
            return f(std::span<const double>(y, 2));
        });
        CHECK(conv.eval_sum(x.coords) == doctest::Approx(mean).epsilon(1e-10));
    }
    SUBCASE("g = p_n extracts proj_n") {
        GegenbauerParam lam(w.lambda_total);
        for (int n : {0, 2, 5}) {
            FunctionHandle pn(FnDomain::interval, 1, [n, lam](std::span<const double> t) {
                return (n + lam.lambda) / lam.lambda * gegenbauer_eval(n, lam, t[0]);
            });
            auto conv = convolve_ball(dec, pn);
            for (int m = 0; m <= N; ++m)
                CHECK(std::abs(conv.norms[m] - (m == n ? dec.norms[n] : 0.0)) <= 1e-10);
        }
    }
    SUBCASE("direct intertwining-integral path agrees") {
        FunctionHandle g(FnDomain::interval, 1,
                         [](std::span<const double> t) { return 0.3 + t[0] * t[0]; });
        auto rule = w.make_rule(2 * N + 4);
        auto conv = convolve_ball(dec, g);
        for (int trial = 0; trial < 3; ++trial) {
            BallPoint x = random_ball_point(rng, 2);
            double direct = convolve_ball_direct(f, g, w, x.coords, rule, 20);
            CHECK(conv.eval_sum(x.coords) == doctest::Approx(direct).epsilon(1e-8));
        }
    }
    SUBCASE("direct path with nonzero kappa") {
        BallWeight wk(2, {0.5, 1.5}, 0.5);
        const int Nk = 5;
        Polynomial pk = random_poly(rng, 2, Nk);
        FunctionHandle fk = pk.to_function(FnDomain::ball);
        FunctionHandle g(FnDomain::interval, 1,
                         [](std::span<const double> t) { return 1.0 + 0.5 * t[0]; });
        auto deck = project(fk, Weight(wk), Nk);
        auto convk = convolve_ball(deck, g);
        auto rule = wk.make_rule(2 * Nk + 4);
        for (int trial = 0; trial < 2; ++trial) {
            BallPoint x = random_ball_point(rng, 2);
            double direct = convolve_ball_direct(fk, g, wk, x.coords, rule, 20);
            CHECK(convk.eval_sum(x.coords) == doctest::Approx(direct).epsilon(1e-8));
        }
    }
}

TEST_CASE("simplex translation and transport") {
    std::mt19937_64 rng(251);
    std::uniform_real_distribution<double> ud(0.0, 1.0);
    SUBCASE("lift vs spectral dual path (kappa = 0 lift)") {
        for (int d : {1, 2}) {
            SimplexWeight w(d, std::vector<double>(d, 0.0), 1.0);
            const int N = 6;
            Projector proj(Weight(w), N);
            Polynomial p = random_poly(rng, d, N);
            FunctionHandle f = p.to_function(FnDomain::simplex);
            SpectralDecomposition dec = proj.project(f);
            for (int trial = 0; trial < 3; ++trial) {
                double theta = std::numbers::pi * ud(rng);
                auto lifted = translate_simplex_lift(theta, f, w, 16, 16);
                SpectralDecomposition tdec = translate_spectral(theta, dec);
                for (int k = 0; k < 4; ++k) {
                    Vec y(d);
                    double s = 0.0;
                    for (double& v : y) {
                        v = 0.45 * ud(rng);
                        s += v;
                    }
                    if (s > 0.9)
                        continue;
                    CHECK(lifted(y) == doctest::Approx(tdec.eval_sum(y)).epsilon(1e-8));
                }
            }
        }
    }
    SUBCASE("identity cases") {
        SimplexWeight w(2, {0.5, 1.5}, 1.0);
        const int N = 5;
        Projector proj(Weight(w), N);
        Polynomial p = random_poly(rng, 2, N);
        FunctionHandle f = p.to_function(FnDomain::simplex);
        SpectralDecomposition dec = proj.project(f);
        SpectralDecomposition t0 = translate_spectral(0.0, dec);
        Vec y{0.2, 0.3};
        CHECK(t0.eval_sum(y) == doctest::Approx(f(y)).epsilon(1e-10));
        SpectralDecomposition one = proj.project(constant_fn(FnDomain::simplex, 2, 1.0));
        SpectralDecomposition tone = translate_spectral(0.7, one);
        CHECK(tone.eval_sum(y) == doctest::Approx(1.0).epsilon(1e-10));
    }
    SUBCASE("Eq-4.8-style commuting diagram, nonzero kappa") {
        SimplexWeight sw(2, {0.5, 0.5}, 0.5);
        BallWeight bw = sw.lifted();
        const int N = 5;
        Polynomial p = random_poly(rng, 2, N);
        FunctionHandle f = p.to_function(FnDomain::simplex);
        FunctionHandle fb = compose_psi(f);
        auto sdec = project(f, Weight(sw), N);
        auto bdec = project(fb, Weight(bw), 2 * N);
        for (int trial = 0; trial < 4; ++trial) {
            double theta = std::numbers::pi * ud(rng);
            auto ts = translate_spectral(theta, sdec);
            auto tb = translate_spectral(theta, bdec);
            BallPoint x = random_ball_point(rng, 2, 0.9);
            Vec y = psi_map(x.coords);
            CHECK(ts.eval_sum(y) == doctest::Approx(tb.eval_sum(x.coords)).epsilon(1e-8));
        }
    }
}

TEST_CASE("simplex convolution") {
    std::mt19937_64 rng(257);
    SimplexWeight w(2, {0.5, 1.5}, 1.0);
    Weight ww(w);
    const int N = 6;
    Projector proj(ww, N);
    Polynomial p = random_poly(rng, 2, N);
    FunctionHandle f = p.to_function(FnDomain::simplex);
    SpectralDecomposition dec = proj.project(f);
    JacobiParam jp(w.lambda_total - 0.5, -0.5);

    SUBCASE("g = 1 gives the weighted mean") {
        auto conv = convolve_simplex(dec, constant_fn(FnDomain::interval, 1, 1.0));
        for (int n = 1; n <= N; ++n)
            CHECK(conv.norms[n] <= 1e-12);
        CHECK(conv.norms[0] == doctest::Approx(dec.norms[0]).epsilon(1e-12));
    }
    SUBCASE("f * q_n = proj_n f") {
        for (int n = 0; n <= 5; ++n) {
            FunctionHandle qn(FnDomain::interval, 1, [n, jp](std::span<const double> t) {
                return jacobi_eval(n, jp, 1.0, true) * jacobi_eval(n, jp, t[0], true);
            });
            auto conv = convolve_simplex(dec, qn);
            for (int m = 0; m <= N; ++m)
                CHECK(std::abs(conv.norms[m] - (m == n ? dec.norms[n] : 0.0)) <= 1e-10);
            Vec y{0.25, 0.4};
            CHECK(conv.eval_sum(y) == doctest::Approx(dec.eval_component(n, y)).epsilon(1e-9));
        }
    }
    SUBCASE("commutation with psi") {
        // ((f *T g) o psi) = (f o psi) *B g(2{.}^2 - 1)
        FunctionHandle g(FnDomain::interval, 1,
                         [](std::span<const double> t) { return 0.4 + 0.3 * t[0] + t[0] * t[0]; });
        FunctionHandle g2(FnDomain::interval, 1, [g](std::span<const double> t) {
            return g(2.0 * t[0] * t[0] - 1.0);
        });
        auto convT = convolve_simplex(dec, g);
        BallWeight bw = w.lifted();
        auto bdec = project(compose_psi(f), Weight(bw), 2 * N);
        auto convB = convolve_ball(bdec, g2);
        for (int trial = 0; trial < 5; ++trial) {
            BallPoint x = random_ball_point(rng, 2, 0.9);
            Vec y = psi_map(x.coords);
            CHECK(convT.eval_sum(y) == doctest::Approx(convB.eval_sum(x.coords)).epsilon(1e-9));
        }
    }
}

TEST_CASE("contraction and theta -> 0 limit") {
    BallWeight w(2, {}, 1.0);
    Weight ww(w);
    auto rule = w.make_rule(24);
    auto trule = translation_rule(w, 16, 16);
    for (const char* name : {"gaussian:1", "absnorm", "abs-power:1.5"}) {
        FunctionHandle f = make_registry_function(name, FnDomain::ball, 2, ww);
        for (double p : {1.0, 2.0, std::numeric_limits<double>::infinity()}) {
            double nf = weighted_norm(f, ww, rule, p);
            for (double theta : {0.2, 0.9, 2.0}) {
                FunctionHandle tf(FnDomain::ball, 2, [&w, &f, &trule, theta](std::span<const double> x) {
                    return translate_ball_integral(theta, f, w, BallPoint(Vec(x.begin(), x.end())),
                                                   trule);
                });
                CHECK(weighted_norm(tf, ww, rule, p) <= nf + 1e-9);
            }
        }
        // || T_theta f - f ||_2 decreases to 0 along a dyadic theta grid
        double prev = std::numeric_limits<double>::infinity();
        for (double theta = 0.5; theta >= 1.0 / 64 - 1e-12; theta *= 0.5) {
            FunctionHandle diff(FnDomain::ball, 2, [&w, &f, &trule, theta](std::span<const double> x) {
                return translate_ball_integral(theta, f, w, BallPoint(Vec(x.begin(), x.end())),
                                               trule) -
                       f(x);
            });
            double nd = weighted_norm(diff, ww, rule, 2.0);
            CHECK(nd <= prev + 1e-12);
            prev = nd;
        }
        CHECK(prev < 1e-2);
    }
}

TEST_CASE("Young's inequality, sampled") {
    std::mt19937_64 rng(269);
    BallWeight w(2, {}, 1.0);
    Weight ww(w);
    const int N = 6;
    Projector proj(ww, N);
    auto rule = w.make_rule(2 * N + 6);
    const double inf = std::numeric_limits<double>::infinity();
    const std::vector<std::array<double, 3>> triples{{1, 1, 1}, {2, 2, 1}, {inf, 2, 2}};
    for (int trial = 0; trial < 5; ++trial) {
        Polynomial pf = random_poly(rng, 2, N);
        FunctionHandle f = pf.to_function(FnDomain::ball);
        std::uniform_real_distribution<double> ud(-1.0, 1.0);
        double a = ud(rng), b = ud(rng), c = ud(rng);
        FunctionHandle g(FnDomain::interval, 1, [a, b, c](std::span<const double> t) {
            return a + b * t[0] + c * t[0] * t[0];
        });
        auto dec = proj.project(f);
        auto conv = convolve_ball(dec, g);
        FunctionHandle fg(FnDomain::ball, 2,
                          [conv](std::span<const double> x) { return conv.eval_sum(x); });
        // 1D norms of g in the b_lambda-normalized measure
        auto grule = gauss_jacobi_rule(24, JacobiParam(w.lambda_total - 0.5, w.lambda_total - 0.5));
        const double blam = const_b_lambda(w.lambda_total);
        auto gnorm = [&](double p) {
            if (std::isinf(p)) {
                double m = 0.0;
                for (int i = 0; i < grule.size(); ++i)
                    m = std::max(m, std::abs(g(grule.nodes[i])));
                return m;
            }
            double s = 0.0;
            for (int i = 0; i < grule.size(); ++i)
                s += grule.weights[i] * std::pow(std::abs(g(grule.nodes[i])), p);
            return std::pow(blam * s, 1.0 / p);
        };
        for (auto [p, q, r] : triples) {
            double lhs = weighted_norm(fg, ww, rule, p);
            double rhs = weighted_norm(f, ww, rule, q) * gnorm(r);
            CHECK(lhs <= rhs * (1.0 + 1e-9) + 1e-9);
        }
    }
}
