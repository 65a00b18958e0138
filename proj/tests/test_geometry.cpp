#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

#include "transops/geometry.hpp"

using namespace transops;

namespace {

BallPoint random_ball_point(std::mt19937_64& rng, int d, double rmax = 0.999) {
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

Eigen::MatrixXd to_eigen(const Vec& m, int d) {
    Eigen::MatrixXd out(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            out(i, j) = m[(size_t)i * d + j];
    return out;
}

} // namespace

TEST_CASE("frame basics") {
    SUBCASE("x = 0 gives the identity frame") {
        auto f = build_frame(BallPoint(Vec{0.0, 0.0}));
        CHECK(f.U == Vec{1.0, 0.0, 0.0, 1.0});
        CHECK(f.D == Vec{1.0, 1.0});
    }
    SUBCASE("d=2 frame is the polar rotation") {
        const double r = 0.7, phi = 1.1;
        BallPoint x(Vec{r * std::cos(phi), r * std::sin(phi)});
        auto f = build_frame(x);
        CHECK(f.U[0] == doctest::Approx(std::cos(phi)).epsilon(1e-14));
        CHECK(f.U[1] == doctest::Approx(-std::sin(phi)).epsilon(1e-14));
        CHECK(f.U[2] == doctest::Approx(std::sin(phi)).epsilon(1e-14));
        CHECK(f.U[3] == doctest::Approx(std::cos(phi)).epsilon(1e-14));
        CHECK(f.D[0] == doctest::Approx(std::sqrt(1.0 - r * r)).epsilon(1e-14));
    }
    SUBCASE("norm clamp") {
        CHECK_NOTHROW(BallPoint(Vec{1.0 + 5e-13, 0.0}));
        CHECK_THROWS_AS(BallPoint(Vec{1.1, 0.0}), parameter_error);
    }
}

TEST_CASE("frames are orthogonal with first column x/|x|") {
    std::mt19937_64 rng(5);
    for (int d : {1, 2, 3, 4}) {
        for (int trial = 0; trial < 20; ++trial) {
            BallPoint x = random_ball_point(rng, d);
            if (x.norm < 1e-6)
                continue;
            for (bool householder : {false, true}) {
                auto f = householder ? build_frame_householder(x) : build_frame(x);
                Eigen::MatrixXd U = to_eigen(f.U, d);
                CHECK((U * U.transpose() - Eigen::MatrixXd::Identity(d, d)).norm() <= 1e-13 * d);
                for (int i = 0; i < d; ++i)
                    CHECK(U(i, 0) == doctest::Approx(x.coords[i] / x.norm).epsilon(1e-13));
                CHECK(std::abs(std::abs(U.determinant()) - 1.0) <= 1e-12);
            }
        }
        // boundary point
        Vec b(d, 0.0);
        b[d - 1] = 1.0;
        auto f = build_frame(BallPoint(b));
        Eigen::MatrixXd U = to_eigen(f.U, d);
        CHECK((U * U.transpose() - Eigen::MatrixXd::Identity(d, d)).norm() <= 1e-13 * d);
        CHECK(f.D[0] == doctest::Approx(0.0));
    }
}

TEST_CASE("ellipsoid matrix eigen-structure, by the eigen-decomposition oracle") {
    // The quadratic form used by the translation integral is
    // u A u^T = (1-|x|^2)|u|^2 + <x,u>^2, i.e. A = (1-|x|^2) I + x^T x with
    // eigenvalues 1 (along x) and 1-|x|^2; the frame reconstructs it. The
    // minus-sign variant (1-|x|^2) I - x^T x has eigenvalues 1-2|x|^2 and
    // 1-|x|^2 on the same eigenvectors, so it is not the ellipsoid matrix
    // (d=1 would give A = 1-2x^2 instead of 1).
    std::mt19937_64 rng(17);
    for (int d : {1, 2, 3, 4}) {
        for (int trial = 0; trial < 100; ++trial) {
            BallPoint x = random_ball_point(rng, d);
            const double r2 = x.norm * x.norm;
            Eigen::MatrixXd A_plus = (1.0 - r2) * Eigen::MatrixXd::Identity(d, d);
            Eigen::MatrixXd A_minus = A_plus;
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) {
                    A_plus(i, j) += x.coords[i] * x.coords[j];
                    A_minus(i, j) -= x.coords[i] * x.coords[j];
                }

            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A_plus);
            Eigen::VectorXd ev = es.eigenvalues(); // ascending
            CHECK(ev[d - 1] == doctest::Approx(1.0).epsilon(1e-12));
            for (int i = 0; i + 1 < d; ++i)
                CHECK(ev[i] == doctest::Approx(1.0 - r2).epsilon(1e-11));

            auto f = build_frame(x);
            Eigen::MatrixXd U = to_eigen(f.U, d);
            Eigen::VectorXd lam_plus(d), lam_minus(d);
            lam_plus[0] = 1.0;
            lam_minus[0] = 1.0 - 2.0 * r2;
            for (int i = 1; i < d; ++i) {
                lam_plus[i] = 1.0 - r2;
                lam_minus[i] = 1.0 - r2;
            }
            CHECK((U * lam_plus.asDiagonal() * U.transpose() - A_plus).norm() <= 1e-12 * d);
            CHECK((U * lam_minus.asDiagonal() * U.transpose() - A_minus).norm() <= 1e-12 * d);
        }
    }
}

TEST_CASE("quadratic form direct vs frame path") {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> ud(-1.0, 1.0);
    for (int d : {1, 2, 3, 4}) {
        for (int trial = 0; trial < 50; ++trial) {
            BallPoint x = random_ball_point(rng, d);
            Vec u(d);
            for (double& v : u)
                v = ud(rng);
            auto f = build_frame(x);
            CHECK(quadratic_form(x, u) == doctest::Approx(quadratic_form_frame(f, u)).epsilon(1e-12));
        }
        Vec u(d, 0.3);
        BallPoint zero{Vec(d, 0.0)};
        double u2 = 0.0;
        for (double v : u)
            u2 += v * v;
        CHECK(quadratic_form(zero, u) == doctest::Approx(u2).epsilon(1e-14));
        // along x/|x| the form is the unit eigenvalue
        BallPoint x = random_ball_point(rng, d);
        if (x.norm > 1e-3) {
            Vec xhat = x.coords;
            for (double& v : xhat)
                v /= x.norm;
            CHECK(quadratic_form(x, xhat) == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("psi and lift") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> ud(0.0, 1.0);
    CHECK(psi_map(Vec{0.0, 0.0}) == Vec{0.0, 0.0});
    for (int d : {1, 2, 3}) {
        for (int trial = 0; trial < 100; ++trial) {
            Vec y(d);
            double s = 0.0;
            for (double& v : y) {
                v = ud(rng);
                s += v;
            }
            if (s > 1.0)
                continue;
            std::vector<int> signs(d);
            for (int& sg : signs)
                sg = ud(rng) < 0.5 ? -1 : 1;
            BallPoint x = lift_sqrt(y, signs);
            Vec back = psi_map(x.coords);
            double l1 = 0.0;
            for (int i = 0; i < d; ++i) {
                CHECK(std::abs(back[i] - y[i]) <= 1e-15);
                l1 += back[i];
            }
            CHECK(l1 == doctest::Approx(x.norm * x.norm).epsilon(1e-13));
            CHECK(l1 <= 1.0 + 1e-12);
        }
    }
}
