#include "transops/geometry.hpp"

#include <cmath>

namespace transops {

BallPoint::BallPoint(Vec c) : coords(std::move(c)) {
    double n2 = 0.0;
    for (double v : coords)
        n2 += v * v;
    norm = std::sqrt(n2);
    if (norm > 1.0 + 1e-12)
        throw parameter_error("BallPoint: |x| > 1");
    if (norm > 1.0)
        norm = 1.0;
}

Vec EllipsoidFrame::translate_point(double cos_theta, double sin_theta, std::span<const double> s) const {
    Vec ds(d);
    for (int i = 0; i < d; ++i)
        ds[i] = D[i] * s[i];
    Vec y(d);
    for (int i = 0; i < d; ++i) {
        double acc = 0.0;
        for (int j = 0; j < d; ++j)
            acc += U[(size_t)i * d + j] * ds[j];
        y[i] = cos_theta * base.coords[i] + sin_theta * acc;
    }
    return y;
}

namespace {

EllipsoidFrame make_frame(const BallPoint& x, Vec U) {
    EllipsoidFrame f;
    f.d = x.dim();
    f.U = std::move(U);
    f.D.assign(f.d, 1.0);
    f.D[0] = std::sqrt(std::max(0.0, 1.0 - x.norm * x.norm));
    f.base = x;
    return f;
}

Vec identity(int d) {
    Vec U(d * d, 0.0);
    for (int i = 0; i < d; ++i)
        U[(size_t)i * d + i] = 1.0;
    return U;
}

} // namespace

EllipsoidFrame build_frame_householder(const BallPoint& x) {
    const int d = x.dim();
    if (x.norm < 1e-14)
        return make_frame(x, identity(d));
    Vec xhat(d);
    for (int i = 0; i < d; ++i)
        xhat[i] = x.coords[i] / x.norm;
    // v = xhat + sign(xhat_1) e_1; U = -sign(xhat_1) (I - 2 v v^T / |v|^2)
    const double sgn = xhat[0] >= 0.0 ? 1.0 : -1.0;
    Vec v = xhat;
    v[0] += sgn;
    double v2 = 0.0;
    for (double c : v)
        v2 += c * c;
    Vec U(d * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            double h = (i == j ? 1.0 : 0.0) - 2.0 * v[i] * v[j] / v2;
            U[(size_t)i * d + j] = -sgn * h;
        }
    return make_frame(x, U);
}

EllipsoidFrame build_frame(const BallPoint& x) {
    const int d = x.dim();
    if (x.norm < 1e-14)
        return make_frame(x, identity(d));
    if (d == 2) {
        const double c = x.coords[0] / x.norm, s = x.coords[1] / x.norm;
        return make_frame(x, {c, -s, s, c});
    }
    if (d == 4) {
        const double r = x.norm;
        const double a = x.coords[0] / r, b = x.coords[1] / r, c = x.coords[2] / r, e = x.coords[3] / r;
        return make_frame(x, {a, b, c, e,
                              b, -a, -e, c,
                              c, e, -a, -b,
                              e, -c, b, -a});
    }
    return build_frame_householder(x);
}

double quadratic_form(const BallPoint& x, std::span<const double> u) {
    double u2 = 0.0, xu = 0.0;
    for (int i = 0; i < x.dim(); ++i) {
        u2 += u[i] * u[i];
        xu += x.coords[i] * u[i];
    }
    return (1.0 - x.norm * x.norm) * u2 + xu * xu;
}

double quadratic_form_frame(const EllipsoidFrame& f, std::span<const double> u) {
    // u A u^T = v Lambda v^T with v = u U, Lambda = diag(1, 1-|x|^2, ...)
    const int d = f.d;
    const double lam = 1.0 - f.base.norm * f.base.norm;
    double q = 0.0;
    for (int j = 0; j < d; ++j) {
        double vj = 0.0;
        for (int i = 0; i < d; ++i)
            vj += u[i] * f.U[(size_t)i * d + j];
        q += (j == 0 ? 1.0 : lam) * vj * vj;
    }
    return q;
}

Vec psi_map(std::span<const double> x) {
    Vec y(x.size());
    for (size_t i = 0; i < x.size(); ++i)
        y[i] = x[i] * x[i];
    return y;
}

BallPoint lift_sqrt(std::span<const double> y, std::span<const int> signs) {
    Vec x(y.size());
    for (size_t i = 0; i < y.size(); ++i) {
        if (y[i] < -1e-15)
            throw parameter_error("lift_sqrt: negative simplex coordinate");
        x[i] = signs[i] * std::sqrt(std::max(0.0, y[i]));
    }
    return BallPoint(std::move(x));
}

BallPoint lift_sqrt(std::span<const double> y) {
    std::vector<int> signs(y.size(), 1);
    return lift_sqrt(y, signs);
}

} // namespace transops
