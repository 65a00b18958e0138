#pragma once

#include <span>
#include <vector>

#include "transops/errors.hpp"

namespace transops {

using Vec = std::vector<double>;

/// Point in the closed unit ball B^d with cached norm. Coordinates with
/// |x| <= 1 + 1e-12 are accepted and the norm clamped to 1.
struct BallPoint {
    Vec coords;
    double norm = 0.0;

    BallPoint() = default;
    explicit BallPoint(Vec c);

    int dim() const { return (int)coords.size(); }
    double operator[](int i) const { return coords[i]; }
};

/// Orthogonal frame adapted to x: U has first column x/|x| (U = I at x = 0)
/// and D = diag(sqrt(1-|x|^2), 1, ..., 1). The ellipsoid matrix
/// A(x) = (1-|x|^2) I + x^T x factors as U diag(1, 1-|x|^2, ...) U^T; only
/// the first column of U is determined, the completion is free.
struct EllipsoidFrame {
    int d = 0;
    Vec U;      // d x d, row-major
    Vec D;      // d diagonal entries
    BallPoint base;

    /// y = cos(theta) x + sin(theta) * (U (D s)) for a row vector s in B^d.
    Vec translate_point(double cos_theta, double sin_theta, std::span<const double> s) const;
};

/// Frame via the printed d=2 rotation / d=4 quaternion matrix, Householder
/// reflection otherwise. Total on the closed ball.
EllipsoidFrame build_frame(const BallPoint& x);

/// Householder-only variant (any d), used for frame-invariance checks.
EllipsoidFrame build_frame_householder(const BallPoint& x);

/// u A(x) u^T with A(x) = (1-|x|^2) I + x^T x, evaluated directly.
double quadratic_form(const BallPoint& x, std::span<const double> u);

/// Same value through the frame factorization, as a cross-check path.
double quadratic_form_frame(const EllipsoidFrame& f, std::span<const double> u);

/// psi(x) = (x_1^2, ..., x_d^2), mapping B^d onto the simplex T^d.
Vec psi_map(std::span<const double> x);

/// (eps_1 sqrt(y_1), ..., eps_d sqrt(y_d)); psi o lift = identity.
BallPoint lift_sqrt(std::span<const double> y, std::span<const int> signs);
BallPoint lift_sqrt(std::span<const double> y);

} // namespace transops
