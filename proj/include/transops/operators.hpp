#pragma once

#include "transops/geometry.hpp"
#include "transops/spectral.hpp"

namespace transops {

/// Generalized translation for the Gegenbauer weight w_lambda on [-1,1]:
/// T_s f(t) = b_{lambda-1/2} int f(st + u sqrt(1-s^2) sqrt(1-t^2)) (1-u^2)^(lambda-1) du,
/// by Gauss-Jacobi quadrature in u.
FunctionHandle translate_1d(double s, const FunctionHandle& f, const GegenbauerParam& lam,
                            int order);

/// Z_2^d intertwining operator
/// V_kappa f(x) = c_kappa int_{[-1,1]^d} f(x_1 t_1, ..., x_d t_d)
///                prod (1+t_i)(1-t_i^2)^(kappa_i - 1) dt;
/// kappa_i below 1e-12 uses the point-mass limit of the factor.
double intertwine_z2d(const FunctionHandle& f, const std::vector<double>& kappa,
                      std::span<const double> x, int order);

/// Explicit integral translation for W_mu^B (kappa = 0, mu > 0):
/// T_theta f(x) = A_mu int_{B^d} f(cos theta x + sin theta s D(x) U(x)^T)
///                (1-|s|^2)^(mu-1) ds,
/// with the frame from build_frame and `rule` a ball rule absorbing
/// (1-|s|^2)^(mu-1). Nonzero kappa and mu = 0 are capability errors
/// (spectral path covers both).
double translate_ball_integral(double theta, const FunctionHandle& f, const BallWeight& w,
                               const BallPoint& x, const QuadratureRule& rule);
double translate_ball_integral(double theta, const FunctionHandle& f, const BallWeight& w,
                               const BallPoint& x, int radial_order = 24, int angular_level = 24);
/// Same integral through a caller-supplied frame (frame-invariance checks).
double translate_ball_integral_frame(double theta, const FunctionHandle& f, const BallWeight& w,
                                     const EllipsoidFrame& frame, const QuadratureRule& rule);

/// Ball rule absorbing (1-|s|^2)^(mu-1) for the integral translation.
QuadratureRule translation_rule(const BallWeight& w, int radial_order, int angular_level);

/// Multiplier path: scales proj_n by C_n^(lambda+mu)(cos theta)/C_n(1) (ball)
/// or P_n^(lambda+mu-1/2,-1/2)(cos 2 theta)/P_n(1) (simplex). The only
/// translation path for nonzero kappa.
SpectralDecomposition translate_spectral(double theta, const SpectralDecomposition& f);

/// f *B g with proj_n(f * g) = g_hat_n^(lambda+mu) proj_n f.
SpectralDecomposition convolve_ball(const FunctionHandle& f, const FunctionHandle& g,
                                    const BallWeight& w, int N);
SpectralDecomposition convolve_ball(const SpectralDecomposition& f,
                                    const FunctionHandle& g);

/// Direct-integral convolution through V^B (the (d+1)-dimensional
/// intertwining integral per point); retained as a cross-check oracle.
double convolve_ball_direct(const FunctionHandle& f, const FunctionHandle& g, const BallWeight& w,
                            std::span<const double> x, const QuadratureRule& rule, int order);

/// Lift path on the simplex: (T_theta(W^T) f) o psi = T_theta(W^B) (f o psi);
/// evaluates the ball integral at sqrt(y). Requires the lifted weight to have
/// kappa = 0.
FunctionHandle translate_simplex_lift(double theta, const FunctionHandle& f,
                                      const SimplexWeight& w, int radial_order = 24,
                                      int angular_level = 24);

/// f *T g with proj_n(f * g) = g_hat_n proj_n f, g_hat from the Jacobi
/// expansion against w_(lambda+mu-1/2, -1/2).
SpectralDecomposition convolve_simplex(const FunctionHandle& f, const FunctionHandle& g,
                                       const SimplexWeight& w, int N);
SpectralDecomposition convolve_simplex(const SpectralDecomposition& f,
                                       const FunctionHandle& g);

} // namespace transops
