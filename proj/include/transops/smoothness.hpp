#pragma once

#include "transops/spectral.hpp"

namespace transops {

enum class NormKind { l2, sup };

/// omega_r(f; t)_p = sup over a theta-grid on (0, t] of ||(I - T_theta)^(r/2) f||_p.
/// p = 2 uses Parseval over the resolved degrees (the truncation tail is the
/// caller's responsibility via N); p = inf maximizes over the rule nodes and
/// 200 quasi-random points. The grid is refined by doubling until the value
/// changes by < 1e-6 or the cap of 8 refinements is reached, then polished
/// by a golden-section pass around the best angle.
double modulus_smoothness(const SpectralDecomposition& f, double r, double t, NormKind p,
                          int theta_grid = 16);
double modulus_smoothness(const WeightedSpectrum& f, double r, double t, int theta_grid = 16);

struct KFunctionalResult {
    double value;      // min over the cutoff family (an upper estimate)
    double sigma;      // minimizing cutoff scale
};

/// Upper estimate of K_r(f; t)_2 over the smooth-cutoff candidates
/// g_sigma = sum phi(nu_n / sigma) proj_n f, phi = 1 on [0,1], 0 beyond 2,
/// cosine-smooth between, plus the candidates g = f and g = 0.
KFunctionalResult k_functional(const SpectralDecomposition& f, double r, double t,
                               int sigma_grid = 24);
KFunctionalResult k_functional(const WeightedSpectrum& f, double r, double t,
                               int sigma_grid = 24);

struct BestApproxResult {
    double value;      // sqrt(sum_{k=n+1}^N ||proj_k||^2)
    double tail_bound; // sqrt(max(0, ||f||^2 - sum_{k<=N} ||proj_k||^2))
    double total() const; // sqrt(value^2 + tail_bound^2), the Parseval E_n
};

/// E_n(f)_2 from the decomposition norms; exact for polynomials of degree <= N.
BestApproxResult best_approx_error(const SpectralDecomposition& f, int n);
BestApproxResult best_approx_error(const WeightedSpectrum& f, int n);

/// Max over a small x-sample of |T_theta f - f - (the iterated integral of
/// T_t(D f) against (sin t)^(2 lambda + 2 mu), factor 2 on the simplex)|,
/// with nested Gauss-Legendre quadrature of the given order.
double verify_semigroup_identity(const Polynomial& f, const Weight& w, double theta,
                                 int nested_order);

} // namespace transops
