#pragma once

#include <functional>
#include <vector>

#include "transops/errors.hpp"

namespace transops {

/// Gegenbauer index lambda > 0 for the weight (1-t^2)^(lambda-1/2) on [-1,1].
/// The Chebyshev limit lambda = 0 is rejected; every weight used here has
/// lambda > 0 and the limit would need a separate evaluation path.
struct GegenbauerParam {
    double lambda;

    explicit GegenbauerParam(double lam) : lambda(lam) {
        if (!(lambda > 0.0))
            throw parameter_error("GegenbauerParam: lambda must be > 0");
    }
};

/// Jacobi exponents for the weight (1-t)^alpha (1+t)^beta on [-1,1].
struct JacobiParam {
    double alpha;
    double beta;

    JacobiParam(double a, double b) : alpha(a), beta(b) {
        if (!(alpha > -1.0) || !(beta > -1.0))
            throw parameter_error("JacobiParam: alpha and beta must be > -1");
    }
};

/// C_n^lambda(t) by forward three-term recurrence. t is clamped to [-1,1]
/// when within 1e-12 of the endpoints.
double gegenbauer_eval(int n, const GegenbauerParam& lam, double t);

/// All values C_0^lambda(t) .. C_n^lambda(t) in one recurrence pass.
void gegenbauer_eval_all(int n, double lambda, double t, double* out);

/// C_n^lambda(1) via the Gamma-ratio closed form binom(n+2*lambda-1, n),
/// computed in log space.
double gegenbauer_at_one(int n, const GegenbauerParam& lam);

/// P_n^(alpha,beta)(t) by three-term recurrence; `orthonormal` requests the
/// polynomial normalized in the probability measure c_{alpha,beta} w_{alpha,beta} dt.
double jacobi_eval(int n, const JacobiParam& p, double t, bool orthonormal = false);

/// All values P_0..P_n at t (unnormalized) in one pass.
void jacobi_eval_all(int n, const JacobiParam& p, double t, double* out);

/// L2(w_{alpha,beta}) norm squared of the unnormalized P_n^(alpha,beta).
double jacobi_norm_squared(int n, const JacobiParam& p);

// Normalization constants, all as the constant itself (reciprocal of the
// defining integral), computed via log-Gamma.

/// b_lambda with 1/b_lambda = integral of (1-t^2)^(lambda-1/2) over [-1,1]; lambda > -1/2.
double const_b_lambda(double lambda);

/// c_r with 1/c_r = integral of (1-t^2)^(r-1) over [-1,1]; r > 0.
double const_c_r(double r);

/// A_mu(d) with 1/A_mu = integral of (1-|x|^2)^(mu-1) over B^d; mu > 0.
double const_A_mu(int d, double mu);

/// a_{kappa,mu}(d): normalization of prod |x_i|^(2 kappa_i) (1-|x|^2)^(mu-1/2) on B^d.
double const_a_kappa_mu(int d, const std::vector<double>& kappa, double mu);

/// c_{alpha,beta} with 1/c = integral of (1-t)^alpha (1+t)^beta over [-1,1].
double const_c_alpha_beta(double alpha, double beta);

/// log Beta(a, b)
double log_beta(double a, double b);

/// Coefficients g_hat_0..g_hat_N of the Gegenbauer expansion
///   g ~ sum_n g_hat_n ((n+lambda)/lambda) C_n^lambda,
///   g_hat_n = b_lambda int g(s) C_n^lambda(s)/C_n^lambda(1) w_lambda(s) ds,
/// by Gauss-Gegenbauer quadrature of the given order (default N+8; must be >= N+1).
std::vector<double> gegenbauer_coeffs(const std::function<double(double)>& g,
                                      const GegenbauerParam& lam, int N, int order = -1);

/// Jacobi analog against c_{alpha,beta} w_{alpha,beta}:
///   g_hat_n = c int g(s) p_n(s)/p_n(1) w(s) ds, p_n orthonormal.
std::vector<double> jacobi_coeffs(const std::function<double(double)>& g,
                                  const JacobiParam& p, int N, int order = -1);

} // namespace transops
