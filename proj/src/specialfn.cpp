#include "transops/specialfn.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "transops/quadrature.hpp"

namespace transops {

namespace {

double clamp_unit(double t) {
    if (t > 1.0) {
        if (t > 1.0 + 1e-12)
            throw parameter_error("argument outside [-1,1]");
        return 1.0;
    }
    if (t < -1.0) {
        if (t < -1.0 - 1e-12)
            throw parameter_error("argument outside [-1,1]");
        return -1.0;
    }
    return t;
}

void check_degree(int n) {
    if (n < 0)
        throw parameter_error("degree must be >= 0");
}

} // namespace

double gegenbauer_eval(int n, const GegenbauerParam& lam, double t) {
    check_degree(n);
    t = clamp_unit(t);
    if (n == 0)
        return 1.0;
    const double lambda = lam.lambda;
    double prev = 1.0;
    double cur = 2.0 * lambda * t;
    for (int k = 2; k <= n; ++k) {
        double next = (2.0 * (k + lambda - 1.0) * t * cur - (k + 2.0 * lambda - 2.0) * prev) / k;
        prev = cur;
        cur = next;
    }
    return cur;
}

void gegenbauer_eval_all(int n, double lambda, double t, double* out) {
    out[0] = 1.0;
    if (n == 0)
        return;
    out[1] = 2.0 * lambda * t;
    for (int k = 2; k <= n; ++k)
        out[k] = (2.0 * (k + lambda - 1.0) * t * out[k - 1] - (k + 2.0 * lambda - 2.0) * out[k - 2]) / k;
}

double gegenbauer_at_one(int n, const GegenbauerParam& lam) {
    check_degree(n);
    if (n == 0)
        return 1.0;
    // C_n^lambda(1) = Gamma(n + 2 lambda) / (Gamma(2 lambda) n!)
    const double two_lambda = 2.0 * lam.lambda;
    double lg = std::lgamma(n + two_lambda) - std::lgamma(two_lambda) - std::lgamma(n + 1.0);
    double v = std::exp(lg);
    if (!std::isfinite(v))
        throw internal_error("gegenbauer_at_one: overflow");
    return v;
}

double jacobi_eval(int n, const JacobiParam& p, double t, bool orthonormal) {
    check_degree(n);
    t = clamp_unit(t);
    double v;
    if (n == 0) {
        v = 1.0;
    } else {
        const double a = p.alpha, b = p.beta;
        double prev = 1.0;
        double cur = 0.5 * (a + b + 2.0) * t + 0.5 * (a - b);
        for (int k = 2; k <= n; ++k) {
            const double k2ab = 2.0 * k + a + b;
            const double c1 = 2.0 * k * (k + a + b) * (k2ab - 2.0);
            const double c2 = (k2ab - 1.0) * (k2ab * (k2ab - 2.0) * t + a * a - b * b);
            const double c3 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * k2ab;
            double next = (c2 * cur - c3 * prev) / c1;
            prev = cur;
            cur = next;
        }
        v = cur;
    }
    if (orthonormal)
        v /= std::sqrt(const_c_alpha_beta(p.alpha, p.beta) * jacobi_norm_squared(n, p));
    return v;
}

void jacobi_eval_all(int n, const JacobiParam& p, double t, double* out) {
    out[0] = 1.0;
    if (n == 0)
        return;
    const double a = p.alpha, b = p.beta;
    out[1] = 0.5 * (a + b + 2.0) * t + 0.5 * (a - b);
    for (int k = 2; k <= n; ++k) {
        const double k2ab = 2.0 * k + a + b;
        const double c1 = 2.0 * k * (k + a + b) * (k2ab - 2.0);
        const double c2 = (k2ab - 1.0) * (k2ab * (k2ab - 2.0) * t + a * a - b * b);
        const double c3 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * k2ab;
        out[k] = (c2 * out[k - 1] - c3 * out[k - 2]) / c1;
    }
}

double jacobi_norm_squared(int n, const JacobiParam& p) {
    check_degree(n);
    const double a = p.alpha, b = p.beta;
    // int_{-1}^1 P_n^2 w_{a,b} dt = 2^(a+b+1)/(2n+a+b+1) *
    //   Gamma(n+a+1) Gamma(n+b+1) / (Gamma(n+a+b+1) n!)
    double lg = (a + b + 1.0) * std::numbers::ln2_v<double>;
    lg += std::lgamma(n + a + 1.0) + std::lgamma(n + b + 1.0);
    lg -= std::lgamma(n + a + b + 1.0) + std::lgamma(n + 1.0);
    return std::exp(lg) / (2.0 * n + a + b + 1.0);
}

double log_beta(double a, double b) {
    return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

double const_b_lambda(double lambda) {
    if (!(lambda > -0.5))
        throw parameter_error("b_lambda requires lambda > -1/2");
    // 1/b = int (1-t^2)^(lambda-1/2) dt = B(1/2, lambda+1/2)
    return std::exp(-log_beta(0.5, lambda + 0.5));
}

double const_c_r(double r) {
    if (!(r > 0.0))
        throw parameter_error("c_r requires r > 0");
    return std::exp(-log_beta(0.5, r));
}

double const_A_mu(int d, double mu) {
    if (d < 1)
        throw parameter_error("A_mu requires d >= 1");
    if (!(mu > 0.0))
        throw parameter_error("A_mu requires mu > 0");
    // 1/A = pi^(d/2) Gamma(mu) / Gamma(mu + d/2)
    double lg = 0.5 * d * std::log(std::numbers::pi_v<double>) + std::lgamma(mu) - std::lgamma(mu + 0.5 * d);
    return std::exp(-lg);
}

double const_a_kappa_mu(int d, const std::vector<double>& kappa, double mu) {
    if (d < 1 || (int)kappa.size() != d)
        throw parameter_error("a_kappa_mu: kappa size must equal d");
    if (!(mu >= 0.0))
        throw parameter_error("a_kappa_mu requires mu >= 0");
    double abs_kappa = 0.0;
    double lg = 0.0;
    for (double k : kappa) {
        if (!(k >= 0.0))
            throw parameter_error("a_kappa_mu requires kappa_i >= 0");
        abs_kappa += k;
        lg += std::lgamma(k + 0.5);
    }
    lg += std::lgamma(mu + 0.5);
    lg -= std::lgamma(abs_kappa + mu + 0.5 * (d + 1.0));
    return std::exp(-lg);
}

double const_c_alpha_beta(double alpha, double beta) {
    if (!(alpha > -1.0) || !(beta > -1.0))
        throw parameter_error("c_alpha_beta requires alpha, beta > -1");
    double lg = (alpha + beta + 1.0) * std::numbers::ln2_v<double> + log_beta(alpha + 1.0, beta + 1.0);
    return std::exp(-lg);
}

std::vector<double> gegenbauer_coeffs(const std::function<double(double)>& g,
                                      const GegenbauerParam& lam, int N, int order) {
    check_degree(N);
    if (order < 0)
        order = N + 8;
    if (order < N + 1)
        throw config_error("gegenbauer_coeffs: quadrature order must be >= N+1");
    const double lambda = lam.lambda;
    QuadratureRule rule = gauss_jacobi_rule(order, JacobiParam(lambda - 0.5, lambda - 0.5));
    const double b = const_b_lambda(lambda);
    std::vector<double> sums(N + 1, 0.0);
    std::vector<double> cn(N + 1);
    for (int i = 0; i < rule.size(); ++i) {
        const double t = rule.nodes[i];
        const double gv = g(t) * rule.weights[i];
        gegenbauer_eval_all(N, lambda, t, cn.data());
        for (int n = 0; n <= N; ++n)
            sums[n] += gv * cn[n];
    }
    for (int n = 0; n <= N; ++n)
        sums[n] *= b / gegenbauer_at_one(n, lam);
    return sums;
}

std::vector<double> jacobi_coeffs(const std::function<double(double)>& g,
                                  const JacobiParam& p, int N, int order) {
    check_degree(N);
    if (order < 0)
        order = N + 8;
    if (order < N + 1)
        throw config_error("jacobi_coeffs: quadrature order must be >= N+1");
    QuadratureRule rule = gauss_jacobi_rule(order, p);
    const double c = const_c_alpha_beta(p.alpha, p.beta);
    std::vector<double> sums(N + 1, 0.0);
    std::vector<double> pn(N + 1);
    for (int i = 0; i < rule.size(); ++i) {
        const double t = rule.nodes[i];
        const double gv = g(t) * rule.weights[i];
        jacobi_eval_all(N, p, t, pn.data());
        for (int n = 0; n <= N; ++n)
            sums[n] += gv * pn[n];
    }
    // p_n/p_n(1) = P_n/P_n(1), so the orthonormal normalization cancels.
    for (int n = 0; n <= N; ++n)
        sums[n] *= c / jacobi_eval(n, p, 1.0);
    return sums;
}

} // namespace transops
