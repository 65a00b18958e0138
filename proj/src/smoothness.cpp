#include "transops/smoothness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace transops {

namespace {

// p = 2 smoothness norm from projection norms alone
double smoothness_norm_l2(const WeightedSpectrum& f, double r, double theta) {
    const int N = f.truncation();
    MultiplierSpec m = smoothness_multipliers(f.weight, N, r, theta);
    double s = 0.0;
    for (int n = 0; n <= N; ++n)
        s += m.values[n] * m.values[n] * f.norms[n] * f.norms[n];
    return std::sqrt(s);
}

template <class NormFn>
double sup_over_theta(double t, int theta_grid, NormFn&& norm_at) {
    double value = 0.0, best_theta = t;
    int grid = theta_grid;
    for (int pass = 0; pass < 8; ++pass) {
        double v = 0.0, vtheta = t;
        for (int k = 1; k <= grid; ++k) {
            double theta = t * k / grid;
            double s = norm_at(theta);
            if (s > v) {
                v = s;
                vtheta = theta;
            }
        }
        bool converged = pass > 0 && std::abs(v - value) < 1e-6;
        value = v;
        best_theta = vtheta;
        if (converged)
            break;
        grid *= 2;
    }
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double h = 2.0 * t / grid;
    double a = std::max(t / grid * 0.5, best_theta - h);
    double b = std::min(t, best_theta + h);
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = norm_at(x1);
    double f2 = norm_at(x2);
    for (int it = 0; it < 48; ++it) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = norm_at(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = norm_at(x1);
        }
    }
    return std::max(value, std::max(f1, f2));
}

// precomputed component values at the sup-norm sample points: pts x (N+1)
std::vector<std::vector<double>> component_table(const SpectralDecomposition& f) {
    auto pts = sup_norm_samples(f.weight(), f.rule());
    const int N = f.truncation();
    std::vector<std::vector<double>> table(pts.size(), std::vector<double>(N + 1));
    for (size_t i = 0; i < pts.size(); ++i) {
        std::vector<double> psi = f.basis->eval(pts[i]);
        for (int n = 0; n <= N; ++n) {
            double s = 0.0;
            for (int k = f.basis->block_begin(n); k < f.basis->block_end(n); ++k)
                s += f.coeffs[k] * psi[k];
            table[i][n] = s;
        }
    }
    return table;
}

// || sum_n (1 - m_n(theta))^(r/2) proj_n f ||_p for one theta
double smoothness_norm(const SpectralDecomposition& f, double r, double theta, NormKind p,
                       const std::vector<std::vector<double>>& comp) {
    const int N = f.truncation();
    MultiplierSpec m = smoothness_multipliers(f.weight(), N, r, theta);
    if (p == NormKind::l2) {
        double s = 0.0;
        for (int n = 0; n <= N; ++n)
            s += m.values[n] * m.values[n] * f.norms[n] * f.norms[n];
        return std::sqrt(s);
    }
    double mx = 0.0;
    for (const auto& row : comp) {
        double s = 0.0;
        for (int n = 0; n <= N; ++n)
            s += m.values[n] * row[n];
        mx = std::max(mx, std::abs(s));
    }
    return mx;
}

} // namespace

double modulus_smoothness(const WeightedSpectrum& f, double r, double t, int theta_grid) {
    if (!(r > 0.0))
        throw parameter_error("modulus_smoothness: r must be > 0");
    if (!(t > 0.0) || t > std::numbers::pi_v<double>)
        throw parameter_error("modulus_smoothness: t must be in (0, pi]");
    if (theta_grid < 2)
        theta_grid = 2;
    return sup_over_theta(t, theta_grid,
                          [&](double theta) { return smoothness_norm_l2(f, r, theta); });
}

double modulus_smoothness(const SpectralDecomposition& f, double r, double t, NormKind p,
                          int theta_grid) {
    if (p == NormKind::l2)
        return modulus_smoothness(spectrum_of(f), r, t, theta_grid);
    if (!(r > 0.0))
        throw parameter_error("modulus_smoothness: r must be > 0");
    if (!(t > 0.0) || t > std::numbers::pi_v<double>)
        throw parameter_error("modulus_smoothness: t must be in (0, pi]");
    if (theta_grid < 2)
        theta_grid = 2;
    std::vector<std::vector<double>> comp = component_table(f);
    return sup_over_theta(t, theta_grid,
                          [&](double theta) { return smoothness_norm(f, r, theta, p, comp); });
}

KFunctionalResult k_functional(const SpectralDecomposition& f, double r, double t,
                               int sigma_grid) {
    return k_functional(spectrum_of(f), r, t, sigma_grid);
}

KFunctionalResult k_functional(const WeightedSpectrum& f, double r, double t, int sigma_grid) {
    if (!(r > 0.0))
        throw parameter_error("k_functional: r must be > 0");
    if (t < 0.0)
        throw parameter_error("k_functional: t must be >= 0");
    const int N = f.truncation();
    const Weight& w = f.weight;
    MultiplierSpec frac = fractional_D_multipliers(w, N, r);

    // candidate g: multiplier phi_n applied to f.
    auto cost = [&](const std::vector<double>& phi) {
        double dist2 = f.tail_norm2();
        double reg2 = 0.0;
        for (int n = 0; n <= N; ++n) {
            const double nn = f.norms[n] * f.norms[n];
            dist2 += (1.0 - phi[n]) * (1.0 - phi[n]) * nn;
            reg2 += frac.values[n] * frac.values[n] * phi[n] * phi[n] * nn;
        }
        return std::sqrt(dist2) + std::pow(t, r) * std::sqrt(reg2);
    };

    KFunctionalResult best;
    best.value = cost(std::vector<double>(N + 1, 1.0)); // g = f (polynomial part)
    best.sigma = std::numeric_limits<double>::infinity();
    {
        double zero = cost(std::vector<double>(N + 1, 0.0)); // g = 0
        if (zero < best.value) {
            best.value = zero;
            best.sigma = 0.0;
        }
    }
    const double nu_max = std::sqrt(weight_eigenvalue(w, std::max(1, N)));
    for (int i = 0; i < sigma_grid; ++i) {
        const double sigma = nu_max * std::pow(2.0, -0.5 * i);
        MultiplierSpec vp = vallee_poussin_multipliers(w, N, sigma);
        const double c = cost(vp.values);
        if (c < best.value) {
            best.value = c;
            best.sigma = sigma;
        }
    }
    return best;
}

double BestApproxResult::total() const { return std::sqrt(value * value + tail_bound * tail_bound); }

BestApproxResult best_approx_error(const SpectralDecomposition& f, int n) {
    return best_approx_error(spectrum_of(f), n);
}

BestApproxResult best_approx_error(const WeightedSpectrum& f, int n) {
    if (n < 0)
        throw parameter_error("best_approx_error: n must be >= 0");
    const int N = f.truncation();
    BestApproxResult r;
    double s = 0.0;
    for (int k = n + 1; k <= N; ++k)
        s += f.norms[k] * f.norms[k];
    r.value = std::sqrt(s);
    r.tail_bound = std::sqrt(f.tail_norm2());
    return r;
}

double verify_semigroup_identity(const Polynomial& f, const Weight& w, double theta,
                                 int nested_order) {
    if (!(theta > 0.0) || theta >= std::numbers::pi_v<double>)
        throw parameter_error("verify_semigroup_identity: theta must be in (0, pi)");
    if (nested_order < 2)
        throw parameter_error("verify_semigroup_identity: nested_order must be >= 2");
    const int N = f.degree();
    const double two_lm = 2.0 * weight_lambda_total(w);
    // simplex factor: j_n(theta) = m^B_{2n}(theta) and the ball relation at
    // degree 2n carries -2n(2n+2(lambda+mu)) = 4 times the simplex eigenvalue
    const double factor = is_ball(w) ? 1.0 : 4.0;

    Projector proj(w, N);
    SpectralDecomposition df = proj.project(
        is_ball(w) ? apply_D_ball(f, std::get<BallWeight>(w))
                   : apply_D_simplex(f, std::get<SimplexWeight>(w)));
    SpectralDecomposition ff = proj.project(f);

    // T_t(D f) has per-degree multiplier m_n(t); both nested integrals reduce
    // to 1D Gauss-Legendre in (s, t) applied to the multiplier profile.
    QuadratureRule gl = gauss_jacobi_rule(nested_order, JacobiParam(0.0, 0.0));

    // coefficient per degree: integral_0^theta (sin s)^(-2L) ds
    //   integral_0^s m_n(t) (sin t)^(2L) dt
    std::vector<double> coef(N + 1, 0.0);
    for (int a = 0; a < gl.size(); ++a) {
        const double s = 0.5 * theta * (gl.nodes[a] + 1.0);
        const double ws = 0.5 * theta * gl.weights[a];
        const double sins = std::pow(std::sin(s), -two_lm);
        for (int b = 0; b < gl.size(); ++b) {
            const double tt = 0.5 * s * (gl.nodes[b] + 1.0);
            const double wt = 0.5 * s * gl.weights[b];
            const double sint = std::pow(std::sin(tt), two_lm);
            for (int n = 0; n <= N; ++n)
                coef[n] += ws * wt * sins * sint * translation_multiplier(w, n, tt);
        }
    }

    // sample points: a few interior nodes of the stored rule
    const QuadratureRule& rule = proj.basis().rule();
    std::vector<int> sample;
    for (int i = 0; i < rule.size() && (int)sample.size() < 8; i += std::max(1, rule.size() / 8))
        sample.push_back(i);

    std::vector<double> mtheta(N + 1);
    for (int n = 0; n <= N; ++n)
        mtheta[n] = translation_multiplier(w, n, theta) - 1.0;

    double resid = 0.0;
    const int npts = rule.size();
    for (int idx : sample) {
        double lhs = 0.0, rhs = 0.0;
        for (int n = 0; n <= N; ++n) {
            lhs += mtheta[n] * ff.node_values[(size_t)n * npts + idx];
            rhs += factor * coef[n] * df.node_values[(size_t)n * npts + idx];
        }
        resid = std::max(resid, std::abs(lhs - rhs));
    }
    return resid;
}

} // namespace transops
