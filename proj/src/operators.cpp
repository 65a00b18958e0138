#include "transops/operators.hpp"

#include <cmath>

#include "transops/parallel.hpp"

namespace transops {

namespace {
constexpr double kTiny = 1e-12;

// unit-mass 1D rule for c_r (1-t^2)^(r-1) dt, optionally with the (1+t)
// factor of the intertwining kernel; r ~ 0 degenerates to point masses.
struct Rule1D {
    std::vector<double> nodes, weights;
};

Rule1D moment_rule(double r, int order, bool with_linear_factor) {
    Rule1D out;
    if (r < kTiny) {
        if (with_linear_factor) {
            out.nodes = {1.0};
            out.weights = {1.0};
        } else {
            out.nodes = {1.0, -1.0};
            out.weights = {0.5, 0.5};
        }
        return out;
    }
    QuadratureRule gj = with_linear_factor ? gauss_jacobi_rule(order, JacobiParam(r - 1.0, r))
                                           : gauss_jacobi_rule(order, JacobiParam(r - 1.0, r - 1.0));
    const double c = const_c_r(r);
    out.nodes = gj.nodes;
    out.weights.resize(gj.size());
    for (int i = 0; i < gj.size(); ++i)
        out.weights[i] = c * gj.weights[i];
    return out;
}

} // namespace

FunctionHandle translate_1d(double s, const FunctionHandle& f, const GegenbauerParam& lam,
                            int order) {
    if (order < 1)
        throw parameter_error("translate_1d: order must be >= 1");
    if (std::abs(s) > 1.0 + kTiny)
        throw parameter_error("translate_1d: s must be in [-1,1]");
    s = std::clamp(s, -1.0, 1.0);
    Rule1D rule = moment_rule(lam.lambda, order, false);
    auto fv = f;
    const double sc = std::sqrt(std::max(0.0, 1.0 - s * s));
    return FunctionHandle(FnDomain::interval, 1,
                          [s, sc, rule, fv](std::span<const double> targ) {
                              const double t = targ[0];
                              const double tc = std::sqrt(std::max(0.0, 1.0 - t * t));
                              double acc = 0.0;
                              for (size_t i = 0; i < rule.nodes.size(); ++i)
                                  acc += rule.weights[i] * fv(s * t + rule.nodes[i] * sc * tc);
                              return acc;
                          },
                          "translate_1d");
}

double intertwine_z2d(const FunctionHandle& f, const std::vector<double>& kappa,
                      std::span<const double> x, int order) {
    const int d = (int)x.size();
    if ((int)kappa.size() != d)
        throw parameter_error("intertwine_z2d: kappa size mismatch");
    std::vector<Rule1D> rules;
    for (double k : kappa) {
        if (!(k >= 0.0))
            throw parameter_error("intertwine_z2d: kappa_i must be >= 0");
        rules.push_back(moment_rule(k, order, true));
    }
    std::vector<int> idx(d, 0);
    std::vector<double> pt(d);
    double acc = 0.0;
    for (;;) {
        double w = 1.0;
        for (int i = 0; i < d; ++i) {
            pt[i] = x[i] * rules[i].nodes[idx[i]];
            w *= rules[i].weights[idx[i]];
        }
        acc += w * f.eval(pt);
        int i = 0;
        for (; i < d; ++i) {
            if (++idx[i] < (int)rules[i].nodes.size())
                break;
            idx[i] = 0;
        }
        if (i == d)
            break;
    }
    return acc;
}

QuadratureRule translation_rule(const BallWeight& w, int radial_order, int angular_level) {
    if (!w.kappa_zero())
        throw capability_error("integral translation: no integral formula for nonzero kappa; "
                               "use the spectral path");
    if (!(w.mu > 0.0))
        throw capability_error("integral translation: mu = 0 needs the spectral path");
    return ball_rule(w.d, w.mu - 1.0, {}, radial_order, angular_level);
}

double translate_ball_integral_frame(double theta, const FunctionHandle& f, const BallWeight& w,
                                     const EllipsoidFrame& frame, const QuadratureRule& rule) {
    if (!w.kappa_zero())
        throw capability_error("integral translation: no integral formula for nonzero kappa");
    if (!(w.mu > 0.0))
        throw capability_error("integral translation: mu = 0 needs the spectral path");
    if (rule.domain != Domain::ball || rule.dim != w.d)
        throw parameter_error("integral translation: rule must be a ball rule of matching dim");
    const double amu = const_A_mu(w.d, w.mu);
    const double ct = std::cos(theta), st = std::sin(theta);
    double acc = parallel_sum(rule.size(), [&](int64_t i) {
        Vec y = frame.translate_point(ct, st, rule.node((int)i));
        return rule.weights[i] * f.eval(y);
    });
    return amu * acc;
}

double translate_ball_integral(double theta, const FunctionHandle& f, const BallWeight& w,
                               const BallPoint& x, const QuadratureRule& rule) {
    return translate_ball_integral_frame(theta, f, w, build_frame(x), rule);
}

double translate_ball_integral(double theta, const FunctionHandle& f, const BallWeight& w,
                               const BallPoint& x, int radial_order, int angular_level) {
    QuadratureRule rule = translation_rule(w, radial_order, angular_level);
    return translate_ball_integral(theta, f, w, x, rule);
}

SpectralDecomposition translate_spectral(double theta, const SpectralDecomposition& f) {
    return apply_multiplier(f, translation_multipliers(f.weight(), f.truncation(), theta));
}

SpectralDecomposition convolve_ball(const SpectralDecomposition& f, const FunctionHandle& g) {
    const BallWeight& w = std::get<BallWeight>(f.weight());
    const int N = f.truncation();
    std::vector<double> ghat =
        gegenbauer_coeffs([&g](double t) { return g(t); }, GegenbauerParam(w.lambda_total), N);
    MultiplierSpec m{MultiplierSpec::Family::custom, std::move(ghat)};
    return apply_multiplier(f, m);
}

SpectralDecomposition convolve_ball(const FunctionHandle& f, const FunctionHandle& g,
                                    const BallWeight& w, int N) {
    return convolve_ball(project(f, Weight(w), N), g);
}

double convolve_ball_direct(const FunctionHandle& f, const FunctionHandle& g, const BallWeight& w,
                            std::span<const double> x, const QuadratureRule& rule, int order) {
    const int d = w.d;
    std::vector<Rule1D> rules;
    for (int i = 0; i < d; ++i)
        rules.push_back(moment_rule(w.kappa[i], order, true));
    rules.push_back(moment_rule(w.mu, order, false));

    double nx2 = 0.0;
    for (int i = 0; i < d; ++i)
        nx2 += x[i] * x[i];
    const double xd1 = std::sqrt(std::max(0.0, 1.0 - nx2));

    // V^B[g(<X, .>)](Y) by the tensor intertwining integral, per rule node y.
    auto vb_at = [&](std::span<const double> y) {
        double ny2 = 0.0;
        for (int i = 0; i < d; ++i)
            ny2 += y[i] * y[i];
        const double yd1 = std::sqrt(std::max(0.0, 1.0 - ny2));
        std::vector<int> idx(d + 1, 0);
        double acc = 0.0;
        for (;;) {
            double wgt = 1.0, arg = 0.0;
            for (int i = 0; i < d; ++i) {
                arg += x[i] * y[i] * rules[i].nodes[idx[i]];
                wgt *= rules[i].weights[idx[i]];
            }
            arg += xd1 * yd1 * rules[d].nodes[idx[d]];
            wgt *= rules[d].weights[idx[d]];
            acc += wgt * g(std::clamp(arg, -1.0, 1.0));
            int i = 0;
            for (; i <= d; ++i) {
                if (++idx[i] < (int)rules[i].nodes.size())
                    break;
                idx[i] = 0;
            }
            if (i == d + 1)
                break;
        }
        return acc;
    };

    double s = parallel_sum(rule.size(), [&](int64_t i) {
        std::span<const double> y = rule.node((int)i);
        return rule.weights[i] * f.eval(y) * vb_at(y);
    });
    return w.a_norm * s;
}

FunctionHandle translate_simplex_lift(double theta, const FunctionHandle& f,
                                      const SimplexWeight& w, int radial_order,
                                      int angular_level) {
    BallWeight bw = w.lifted();
    QuadratureRule rule = translation_rule(bw, radial_order, angular_level);
    FunctionHandle lifted = compose_psi(f);
    return FunctionHandle(FnDomain::simplex, w.d,
                          [theta, lifted, bw, rule](std::span<const double> y) {
                              BallPoint x = lift_sqrt(y);
                              return translate_ball_integral(theta, lifted, bw, x, rule);
                          },
                          "translate_simplex_lift");
}

SpectralDecomposition convolve_simplex(const SpectralDecomposition& f, const FunctionHandle& g) {
    const SimplexWeight& w = std::get<SimplexWeight>(f.weight());
    const int N = f.truncation();
    std::vector<double> ghat = jacobi_coeffs([&g](double t) { return g(t); },
                                             JacobiParam(w.lambda_total - 0.5, -0.5), N);
    MultiplierSpec m{MultiplierSpec::Family::custom, std::move(ghat)};
    return apply_multiplier(f, m);
}

SpectralDecomposition convolve_simplex(const FunctionHandle& f, const FunctionHandle& g,
                                       const SimplexWeight& w, int N) {
    return convolve_simplex(project(f, Weight(w), N), g);
}

} // namespace transops
