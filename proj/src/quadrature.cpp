#include "transops/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>
#include <sstream>

#include <json.hpp>

namespace transops {

namespace {

constexpr double kPi = std::numbers::pi_v<double>;

bool all_zero(const std::vector<double>& kappa) {
    for (double k : kappa)
        if (k != 0.0)
            return false;
    return true;
}

double sum(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v)
        s += x;
    return s;
}

// int_{S^{d-1}} prod |xi_i|^(2 a_i) domega = 2 prod Gamma(a_i+1/2) / Gamma(|a|+d/2)
double sphere_moment(int d, const std::vector<double>& a) {
    double lg = std::log(2.0);
    double total = 0.0;
    for (int i = 0; i < d; ++i) {
        double ai = i < (int)a.size() ? a[i] : 0.0;
        lg += std::lgamma(ai + 0.5);
        total += ai;
    }
    lg -= std::lgamma(total + 0.5 * d);
    return std::exp(lg);
}

// int_0^1 r^p (1-r^2)^a dr = B((p+1)/2, a+1) / 2
double radial_moment(double p, double a) {
    return 0.5 * std::exp(log_beta(0.5 * (p + 1.0), a + 1.0));
}

void validate_rule(const QuadratureRule& rule, double expected_mass, double expected_x1sq) {
    for (double w : rule.weights)
        if (!(w > 0.0))
            throw internal_error("quadrature: nonpositive weight");
    double mass = 0.0;
    for (double w : rule.weights)
        mass += w;
    if (std::abs(mass - expected_mass) > 1e-12 * std::abs(expected_mass))
        throw internal_error("quadrature: total weight off (" + std::to_string(mass) + " vs " +
                             std::to_string(expected_mass) + ")");
    if (expected_x1sq > 0.0 && rule.exactness >= 2) {
        double m2 = rule.integrate([](const double* x) { return x[0] * x[0]; });
        if (std::abs(m2 - expected_x1sq) > 1e-10 * std::abs(expected_x1sq))
            throw internal_error("quadrature: x1^2 moment off");
    }
}

} // namespace

std::string domain_name(Domain d) {
    switch (d) {
        case Domain::interval: return "interval";
        case Domain::sphere: return "sphere";
        case Domain::ball: return "ball";
        case Domain::simplex: return "simplex";
    }
    return "?";
}

double QuadratureRule::total_weight() const {
    double s = 0.0;
    for (double w : weights)
        s += w;
    return s;
}

std::string QuadratureRule::to_json() const {
    nlohmann::json j;
    j["domain"] = domain_name(domain);
    j["dim"] = dim;
    j["exactness"] = exactness;
    j["exponents"] = {{"alpha", alpha}, {"beta", beta}, {"kappa", kappa}, {"exponent", exponent}};
    j["nodes"] = nodes;
    j["weights"] = weights;
    return j.dump(2);
}

QuadratureRule gauss_jacobi_rule(int order, const JacobiParam& p) {
    if (order < 1)
        throw parameter_error("gauss_jacobi_rule: order must be >= 1");
    const double a = p.alpha, b = p.beta;
    const double mass = std::exp((a + b + 1.0) * std::numbers::ln2_v<double> + log_beta(a + 1.0, b + 1.0));

    Eigen::VectorXd diag(order), sub(order > 1 ? order - 1 : 1);
    diag[0] = (b - a) / (a + b + 2.0);
    for (int k = 1; k < order; ++k) {
        const double s = 2.0 * k + a + b;
        diag[k] = (b * b - a * a) / (s * (s + 2.0));
    }
    if (order > 1)
        sub[0] = std::sqrt(4.0 * (a + 1.0) * (b + 1.0) / ((a + b + 2.0) * (a + b + 2.0) * (a + b + 3.0)));
    for (int k = 2; k < order; ++k) {
        const double s = 2.0 * k + a + b;
        sub[k - 1] = std::sqrt(4.0 * k * (k + a) * (k + b) * (k + a + b) / (s * s * (s * s - 1.0)));
    }

    QuadratureRule rule;
    rule.domain = Domain::interval;
    rule.dim = 1;
    rule.alpha = a;
    rule.beta = b;
    rule.exactness = 2 * order - 1;
    rule.nodes.resize(order);
    rule.weights.resize(order);

    if (order == 1) {
        rule.nodes[0] = diag[0];
        rule.weights[0] = mass;
    } else {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
        es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
        if (es.info() != Eigen::Success)
            throw internal_error("gauss_jacobi_rule: tridiagonal eigen-solve failed");
        for (int i = 0; i < order; ++i) {
            rule.nodes[i] = es.eigenvalues()[i]; // ascending
            const double v0 = es.eigenvectors()(0, i);
            rule.weights[i] = mass * v0 * v0;
        }
    }

    // First moment of the weight equals mass * diag[0]; cheap exactness check.
    double m1 = 0.0;
    for (int i = 0; i < order; ++i)
        m1 += rule.weights[i] * rule.nodes[i];
    if (std::abs(m1 - mass * diag[0]) > 1e-12 * std::max(1.0, mass))
        throw internal_error("gauss_jacobi_rule: first moment off");
    validate_rule(rule, mass, -1.0);
    return rule;
}

QuadratureRule sphere_rule(int d, int level) {
    if (d < 1 || d > 4)
        throw capability_error("sphere_rule: d must be in [1,4]");
    if (level < 1)
        throw parameter_error("sphere_rule: level must be >= 1");

    QuadratureRule rule;
    rule.domain = Domain::sphere;
    rule.dim = d;
    rule.exactness = 2 * level - 1;

    if (d == 1) {
        rule.nodes = {1.0, -1.0};
        rule.weights = {1.0, 1.0};
    } else if (d == 2) {
        const int m = 2 * level;
        for (int k = 0; k < m; ++k) {
            const double phi = 2.0 * kPi * k / m;
            rule.nodes.push_back(std::cos(phi));
            rule.nodes.push_back(std::sin(phi));
            rule.weights.push_back(2.0 * kPi / m);
        }
    } else {
        // xi = (sqrt(1-t^2) eta, t), domega_d = (1-t^2)^((d-3)/2) dt domega_{d-1}
        QuadratureRule inner = sphere_rule(d - 1, level);
        QuadratureRule polar = gauss_jacobi_rule(level, JacobiParam(0.5 * (d - 3), 0.5 * (d - 3)));
        for (int j = 0; j < polar.size(); ++j) {
            const double t = polar.nodes[j];
            const double rho = std::sqrt(std::max(0.0, 1.0 - t * t));
            for (int i = 0; i < inner.size(); ++i) {
                for (int c = 0; c < d - 1; ++c)
                    rule.nodes.push_back(rho * inner.nodes[(size_t)i * (d - 1) + c]);
                rule.nodes.push_back(t);
                rule.weights.push_back(polar.weights[j] * inner.weights[i]);
            }
        }
    }
    validate_rule(rule, sphere_moment(d, {}),
                  sphere_moment(d, {1.0}));
    return rule;
}

namespace {

// Angular rule on S^1 absorbing |xi_1|^(2 k1) |xi_2|^(2 k2), by the
// substitution s = cos(2 phi) on each quadrant.
QuadratureRule weighted_circle_rule(const std::vector<double>& kappa, int level) {
    const double k1 = kappa[0], k2 = kappa[1];
    QuadratureRule gj = gauss_jacobi_rule(level, JacobiParam(k2 - 0.5, k1 - 0.5));
    QuadratureRule rule;
    rule.domain = Domain::sphere;
    rule.dim = 2;
    rule.kappa = kappa;
    rule.exactness = 2 * level - 1;
    const double scale = std::pow(2.0, -(k1 + k2) - 1.0);
    for (int m = 0; m < gj.size(); ++m) {
        const double s = gj.nodes[m];
        const double c1 = std::sqrt(0.5 * (1.0 + s));
        const double c2 = std::sqrt(0.5 * (1.0 - s));
        const double w = scale * gj.weights[m];
        for (int sx : {1, -1})
            for (int sy : {1, -1}) {
                rule.nodes.push_back(sx * c1);
                rule.nodes.push_back(sy * c2);
                rule.weights.push_back(w);
            }
    }
    validate_rule(rule, sphere_moment(2, kappa), sphere_moment(2, {kappa[0] + 1.0, kappa[1]}));
    return rule;
}

} // namespace

QuadratureRule ball_rule(int d, double a, const std::vector<double>& kappa,
                         int radial_order, int angular_level) {
    if (!(a > -1.0))
        throw parameter_error("ball_rule: exponent must be > -1");
    if (radial_order < 1 || angular_level < 1)
        throw parameter_error("ball_rule: orders must be >= 1");
    std::vector<double> kap = kappa;
    kap.resize(d, 0.0);
    for (double k : kap)
        if (!(k >= 0.0))
            throw parameter_error("ball_rule: kappa_i must be >= 0");
    const bool weighted = !all_zero(kap);
    if (weighted && d > 2)
        throw capability_error("ball_rule: nonzero kappa supported only for d <= 2");
    if (!weighted && d > 4)
        throw capability_error("ball_rule: d must be <= 4");

    const double abs_kappa = sum(kap);
    // u = 2 r^2 - 1 turns the radial factor into the Jacobi weight (a, |kappa|+(d-2)/2).
    QuadratureRule radial = gauss_jacobi_rule(radial_order, JacobiParam(a, abs_kappa + 0.5 * (d - 2)));
    const double rscale = std::pow(2.0, -(abs_kappa + 0.5 * (d - 2) + a + 2.0));

    QuadratureRule angular;
    if (weighted && d == 2)
        angular = weighted_circle_rule(kap, angular_level);
    else if (weighted && d == 1)
        angular = sphere_rule(1, angular_level); // |xi|^(2k) = 1 at +-1
    else
        angular = sphere_rule(d, angular_level);

    QuadratureRule rule;
    rule.domain = Domain::ball;
    rule.dim = d;
    rule.kappa = kap;
    rule.exponent = a;
    rule.exactness = std::min(4 * radial_order - 2, angular.exactness);
    rule.nodes.reserve((size_t)radial.size() * angular.size() * d);
    rule.weights.reserve((size_t)radial.size() * angular.size());
    for (int j = 0; j < radial.size(); ++j) {
        const double r = std::sqrt(0.5 * (1.0 + radial.nodes[j]));
        const double rw = rscale * radial.weights[j];
        for (int i = 0; i < angular.size(); ++i) {
            for (int c = 0; c < d; ++c)
                rule.nodes.push_back(r * angular.nodes[(size_t)i * d + c]);
            rule.weights.push_back(rw * angular.weights[i]);
        }
    }

    const double mass = sphere_moment(d, kap) * radial_moment(2.0 * abs_kappa + d - 1.0, a);
    std::vector<double> kap1 = kap;
    kap1[0] += 1.0;
    const double x1sq = sphere_moment(d, kap1) * radial_moment(2.0 * abs_kappa + d + 1.0, a);
    validate_rule(rule, mass, x1sq);
    return rule;
}

QuadratureRule simplex_rule(int d, const std::vector<double>& kappa, double mu,
                            int radial_order, int angular_level) {
    if (!(mu >= 0.0))
        throw parameter_error("simplex_rule: mu must be >= 0");
    QuadratureRule ball = ball_rule(d, mu - 0.5, kappa, radial_order, angular_level);
    QuadratureRule rule;
    rule.domain = Domain::simplex;
    rule.dim = d;
    rule.kappa = ball.kappa;
    rule.exponent = mu;
    rule.exactness = ball.exactness / 2;
    rule.weights = ball.weights;
    rule.nodes.resize(ball.nodes.size());
    for (size_t i = 0; i < ball.nodes.size(); ++i)
        rule.nodes[i] = ball.nodes[i] * ball.nodes[i];

    const double mass = std::exp(-std::log(const_a_kappa_mu(d, rule.kappa, mu)));
    // int_{T^d} y_1 W^T dy = int_{B^d} x_1^2 W^B dx
    std::vector<double> kap1 = rule.kappa;
    kap1[0] += 1.0;
    const double y1 = sphere_moment(d, kap1) * radial_moment(2.0 * sum(rule.kappa) + d + 1.0, mu - 0.5);
    double m1 = 0.0;
    for (int i = 0; i < rule.size(); ++i)
        m1 += rule.weights[i] * rule.nodes[(size_t)i * d];
    if (std::abs(mass - rule.total_weight()) > 1e-12 * mass)
        throw internal_error("simplex_rule: total weight off");
    if (rule.exactness >= 1 && std::abs(m1 - y1) > 1e-10 * y1)
        throw internal_error("simplex_rule: y1 moment off");
    return rule;
}

} // namespace transops
