#include "transops/weights.hpp"

#include <cmath>

#include "transops/function.hpp"
#include "transops/geometry.hpp"

namespace transops {

namespace {

double check_params(int d, std::vector<double>& kappa, double mu) {
    if (d < 1)
        throw parameter_error("weight: d must be >= 1");
    if (!(mu >= 0.0))
        throw parameter_error("weight: mu must be >= 0");
    kappa.resize(d, 0.0);
    double abs_kappa = 0.0;
    for (double k : kappa) {
        if (!(k >= 0.0))
            throw parameter_error("weight: kappa_i must be >= 0");
        abs_kappa += k;
    }
    return abs_kappa;
}

int radial_order_for(int exactness) { return (exactness + 2) / 4 + 1; }
int angular_level_for(int exactness) { return (exactness + 1) / 2 + 1; }

} // namespace

BallWeight::BallWeight(int dim, std::vector<double> kap, double mu_)
    : d(dim), kappa(std::move(kap)), mu(mu_) {
    const double abs_kappa = check_params(d, kappa, mu);
    lambda_kappa = abs_kappa + 0.5 * (d - 1);
    lambda_total = lambda_kappa + mu;
    a_norm = const_a_kappa_mu(d, kappa, mu);
}

bool BallWeight::kappa_zero() const {
    for (double k : kappa)
        if (k != 0.0)
            return false;
    return true;
}

double BallWeight::density(std::span<const double> x) const {
    double n2 = 0.0, h = 1.0;
    for (int i = 0; i < d; ++i) {
        n2 += x[i] * x[i];
        if (kappa[i] != 0.0)
            h *= std::pow(std::abs(x[i]), 2.0 * kappa[i]);
    }
    return h * std::pow(std::max(0.0, 1.0 - n2), mu - 0.5);
}

QuadratureRule BallWeight::make_rule(int exactness) const {
    return ball_rule(d, mu - 0.5, kappa, radial_order_for(exactness), angular_level_for(exactness));
}

SimplexWeight::SimplexWeight(int dim, std::vector<double> kap, double mu_)
    : d(dim), kappa(std::move(kap)), mu(mu_) {
    const double abs_kappa = check_params(d, kappa, mu);
    lambda_kappa = abs_kappa + 0.5 * (d - 1);
    lambda_total = lambda_kappa + mu;
    a_norm = const_a_kappa_mu(d, kappa, mu);
}

BallWeight SimplexWeight::lifted() const { return BallWeight(d, kappa, mu); }

double SimplexWeight::density(std::span<const double> y) const {
    double s = 0.0, h = 1.0;
    for (int i = 0; i < d; ++i) {
        s += y[i];
        h *= std::pow(std::max(0.0, y[i]), kappa[i] - 0.5);
    }
    return h * std::pow(std::max(0.0, 1.0 - s), mu - 0.5);
}

QuadratureRule SimplexWeight::make_rule(int exactness) const {
    // exactness on T^d needs twice that on the lifted ball
    return simplex_rule(d, kappa, mu, radial_order_for(2 * exactness),
                        angular_level_for(2 * exactness));
}

FunctionHandle compose_psi(const FunctionHandle& f_simplex) {
    if (f_simplex.domain != FnDomain::simplex)
        throw parameter_error("compose_psi: expects a simplex function");
    auto f = f_simplex;
    return FunctionHandle(FnDomain::ball, f.dim,
                          [f](std::span<const double> x) {
                              Vec y = psi_map(x);
                              return f.eval(y);
                          },
                          f.name.empty() ? std::string{} : f.name + "+psi");
}

} // namespace transops
