#pragma once

#include <vector>

#include "transops/quadrature.hpp"
#include "transops/specialfn.hpp"

namespace transops {

/// Weight prod |x_i|^(2 kappa_i) (1-|x|^2)^(mu-1/2) on B^d, with the derived
/// constants used throughout: lambda_kappa = |kappa| + (d-1)/2, the total
/// Gegenbauer index lambda_kappa + mu, and the normalization a_{kappa,mu}.
struct BallWeight {
    int d = 1;
    std::vector<double> kappa;
    double mu = 0.0;
    double lambda_kappa = 0.0;
    double lambda_total = 0.0;
    double a_norm = 0.0;

    BallWeight(int dim, std::vector<double> kap, double mu_);

    bool kappa_zero() const;
    double density(std::span<const double> x) const;
    /// Default rule absorbing this weight, exact to at least `exactness`.
    QuadratureRule make_rule(int exactness) const;
};

/// Weight prod y_i^(kappa_i-1/2) (1-|y|)^(mu-1/2) on T^d; same parameter
/// vector as the BallWeight it lifts to under psi.
struct SimplexWeight {
    int d = 1;
    std::vector<double> kappa;
    double mu = 0.0;
    double lambda_kappa = 0.0;
    double lambda_total = 0.0;
    double a_norm = 0.0;

    SimplexWeight(int dim, std::vector<double> kap, double mu_);

    BallWeight lifted() const;
    double density(std::span<const double> y) const;
    QuadratureRule make_rule(int exactness) const;
};

} // namespace transops
