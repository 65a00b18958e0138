#pragma once

#include <span>
#include <string>
#include <vector>

#include "transops/specialfn.hpp"

namespace transops {

enum class Domain { interval, sphere, ball, simplex };

std::string domain_name(Domain d);

/// Weighted quadrature rule with stated polynomial exactness. Nodes are
/// stored row-major (size() x dim); weights absorb the domain weight
/// function named by `exponents`.
struct QuadratureRule {
    Domain domain = Domain::interval;
    int dim = 1;
    std::vector<double> nodes;   // size() * dim, ascending construction order
    std::vector<double> weights; // strictly positive
    int exactness = 0;
    // Weight exponents the rule absorbs:
    //   interval: w_{alpha,beta};  ball: prod |x_i|^(2 kappa_i) (1-|x|^2)^a;
    //   simplex:  prod y_i^(kappa_i-1/2) (1-|y|)^(mu-1/2);  sphere: prod |xi_i|^(2 kappa_i)
    double alpha = 0.0, beta = 0.0;
    std::vector<double> kappa;
    double exponent = 0.0; // the radial/boundary exponent (a resp. mu)

    int size() const { return (int)weights.size(); }
    std::span<const double> node(int i) const { return {nodes.data() + (size_t)i * dim, (size_t)dim}; }

    /// Sum of w_i * f(x_i); f receives a pointer to dim coordinates.
    template <class F>
    double integrate(F&& f) const {
        double s = 0.0;
        for (int i = 0; i < size(); ++i)
            s += weights[i] * f(nodes.data() + (size_t)i * dim);
        return s;
    }

    double total_weight() const;
    std::string to_json() const;
};

/// Gauss-Jacobi rule on [-1,1] for (1-t)^alpha (1+t)^beta, exact to degree
/// 2*order-1, by Golub-Welsch on the symmetric tridiagonal Jacobi matrix.
QuadratureRule gauss_jacobi_rule(int order, const JacobiParam& p);

/// Rule on S^(d-1) exact for spherical polynomials of degree <= 2*level-1.
/// d=1 is the two points +-1 with weight 1 each; d=2 equally spaced angles;
/// d in {3,4} recursive polar products of Gauss-Jacobi rules.
QuadratureRule sphere_rule(int d, int level);

/// Rule for int_{B^d} g(x) prod |x_i|^(2 kappa_i) (1-|x|^2)^a dx.
/// kappa empty or all-zero: d <= 4; nonzero kappa: d <= 2 (weighted angles
/// via per-quadrant Beta substitution).
QuadratureRule ball_rule(int d, double a, const std::vector<double>& kappa,
                         int radial_order, int angular_level);

/// Rule for int_{T^d} g(y) prod y_i^(kappa_i-1/2) (1-|y|)^(mu-1/2) dy,
/// built by mapping the matching ball rule through psi(x) = (x_1^2,...,x_d^2).
QuadratureRule simplex_rule(int d, const std::vector<double>& kappa, double mu,
                            int radial_order, int angular_level);

} // namespace transops
