#pragma once

#include <map>
#include <span>
#include <vector>

#include "transops/function.hpp"

namespace transops {

/// Multivariate polynomial in the monomial basis; exponents are the map key.
/// Used wherever an operator must be applied exactly (differentiation,
/// psi pullback) rather than through quadrature.
class Polynomial {
public:
    using Exponents = std::vector<int>;

    Polynomial() = default;
    explicit Polynomial(int dim) : dim_(dim) {}

    int dim() const { return dim_; }
    int degree() const;
    bool empty() const { return terms_.empty(); }
    const std::map<Exponents, double>& terms() const { return terms_; }

    void add_term(const Exponents& e, double c);
    double eval(std::span<const double> x) const;

    Polynomial operator+(const Polynomial& o) const;
    Polynomial operator-(const Polynomial& o) const;
    Polynomial operator*(const Polynomial& o) const;
    Polynomial scaled(double c) const;

    Polynomial derivative(int i) const;

    static Polynomial constant(int dim, double c);
    static Polynomial coordinate(int dim, int i);
    /// sum_k coeffs[k] * (linear form <x, y>)^k
    static Polynomial from_univariate_in_form(const std::vector<double>& coeffs,
                                              std::span<const double> y);

    /// f(x) -> f(x_1^2, ..., x_d^2)
    Polynomial compose_psi() const;
    /// inverse of compose_psi; throws if any exponent is odd.
    Polynomial pullback_psi() const;

    FunctionHandle to_function(FnDomain domain) const;

private:
    int dim_ = 0;
    std::map<Exponents, double> terms_;
};

/// Monomial coefficients of C_n^lambda (index k -> coefficient of t^k).
std::vector<double> gegenbauer_monomial_coeffs(int n, double lambda);
/// Monomial coefficients of P_n^(alpha,beta).
std::vector<double> jacobi_monomial_coeffs(int n, double alpha, double beta);

} // namespace transops
