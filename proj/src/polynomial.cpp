#include "transops/polynomial.hpp"

#include <cmath>

namespace transops {

int Polynomial::degree() const {
    int deg = 0;
    for (const auto& [e, c] : terms_) {
        int t = 0;
        for (int v : e)
            t += v;
        deg = std::max(deg, t);
    }
    return deg;
}

void Polynomial::add_term(const Exponents& e, double c) {
    if (c == 0.0)
        return;
    if ((int)e.size() != dim_)
        throw parameter_error("Polynomial: exponent size mismatch");
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0.0)
            terms_.erase(it);
    }
}

double Polynomial::eval(std::span<const double> x) const {
    double s = 0.0;
    for (const auto& [e, c] : terms_) {
        double m = c;
        for (int i = 0; i < dim_; ++i)
            for (int k = 0; k < e[i]; ++k)
                m *= x[i];
        s += m;
    }
    return s;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
    Polynomial r = *this;
    for (const auto& [e, c] : o.terms_)
        r.add_term(e, c);
    return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
    Polynomial r = *this;
    for (const auto& [e, c] : o.terms_)
        r.add_term(e, -c);
    return r;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
    Polynomial r(dim_);
    for (const auto& [e1, c1] : terms_)
        for (const auto& [e2, c2] : o.terms_) {
            Exponents e(dim_);
            for (int i = 0; i < dim_; ++i)
                e[i] = e1[i] + e2[i];
            r.add_term(e, c1 * c2);
        }
    return r;
}

Polynomial Polynomial::scaled(double c) const {
    Polynomial r(dim_);
    for (const auto& [e, v] : terms_)
        r.add_term(e, v * c);
    return r;
}

Polynomial Polynomial::derivative(int i) const {
    Polynomial r(dim_);
    for (const auto& [e, c] : terms_) {
        if (e[i] == 0)
            continue;
        Exponents d = e;
        d[i] -= 1;
        r.add_term(d, c * e[i]);
    }
    return r;
}

Polynomial Polynomial::constant(int dim, double c) {
    Polynomial r(dim);
    r.add_term(Exponents(dim, 0), c);
    return r;
}

Polynomial Polynomial::coordinate(int dim, int i) {
    Polynomial r(dim);
    Exponents e(dim, 0);
    e[i] = 1;
    r.add_term(e, 1.0);
    return r;
}

Polynomial Polynomial::from_univariate_in_form(const std::vector<double>& coeffs,
                                               std::span<const double> y) {
    const int d = (int)y.size();
    Polynomial form(d);
    for (int i = 0; i < d; ++i) {
        Exponents e(d, 0);
        e[i] = 1;
        form.add_term(e, y[i]);
    }
    Polynomial result = Polynomial::constant(d, coeffs.empty() ? 0.0 : coeffs[0]);
    Polynomial power = Polynomial::constant(d, 1.0);
    for (size_t k = 1; k < coeffs.size(); ++k) {
        power = power * form;
        result = result + power.scaled(coeffs[k]);
    }
    return result;
}

Polynomial Polynomial::compose_psi() const {
    Polynomial r(dim_);
    for (const auto& [e, c] : terms_) {
        Exponents e2(dim_);
        for (int i = 0; i < dim_; ++i)
            e2[i] = 2 * e[i];
        r.add_term(e2, c);
    }
    return r;
}

Polynomial Polynomial::pullback_psi() const {
    Polynomial r(dim_);
    for (const auto& [e, c] : terms_) {
        Exponents h(dim_);
        for (int i = 0; i < dim_; ++i) {
            if (e[i] % 2 != 0)
                throw internal_error("pullback_psi: polynomial not even in each variable");
            h[i] = e[i] / 2;
        }
        r.add_term(h, c);
    }
    return r;
}

FunctionHandle Polynomial::to_function(FnDomain domain) const {
    Polynomial p = *this;
    return FunctionHandle(domain, dim_, [p](std::span<const double> x) { return p.eval(x); },
                          "poly");
}

std::vector<double> gegenbauer_monomial_coeffs(int n, double lambda) {
    // c_0 = {1}, c_1 = {0, 2 lambda}, then the three-term recurrence on coefficients.
    std::vector<double> prev{1.0};
    if (n == 0)
        return prev;
    std::vector<double> cur{0.0, 2.0 * lambda};
    for (int k = 2; k <= n; ++k) {
        std::vector<double> next(k + 1, 0.0);
        for (int j = 0; j <= k - 1; ++j)
            next[j + 1] += 2.0 * (k + lambda - 1.0) / k * cur[j];
        for (int j = 0; j <= k - 2; ++j)
            next[j] -= (k + 2.0 * lambda - 2.0) / k * prev[j];
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

std::vector<double> jacobi_monomial_coeffs(int n, double alpha, double beta) {
    std::vector<double> prev{1.0};
    if (n == 0)
        return prev;
    std::vector<double> cur{0.5 * (alpha - beta), 0.5 * (alpha + beta + 2.0)};
    for (int k = 2; k <= n; ++k) {
        const double a = alpha, b = beta;
        const double k2ab = 2.0 * k + a + b;
        const double c1 = 2.0 * k * (k + a + b) * (k2ab - 2.0);
        const double ct = (k2ab - 1.0) * k2ab * (k2ab - 2.0) / c1;
        const double c0 = (k2ab - 1.0) * (a * a - b * b) / c1;
        const double c3 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * k2ab / c1;
        std::vector<double> next(k + 1, 0.0);
        for (int j = 0; j <= k - 1; ++j) {
            next[j + 1] += ct * cur[j];
            next[j] += c0 * cur[j];
        }
        for (int j = 0; j <= k - 2; ++j)
            next[j] -= c3 * prev[j];
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

} // namespace transops
