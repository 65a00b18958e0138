#pragma once

#include <functional>
#include <span>
#include <string>
#include <utility>

#include "transops/errors.hpp"

namespace transops {

enum class FnDomain { interval, ball, simplex };

/// Black-box real-valued function on [-1,1], B^d or T^d; the universal
/// operator input. Evaluation must be deterministic.
struct FunctionHandle {
    FnDomain domain = FnDomain::interval;
    int dim = 1;
    std::function<double(std::span<const double>)> eval;
    std::string name; // optional registry name

    FunctionHandle() = default;
    FunctionHandle(FnDomain dom, int d, std::function<double(std::span<const double>)> f,
                   std::string n = {})
        : domain(dom), dim(d), eval(std::move(f)), name(std::move(n)) {}

    double operator()(std::span<const double> x) const { return eval(x); }
    double operator()(double t) const { return eval(std::span<const double>(&t, 1)); }
};

inline FunctionHandle constant_fn(FnDomain dom, int d, double c) {
    return FunctionHandle(dom, d, [c](std::span<const double>) { return c; }, "const");
}

/// f o psi: pullback of a simplex function to the ball.
FunctionHandle compose_psi(const FunctionHandle& f_simplex);

} // namespace transops
