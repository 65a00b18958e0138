#pragma once

#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "transops/function.hpp"
#include "transops/geometry.hpp"
#include "transops/polynomial.hpp"
#include "transops/quadrature.hpp"
#include "transops/weights.hpp"

namespace transops {

using Weight = std::variant<BallWeight, SimplexWeight>;

int weight_dim(const Weight& w);
bool is_ball(const Weight& w);
double weight_lambda_total(const Weight& w);
double weight_a_norm(const Weight& w);
FnDomain weight_domain(const Weight& w);

/// Eigenvalue of -D on the degree-n space: n(n+2(lambda+mu)) on the ball,
/// n(n+lambda+mu) on the simplex.
double weight_eigenvalue(const Weight& w, int n);

/// Translation multiplier m_n(theta): Gegenbauer ratio C_n(cos theta)/C_n(1)
/// on the ball, Jacobi ratio at cos(2 theta) on the simplex.
double translation_multiplier(const Weight& w, int n, double theta);

/// Orthonormal graded polynomial basis for (weight, rule), degrees 0..N.
/// Seeded with the closed-form orthogonal family of the matching classical
/// weight and Gram-corrected on the rule, so each column of block n lies in
/// the orthogonal complement V_n.
class OrthoBasis {
public:
    OrthoBasis(Weight w, int N, QuadratureRule rule);

    const Weight& weight() const { return weight_; }
    const QuadratureRule& rule() const { return rule_; }
    int truncation() const { return N_; }
    int size() const { return dim_total_; }
    int block_begin(int n) const { return block_begin_[n]; }
    int block_end(int n) const { return block_begin_[n + 1]; }
    int degree_of(int k) const;

    /// Orthonormal basis values at an arbitrary point (length size()).
    std::vector<double> eval(std::span<const double> x) const;
    /// Basis values at rule node i (precomputed; length size()).
    std::span<const double> node_row(int i) const;

    /// P_n(x, y) = sum over block n of psi_k(x) psi_k(y); the basis-route
    /// reproducing kernel, used as the cross-check against kernel_eval.
    double kernel_from_basis(int n, std::span<const double> x, std::span<const double> y) const;

private:
    void eval_seed(std::span<const double> x, double* out) const;
    void orthonormalize();

    Weight weight_;
    int N_;
    QuadratureRule rule_;
    int dim_total_ = 0;
    std::vector<int> block_begin_;
    std::vector<double> r_;      // upper-triangular seed->orthonormal transform
    std::vector<double> node_psi_; // nodes x size(), row-major
};

/// Truncated expansion: per-degree projection values on the stored rule,
/// cached L2 norms, and an arbitrary-point evaluator through the basis.
struct SpectralDecomposition {
    std::shared_ptr<const OrthoBasis> basis;
    std::vector<double> coeffs;       // per basis column
    std::vector<double> norms;        // ||proj_n f||_2, n = 0..N
    std::vector<double> node_values;  // (N+1) x nodes, row-major
    double f_norm2 = 0.0;             // quadrature ||f||_2^2 of the input

    const Weight& weight() const { return basis->weight(); }
    int truncation() const { return basis->truncation(); }
    const QuadratureRule& rule() const { return basis->rule(); }

    double eval_component(int n, std::span<const double> x) const;
    /// sum_n scale_n proj_n f (x); scale may be shorter than N+1.
    double eval_scaled(std::span<const double> x, std::span<const double> scale) const;
    double eval_sum(std::span<const double> x) const;
    /// ||f - S_N f||_2^2 estimate (nonnegative part of the Parseval defect).
    double tail_norm2() const;

    std::string to_json() const;
};

/// Reusable projection context for one (weight, N, rule).
class Projector {
public:
    Projector(Weight w, int N, std::optional<QuadratureRule> rule = std::nullopt);

    SpectralDecomposition project(const FunctionHandle& f) const;
    SpectralDecomposition project(const Polynomial& p) const;
    const OrthoBasis& basis() const { return *basis_; }
    std::shared_ptr<const OrthoBasis> basis_ptr() const { return basis_; }

private:
    std::shared_ptr<OrthoBasis> basis_;
};

/// proj_n f for a single degree; thin wrapper over Projector.
SpectralDecomposition project(const FunctionHandle& f, const Weight& w, int N,
                              std::optional<QuadratureRule> rule = std::nullopt);

// Reproducing kernels (intertwining-integral route, independent of the
// basis route above).

/// P_n(W^B; x, y). kappa = 0: single Gegenbauer integral; nonzero kappa:
/// (d+1)-dimensional tensor integral. mu = 0 uses the point-mass limit.
double kernel_eval(int n, const BallWeight& w, const BallPoint& x, const BallPoint& y,
                   int order);
/// All degrees 0..N in one pass.
std::vector<double> kernel_eval_all(int N, const BallWeight& w, const BallPoint& x,
                                    const BallPoint& y, int order);

enum class SimplexKernelForm { sign_average, intertwining };

/// P_n(W^T; x, y); both displayed forms are implemented and agree.
double kernel_eval_simplex(int n, const SimplexWeight& w, std::span<const double> x,
                           std::span<const double> y, int order,
                           SimplexKernelForm form = SimplexKernelForm::intertwining);
std::vector<double> kernel_eval_simplex_all(int N, const SimplexWeight& w,
                                            std::span<const double> x, std::span<const double> y,
                                            int order,
                                            SimplexKernelForm form = SimplexKernelForm::intertwining);

/// Kernel-route projection oracle: a sum_i w_i f(y_i) P_n(x, y_i).
double project_via_kernel(const FunctionHandle& f, const Weight& w, int n,
                          std::span<const double> x, const QuadratureRule& rule, int order);

// The second-order operators D^B and D^T.

/// Exact application on polynomials (differentiation in the monomial basis;
/// Z_2^d difference terms handled exactly).
Polynomial apply_D_ball(const Polynomial& f, const BallWeight& w);
Polynomial apply_D_simplex(const Polynomial& f, const SimplexWeight& w);

/// Black-box path: 4th-order central differences with step h.
double apply_D_fd(const FunctionHandle& f, const Weight& w, std::span<const double> x,
                  double h = 1e-4);

struct MultiplierSpec {
    enum class Family { translation, smoothness, fractional_D, vallee_poussin, custom };
    Family family;
    std::vector<double> values; // m_0..m_N
};

MultiplierSpec translation_multipliers(const Weight& w, int N, double theta);
MultiplierSpec smoothness_multipliers(const Weight& w, int N, double r, double theta);
MultiplierSpec fractional_D_multipliers(const Weight& w, int N, double r);
MultiplierSpec vallee_poussin_multipliers(const Weight& w, int N, double sigma);

SpectralDecomposition apply_multiplier(const SpectralDecomposition& decomp,
                                       const MultiplierSpec& m);

// Norms.

/// Weighted L^p norm of f by quadrature (p in {1, 2}), or the max over the
/// rule nodes plus 200 quasi-random interior points (p = inf, reported as a
/// lower bound of the sup norm).
double weighted_norm(const FunctionHandle& f, const Weight& w, const QuadratureRule& rule,
                     double p);
std::vector<std::vector<double>> sup_norm_samples(const Weight& w, const QuadratureRule& rule);

/// Per-degree L2 projection norms without node values; enough for every
/// p = 2 quantity (moduli, K-functionals, best-approximation errors).
struct WeightedSpectrum {
    Weight weight;
    std::vector<double> norms; // ||proj_n f||_2, n = 0..N
    double f_norm2 = 0.0;

    int truncation() const { return (int)norms.size() - 1; }
    double tail_norm2() const;
};

WeightedSpectrum spectrum_of(const SpectralDecomposition& d);

/// Spectrum of a radial function f(|x|) on the ball (f(|y|_1) on the
/// simplex). The radial element of V_n is a 1D Jacobi polynomial in the
/// marginal weight, so the projection reduces to a single Gauss-Jacobi
/// quadrature; only even degrees are populated on the ball. This reaches
/// truncations far beyond what the full basis route can afford.
WeightedSpectrum project_radial(const std::function<double(double)>& profile, const Weight& w,
                                int N, int order = -1);

} // namespace transops
