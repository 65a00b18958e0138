#include "transops/spectral.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <cmath>
#include <numbers>

#include <json.hpp>

#include "transops/parallel.hpp"

namespace transops {

namespace {
constexpr double kTiny = 1e-12;
}

int weight_dim(const Weight& w) {
    return std::visit([](const auto& v) { return v.d; }, w);
}

bool is_ball(const Weight& w) { return std::holds_alternative<BallWeight>(w); }

double weight_lambda_total(const Weight& w) {
    return std::visit([](const auto& v) { return v.lambda_total; }, w);
}

double weight_a_norm(const Weight& w) {
    return std::visit([](const auto& v) { return v.a_norm; }, w);
}

FnDomain weight_domain(const Weight& w) {
    return is_ball(w) ? FnDomain::ball : FnDomain::simplex;
}

double weight_eigenvalue(const Weight& w, int n) {
    const double lt = weight_lambda_total(w);
    return is_ball(w) ? n * (n + 2.0 * lt) : n * (n + lt);
}

double translation_multiplier(const Weight& w, int n, double theta) {
    const double lt = weight_lambda_total(w);
    if (n == 0)
        return 1.0;
    if (is_ball(w)) {
        GegenbauerParam lam(lt);
        return gegenbauer_eval(n, lam, std::cos(theta)) / gegenbauer_at_one(n, lam);
    }
    JacobiParam p(lt - 0.5, -0.5);
    return jacobi_eval(n, p, std::cos(2.0 * theta)) / jacobi_eval(n, p, 1.0);
}

// ---------------------------------------------------------------------------
// OrthoBasis
// ---------------------------------------------------------------------------

namespace {

int block_dim(const Weight& w, int n) {
    const int d = weight_dim(w);
    if (is_ball(w)) {
        if (d == 1)
            return 1;
        if (d == 2)
            return n + 1;
        if (d == 3)
            return (n + 1) * (n + 2) / 2;
    } else {
        if (d == 1)
            return 1;
        if (d == 2)
            return n + 1;
    }
    throw capability_error("projection basis: unsupported dimension " + std::to_string(d) +
                           " for this domain");
}

// Regular real solid harmonics (r^l Y_lm) on R^3 by the standard recurrences,
// written into per-degree lists [C_l0, C_l1, S_l1, ..., C_ll, S_ll].
void solid_harmonics(int lmax, std::span<const double> x, std::vector<std::vector<double>>& out) {
    out.assign(lmax + 1, {});
    const double r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    std::vector<std::vector<double>> C(lmax + 1), S(lmax + 1);
    for (int l = 0; l <= lmax; ++l) {
        C[l].assign(l + 1, 0.0);
        S[l].assign(l + 1, 0.0);
    }
    C[0][0] = 1.0;
    for (int l = 1; l <= lmax; ++l) {
        C[l][l] = (2.0 * l - 1.0) * (x[0] * C[l - 1][l - 1] - x[1] * S[l - 1][l - 1]);
        S[l][l] = (2.0 * l - 1.0) * (x[0] * S[l - 1][l - 1] + x[1] * C[l - 1][l - 1]);
        for (int m = 0; m < l; ++m) {
            double prev2c = (l >= 2 && m <= l - 2) ? C[l - 2][m] : 0.0;
            double prev2s = (l >= 2 && m <= l - 2) ? S[l - 2][m] : 0.0;
            C[l][m] = ((2.0 * l - 1.0) * x[2] * C[l - 1][m] - (l - 1.0 + m) * r2 * prev2c) / (l - m);
            S[l][m] = ((2.0 * l - 1.0) * x[2] * S[l - 1][m] - (l - 1.0 + m) * r2 * prev2s) / (l - m);
        }
    }
    for (int l = 0; l <= lmax; ++l) {
        out[l].push_back(C[l][0]);
        for (int m = 1; m <= l; ++m) {
            out[l].push_back(C[l][m]);
            out[l].push_back(S[l][m]);
        }
    }
}

} // namespace

int OrthoBasis::degree_of(int k) const {
    for (int n = 0; n <= N_; ++n)
        if (k < block_begin_[n + 1])
            return n;
    throw parameter_error("degree_of: index out of range");
}

void OrthoBasis::eval_seed(std::span<const double> x, double* out) const {
    const int d = weight_dim(weight_);
    const int N = N_;
    if (is_ball(weight_)) {
        const BallWeight& bw = std::get<BallWeight>(weight_);
        const double mu = bw.mu;
        if (d == 1) {
            std::vector<double> p(N + 1);
            jacobi_eval_all(N, JacobiParam(mu - 0.5, mu - 0.5), x[0], p.data());
            for (int n = 0; n <= N; ++n)
                out[block_begin_[n]] = p[n];
            return;
        }
        if (d == 2) {
            const double u = 2.0 * (x[0] * x[0] + x[1] * x[1]) - 1.0;
            // cm[m] + i sm[m] = (x_1 + i x_2)^m
            std::vector<double> cm(N + 1), sm(N + 1), rad(N / 2 + 2);
            cm[0] = 1.0;
            sm[0] = 0.0;
            for (int m = 1; m <= N; ++m) {
                cm[m] = cm[m - 1] * x[0] - sm[m - 1] * x[1];
                sm[m] = sm[m - 1] * x[0] + cm[m - 1] * x[1];
            }
            for (int m = 0; m <= N; ++m) {
                const int jmax = (N - m) / 2;
                jacobi_eval_all(jmax, JacobiParam(mu - 0.5, (double)m), u, rad.data());
                for (int j = 0; j <= jmax; ++j) {
                    const int n = m + 2 * j;
                    // block ordering: [cos(n phi), sin(n phi), cos((n-2)phi), ...]
                    const int pos = block_begin_[n] + 2 * j;
                    out[pos] = rad[j] * cm[m];
                    if (m >= 1)
                        out[pos + 1] = rad[j] * sm[m];
                }
            }
            return;
        }
        if (d == 3) {
            const double u = 2.0 * (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) - 1.0;
            std::vector<std::vector<double>> sh;
            solid_harmonics(N, x, sh);
            std::vector<double> rad(N / 2 + 2);
            for (int l = 0; l <= N; ++l) {
                const int jmax = (N - l) / 2;
                jacobi_eval_all(jmax, JacobiParam(mu - 0.5, l + 0.5), u, rad.data());
                for (int j = 0; j <= jmax; ++j) {
                    const int n = l + 2 * j;
                    // offset of the (l = n - 2j) group inside block n
                    int off = 0;
                    for (int jj = 0; jj < j; ++jj)
                        off += 2 * (n - 2 * jj) + 1;
                    for (size_t m = 0; m < sh[l].size(); ++m)
                        out[block_begin_[n] + off + (int)m] = rad[j] * sh[l][m];
                }
            }
            return;
        }
    } else {
        const SimplexWeight& sw = std::get<SimplexWeight>(weight_);
        if (d == 1) {
            std::vector<double> p(N + 1);
            jacobi_eval_all(N, JacobiParam(sw.mu - 0.5, sw.kappa[0] - 0.5), 2.0 * x[0] - 1.0,
                            p.data());
            for (int n = 0; n <= N; ++n)
                out[block_begin_[n]] = p[n];
            return;
        }
        if (d == 2) {
            const double a = sw.kappa[0] - 0.5, b = sw.kappa[1] - 0.5, c = sw.mu - 0.5;
            const double w = 1.0 - x[0];
            // z_m = (1-y_1)^m P_m^(c,b)(2 y_2/(1-y_1) - 1), by the scaled recurrence
            std::vector<double> z(N + 1);
            z[0] = 1.0;
            if (N >= 1)
                z[1] = 0.5 * (c + b + 2.0) * (2.0 * x[1] - w) + 0.5 * (c - b) * w;
            for (int m = 2; m <= N; ++m) {
                const double m2ab = 2.0 * m + c + b;
                const double c1 = 2.0 * m * (m + c + b) * (m2ab - 2.0);
                const double ct = (m2ab - 1.0) * m2ab * (m2ab - 2.0);
                const double c0 = (m2ab - 1.0) * (c * c - b * b);
                const double c3 = 2.0 * (m + c - 1.0) * (m + b - 1.0) * m2ab;
                z[m] = ((ct * (2.0 * x[1] - w) + c0 * w) * z[m - 1] - c3 * w * w * z[m - 2]) / c1;
            }
            std::vector<double> pj(N + 1);
            for (int m = 0; m <= N; ++m) {
                const int jmax = N - m;
                jacobi_eval_all(jmax, JacobiParam(2.0 * m + b + c + 1.0, a), 2.0 * x[0] - 1.0,
                                pj.data());
                for (int j = 0; j <= jmax; ++j)
                    out[block_begin_[j + m] + m] = pj[j] * z[m];
            }
            return;
        }
    }
    throw capability_error("projection basis: unsupported dimension");
}

OrthoBasis::OrthoBasis(Weight w, int N, QuadratureRule rule)
    : weight_(std::move(w)), N_(N), rule_(std::move(rule)) {
    if (N < 0)
        throw parameter_error("OrthoBasis: N must be >= 0");
    if (rule_.exactness < 2 * N)
        throw config_error("OrthoBasis: rule exactness " + std::to_string(rule_.exactness) +
                           " < 2N = " + std::to_string(2 * N));
    block_begin_.resize(N + 2);
    block_begin_[0] = 0;
    for (int n = 0; n <= N; ++n)
        block_begin_[n + 1] = block_begin_[n] + block_dim(weight_, n);
    dim_total_ = block_begin_[N + 1];
    orthonormalize();
}

void OrthoBasis::orthonormalize() {
    const int npts = rule_.size();
    const int D = dim_total_;
    const double a = weight_a_norm(weight_);

    Eigen::MatrixXd phi(npts, D);
    parallel_for_chunks(npts, [&](int64_t b, int64_t e) {
        std::vector<double> row(D);
        for (int64_t i = b; i < e; ++i) {
            eval_seed(rule_.node((int)i), row.data());
            for (int k = 0; k < D; ++k)
                phi((Eigen::Index)i, k) = row[k];
        }
    });

    Eigen::VectorXd wts(npts);
    for (int i = 0; i < npts; ++i)
        wts[i] = a * rule_.weights[i];

    Eigen::MatrixXd wphi = wts.asDiagonal() * phi;
    Eigen::MatrixXd gram = phi.transpose() * wphi;

    // Column scaling keeps the Cholesky well-conditioned for seeds whose raw
    // magnitudes vary (solid harmonics).
    Eigen::VectorXd scale = gram.diagonal().array().sqrt();
    for (int k = 0; k < D; ++k)
        if (!(scale[k] > 0.0) || !std::isfinite(scale[k]))
            throw config_error("OrthoBasis: degenerate seed column");
    gram = scale.asDiagonal().inverse() * gram * scale.asDiagonal().inverse();

    Eigen::LLT<Eigen::MatrixXd> llt(gram);
    if (llt.info() != Eigen::Success)
        throw config_error("OrthoBasis: Gram matrix not positive definite; "
                           "increase quadrature exactness or reduce N");
    Eigen::MatrixXd R = llt.matrixU();

    // G = (R S)^T (R S), so psi = phi (R S)^(-1) is orthonormal.
    Eigen::MatrixXd T = R * scale.asDiagonal();
    r_.assign((size_t)D * D, 0.0);
    for (int i = 0; i < D; ++i)
        for (int j = i; j < D; ++j)
            r_[(size_t)i * D + j] = T(i, j);

    // psi = phi T^(-1) by triangular solve, stored row-per-node.
    Eigen::MatrixXd psi = T.transpose().triangularView<Eigen::Lower>().solve(phi.transpose());
    node_psi_.resize((size_t)npts * D);
    for (int i = 0; i < npts; ++i)
        for (int k = 0; k < D; ++k)
            node_psi_[(size_t)i * D + k] = psi(k, i);
}

std::span<const double> OrthoBasis::node_row(int i) const {
    return {node_psi_.data() + (size_t)i * dim_total_, (size_t)dim_total_};
}

std::vector<double> OrthoBasis::eval(std::span<const double> x) const {
    const int D = dim_total_;
    std::vector<double> v(D);
    eval_seed(x, v.data());
    // back-substitute v <- v T^(-1)
    for (int k = 0; k < D; ++k) {
        double s = v[k];
        for (int j = 0; j < k; ++j)
            s -= v[j] * r_[(size_t)j * D + k];
        v[k] = s / r_[(size_t)k * D + k];
    }
    return v;
}

double OrthoBasis::kernel_from_basis(int n, std::span<const double> x,
                                     std::span<const double> y) const {
    std::vector<double> px = eval(x);
    std::vector<double> py = eval(y);
    double s = 0.0;
    for (int k = block_begin(n); k < block_end(n); ++k)
        s += px[k] * py[k];
    return s;
}

// ---------------------------------------------------------------------------
// Projection
// ---------------------------------------------------------------------------

Projector::Projector(Weight w, int N, std::optional<QuadratureRule> rule) {
    QuadratureRule r = rule ? std::move(*rule)
                            : std::visit([&](const auto& v) { return v.make_rule(2 * N + 4); }, w);
    basis_ = std::make_shared<OrthoBasis>(std::move(w), N, std::move(r));
}

SpectralDecomposition Projector::project(const FunctionHandle& f) const {
    const OrthoBasis& basis = *basis_;
    const QuadratureRule& rule = basis.rule();
    const int npts = rule.size();
    const int D = basis.size();
    const int N = basis.truncation();
    const double a = weight_a_norm(basis.weight());

    std::vector<double> fvals(npts);
    parallel_for_chunks(npts, [&](int64_t b, int64_t e) {
        for (int64_t i = b; i < e; ++i)
            fvals[i] = f.eval(rule.node((int)i));
    });

    SpectralDecomposition out;
    out.basis = basis_;
    out.coeffs.assign(D, 0.0);
    // fixed-chunk partials combined in chunk order (bit-reproducible)
    const int64_t nchunks = (npts + kReduceChunk - 1) / kReduceChunk;
    std::vector<std::vector<double>> partial((size_t)nchunks);
    std::vector<double> fn2_partial((size_t)nchunks, 0.0);
    parallel_for_chunks(npts, [&](int64_t b, int64_t e) {
        std::vector<double> acc(D, 0.0);
        double fn2 = 0.0;
        for (int64_t i = b; i < e; ++i) {
            const double fw = a * rule.weights[i] * fvals[i];
            fn2 += a * rule.weights[i] * fvals[i] * fvals[i];
            std::span<const double> row = basis.node_row((int)i);
            for (int k = 0; k < D; ++k)
                acc[k] += fw * row[k];
        }
        partial[b / kReduceChunk] = std::move(acc);
        fn2_partial[b / kReduceChunk] = fn2;
    });
    for (int64_t c = 0; c < nchunks; ++c) {
        for (int k = 0; k < D; ++k)
            out.coeffs[k] += partial[c][k];
        out.f_norm2 += fn2_partial[c];
    }

    out.norms.resize(N + 1);
    for (int n = 0; n <= N; ++n) {
        double s = 0.0;
        for (int k = basis.block_begin(n); k < basis.block_end(n); ++k)
            s += out.coeffs[k] * out.coeffs[k];
        out.norms[n] = std::sqrt(s);
    }

    out.node_values.assign((size_t)(N + 1) * npts, 0.0);
    parallel_for_chunks(npts, [&](int64_t b, int64_t e) {
        for (int64_t i = b; i < e; ++i) {
            std::span<const double> row = basis.node_row((int)i);
            for (int n = 0; n <= N; ++n) {
                double s = 0.0;
                for (int k = basis.block_begin(n); k < basis.block_end(n); ++k)
                    s += out.coeffs[k] * row[k];
                out.node_values[(size_t)n * npts + i] = s;
            }
        }
    });
    return out;
}

SpectralDecomposition Projector::project(const Polynomial& p) const {
    return project(p.to_function(weight_domain(basis_->weight())));
}

SpectralDecomposition project(const FunctionHandle& f, const Weight& w, int N,
                              std::optional<QuadratureRule> rule) {
    return Projector(w, N, std::move(rule)).project(f);
}

double SpectralDecomposition::eval_component(int n, std::span<const double> x) const {
    std::vector<double> psi = basis->eval(x);
    double s = 0.0;
    for (int k = basis->block_begin(n); k < basis->block_end(n); ++k)
        s += coeffs[k] * psi[k];
    return s;
}

double SpectralDecomposition::eval_scaled(std::span<const double> x,
                                          std::span<const double> scale) const {
    std::vector<double> psi = basis->eval(x);
    double s = 0.0;
    const int N = truncation();
    for (int n = 0; n <= N && n < (int)scale.size(); ++n)
        for (int k = basis->block_begin(n); k < basis->block_end(n); ++k)
            s += scale[n] * coeffs[k] * psi[k];
    return s;
}

double SpectralDecomposition::eval_sum(std::span<const double> x) const {
    std::vector<double> psi = basis->eval(x);
    double s = 0.0;
    for (size_t k = 0; k < coeffs.size(); ++k)
        s += coeffs[k] * psi[k];
    return s;
}

double SpectralDecomposition::tail_norm2() const {
    double s = f_norm2;
    for (double n : norms)
        s -= n * n;
    // defects below the Parseval roundoff floor are indistinguishable from 0
    if (s <= 1e-13 * f_norm2)
        return 0.0;
    return s;
}

std::string SpectralDecomposition::to_json() const {
    nlohmann::json j;
    const Weight& w = weight();
    j["weight"] = {{"domain", is_ball(w) ? "ball" : "simplex"},
                   {"d", weight_dim(w)},
                   {"kappa", std::visit([](const auto& v) { return v.kappa; }, w)},
                   {"mu", std::visit([](const auto& v) { return v.mu; }, w)}};
    j["N"] = truncation();
    j["norms"] = norms;
    j["f_norm2"] = f_norm2;
    const int npts = rule().size();
    nlohmann::json comps = nlohmann::json::array();
    for (int n = 0; n <= truncation(); ++n) {
        comps.push_back(std::vector<double>(node_values.begin() + (size_t)n * npts,
                                            node_values.begin() + (size_t)(n + 1) * npts));
    }
    j["node_values"] = std::move(comps);
    return j.dump();
}

// ---------------------------------------------------------------------------
// Kernels
// ---------------------------------------------------------------------------

namespace {

struct Rule1D {
    std::vector<double> nodes;
    std::vector<double> weights; // normalized to unit mass
};

// c_kappa (1+t)(1-t^2)^(kappa-1) dt as a unit-mass rule; the kappa -> 0 limit
// of c_kappa (1-t^2)^(kappa-1) dt is [delta_1 + delta_{-1}]/2, so with the
// (1+t) factor the whole integral collapses to evaluation at t = 1.
Rule1D intertwine_rule(double kappa, int order, bool with_linear_factor) {
    Rule1D r;
    if (kappa < kTiny) {
        if (with_linear_factor) {
            r.nodes = {1.0};
            r.weights = {1.0};
        } else {
            r.nodes = {1.0, -1.0};
            r.weights = {0.5, 0.5};
        }
        return r;
    }
    QuadratureRule gj = with_linear_factor
                            ? gauss_jacobi_rule(order, JacobiParam(kappa - 1.0, kappa))
                            : gauss_jacobi_rule(order, JacobiParam(kappa - 1.0, kappa - 1.0));
    const double c = const_c_r(kappa);
    r.nodes = gj.nodes;
    r.weights.resize(gj.size());
    for (int i = 0; i < gj.size(); ++i)
        r.weights[i] = c * gj.weights[i];
    return r;
}

// Iterates a tensor product of small 1D rules.
void tensor_for_each(const std::vector<Rule1D>& rules,
                     const std::function<void(std::span<const double>, double)>& fn) {
    const int d = (int)rules.size();
    std::vector<int> idx(d, 0);
    std::vector<double> pt(d);
    for (;;) {
        double w = 1.0;
        for (int i = 0; i < d; ++i) {
            pt[i] = rules[i].nodes[idx[i]];
            w *= rules[i].weights[idx[i]];
        }
        fn(pt, w);
        int i = 0;
        for (; i < d; ++i) {
            if (++idx[i] < (int)rules[i].nodes.size())
                break;
            idx[i] = 0;
        }
        if (i == d)
            return;
    }
}

} // namespace

std::vector<double> kernel_eval_all(int N, const BallWeight& w, const BallPoint& x,
                                    const BallPoint& y, int order) {
    if (N < 0)
        throw parameter_error("kernel_eval_all: N must be >= 0");
    if (order < 1)
        throw parameter_error("kernel_eval_all: order must be >= 1");
    const double lam = w.lambda_total;
    if (!(lam > 0.0))
        throw capability_error("kernel: lambda_kappa + mu must be > 0");
    const int d = w.d;
    const double sx = std::sqrt(std::max(0.0, 1.0 - x.norm * x.norm));
    const double sy = std::sqrt(std::max(0.0, 1.0 - y.norm * y.norm));

    std::vector<double> acc(N + 1, 0.0);
    std::vector<double> cn(N + 1);

    if (w.kappa_zero()) {
        Rule1D srule = intertwine_rule(w.mu, order, false);
        double xy = 0.0;
        for (int i = 0; i < d; ++i)
            xy += x.coords[i] * y.coords[i];
        for (size_t i = 0; i < srule.nodes.size(); ++i) {
            double z = std::clamp(xy + srule.nodes[i] * sx * sy, -1.0, 1.0);
            gegenbauer_eval_all(N, lam, z, cn.data());
            for (int n = 0; n <= N; ++n)
                acc[n] += srule.weights[i] * cn[n];
        }
    } else {
        if (d > 2)
            throw capability_error("kernel: nonzero kappa supported only for d <= 2");
        std::vector<Rule1D> rules;
        for (int i = 0; i < d; ++i)
            rules.push_back(intertwine_rule(w.kappa[i], order, true));
        rules.push_back(intertwine_rule(w.mu, order, false));
        tensor_for_each(rules, [&](std::span<const double> t, double tw) {
            double z = t[d] * sx * sy;
            for (int i = 0; i < d; ++i)
                z += x.coords[i] * t[i] * y.coords[i];
            z = std::clamp(z, -1.0, 1.0);
            gegenbauer_eval_all(N, lam, z, cn.data());
            for (int n = 0; n <= N; ++n)
                acc[n] += tw * cn[n];
        });
    }

    for (int n = 0; n <= N; ++n)
        acc[n] *= (n + lam) / lam;
    return acc;
}

double kernel_eval(int n, const BallWeight& w, const BallPoint& x, const BallPoint& y, int order) {
    return kernel_eval_all(n, w, x, y, order)[n];
}

std::vector<double> kernel_eval_simplex_all(int N, const SimplexWeight& w,
                                            std::span<const double> x, std::span<const double> y,
                                            int order, SimplexKernelForm form) {
    const int d = w.d;
    if (form == SimplexKernelForm::sign_average) {
        BallWeight bw = w.lifted();
        BallPoint bx = lift_sqrt(x);
        std::vector<double> out(N + 1, 0.0);
        std::vector<int> signs(d, 1);
        for (int mask = 0; mask < (1 << d); ++mask) {
            for (int i = 0; i < d; ++i)
                signs[i] = (mask >> i) & 1 ? -1 : 1;
            BallPoint by = lift_sqrt(y, signs);
            std::vector<double> ball = kernel_eval_all(2 * N, bw, bx, by, order);
            for (int n = 0; n <= N; ++n)
                out[n] += ball[2 * n];
        }
        for (double& v : out)
            v /= (1 << d);
        return out;
    }

    // intertwining form: p_n(1) V^T[p_n(2 <.,Y>^2 - 1)](X) with the even
    // tensor integral for V^T.
    const double lam = w.lambda_total;
    JacobiParam jp(lam - 0.5, -0.5);
    std::vector<Rule1D> rules;
    for (int i = 0; i < d; ++i)
        rules.push_back(intertwine_rule(w.kappa[i], order, false));
    rules.push_back(intertwine_rule(w.mu, order, false));

    std::vector<double> X(d + 1), Y(d + 1);
    double sx = 0.0, sy = 0.0;
    for (int i = 0; i < d; ++i) {
        X[i] = std::sqrt(std::max(0.0, x[i]));
        Y[i] = std::sqrt(std::max(0.0, y[i]));
        sx += x[i];
        sy += y[i];
    }
    X[d] = std::sqrt(std::max(0.0, 1.0 - sx));
    Y[d] = std::sqrt(std::max(0.0, 1.0 - sy));

    std::vector<double> acc(N + 1, 0.0), pn(N + 1);
    tensor_for_each(rules, [&](std::span<const double> t, double tw) {
        double u = 0.0;
        for (int i = 0; i <= d; ++i)
            u += X[i] * t[i] * Y[i];
        double z = std::clamp(2.0 * u * u - 1.0, -1.0, 1.0);
        jacobi_eval_all(N, jp, z, pn.data());
        for (int n = 0; n <= N; ++n)
            acc[n] += tw * pn[n];
    });
    const double c = const_c_alpha_beta(jp.alpha, jp.beta);
    for (int n = 0; n <= N; ++n) {
        const double p1 = jacobi_eval(n, jp, 1.0);
        acc[n] *= p1 / (c * jacobi_norm_squared(n, jp));
        // p_n(1) p_n(z) = P_n(1) P_n(z) / (c h_n)
    }
    return acc;
}

double kernel_eval_simplex(int n, const SimplexWeight& w, std::span<const double> x,
                           std::span<const double> y, int order, SimplexKernelForm form) {
    return kernel_eval_simplex_all(n, w, x, y, order, form)[n];
}

double project_via_kernel(const FunctionHandle& f, const Weight& w, int n,
                          std::span<const double> x, const QuadratureRule& rule, int order) {
    const double a = weight_a_norm(w);
    if (is_ball(w)) {
        const BallWeight& bw = std::get<BallWeight>(w);
        BallPoint bx{Vec(x.begin(), x.end())};
        return a * parallel_sum(rule.size(), [&](int64_t i) {
            std::span<const double> yi = rule.node((int)i);
            BallPoint by{Vec(yi.begin(), yi.end())};
            return rule.weights[i] * f.eval(yi) * kernel_eval(n, bw, bx, by, order);
        });
    }
    const SimplexWeight& sw = std::get<SimplexWeight>(w);
    return a * parallel_sum(rule.size(), [&](int64_t i) {
        std::span<const double> yi = rule.node((int)i);
        return rule.weights[i] * f.eval(yi) * kernel_eval_simplex(n, sw, x, yi, order);
    });
}

// ---------------------------------------------------------------------------
// D^B and D^T
// ---------------------------------------------------------------------------

Polynomial apply_D_ball(const Polynomial& f, const BallWeight& w) {
    const int d = f.dim();
    if (d != w.d)
        throw parameter_error("apply_D_ball: dimension mismatch");
    Polynomial out(d);
    const double lt = w.lambda_total;
    for (const auto& [e, c] : f.terms()) {
        int total = 0;
        for (int v : e)
            total += v;
        // -(<x,grad>^2 + 2(lambda+mu)<x,grad>) on a monomial of degree |a|
        out.add_term(e, -c * (total * total + 2.0 * lt * total));
        // Dunkl Laplacian: ordinary Laplacian plus the Z_2^d terms
        for (int i = 0; i < d; ++i) {
            if (e[i] < 2)
                continue;
            Polynomial::Exponents e2 = e;
            e2[i] -= 2;
            double coef = c * e[i] * (e[i] - 1);
            if (w.kappa[i] != 0.0)
                coef += c * w.kappa[i] * (2.0 * e[i] - 2.0 * (e[i] % 2));
            out.add_term(e2, coef);
        }
    }
    return out;
}

Polynomial apply_D_simplex(const Polynomial& f, const SimplexWeight& w) {
    // (D^T f) o psi = (1/4) D^B (f o psi): the ball eigenvalue at degree 2n is
    // -2n(2n+2(lambda+mu)) = -4 n(n+lambda+mu), four times the simplex one.
    Polynomial lifted = f.compose_psi();
    Polynomial g = apply_D_ball(lifted, w.lifted());
    return g.pullback_psi().scaled(0.25);
}

namespace {

// 4th order central differences
double fd1(const std::function<double(double)>& g, double h) {
    return (-g(2 * h) + 8 * g(h) - 8 * g(-h) + g(-2 * h)) / (12 * h);
}
double fd2(const std::function<double(double)>& g, double h) {
    return (-g(2 * h) + 16 * g(h) - 30 * g(0) + 16 * g(-h) - g(-2 * h)) / (12 * h * h);
}

} // namespace

double apply_D_fd(const FunctionHandle& f, const Weight& w, std::span<const double> x, double h) {
    const int d = weight_dim(w);
    const double lt = weight_lambda_total(w);
    Vec xv(x.begin(), x.end());

    auto along = [&](const Vec& dir) {
        return [&f, xv, dir](double t) {
            Vec p = xv;
            for (size_t i = 0; i < p.size(); ++i)
                p[i] += t * dir[i];
            return f.eval(p);
        };
    };

    if (is_ball(w)) {
        const BallWeight& bw = std::get<BallWeight>(w);
        double lap = 0.0, euler1 = 0.0;
        for (int i = 0; i < d; ++i) {
            Vec dir(d, 0.0);
            dir[i] = 1.0;
            auto g = along(dir);
            lap += fd2(g, h);
            euler1 += xv[i] * fd1(g, h);
            if (bw.kappa[i] != 0.0) {
                if (std::abs(xv[i]) < 1e-6)
                    throw capability_error("apply_D_fd: x_i too close to 0 for the difference term");
                Vec flip = xv;
                flip[i] = -flip[i];
                lap += bw.kappa[i] * (2.0 * fd1(g, h) / xv[i] -
                                      (f.eval(xv) - f.eval(flip)) / (xv[i] * xv[i]));
            }
        }
        // <x,grad>^2 = sum x_i x_j d_ij + <x,grad>
        auto gx = along(xv);
        double dir2 = fd2(gx, h);
        return lap - dir2 - euler1 - 2.0 * lt * euler1;
    }

    // simplex: D^T f(y) = (1/4) D^B (f o psi)(sqrt(y)) through the lift
    const SimplexWeight& sw = std::get<SimplexWeight>(w);
    FunctionHandle lifted(FnDomain::ball, d,
                          [&f](std::span<const double> xb) {
                              Vec y = psi_map(xb);
                              return f.eval(y);
                          });
    BallPoint bx = lift_sqrt(x);
    return 0.25 * apply_D_fd(lifted, Weight(sw.lifted()), bx.coords, h);
}

// ---------------------------------------------------------------------------
// Multipliers
// ---------------------------------------------------------------------------

MultiplierSpec translation_multipliers(const Weight& w, int N, double theta) {
    MultiplierSpec m{MultiplierSpec::Family::translation, {}};
    m.values.resize(N + 1);
    for (int n = 0; n <= N; ++n)
        m.values[n] = translation_multiplier(w, n, theta);
    if (std::abs(m.values[0] - 1.0) > 1e-12)
        throw internal_error("translation multiplier m_0 != 1");
    for (double v : m.values)
        if (std::abs(v) > 1.0 + 1e-10)
            throw internal_error("translation multiplier out of [-1,1]");
    return m;
}

MultiplierSpec smoothness_multipliers(const Weight& w, int N, double r, double theta) {
    if (!(r > 0.0))
        throw parameter_error("smoothness multiplier: r must be > 0");
    MultiplierSpec m{MultiplierSpec::Family::smoothness, {}};
    m.values.resize(N + 1);
    for (int n = 0; n <= N; ++n) {
        double g = 1.0 - translation_multiplier(w, n, theta);
        m.values[n] = std::pow(std::max(0.0, g), 0.5 * r);
    }
    return m;
}

MultiplierSpec fractional_D_multipliers(const Weight& w, int N, double r) {
    MultiplierSpec m{MultiplierSpec::Family::fractional_D, {}};
    m.values.resize(N + 1);
    for (int n = 0; n <= N; ++n)
        m.values[n] = std::pow(weight_eigenvalue(w, n), 0.5 * r);
    return m;
}

MultiplierSpec vallee_poussin_multipliers(const Weight& w, int N, double sigma) {
    if (!(sigma > 0.0))
        throw parameter_error("vallee_poussin multiplier: sigma must be > 0");
    MultiplierSpec m{MultiplierSpec::Family::vallee_poussin, {}};
    m.values.resize(N + 1);
    for (int n = 0; n <= N; ++n) {
        const double u = std::sqrt(weight_eigenvalue(w, n)) / sigma;
        if (u <= 1.0)
            m.values[n] = 1.0;
        else if (u >= 2.0)
            m.values[n] = 0.0;
        else
            m.values[n] = 0.5 * (1.0 + std::cos(std::numbers::pi_v<double> * (u - 1.0)));
    }
    return m;
}

SpectralDecomposition apply_multiplier(const SpectralDecomposition& decomp,
                                       const MultiplierSpec& m) {
    const int N = decomp.truncation();
    if ((int)m.values.size() != N + 1)
        throw parameter_error("apply_multiplier: truncation mismatch");
    SpectralDecomposition out = decomp;
    const OrthoBasis& basis = *decomp.basis;
    const int npts = decomp.rule().size();
    for (int n = 0; n <= N; ++n) {
        for (int k = basis.block_begin(n); k < basis.block_end(n); ++k)
            out.coeffs[k] *= m.values[n];
        out.norms[n] *= std::abs(m.values[n]);
        for (int i = 0; i < npts; ++i)
            out.node_values[(size_t)n * npts + i] *= m.values[n];
    }
    // the input's tail is not transported
    out.f_norm2 = 0.0;
    for (double nn : out.norms)
        out.f_norm2 += nn * nn;
    return out;
}

// ---------------------------------------------------------------------------
// Norms
// ---------------------------------------------------------------------------

std::vector<std::vector<double>> sup_norm_samples(const Weight& w, const QuadratureRule& rule) {
    const int d = weight_dim(w);
    std::vector<std::vector<double>> pts;
    for (int i = 0; i < rule.size(); ++i) {
        auto nd = rule.node(i);
        pts.emplace_back(nd.begin(), nd.end());
    }
    // Kronecker sequence, folded into the domain
    static const double alphas[4] = {0.6180339887498949, 0.4142135623730951,
                                     0.7320508075688772, 0.2360679774997896};
    int accepted = 0;
    int64_t k = 1;
    while (accepted < 200) {
        std::vector<double> u(d);
        for (int i = 0; i < d; ++i)
            u[i] = std::fmod(0.5 + k * alphas[i], 1.0);
        ++k;
        if (is_ball(w)) {
            double n2 = 0.0;
            for (int i = 0; i < d; ++i) {
                u[i] = 2.0 * u[i] - 1.0;
                n2 += u[i] * u[i];
            }
            if (n2 > 1.0)
                continue;
        } else {
            double s = 0.0;
            for (double v : u)
                s += v;
            if (s > 1.0)
                continue;
        }
        pts.push_back(std::move(u));
        ++accepted;
    }
    return pts;
}

double WeightedSpectrum::tail_norm2() const {
    double s = f_norm2;
    for (double n : norms)
        s -= n * n;
    if (s <= 1e-13 * f_norm2)
        return 0.0;
    return s;
}

WeightedSpectrum spectrum_of(const SpectralDecomposition& d) {
    return {d.weight(), d.norms, d.f_norm2};
}

WeightedSpectrum project_radial(const std::function<double(double)>& profile, const Weight& w,
                                int N, int order) {
    if (N < 0)
        throw parameter_error("project_radial: N must be >= 0");
    // singular radial profiles (|x|^a) converge algebraically in the order,
    // so the default is generous; 1D rules make this cheap
    if (order < 0)
        order = std::max(2 * N + 32, 512);
    const int d = weight_dim(w);
    WeightedSpectrum out{w, std::vector<double>(N + 1, 0.0), 0.0};

    if (is_ball(w)) {
        // marginal of the radial variable under u = 2r^2 - 1:
        // (1-u)^(mu-1/2) (1+u)^(|kappa|+(d-2)/2); the radial element of V_2j
        // is the orthonormal Jacobi q_j(u).
        const BallWeight& bw = std::get<BallWeight>(w);
        double abs_kappa = 0.0;
        for (double k : bw.kappa)
            abs_kappa += k;
        JacobiParam jp(bw.mu - 0.5, abs_kappa + 0.5 * (d - 2));
        const int jmax = N / 2;
        if (order < jmax + 1)
            throw config_error("project_radial: order too small for N");
        QuadratureRule rule = gauss_jacobi_rule(order, jp);
        const double c = const_c_alpha_beta(jp.alpha, jp.beta);
        std::vector<double> acc(jmax + 1, 0.0), pj(jmax + 1);
        for (int i = 0; i < rule.size(); ++i) {
            const double u = rule.nodes[i];
            const double r = std::sqrt(0.5 * (1.0 + u));
            const double fv = profile(r);
            jacobi_eval_all(jmax, jp, u, pj.data());
            for (int j = 0; j <= jmax; ++j)
                acc[j] += c * rule.weights[i] * fv * pj[j];
            out.f_norm2 += c * rule.weights[i] * fv * fv;
        }
        for (int j = 0; j <= jmax; ++j) {
            const double s = std::sqrt(c * jacobi_norm_squared(j, jp));
            out.norms[2 * j] = std::abs(acc[j] / s);
        }
        return out;
    }

    // simplex: marginal of s = |y| is s^(|kappa|+d/2-1) (1-s)^(mu-1/2),
    // i.e. Jacobi (mu-1/2, |kappa|+d/2-1) in u = 2s - 1.
    const SimplexWeight& sw = std::get<SimplexWeight>(w);
    double abs_kappa = 0.0;
    for (double k : sw.kappa)
        abs_kappa += k;
    JacobiParam jp(sw.mu - 0.5, abs_kappa + 0.5 * d - 1.0);
    if (order < N + 1)
        throw config_error("project_radial: order too small for N");
    QuadratureRule rule = gauss_jacobi_rule(order, jp);
    const double c = const_c_alpha_beta(jp.alpha, jp.beta);
    std::vector<double> acc(N + 1, 0.0), pn(N + 1);
    for (int i = 0; i < rule.size(); ++i) {
        const double u = rule.nodes[i];
        const double sarg = 0.5 * (1.0 + u);
        const double fv = profile(sarg);
        jacobi_eval_all(N, jp, u, pn.data());
        for (int n = 0; n <= N; ++n)
            acc[n] += c * rule.weights[i] * fv * pn[n];
        out.f_norm2 += c * rule.weights[i] * fv * fv;
    }
    for (int n = 0; n <= N; ++n) {
        const double s = std::sqrt(c * jacobi_norm_squared(n, jp));
        out.norms[n] = std::abs(acc[n] / s);
    }
    return out;
}

double weighted_norm(const FunctionHandle& f, const Weight& w, const QuadratureRule& rule,
                     double p) {
    const double a = weight_a_norm(w);
    if (std::isinf(p)) {
        double m = 0.0;
        for (const auto& pt : sup_norm_samples(w, rule))
            m = std::max(m, std::abs(f.eval(pt)));
        return m;
    }
    if (p != 1.0 && p != 2.0)
        throw capability_error("weighted_norm: p must be 1, 2 or inf");
    double s = parallel_sum(rule.size(), [&](int64_t i) {
        double v = std::abs(f.eval(rule.node((int)i)));
        return rule.weights[i] * (p == 1.0 ? v : v * v);
    });
    return p == 1.0 ? a * s : std::sqrt(a * s);
}

} // namespace transops
