#include "transops/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "transops/operators.hpp"
#include "transops/parallel.hpp"
#include "transops/polynomial.hpp"
#include "transops/registry.hpp"
#include "transops/smoothness.hpp"

namespace transops {

namespace {

using nlohmann::json;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    out += '"';
    return out;
}

struct TableWriter {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> r) { rows.push_back(std::move(r)); }

    std::string csv() const {
        std::string out;
        for (size_t i = 0; i < columns.size(); ++i)
            out += (i ? "," : "") + csv_quote(columns[i]);
        out += "\n";
        for (const auto& r : rows) {
            for (size_t i = 0; i < r.size(); ++i)
                out += (i ? "," : "") + csv_quote(r[i]);
            out += "\n";
        }
        return out;
    }
    std::string jsonl() const {
        std::string out;
        for (const auto& r : rows) {
            json j;
            for (size_t i = 0; i < columns.size(); ++i)
                j[columns[i]] = r[i];
            out += j.dump() + "\n";
        }
        return out;
    }
};

struct VerifyRecord {
    std::string check;
    std::string params;
    double measured;
    double tolerance;
    bool pass;
};

struct Options {
    int dim = 2;
    std::vector<double> kappa;
    double mu = 1.0;
    double theta = -1.0; // unset sentinel
    int degree = 4;
    int nmax = -1;
    int trunc = -1;
    int quad_radial = -1;
    int quad_angular = -1;
    std::string fn = "gaussian:1";
    std::string domain = "ball";
    std::string p = "2";
    double r = 2.0;
    double lambda = 1.0;
    std::string path = "both";
    std::string out;
    std::string format = "csv";
    uint64_t seed = 0;
    int threads = 1;
    std::string config_file;
    std::vector<double> x;

    double p_value() const {
        if (p == "inf")
            return std::numeric_limits<double>::infinity();
        try {
            return std::stod(p);
        } catch (const std::exception&) {
            throw config_error("bad value for --p: " + p);
        }
    }
};

int default_truncation(int d) {
    switch (d) {
        case 1: return 32;
        case 2: return 24;
        case 3: return 16;
        default: return 12;
    }
}

Weight make_weight(const Options& o) {
    std::vector<double> kap = o.kappa;
    kap.resize(o.dim, 0.0);
    if (o.domain == "ball")
        return Weight(BallWeight(o.dim, kap, o.mu));
    if (o.domain == "simplex")
        return Weight(SimplexWeight(o.dim, kap, o.mu));
    throw config_error("unknown domain '" + o.domain + "'");
}

void write_output(const Options& o, const std::string& content) {
    if (o.out.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream f(o.out, std::ios::binary);
    if (!f)
        throw config_error("cannot open output file " + o.out);
    f << content;
}

std::string render(const Options& o, const TableWriter& t) {
    if (o.format == "csv")
        return t.csv();
    if (o.format == "json")
        return t.jsonl();
    throw config_error("unknown format '" + o.format + "'");
}

BallPoint random_ball_point(std::mt19937_64& rng, int d, double rmax = 0.9) {
    std::uniform_real_distribution<double> ud(-1.0, 1.0);
    for (;;) {
        Vec x(d);
        double n2 = 0.0;
        for (double& v : x) {
            v = ud(rng);
            n2 += v * v;
        }
        if (n2 <= rmax * rmax)
            return BallPoint(std::move(x));
    }
}

Vec random_unit(std::mt19937_64& rng, int d) {
    std::normal_distribution<double> nd(0.0, 1.0);
    Vec y(d);
    double n2 = 0.0;
    for (double& v : y) {
        v = nd(rng);
        n2 += v * v;
    }
    for (double& v : y)
        v /= std::sqrt(n2);
    return y;
}

Polynomial random_poly(std::mt19937_64& rng, int d, int deg) {
    std::uniform_real_distribution<double> ud(-1.0, 1.0);
    Polynomial p(d);
    std::vector<int> e(d, 0);
    for (;;) {
        int total = 0;
        for (int v : e)
            total += v;
        if (total <= deg)
            p.add_term(e, ud(rng));
        int i = 0;
        for (; i < d; ++i) {
            if (++e[i] <= deg)
                break;
            e[i] = 0;
        }
        if (i == d)
            break;
    }
    return p;
}

// ---------------------------------------------------------------------------
// verify suites
// ---------------------------------------------------------------------------

void add(std::vector<VerifyRecord>& rec, std::string check, std::string params, double measured,
         double tol) {
    rec.push_back({std::move(check), std::move(params), measured, tol, measured <= tol});
}

void suite_multiplier(const Options& o, std::mt19937_64& rng, std::vector<VerifyRecord>& rec) {
    const int nmax = o.nmax > 0 ? o.nmax : 6;
    for (int d = 1; d <= std::min(o.dim, 3); ++d) {
        for (double mu : {0.5, 1.0, 2.5}) {
            BallWeight w(d, {}, mu);
            GegenbauerParam lam(w.lambda_total);
            auto rule = translation_rule(w, 14, 14);
            double worst = 0.0;
            std::uniform_real_distribution<double> ud(0.0, 1.0);
            for (int n = 0; n <= nmax; ++n) {
                Vec y = random_unit(rng, d);
                FunctionHandle ridge(FnDomain::ball, d, [n, lam, y](std::span<const double> x) {
                    double t = 0.0;
                    for (size_t i = 0; i < y.size(); ++i)
                        t += x[i] * y[i];
                    return gegenbauer_eval(n, lam, std::clamp(t, -1.0, 1.0));
                });
                for (int trial = 0; trial < 3; ++trial) {
                    BallPoint x = random_ball_point(rng, d);
                    double theta = std::numbers::pi * ud(rng);
                    double got = translate_ball_integral(theta, ridge, w, x, rule);
                    double expected = gegenbauer_eval(n, lam, std::cos(theta)) /
                                      gegenbauer_at_one(n, lam) * ridge(x.coords);
                    worst = std::max(worst,
                                     std::abs(got - expected) / std::max(1.0, std::abs(expected)));
                }
            }
            add(rec, "multiplier.ridge", "d=" + std::to_string(d) + ";mu=" + fmt17(mu), worst,
                1e-8);
        }
    }
    {
        const double mu = 1.25;
        BallWeight w(1, {}, mu);
        auto rule = translation_rule(w, 32, 1);
        FunctionHandle f(FnDomain::ball, 1,
                         [](std::span<const double> t) { return std::exp(0.7 * t[0]); });
        FunctionHandle fi(FnDomain::interval, 1, f.eval);
        std::uniform_real_distribution<double> ud(-0.95, 0.95);
        double worst = 0.0;
        for (int trial = 0; trial < 10; ++trial) {
            double theta = 0.5 * std::numbers::pi * (ud(rng) + 1.0);
            double x = ud(rng);
            double a = translate_ball_integral(theta, f, w, BallPoint(Vec{x}), rule);
            auto t1 = translate_1d(std::cos(theta), fi, GegenbauerParam(mu), 32);
            worst = std::max(worst, std::abs(a - t1(x)));
        }
        add(rec, "multiplier.d1_reduction", "mu=" + fmt17(mu), worst, 1e-10);
    }
}

void suite_contraction(const Options& o, std::mt19937_64&, std::vector<VerifyRecord>& rec) {
    const int d = std::min(o.dim, 2);
    BallWeight w(d, {}, o.mu > 0 ? o.mu : 1.0);
    Weight ww(w);
    auto rule = w.make_rule(24);
    auto trule = translation_rule(w, 14, 14);
    for (const char* name : {"gaussian:1", "absnorm", "abs-power:1.5", "cusp:0.25"}) {
        FunctionHandle f = make_registry_function(name, FnDomain::ball, d, ww);
        for (double p : {1.0, 2.0, std::numeric_limits<double>::infinity()}) {
            double nf = weighted_norm(f, ww, rule, p);
            double worst = -1e300;
            for (double theta : {0.2, 0.9, 2.0}) {
                FunctionHandle tf(FnDomain::ball, d, [&, theta](std::span<const double> x) {
                    return translate_ball_integral(theta, f, w,
                                                   BallPoint(Vec(x.begin(), x.end())), trule);
                });
                worst = std::max(worst, weighted_norm(tf, ww, rule, p) - nf);
            }
            add(rec, "contraction.norm",
                std::string(name) + ";p=" + (std::isinf(p) ? "inf" : fmt17(p)), worst, 1e-9);
        }
        double prev = std::numeric_limits<double>::infinity();
        double worst_increase = -1e300;
        double last = 0.0;
        for (double theta = 0.5; theta >= 1.0 / 64 - 1e-12; theta *= 0.5) {
            FunctionHandle diff(FnDomain::ball, d, [&, theta](std::span<const double> x) {
                return translate_ball_integral(theta, f, w, BallPoint(Vec(x.begin(), x.end())),
                                               trule) -
                       f(x);
            });
            double nd = weighted_norm(diff, ww, rule, 2.0);
            worst_increase = std::max(worst_increase, nd - prev);
            prev = nd;
            last = nd;
        }
        add(rec, "contraction.limit_monotone", name, worst_increase, 1e-12);
        add(rec, "contraction.limit_value", name, last, 1e-2);
    }
}

void suite_ode(const Options& o, std::mt19937_64& rng, std::vector<VerifyRecord>& rec) {
    for (int d = 1; d <= std::min(o.dim, 2); ++d) {
        BallWeight w(d, {}, 1.0);
        Vec y = random_unit(rng, d);
        Polynomial ridge =
            Polynomial::from_univariate_in_form(gegenbauer_monomial_coeffs(4, w.lambda_total), y);
        double r64 = verify_semigroup_identity(ridge, Weight(w), std::numbers::pi / 3.0, 64);
        add(rec, "ode.residual", "d=" + std::to_string(d) + ";order=64", r64, 1e-7);
        double r16 = verify_semigroup_identity(ridge, Weight(w), std::numbers::pi / 3.0, 16);
        double r32 = verify_semigroup_identity(ridge, Weight(w), std::numbers::pi / 3.0, 32);
        add(rec, "ode.monotone", "d=" + std::to_string(d), std::max(r32 - r16, r64 - r32), 1e-14);
    }
    {
        SimplexWeight w(2, {0.5, 0.5}, 0.5);
        Polynomial p = random_poly(rng, 2, 4);
        double res = verify_semigroup_identity(p, Weight(w), 0.9, 64);
        add(rec, "ode.residual", "simplex;d=2;order=64", res, 1e-7);
    }
}

void suite_young(const Options& o, std::mt19937_64& rng, std::vector<VerifyRecord>& rec) {
    const int d = std::min(o.dim, 2);
    BallWeight w(d, {}, 1.0);
    Weight ww(w);
    const int N = 6;
    Projector proj(ww, N);
    auto rule = w.make_rule(2 * N + 6);
    const double inf = std::numeric_limits<double>::infinity();
    const std::vector<std::array<double, 3>> triples{{1, 1, 1}, {2, 2, 1}, {inf, 2, 2}};
    auto grule = gauss_jacobi_rule(24, JacobiParam(w.lambda_total - 0.5, w.lambda_total - 0.5));
    const double blam = const_b_lambda(w.lambda_total);
    double worst = -1e300;
    std::uniform_real_distribution<double> ud(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        Polynomial pf = random_poly(rng, d, N);
        FunctionHandle f = pf.to_function(FnDomain::ball);
        double a = ud(rng), b = ud(rng), c = ud(rng);
        FunctionHandle g(FnDomain::interval, 1, [a, b, c](std::span<const double> t) {
            return a + b * t[0] + c * t[0] * t[0];
        });
        auto conv = convolve_ball(proj.project(f), g);
        FunctionHandle fg(FnDomain::ball, d,
                          [&conv](std::span<const double> x) { return conv.eval_sum(x); });
        auto gnorm = [&](double p) {
            if (std::isinf(p)) {
                double m = 0.0;
                for (int i = 0; i < grule.size(); ++i)
                    m = std::max(m, std::abs(g(grule.nodes[i])));
                return m;
            }
            double s = 0.0;
            for (int i = 0; i < grule.size(); ++i)
                s += grule.weights[i] * std::pow(std::abs(g(grule.nodes[i])), p);
            return std::pow(blam * s, 1.0 / p);
        };
        for (auto [p, q, rr] : triples) {
            double lhs = weighted_norm(fg, ww, rule, p);
            double rhs = weighted_norm(f, ww, rule, q) * gnorm(rr);
            worst = std::max(worst, (lhs - rhs) / std::max(1.0, rhs));
        }
    }
    add(rec, "young.inequality", "d=" + std::to_string(d) + ";pairs=20", worst, 1e-9);
}

void suite_eigen(const Options& o, std::mt19937_64& rng, std::vector<VerifyRecord>& rec) {
    const int nmax = o.nmax > 0 ? std::min(o.nmax, 8) : 6;
    for (int d = 1; d <= std::min(o.dim, 2); ++d) {
        BallWeight w(d, {}, o.mu > 0 ? o.mu : 1.0);
        Vec y = random_unit(rng, d);
        double worst = 0.0;
        for (int n = 1; n <= nmax; ++n) {
            Polynomial ridge = Polynomial::from_univariate_in_form(
                gegenbauer_monomial_coeffs(n, w.lambda_total), y);
            Polynomial df = apply_D_ball(ridge, w);
            Polynomial diff = df - ridge.scaled(-n * (n + 2.0 * w.lambda_total));
            for (int trial = 0; trial < 5; ++trial) {
                BallPoint x = random_ball_point(rng, d);
                worst = std::max(worst, std::abs(diff.eval(x.coords)) /
                                            std::max(1.0, std::abs(ridge.eval(x.coords))));
            }
        }
        add(rec, "eigen.ball_ridge", "d=" + std::to_string(d) + ";mu=" + fmt17(w.mu), worst, 1e-8);
    }
    for (const Weight& w :
         {Weight(SimplexWeight(1, {0.75}, 1.25)), Weight(SimplexWeight(2, {0.5, 1.5}, 1.0))}) {
        const int d = weight_dim(w);
        const int N = std::min(nmax, 6);
        Projector proj(w, N);
        Polynomial f = random_poly(rng, d, N);
        Polynomial df = apply_D_simplex(f, std::get<SimplexWeight>(w));
        auto dec = proj.project(f);
        auto ddec = proj.project(df);
        double worst = 0.0;
        for (int n = 0; n <= N; ++n) {
            double expected = weight_eigenvalue(w, n) * dec.norms[n];
            worst = std::max(worst, std::abs(ddec.norms[n] - expected) / std::max(1.0, expected));
        }
        add(rec, "eigen.simplex_psi", "d=" + std::to_string(d), worst, 1e-8);
    }
}

void suite_kernel(const Options&, std::mt19937_64& rng, std::vector<VerifyRecord>& rec) {
    std::vector<Weight> weights{Weight(BallWeight(1, {}, 1.0)), Weight(BallWeight(2, {}, 0.5)),
                                Weight(BallWeight(2, {0.5, 1.5}, 0.5)),
                                Weight(SimplexWeight(1, {0.75}, 1.25)),
                                Weight(SimplexWeight(2, {0.5, 1.5}, 1.0))};
    std::uniform_real_distribution<double> ud(0.0, 1.0);
    for (const Weight& w : weights) {
        const int d = weight_dim(w);
        const int N = 6;
        Projector proj(w, N);
        double worst = 0.0, worst_sym = 0.0, worst_dual = 0.0;
        for (int trial = 0; trial < 3; ++trial) {
            Vec x(d), y(d);
            if (is_ball(w)) {
                x = random_ball_point(rng, d).coords;
                y = random_ball_point(rng, d).coords;
            } else {
                for (;;) {
                    double s = 0.0;
                    for (double& v : x)
                        s += (v = 0.45 * ud(rng));
                    if (s <= 0.9)
                        break;
                }
                for (;;) {
                    double s = 0.0;
                    for (double& v : y)
                        s += (v = 0.45 * ud(rng));
                    if (s <= 0.9)
                        break;
                }
            }
            std::vector<double> ki, kj;
            if (is_ball(w)) {
                const BallWeight& bw = std::get<BallWeight>(w);
                ki = kernel_eval_all(N, bw, BallPoint(x), BallPoint(y), 20);
                kj = kernel_eval_all(N, bw, BallPoint(y), BallPoint(x), 20);
            } else {
                const SimplexWeight& sw = std::get<SimplexWeight>(w);
                ki = kernel_eval_simplex_all(N, sw, x, y, 20);
                kj = kernel_eval_simplex_all(N, sw, y, x, 20);
                auto ks = kernel_eval_simplex_all(N, sw, x, y, 20, SimplexKernelForm::sign_average);
                for (int n = 0; n <= N; ++n)
                    worst_dual = std::max(
                        worst_dual, std::abs(ki[n] - ks[n]) / std::max(1.0, std::abs(ki[n])));
            }
            worst = std::max(worst, std::abs(ki[0] - 1.0));
            for (int n = 0; n <= N; ++n) {
                double kb = proj.basis().kernel_from_basis(n, x, y);
                worst = std::max(worst, std::abs(ki[n] - kb) / std::max(1.0, std::abs(kb)));
                worst_sym = std::max(worst_sym, std::abs(ki[n] - kj[n]));
            }
        }
        std::string params =
            std::string(is_ball(w) ? "ball" : "simplex") + ";d=" + std::to_string(d);
        add(rec, "kernel.dual_route", params, worst, 1e-8);
        add(rec, "kernel.symmetry", params, worst_sym, 1e-9);
        if (!is_ball(w))
            add(rec, "kernel.simplex_forms", params, worst_dual, 1e-9);
    }
}

void suite_transport(const Options&, std::mt19937_64& rng, std::vector<VerifyRecord>& rec) {
    std::uniform_real_distribution<double> ud(0.0, 1.0);
    for (int d = 1; d <= 2; ++d) {
        SimplexWeight sw(d, std::vector<double>(d, 0.5), 0.5);
        BallWeight bw = sw.lifted();
        const int N = 5;
        Polynomial p = random_poly(rng, d, N);
        FunctionHandle f = p.to_function(FnDomain::simplex);
        auto sdec = project(f, Weight(sw), N);
        auto bdec = project(compose_psi(f), Weight(bw), 2 * N);
        double worst = 0.0;
        for (int trial = 0; trial < 4; ++trial) {
            double theta = std::numbers::pi * ud(rng);
            auto ts = translate_spectral(theta, sdec);
            auto tb = translate_spectral(theta, bdec);
            BallPoint x = random_ball_point(rng, d);
            Vec y = psi_map(x.coords);
            worst = std::max(worst, std::abs(ts.eval_sum(y) - tb.eval_sum(x.coords)));
        }
        add(rec, "transport.diagram", "d=" + std::to_string(d), worst, 1e-9);
        double worst_mod = 0.0;
        for (double r : {1.0, 2.0})
            for (double t : {0.3, 1.0}) {
                double a = modulus_smoothness(sdec, r, t, NormKind::l2, 32);
                double b = modulus_smoothness(bdec, r, t, NormKind::l2, 32);
                worst_mod = std::max(worst_mod, std::abs(a - b));
            }
        add(rec, "transport.modulus", "d=" + std::to_string(d), worst_mod, 1e-9);
    }
}

int cmd_verify(const Options& o, const std::string& suite) {
    static const std::vector<std::string> known{"multiplier", "contraction", "ode",      "young",
                                                "eigen",      "kernel",      "transport", "all"};
    if (std::find(known.begin(), known.end(), suite) == known.end())
        throw config_error("unknown verify suite '" + suite + "'");
    std::mt19937_64 rng(o.seed);
    std::vector<VerifyRecord> rec;
    auto want = [&](const char* s) { return suite == "all" || suite == s; };
    if (want("multiplier"))
        suite_multiplier(o, rng, rec);
    if (want("contraction"))
        suite_contraction(o, rng, rec);
    if (want("ode"))
        suite_ode(o, rng, rec);
    if (want("young"))
        suite_young(o, rng, rec);
    if (want("eigen"))
        suite_eigen(o, rng, rec);
    if (want("kernel"))
        suite_kernel(o, rng, rec);
    if (want("transport"))
        suite_transport(o, rng, rec);

    TableWriter t;
    t.columns = {"check", "params", "measured", "tolerance", "pass"};
    bool all_pass = true;
    for (const auto& r : rec) {
        t.add_row({r.check, r.params, fmt17(r.measured), fmt17(r.tolerance),
                   r.pass ? "true" : "false"});
        all_pass = all_pass && r.pass;
    }
    write_output(o, render(o, t));
    return all_pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// other subcommands
// ---------------------------------------------------------------------------

int cmd_translate(const Options& o) {
    Weight w = make_weight(o);
    if (!is_ball(w))
        throw config_error("translate: ball weights only");
    const BallWeight& bw = std::get<BallWeight>(w);
    const int d = bw.d;
    const int N = o.trunc > 0 ? o.trunc : default_truncation(d);
    if (o.path != "integral" && o.path != "spectral" && o.path != "both")
        throw config_error("translate: path must be integral, spectral or both");
    const bool want_integral = o.path == "integral" || o.path == "both";
    const bool want_spectral = o.path == "spectral" || o.path == "both";

    FunctionHandle f = make_registry_function(o.fn, FnDomain::ball, d, w);
    std::mt19937_64 rng(o.seed);
    std::vector<Vec> points;
    if (!o.x.empty()) {
        if ((int)o.x.size() != d)
            throw config_error("translate: --x needs exactly dim coordinates");
        points.push_back(o.x);
    } else {
        for (int i = 0; i < 3; ++i)
            points.push_back(random_ball_point(rng, d).coords);
    }
    std::vector<double> thetas;
    if (o.theta >= 0.0)
        thetas.push_back(o.theta);
    else
        for (int k = 0; k <= 4; ++k)
            thetas.push_back(std::numbers::pi * 0.5 * k / 4.0);

    const int ro = o.quad_radial > 0 ? o.quad_radial : 16;
    const int ao = o.quad_angular > 0 ? o.quad_angular : 16;
    std::optional<QuadratureRule> rule;
    if (want_integral)
        rule = translation_rule(bw, ro, ao); // throws capability_error for kappa != 0 / mu = 0
    std::optional<SpectralDecomposition> dec;
    if (want_spectral)
        dec = project(f, w, N);

    TableWriter t;
    t.columns = {"theta"};
    for (int i = 1; i <= d; ++i)
        t.columns.push_back("x" + std::to_string(i));
    t.columns.insert(t.columns.end(), {"value_integral", "value_spectral", "abs_diff"});
    for (double theta : thetas) {
        std::optional<SpectralDecomposition> tdec;
        if (want_spectral)
            tdec = translate_spectral(theta, *dec);
        for (const Vec& x : points) {
            double vi = 0.0, vs = 0.0;
            if (want_integral)
                vi = translate_ball_integral(theta, f, bw, BallPoint(x), *rule);
            if (want_spectral)
                vs = tdec->eval_sum(x);
            std::vector<std::string> row{fmt17(theta)};
            for (double c : x)
                row.push_back(fmt17(c));
            row.push_back(want_integral ? fmt17(vi) : "");
            row.push_back(want_spectral ? fmt17(vs) : "");
            row.push_back(want_integral && want_spectral ? fmt17(std::abs(vi - vs)) : "");
            t.add_row(std::move(row));
        }
    }
    write_output(o, render(o, t));
    return 0;
}

int cmd_kernel(const Options& o) {
    Weight w = make_weight(o);
    const int d = weight_dim(w);
    const int nmax = o.nmax > 0 ? o.nmax : 6;
    const int order = o.quad_radial > 0 ? o.quad_radial : 20;
    Projector proj(w, nmax);
    std::mt19937_64 rng(o.seed);
    std::uniform_real_distribution<double> ud(0.0, 1.0);

    TableWriter t;
    t.columns = {"n"};
    for (int i = 1; i <= d; ++i)
        t.columns.push_back("x" + std::to_string(i));
    for (int i = 1; i <= d; ++i)
        t.columns.push_back("y" + std::to_string(i));
    t.columns.insert(t.columns.end(), {"value_integral", "value_basis", "abs_diff"});

    for (int pair = 0; pair < 3; ++pair) {
        Vec x(d), y(d);
        if (is_ball(w)) {
            x = random_ball_point(rng, d).coords;
            y = random_ball_point(rng, d).coords;
        } else {
            for (;;) {
                double s = 0.0;
                for (double& v : x)
                    s += (v = 0.45 * ud(rng));
                if (s <= 0.9)
                    break;
            }
            for (;;) {
                double s = 0.0;
                for (double& v : y)
                    s += (v = 0.45 * ud(rng));
                if (s <= 0.9)
                    break;
            }
        }
        std::vector<double> ki =
            is_ball(w)
                ? kernel_eval_all(nmax, std::get<BallWeight>(w), BallPoint(x), BallPoint(y), order)
                : kernel_eval_simplex_all(nmax, std::get<SimplexWeight>(w), x, y, order);
        for (int n = 0; n <= nmax; ++n) {
            double kb = proj.basis().kernel_from_basis(n, x, y);
            std::vector<std::string> row{std::to_string(n)};
            for (double c : x)
                row.push_back(fmt17(c));
            for (double c : y)
                row.push_back(fmt17(c));
            row.push_back(fmt17(ki[n]));
            row.push_back(fmt17(kb));
            row.push_back(fmt17(std::abs(ki[n] - kb)));
            t.add_row(std::move(row));
        }
    }
    write_output(o, render(o, t));
    return 0;
}

int cmd_project(const Options& o) {
    Weight w = make_weight(o);
    const int N = o.trunc > 0 ? o.trunc : default_truncation(weight_dim(w));
    FunctionHandle f = make_registry_function(o.fn, weight_domain(w), weight_dim(w), w);
    auto dec = project(f, w, N);
    if (o.format == "json") {
        write_output(o, dec.to_json() + "\n");
        return 0;
    }
    TableWriter t;
    t.columns = {"n", "norm"};
    for (int n = 0; n <= N; ++n)
        t.add_row({std::to_string(n), fmt17(dec.norms[n])});
    write_output(o, render(o, t));
    return 0;
}

int cmd_coeffs(const Options& o) {
    const int N = o.nmax > 0 ? o.nmax : 16;
    FunctionHandle f = make_registry_function(o.fn, FnDomain::interval, 1);
    auto coeffs = gegenbauer_coeffs([&f](double t) { return f(t); }, GegenbauerParam(o.lambda), N);
    TableWriter t;
    t.columns = {"n", "coeff"};
    for (int n = 0; n <= N; ++n)
        t.add_row({std::to_string(n), fmt17(coeffs[n])});
    write_output(o, render(o, t));
    return 0;
}

int cmd_modulus(const Options& o, bool kfunc) {
    Weight w = make_weight(o);
    const int N = o.trunc > 0 ? o.trunc : default_truncation(weight_dim(w));
    FunctionHandle f = make_registry_function(o.fn, weight_domain(w), weight_dim(w), w);
    auto dec = project(f, w, N);
    const double pv = o.p_value();
    if (!std::isinf(pv) && pv != 2.0)
        throw capability_error("modulus/kfunc: p must be 2 or inf");
    NormKind p = std::isinf(pv) ? NormKind::sup : NormKind::l2;
    if (kfunc && p != NormKind::l2)
        throw capability_error("kfunc: p = 2 only");

    TableWriter t;
    t.columns = kfunc ? std::vector<std::string>{"t", "K", "sigma"}
                      : std::vector<std::string>{"t", "omega"};
    for (int k = 1; k <= 6; ++k) {
        double tt = std::pow(0.5, k);
        if (kfunc) {
            auto kf = k_functional(dec, o.r, tt);
            t.add_row({fmt17(tt), fmt17(kf.value), fmt17(kf.sigma)});
        } else {
            t.add_row({fmt17(tt), fmt17(modulus_smoothness(dec, o.r, tt, p))});
        }
    }
    write_output(o, render(o, t));
    return 0;
}

int cmd_approx_table(const Options& o) {
    Weight w = make_weight(o);
    const int nmax = o.nmax > 0 ? o.nmax : 16;
    const int N = o.trunc > 0 ? o.trunc : 2 * nmax;
    if (N < nmax + 4)
        throw config_error("approx-table: trunc must be at least nmax + 4");
    FunctionHandle f = make_registry_function(o.fn, weight_domain(w), weight_dim(w), w);
    auto dec = project(f, w, N);

    TableWriter t;
    t.columns = {"n", "E_n", "omega_r", "K_r", "ratio_direct", "ratio_inverse"};
    std::vector<double> en(nmax + 1);
    for (int n = 0; n <= nmax; ++n)
        en[n] = best_approx_error(dec, n).total();
    double direct_lo = 1e300, direct_hi = 0.0, inv_lo = 1e300, inv_hi = 0.0;
    for (int n = 1; n <= nmax; ++n) {
        double tt = 1.0 / n;
        double om = modulus_smoothness(dec, o.r, tt, NormKind::l2);
        double kf = k_functional(dec, o.r, tt).value;
        double ratio_direct = en[n] / om;
        double inv_sum = 0.0;
        for (int k = 0; k <= n; ++k)
            inv_sum += std::pow(k + 1.0, o.r - 1.0) * en[k];
        double ratio_inverse = om * std::pow((double)n, o.r) / inv_sum;
        t.add_row({std::to_string(n), fmt17(en[n]), fmt17(om), fmt17(kf), fmt17(ratio_direct),
                   fmt17(ratio_inverse)});
        if (n >= 4) {
            direct_lo = std::min(direct_lo, ratio_direct);
            direct_hi = std::max(direct_hi, ratio_direct);
            inv_lo = std::min(inv_lo, ratio_inverse);
            inv_hi = std::max(inv_hi, ratio_inverse);
        }
    }
    write_output(o, render(o, t));
    std::cerr << "fitted constants over n in [4," << nmax
              << "]: direct c = " << fmt17(std::sqrt(direct_lo * direct_hi)) << " (spread "
              << fmt17(direct_hi / direct_lo)
              << "), inverse c = " << fmt17(std::sqrt(inv_lo * inv_hi)) << " (spread "
              << fmt17(inv_hi / inv_lo) << ")\n";
    return 0;
}

int cmd_constants(const Options& o) {
    Weight w = make_weight(o);
    const double lt = weight_lambda_total(w);
    TableWriter t;
    t.columns = {"name", "value"};
    t.add_row(
        {"lambda_kappa", fmt17(std::visit([](const auto& v) { return v.lambda_kappa; }, w))});
    t.add_row({"lambda_total", fmt17(lt)});
    t.add_row({"b_lambda_total", fmt17(const_b_lambda(lt))});
    if (o.mu > 0.0) {
        t.add_row({"c_mu", fmt17(const_c_r(o.mu))});
        t.add_row({"A_mu", fmt17(const_A_mu(o.dim, o.mu))});
    }
    t.add_row({"a_kappa_mu", fmt17(weight_a_norm(w))});
    t.add_row({"c_jacobi", fmt17(const_c_alpha_beta(lt - 0.5, -0.5))});
    write_output(o, render(o, t));
    return 0;
}

// ---------------------------------------------------------------------------
// config file
// ---------------------------------------------------------------------------

void apply_config(CLI::App* sub, Options& o, const std::string& file) {
    std::ifstream f(file);
    if (!f)
        throw config_error("cannot open config file " + file);
    json j;
    try {
        f >> j;
    } catch (const std::exception& e) {
        throw config_error(std::string("config parse error: ") + e.what());
    }
    if (!j.is_object())
        throw config_error("config: top level must be an object of command sections");
    if (!j.contains(sub->get_name()))
        return;
    const json& s = j[sub->get_name()];
    auto unset = [&](const char* flag) {
        CLI::Option* opt = sub->get_option_no_throw(flag);
        return opt && opt->count() == 0;
    };
    auto num = [&](const char* key, auto& field, const char* flag) {
        if (s.contains(key) && unset(flag))
            field = s[key];
    };
    num("dim", o.dim, "--dim");
    num("mu", o.mu, "--mu");
    num("theta", o.theta, "--theta");
    num("degree", o.degree, "--degree");
    num("nmax", o.nmax, "--nmax");
    num("trunc", o.trunc, "--trunc");
    num("quad-radial", o.quad_radial, "--quad-radial");
    num("quad-angular", o.quad_angular, "--quad-angular");
    num("r", o.r, "--r");
    num("lambda", o.lambda, "--lambda");
    num("seed", o.seed, "--seed");
    num("threads", o.threads, "--threads");
    num("fn", o.fn, "--fn");
    num("domain", o.domain, "--domain");
    num("p", o.p, "--p");
    num("path", o.path, "--path");
    num("out", o.out, "--out");
    num("format", o.format, "--format");
    if (s.contains("kappa") && unset("--kappa"))
        o.kappa = s["kappa"].get<std::vector<double>>();
    if (s.contains("x") && unset("--x"))
        o.x = s["x"].get<std::vector<double>>();
    for (auto it = s.begin(); it != s.end(); ++it) {
        static const std::vector<std::string> keys{
            "dim",  "mu",     "theta",  "degree", "nmax",   "trunc", "quad-radial",
            "quad-angular",   "r",      "lambda", "seed",   "threads", "fn",
            "domain", "p",    "path",   "out",    "format", "kappa", "x"};
        if (std::find(keys.begin(), keys.end(), it.key()) == keys.end())
            throw config_error("config: unknown option '" + it.key() + "'");
    }
}

} // namespace

std::string canonical_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw config_error(std::string("config parse error: ") + e.what());
    }
    return j.dump(2); // nlohmann::json keeps object keys sorted
}

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"weighted orthogonal expansions on the ball and simplex: translations, "
                 "convolutions, moduli of smoothness"};
    app.require_subcommand(0, 1);
    Options o;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--dim", o.dim, "dimension d");
        sub->add_option("--kappa", o.kappa, "Z_2^d exponents (comma list)")->delimiter(',');
        sub->add_option("--mu", o.mu, "boundary exponent mu");
        sub->add_option("--theta", o.theta, "translation angle");
        sub->add_option("--degree", o.degree, "polynomial degree");
        sub->add_option("--nmax", o.nmax, "maximum degree in sweeps");
        sub->add_option("--trunc", o.trunc, "truncation N");
        sub->add_option("--quad-radial", o.quad_radial, "radial quadrature order");
        sub->add_option("--quad-angular", o.quad_angular, "angular quadrature level");
        sub->add_option("--fn", o.fn, "registry function name");
        sub->add_option("--domain", o.domain, "ball | simplex");
        sub->add_option("--p", o.p, "norm exponent (2 or inf)");
        sub->add_option("--r", o.r, "smoothness order r");
        sub->add_option("--lambda", o.lambda, "Gegenbauer index (coeffs)");
        sub->add_option("--path", o.path, "integral | spectral | both");
        sub->add_option("--x", o.x, "evaluation point (comma list)")->delimiter(',');
        sub->add_option("--out", o.out, "output file (default stdout)");
        sub->add_option("--format", o.format, "csv | json");
        sub->add_option("--seed", o.seed, "random seed");
        sub->add_option("--threads", o.threads, "worker threads");
        sub->add_option("--config", o.config_file, "JSON config file");
    };

    std::string suite;
    CLI::App* verify = app.add_subcommand("verify", "run a verification suite");
    verify->add_option("suite", suite,
                       "multiplier|contraction|ode|young|eigen|kernel|transport|all")
        ->required();
    add_common(verify);
    CLI::App* translate = app.add_subcommand("translate", "translation operator table");
    add_common(translate);
    CLI::App* kernel = app.add_subcommand("kernel", "reproducing kernel table");
    add_common(kernel);
    CLI::App* projectc = app.add_subcommand("project", "spectral decomposition");
    add_common(projectc);
    CLI::App* coeffs = app.add_subcommand("coeffs", "Gegenbauer coefficients");
    add_common(coeffs);
    CLI::App* modulus = app.add_subcommand("modulus", "modulus of smoothness table");
    add_common(modulus);
    CLI::App* kfunc = app.add_subcommand("kfunc", "K-functional table");
    add_common(kfunc);
    CLI::App* approx = app.add_subcommand("approx-table", "direct/inverse approximation table");
    add_common(approx);
    CLI::App* constants = app.add_subcommand("constants", "normalization constants");
    add_common(constants);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        CLI::App* active = nullptr;
        for (CLI::App* sub :
             {verify, translate, kernel, projectc, coeffs, modulus, kfunc, approx, constants})
            if (sub->parsed())
                active = sub;
        if (!active) {
            std::cerr << app.help();
            return 2;
        }
        if (!o.config_file.empty())
            apply_config(active, o, o.config_file);
        set_thread_count(o.threads);

        if (active == verify)
            return cmd_verify(o, suite);
        if (active == translate)
            return cmd_translate(o);
        if (active == kernel)
            return cmd_kernel(o);
        if (active == projectc)
            return cmd_project(o);
        if (active == coeffs)
            return cmd_coeffs(o);
        if (active == modulus)
            return cmd_modulus(o, false);
        if (active == kfunc)
            return cmd_modulus(o, true);
        if (active == approx)
            return cmd_approx_table(o);
        if (active == constants)
            return cmd_constants(o);
        return 2;
    } catch (const config_error& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const capability_error& e) {
        std::cerr << "capability error: " << e.what() << "\n";
        return 2;
    } catch (const parameter_error& e) {
        std::cerr << "parameter error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace transops
