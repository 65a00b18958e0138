#include "transops/registry.hpp"

#include <cmath>
#include <sstream>

namespace transops {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep))
        out.push_back(item);
    return out;
}

double parse_num(const std::string& s, const std::string& what) {
    try {
        size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size())
            throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw parameter_error("registry: bad number '" + s + "' in " + what);
    }
}

// radial coordinate: |x| on the ball (and |t| on the interval), the lifted
// |y|_1^(1/2) on the simplex so that f_T o psi = f_B.
double radial(FnDomain dom, std::span<const double> x) {
    if (dom == FnDomain::simplex) {
        double s = 0.0;
        for (double v : x)
            s += v;
        return std::sqrt(std::max(0.0, s));
    }
    double s = 0.0;
    for (double v : x)
        s += v * v;
    return std::sqrt(s);
}

} // namespace

FunctionRegistryEntry registry_entry(const std::string& spec, FnDomain domain) {
    auto parts = split(spec, ':');
    if (parts.empty())
        throw parameter_error("registry: empty function name");
    const std::string& head = parts[0];
    if (head == "absnorm")
        return {spec, domain, "lipschitz"};
    if (head == "abs-power") {
        double a = parts.size() > 1 ? parse_num(parts[1], spec) : 1.0;
        return {spec, domain, a >= 1.0 ? "holder:" + parts[1] : "holder-weak:" + parts[1]};
    }
    if (head == "gaussian")
        return {spec, domain, "analytic"};
    if (head == "cusp")
        return {spec, domain, "lipschitz"};
    if (head == "ridge")
        return {spec, domain, "polynomial"};
    if (head == "const")
        return {spec, domain, "polynomial"};
    throw parameter_error("registry: unknown function '" + spec + "'");
}

FunctionHandle make_registry_function(const std::string& spec, FnDomain domain, int dim,
                                      const std::optional<Weight>& weight) {
    auto parts = split(spec, ':');
    if (parts.empty())
        throw parameter_error("registry: empty function name");
    const std::string& head = parts[0];

    if (head == "const") {
        double c = parts.size() > 1 ? parse_num(parts[1], spec) : 1.0;
        return constant_fn(domain, dim, c);
    }
    if (head == "absnorm")
        return FunctionHandle(domain, dim,
                              [domain](std::span<const double> x) { return radial(domain, x); },
                              spec);
    if (head == "abs-power") {
        if (parts.size() < 2)
            throw parameter_error("registry: abs-power needs an exponent");
        double a = parse_num(parts[1], spec);
        return FunctionHandle(domain, dim,
                              [domain, a](std::span<const double> x) {
                                  return std::pow(radial(domain, x), a);
                              },
                              spec);
    }
    if (head == "gaussian") {
        double c = parts.size() > 1 ? parse_num(parts[1], spec) : 1.0;
        return FunctionHandle(domain, dim,
                              [domain, c](std::span<const double> x) {
                                  double r = radial(domain, x);
                                  return std::exp(-c * r * r);
                              },
                              spec);
    }
    if (head == "cusp") {
        double x0 = parts.size() > 1 ? parse_num(parts[1], spec) : 0.0;
        return FunctionHandle(domain, dim,
                              [x0](std::span<const double> x) { return std::abs(x[0] - x0); },
                              spec);
    }
    if (head == "ridge") {
        if (domain != FnDomain::ball)
            throw capability_error("registry: ridge functions are defined on the ball");
        if (parts.size() < 2)
            throw parameter_error("registry: ridge needs a degree");
        int n = (int)parse_num(parts[1], spec);
        if (n < 0)
            throw parameter_error("registry: ridge degree must be >= 0");
        if (!weight)
            throw parameter_error("registry: ridge needs a weight for its Gegenbauer index");
        const double lam = weight_lambda_total(*weight);
        std::vector<double> y(dim, 0.0);
        if (parts.size() > 2) {
            auto comps = split(parts[2], ',');
            if ((int)comps.size() != dim)
                throw parameter_error("registry: ridge direction size mismatch");
            for (int i = 0; i < dim; ++i)
                y[i] = parse_num(comps[i], spec);
        } else {
            y[0] = 1.0;
        }
        double ny = 0.0;
        for (double v : y)
            ny += v * v;
        if (!(ny > 0.0))
            throw parameter_error("registry: ridge direction must be nonzero");
        for (double& v : y)
            v /= std::sqrt(ny);
        GegenbauerParam gp(lam);
        return FunctionHandle(domain, dim,
                              [n, gp, y](std::span<const double> x) {
                                  double t = 0.0;
                                  for (size_t i = 0; i < y.size(); ++i)
                                      t += x[i] * y[i];
                                  return gegenbauer_eval(n, gp, std::clamp(t, -1.0, 1.0));
                              },
                              spec);
    }
    throw parameter_error("registry: unknown function '" + spec + "'");
}

std::vector<std::string> registry_names() {
    return {"absnorm", "abs-power:<a>", "gaussian:<c>", "cusp:<x0>", "ridge:<n>[:<y>]", "const[:<c>]"};
}

} // namespace transops
