// CLI behavior tests: exit codes, schema conformance of outputs, config
// round-trip, reproducibility. argv[1] = CLI binary, argv[2] = schemas dir.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "transops/cli.hpp"
#include "transops/quadrature.hpp"

using nlohmann::json;

namespace {

int g_failures = 0;
std::string g_cli, g_schemas;

void check(bool ok, const std::string& what) {
    if (!ok) {
        std::cerr << "FAIL: " << what << "\n";
        ++g_failures;
    }
}

struct RunResult {
    int exit_code;
    std::string out;
};

RunResult run(const std::string& args) {
    std::string tmp = "/tmp/transops_cli_test_" + std::to_string(::getpid()) + ".out";
    std::string cmd = g_cli + " " + args + " > " + tmp + " 2>/dev/null";
    int rc = std::system(cmd.c_str());
    std::ifstream f(tmp, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    std::remove(tmp.c_str());
    return {WEXITSTATUS(rc), ss.str()};
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep))
        out.push_back(item);
    return out;
}

json load_schema(const std::string& name) {
    std::ifstream f(g_schemas + "/" + name);
    check((bool)f, "schema file " + name + " present");
    json j;
    f >> j;
    return j;
}

void check_columns(const std::string& csv, const std::string& schema_name) {
    json schema = load_schema(schema_name);
    auto lines = split(csv, '\n');
    check(!lines.empty(), schema_name + ": output nonempty");
    auto cols = split(lines[0], ',');
    std::vector<std::string> expected;
    for (const auto& c : schema["columns"])
        expected.push_back(c.get<std::string>());
    check(cols == expected, schema_name + ": header matches schema columns");
}

} // namespace

int main(int argc, char** argv) {
    g_cli = argc > 1 ? argv[1] : "./transops";
    g_schemas = argc > 2 ? argv[2] : "schemas";

    // exit codes
    check(run("verify eigen --dim 1 --mu 0.5").exit_code == 0, "verify eigen exits 0");
    check(run("verify bogus").exit_code == 2, "unknown suite exits 2");
    check(run("verify").exit_code == 2, "missing suite exits 2");
    check(run("translate --dim 2 --kappa 0.5,0.5 --path integral").exit_code == 2,
          "integral translation with nonzero kappa exits 2");
    check(run("translate --dim 2 --mu 0").exit_code == 2,
          "integral translation with mu = 0 exits 2");
    check(run("modulus --p 3").exit_code == 2, "unsupported p exits 2");
    check(run("constants --mu -1").exit_code == 2, "invalid weight exits 2");

    // CSV schemas
    check_columns(run("verify eigen --dim 1 --mu 0.5").out, "verify.schema.json");
    check_columns(run("constants --dim 2 --mu 0.5").out, "constants.schema.json");
    check_columns(run("coeffs --fn abs-power:1 --lambda 1.5 --nmax 4").out, "coeffs.schema.json");
    check_columns(run("modulus --dim 1 --mu 1 --fn gaussian:1 --trunc 8").out,
                  "modulus.schema.json");
    check_columns(run("kfunc --dim 1 --mu 1 --fn gaussian:1 --trunc 8").out, "kfunc.schema.json");
    check_columns(run("project --dim 1 --mu 1 --fn gaussian:1 --trunc 6").out,
                  "project_norms.schema.json");
    // golden 6-column approx table header
    {
        auto res = run("approx-table --dim 1 --mu 1 --fn absnorm --nmax 6 --trunc 16");
        check(res.exit_code == 0, "approx-table exits 0");
        auto lines = split(res.out, '\n');
        check(!lines.empty() && lines[0] == "n,E_n,omega_r,K_r,ratio_direct,ratio_inverse",
              "approx-table has exactly the documented 6 columns");
        check_columns(res.out, "approx_table.schema.json");
    }
    // dim-dependent translate/kernel headers
    {
        auto res = run("translate --dim 2 --mu 1 --fn gaussian:1 --theta 0 --x 0.2,0.3");
        check(res.exit_code == 0, "translate exits 0");
        auto lines = split(res.out, '\n');
        check(lines.size() >= 2, "translate emits a row");
        check(lines[0] == "theta,x1,x2,value_integral,value_spectral,abs_diff",
              "translate header matches schema pattern");
        auto row = split(lines[1], ',');
        // theta = 0: value_integral = f(x) and abs_diff small
        double vi = std::stod(row[3]);
        double f = std::exp(-(0.2 * 0.2 + 0.3 * 0.3));
        check(std::abs(vi - f) <= 1e-9, "theta=0 integral value equals f(x)");
        check(std::stod(row[5]) <= 1e-9, "theta=0 paths agree");
    }
    {
        auto res = run("kernel --dim 1 --mu 1 --nmax 3");
        auto lines = split(res.out, '\n');
        check(res.exit_code == 0 && !lines.empty() &&
                  lines[0] == "n,x1,y1,value_integral,value_basis,abs_diff",
              "kernel header matches schema pattern");
    }

    // JSON formats
    {
        auto res = run("verify eigen --dim 1 --mu 0.5 --format json");
        check(res.exit_code == 0, "verify json exits 0");
        for (const auto& line : split(res.out, '\n')) {
            if (line.empty())
                continue;
            json j = json::parse(line);
            for (const char* k : {"check", "params", "measured", "tolerance", "pass"})
                check(j.contains(k), std::string("verify json record has ") + k);
        }
    }
    {
        auto res = run("project --dim 1 --mu 1 --fn gaussian:1 --trunc 6 --format json");
        json j = json::parse(res.out);
        json schema = load_schema("decomposition.schema.json");
        for (const auto& k : schema["required"])
            check(j.contains(k.get<std::string>()),
                  "decomposition json has " + k.get<std::string>());
        check((int)j["node_values"].size() == 7, "decomposition has N+1 component arrays");
    }
    {
        json schema = load_schema("quadrature_rule.schema.json");
        json j = json::parse(
            transops::gauss_jacobi_rule(4, transops::JacobiParam(0.5, -0.5)).to_json());
        for (const auto& k : schema["required"])
            check(j.contains(k.get<std::string>()), "rule json has " + k.get<std::string>());
    }

    // config file: values fill in, flags win, round-trip is canonical
    {
        std::string cfg = "/tmp/transops_cli_cfg_" + std::to_string(::getpid()) + ".json";
        {
            std::ofstream f(cfg);
            f << R"({"coeffs": {"nmax": 3, "fn": "abs-power:1", "lambda": 1.5}})";
        }
        auto res = run("coeffs --config " + cfg);
        auto lines = split(res.out, '\n');
        check(res.exit_code == 0 && lines.size() == 1 + 4, "config supplies nmax=3");
        auto res2 = run("coeffs --config " + cfg + " --nmax 5");
        check(res2.exit_code == 0 && split(res2.out, '\n').size() == 1 + 6,
              "command line overrides config");
        {
            std::ofstream f(cfg);
            f << R"({"coeffs": {"bogus": 1}})";
        }
        check(run("coeffs --config " + cfg).exit_code == 2, "unknown config key exits 2");
        std::remove(cfg.c_str());

        std::string canon = transops::canonical_config(
            R"({"verify": {"mu": 0.50, "dim": 2}, "coeffs": {"nmax": 3}})");
        check(transops::canonical_config(canon) == canon, "canonical config is idempotent");
        check(canon.find("\"coeffs\"") < canon.find("\"verify\""), "canonical keys sorted");
    }

    // reproducibility across seeds fixed / thread counts
    {
        auto a = run("translate --dim 2 --mu 1 --fn absnorm --seed 7 --threads 1");
        auto b = run("translate --dim 2 --mu 1 --fn absnorm --seed 7 --threads 4");
        check(!a.out.empty() && a.out == b.out, "translate output identical across thread counts");
    }

    if (g_failures) {
        std::cerr << g_failures << " CLI check(s) failed\n";
        return 1;
    }
    std::puts("all CLI checks passed");
    return 0;
}
