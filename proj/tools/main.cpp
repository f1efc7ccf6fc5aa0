#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "toric/asymptotics.hpp"
#include "toric/curvature.hpp"
#include "toric/io.hpp"
#include "toric/lemma_suite.hpp"
#include "toric/parallel.hpp"
#include "toric/sections.hpp"

using nlohmann::json;

namespace {

struct CommonArgs {
    std::string config;
    std::string out;
    int threads = 0;
    bool verbose = false;
};

void attach_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config, "JSON problem description")
        ->required();
    cmd->add_option("--out", args.out,
                    "write the JSON report to this file instead of stdout");
    cmd->add_option("--threads", args.threads,
                    "worker thread cap (0 = all cores)");
    cmd->add_flag("--verbose", args.verbose, "progress notes on stderr");
}

json vector_json(const Eigen::VectorXd& v) {
    json a = json::array();
    for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

Eigen::VectorXd point_from(const json& cfg, const std::string& key, int dim) {
    if (!cfg.contains(key) || !cfg[key].is_array() ||
        static_cast<int>(cfg[key].size()) != dim)
        throw std::invalid_argument("config needs a numeric array '" + key +
                                    "' of length " + std::to_string(dim));
    Eigen::VectorXd p(dim);
    for (int i = 0; i < dim; ++i) {
        if (!cfg[key][i].is_number())
            throw std::invalid_argument("'" + key + "' entries must be numbers");
        p[i] = cfg[key][i].get<double>();
    }
    return p;
}

std::vector<int> powers_from(const json& cfg) {
    if (!cfg.contains("powers") || !cfg["powers"].is_array() ||
        cfg["powers"].empty())
        throw std::invalid_argument(
            "config needs a nonempty integer array 'powers'");
    std::vector<int> Ns;
    for (const auto& e : cfg["powers"]) {
        if (!e.is_number_integer())
            throw std::invalid_argument("'powers' entries must be integers");
        Ns.push_back(e.get<int>());
    }
    return Ns;
}

toric::QuadratureSpec quad_from(const json& cfg) {
    toric::QuadratureSpec spec;
    if (!cfg.contains("quadrature")) return spec;
    const json& q = cfg["quadrature"];
    if (!q.is_object())
        throw std::invalid_argument("'quadrature' must be an object");
    if (q.contains("rel_tol")) spec.rel_tol = q["rel_tol"].get<double>();
    if (q.contains("base_cells")) spec.base_cells = q["base_cells"].get<int>();
    if (q.contains("max_depth")) spec.max_depth = q["max_depth"].get<int>();
    if (q.contains("max_cells")) spec.max_cells = q["max_cells"].get<long>();
    return spec;
}

toric::SymplecticPotential load_potential(const json& cfg, bool verbose) {
    toric::SymplecticPotential pot = toric::io::potential_from_json(cfg);
    toric::ValidationReport report = pot.validate(9);
    if (verbose) std::cerr << report.summary();
    if (!report.passed())
        throw std::runtime_error("potential validation failed:\n" +
                                 report.summary());
    return pot;
}

int fit_terms_from(const json& cfg) {
    int terms = 2;
    if (cfg.contains("fit_terms")) {
        if (!cfg["fit_terms"].is_number_integer())
            throw std::invalid_argument("'fit_terms' must be an integer");
        terms = cfg["fit_terms"].get<int>();
    }
    return terms;
}

json fit_json(const toric::ExpansionFit& fit) {
    json f;
    f["exponents"] = fit.exponents;
    f["coefficients"] = fit.coefficients;
    f["residual"] = fit.residual;
    f["well_conditioned"] = fit.well_conditioned;
    return f;
}

json run_curvature(const json& cfg, bool verbose, int& code) {
    toric::SymplecticPotential pot = load_potential(cfg, verbose);
    const auto& poly = pot.polytope();
    const int n = poly.dim();

    std::vector<Eigen::VectorXd> points;
    if (cfg.contains("points")) {
        if (!cfg["points"].is_array() || cfg["points"].empty())
            throw std::invalid_argument("'points' must be a nonempty array");
        for (size_t k = 0; k < cfg["points"].size(); ++k) {
            json wrap;
            wrap["p"] = cfg["points"][k];
            Eigen::VectorXd p = point_from(wrap, "p", n);
            if (!poly.strictly_inside(p))
                throw std::invalid_argument(
                    "curvature point " + std::to_string(k) +
                    " is not strictly inside the polytope");
            points.push_back(std::move(p));
        }
    } else {
        int grid = 5;
        if (cfg.contains("grid")) grid = cfg["grid"].get<int>();
        if (grid < 1) throw std::invalid_argument("'grid' must be >= 1");
        auto [lo, hi] = poly.bounding_box();
        std::vector<int> idx(n, 0);
        Eigen::VectorXd y(n);
        for (;;) {
            for (int j = 0; j < n; ++j)
                y[j] = lo[j] + (idx[j] + 0.5) / grid * (hi[j] - lo[j]);
            if (poly.strictly_inside(y)) points.push_back(y);
            int axis = 0;
            while (axis < n) {
                if (++idx[axis] < grid) break;
                idx[axis] = 0;
                ++axis;
            }
            if (axis == n) break;
        }
        if (points.empty())
            throw std::runtime_error("no interior grid points found");
    }

    json report;
    report["command"] = "curvature";
    report["dim"] = n;
    json jpoints = json::array(), jscalar = json::array();
    double mn = 0.0, mx = 0.0, mean = 0.0;
    for (size_t k = 0; k < points.size(); ++k) {
        double s = toric::abreu_scalar(pot, points[k]);
        if (verbose)
            std::cerr << "scalar[" << k << "] = " << s << "\n";
        jpoints.push_back(vector_json(points[k]));
        jscalar.push_back(s);
        mean += s;
        mn = k == 0 ? s : std::min(mn, s);
        mx = k == 0 ? s : std::max(mx, s);
    }
    mean /= static_cast<double>(points.size());
    report["points"] = jpoints;
    report["scalar"] = jscalar;
    report["mean"] = mean;
    report["min"] = mn;
    report["max"] = mx;

    bool check_oracle = cfg.contains("check_oracle") &&
                        cfg["check_oracle"].is_boolean() &&
                        cfg["check_oracle"].get<bool>();
    if (check_oracle) {
        double rel_tol = 0.02;
        if (cfg.contains("oracle_rel_tol"))
            rel_tol = cfg["oracle_rel_tol"].get<double>();
        json joracle = json::array(), jratio = json::array();
        double rmin = 0.0, rmax = 0.0, rmean = 0.0;
        for (size_t k = 0; k < points.size(); ++k) {
            double o = toric::riemann_scalar_oracle(pot, points[k]);
            double r = o / jscalar[k].get<double>();
            joracle.push_back(o);
            jratio.push_back(r);
            rmean += r;
            rmin = k == 0 ? r : std::min(rmin, r);
            rmax = k == 0 ? r : std::max(rmax, r);
        }
        rmean /= static_cast<double>(points.size());
        report["oracle"] = joracle;
        report["ratio"] = jratio;
        report["ratio_mean"] = rmean;
        bool ok = rmax - rmin <= rel_tol * std::abs(rmean);
        report["ratio_consistent"] = ok;
        if (!ok) code = 1;
    }
    return report;
}

json run_tyz(const json& cfg, bool verbose, int& code) {
    toric::SymplecticPotential pot = load_potential(cfg, verbose);
    const int n = pot.dim();
    Eigen::VectorXd y = point_from(cfg, "point", n);
    if (!pot.polytope().strictly_inside(y))
        throw std::invalid_argument("'point' is not strictly inside the polytope");
    std::vector<int> Ns = powers_from(cfg);
    int terms = fit_terms_from(cfg);
    toric::QuadratureSpec spec = quad_from(cfg);

    std::vector<double> rho;
    for (int N : Ns) {
        toric::SectionFamily family(pot, N, spec);
        rho.push_back(family.density_of_states(y));
        if (verbose)
            std::cerr << "rho_" << N << " = " << rho.back() << "\n";
    }
    std::vector<int> exponents = {n, n - 1};
    if (terms == 3) exponents.push_back(n - 2);
    toric::ExpansionFit fit = toric::fit_power_series(Ns, rho, exponents);
    double ratio = fit.coefficients[1] / fit.coefficients[0];
    double scalar = toric::abreu_scalar(pot, y);

    json report;
    report["command"] = "tyz";
    report["point"] = vector_json(y);
    report["powers"] = Ns;
    report["rho"] = rho;
    report["fit"] = fit_json(fit);
    report["ratio"] = ratio;
    report["abreu_scalar"] = scalar;
    report["expected_ratio"] = 0.5 * scalar;
    double rel_err = std::abs(ratio - 0.5 * scalar) /
                     std::max(std::abs(0.5 * scalar), 1e-300);
    report["rel_error"] = rel_err;
    if (cfg.contains("rel_tol")) {
        double tol = cfg["rel_tol"].get<double>();
        report["within_tol"] = rel_err <= tol;
        if (rel_err > tol) code = 1;
    }
    return report;
}

json run_measure(const json& cfg, bool verbose, int& code) {
    toric::SymplecticPotential pot = load_potential(cfg, verbose);
    const int n = pot.dim();
    if (!cfg.contains("test_function"))
        throw std::invalid_argument("config needs a 'test_function' block");
    auto psi = toric::io::test_function_from_json(cfg["test_function"], n);
    std::vector<int> Ns = powers_from(cfg);
    int terms = fit_terms_from(cfg);
    toric::QuadratureSpec spec = quad_from(cfg);

    std::vector<double> values;
    for (int N : Ns) {
        toric::SectionFamily family(pot, N, spec);
        values.push_back(family.measure_apply(*psi));
        if (verbose)
            std::cerr << "v_" << N << " = " << values.back() << "\n";
    }
    std::vector<int> exponents = {n, n - 1};
    if (terms == 3) exponents.push_back(n - 2);
    toric::ExpansionFit fit = toric::fit_power_series(Ns, values, exponents);

    toric::ScalarField psi_field = [&](const Eigen::VectorXd& p) {
        return psi->value(p);
    };
    double volume_term = toric::integrate(pot.polytope(), psi_field, spec).value;
    double subleading = toric::measure_subleading_target(pot, *psi, spec);

    json report;
    report["command"] = "measure";
    report["powers"] = Ns;
    report["values"] = values;
    report["fit"] = fit_json(fit);
    report["target_leading"] = volume_term;
    report["target_subleading"] = subleading;
    double err0 = std::abs(fit.coefficients[0] - volume_term) /
                  std::max(std::abs(volume_term), 1e-300);
    double err1 = std::abs(fit.coefficients[1] - subleading) /
                  std::max(std::abs(subleading), 1e-300);
    report["rel_error_leading"] = err0;
    report["rel_error_subleading"] = err1;
    if (cfg.contains("rel_tol")) {
        double tol = cfg["rel_tol"].get<double>();
        bool ok = err0 <= tol && err1 <= tol;
        report["within_tol"] = ok;
        if (!ok) code = 1;
    }
    return report;
}

json run_lemmas(const json& cfg, bool verbose, int& code) {
    toric::SymplecticPotential pot = load_potential(cfg, verbose);
    toric::LemmaSuiteConfig lemma_cfg;
    if (cfg.contains("samples")) lemma_cfg.samples = cfg["samples"].get<int>();
    if (cfg.contains("seed")) lemma_cfg.seed = cfg["seed"].get<unsigned>();
    if (cfg.contains("grid")) lemma_cfg.grid = cfg["grid"].get<int>();
    toric::LemmaSuiteResult suite = toric::run_lemma_suite(pot, lemma_cfg);

    json cases = json::array();
    for (const auto& c : suite.cases) {
        json jc;
        jc["lemma"] = c.lemma;
        jc["point"] = vector_json(c.point);
        jc["passed"] = c.passed;
        jc["metric"] = c.metric;
        if (!c.detail.empty()) jc["detail"] = c.detail;
        cases.push_back(std::move(jc));
        if (verbose && !c.passed)
            std::cerr << "lemma failure: " << c.lemma << "\n";
    }
    json report;
    report["command"] = "lemmas";
    report["cases"] = cases;
    report["total"] = static_cast<int>(suite.cases.size());
    report["failures"] = suite.failures();
    report["all_passed"] = suite.all_passed();
    if (!suite.all_passed()) code = 1;
    return report;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectral asymptotics of toric Kahler manifolds"};
    app.require_subcommand(1);
    CommonArgs args;
    CLI::App* cmd_curvature = app.add_subcommand(
        "curvature", "scalar curvature from the symplectic potential");
    CLI::App* cmd_tyz = app.add_subcommand(
        "tyz", "density-of-states expansion at an interior point");
    CLI::App* cmd_measure = app.add_subcommand(
        "measure", "spectral measure expansion against a test function");
    CLI::App* cmd_lemmas = app.add_subcommand(
        "lemmas", "verify the structural lemmas behind the expansion");
    for (CLI::App* cmd : {cmd_curvature, cmd_tyz, cmd_measure, cmd_lemmas})
        attach_common(cmd, args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    toric::set_max_threads(args.threads);

    int code = 0;
    json report;
    try {
        json cfg = toric::io::load_json_file(args.config);
        if (cmd_curvature->parsed())
            report = run_curvature(cfg, args.verbose, code);
        else if (cmd_tyz->parsed())
            report = run_tyz(cfg, args.verbose, code);
        else if (cmd_measure->parsed())
            report = run_measure(cfg, args.verbose, code);
        else
            report = run_lemmas(cfg, args.verbose, code);
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::out_of_range& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    std::string text = report.dump(2);
    text += "\n";
    if (!args.out.empty()) {
        std::ofstream out(args.out);
        if (!out) {
            std::cerr << "input error: cannot write " << args.out << "\n";
            return 2;
        }
        out << text;
    } else {
        std::cout << text;
    }
    return code;
}
