#include "toric/io.hpp"

#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace toric::io {

namespace {

using nlohmann::json;

int require_int(const json& j, const std::string& key, const std::string& ctx) {
    if (!j.contains(key) || !j[key].is_number_integer())
        throw std::invalid_argument(ctx + ": missing integer field '" + key + "'");
    return j[key].get<int>();
}

Eigen::VectorXi int_vector(const json& j, const std::string& key, int dim,
                           const std::string& ctx) {
    if (!j.contains(key) || !j[key].is_array())
        throw std::invalid_argument(ctx + ": missing array field '" + key + "'");
    const json& arr = j[key];
    if (static_cast<int>(arr.size()) != dim)
        throw std::invalid_argument(ctx + ": '" + key + "' must have " +
                                    std::to_string(dim) + " entries");
    Eigen::VectorXi v(dim);
    for (int k = 0; k < dim; ++k) {
        if (!arr[k].is_number_integer())
            throw std::invalid_argument(ctx + ": '" + key +
                                        "' entries must be integers");
        v[k] = arr[k].get<int>();
    }
    return v;
}

Eigen::VectorXd real_vector(const json& j, const std::string& key, int dim,
                            const std::string& ctx) {
    if (!j.contains(key) || !j[key].is_array())
        throw std::invalid_argument(ctx + ": missing array field '" + key + "'");
    const json& arr = j[key];
    if (static_cast<int>(arr.size()) != dim)
        throw std::invalid_argument(ctx + ": '" + key + "' must have " +
                                    std::to_string(dim) + " entries");
    Eigen::VectorXd v(dim);
    for (int k = 0; k < dim; ++k) {
        if (!arr[k].is_number())
            throw std::invalid_argument(ctx + ": '" + key +
                                        "' entries must be numbers");
        v[k] = arr[k].get<double>();
    }
    return v;
}

}  // namespace

DelzantPolytope polytope_from_json(const json& spec) {
    if (!spec.is_object())
        throw std::invalid_argument("polytope spec must be a JSON object");
    int dim = require_int(spec, "dim", "polytope");
    if (dim < 1) throw std::invalid_argument("polytope: dim must be >= 1");
    if (!spec.contains("facets") || !spec["facets"].is_array())
        throw std::invalid_argument("polytope: missing 'facets' array");

    std::vector<Facet> facets;
    int index = 0;
    for (const json& fj : spec["facets"]) {
        std::string ctx = "facet " + std::to_string(index);
        if (!fj.is_object())
            throw std::invalid_argument(ctx + ": must be an object");
        Facet f;
        f.normal = int_vector(fj, "normal", dim, ctx);
        if (!fj.contains("offset") || !fj["offset"].is_number_integer())
            throw std::invalid_argument(ctx + ": missing integer field 'offset'");
        f.offset = fj["offset"].get<long long>();
        facets.push_back(std::move(f));
        ++index;
    }
    return DelzantPolytope(dim, facets);
}

Perturbation perturbation_from_json(const json& spec, int dim) {
    if (!spec.is_array())
        throw std::invalid_argument("perturbation must be an array of terms");
    std::vector<Monomial> terms;
    int index = 0;
    for (const json& tj : spec) {
        std::string ctx = "perturbation term " + std::to_string(index);
        if (!tj.is_object())
            throw std::invalid_argument(ctx + ": must be an object");
        Monomial m;
        m.exponents = int_vector(tj, "exponents", dim, ctx);
        if (!tj.contains("coeff") || !tj["coeff"].is_number())
            throw std::invalid_argument(ctx + ": missing numeric field 'coeff'");
        m.coeff = tj["coeff"].get<double>();
        terms.push_back(std::move(m));
        ++index;
    }
    return Perturbation(std::move(terms), dim);
}

SymplecticPotential potential_from_json(const json& spec) {
    DelzantPolytope poly = polytope_from_json(spec);
    Perturbation pert;
    if (spec.contains("perturbation"))
        pert = perturbation_from_json(spec["perturbation"], poly.dim());
    return SymplecticPotential(poly, std::move(pert));
}

std::unique_ptr<TestFunction> test_function_from_json(const json& spec,
                                                      int dim) {
    if (!spec.is_object() || !spec.contains("kind") ||
        !spec["kind"].is_string())
        throw std::invalid_argument(
            "test function spec needs a string field 'kind'");
    std::string kind = spec["kind"].get<std::string>();
    if (kind == "constant") {
        if (!spec.contains("value") || !spec["value"].is_number())
            throw std::invalid_argument(
                "constant test function: missing numeric 'value'");
        return std::make_unique<ConstantFunction>(spec["value"].get<double>(),
                                                  dim);
    }
    if (kind == "bump") {
        Eigen::VectorXd center =
            real_vector(spec, "center", dim, "bump test function");
        if (!spec.contains("radius") || !spec["radius"].is_number())
            throw std::invalid_argument(
                "bump test function: missing numeric 'radius'");
        double scale = 1.0;
        if (spec.contains("scale")) {
            if (!spec["scale"].is_number())
                throw std::invalid_argument(
                    "bump test function: 'scale' must be numeric");
            scale = spec["scale"].get<double>();
        }
        return std::make_unique<BumpFunction>(center,
                                              spec["radius"].get<double>(),
                                              scale);
    }
    if (kind == "polynomial") {
        if (!spec.contains("terms"))
            throw std::invalid_argument(
                "polynomial test function: missing 'terms'");
        Perturbation p = perturbation_from_json(spec["terms"], dim);
        std::vector<Monomial> terms = p.terms();
        return std::make_unique<PolynomialFunction>(std::move(terms), dim);
    }
    throw std::invalid_argument("unknown test function kind '" + kind + "'");
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open config file: " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("config parse failure in " + path + ": " +
                                    e.what());
    }
    return j;
}

}  // namespace toric::io
