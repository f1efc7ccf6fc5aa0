#include "toric/lemma_suite.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include "toric/section_exponent.hpp"

namespace toric {

namespace {

int default_grid(int dim) {
    if (dim <= 1) return 512;
    if (dim == 2) return 64;
    return 16;
}

// Uniform draw from the interior, rejected until every facet distance
// exceeds a fraction of the diameter (keeps Newton solves comfortable).
Eigen::VectorXd draw_interior(const Polytope& poly, std::mt19937& rng) {
    auto [lo, hi] = poly.bounding_box();
    const double margin = 0.04 * poly.diameter();
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Eigen::VectorXd y(poly.dim());
    for (int attempt = 0; attempt < 100000; ++attempt) {
        for (int j = 0; j < poly.dim(); ++j)
            y[j] = lo[j] + unit(rng) * (hi[j] - lo[j]);
        if (!poly.strictly_inside(y)) continue;
        bool deep = true;
        for (int i = 0; i < poly.facet_count() && deep; ++i)
            deep = poly.l(i, y) / poly.normal_matrix().row(i).norm() >= margin;
        if (deep) return y;
    }
    throw std::runtime_error("interior sampling failed; polytope too thin");
}

// Random point in the relative interior of a facet: a Dirichlet-weighted
// vertex combination pulled toward the facet centroid.
Eigen::VectorXd draw_facet_point(const Polytope& poly, int facet,
                                 std::mt19937& rng) {
    std::vector<int> ids = poly.facet_vertex_ids(facet);
    std::uniform_real_distribution<double> unit(1e-12, 1.0);
    Eigen::VectorXd combo = Eigen::VectorXd::Zero(poly.dim());
    double total = 0.0;
    for (int id : ids) {
        double w = -std::log(unit(rng));
        combo += w * poly.vertices()[id];
        total += w;
    }
    combo /= total;
    Eigen::VectorXd c = poly.facet_centroid(facet);
    return c + 0.7 * (combo - c);
}

// Grid of probe points in the relative interior of a facet, built from
// centroid-to-vertex blends.
std::vector<Eigen::VectorXd> facet_probe_grid(const Polytope& poly, int facet,
                                              int per_edge) {
    std::vector<Eigen::VectorXd> pts;
    Eigen::VectorXd c = poly.facet_centroid(facet);
    pts.push_back(c);
    for (int id : poly.facet_vertex_ids(facet)) {
        const Eigen::VectorXd& v = poly.vertices()[id];
        for (int k = 1; k <= per_edge; ++k) {
            double t = static_cast<double>(k) / (per_edge + 1);
            pts.push_back(c + t * (v - c));
        }
    }
    return pts;
}

std::string point_string(const Eigen::VectorXd& p) {
    std::ostringstream os;
    os.precision(10);
    os << "[";
    for (int j = 0; j < p.size(); ++j) os << (j ? ", " : "") << p[j];
    os << "]";
    return os.str();
}

}  // namespace

bool LemmaSuiteResult::all_passed() const {
    for (const auto& c : cases)
        if (!c.passed) return false;
    return !cases.empty();
}

int LemmaSuiteResult::failures() const {
    int k = 0;
    for (const auto& c : cases)
        if (!c.passed) ++k;
    return k;
}

LemmaSuiteResult run_lemma_suite(const SymplecticPotential& pot,
                                 const LemmaSuiteConfig& cfg) {
    if (cfg.samples < 1) throw std::invalid_argument("samples must be >= 1");
    if (cfg.grid < 0) throw std::invalid_argument("grid must be >= 0");

    const auto& poly = pot.polytope();
    const int n = poly.dim();
    const int d = poly.facet_count();
    const int grid = cfg.grid > 0 ? cfg.grid : default_grid(n);
    const double diameter = poly.diameter();
    SectionExponent exponent(pot);
    std::mt19937 rng(cfg.seed);
    LemmaSuiteResult result;

    // ---- interior-maximum ---------------------------------------------
    auto [lo, hi] = poly.bounding_box();
    const double spacing = (hi - lo).maxCoeff() / grid;
    for (int s = 0; s < cfg.samples; ++s) {
        LemmaCaseResult cr;
        cr.lemma = "interior-maximum";
        cr.point = draw_interior(poly, rng);
        try {
            Eigen::VectorXd peak_pt = exponent.argmax_y(cr.point);
            double dist = (peak_pt - cr.point).lpNorm<Eigen::Infinity>();
            // Newton must land on x from scattered starts as well
            for (int r = 0; r < 5; ++r) {
                Eigen::VectorXd start = draw_interior(poly, rng);
                Eigen::VectorXd alt = exponent.argmax_y(cr.point, start);
                dist = std::max(dist,
                                (alt - cr.point).lpNorm<Eigen::Infinity>());
            }
            FixedWeight fw = exponent.fixed_weight(cr.point);
            double peak = fw.peak();

            // strict dominance over the whole grid away from x itself
            double best_other = -std::numeric_limits<double>::infinity();
            std::vector<int> idx(n, 0);
            Eigen::VectorXd y(n);
            for (;;) {
                for (int j = 0; j < n; ++j)
                    y[j] = lo[j] + (idx[j] + 0.5) / grid * (hi[j] - lo[j]);
                if ((y - cr.point).lpNorm<Eigen::Infinity>() > spacing)
                    best_other = std::max(best_other, fw(y));
                int axis = 0;
                while (axis < n) {
                    if (++idx[axis] < grid) break;
                    idx[axis] = 0;
                    ++axis;
                }
                if (axis == n) break;
            }
            bool newton_ok = dist <= cfg.argmax_tol * std::max(1.0, diameter);
            bool grid_ok = best_other < peak;
            cr.metric = dist;
            cr.passed = newton_ok && grid_ok;
            if (!cr.passed) {
                std::ostringstream os;
                os << "argmax distance " << dist << ", grid margin "
                   << peak - best_other;
                cr.detail = os.str();
            }
        } catch (const std::exception& e) {
            cr.passed = false;
            cr.detail = e.what();
        }
        result.cases.push_back(std::move(cr));
    }

    // ---- facet-maximum --------------------------------------------------
    for (int s = 0; s < cfg.samples; ++s) {
        int facet = s % d;
        LemmaCaseResult cr;
        cr.lemma = "facet-maximum";
        cr.point = draw_facet_point(poly, facet, rng);
        try {
            FixedWeight fw = exponent.fixed_weight(cr.point);
            double peak_facet = exponent.facet_value(facet, cr.point, cr.point);

            // restriction maximized at y = x
            double margin = std::numeric_limits<double>::infinity();
            for (const auto& y : facet_probe_grid(poly, facet, grid / 4)) {
                if ((y - cr.point).lpNorm<Eigen::Infinity>() <= 1e-7 * diameter)
                    continue;
                margin = std::min(
                    margin, peak_facet - exponent.facet_value(facet, cr.point, y));
            }

            // inward normal derivative bounded away from zero
            Eigen::VectorXd inward = poly.facet_unit_inward(facet);
            double peak = fw.peak();
            double d1 = (fw(cr.point + 1e-4 * inward) - peak) / 1e-4;
            double d2 = (fw(cr.point + 1e-5 * inward) - peak) / 1e-5;

            bool max_ok = margin > 0.0;  // stays +inf for point facets
            bool deriv_ok = d1 < -0.1 && d2 < -0.1;
            cr.metric = d2;
            cr.passed = max_ok && deriv_ok;
            if (!cr.passed) {
                std::ostringstream os;
                os << "facet margin " << margin << ", inward derivative "
                   << d1 << " / " << d2;
                cr.detail = os.str();
            }
        } catch (const std::exception& e) {
            cr.passed = false;
            cr.detail = e.what();
        }
        result.cases.push_back(std::move(cr));
    }

    // ---- boundary-identity ----------------------------------------------
    Eigen::VectorXd centroid = poly.centroid();
    const double scale_tol = 1e-9 * std::max(1.0, diameter);
    for (int s = 0; s < cfg.samples; ++s) {
        int facet = s % d;
        LemmaCaseResult cr;
        cr.lemma = "boundary-identity";
        cr.point = draw_facet_point(poly, facet, rng);
        try {
            std::vector<double> values;
            bool identity_ok = true;
            for (double t : {1e-1, 1e-2, 1e-3, 1e-4, 1e-5}) {
                Eigen::VectorXd y = cr.point + t * (centroid - cr.point);
                Eigen::VectorXd mapped = exponent.canonical_moment_map(y);
                values.push_back(std::abs(poly.l(facet, mapped)) /
                                 poly.normal_matrix().row(facet).norm());
                if (pot.is_canonical() &&
                    (mapped - y).lpNorm<Eigen::Infinity>() > 1e-7 * diameter)
                    identity_ok = false;
            }
            bool decreasing = true;
            for (size_t k = 1; k < values.size(); ++k)
                if (values[k] > values[k - 1] * (1.0 + 1e-9) + scale_tol)
                    decreasing = false;
            double vf = values.front(), vl = values.back();
            bool collapsed = vl <= std::max(scale_tol, 0.02 * vf);
            cr.metric = vf > 0.0 ? vl / vf : 0.0;
            cr.passed = decreasing && collapsed && identity_ok;
            if (!cr.passed) {
                std::ostringstream os;
                os << "facet distances along segment:";
                for (double v : values) os << " " << v;
                if (!identity_ok) os << " (canonical map drifted)";
                cr.detail = os.str();
            }
        } catch (const std::exception& e) {
            cr.passed = false;
            cr.detail = e.what();
        }
        result.cases.push_back(std::move(cr));
    }

    for (auto& c : result.cases)
        if (c.detail.empty() && !c.passed) c.detail = "failed at " + point_string(c.point);
    return result;
}

}  // namespace toric
