#include "toric/curvature.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace toric {

double abreu_scalar(const SymplecticPotential& pot, const Eigen::VectorXd& y) {
    const int n = pot.dim();
    Eigen::MatrixXd Ginv = pot.hessian_inverse(y);
    Tensor3 T3 = pot.third_derivative(y);
    Tensor4 T4 = pot.fourth_derivative(y);

    // dG[c](a,b) = d G_ab / dy_c, premultiplied into P[c] = Ginv dG[c] Ginv
    std::vector<Eigen::MatrixXd> dG(n), P(n);
    for (int c = 0; c < n; ++c) {
        dG[c].resize(n, n);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) dG[c](a, b) = T3(a, b, c);
        P[c] = Ginv * dG[c] * Ginv;
    }

    Eigen::MatrixXd ddG(n, n);
    double total = 0.0;
    for (int c = 0; c < n; ++c) {
        for (int d = 0; d < n; ++d) {
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) ddG(a, b) = T4(a, b, c, d);
            // entry (c, d) of d^2 G^{-1} / dy_c dy_d
            Eigen::MatrixXd second = P[c] * dG[d] * Ginv + P[d] * dG[c] * Ginv -
                                     Ginv * ddG * Ginv;
            total += second(c, d);
        }
    }
    return -0.5 * total;
}

namespace {

Eigen::MatrixXd block_metric(const SymplecticPotential& pot,
                             const Eigen::VectorXd& z) {
    const int n = pot.dim();
    Eigen::VectorXd y = z.head(n);
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    g.topLeftCorner(n, n) = pot.hessian(y);
    g.bottomRightCorner(n, n) = pot.hessian_inverse(y);
    return g;
}

// Gamma^k_{ij} at z; gamma[k](i,j).  Metric derivatives by central
// differences with step h.
std::vector<Eigen::MatrixXd> christoffel(const SymplecticPotential& pot,
                                         const Eigen::VectorXd& z, double h) {
    const int m = static_cast<int>(z.size());
    std::vector<Eigen::MatrixXd> dg(m);
    Eigen::VectorXd zp = z, zm = z;
    for (int l = 0; l < m; ++l) {
        zp[l] += h;
        zm[l] -= h;
        dg[l] = (block_metric(pot, zp) - block_metric(pot, zm)) / (2.0 * h);
        zp[l] = z[l];
        zm[l] = z[l];
    }
    Eigen::MatrixXd ginv = block_metric(pot, z).inverse();
    std::vector<Eigen::MatrixXd> gamma(m, Eigen::MatrixXd::Zero(m, m));
    for (int k = 0; k < m; ++k)
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                double s = 0.0;
                for (int l = 0; l < m; ++l)
                    s += ginv(k, l) * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
                gamma[k](i, j) = 0.5 * s;
            }
    return gamma;
}

double scalar_from_stencil(const SymplecticPotential& pot,
                           const Eigen::VectorXd& z, double h) {
    const int m = static_cast<int>(z.size());
    std::vector<Eigen::MatrixXd> gamma = christoffel(pot, z, h);

    // dgamma[l][k](i,j) = d Gamma^k_{ij} / dz_l
    std::vector<std::vector<Eigen::MatrixXd>> dgamma(m);
    Eigen::VectorXd zp = z, zm = z;
    for (int l = 0; l < m; ++l) {
        zp[l] += h;
        zm[l] -= h;
        auto gp = christoffel(pot, zp, h);
        auto gm = christoffel(pot, zm, h);
        dgamma[l].resize(m);
        for (int k = 0; k < m; ++k) dgamma[l][k] = (gp[k] - gm[k]) / (2.0 * h);
        zp[l] = z[l];
        zm[l] = z[l];
    }

    Eigen::VectorXd contracted(m);  // sum_k Gamma^k_{k l}
    for (int l = 0; l < m; ++l) {
        double s = 0.0;
        for (int k = 0; k < m; ++k) s += gamma[k](k, l);
        contracted[l] = s;
    }

    Eigen::MatrixXd ricci(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            double r = 0.0;
            for (int k = 0; k < m; ++k) {
                r += dgamma[k][k](i, j) - dgamma[j][k](k, i);
                for (int l = 0; l < m; ++l)
                    r += gamma[k](k, l) * gamma[l](i, j) -
                         gamma[k](j, l) * gamma[l](k, i);
            }
            ricci(i, j) = r;
        }

    Eigen::MatrixXd ginv = block_metric(pot, z).inverse();
    return (ginv.array() * ricci.array()).sum();
}

}  // namespace

double riemann_scalar_oracle(const SymplecticPotential& pot,
                             const Eigen::VectorXd& y, double step) {
    if (!(step > 0.0)) throw std::invalid_argument("step must be positive");
    const int n = pot.dim();
    if (y.size() != n) throw std::invalid_argument("point dimension mismatch");

    // nested differences reach up to two axis steps away from y
    const auto& poly = pot.polytope();
    const auto& U = poly.normal_matrix();
    Eigen::VectorXd l = poly.l_all(y);
    for (int i = 0; i < poly.facet_count(); ++i)
        if (l[i] <= 2.5 * step * U.row(i).cwiseAbs().sum())
            throw std::domain_error(
                "difference stencil would leave the polytope interior; "
                "reduce the step or move the point inward");

    Eigen::VectorXd z = Eigen::VectorXd::Zero(2 * n);
    z.head(n) = y;
    double coarse = scalar_from_stencil(pot, z, step);
    double fine = scalar_from_stencil(pot, z, 0.5 * step);
    return (4.0 * fine - coarse) / 3.0;
}

namespace {

std::vector<Eigen::VectorXd> interior_samples(const Polytope& poly, int want) {
    std::vector<Eigen::VectorXd> pts;
    Eigen::VectorXd c = poly.centroid();
    pts.push_back(c);
    const double blend[] = {0.4, 0.65};
    for (double t : blend)
        for (const auto& v : poly.vertices()) {
            if (static_cast<int>(pts.size()) >= want) return pts;
            pts.push_back(c + t * (v - c));
        }
    return pts;
}

struct SuiteCase {
    std::string name;
    DelzantPolytope poly;
    Perturbation pert;  // empty = canonical
};

Monomial cubic(int dim, int axis, double coeff) {
    Monomial m;
    m.exponents = Eigen::VectorXi::Zero(dim);
    m.exponents[axis] = 3;
    m.coeff = coeff;
    return m;
}

std::vector<SuiteCase> calibration_suite() {
    std::vector<SuiteCase> cases;
    Perturbation pert1({cubic(1, 0, 0.05)}, 1);
    Perturbation pert2({cubic(2, 0, 0.04), cubic(2, 1, 0.03)}, 2);

    cases.push_back({"interval", make_interval(1), Perturbation()});
    cases.push_back({"interval", make_interval(1), pert1});
    cases.push_back({"square", make_square(1.0, 1.0), Perturbation()});
    cases.push_back({"square", make_square(1.0, 1.0), pert2});
    cases.push_back({"simplex", make_simplex(2), Perturbation()});
    cases.push_back({"simplex", make_simplex(2), pert2});
    cases.push_back({"hirzebruch", make_hirzebruch(1, 2.0, 1.0), Perturbation()});
    cases.push_back({"hirzebruch", make_hirzebruch(1, 2.0, 1.0), pert2});
    return cases;
}

}  // namespace

bool CalibrationReport::consistent(double rel_tol) const {
    if (samples.empty() || !std::isfinite(kappa) || kappa == 0.0) return false;
    for (const auto& s : samples) {
        if (!std::isfinite(s.ratio)) return false;
        if (std::abs(s.ratio - kappa) > rel_tol * std::abs(kappa)) return false;
    }
    return true;
}

std::string CalibrationReport::summary() const {
    std::ostringstream os;
    os.precision(12);
    for (const auto& s : samples) {
        os << s.polytope << (s.perturbed ? " (perturbed)" : " (canonical)")
           << " @ [";
        for (int j = 0; j < s.point.size(); ++j)
            os << (j ? ", " : "") << s.point[j];
        os << "]: abreu=" << s.abreu << " oracle=" << s.oracle
           << " ratio=" << s.ratio << "\n";
    }
    os << "kappa=" << kappa << " spread=[" << min_ratio << ", " << max_ratio
       << "]\n";
    return os.str();
}

CalibrationReport run_calibration() {
    CalibrationReport report;
    double sum = 0.0;
    for (const auto& sc : calibration_suite()) {
        SymplecticPotential pot(sc.poly, sc.pert);
        for (const auto& p : interior_samples(sc.poly, 5)) {
            CalibrationSample sample;
            sample.polytope = sc.name;
            sample.perturbed = !sc.pert.empty();
            sample.point = p;
            sample.abreu = abreu_scalar(pot, p);
            sample.oracle = riemann_scalar_oracle(pot, p);
            sample.ratio = sample.oracle / sample.abreu;
            sum += sample.ratio;
            report.samples.push_back(std::move(sample));
        }
    }
    report.kappa = sum / static_cast<double>(report.samples.size());
    report.min_ratio = report.max_ratio = report.samples.front().ratio;
    for (const auto& s : report.samples) {
        report.min_ratio = std::min(report.min_ratio, s.ratio);
        report.max_ratio = std::max(report.max_ratio, s.ratio);
    }
    return report;
}

double calibration_constant(double rel_tol) {
    CalibrationReport report = run_calibration();
    if (!report.consistent(rel_tol))
        throw std::runtime_error(
            "curvature conventions disagree beyond tolerance:\n" +
            report.summary());
    return report.kappa;
}

}  // namespace toric
