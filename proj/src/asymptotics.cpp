#include "toric/asymptotics.hpp"

#include <cmath>
#include <stdexcept>

#include "toric/curvature.hpp"

namespace toric {

namespace {

void require_increasing(const std::vector<int>& Ns) {
    if (Ns.empty()) throw std::invalid_argument("empty list of powers N");
    for (size_t i = 0; i < Ns.size(); ++i) {
        if (Ns[i] < 1) throw std::invalid_argument("powers N must be >= 1");
        if (i > 0 && Ns[i] <= Ns[i - 1])
            throw std::invalid_argument("powers N must be strictly increasing");
    }
}

double kahan_total(const std::vector<double>& xs) {
    double sum = 0.0, comp = 0.0;
    for (double x : xs) {
        double t = x - comp;
        double s = sum + t;
        comp = (s - sum) - t;
        sum = s;
    }
    return sum;
}

}  // namespace

ExpansionFit fit_power_series(const std::vector<int>& Ns,
                              const std::vector<double>& values,
                              const std::vector<int>& exponents) {
    require_increasing(Ns);
    if (values.size() != Ns.size())
        throw std::invalid_argument("values/powers size mismatch");
    if (exponents.empty()) throw std::invalid_argument("no exponents to fit");
    const int rows = static_cast<int>(Ns.size());
    const int cols = static_cast<int>(exponents.size());
    if (rows < cols)
        throw std::invalid_argument("need at least as many samples as terms");

    const double nmax = static_cast<double>(Ns.back());
    Eigen::MatrixXd A(rows, cols);
    Eigen::VectorXd b(rows);
    for (int i = 0; i < rows; ++i) {
        b[i] = values[i];
        for (int k = 0; k < cols; ++k)
            A(i, k) = std::pow(Ns[i] / nmax, exponents[k]);
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
    Eigen::VectorXd scaled = qr.solve(b);

    ExpansionFit fit;
    fit.exponents = exponents;
    fit.powers = Ns;
    fit.coefficients.resize(cols);
    for (int k = 0; k < cols; ++k)
        fit.coefficients[k] = scaled[k] / std::pow(nmax, exponents[k]);
    fit.residual = (A * scaled - b).norm();
    fit.well_conditioned = rows > cols && qr.rank() == cols;
    return fit;
}

double laplace_log_section_norm(const SymplecticPotential& pot,
                                const Eigen::VectorXd& x, int N) {
    if (N < 1) throw std::invalid_argument("power N must be >= 1");
    const int n = pot.dim();
    Eigen::MatrixXd G = pot.hessian(x);
    Eigen::LLT<Eigen::MatrixXd> llt(G);
    if (llt.info() != Eigen::Success)
        throw std::domain_error("Hessian not positive definite at peak");
    double half_logdet = 0.0;
    for (int a = 0; a < n; ++a)
        half_logdet += std::log(llt.matrixL()(a, a));
    // w(x, x) collapses to g(x)
    return 0.5 * n * (std::log(M_PI) - std::log(static_cast<double>(N))) -
           half_logdet + 2.0 * N * pot.value(x);
}

double laplace_section_norm(const SymplecticPotential& pot,
                            const Eigen::VectorXd& x, int N) {
    return std::exp(laplace_log_section_norm(pot, x, N));
}

double quadrature_log_section_norm(const SymplecticPotential& pot,
                                   const Eigen::VectorXd& x, int N,
                                   QuadratureSpec spec) {
    if (N < 1) throw std::invalid_argument("power N must be >= 1");
    SectionExponent exponent(pot);
    FixedWeight fw = exponent.fixed_weight(x);
    const double shift = 2.0 * N * fw.peak();
    ScalarField integrand = [&](const Eigen::VectorXd& y) {
        return std::exp(2.0 * N * fw(y) - shift);
    };
    double v = integrate(pot.polytope(), integrand, spec).value;
    if (!(v > 0.0))
        throw std::runtime_error("norm integral collapsed to zero");
    return shift + std::log(v);
}

double peak_average(const SymplecticPotential& pot, const TestFunction& psi,
                    const Eigen::VectorXd& x, int N, QuadratureSpec spec) {
    if (N < 1) throw std::invalid_argument("power N must be >= 1");
    if (psi.dim() != pot.dim())
        throw std::invalid_argument("test function dimension mismatch");
    SectionExponent exponent(pot);
    FixedWeight fw = exponent.fixed_weight(x);
    const double shift = 2.0 * N * fw.peak();
    ScalarField weight = [&](const Eigen::VectorXd& y) {
        return std::exp(2.0 * N * fw(y) - shift);
    };
    ScalarField weighted = [&](const Eigen::VectorXd& y) {
        double e = weight(y);
        return e == 0.0 ? 0.0 : psi.value(y) * e;
    };
    QuadratureSpec rs = spec.resolved(pot.dim());
    double den = integrate(pot.polytope(), weight, rs).value;
    double num = integrate(pot.polytope(), weighted, rs).value;
    if (!(den > 0.0))
        throw std::runtime_error("weight integral collapsed to zero");
    return num / den;
}

double peak_average_correction(const SymplecticPotential& pot,
                               const TestFunction& psi,
                               const Eigen::VectorXd& x) {
    if (psi.dim() != pot.dim())
        throw std::invalid_argument("test function dimension mismatch");
    const int n = pot.dim();
    Eigen::MatrixXd Ginv = pot.hessian_inverse(x);
    Tensor3 T = pot.third_derivative(x);
    Eigen::VectorXd grad = psi.gradient(x);
    Eigen::MatrixXd hess = psi.hessian(x);

    // divergence D_a = sum_b dG^{ab}/dy_b with
    // dG^{ab}/dy_c = -(Ginv dG/dy_c Ginv)_{ab}
    Eigen::VectorXd div = Eigen::VectorXd::Zero(n);
    Eigen::MatrixXd dG(n, n);
    for (int c = 0; c < n; ++c) {
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) dG(a, b) = T(a, b, c);
        Eigen::MatrixXd M = -Ginv * dG * Ginv;
        div += M.col(c);
    }

    double trace_term = 0.5 * (hess.array() * Ginv.array()).sum();
    return 0.5 * (trace_term + grad.dot(div));
}

double lattice_sum(const DelzantPolytope& poly, const ScalarField& f, int N) {
    if (N < 1) throw std::invalid_argument("power N must be >= 1");
    LatticeSet lattice = poly.lattice_points(N);
    std::vector<double> vals;
    vals.reserve(lattice.points.size());
    for (const auto& m : lattice.points)
        vals.push_back(f(m.cast<double>() / lattice.scale));
    return kahan_total(vals);
}

double lattice_sum_estimate(const Polytope& poly, const ScalarField& f, int N,
                            int order, QuadratureSpec spec) {
    if (N < 1) throw std::invalid_argument("power N must be >= 1");
    if (order != 0 && order != 1)
        throw std::invalid_argument("estimate order must be 0 or 1");
    const int n = poly.dim();
    double bulk = integrate(poly, f, spec).value;
    double estimate = bulk;
    if (order == 1) {
        double boundary = 0.0;
        for (int i = 0; i < poly.facet_count(); ++i)
            boundary += facet_integral(poly, i, f, spec);
        estimate += boundary / (2.0 * N);
    }
    return std::pow(static_cast<double>(N), n) * estimate;
}

double measure_subleading_target(const SymplecticPotential& pot,
                                 const TestFunction& psi,
                                 QuadratureSpec spec) {
    if (psi.dim() != pot.dim())
        throw std::invalid_argument("test function dimension mismatch");
    ScalarField integrand = [&](const Eigen::VectorXd& y) {
        double p = psi.value(y);
        if (p == 0.0) return 0.0;
        return 0.5 * p * abreu_scalar(pot, y);
    };
    return integrate(pot.polytope(), integrand, spec).value;
}

ExpansionFit spectral_measure_expansion(const SymplecticPotential& pot,
                                        const TestFunction& psi,
                                        const std::vector<int>& Ns,
                                        int fit_terms, QuadratureSpec spec) {
    require_increasing(Ns);
    if (fit_terms != 2 && fit_terms != 3)
        throw std::invalid_argument("fit_terms must be 2 or 3");
    const int n = pot.dim();
    std::vector<double> values;
    values.reserve(Ns.size());
    for (int N : Ns) {
        SectionFamily family(pot, N, spec);
        values.push_back(family.measure_apply(psi));
    }
    std::vector<int> exponents = {n, n - 1};
    if (fit_terms == 3) exponents.push_back(n - 2);
    return fit_power_series(Ns, values, exponents);
}

double tyz_ratio(const SymplecticPotential& pot, const Eigen::VectorXd& y,
                 const std::vector<int>& Ns, int fit_terms,
                 QuadratureSpec spec) {
    require_increasing(Ns);
    if (fit_terms != 2 && fit_terms != 3)
        throw std::invalid_argument("fit_terms must be 2 or 3");
    if (!pot.polytope().strictly_inside(y))
        throw std::domain_error("density ratio needs an interior point");
    const int n = pot.dim();
    std::vector<double> values;
    values.reserve(Ns.size());
    for (int N : Ns) {
        SectionFamily family(pot, N, spec);
        values.push_back(family.density_of_states(y));
    }
    std::vector<int> exponents = {n, n - 1};
    if (fit_terms == 3) exponents.push_back(n - 2);
    ExpansionFit fit = fit_power_series(Ns, values, exponents);
    if (std::abs(fit.coefficients[0]) < 1e-300)
        throw std::runtime_error("leading density coefficient vanished");
    return fit.coefficients[1] / fit.coefficients[0];
}

}  // namespace toric
