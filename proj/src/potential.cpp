#include "toric/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace toric {

namespace {

// Falling factorial e (e-1) ... (e-k+1).
double falling(int e, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= static_cast<double>(e - i);
    return r;
}

double int_pow(double y, int e) {
    double r = 1.0;
    for (int i = 0; i < e; ++i) r *= y;
    return r;
}

// d^|beta| / dy^beta of coeff * y^alpha at y.
double monomial_derivative(const Monomial& m, const Eigen::VectorXd& y,
                           const Eigen::VectorXi& beta) {
    double r = m.coeff;
    for (int j = 0; j < y.size(); ++j) {
        int e = m.exponents[j], b = beta[j];
        if (b > e) return 0.0;
        r *= falling(e, b) * int_pow(y[j], e - b);
    }
    return r;
}

}  // namespace

Perturbation::Perturbation(std::vector<Monomial> terms, int dim)
    : terms_(std::move(terms)), dim_(dim) {
    for (size_t t = 0; t < terms_.size(); ++t) {
        const auto& m = terms_[t];
        if (m.exponents.size() != dim_) {
            std::ostringstream os;
            os << "perturbation term " << t << ": exponent vector has length "
               << m.exponents.size() << ", expected " << dim_;
            throw std::invalid_argument(os.str());
        }
        if ((m.exponents.array() < 0).any())
            throw std::invalid_argument("perturbation exponents must be >= 0");
        if (!std::isfinite(m.coeff))
            throw std::invalid_argument("perturbation coefficient is not finite");
    }
}

double Perturbation::value(const Eigen::VectorXd& y) const {
    double s = 0.0;
    for (const auto& m : terms_) {
        double t = m.coeff;
        for (int j = 0; j < dim_; ++j) t *= int_pow(y[j], m.exponents[j]);
        s += t;
    }
    return s;
}

Eigen::VectorXd Perturbation::gradient(const Eigen::VectorXd& y) const {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(dim_);
    Eigen::VectorXi beta = Eigen::VectorXi::Zero(dim_);
    for (int a = 0; a < dim_; ++a) {
        beta.setZero();
        beta[a] = 1;
        for (const auto& m : terms_) g[a] += monomial_derivative(m, y, beta);
    }
    return g;
}

Eigen::MatrixXd Perturbation::hessian(const Eigen::VectorXd& y) const {
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim_, dim_);
    Eigen::VectorXi beta = Eigen::VectorXi::Zero(dim_);
    for (int a = 0; a < dim_; ++a) {
        for (int b = a; b < dim_; ++b) {
            beta.setZero();
            beta[a] += 1;
            beta[b] += 1;
            double v = 0.0;
            for (const auto& m : terms_) v += monomial_derivative(m, y, beta);
            h(a, b) = v;
            h(b, a) = v;
        }
    }
    return h;
}

Tensor3 Perturbation::third(const Eigen::VectorXd& y) const {
    Tensor3 t(dim_);
    Eigen::VectorXi beta = Eigen::VectorXi::Zero(dim_);
    for (int a = 0; a < dim_; ++a)
        for (int b = 0; b < dim_; ++b)
            for (int c = 0; c < dim_; ++c) {
                beta.setZero();
                beta[a] += 1;
                beta[b] += 1;
                beta[c] += 1;
                double v = 0.0;
                for (const auto& m : terms_) v += monomial_derivative(m, y, beta);
                t(a, b, c) = v;
            }
    return t;
}

Tensor4 Perturbation::fourth(const Eigen::VectorXd& y) const {
    Tensor4 t(dim_);
    Eigen::VectorXi beta = Eigen::VectorXi::Zero(dim_);
    for (int a = 0; a < dim_; ++a)
        for (int b = 0; b < dim_; ++b)
            for (int c = 0; c < dim_; ++c)
                for (int d = 0; d < dim_; ++d) {
                    beta.setZero();
                    beta[a] += 1;
                    beta[b] += 1;
                    beta[c] += 1;
                    beta[d] += 1;
                    double v = 0.0;
                    for (const auto& m : terms_)
                        v += monomial_derivative(m, y, beta);
                    t(a, b, c, d) = v;
                }
    return t;
}

double Perturbation::value_plus_dir_grad(const Eigen::VectorXd& y,
                                         const Eigen::VectorXd& dir) const {
    double s = 0.0;
    for (const auto& m : terms_) {
        // value part
        double p = m.coeff;
        for (int j = 0; j < dim_; ++j) p *= int_pow(y[j], m.exponents[j]);
        s += p;
        // dir . grad part, term by term without division
        for (int j = 0; j < dim_; ++j) {
            int e = m.exponents[j];
            if (e == 0 || dir[j] == 0.0) continue;
            double q = m.coeff * e * int_pow(y[j], e - 1) * dir[j];
            for (int k = 0; k < dim_; ++k)
                if (k != j) q *= int_pow(y[k], m.exponents[k]);
            s += q;
        }
    }
    return s;
}

bool ValidationReport::passed() const {
    for (const auto& c : checks)
        if (!c.passed) return false;
    return true;
}

std::string ValidationReport::summary() const {
    std::ostringstream os;
    for (const auto& c : checks)
        os << (c.passed ? "[ok]   " : "[FAIL] ") << c.name
           << (c.detail.empty() ? "" : ": " + c.detail) << "\n";
    return os.str();
}

SymplecticPotential::SymplecticPotential(const DelzantPolytope& poly,
                                         Perturbation pert)
    : poly_(poly), pert_(std::move(pert)) {
    if (!pert_.empty() && pert_.dim() != poly_.dim())
        throw std::invalid_argument("perturbation dimension does not match polytope");
}

void SymplecticPotential::require_interior(const Eigen::VectorXd& y) const {
    if (y.size() != poly_.dim())
        throw std::invalid_argument("point has wrong dimension");
    if (!(poly_.min_l(y) > 0.0))
        throw std::domain_error("potential evaluated at a non-interior point");
}

double SymplecticPotential::value(const Eigen::VectorXd& y) const {
    require_interior(y);
    double s = 0.0;
    for (int i = 0; i < poly_.facet_count(); ++i) {
        double li = poly_.l(i, y);
        s += li * std::log(li) - li;
    }
    return s + (pert_.empty() ? 0.0 : pert_.value(y));
}

// g_y = -sum_i u_i log l_i(y) + grad g_r
Eigen::VectorXd SymplecticPotential::gradient(const Eigen::VectorXd& y) const {
    require_interior(y);
    Eigen::VectorXd g = Eigen::VectorXd::Zero(poly_.dim());
    for (int i = 0; i < poly_.facet_count(); ++i) {
        double li = poly_.l(i, y);
        g -= std::log(li) * poly_.normal_matrix().row(i).transpose();
    }
    if (!pert_.empty()) g += pert_.gradient(y);
    return g;
}

// G_ab = sum_i u_ia u_ib / l_i(y) + hess g_r
Eigen::MatrixXd SymplecticPotential::hessian(const Eigen::VectorXd& y) const {
    require_interior(y);
    const int n = poly_.dim();
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < poly_.facet_count(); ++i) {
        double li = poly_.l(i, y);
        Eigen::VectorXd u = poly_.normal_matrix().row(i).transpose();
        h += (u * u.transpose()) / li;
    }
    if (!pert_.empty()) h += pert_.hessian(y);
    return h;
}

Tensor3 SymplecticPotential::third_derivative(const Eigen::VectorXd& y) const {
    require_interior(y);
    const int n = poly_.dim();
    Tensor3 t = pert_.empty() ? Tensor3(n) : pert_.third(y);
    for (int i = 0; i < poly_.facet_count(); ++i) {
        double li = poly_.l(i, y);
        double w = 1.0 / (li * li);
        const auto u = poly_.normal_matrix().row(i);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c) t(a, b, c) += w * u[a] * u[b] * u[c];
    }
    return t;
}

Tensor4 SymplecticPotential::fourth_derivative(const Eigen::VectorXd& y) const {
    require_interior(y);
    const int n = poly_.dim();
    Tensor4 t = pert_.empty() ? Tensor4(n) : pert_.fourth(y);
    for (int i = 0; i < poly_.facet_count(); ++i) {
        double li = poly_.l(i, y);
        double w = 2.0 / (li * li * li);
        const auto u = poly_.normal_matrix().row(i);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c)
                    for (int d = 0; d < n; ++d)
                        t(a, b, c, d) += w * u[a] * u[b] * u[c] * u[d];
    }
    return t;
}

Eigen::MatrixXd SymplecticPotential::hessian_inverse(const Eigen::VectorXd& y,
                                                     double max_condition) const {
    Eigen::MatrixXd h = hessian(y);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    double lo = es.eigenvalues().minCoeff();
    double hi = es.eigenvalues().maxCoeff();
    if (!(lo > 0.0)) {
        std::ostringstream os;
        os << "Hessian is not positive definite (min eigenvalue " << lo << ")";
        throw std::domain_error(os.str());
    }
    if (hi / lo > max_condition) {
        std::ostringstream os;
        os << "Hessian is ill-conditioned (condition number " << hi / lo << ")";
        throw std::domain_error(os.str());
    }
    return es.eigenvectors() *
           es.eigenvalues().cwiseInverse().asDiagonal() *
           es.eigenvectors().transpose();
}

ComplexCoord SymplecticPotential::to_complex(const Eigen::VectorXd& y) const {
    return ComplexCoord{gradient(y)};
}

Eigen::VectorXd SymplecticPotential::from_complex(const ComplexCoord& u) const {
    if (u.u.size() != poly_.dim())
        throw std::invalid_argument("complex coordinate has wrong dimension");
    const double tol = 1e-12;
    Eigen::VectorXd y = poly_.centroid();
    double merit = value(y) - u.u.dot(y);  // convex in y, minimized at solution

    for (int it = 0; it < 100; ++it) {
        Eigen::VectorXd r = gradient(y) - u.u;
        const double rn = r.lpNorm<Eigen::Infinity>();
        if (rn <= tol) return y;
        Eigen::MatrixXd H = hessian(y);
        Eigen::VectorXd dy = H.ldlt().solve(-r);

        // Near a facet the Hessian is of order 1/l, so the residual is
        // quantized in steps of ||H|| ulp(y) and may never reach tol; y is
        // then already the best representable solution once the Newton
        // correction drops below the resolution of y itself.
        if (rn <= 1e-6 * std::max(1.0, u.u.lpNorm<Eigen::Infinity>()) &&
            dy.lpNorm<Eigen::Infinity>() <=
                4.0 * std::numeric_limits<double>::epsilon() *
                    (1.0 + y.lpNorm<Eigen::Infinity>()))
            return y;

        // Endgame: close to the solution the merit differences underflow and
        // the line search below cannot discriminate, so take the plain Newton
        // step whenever it stays feasible and shrinks the residual.
        Eigen::VectorXd yn = y + dy;
        if (poly_.strictly_inside(yn) &&
            (gradient(yn) - u.u).lpNorm<Eigen::Infinity>() < rn) {
            y = yn;
            merit = value(y) - u.u.dot(y);
            continue;
        }

        double slope = r.dot(dy);  // negative: Newton is a descent direction

        double t = 1.0;
        bool accepted = false;
        for (int back = 0; back < 60; ++back) {
            Eigen::VectorXd yt = y + t * dy;
            if (poly_.strictly_inside(yt)) {
                double mt = value(yt) - u.u.dot(yt);
                if (mt <= merit + 1e-4 * t * slope) {
                    y = yt;
                    merit = mt;
                    accepted = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if (!accepted)
            throw std::runtime_error(
                "Legendre inversion stalled (backtracking exhausted)");
    }
    // one last residual check before declaring failure
    if ((gradient(y) - u.u).lpNorm<Eigen::Infinity>() <= tol) return y;
    throw std::runtime_error("Legendre inversion did not converge in 100 iterations");
}

double SymplecticPotential::kahler_potential(const ComplexCoord& u) const {
    Eigen::VectorXd y = from_complex(u);
    return y.dot(u.u) - value(y);
}

ValidationReport SymplecticPotential::validate(int grid_resolution) const {
    ValidationReport report;
    const int n = poly_.dim();
    auto [lo, hi] = poly_.bounding_box();

    // Positive definiteness on an interior grid.
    {
        ValidationCheck check;
        check.name = "hessian positive definite on interior grid";
        check.passed = true;
        long tested = 0;
        std::vector<int> idx(n, 0);
        for (;;) {
            Eigen::VectorXd y(n);
            for (int j = 0; j < n; ++j)
                y[j] = lo[j] + (idx[j] + 0.5) * (hi[j] - lo[j]) / grid_resolution;
            if (poly_.strictly_inside(y, 1e-9 * poly_.scale())) {
                ++tested;
                Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hessian(y));
                if (!(es.eigenvalues().minCoeff() > 0.0)) {
                    check.passed = false;
                    std::ostringstream os;
                    os << "min eigenvalue " << es.eigenvalues().minCoeff()
                       << " at grid point";
                    check.detail = os.str();
                    break;
                }
            }
            int axis = 0;
            while (axis < n) {
                if (++idx[axis] < grid_resolution) break;
                idx[axis] = 0;
                ++axis;
            }
            if (axis == n) break;
        }
        if (check.passed) {
            std::ostringstream os;
            os << tested << " interior grid points";
            check.detail = os.str();
        }
        report.checks.push_back(std::move(check));
    }

    // Boundary behavior: along a segment shrinking into each facet, the
    // inverse Hessian must kill the facet normal: |G^{ab} u_i| -> 0,
    // monotonically over t = 1e-1 .. 1e-6.
    Eigen::VectorXd center = poly_.centroid();
    for (int i = 0; i < poly_.facet_count(); ++i) {
        ValidationCheck check;
        std::ostringstream name;
        name << "inverse hessian annihilates normal of facet " << i;
        check.name = name.str();
        Eigen::VectorXd base = poly_.facet_centroid(i);
        Eigen::VectorXd u = poly_.normal_matrix().row(i).transpose();
        std::vector<double> norms;
        bool ok = true;
        for (double t = 1e-1; t >= 0.9e-6; t *= 0.1) {
            Eigen::VectorXd y = base + t * (center - base);
            Eigen::MatrixXd Ginv;
            try {
                Ginv = hessian_inverse(y);
            } catch (const std::domain_error& e) {
                ok = false;
                check.detail = e.what();
                break;
            }
            norms.push_back((Ginv * u).norm());
        }
        if (ok) {
            for (size_t k = 1; k < norms.size(); ++k)
                if (norms[k] > norms[k - 1] * (1.0 + 1e-9)) ok = false;
            if (!norms.empty() && norms.back() > 1e-3 * norms.front()) ok = false;
            std::ostringstream os;
            os << "|G^{ab} u| from " << (norms.empty() ? 0.0 : norms.front())
               << " to " << (norms.empty() ? 0.0 : norms.back());
            check.detail = os.str();
        }
        check.passed = ok;
        report.checks.push_back(std::move(check));
    }
    return report;
}

}  // namespace toric
