#include "toric/section_exponent.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace toric {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

double FixedWeight::operator()(const Eigen::VectorXd& y) const {
    const int d = static_cast<int>(c_.size());
    double acc = 0.0;
    for (int i = 0; i < d; ++i) {
        double li = c_[i] - U_.row(i).dot(y);
        if (li <= 0.0) return kNegInf;
        if (lx_[i] > 0.0) acc += lx_[i] * std::log(li);
        acc -= li;
    }
    if (pert_ && !pert_->empty()) acc += pert_->value_plus_dir_grad(y, x_ - y);
    return acc;
}

SectionExponent::SectionExponent(const SymplecticPotential& pot)
    : pot_(pot), canonical_(pot.polytope()) {}

FixedWeight SectionExponent::fixed_weight(const Eigen::VectorXd& x) const {
    const auto& poly = pot_.polytope();
    if (x.size() != poly.dim())
        throw std::invalid_argument("weight point has wrong dimension");
    const double tol = 1e-9 * poly.scale();

    FixedWeight fw;
    fw.U_ = poly.normal_matrix();
    fw.c_ = poly.offset_vector();
    fw.x_ = x;
    fw.pert_ = &pot_.perturbation();
    fw.lx_ = poly.l_all(x);
    for (int i = 0; i < fw.lx_.size(); ++i) {
        if (fw.lx_[i] < -tol) {
            std::ostringstream os;
            os << "weight point lies outside the polytope (l_" << i << " = "
               << fw.lx_[i] << ")";
            throw std::domain_error(os.str());
        }
        if (fw.lx_[i] < tol) fw.lx_[i] = 0.0;  // boundary: 0 log 0 := 0
    }
    // Peak value w(x, x), finite also on the boundary.
    double peak = 0.0;
    for (int i = 0; i < fw.lx_.size(); ++i) {
        if (fw.lx_[i] > 0.0) peak += fw.lx_[i] * std::log(fw.lx_[i]);
        peak -= fw.lx_[i];
    }
    if (!pot_.perturbation().empty()) peak += pot_.perturbation().value(x);
    fw.peak_ = peak;
    return fw;
}

double SectionExponent::value(const Eigen::VectorXd& x,
                              const Eigen::VectorXd& y) const {
    const auto& poly = pot_.polytope();
    if (!(poly.min_l(y) > 0.0))
        throw std::domain_error("second argument must be interior");
    FixedWeight fw = fixed_weight(x);
    return fw(y);
}

Eigen::VectorXd SectionExponent::grad_y(const Eigen::VectorXd& x,
                                        const Eigen::VectorXd& y) const {
    return pot_.hessian(y) * (x - y);
}

double SectionExponent::facet_value(int facet, const Eigen::VectorXd& x,
                                    const Eigen::VectorXd& y) const {
    const auto& poly = pot_.polytope();
    if (facet < 0 || facet >= poly.facet_count())
        throw std::out_of_range("facet index out of range");
    const double tol = 1e-9 * poly.scale();

    Eigen::VectorXd lx = poly.l_all(x), ly = poly.l_all(y);
    auto check_relint = [&](const Eigen::VectorXd& lv, const char* which) {
        if (std::abs(lv[facet]) > tol) {
            std::ostringstream os;
            os << which << " does not lie on facet " << facet
               << " (l = " << lv[facet] << ")";
            throw std::domain_error(os.str());
        }
        for (int i = 0; i < lv.size(); ++i) {
            if (i == facet) continue;
            if (lv[i] <= tol) {
                std::ostringstream os;
                os << which << " is on the boundary of facet " << facet
                   << " (also touches facet " << i << ")";
                throw std::domain_error(os.str());
            }
        }
    };
    check_relint(lx, "x");
    check_relint(ly, "y");

    // The facet's own term vanishes identically (coefficient l_facet(x) = 0
    // and the -l_facet(y) part is zero on the facet); everything else is the
    // plain formula.
    double acc = 0.0;
    for (int i = 0; i < lx.size(); ++i) {
        if (i == facet) continue;
        acc += lx[i] * std::log(ly[i]) - ly[i];
    }
    const auto& pert = pot_.perturbation();
    if (!pert.empty()) acc += pert.value_plus_dir_grad(y, x - y);
    return acc;
}

Eigen::VectorXd SectionExponent::argmax_y(const Eigen::VectorXd& x) const {
    return argmax_y(x, pot_.polytope().centroid());
}

Eigen::VectorXd SectionExponent::argmax_y(const Eigen::VectorXd& x,
                                          const Eigen::VectorXd& start) const {
    const auto& poly = pot_.polytope();
    if (!poly.strictly_inside(start))
        throw std::domain_error("maximization start must be interior");
    FixedWeight fw = fixed_weight(x);
    Eigen::VectorXd y = start;
    double fy = fw(y);
    const double tol = 1e-12 * std::max(1.0, poly.scale());

    for (int it = 0; it < 200; ++it) {
        Eigen::MatrixXd G = pot_.hessian(y);
        Eigen::VectorXd grad = G * (x - y);
        if (grad.lpNorm<Eigen::Infinity>() <= tol) return y;

        // y-Hessian of the exponent: (third derivs . (x-y)) - G.
        Tensor3 T = pot_.third_derivative(y);
        const int n = poly.dim();
        Eigen::MatrixXd H(n, n);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                double s = 0.0;
                for (int c = 0; c < n; ++c) s += T(a, b, c) * (x[c] - y[c]);
                H(a, b) = s - G(a, b);
            }
        Eigen::VectorXd dy = H.fullPivLu().solve(-grad);
        // The segment toward x is always an ascent direction; fall back to
        // it when the Newton step is unusable.
        if (!dy.allFinite() || grad.dot(dy) <= 0.0) dy = x - y;

        // Endgame: near the maximizer the exponent is flat to machine
        // precision and the ascent test below cannot discriminate, but the
        // gradient G(y)(x - y) still can; take the plain Newton step when it
        // stays feasible and shrinks the gradient.
        Eigen::VectorXd yn = y + dy;
        if (poly.strictly_inside(yn) &&
            (pot_.hessian(yn) * (x - yn)).lpNorm<Eigen::Infinity>() <
                grad.lpNorm<Eigen::Infinity>()) {
            y = yn;
            fy = fw(y);
            continue;
        }

        double t = 1.0;
        bool accepted = false;
        for (int back = 0; back < 60; ++back) {
            Eigen::VectorXd yt = y + t * dy;
            if (poly.strictly_inside(yt)) {
                double ft = fw(yt);
                if (ft > fy) {
                    y = yt;
                    fy = ft;
                    accepted = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if (!accepted) {
            // No ascent possible numerically; accept if the gradient is small.
            if (grad.lpNorm<Eigen::Infinity>() <= 1e-8) return y;
            throw std::runtime_error("exponent maximization stalled");
        }
    }
    Eigen::VectorXd grad = pot_.hessian(y) * (x - y);
    if (grad.lpNorm<Eigen::Infinity>() <= 1e-8) return y;
    throw std::runtime_error("exponent maximization did not converge");
}

Eigen::VectorXd SectionExponent::canonical_moment_map(const Eigen::VectorXd& y) const {
    return canonical_.from_complex(ComplexCoord{pot_.gradient(y)});
}

}  // namespace toric
