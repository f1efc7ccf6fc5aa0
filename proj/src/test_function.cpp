#include "toric/test_function.hpp"

#include <cmath>
#include <stdexcept>

namespace toric {

BumpFunction::BumpFunction(Eigen::VectorXd center, double radius, double scale)
    : center_(std::move(center)), radius_(radius), scale_(scale) {
    if (center_.size() == 0) throw std::invalid_argument("bump center is empty");
    if (!(radius_ > 0.0)) throw std::invalid_argument("bump radius must be positive");
    if (!std::isfinite(scale_)) throw std::invalid_argument("bump scale must be finite");
}

double BumpFunction::value(const Eigen::VectorXd& y) const {
    Eigen::VectorXd d = y - center_;
    double q = d.squaredNorm() / (radius_ * radius_);
    if (q >= 1.0) return 0.0;
    return scale_ * std::exp(-1.0 / (1.0 - q));
}

Eigen::VectorXd BumpFunction::gradient(const Eigen::VectorXd& y) const {
    Eigen::VectorXd d = y - center_;
    double r2 = radius_ * radius_;
    double q = d.squaredNorm() / r2;
    if (q >= 1.0) return Eigen::VectorXd::Zero(center_.size());
    double w = 1.0 - q;
    double v = scale_ * std::exp(-1.0 / w);
    // d/dy_a of -1/w is -(2 d_a / r2) / w^2
    return v * (-2.0 / (r2 * w * w)) * d;
}

Eigen::MatrixXd BumpFunction::hessian(const Eigen::VectorXd& y) const {
    const int n = static_cast<int>(center_.size());
    Eigen::VectorXd d = y - center_;
    double r2 = radius_ * radius_;
    double q = d.squaredNorm() / r2;
    if (q >= 1.0) return Eigen::MatrixXd::Zero(n, n);
    double w = 1.0 - q;
    double v = scale_ * std::exp(-1.0 / w);
    Eigen::VectorXd s = (-2.0 / (r2 * w * w)) * d;  // gradient of -1/w
    // second derivative of -1/w:
    //   -2 delta_ab / (r2 w^2) - 8 d_a d_b / (r2^2 w^3)
    Eigen::MatrixXd h = v * (s * s.transpose());
    h += v * (-2.0 / (r2 * w * w)) * Eigen::MatrixXd::Identity(n, n);
    h += v * (-8.0 / (r2 * r2 * w * w * w)) * (d * d.transpose());
    return h;
}

bool bump_fits_inside(const Polytope& poly, const BumpFunction& bump) {
    if (bump.dim() != poly.dim()) return false;
    const auto& U = poly.normal_matrix();
    Eigen::VectorXd l = poly.l_all(bump.center());
    for (int i = 0; i < poly.facet_count(); ++i) {
        double dist = l[i] / U.row(i).norm();
        if (dist <= bump.radius()) return false;
    }
    return true;
}

}  // namespace toric
