#include "toric/sections.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>

#include "toric/parallel.hpp"

namespace toric {

SectionFamily::SectionFamily(const SymplecticPotential& pot, int N,
                             QuadratureSpec spec)
    : pot_(pot), exponent_(pot), N_(N) {
    if (N < 1) throw std::invalid_argument("section power N must be >= 1");
    spec_ = spec.resolved(pot_.dim());
    lattice_ = pot_.polytope().lattice_points(N);

    const int count = size();
    log_norms_.assign(count, 0.0);
    peaks_.assign(count, 0.0);
    const auto& poly = pot_.polytope();

    // One adaptive quadrature per section; slots keep the result order
    // independent of thread scheduling.
    parallel_for(count, [&](int idx) {
        FixedWeight fw = exponent_.fixed_weight(weight_point(idx));
        const double shift = 2.0 * N_ * fw.peak();
        ScalarField integrand = [&fw, this, shift](const Eigen::VectorXd& y) {
            return std::exp(2.0 * N_ * fw(y) - shift);
        };
        IntegrationResult r = integrate(poly, integrand, spec_);
        if (!(r.value > 0.0))
            throw std::runtime_error("section norm integral collapsed to zero");
        peaks_[idx] = shift;
        log_norms_[idx] = shift + std::log(r.value);
    });
}

Eigen::VectorXd SectionFamily::weight_point(int idx) const {
    if (idx < 0 || idx >= size())
        throw std::out_of_range("section index out of range");
    return lattice_.points[idx].cast<double>() / lattice_.scale;
}

double SectionFamily::log_norm(int idx) const {
    if (idx < 0 || idx >= size())
        throw std::out_of_range("section index out of range");
    return log_norms_[idx];
}

double SectionFamily::norm(int idx) const { return std::exp(log_norm(idx)); }

double SectionFamily::density(int idx, const Eigen::VectorXd& y) const {
    if (idx < 0 || idx >= size())
        throw std::out_of_range("section index out of range");
    FixedWeight fw = exponent_.fixed_weight(weight_point(idx));
    double e = 2.0 * N_ * fw(y) - log_norms_[idx];
    return std::exp(e);  // exp(-inf) = 0 outside the polytope
}

double SectionFamily::density_of_states(const Eigen::VectorXd& y) const {
    double sum = 0.0, comp = 0.0;
    for (int idx = 0; idx < size(); ++idx) {
        double t = density(idx, y) - comp;
        double s = sum + t;
        comp = (s - sum) - t;
        sum = s;
    }
    return sum;
}

double SectionFamily::measure_apply(const TestFunction& psi) const {
    if (psi.dim() != pot_.dim())
        throw std::invalid_argument("test function dimension mismatch");
    const int count = size();
    std::vector<double> averages(count, 0.0);
    const auto& poly = pot_.polytope();

    parallel_for(count, [&](int idx) {
        FixedWeight fw = exponent_.fixed_weight(weight_point(idx));
        const double shift = peaks_[idx];
        ScalarField integrand = [&fw, &psi, this,
                                 shift](const Eigen::VectorXd& y) {
            double e = std::exp(2.0 * N_ * fw(y) - shift);
            return e == 0.0 ? 0.0 : psi.value(y) * e;
        };
        double numerator = integrate(poly, integrand, spec_).value;
        double denominator = std::exp(log_norms_[idx] - shift);
        averages[idx] = numerator / denominator;
    });

    double sum = 0.0, comp = 0.0;
    for (int idx = 0; idx < count; ++idx) {
        double t = averages[idx] - comp;
        double s = sum + t;
        comp = (s - sum) - t;
        sum = s;
    }
    return sum;
}

double SectionFamily::mass_within(int idx, double radius,
                                  QuadratureSpec spec) const {
    if (idx < 0 || idx >= size())
        throw std::out_of_range("section index out of range");
    if (!(radius > 0.0)) throw std::invalid_argument("radius must be positive");

    Eigen::VectorXd x = weight_point(idx);
    Eigen::VectorXd lo = x.array() - radius;
    Eigen::VectorXd hi = x.array() + radius;
    Polytope clipped = intersect_box(pot_.polytope(), lo, hi);

    FixedWeight fw = exponent_.fixed_weight(x);
    const double shift = peaks_[idx];
    const double log_norm_shifted = log_norms_[idx] - shift;
    ScalarField integrand = [&](const Eigen::VectorXd& y) {
        return std::exp(2.0 * N_ * fw(y) - shift);
    };
    double inside = integrate(clipped, integrand, spec.resolved(pot_.dim())).value;
    return inside / std::exp(log_norm_shifted);
}

void SectionFamily::export_norms_csv(std::ostream& out) const {
    const int n = pot_.dim();
    for (int j = 0; j < n; ++j) out << "m_" << j << ",";
    out << "log_norm,norm\n";
    out << std::setprecision(17);
    for (int idx = 0; idx < size(); ++idx) {
        for (int j = 0; j < n; ++j) out << lattice_.points[idx][j] << ",";
        out << log_norms_[idx] << "," << norm(idx) << "\n";
    }
}

void SectionFamily::export_density_csv(std::ostream& out,
                                       int grid_per_axis) const {
    if (grid_per_axis < 1)
        throw std::invalid_argument("grid resolution must be >= 1");
    const int n = pot_.dim();
    const auto& poly = pot_.polytope();
    auto [lo, hi] = poly.bounding_box();

    for (int j = 0; j < n; ++j) out << "y_" << j << ",";
    out << "rho\n";
    out << std::setprecision(17);

    std::vector<int> idx(n, 0);
    Eigen::VectorXd y(n);
    for (;;) {
        for (int j = 0; j < n; ++j)
            y[j] = lo[j] + (idx[j] + 0.5) / grid_per_axis * (hi[j] - lo[j]);
        if (poly.strictly_inside(y)) {
            for (int j = 0; j < n; ++j) out << y[j] << ",";
            out << density_of_states(y) << "\n";
        }
        int axis = 0;
        while (axis < n) {
            if (++idx[axis] < grid_per_axis) break;
            idx[axis] = 0;
            ++axis;
        }
        if (axis == n) break;
    }
}

}  // namespace toric
