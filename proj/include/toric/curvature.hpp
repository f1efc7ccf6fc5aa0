#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "toric/potential.hpp"

namespace toric {

// Scalar curvature in moment coordinates from facet data alone:
//     s(y) = -(1/2) * sum_{a,b} d^2 G^{ab} / dy_a dy_b
// with the inverse-Hessian derivatives expanded exactly:
//     dG^{-1}   = -G^{-1} (dG) G^{-1}
//     d^2G^{-1} =  G^{-1}(d_cG)G^{-1}(d_dG)G^{-1}
//               +  G^{-1}(d_dG)G^{-1}(d_cG)G^{-1}
//               -  G^{-1}(d^2_{cd}G)G^{-1}.
double abreu_scalar(const SymplecticPotential& pot, const Eigen::VectorXd& y);

// Convenience functor form.
class ScalarCurvature {
public:
    explicit ScalarCurvature(const SymplecticPotential& pot) : pot_(pot) {}
    double operator()(const Eigen::VectorXd& y) const {
        return abreu_scalar(pot_, y);
    }
    const SymplecticPotential& potential() const { return pot_; }

private:
    SymplecticPotential pot_;
};

// Independent oracle: the Riemannian scalar curvature of the metric
//     G_ab(y) dy_a dy_b + G^{ab}(y) dv_a dv_b
// on (interior of P) x R^n, computed by generic tensor calculus (Christoffel
// symbols and curvature from nested central differences of the metric, step
// `step`, Richardson-refined).  Shares no formulas with abreu_scalar beyond
// the metric itself.  Throws std::domain_error if the difference stencil
// would leave the interior.
double riemann_scalar_oracle(const SymplecticPotential& pot,
                             const Eigen::VectorXd& y, double step = 1e-3);

struct CalibrationSample {
    std::string polytope;
    bool perturbed = false;
    Eigen::VectorXd point;
    double abreu = 0.0;
    double oracle = 0.0;
    double ratio = 0.0;  // oracle / abreu
};

struct CalibrationReport {
    std::vector<CalibrationSample> samples;
    double kappa = 0.0;      // mean ratio
    double min_ratio = 0.0;
    double max_ratio = 0.0;
    bool consistent(double rel_tol) const;
    std::string summary() const;
};

// Runs the standard suite (interval, square, simplex, Hirzebruch; canonical
// and one polynomial perturbation each; five interior points per case) and
// reports oracle/abreu ratios.
CalibrationReport run_calibration();

// The single conversion constant between the two curvature conventions.
// Throws std::runtime_error listing the offending sample points if the
// ratio is not constant within rel_tol across the suite.
double calibration_constant(double rel_tol = 0.01);

}  // namespace toric
