#pragma once

#include <Eigen/Dense>

#include <vector>

#include "toric/quadrature.hpp"
#include "toric/sections.hpp"

namespace toric {

// Least-squares fit of values(N) against sum_k coeff_k N^{exponent_k}.
struct ExpansionFit {
    std::vector<int> exponents;
    std::vector<double> coefficients;
    std::vector<int> powers;  // the N values that were fitted
    double residual = 0.0;    // l2 norm of the fit residual
    bool well_conditioned = true;
};

// Regressors are normalized to (N/N_max)^k before solving so the fit stays
// well scaled; needs strictly increasing N and at least as many samples as
// coefficients (one more for a meaningful residual; fewer flags the fit).
ExpansionFit fit_power_series(const std::vector<int>& Ns,
                              const std::vector<double>& values,
                              const std::vector<int>& exponents);

// Closed-form peak approximation of the section norm integral:
//     (pi/N)^{n/2} det(G(x))^{-1/2} exp(2N w(x,x)),
// the Gaussian integral of the second-order expansion of 2N w(x, .) around
// its peak.  Only meaningful for x strictly inside the polytope.
double laplace_log_section_norm(const SymplecticPotential& pot,
                                const Eigen::VectorXd& x, int N);
double laplace_section_norm(const SymplecticPotential& pot,
                            const Eigen::VectorXd& x, int N);

// log of the actual norm integral by adaptive quadrature (peak-shifted).
double quadrature_log_section_norm(const SymplecticPotential& pot,
                                   const Eigen::VectorXd& x, int N,
                                   QuadratureSpec spec = QuadratureSpec());

// psi averaged against the normalized density of the weight-x section:
//     (integral psi e^{2Nw(x,.)}) / (integral e^{2Nw(x,.)}).
double peak_average(const SymplecticPotential& pot, const TestFunction& psi,
                    const Eigen::VectorXd& x, int N,
                    QuadratureSpec spec = QuadratureSpec());

// The 1/N coefficient of peak_average as N grows:
//     (1/2) * ( (1/2) psi_ab G^{ab} + psi_a dG^{ab}/dy_b )
// with G^{ab} the inverse Hessian of the potential (summation over a, b).
double peak_average_correction(const SymplecticPotential& pot,
                               const TestFunction& psi,
                               const Eigen::VectorXd& x);

// Exact lattice Riemann sum sum_{m in N*P} f(m/N).
double lattice_sum(const DelzantPolytope& poly, const ScalarField& f, int N);

// Euler-Maclaurin style estimate of the lattice sum from integrals:
//   order 0:  N^n * integral_P f
//   order 1:  N^n * [ integral_P f + (1/2N) * sum_i d/dh_i integral_{P_h} f ]
// where the facet derivatives are taken at h = 0 (lattice-normalized facet
// integrals).  Exact for f == 1 on products of unit intervals.
double lattice_sum_estimate(const Polytope& poly, const ScalarField& f, int N,
                            int order, QuadratureSpec spec = QuadratureSpec());

// Target for the subleading coefficient of the spectral measure:
//     -(1/4) * integral psi(y) * d^2 G^{ab} / dy_a dy_b  dy,
// evaluated with the exact inverse-Hessian derivative algebra.
double measure_subleading_target(const SymplecticPotential& pot,
                                 const TestFunction& psi,
                                 QuadratureSpec spec = QuadratureSpec());

// Applies the spectral measures to psi across the N-list and fits
// c0 N^n + c1 N^{n-1} (optionally a third N^{n-2} term whose accuracy is
// unvalidated).  fit_terms must be 2 or 3.
ExpansionFit spectral_measure_expansion(const SymplecticPotential& pot,
                                        const TestFunction& psi,
                                        const std::vector<int>& Ns,
                                        int fit_terms = 2,
                                        QuadratureSpec spec = QuadratureSpec());

// Density-of-states ratio at a point: fits rho_N(y) to b0 N^n + b1 N^{n-1}
// over the N-list and returns b1/b0.  The expected limit is half the scalar
// curvature at y.
double tyz_ratio(const SymplecticPotential& pot, const Eigen::VectorXd& y,
                 const std::vector<int>& Ns, int fit_terms = 2,
                 QuadratureSpec spec = QuadratureSpec());

}  // namespace toric
