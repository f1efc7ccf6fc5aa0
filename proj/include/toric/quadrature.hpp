#pragma once

#include <Eigen/Dense>

#include <functional>
#include <utility>
#include <vector>

#include "toric/polytope.hpp"

namespace toric {

using ScalarField = std::function<double(const Eigen::VectorXd&)>;

// Controls for the adaptive cell-based integrator.  Zeros mean "use the
// per-dimension default": 32 cells per axis and rel_tol 1e-8 in 1-D,
// 24 and 1e-6 in 2-D, 8 and 1e-4 in 3-D.
struct QuadratureSpec {
    int base_cells = 0;
    int max_depth = 6;
    double rel_tol = 0.0;
    long max_cells = 200000;
    int gauss_order = 7;   // main tensor Gauss-Legendre rule
    int check_order = 4;   // embedded rule for the error estimate

    static QuadratureSpec defaults_for(int dim);
    QuadratureSpec resolved(int dim) const;  // with zeros filled in
};

struct IntegrationResult {
    double value = 0.0;
    double error = 0.0;     // accumulated per-cell estimate
    bool converged = true;  // error <= rel_tol * |value| at exit
    long cells = 0;
};

// Adaptive integral of f over the polytope.  The bounding box is split into
// a uniform base grid; cells entirely inside use tensor Gauss rules, cells
// cut by the boundary are clipped exactly against the facet half-spaces in
// one and two dimensions (interval clipping / convex polygon clipping with
// triangle rules).  In three dimensions cut cells fall back to subdivision
// with inside-fraction sampling, which is markedly less accurate.  Cells are
// refined worst-first until the summed error estimate meets rel_tol; the
// final reduction runs in a fixed cell order, so results are reproducible
// for a given spec.
IntegrationResult integrate(const Polytope& domain, const ScalarField& f,
                            QuadratureSpec spec = QuadratureSpec());

// Same machinery over a plain axis-aligned box (no clipping).
IntegrationResult integrate_box(const Eigen::VectorXd& lo,
                                const Eigen::VectorXd& hi,
                                const ScalarField& f,
                                QuadratureSpec spec = QuadratureSpec());

// Integral of f over facet i in the lattice-normalized measure, computed as
// the one-sided derivative of F(eps) = integral over the polytope with that
// facet pushed out by eps, Richardson-extrapolated over eps halvings
// starting at eps0.  f must be evaluable slightly outside the polytope.
double facet_integral(const Polytope& domain, int facet, const ScalarField& f,
                      QuadratureSpec spec = QuadratureSpec(),
                      double eps0 = 1e-2);

// Gauss-Legendre nodes and weights on [-1, 1], computed by Newton iteration
// on the Legendre recurrence.
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int order);

}  // namespace toric
