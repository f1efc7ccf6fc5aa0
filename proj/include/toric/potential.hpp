#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "toric/polytope.hpp"
#include "toric/tensor.hpp"

namespace toric {

// One polynomial term coeff * y^exponents (componentwise powers).
struct Monomial {
    Eigen::VectorXi exponents;
    double coeff = 0.0;
};

// Smooth polynomial correction g_r added to the canonical potential.  All
// derivatives are exact (falling-factorial rule per component).
class Perturbation {
public:
    Perturbation() = default;
    Perturbation(std::vector<Monomial> terms, int dim);

    bool empty() const { return terms_.empty(); }
    int dim() const { return dim_; }
    const std::vector<Monomial>& terms() const { return terms_; }

    double value(const Eigen::VectorXd& y) const;
    Eigen::VectorXd gradient(const Eigen::VectorXd& y) const;
    Eigen::MatrixXd hessian(const Eigen::VectorXd& y) const;
    Tensor3 third(const Eigen::VectorXd& y) const;
    Tensor4 fourth(const Eigen::VectorXd& y) const;

    // value(y) + dir . gradient(y), computed without temporaries; this is
    // the combination needed by the section exponent's hot loop.
    double value_plus_dir_grad(const Eigen::VectorXd& y,
                               const Eigen::VectorXd& dir) const;

private:
    std::vector<Monomial> terms_;
    int dim_ = 0;
};

// Complex (Legendre-dual) coordinate u = grad g(y).
struct ComplexCoord {
    Eigen::VectorXd u;
};

struct ValidationCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;
    bool passed() const;
    std::string summary() const;
};

// Symplectic potential g = g0 + g_r on a Delzant polytope, where the
// canonical part is
//     g0(y) = sum_i l_i(y) log l_i(y) - l_i(y)
// (no extra factor 1/2; curvature conventions downstream account for the
// resulting normalization via an explicitly calibrated constant).
class SymplecticPotential {
public:
    explicit SymplecticPotential(const DelzantPolytope& poly,
                                 Perturbation pert = Perturbation());

    const DelzantPolytope& polytope() const { return poly_; }
    const Perturbation& perturbation() const { return pert_; }
    bool is_canonical() const { return pert_.empty(); }
    int dim() const { return poly_.dim(); }

    // Evaluators require y strictly inside the polytope and throw
    // std::domain_error otherwise.
    double value(const Eigen::VectorXd& y) const;
    Eigen::VectorXd gradient(const Eigen::VectorXd& y) const;       // g_y
    Eigen::MatrixXd hessian(const Eigen::VectorXd& y) const;        // G
    Tensor3 third_derivative(const Eigen::VectorXd& y) const;
    Tensor4 fourth_derivative(const Eigen::VectorXd& y) const;

    // Inverse Hessian G^{ab}; throws std::domain_error when the condition
    // number exceeds max_condition.
    Eigen::MatrixXd hessian_inverse(const Eigen::VectorXd& y,
                                    double max_condition = 1e14) const;

    // Legendre transform: u = g_y(y), and its inverse by damped Newton
    // (started at the centroid, steps halved until all l_i stay positive,
    // residual tolerance 1e-12, at most 100 iterations).
    ComplexCoord to_complex(const Eigen::VectorXd& y) const;
    Eigen::VectorXd from_complex(const ComplexCoord& u) const;

    // Dual potential f(u) = y.u - g(y) at y = from_complex(u).
    double kahler_potential(const ComplexCoord& u) const;

    // Checks positive-definiteness of the Hessian on an interior grid and
    // the decay of G^{ab} u_i on segments approaching each facet.
    ValidationReport validate(int grid_resolution = 15) const;

private:
    void require_interior(const Eigen::VectorXd& y) const;

    DelzantPolytope poly_;
    Perturbation pert_;
};

}  // namespace toric
