#pragma once

#include <Eigen/Dense>

#include "toric/potential.hpp"

namespace toric {

class SectionExponent;

// Evaluator for the exponent with the first argument pinned to a fixed
// weight point x.  Precomputes l_i(x) so the per-point cost is one affine
// function and one log per facet; returns -infinity outside the open
// polytope, so exp() of the result vanishes there gracefully.
class FixedWeight {
public:
    double operator()(const Eigen::VectorXd& y) const;

    // Value at y = x, which is also sup over the closed polytope.
    double peak() const { return peak_; }
    const Eigen::VectorXd& weight() const { return x_; }

private:
    friend class SectionExponent;
    FixedWeight() = default;

    Eigen::MatrixXd U_;       // facet normals as rows (double)
    Eigen::VectorXd c_;       // facet offsets
    Eigen::VectorXd lx_;      // l_i(x), clamped to 0 on the boundary
    Eigen::VectorXd x_;
    const Perturbation* pert_ = nullptr;
    double peak_ = 0.0;
};

// The two-point exponent behind all section norms:
//
//     w(x, y) = g(y) + (x - y) . grad g(y)
//
// For the canonical part this collapses to sum_i l_i(x) log l_i(y) - l_i(y),
// which stays finite when x reaches the boundary (0 * log 0 := 0); that form
// is what we evaluate.  Squared section norms are exp(2N w(m/N, y)) up to
// normalization, so w(x, .) peaking precisely at y = x is what drives all
// concentration and expansion results downstream.
class SectionExponent {
public:
    explicit SectionExponent(const SymplecticPotential& pot);

    const SymplecticPotential& potential() const { return pot_; }

    // x in the closed polytope, y strictly inside.
    double value(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const;

    // Gradient in y: hess g(y) (x - y).  Vanishes only at y = x.
    Eigen::VectorXd grad_y(const Eigen::VectorXd& x,
                           const Eigen::VectorXd& y) const;

    // Restriction to a facet F, for x and y in the relative interior of F.
    // The shared vanishing term drops out exactly; everything else is the
    // continuous limit of value().
    double facet_value(int facet, const Eigen::VectorXd& x,
                       const Eigen::VectorXd& y) const;

    // Maximizer of w(x, .) over the polytope, found by damped ascent /
    // Newton from the centroid (or a caller-chosen interior start).  Exists
    // uniquely and equals x; callers use this to verify that property
    // numerically.
    Eigen::VectorXd argmax_y(const Eigen::VectorXd& x) const;
    Eigen::VectorXd argmax_y(const Eigen::VectorXd& x,
                             const Eigen::VectorXd& start) const;

    // Composition (grad g0)^{-1} (grad g): the comparison map between the
    // potential's moment image and the canonical one.  Identity everywhere
    // for canonical potentials and on the boundary in the limit otherwise.
    Eigen::VectorXd canonical_moment_map(const Eigen::VectorXd& y) const;

    FixedWeight fixed_weight(const Eigen::VectorXd& x) const;

private:
    SymplecticPotential pot_;
    SymplecticPotential canonical_;  // same polytope, no perturbation
};

}  // namespace toric
