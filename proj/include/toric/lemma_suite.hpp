#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "toric/potential.hpp"

namespace toric {

// Numerical verification of the structural properties of the section
// exponent w(x, .) that the asymptotic machinery relies on:
//
//  * interior-maximum: for interior x, w(x, .) has its unique maximum at
//    y = x (checked by damped Newton from the centroid and random starts,
//    plus a strict grid comparison);
//  * facet-maximum: for x in the relative interior of a facet, the facet
//    restriction is maximized at y = x while the inward normal derivative
//    stays bounded away from zero;
//  * boundary-identity: the canonical moment comparison map approaches the
//    identity along segments shrinking into each facet.
struct LemmaCaseResult {
    std::string lemma;       // "interior-maximum", "facet-maximum", "boundary-identity"
    Eigen::VectorXd point;   // the sampled x (or facet target)
    bool passed = false;
    double metric = 0.0;     // lemma-specific figure (distance, derivative, ...)
    std::string detail;
};

struct LemmaSuiteResult {
    std::vector<LemmaCaseResult> cases;
    bool all_passed() const;
    int failures() const;
};

struct LemmaSuiteConfig {
    int samples = 20;        // sampled x per lemma
    unsigned seed = 20240811;
    int grid = 0;            // grid points per axis for max scans; 0 = default
    double argmax_tol = 1e-8;
};

LemmaSuiteResult run_lemma_suite(const SymplecticPotential& pot,
                                 const LemmaSuiteConfig& cfg = LemmaSuiteConfig());

}  // namespace toric
