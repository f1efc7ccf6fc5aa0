#pragma once

#include <Eigen/Dense>

#include <iosfwd>

#include "toric/polytope.hpp"
#include "toric/potential.hpp"
#include "toric/quadrature.hpp"
#include "toric/section_exponent.hpp"
#include "toric/test_function.hpp"

namespace toric {

// The family of monomial sections at power N: one section per lattice point
// m of N*P, with squared-norm density
//
//     |s_m|^2(y) = exp(2N w(m/N, y)) / integral of the same over P.
//
// Norm integrals routinely underflow double range (the integrand scale is
// exp(2N w(x, x)) with w < 0), so everything is carried in logs: each norm
// is stored as log_norm = 2N w(x,x) + log of the peak-shifted integral, and
// densities are assembled as exp(2N w(x,y) - log_norm).
class SectionFamily {
public:
    SectionFamily(const SymplecticPotential& pot, int N,
                  QuadratureSpec spec = QuadratureSpec());

    int power() const { return N_; }
    const LatticeSet& lattice() const { return lattice_; }
    int size() const { return static_cast<int>(lattice_.points.size()); }
    const SymplecticPotential& potential() const { return pot_; }

    Eigen::VectorXd weight_point(int idx) const;  // m/N
    double log_norm(int idx) const;
    double norm(int idx) const;  // exp(log_norm); may underflow for large N

    // |s_idx|^2(y); integrates to 1 over the polytope by construction.
    double density(int idx, const Eigen::VectorXd& y) const;

    // rho_N(y) = sum over sections of |s_m|^2(y).
    double density_of_states(const Eigen::VectorXd& y) const;

    // Spectral measure applied to psi: sum over m of
    //     psi_sharp(m/N) = (integral psi e^{2Nw}) / (integral e^{2Nw}),
    // one adaptive quadrature per section, reusing the stored norm as the
    // denominator (both share the same peak shift).
    double measure_apply(const TestFunction& psi) const;

    // Mass of |s_idx|^2 within the sup-ball of the given radius around the
    // section's own weight point, for concentration diagnostics.
    double mass_within(int idx, double radius,
                       QuadratureSpec spec = QuadratureSpec()) const;

    // CSV: one row per section, "m_0,...,m_{n-1},log_norm,norm".
    void export_norms_csv(std::ostream& out) const;
    // CSV: density of states on a uniform interior grid of the bounding box.
    void export_density_csv(std::ostream& out, int grid_per_axis) const;

private:
    SymplecticPotential pot_;
    SectionExponent exponent_;
    int N_;
    LatticeSet lattice_;
    QuadratureSpec spec_;
    std::vector<double> log_norms_;
    std::vector<double> peaks_;  // 2N w(x, x) per section
};

}  // namespace toric
