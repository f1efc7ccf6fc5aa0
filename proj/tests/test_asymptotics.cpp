#include <doctest.h>

#include <cmath>

#include "toric/asymptotics.hpp"

using namespace toric;

namespace {

Eigen::VectorXd pt1(double a) {
    Eigen::VectorXd p(1);
    p << a;
    return p;
}

Eigen::VectorXd pt2(double a, double b) {
    Eigen::VectorXd p(2);
    p << a, b;
    return p;
}

Monomial mono1(int e, double c) {
    Monomial m;
    m.exponents = Eigen::VectorXi::Constant(1, e);
    m.coeff = c;
    return m;
}

}  // namespace

TEST_SUITE("asymptotics") {

TEST_CASE("power series fit recovers exact data") {
    std::vector<int> Ns = {2, 5, 9, 14};
    std::vector<double> vals;
    for (int N : Ns) vals.push_back(3.0 * N + 7.0);

    ExpansionFit fit = fit_power_series(Ns, vals, {1, 0});
    REQUIRE(fit.coefficients.size() == 2);
    CHECK(fit.coefficients[0] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(fit.coefficients[1] == doctest::Approx(7.0).epsilon(1e-12));
    CHECK(fit.residual < 1e-10);
    CHECK(fit.well_conditioned);
    CHECK(fit.exponents == std::vector<int>{1, 0});
    CHECK(fit.powers == Ns);
}

TEST_CASE("fit with negative exponents") {
    std::vector<int> Ns = {4, 8, 16, 32};
    std::vector<double> vals;
    for (int N : Ns) vals.push_back(2.0 * N + 0.25 - 1.5 / N);
    ExpansionFit fit = fit_power_series(Ns, vals, {1, 0, -1});
    CHECK(fit.coefficients[0] == doctest::Approx(2.0).epsilon(1e-11));
    CHECK(fit.coefficients[1] == doctest::Approx(0.25).epsilon(1e-10));
    CHECK(fit.coefficients[2] == doctest::Approx(-1.5).epsilon(1e-9));
}

TEST_CASE("fit validation and conditioning flags") {
    CHECK_THROWS_AS(fit_power_series({}, {}, {1, 0}), std::invalid_argument);
    CHECK_THROWS_AS(fit_power_series({5, 5}, {1.0, 1.0}, {1, 0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(fit_power_series({5, 2}, {1.0, 1.0}, {1, 0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(fit_power_series({0, 2}, {1.0, 1.0}, {1, 0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(fit_power_series({2, 4, 8}, {1.0, 1.0}, {1, 0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(fit_power_series({2, 4}, {1.0, 1.0}, {}),
                    std::invalid_argument);
    CHECK_THROWS_AS(fit_power_series({2}, {1.0}, {1, 0}),
                    std::invalid_argument);

    // square system: solvable but flagged
    ExpansionFit square = fit_power_series({3, 6}, {10.0, 19.0}, {1, 0});
    CHECK_FALSE(square.well_conditioned);
    CHECK(square.coefficients[0] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(square.coefficients[1] == doctest::Approx(1.0).epsilon(1e-11));
}

TEST_CASE("laplace approximation error shrinks like 1/N on the interval") {
    // Closed form at the midpoint: quadrature/laplace - 1 -> -3/(8N).
    SymplecticPotential g(make_interval(1));
    Eigen::VectorXd x = pt1(0.5);

    auto rel = [&](int N) {
        return std::exp(quadrature_log_section_norm(g, x, N) -
                        laplace_log_section_norm(g, x, N)) -
               1.0;
    };
    double e50 = rel(50), e100 = rel(100);
    CHECK(50.0 * e50 == doctest::Approx(-0.375).epsilon(0.05));
    CHECK(e50 / e100 == doctest::Approx(2.0).epsilon(0.1));

    CHECK(laplace_section_norm(g, x, 10) ==
          doctest::Approx(std::exp(laplace_log_section_norm(g, x, 10)))
              .epsilon(1e-14));
    CHECK_THROWS_AS(laplace_log_section_norm(g, pt1(1.0), 10),
                    std::domain_error);
    CHECK_THROWS_AS(laplace_log_section_norm(g, x, 0), std::invalid_argument);
    CHECK_THROWS_AS(quadrature_log_section_norm(g, x, 0),
                    std::invalid_argument);
}

TEST_CASE("interval density ratio matches half the scalar curvature") {
    // rho_N(1/2) = N + 1/2 exactly, so the fitted ratio is 1/2 = s/2.
    SymplecticPotential g(make_interval(1));
    double ratio = tyz_ratio(g, pt1(0.5), {25, 50, 100});
    CHECK(ratio == doctest::Approx(0.5).epsilon(1e-4));

    CHECK_THROWS_AS(tyz_ratio(g, pt1(1.0), {10, 20}), std::domain_error);
    CHECK_THROWS_AS(tyz_ratio(g, pt1(0.5), {20, 10}), std::invalid_argument);
    CHECK_THROWS_AS(tyz_ratio(g, pt1(0.5), {10, 20}, 4), std::invalid_argument);
}

TEST_CASE("peak averages against beta moments") {
    SymplecticPotential g(make_interval(1));
    ConstantFunction one(1.0, 1);
    CHECK(peak_average(g, one, pt1(0.37), 40) ==
          doctest::Approx(1.0).epsilon(1e-14));

    // psi = y: closed form (2Nx + 1) / (2N + 2)
    PolynomialFunction psi({mono1(1, 1.0)}, 1);
    int N = 100;
    double pa = peak_average(g, psi, pt1(0.3), N);
    CHECK(pa == doctest::Approx(61.0 / 202.0).epsilon(1e-7));

    // finite-N correction identity: (N+1)(psi_sharp - psi) = (1-2x)/2 exactly
    CHECK((N + 1) * (pa - 0.3) == doctest::Approx(0.2).epsilon(1e-4));

    ConstantFunction wrong(1.0, 2);
    CHECK_THROWS_AS(peak_average(g, wrong, pt1(0.3), 10),
                    std::invalid_argument);
    CHECK_THROWS_AS(peak_average(g, psi, pt1(0.3), 0), std::invalid_argument);
}

TEST_CASE("peak average correction closed forms") {
    // interval, psi = y: C = (1 - 2x)/2
    SymplecticPotential g1(make_interval(1));
    PolynomialFunction psi1({mono1(1, 1.0)}, 1);
    CHECK(peak_average_correction(g1, psi1, pt1(0.3)) ==
          doctest::Approx(0.2).epsilon(1e-12));
    CHECK(peak_average_correction(g1, psi1, pt1(0.5)) ==
          doctest::Approx(0.0).epsilon(1e-12));

    // simplex, psi = y_1: C = (1 - 3 x_1)/2 from G^{ab} = y_a (delta - y_b)
    SymplecticPotential g2(make_simplex(2));
    Monomial m;
    m.exponents = Eigen::VectorXi::Zero(2);
    m.exponents[0] = 1;
    m.coeff = 1.0;
    PolynomialFunction psi2({m}, 2);
    CHECK(peak_average_correction(g2, psi2, pt2(0.3, 0.3)) ==
          doctest::Approx(0.05).epsilon(1e-12));

    // and the matching finite-N identity (2N+3)(psi_sharp - psi)/2 = C
    int N = 40;
    double pa = peak_average(g2, psi2, pt2(0.3, 0.3), N);
    CHECK((2 * N + 3) * (pa - 0.3) / 2.0 == doctest::Approx(0.05).epsilon(2e-3));
}

TEST_CASE("lattice sums and their euler-maclaurin estimates") {
    auto one = [](const Eigen::VectorXd&) { return 1.0; };
    auto linear = [](const Eigen::VectorXd& y) { return y[0]; };

    DelzantPolytope interval = make_interval(1);
    CHECK(lattice_sum(interval, linear, 10) ==
          doctest::Approx(5.5).epsilon(1e-14));
    CHECK(lattice_sum(interval, one, 17) ==
          doctest::Approx(18.0).epsilon(1e-14));

    // order 1 is exact for f = 1 and f = y on the interval
    CHECK(lattice_sum_estimate(interval, one, 17, 1) ==
          doctest::Approx(18.0).epsilon(1e-8));
    CHECK(lattice_sum_estimate(interval, linear, 10, 1) ==
          doctest::Approx(5.5).epsilon(1e-8));
    CHECK(lattice_sum_estimate(interval, one, 17, 0) ==
          doctest::Approx(17.0).epsilon(1e-10));

    // unit square: estimate N^2 + 2N, exact count (N+1)^2, residual exactly 1
    DelzantPolytope square = make_square(1, 1);
    int N = 9;
    double est = lattice_sum_estimate(square, one, N, 1);
    CHECK(est == doctest::Approx(99.0).epsilon(1e-6));
    double exact = lattice_sum(square, one, N);
    CHECK(exact == doctest::Approx(100.0).epsilon(1e-14));
    CHECK(exact - est == doctest::Approx(1.0).epsilon(1e-4));

    CHECK_THROWS_AS(lattice_sum_estimate(interval, one, 10, 2),
                    std::invalid_argument);
    CHECK_THROWS_AS(lattice_sum_estimate(interval, one, 0, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(lattice_sum(interval, one, 0), std::invalid_argument);
}

TEST_CASE("subleading target for the flat interval measure") {
    // scalar curvature is 1 on the canonical interval, so the target for
    // psi = 1 is half the volume
    SymplecticPotential g(make_interval(1));
    ConstantFunction one(1.0, 1);
    CHECK(measure_subleading_target(g, one) ==
          doctest::Approx(0.5).epsilon(1e-8));

    ConstantFunction wrong(1.0, 2);
    CHECK_THROWS_AS(measure_subleading_target(g, wrong),
                    std::invalid_argument);
}

TEST_CASE("measure expansion of a linear function is exact") {
    // v_N(psi = y) = (N+1)/2 exactly, so the interior-term target 1/4 does
    // not apply; the boundary contributes and the true coefficients are
    // c0 = c1 = 1/2.
    SymplecticPotential g(make_interval(1));
    PolynomialFunction psi({mono1(1, 1.0)}, 1);

    ExpansionFit fit = spectral_measure_expansion(g, psi, {10, 20, 40});
    CHECK(fit.exponents == std::vector<int>{1, 0});
    CHECK(fit.coefficients[0] == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(fit.coefficients[1] == doctest::Approx(0.5).epsilon(1e-5));

    ExpansionFit fit3 = spectral_measure_expansion(g, psi, {10, 20, 40, 80}, 3);
    CHECK(fit3.coefficients[0] == doctest::Approx(0.5).epsilon(1e-5));
    CHECK(fit3.coefficients[1] == doctest::Approx(0.5).epsilon(1e-4));
    CHECK(std::abs(fit3.coefficients[2]) < 1e-3);

    CHECK_THROWS_AS(spectral_measure_expansion(g, psi, {10, 20}, 4),
                    std::invalid_argument);
}

TEST_CASE("measure expansion of an interior bump hits both targets") {
    // for compactly supported psi the subleading coefficient really is the
    // curvature pairing
    SymplecticPotential g(make_interval(1));
    BumpFunction psi(pt1(0.5), 0.25);
    REQUIRE(bump_fits_inside(g.polytope(), psi));

    double c0_target = integrate(g.polytope(),
                                 [&](const Eigen::VectorXd& y) {
                                     return psi.value(y);
                                 },
                                 {})
                           .value;
    double c1_target = measure_subleading_target(g, psi);
    CHECK(c1_target == doctest::Approx(0.5 * c0_target).epsilon(1e-7));

    // on the canonical interval the density of states is (N + 1/2) times
    // (1 + (1 - 2y)^{2N}), so for interior-supported psi the two-term
    // expansion is exact up to exponentially small remainders and quadrature
    // noise; the fit recovers both coefficients essentially to precision
    ExpansionFit fit = spectral_measure_expansion(g, psi, {40, 80, 160});
    CHECK(fit.coefficients[0] == doctest::Approx(c0_target).epsilon(1e-8));
    CHECK(fit.coefficients[1] == doctest::Approx(c1_target).epsilon(1e-5));
}

}  // TEST_SUITE
