// Acceptance gate for the library.  Each criterion below exercises one
// end-to-end claim (expansion coefficients, error rates, lemma checks,
// calibration, primitives) with tolerances pinned as named constants, prints
// a single [PASS]/[FAIL] line with the measured numbers and wall time, and
// the process exits with the number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "toric/asymptotics.hpp"
#include "toric/curvature.hpp"
#include "toric/lemma_suite.hpp"
#include "toric/polytope.hpp"
#include "toric/potential.hpp"
#include "toric/quadrature.hpp"
#include "toric/section_exponent.hpp"
#include "toric/sections.hpp"
#include "toric/test_function.hpp"

namespace {

using namespace toric;
using Clock = std::chrono::steady_clock;

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

Monomial mono2(int e0, int e1, double c) {
    Monomial m;
    m.exponents = Eigen::VectorXi(2);
    m.exponents << e0, e1;
    m.coeff = c;
    return m;
}

double rel_err(double value, double target) {
    return std::abs(value - target) / std::abs(target);
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

// ---------------------------------------------------------------------------
// 1. Density-of-states ratio on canonical potentials: the fitted N^{n-1} over
//    N^n coefficient of rho_N equals half the Abreu scalar curvature.

bool density_ratio_canonical(std::ostringstream& out) {
    const double tol_interval = 0.05;
    const double tol_simplex = 0.10;
    const std::vector<int> ns_interval = {25, 50, 100, 200};
    const std::vector<int> ns_simplex = {10, 20, 40};

    SymplecticPotential seg(make_interval(1));
    double worst = 0.0;
    for (double y : {0.3, 0.5, 0.7}) {
        Eigen::VectorXd p = pt1(y);
        double got = tyz_ratio(seg, p, ns_interval);
        double want = 0.5 * abreu_scalar(seg, p);
        worst = std::max(worst, rel_err(got, want));
    }

    SymplecticPotential tri(make_simplex(2));
    Eigen::VectorXd bary = pt2(1.0 / 3.0, 1.0 / 3.0);
    double got = tyz_ratio(tri, bary, ns_simplex);
    double want = 0.5 * abreu_scalar(tri, bary);
    double err_tri = rel_err(got, want);

    out << "interval worst " << fmt(worst) << " (tol " << fmt(tol_interval)
        << "), simplex " << fmt(err_tri) << " (tol " << fmt(tol_simplex) << ")";
    return worst <= tol_interval && err_tri <= tol_simplex;
}

// ---------------------------------------------------------------------------
// 2. Same ratio with a cubic perturbation of the interval potential, where
//    the scalar curvature is no longer constant.

bool density_ratio_perturbed(std::ostringstream& out) {
    const double tol = 0.07;
    const std::vector<int> ns = {25, 50, 100, 200};

    Perturbation pert({mono1(3, 0.05)}, 1);
    SymplecticPotential pot(make_interval(1), pert);
    double worst = 0.0;
    for (double y : {0.3, 0.5, 0.7}) {
        Eigen::VectorXd p = pt1(y);
        double got = tyz_ratio(pot, p, ns);
        double want = 0.5 * abreu_scalar(pot, p);
        worst = std::max(worst, rel_err(got, want));
    }
    out << "worst " << fmt(worst) << " (tol " << fmt(tol) << ")";
    return worst <= tol;
}

// ---------------------------------------------------------------------------
// 3. Spectral measure expansion against an interior bump: leading coefficient
//    is the integral of psi, subleading is the half-curvature pairing.

bool measure_expansion_bump(std::ostringstream& out) {
    const double tol_leading = 0.005;
    const double tol_subleading = 0.05;
    const int fit_terms = 2;
    const std::vector<int> ns = {50, 100, 200, 400};

    SymplecticPotential pot(make_interval(1));
    BumpFunction psi(pt1(0.5), 0.25);
    ExpansionFit fit = spectral_measure_expansion(pot, psi, ns, fit_terms);

    double c0_target =
        integrate(pot.polytope(),
                  [&](const Eigen::VectorXd& y) { return psi.value(y); })
            .value;
    double c1_target = measure_subleading_target(pot, psi);
    double e0 = rel_err(fit.coefficients[0], c0_target);
    double e1 = rel_err(fit.coefficients[1], c1_target);

    out << "c0 err " << fmt(e0) << " (tol " << fmt(tol_leading) << "), c1 err "
        << fmt(e1) << " (tol " << fmt(tol_subleading) << ")";
    return e0 <= tol_leading && e1 <= tol_subleading;
}

// ---------------------------------------------------------------------------
// 4. Peak-average correction: 2N (psi_sharp(x) - psi(x)) at N = 400 matches
//    twice the closed-form 1/N coefficient.

bool moment_correction(std::ostringstream& out) {
    const double tol = 0.02;
    const int N = 400;
    SymplecticPotential pot(make_interval(1));

    PolynomialFunction lin({mono1(1, 1.0)}, 1);
    Eigen::VectorXd x_lin = pt1(0.3);
    double got_lin = 2.0 * N * (peak_average(pot, lin, x_lin, N) - lin.value(x_lin));
    double want_lin = 2.0 * peak_average_correction(pot, lin, x_lin);
    double e_lin = rel_err(got_lin, want_lin);

    BumpFunction bump(pt1(0.5), 0.25);
    Eigen::VectorXd x_bump = pt1(0.45);
    double got_bump =
        2.0 * N * (peak_average(pot, bump, x_bump, N) - bump.value(x_bump));
    double want_bump = 2.0 * peak_average_correction(pot, bump, x_bump);
    double e_bump = rel_err(got_bump, want_bump);

    out << "linear err " << fmt(e_lin) << ", bump err " << fmt(e_bump)
        << " (tol " << fmt(tol) << ")";
    return e_lin <= tol && e_bump <= tol;
}

// ---------------------------------------------------------------------------
// 5. First-order Euler-Maclaurin estimates reproduce the exact lattice point
//    counts: N + 1 on the interval, N^2 + 2N on the unit square (so the
//    remaining gap to (N+1)^2 is exactly the corner term 1).

bool euler_maclaurin_counts(std::ostringstream& out) {
    const double tol_1d = 1e-6;
    const double tol_2d = 1e-4;

    DelzantPolytope seg = make_interval(1);
    DelzantPolytope sq = make_square(1, 1);
    ScalarField one = [](const Eigen::VectorXd&) { return 1.0; };

    double worst1 = 0.0, worst2 = 0.0, worst_gap = 0.0;
    for (int N : {10, 20, 40}) {
        double est1 = lattice_sum_estimate(seg, one, N, 1);
        worst1 = std::max(worst1, std::abs(est1 - (N + 1.0)));

        double est2 = lattice_sum_estimate(sq, one, N, 1);
        worst2 = std::max(worst2, std::abs(est2 - (N * N + 2.0 * N)));

        double count2 = lattice_sum(sq, one, N);
        worst_gap = std::max(worst_gap, std::abs(count2 - est2 - 1.0));
    }
    out << "interval dev " << fmt(worst1) << " (tol " << fmt(tol_1d)
        << "), square dev " << fmt(worst2) << ", corner gap dev "
        << fmt(worst_gap) << " (tol " << fmt(tol_2d) << ")";
    return worst1 <= tol_1d && worst2 <= tol_2d && worst_gap <= tol_2d;
}

// ---------------------------------------------------------------------------
// 6. Laplace approximation error e_N = quad/laplace - 1 halves per doubling
//    of N, within 20 percent.

bool laplace_error_halving(std::ostringstream& out) {
    const double lo = 0.4;
    const double hi = 0.6;

    auto err = [](const SymplecticPotential& pot, const Eigen::VectorXd& x,
                  int N) {
        return std::exp(quadrature_log_section_norm(pot, x, N) -
                        laplace_log_section_norm(pot, x, N)) -
               1.0;
    };

    SymplecticPotential seg(make_interval(1));
    Eigen::VectorXd mid = pt1(0.5);
    double e50 = err(seg, mid, 50);
    double e100 = err(seg, mid, 100);
    double e200 = err(seg, mid, 200);

    SymplecticPotential tri(make_simplex(2));
    Eigen::VectorXd bary = pt2(1.0 / 3.0, 1.0 / 3.0);
    double t20 = err(tri, bary, 20);
    double t40 = err(tri, bary, 40);

    double r1 = e100 / e50;
    double r2 = e200 / e100;
    double r3 = t40 / t20;
    out << "interval ratios " << fmt(r1) << ", " << fmt(r2) << "; simplex "
        << fmt(r3) << " (window [" << fmt(lo) << ", " << fmt(hi) << "])";
    auto in_window = [&](double r) { return r >= lo && r <= hi; };
    return in_window(r1) && in_window(r2) && in_window(r3);
}

// ---------------------------------------------------------------------------
// 7. Structural lemma suite: interior maximum, facet maximum, and boundary
//    identity of the section exponent, on four polytopes with canonical and
//    perturbed potentials, twenty sampled points per lemma.

bool lemma_suite_all(std::ostringstream& out) {
    const int samples = 20;

    Perturbation pert1({mono1(3, 0.05)}, 1);
    Perturbation pert2({mono2(3, 0, 0.04), mono2(0, 3, 0.03)}, 2);

    std::vector<std::pair<DelzantPolytope, Perturbation>> cases;
    for (const DelzantPolytope& poly :
         {make_interval(1), make_square(1, 1), make_simplex(2),
          make_hirzebruch(1, 2, 1)}) {
        cases.emplace_back(poly, Perturbation());
        cases.emplace_back(poly, poly.dim() == 1 ? pert1 : pert2);
    }

    LemmaSuiteConfig cfg;
    cfg.samples = samples;
    int total = 0;
    int failed = 0;
    for (const auto& [poly, pert] : cases) {
        LemmaSuiteResult res = run_lemma_suite(SymplecticPotential(poly, pert), cfg);
        total += static_cast<int>(res.cases.size());
        failed += res.failures();
    }
    out << total << " cases, " << failed << " failures";
    return total == 480 && failed == 0;
}

// ---------------------------------------------------------------------------
// 8. Concentration: the normalized section density for weight x = 0.5 on the
//    interval loses at least a factor 3 of its outside-|y - x| < 0.1 mass per
//    doubling of N.  (0.5 is not a lattice weight at N = 25, so the density
//    is evaluated in its continuous-weight form exp(2N w(x, .)) normalized.)

bool section_concentration(std::ostringstream& out) {
    const double radius = 0.1;
    const double min_factor = 3.0;

    SymplecticPotential pot(make_interval(1));
    SectionExponent w(pot);
    Eigen::VectorXd x = pt1(0.5);
    FixedWeight fw = w.fixed_weight(x);

    auto outside_mass = [&](int N) {
        ScalarField f = [&](const Eigen::VectorXd& y) {
            return std::exp(2.0 * N * (fw(y) - fw.peak()));
        };
        double total = integrate(pot.polytope(), f).value;
        Eigen::VectorXd lo = x.array() - radius;
        Eigen::VectorXd hi = x.array() + radius;
        double inside = integrate(intersect_box(pot.polytope(), lo, hi), f).value;
        return 1.0 - inside / total;
    };

    double m25 = outside_mass(25);
    double m50 = outside_mass(50);
    double m100 = outside_mass(100);
    double r1 = m25 / m50;
    double r2 = m50 / m100;
    out << "outside mass " << fmt(m25) << " -> " << fmt(m50) << " -> "
        << fmt(m100) << ", decay factors " << fmt(r1) << ", " << fmt(r2)
        << " (min " << fmt(min_factor) << ")";
    return r1 >= min_factor && r2 >= min_factor;
}

// ---------------------------------------------------------------------------
// 9. Curvature calibration: the Riemannian oracle over the Abreu formula is
//    one constant kappa across the whole suite, and kappa = 2 on the
//    canonical interval to three decimals.

bool curvature_calibration(std::ostringstream& out) {
    const double tol_spread = 0.01;
    const double tol_interval = 1e-3;

    CalibrationReport rep = run_calibration();
    bool spread_ok = rep.consistent(tol_spread);
    double worst_interval = 0.0;
    for (const auto& s : rep.samples)
        if (s.polytope == "interval" && !s.perturbed)
            worst_interval = std::max(worst_interval, std::abs(s.ratio - 2.0));

    out << "kappa " << fmt(rep.kappa) << ", ratio range [" << fmt(rep.min_ratio)
        << ", " << fmt(rep.max_ratio) << "] (tol " << fmt(tol_spread)
        << "), interval |ratio - 2| " << fmt(worst_interval) << " (tol "
        << fmt(tol_interval) << ")";
    return spread_ok && worst_interval <= tol_interval;
}

// ---------------------------------------------------------------------------
// 10. Primitives: lattice enumeration against a brute-force box scan,
//     Legendre transform round trips, and analytic derivatives against
//     central finite differences.

long long brute_count(const DelzantPolytope& poly, int N) {
    const int d = poly.dim();
    auto [lo, hi] = poly.bounding_box();
    std::vector<long long> klo(d), khi(d), k(d);
    for (int a = 0; a < d; ++a) {
        klo[a] = llround(std::floor(lo[a] * N)) - 1;
        khi[a] = llround(std::ceil(hi[a] * N)) + 1;
        k[a] = klo[a];
    }
    const auto& facets = poly.facets();
    long long count = 0;
    while (true) {
        bool inside = true;
        for (size_t i = 0; i < facets.size() && inside; ++i) {
            long long s = poly.integer_offset(static_cast<int>(i)) * N;
            for (int a = 0; a < d; ++a)
                s -= static_cast<long long>(facets[i].normal[a]) * k[a];
            if (s < 0) inside = false;
        }
        if (inside) ++count;
        int a = 0;
        while (a < d) {
            if (++k[a] <= khi[a]) break;
            k[a] = klo[a];
            ++a;
        }
        if (a == d) break;
    }
    return count;
}

std::vector<Eigen::VectorXd> interior_points(const Polytope& poly) {
    std::vector<Eigen::VectorXd> pts;
    Eigen::VectorXd c = poly.centroid();
    pts.push_back(c);
    for (double t : {0.4, 0.65})
        for (const auto& v : poly.vertices()) {
            if (pts.size() >= 5) return pts;
            pts.push_back(c + t * (v - c));
        }
    return pts;
}

double derivative_fd_error(const SymplecticPotential& pot,
                           const Eigen::VectorXd& y) {
    const double h = 1e-5;
    const int d = pot.dim();
    double worst = 0.0;
    auto scaled = [&](double got, double want) {
        return std::abs(got - want) /
               std::max({1.0, std::abs(got), std::abs(want)});
    };

    Eigen::VectorXd grad = pot.gradient(y);
    Eigen::MatrixXd hess = pot.hessian(y);
    Tensor3 third = pot.third_derivative(y);
    for (int a = 0; a < d; ++a) {
        Eigen::VectorXd yp = y, ym = y;
        yp[a] += h;
        ym[a] -= h;
        worst = std::max(
            worst, scaled((pot.value(yp) - pot.value(ym)) / (2.0 * h), grad[a]));
        Eigen::VectorXd gp = pot.gradient(yp), gm = pot.gradient(ym);
        Eigen::MatrixXd hp = pot.hessian(yp), hm = pot.hessian(ym);
        for (int b = 0; b < d; ++b) {
            worst = std::max(worst,
                             scaled((gp[b] - gm[b]) / (2.0 * h), hess(a, b)));
            for (int c = 0; c < d; ++c)
                worst = std::max(worst, scaled((hp(b, c) - hm(b, c)) / (2.0 * h),
                                               third(b, c, a)));
        }
    }
    return worst;
}

bool primitives(std::ostringstream& out) {
    const double tol_legendre = 1e-10;
    const double tol_fd = 1e-6;
    const int max_power = 50;

    std::vector<DelzantPolytope> polys = {make_interval(1), make_square(1, 1),
                                          make_simplex(2),
                                          make_hirzebruch(1, 2, 1)};

    long long count_mismatches = 0;
    for (const auto& poly : polys)
        for (int N = 1; N <= max_power; ++N)
            if (static_cast<long long>(poly.lattice_points(N).points.size()) !=
                brute_count(poly, N))
                ++count_mismatches;

    Perturbation pert1({mono1(3, 0.05)}, 1);
    Perturbation pert2({mono2(3, 0, 0.04), mono2(0, 3, 0.03)}, 2);
    std::vector<SymplecticPotential> pots;
    for (const auto& poly : polys) {
        pots.emplace_back(poly);
        pots.emplace_back(poly, poly.dim() == 1 ? pert1 : pert2);
    }

    double worst_legendre = 0.0;
    double worst_fd = 0.0;
    for (const auto& pot : pots)
        for (const auto& p : interior_points(pot.polytope())) {
            Eigen::VectorXd back = pot.from_complex(pot.to_complex(p));
            worst_legendre =
                std::max(worst_legendre, (back - p).lpNorm<Eigen::Infinity>());
            worst_fd = std::max(worst_fd, derivative_fd_error(pot, p));
        }

    out << "count mismatches " << count_mismatches << ", legendre "
        << fmt(worst_legendre) << " (tol " << fmt(tol_legendre) << "), fd "
        << fmt(worst_fd) << " (tol " << fmt(tol_fd) << ")";
    return count_mismatches == 0 && worst_legendre <= tol_legendre &&
           worst_fd <= tol_fd;
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<bool(std::ostringstream&)> run;
        double budget_secs;  // wall-time budget, part of the gate; 0 = none
    };
    const std::vector<Criterion> criteria = {
        {"density-ratio-canonical", density_ratio_canonical, 960.0},
        {"density-ratio-perturbed", density_ratio_perturbed, 120.0},
        {"measure-expansion-bump", measure_expansion_bump, 300.0},
        {"moment-correction", moment_correction, 60.0},
        {"euler-maclaurin-counts", euler_maclaurin_counts, 1.0},
        {"laplace-error-halving", laplace_error_halving, 120.0},
        {"lemma-suite", lemma_suite_all, 120.0},
        {"section-concentration", section_concentration, 30.0},
        {"curvature-calibration", curvature_calibration, 180.0},
        {"primitives", primitives, 0.0},
    };

    int failures = 0;
    for (size_t i = 0; i < criteria.size(); ++i) {
        std::ostringstream detail;
        bool ok = false;
        auto t0 = Clock::now();
        try {
            ok = criteria[i].run(detail);
        } catch (const std::exception& e) {
            detail << "exception: " << e.what();
        }
        double secs = std::chrono::duration<double>(Clock::now() - t0).count();
        if (ok && criteria[i].budget_secs > 0.0 && secs > criteria[i].budget_secs) {
            ok = false;
            detail << " [exceeded " << fmt(criteria[i].budget_secs)
                   << "s budget]";
        }
        std::printf("[%s] %2zu %-26s %7.1fs  %s\n", ok ? "PASS" : "FAIL", i + 1,
                    criteria[i].name, secs, detail.str().c_str());
        std::fflush(stdout);
        if (!ok) ++failures;
    }
    if (failures == 0)
        std::printf("all %zu criteria passed\n", criteria.size());
    else
        std::printf("%d of %zu criteria FAILED\n", failures, criteria.size());
    return failures;
}
