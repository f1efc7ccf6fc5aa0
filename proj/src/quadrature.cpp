#include "toric/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

namespace toric {

namespace {

// Legendre polynomial value and derivative by the three-term recurrence.
void legendre_pd(int k, double x, double& p, double& dp) {
    double p0 = 1.0, p1 = x;
    if (k == 0) {
        p = 1.0;
        dp = 0.0;
        return;
    }
    for (int j = 2; j <= k; ++j) {
        double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
        p0 = p1;
        p1 = p2;
    }
    p = p1;
    dp = k * (x * p1 - p0) / (x * x - 1.0);
}

struct Rule1D {
    std::vector<double> nodes01;    // on [0, 1]
    std::vector<double> weights01;  // summing to 1
};

Rule1D rule_on_unit(int order) {
    auto [x, w] = gauss_legendre(order);
    Rule1D r;
    r.nodes01.resize(x.size());
    r.weights01.resize(w.size());
    for (size_t i = 0; i < x.size(); ++i) {
        r.nodes01[i] = 0.5 * (x[i] + 1.0);
        r.weights01[i] = 0.5 * w[i];
    }
    return r;
}

enum class CellKind { inside, cut };

struct Cell {
    Eigen::VectorXd lo, hi;
    double value = 0.0, error = 0.0;
    int depth = 0;
    long id = 0;
    CellKind kind = CellKind::inside;
};

struct HeapEntry {
    double error;
    long id;
    size_t slot;
    bool operator<(const HeapEntry& o) const {
        if (error != o.error) return error < o.error;
        return id > o.id;  // older cells first on ties, deterministically
    }
};

using Polygon = std::vector<Eigen::Vector2d>;

Polygon clip_halfplane(const Polygon& poly, const Eigen::Vector2d& u, double c) {
    // keep { p : c - u.p >= 0 }
    Polygon out;
    const size_t n = poly.size();
    for (size_t s = 0; s < n; ++s) {
        const Eigen::Vector2d& a = poly[s];
        const Eigen::Vector2d& b = poly[(s + 1) % n];
        double la = c - u.dot(a);
        double lb = c - u.dot(b);
        if (la >= 0.0) out.push_back(a);
        if ((la > 0.0 && lb < 0.0) || (la < 0.0 && lb > 0.0)) {
            double t = la / (la - lb);
            out.push_back(a + t * (b - a));
        }
    }
    return out;
}

double polygon_area(const Polygon& p) {
    double a = 0.0;
    for (size_t i = 0; i < p.size(); ++i) {
        const auto& s = p[i];
        const auto& e = p[(i + 1) % p.size()];
        a += s.x() * e.y() - e.x() * s.y();
    }
    return 0.5 * a;
}

class Engine {
public:
    Engine(const Polytope* domain, Eigen::VectorXd lo, Eigen::VectorXd hi,
           const ScalarField& f, const QuadratureSpec& spec)
        : domain_(domain),
          box_lo_(std::move(lo)),
          box_hi_(std::move(hi)),
          f_(f),
          spec_(spec),
          dim_(static_cast<int>(box_lo_.size())),
          main_(rule_on_unit(spec.gauss_order)),
          check_(rule_on_unit(spec.check_order)),
          pt_(dim_) {}

    IntegrationResult run() {
        seed_base_grid();
        refine();
        return reduce();
    }

private:
    // ---- geometry classification -------------------------------------

    // 1 = fully inside, 0 = cut, -1 = fully outside (exact for convex
    // domains: a box is inside iff all corners are, outside iff one facet
    // separates every corner).
    int classify(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) const {
        if (!domain_) return 1;
        const int d = domain_->facet_count();
        const auto& U = domain_->normal_matrix();
        const auto& c = domain_->offset_vector();
        bool all_inside = true;
        for (int i = 0; i < d; ++i) {
            // extreme values of l_i over the box, by sign of the normal
            double lmin = c[i], lmax = c[i];
            for (int j = 0; j < dim_; ++j) {
                double u = U(i, j);
                if (u >= 0.0) {
                    lmin -= u * hi[j];
                    lmax -= u * lo[j];
                } else {
                    lmin -= u * lo[j];
                    lmax -= u * hi[j];
                }
            }
            if (lmax <= 0.0) return -1;
            if (lmin < 0.0) all_inside = false;
        }
        return all_inside ? 1 : 0;
    }

    // ---- cell evaluation ----------------------------------------------

    double tensor_gauss(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
                        const Rule1D& rule) {
        const int k = static_cast<int>(rule.nodes01.size());
        double vol = 1.0;
        for (int j = 0; j < dim_; ++j) vol *= hi[j] - lo[j];
        std::vector<int> idx(dim_, 0);
        double sum = 0.0;
        for (;;) {
            double w = 1.0;
            for (int j = 0; j < dim_; ++j) {
                pt_[j] = lo[j] + rule.nodes01[idx[j]] * (hi[j] - lo[j]);
                w *= rule.weights01[idx[j]];
            }
            sum += w * f_(pt_);
            int axis = 0;
            while (axis < dim_) {
                if (++idx[axis] < k) break;
                idx[axis] = 0;
                ++axis;
            }
            if (axis == dim_) break;
        }
        return sum * vol;
    }

    double interval_gauss(double a, double b, const Rule1D& rule) {
        double sum = 0.0;
        for (size_t i = 0; i < rule.nodes01.size(); ++i) {
            pt_[0] = a + rule.nodes01[i] * (b - a);
            sum += rule.weights01[i] * f_(pt_);
        }
        return sum * (b - a);
    }

    // Duffy-type map of the unit square onto a triangle; the extra factor u
    // is the Jacobian, absorbed into the weights.
    double triangle_gauss(const Eigen::Vector2d& A, const Eigen::Vector2d& B,
                          const Eigen::Vector2d& C, const Rule1D& rule) {
        double two_area = (B - A).x() * (C - A).y() - (C - A).x() * (B - A).y();
        double sum = 0.0;
        for (size_t i = 0; i < rule.nodes01.size(); ++i) {
            double u = rule.nodes01[i];
            for (size_t j = 0; j < rule.nodes01.size(); ++j) {
                double v = rule.nodes01[j];
                Eigen::Vector2d p = A + u * (B - A) + (u * v) * (C - B);
                pt_[0] = p.x();
                pt_[1] = p.y();
                sum += rule.weights01[i] * rule.weights01[j] * u * f_(pt_);
            }
        }
        return sum * std::abs(two_area);
    }

    void evaluate(Cell& cell) {
        if (cell.kind == CellKind::inside) {
            double v = (dim_ == 1) ? interval_gauss(cell.lo[0], cell.hi[0], main_)
                                   : tensor_gauss(cell.lo, cell.hi, main_);
            double vc = (dim_ == 1) ? interval_gauss(cell.lo[0], cell.hi[0], check_)
                                    : tensor_gauss(cell.lo, cell.hi, check_);
            cell.value = v;
            cell.error = std::abs(v - vc);
            return;
        }
        if (dim_ == 1) {
            double a = cell.lo[0], b = cell.hi[0];
            const auto& U = domain_->normal_matrix();
            const auto& c = domain_->offset_vector();
            for (int i = 0; i < domain_->facet_count() && a < b; ++i) {
                double u = U(i, 0);
                if (u > 0.0)
                    b = std::min(b, c[i] / u);
                else if (u < 0.0)
                    a = std::max(a, c[i] / u);
            }
            if (a >= b) {
                cell.value = cell.error = 0.0;
                return;
            }
            cell.value = interval_gauss(a, b, main_);
            cell.error = std::abs(cell.value - interval_gauss(a, b, check_));
            return;
        }
        if (dim_ == 2) {
            Polygon poly = {{cell.lo[0], cell.lo[1]},
                            {cell.hi[0], cell.lo[1]},
                            {cell.hi[0], cell.hi[1]},
                            {cell.lo[0], cell.hi[1]}};
            const auto& U = domain_->normal_matrix();
            const auto& c = domain_->offset_vector();
            for (int i = 0; i < domain_->facet_count() && poly.size() >= 3; ++i)
                poly = clip_halfplane(poly, U.row(i).transpose(), c[i]);
            if (poly.size() < 3 || std::abs(polygon_area(poly)) < 1e-300) {
                cell.value = cell.error = 0.0;
                return;
            }
            Eigen::Vector2d ctr = Eigen::Vector2d::Zero();
            for (const auto& p : poly) ctr += p;
            ctr /= static_cast<double>(poly.size());
            double v = 0.0, vc = 0.0;
            for (size_t k = 0; k < poly.size(); ++k) {
                const auto& B = poly[k];
                const auto& C = poly[(k + 1) % poly.size()];
                v += triangle_gauss(ctr, B, C, main_);
                vc += triangle_gauss(ctr, B, C, check_);
            }
            cell.value = v;
            cell.error = std::abs(v - vc);
            return;
        }
        evaluate_cut_sampled(cell);
    }

    // Fallback for cut cells in dimension >= 3: uniform sampling with
    // inside-fraction weighting.  Coarse; refined cells shrink the error.
    void evaluate_cut_sampled(Cell& cell) {
        const int per_axis = 4;
        double vol = 1.0;
        for (int j = 0; j < dim_; ++j) vol *= cell.hi[j] - cell.lo[j];
        std::vector<int> idx(dim_, 0);
        long total = 0, inside = 0;
        double sum = 0.0, fmin = 0.0, fmax = 0.0;
        bool first = true;
        for (;;) {
            for (int j = 0; j < dim_; ++j)
                pt_[j] = cell.lo[j] +
                         (idx[j] + 0.5) / per_axis * (cell.hi[j] - cell.lo[j]);
            ++total;
            double fv = 0.0;
            if (domain_->strictly_inside(pt_)) {
                ++inside;
                fv = f_(pt_);
                sum += fv;
            }
            if (first) {
                fmin = fmax = fv;
                first = false;
            } else {
                fmin = std::min(fmin, fv);
                fmax = std::max(fmax, fv);
            }
            int axis = 0;
            while (axis < dim_) {
                if (++idx[axis] < per_axis) break;
                idx[axis] = 0;
                ++axis;
            }
            if (axis == dim_) break;
        }
        cell.value = inside == 0 ? 0.0 : vol * sum / static_cast<double>(total);
        cell.error = 0.5 * vol * (fmax - fmin) *
                     (static_cast<double>(inside) / static_cast<double>(total));
    }

    // ---- adaptive driver ----------------------------------------------

    void add_cell(Eigen::VectorXd lo, Eigen::VectorXd hi, int depth) {
        int cls = classify(lo, hi);
        if (cls < 0) return;
        Cell cell;
        cell.lo = std::move(lo);
        cell.hi = std::move(hi);
        cell.depth = depth;
        cell.id = next_id_++;
        cell.kind = cls == 1 ? CellKind::inside : CellKind::cut;
        evaluate(cell);
        total_value_ += cell.value;
        total_error_ += cell.error;
        if (cell.depth < spec_.max_depth)
            heap_.push(HeapEntry{cell.error, cell.id, cells_.size()});
        cells_.push_back(std::move(cell));
    }

    void seed_base_grid() {
        std::vector<int> idx(dim_, 0);
        Eigen::VectorXd width = box_hi_ - box_lo_;
        for (;;) {
            Eigen::VectorXd lo(dim_), hi(dim_);
            for (int j = 0; j < dim_; ++j) {
                lo[j] = box_lo_[j] + idx[j] * width[j] / spec_.base_cells;
                hi[j] = box_lo_[j] + (idx[j] + 1) * width[j] / spec_.base_cells;
            }
            add_cell(std::move(lo), std::move(hi), 0);
            int axis = 0;
            while (axis < dim_) {
                if (++idx[axis] < spec_.base_cells) break;
                idx[axis] = 0;
                ++axis;
            }
            if (axis == dim_) break;
        }
    }

    bool converged() const {
        return total_error_ <=
               spec_.rel_tol * std::max(std::abs(total_value_), 1e-300);
    }

    void refine() {
        while (!converged() && !heap_.empty() &&
               static_cast<long>(cells_.size()) < spec_.max_cells) {
            HeapEntry top = heap_.top();
            heap_.pop();
            Cell& parent = cells_[top.slot];
            if (parent.id != top.id) continue;  // stale entry
            if (parent.error == 0.0) break;     // nothing left to gain

            // split along the widest axis
            int axis = 0;
            double w = parent.hi[0] - parent.lo[0];
            for (int j = 1; j < dim_; ++j)
                if (parent.hi[j] - parent.lo[j] > w) {
                    w = parent.hi[j] - parent.lo[j];
                    axis = j;
                }
            double mid = 0.5 * (parent.lo[axis] + parent.hi[axis]);
            Eigen::VectorXd lo = parent.lo, hi = parent.hi;
            total_value_ -= parent.value;
            total_error_ -= parent.error;
            int depth = parent.depth + 1;
            // deactivate parent (kept in place; value zeroed out)
            parent.value = parent.error = 0.0;
            parent.id = -1;

            Eigen::VectorXd hi_left = hi;
            hi_left[axis] = mid;
            Eigen::VectorXd lo_right = lo;
            lo_right[axis] = mid;
            add_cell(lo, hi_left, depth);
            add_cell(lo_right, hi, depth);
        }
    }

    IntegrationResult reduce() {
        // Fixed-order compensated sum over live cells (creation order).
        double sum = 0.0, comp = 0.0, err = 0.0;
        long live = 0;
        for (const Cell& c : cells_) {
            if (c.id < 0) continue;
            ++live;
            double t = c.value - comp;
            double s = sum + t;
            comp = (s - sum) - t;
            sum = s;
            err += c.error;
        }
        IntegrationResult res;
        res.value = sum;
        res.error = err;
        res.cells = live;
        res.converged = err <= spec_.rel_tol * std::max(std::abs(sum), 1e-300);
        return res;
    }

    const Polytope* domain_;
    Eigen::VectorXd box_lo_, box_hi_;
    const ScalarField& f_;
    QuadratureSpec spec_;
    int dim_;
    Rule1D main_, check_;
    Eigen::VectorXd pt_;

    std::vector<Cell> cells_;
    std::priority_queue<HeapEntry> heap_;
    double total_value_ = 0.0, total_error_ = 0.0;
    long next_id_ = 0;
};

}  // namespace

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int order) {
    if (order < 1) throw std::invalid_argument("Gauss order must be >= 1");
    std::vector<double> x(order), w(order);
    for (int i = 0; i < order; ++i) {
        // Chebyshev-based initial guess, then Newton on P_order.
        double xi = std::cos(M_PI * (i + 0.75) / (order + 0.5));
        double p = 0.0, dp = 1.0;
        for (int it = 0; it < 100; ++it) {
            legendre_pd(order, xi, p, dp);
            double delta = p / dp;
            xi -= delta;
            if (std::abs(delta) < 1e-15) break;
        }
        legendre_pd(order, xi, p, dp);
        // The Chebyshev guesses run from +1 down to -1; store ascending.
        x[order - 1 - i] = xi;
        w[order - 1 - i] = 2.0 / ((1.0 - xi * xi) * dp * dp);
    }
    return {x, w};
}

QuadratureSpec QuadratureSpec::defaults_for(int dim) {
    QuadratureSpec s;
    if (dim <= 1) {
        s.base_cells = 32;
        s.rel_tol = 1e-8;
    } else if (dim == 2) {
        s.base_cells = 24;
        s.rel_tol = 1e-6;
    } else {
        s.base_cells = 8;
        s.rel_tol = 1e-4;
    }
    return s;
}

QuadratureSpec QuadratureSpec::resolved(int dim) const {
    QuadratureSpec s = *this;
    QuadratureSpec d = defaults_for(dim);
    if (s.base_cells == 0) s.base_cells = d.base_cells;
    if (s.rel_tol == 0.0) s.rel_tol = d.rel_tol;
    if (s.base_cells < 1) throw std::invalid_argument("base_cells must be >= 1");
    if (s.rel_tol <= 0.0) throw std::invalid_argument("rel_tol must be positive");
    if (s.max_depth < 0) throw std::invalid_argument("max_depth must be >= 0");
    if (s.gauss_order < 2 || s.check_order < 1 || s.check_order >= s.gauss_order)
        throw std::invalid_argument("need gauss_order > check_order >= 1");
    return s;
}

IntegrationResult integrate(const Polytope& domain, const ScalarField& f,
                            QuadratureSpec spec) {
    QuadratureSpec rs = spec.resolved(domain.dim());
    auto [lo, hi] = domain.bounding_box();
    Engine engine(&domain, lo, hi, f, rs);
    return engine.run();
}

IntegrationResult integrate_box(const Eigen::VectorXd& lo,
                                const Eigen::VectorXd& hi, const ScalarField& f,
                                QuadratureSpec spec) {
    if (lo.size() != hi.size() || lo.size() == 0)
        throw std::invalid_argument("box bounds mismatch");
    if (((hi - lo).array() <= 0.0).any())
        throw std::invalid_argument("box is empty");
    QuadratureSpec rs = spec.resolved(static_cast<int>(lo.size()));
    Engine engine(nullptr, lo, hi, f, rs);
    return engine.run();
}

double facet_integral(const Polytope& domain, int facet, const ScalarField& f,
                      QuadratureSpec spec, double eps0) {
    if (facet < 0 || facet >= domain.facet_count())
        throw std::out_of_range("facet index out of range");
    if (eps0 <= 0.0) throw std::invalid_argument("eps0 must be positive");

    double F0 = integrate(domain, f, spec).value;
    double D[3];
    double eps = eps0;
    for (int k = 0; k < 3; ++k, eps *= 0.5) {
        DilationVector h = DilationVector::Zero(domain.facet_count());
        h[facet] = eps;
        double Fe = integrate(domain.dilate(h), f, spec).value;
        D[k] = (Fe - F0) / eps;
    }
    // one-sided first differences carry error a1*eps + a2*eps^2 + ...;
    // two Richardson stages cancel both leading terms.
    double r1 = 2.0 * D[1] - D[0];
    double r2 = 2.0 * D[2] - D[1];
    return (4.0 * r2 - r1) / 3.0;
}

}  // namespace toric
