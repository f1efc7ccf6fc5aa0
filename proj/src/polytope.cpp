#include "toric/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace toric {

namespace {

// Walks all k-subsets of {0, ..., d-1} in lexicographic order.
bool next_combination(std::vector<int>& idx, int d) {
    int k = static_cast<int>(idx.size());
    for (int i = k - 1; i >= 0; --i) {
        if (idx[i] < d - k + i) {
            ++idx[i];
            for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
            return true;
        }
    }
    return false;
}

std::vector<int> first_combination(int k) {
    std::vector<int> idx(k);
    std::iota(idx.begin(), idx.end(), 0);
    return idx;
}

long long llabs_ll(long long v) { return v < 0 ? -v : v; }

long long gcd_ll(long long a, long long b) {
    a = llabs_ll(a);
    b = llabs_ll(b);
    while (b != 0) {
        long long t = a % b;
        a = b;
        b = t;
    }
    return a;
}

std::string vec_to_string(const Eigen::VectorXi& v) {
    std::ostringstream os;
    os << "(";
    for (int i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
    os << ")";
    return os.str();
}

std::string vec_to_string(const Eigen::VectorXd& v) {
    std::ostringstream os;
    os << "(";
    for (int i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
    os << ")";
    return os.str();
}

}  // namespace

long long integer_determinant(std::vector<std::vector<long long>> a) {
    const int n = static_cast<int>(a.size());
    if (n == 0) return 1;
    long long sign = 1;
    long long prev = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (a[k][k] == 0) {
            int pivot = -1;
            for (int r = k + 1; r < n; ++r) {
                if (a[r][k] != 0) {
                    pivot = r;
                    break;
                }
            }
            if (pivot < 0) return 0;
            std::swap(a[k], a[pivot]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i) {
            for (int j = k + 1; j < n; ++j) {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    return sign * a[n - 1][n - 1];
}

Polytope::Polytope(int dim, std::vector<Eigen::VectorXi> normals,
                   Eigen::VectorXd offsets)
    : dim_(dim), normals_(std::move(normals)), offsets_(std::move(offsets)) {
    if (dim_ < 1) throw std::invalid_argument("polytope dimension must be >= 1");
    if (static_cast<int>(normals_.size()) != offsets_.size())
        throw std::invalid_argument("facet normal/offset count mismatch");
    if (static_cast<int>(normals_.size()) < dim_ + 1)
        throw std::invalid_argument("a bounded polytope needs at least dim+1 facets");
    for (size_t i = 0; i < normals_.size(); ++i) {
        if (normals_[i].size() != dim_) {
            std::ostringstream os;
            os << "facet " << i << ": normal has dimension " << normals_[i].size()
               << ", expected " << dim_;
            throw std::invalid_argument(os.str());
        }
        if (normals_[i].isZero()) {
            std::ostringstream os;
            os << "facet " << i << ": normal is the zero vector";
            throw std::invalid_argument(os.str());
        }
    }
    finalize();
}

void Polytope::finalize() {
    const int d = facet_count();
    normal_mat_.resize(d, dim_);
    for (int i = 0; i < d; ++i) normal_mat_.row(i) = normals_[i].cast<double>();

    // Boundedness: the recession cone {dir : u_i . dir <= 0 for all i} must
    // be trivial.  Its extreme rays solve dim-1 of the equations
    // u_i . dir = 0, so checking every (dim-1)-subset's null direction is
    // exhaustive.  This must run before vertex enumeration: an unbounded set
    // can still have vertices, which would misreport the failure below.
    {
        Eigen::FullPivLU<Eigen::MatrixXd> lu(normal_mat_);
        if (lu.rank() < dim_)
            throw std::invalid_argument("polytope is unbounded (normals do not span)");
        auto direction_escapes = [&](const Eigen::VectorXd& dir) {
            bool all_nonpos = true, all_nonneg = true;
            for (int i = 0; i < d; ++i) {
                double s = normal_mat_.row(i).dot(dir);
                if (s > 1e-10) all_nonpos = false;
                if (s < -1e-10) all_nonneg = false;
            }
            return all_nonpos || all_nonneg;
        };
        if (dim_ == 1) {
            Eigen::VectorXd e(1);
            e[0] = 1.0;
            if (direction_escapes(e))
                throw std::invalid_argument("polytope is unbounded");
        } else {
            std::vector<int> idx = first_combination(dim_ - 1);
            do {
                Eigen::MatrixXd A(dim_ - 1, dim_);
                for (int r = 0; r < dim_ - 1; ++r) A.row(r) = normal_mat_.row(idx[r]);
                Eigen::FullPivLU<Eigen::MatrixXd> sub(A);
                if (sub.dimensionOfKernel() != 1) continue;
                Eigen::VectorXd dir = sub.kernel().col(0);
                if (dir.norm() < 1e-12) continue;
                dir.normalize();
                if (direction_escapes(dir))
                    throw std::invalid_argument("polytope is unbounded");
            } while (next_combination(idx, d));
        }
    }

    scale_ = 1.0;
    for (int i = 0; i < d; ++i)
        scale_ = std::max(scale_, std::abs(offsets_[i]));

    // Candidate vertices: solutions of every dim-subset of active facets,
    // kept when feasible for all constraints.
    vertices_.clear();
    const double tol = 1e-9 * scale_;
    if (d >= dim_) {
        std::vector<int> idx = first_combination(dim_);
        do {
            Eigen::MatrixXd A(dim_, dim_);
            Eigen::VectorXd b(dim_);
            for (int r = 0; r < dim_; ++r) {
                A.row(r) = normal_mat_.row(idx[r]);
                b[r] = offsets_[idx[r]];
            }
            Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
            if (!lu.isInvertible()) continue;
            Eigen::VectorXd y = lu.solve(b);
            if (!y.allFinite()) continue;
            bool feasible = true;
            for (int i = 0; i < d && feasible; ++i)
                if (offsets_[i] - normal_mat_.row(i).dot(y) < -tol) feasible = false;
            if (!feasible) continue;
            bool duplicate = false;
            for (const auto& v : vertices_) {
                if ((v - y).lpNorm<Eigen::Infinity>() <= 10 * tol) {
                    duplicate = true;
                    break;
                }
            }
            if (!duplicate) vertices_.push_back(std::move(y));
        } while (next_combination(idx, d));
    }
    if (vertices_.empty())
        throw std::runtime_error("polytope is empty (no feasible vertex)");

    box_lo_ = vertices_[0];
    box_hi_ = vertices_[0];
    for (const auto& v : vertices_) {
        box_lo_ = box_lo_.cwiseMin(v);
        box_hi_ = box_hi_.cwiseMax(v);
    }
    scale_ = std::max(scale_, (box_hi_ - box_lo_).maxCoeff());

    // Full-dimensionality: the vertex centroid must be strictly interior.
    Eigen::VectorXd c = centroid();
    if (min_l(c) <= 1e-12 * scale_)
        throw std::runtime_error("polytope has empty interior");
}

const Eigen::VectorXi& Polytope::facet_normal(int i) const {
    if (i < 0 || i >= facet_count())
        throw std::out_of_range("facet index out of range");
    return normals_[static_cast<size_t>(i)];
}

double Polytope::facet_offset(int i) const {
    if (i < 0 || i >= facet_count())
        throw std::out_of_range("facet index out of range");
    return offsets_[i];
}

double Polytope::l(int i, const Eigen::VectorXd& y) const {
    if (i < 0 || i >= facet_count())
        throw std::out_of_range("facet index out of range");
    return offsets_[i] - normal_mat_.row(i).dot(y);
}

Eigen::VectorXd Polytope::l_all(const Eigen::VectorXd& y) const {
    return offsets_ - normal_mat_ * y;
}

double Polytope::min_l(const Eigen::VectorXd& y) const {
    double m = std::numeric_limits<double>::infinity();
    for (int i = 0; i < facet_count(); ++i)
        m = std::min(m, offsets_[i] - normal_mat_.row(i).dot(y));
    return m;
}

bool Polytope::contains(const Eigen::VectorXd& y, double tol) const {
    return min_l(y) >= -tol;
}

bool Polytope::strictly_inside(const Eigen::VectorXd& y, double margin) const {
    return min_l(y) > margin;
}

Eigen::VectorXd Polytope::centroid() const {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(dim_);
    for (const auto& v : vertices_) c += v;
    return c / static_cast<double>(vertices_.size());
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> Polytope::bounding_box() const {
    return {box_lo_, box_hi_};
}

double Polytope::diameter() const { return (box_hi_ - box_lo_).norm(); }

std::vector<int> Polytope::facet_vertex_ids(int i) const {
    const double tol = 1e-8 * scale_;
    std::vector<int> ids;
    for (size_t v = 0; v < vertices_.size(); ++v)
        if (std::abs(l(i, vertices_[v])) <= tol) ids.push_back(static_cast<int>(v));
    return ids;
}

Eigen::VectorXd Polytope::facet_centroid(int i) const {
    auto ids = facet_vertex_ids(i);
    if (ids.empty()) throw std::runtime_error("facet has no incident vertices");
    Eigen::VectorXd c = Eigen::VectorXd::Zero(dim_);
    for (int id : ids) c += vertices_[static_cast<size_t>(id)];
    return c / static_cast<double>(ids.size());
}

Eigen::VectorXd Polytope::facet_unit_inward(int i) const {
    if (i < 0 || i >= facet_count())
        throw std::out_of_range("facet index out of range");
    Eigen::VectorXd u = -normal_mat_.row(i).transpose();
    return u / u.norm();
}

Polytope Polytope::dilate(const DilationVector& h) const {
    if (h.size() != facet_count())
        throw std::invalid_argument("dilation vector length must equal facet count");
    return Polytope(dim_, normals_, offsets_ + h);
}

Polytope intersect_box(const Polytope& p, const Eigen::VectorXd& lo,
                       const Eigen::VectorXd& hi) {
    const int n = p.dim();
    if (lo.size() != n || hi.size() != n)
        throw std::invalid_argument("box bounds have wrong dimension");
    std::vector<Eigen::VectorXi> normals;
    Eigen::VectorXd offsets(p.facet_count() + 2 * n);
    for (int i = 0; i < p.facet_count(); ++i) {
        normals.push_back(p.facet_normal(i));
        offsets[i] = p.facet_offset(i);
    }
    for (int j = 0; j < n; ++j) {
        Eigen::VectorXi e = Eigen::VectorXi::Zero(n);
        e[j] = 1;
        normals.push_back(e);
        offsets[p.facet_count() + 2 * j] = hi[j];
        normals.push_back(-e);
        offsets[p.facet_count() + 2 * j + 1] = -lo[j];
    }
    return Polytope(n, std::move(normals), std::move(offsets));
}

DelzantPolytope::DelzantPolytope(int dim, std::vector<Facet> facets)
    : Polytope(dim,
               [&facets]() {
                   std::vector<Eigen::VectorXi> ns;
                   ns.reserve(facets.size());
                   for (const auto& f : facets) ns.push_back(f.normal);
                   return ns;
               }(),
               [&facets]() {
                   Eigen::VectorXd cs(facets.size());
                   for (size_t i = 0; i < facets.size(); ++i)
                       cs[static_cast<Eigen::Index>(i)] =
                           static_cast<double>(facets[i].offset);
                   return cs;
               }()),
      facets_(std::move(facets)) {
    validate();
}

long long DelzantPolytope::integer_offset(int i) const {
    if (i < 0 || i >= facet_count())
        throw std::out_of_range("facet index out of range");
    return facets_[static_cast<size_t>(i)].offset;
}

void DelzantPolytope::validate() const {
    const int d = facet_count();
    const int n = dim();

    for (int i = 0; i < d; ++i) {
        long long g = 0;
        for (int j = 0; j < n; ++j) g = gcd_ll(g, facets_[i].normal[j]);
        if (g != 1) {
            std::ostringstream os;
            os << "facet " << i << ": normal " << vec_to_string(facets_[i].normal)
               << " is not primitive (gcd " << g << ")";
            throw std::invalid_argument(os.str());
        }
    }

    // Boundedness is already enforced by the Polytope base constructor, so
    // only the lattice conditions remain.

    // Delzant condition at every vertex: exactly n incident facets whose
    // normals have determinant +-1 (exact integer arithmetic).
    const double tol = 1e-8 * scale();
    for (const auto& v : vertices()) {
        std::vector<int> active;
        for (int i = 0; i < d; ++i)
            if (std::abs(l(i, v)) <= tol) active.push_back(i);
        if (static_cast<int>(active.size()) != n) {
            std::ostringstream os;
            os << "vertex " << vec_to_string(v) << ": " << active.size()
               << " facets meet (expected " << n << "); polytope is not simple";
            throw std::invalid_argument(os.str());
        }
        std::vector<std::vector<long long>> M(n, std::vector<long long>(n));
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c)
                M[r][c] = facets_[static_cast<size_t>(active[r])].normal[c];
        long long det = integer_determinant(M);
        if (det != 1 && det != -1) {
            std::ostringstream os;
            os << "vertex " << vec_to_string(v) << ": facet normals";
            for (int a : active) os << " " << vec_to_string(facets_[a].normal);
            os << " have determinant " << det << " (Delzant condition needs +-1)";
            throw std::invalid_argument(os.str());
        }
    }
}

LatticeSet DelzantPolytope::lattice_points(int N) const {
    if (N < 1) throw std::invalid_argument("lattice scale N must be >= 1");
    const int n = dim();
    const int d = facet_count();

    std::vector<long long> lo(n), hi(n);
    for (int j = 0; j < n; ++j) {
        double a = box_lo_[j] * N, b = box_hi_[j] * N;
        lo[j] = static_cast<long long>(std::ceil(a - 1e-9));
        hi[j] = static_cast<long long>(std::floor(b + 1e-9));
    }

    LatticeSet set;
    set.scale = N;
    std::vector<long long> m(lo);
    if (n == 0) return set;
    for (;;) {
        bool inside = true;
        for (int i = 0; i < d && inside; ++i) {
            long long s = static_cast<long long>(N) * facets_[i].offset;
            for (int j = 0; j < n; ++j)
                s -= m[j] * static_cast<long long>(facets_[i].normal[j]);
            if (s < 0) inside = false;
        }
        if (inside) {
            Eigen::VectorXi p(n);
            for (int j = 0; j < n; ++j) p[j] = static_cast<int>(m[j]);
            set.points.push_back(std::move(p));
        }
        int axis = 0;
        while (axis < n) {
            if (++m[axis] <= hi[axis]) break;
            m[axis] = lo[axis];
            ++axis;
        }
        if (axis == n) break;
    }
    return set;
}

DelzantPolytope make_interval(long long lambda) {
    if (lambda <= 0) throw std::invalid_argument("interval length must be positive");
    Eigen::VectorXi left(1), right(1);
    left[0] = -1;
    right[0] = 1;
    return DelzantPolytope(1, {{left, 0}, {right, lambda}});
}

DelzantPolytope make_simplex(int n) {
    if (n < 1) throw std::invalid_argument("simplex dimension must be >= 1");
    std::vector<Facet> facets;
    for (int j = 0; j < n; ++j) {
        Eigen::VectorXi e = Eigen::VectorXi::Zero(n);
        e[j] = -1;
        facets.push_back({e, 0});
    }
    facets.push_back({Eigen::VectorXi::Ones(n), 1});
    return DelzantPolytope(n, std::move(facets));
}

DelzantPolytope make_square(long long a, long long b) {
    if (a <= 0 || b <= 0)
        throw std::invalid_argument("square side lengths must be positive");
    Eigen::VectorXi e1(2), e2(2);
    e1 << 1, 0;
    e2 << 0, 1;
    return DelzantPolytope(2, {{-e1, 0}, {-e2, 0}, {e1, a}, {e2, b}});
}

DelzantPolytope make_hirzebruch(long long k, long long c1, long long c2) {
    if (k < 0) throw std::invalid_argument("hirzebruch twist k must be >= 0");
    if (c1 <= 0 || c2 <= 0 || c1 - k * c2 <= 0)
        throw std::invalid_argument(
            "hirzebruch offsets need c1 > 0, c2 > 0 and c1 - k*c2 > 0");
    Eigen::VectorXi e1(2), e2(2), slant(2);
    e1 << 1, 0;
    e2 << 0, 1;
    slant << 1, static_cast<int>(k);
    return DelzantPolytope(2, {{-e1, 0}, {-e2, 0}, {slant, c1}, {e2, c2}});
}

}  // namespace toric
