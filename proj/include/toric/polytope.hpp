#pragma once

#include <Eigen/Dense>

#include <string>
#include <utility>
#include <vector>

namespace toric {

// One facet of a rational convex polytope, written as
//     l(y) = offset - normal . y >= 0
// with a primitive integer outward normal.  Offsets are integers for the
// polytopes we construct directly; dilations (which shift offsets by real
// amounts) live in the plain Polytope class below.
struct Facet {
    Eigen::VectorXi normal;
    long long offset = 0;
};

// Lattice points m of the dilated lattice polytope N*P, i.e. all integer m
// with N*c_i - m.u_i >= 0 for every facet.  Membership is decided in exact
// integer arithmetic.
struct LatticeSet {
    int scale = 1;
    std::vector<Eigen::VectorXi> points;
};

// Per-facet dilation amounts h; the dilated polytope has offsets c_i + h_i.
using DilationVector = Eigen::VectorXd;

// A bounded convex polytope with integer facet normals and real offsets.
// This is the state produced by dilations: the geometry works, but no
// Delzant-type structure is claimed and no lattice operations are offered.
class Polytope {
public:
    Polytope(int dim, std::vector<Eigen::VectorXi> normals, Eigen::VectorXd offsets);
    virtual ~Polytope() = default;

    int dim() const { return dim_; }
    int facet_count() const { return static_cast<int>(normals_.size()); }

    const Eigen::VectorXi& facet_normal(int i) const;
    double facet_offset(int i) const;

    // Rows are the facet normals, cast to double; handy for inner loops.
    const Eigen::MatrixXd& normal_matrix() const { return normal_mat_; }
    const Eigen::VectorXd& offset_vector() const { return offsets_; }

    // l_i(y) = c_i - u_i . y
    double l(int i, const Eigen::VectorXd& y) const;
    Eigen::VectorXd l_all(const Eigen::VectorXd& y) const;
    double min_l(const Eigen::VectorXd& y) const;

    bool contains(const Eigen::VectorXd& y, double tol = 1e-12) const;
    bool strictly_inside(const Eigen::VectorXd& y, double margin = 0.0) const;

    const std::vector<Eigen::VectorXd>& vertices() const { return vertices_; }
    Eigen::VectorXd centroid() const;  // mean of the vertices
    std::pair<Eigen::VectorXd, Eigen::VectorXd> bounding_box() const;
    double diameter() const;

    // Vertices incident to facet i (indices into vertices()).
    std::vector<int> facet_vertex_ids(int i) const;
    Eigen::VectorXd facet_centroid(int i) const;
    // Unit vector pointing from facet i into the interior.
    Eigen::VectorXd facet_unit_inward(int i) const;

    // Shifts every offset by h_i.  Throws std::runtime_error if the result
    // has empty interior.  The result carries no Delzant guarantees.
    Polytope dilate(const DilationVector& h) const;

    // Reference length scale used for geometric tolerances.
    double scale() const { return scale_; }

protected:
    void finalize();  // computes vertices, bounding box, tolerances

    int dim_;
    std::vector<Eigen::VectorXi> normals_;
    Eigen::VectorXd offsets_;
    Eigen::MatrixXd normal_mat_;
    std::vector<Eigen::VectorXd> vertices_;
    Eigen::VectorXd box_lo_, box_hi_;
    double scale_ = 1.0;
};

// Intersection of a polytope with an axis-aligned box, as a Polytope with
// 2*dim extra facets.  Used for restricted-mass integrals.
Polytope intersect_box(const Polytope& p, const Eigen::VectorXd& lo,
                       const Eigen::VectorXd& hi);

// A Delzant polytope: bounded, every normal primitive, and at every vertex
// exactly dim facets meet whose normals form a basis of the integer lattice
// (determinant +-1, checked exactly).  Construction validates all of this
// and throws std::invalid_argument naming the first violation.
class DelzantPolytope : public Polytope {
public:
    DelzantPolytope(int dim, std::vector<Facet> facets);

    const std::vector<Facet>& facets() const { return facets_; }
    long long integer_offset(int i) const;

    // All integer m with N*c_i - m.u_i >= 0 for every i (exact arithmetic).
    LatticeSet lattice_points(int N) const;

private:
    void validate() const;

    std::vector<Facet> facets_;
};

// Exact integer determinant (Bareiss fraction-free elimination).
long long integer_determinant(std::vector<std::vector<long long>> a);

// Standard examples.  All of them are Delzant; constructor arguments are
// validated (positive lengths, and c1 > k*c2 for the Hirzebruch trapezoid).
DelzantPolytope make_interval(long long lambda);
DelzantPolytope make_simplex(int n);
DelzantPolytope make_square(long long a, long long b);
DelzantPolytope make_hirzebruch(long long k, long long c1, long long c2);

}  // namespace toric
