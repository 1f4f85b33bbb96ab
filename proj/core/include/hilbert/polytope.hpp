#ifndef HILBERT_POLYTOPE_HPP
#define HILBERT_POLYTOPE_HPP

#include <functional>
#include <iosfwd>
#include <memory>
#include <vector>

#include "hilbert/geometry.hpp"

namespace hilbert {

/// Supporting halfspace <n, x> <= offset together with the ids of the
/// vertices lying on it.
struct PolytopeFacet {
    Vec normal;    // unit, outward
    double offset = 0.0;
    std::vector<int> vertices; // sorted vertex ids
};

/// One face of the lattice: its dimension, sorted vertex-id set, and the
/// incidences to the neighbouring ranks.
struct Face {
    int dim = 0;
    std::vector<int> vertices;
    std::vector<int> subfaces;   // ids at rank dim-1, sorted
    std::vector<int> superfaces; // ids at rank dim+1, sorted
};

/// Maximal chain of face ids, one per dimension 0..d.
struct Flag {
    std::vector<int> faces;
};

class Polytope;

/// Simplex with one vertex in the relative interior of each face of a flag.
struct FlagSimplex {
    Flag flag;
    std::vector<Vec> vertices;
    double volume() const { return simplex_volume(vertices); }
};

/// Picks a relative-interior point of a face; used by flag decompositions.
using FacePointPicker = std::function<Vec(const Polytope&, const Face&)>;

/// Bounded convex polytope with vertex list, facet halfspaces and the full
/// graded face lattice. Instances are immutable and always full-dimensional
/// in their ambient space. Exact lattices are supported for d <= 4.
class Polytope {
public:
    /// Convex hull of a point set affinely spanning dimension d (1..4).
    /// Throws DegenerateInput otherwise.
    static std::shared_ptr<const Polytope> convex_hull(const std::vector<Vec>& points, int d);

    int dim() const { return dim_; }
    const std::vector<Vec>& vertices() const { return vertices_; }
    const std::vector<PolytopeFacet>& facets() const { return facets_; }
    const Vec& base_point() const { return base_point_; }
    double scale() const { return scale_; }

    /// Faces of rank k (0..d); rank d holds the single top face.
    const std::vector<Face>& faces(int k) const { return lattice_[k]; }
    int face_count(int k) const { return static_cast<int>(lattice_[k].size()); }
    long long total_face_count() const;

    /// Number of maximal flags via the facet recursion
    /// |Flags(P)| = sum_F |Flags(F)| with memoisation over the lattice.
    long long flag_count() const;

    /// All maximal flags, lexicographic in (f_0, ..., f_d) face ids.
    std::vector<Flag> enumerate_flags() const;

    /// Barycentric flag decomposition (picker = face barycenter).
    std::vector<FlagSimplex> flag_decomposition() const;
    /// Flag decomposition with a custom relative-interior point picker.
    /// Throws PickerPointNotInFace if the picker leaves its face.
    std::vector<FlagSimplex> flag_decomposition(const FacePointPicker& picker) const;

    Vec face_barycenter(const Face& f) const;
    bool point_in_relative_interior(const Face& f, const Vec& x) const;

    /// Lebesgue volume via the facet divergence formula (independent of any
    /// flag decomposition).
    double volume() const;
    /// Exact centroid (volume-weighted barycentric simplices).
    Vec centroid() const;

    bool contains(const Vec& x, double tol = 1e-12) const;
    /// Signed Euclidean distance to the nearest facet plane (positive inside).
    double margin(const Vec& x) const;

    /// Image under x -> A x + b with A invertible; combinatorics are reused.
    std::shared_ptr<const Polytope> affine_image(const Mat& A, const Vec& b) const;

    /// Plain-text lattice dump: "rank <k> id <i> vertices <ids...>".
    void write_lattice(std::ostream& os) const;

private:
    Polytope() = default;
    void build_lattice_and_geometry();
    long long face_flag_count(int rank, int id, std::vector<std::vector<long long>>& memo) const;

    int dim_ = 0;
    double scale_ = 1.0;
    std::vector<Vec> vertices_;
    std::vector<PolytopeFacet> facets_;
    std::vector<std::vector<Face>> lattice_; // [rank][id]
    Vec base_point_;
    double volume_ = 0.0;
    Vec centroid_;
};

/// Regular d-simplex with unit circumradius centered at the origin.
std::shared_ptr<const Polytope> regular_simplex(int d);
/// Regular n-gon with unit circumradius centered at the origin (d = 2).
std::shared_ptr<const Polytope> regular_polygon(int n);
/// Axis-aligned hypercube [-h, h]^d.
std::shared_ptr<const Polytope> hypercube(int d, double h = 1.0);

} // namespace hilbert

#endif
