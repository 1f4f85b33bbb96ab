#ifndef HILBERT_CONVEX_BODY_HPP
#define HILBERT_CONVEX_BODY_HPP

#include <cstdint>
#include <memory>
#include <optional>

#include "hilbert/geometry.hpp"
#include "hilbert/polytope.hpp"

namespace hilbert {

/// Euclidean sandwich about a point: center + l*E inside the body, body
/// inside center + L*E.
struct Certificate {
    Vec center;
    double inner_radius = 0.0;
    double outer_radius = 0.0;
};

enum class ShapeKind { ellipsoid, pnorm_ball, polytope, affine_image, intersection };

/// Geometric oracle behind a ConvexBody. All directions are assumed unit
/// length unless stated; support() accepts any nonzero vector and is
/// 1-homogeneous.
class Shape {
public:
    virtual ~Shape() = default;
    virtual int dim() const = 0;
    virtual ShapeKind kind() const = 0;
    /// Shape-specific inequality value: > 0 strictly inside, < 0 outside.
    virtual double defining_margin(const Vec& x) const = 0;
    /// Time t > 0 with x = p + t u on the boundary; p must be strictly
    /// interior. No validity checks (hot path).
    virtual double ray_hit(const Vec& p, const Vec& u) const = 0;
    virtual double support(const Vec& u) const = 0;
    virtual Vec support_point(const Vec& u) const = 0;
    virtual std::optional<Vec> exact_centroid() const { return std::nullopt; }
};

/// Immutable oracle-style convex body with a verified sandwich certificate.
/// Copies are cheap shared handles; all operations are pure.
class ConvexBody {
public:
    static ConvexBody ellipsoid(const Vec& center, const Vec& axes);
    static ConvexBody unit_ball(int d);
    static ConvexBody pnorm_ball(const Vec& center, double scale, double p);
    static ConvexBody polytope_body(std::shared_ptr<const Polytope> poly);
    static ConvexBody affine_image(const ConvexBody& inner, const Mat& A, const Vec& b);
    /// Intersection with a caller-supplied certificate (the caller must be
    /// able to witness interiority; see macbeath_region for the main use).
    static ConvexBody intersection(const ConvexBody& a, const ConvexBody& b,
                                   const Certificate& cert);

    int dim() const { return shape_->dim(); }
    ShapeKind kind() const { return shape_->kind(); }
    const Certificate& certificate() const { return cert_; }
    const Shape& shape() const { return *shape_; }
    std::shared_ptr<const Shape> shape_ptr() const { return shape_; }
    /// Non-null when the body is polytopal (possibly via affine images).
    std::shared_ptr<const Polytope> as_polytope() const;

    struct EllipsoidData {
        Vec center;
        Vec axes;
    };
    /// Set when the shape is an axis-aligned ellipsoid.
    std::optional<EllipsoidData> as_ellipsoid() const;

    struct PNormData {
        Vec center;
        double scale = 0.0;
        double exponent = 0.0;
    };
    /// Set when the shape is a p-norm ball.
    std::optional<PNormData> as_pnorm_ball() const;

    bool contains(const Vec& x) const { return shape_->defining_margin(x) >= 0.0; }
    /// Conservative Euclidean distance to the boundary (exact for polytopes,
    /// gauge-based lower bound otherwise). Negative outside.
    double interior_margin(const Vec& x) const;
    double ray_hit(const Vec& p, const Vec& u) const { return shape_->ray_hit(p, u); }

private:
    ConvexBody(std::shared_ptr<const Shape> s, Certificate c)
        : shape_(std::move(s)), cert_(std::move(c)) {}
    std::shared_ptr<const Shape> shape_;
    Certificate cert_;
};

/// Boundary-hit times along +u and -u from an interior point.
struct Chord {
    double t_minus = 0.0;
    double t_plus = 0.0;
};

/// Halfspace slice <x,u> >= offset of a body, with apex, base centroid and
/// width bookkeeping.
struct Cap {
    ConvexBody body;
    Vec normal;          // outward unit direction of the slice
    double offset = 0.0; // halfspace is <x, normal> >= offset
    Vec apex;
    Vec base_centroid;
    double width = 0.0;
};

/// Boundary hits of the line p + t u. Throws PointNotInterior.
Chord chord_endpoints(const ConvexBody& body, const Vec& p, const Vec& u);

/// Support value h(u) = sup_{x in body} <x, u> for unit u.
double support_value(const ConvexBody& body, const Vec& u);

/// Support-sampled Hausdorff distance (lower bound converging as the net
/// refines). Throws DimensionMismatch.
double hausdorff_distance(const ConvexBody& a, const ConvexBody& b, int n_dirs = 4096);

/// Exact Hausdorff distance between convex polygons via their merged
/// normal fans.
double hausdorff_distance_exact(const Polytope& a, const Polytope& b);

/// Homothety y + factor * (body - y). Throws NonpositiveFactor.
ConvexBody scale_about(const ConvexBody& body, const Vec& y, double factor);

/// Center of mass. Exact for polytopes, ellipsoids, p-balls and affine
/// images of those; Monte Carlo (seeded) otherwise. Throws DegenerateBody.
Vec centroid(const ConvexBody& body, long mc_samples = 1000000,
             std::uint64_t seed = 0x5eedULL);

/// Cap of the given width below the supporting hyperplane in direction u.
/// The base centroid is the centroid of the (d-1)-dimensional slice.
/// Throws WidthOutOfRange.
Cap make_cap(const ConvexBody& body, const Vec& u, double width,
             int slice_dirs = 2048);

/// Sampled check of the sandwich certificate. Not used on hot paths.
bool verify_certificate(const ConvexBody& body, int n_dirs = 512, double tol = 1e-7);

} // namespace hilbert

#endif
