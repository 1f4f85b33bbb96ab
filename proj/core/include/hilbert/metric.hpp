#ifndef HILBERT_METRIC_HPP
#define HILBERT_METRIC_HPP

#include <optional>
#include <vector>

#include "hilbert/convex_body.hpp"
#include "hilbert/nets.hpp"

namespace hilbert {

/// Hilbert distance d(p,q) = 1/2 log of the cross ratio of the chord
/// endpoints through p and q. Symmetric bit-for-bit (arguments are
/// canonicalised). Throws PointNotInterior.
double hilbert_distance(const ConvexBody& body, const Vec& p, const Vec& q);

/// Funk distance log(|pb| / |qb|); asymmetric, its symmetrisation is the
/// Hilbert distance.
double funk_distance(const ConvexBody& body, const Vec& p, const Vec& q);

/// Finsler norm F(p, v) = 1/2 (1/t+ + 1/t-), positively 1-homogeneous in v.
double finsler_norm(const ConvexBody& body, const Vec& p, const Vec& v);

/// Radial extent s >= 0 with hilbert_distance(p, p + s u) = R, in closed
/// form from the chord hits. s < t+ always.
double ball_radial_extent(const ConvexBody& body, const Vec& p, const Vec& u, double R);

/// Dilation y + (1 - e^{-2R})(body - y); empty (nullopt) for R <= 0.
std::optional<ConvexBody> asymptotic_ball(const ConvexBody& body, const Vec& y, double R);

/// Macbeath region M'(x) = x + (1/5 (body - x) cap 1/5 (x - body)).
ConvexBody macbeath_region(const ConvexBody& body, const Vec& x);

/// Euclidean distance from x to the boundary along the ray o -> x.
/// Throws CoincidentPoints when x == o.
double ray_distance(const ConvexBody& body, const Vec& o, const Vec& x);

/// Unit tangent ball of the Finsler norm at p, sampled on a direction net,
/// with the Lebesgue volumes of the ball and its polar dual and the two
/// induced volume densities.
struct TangentBall {
    Vec point;
    std::vector<double> radial; // r(u_j) for the first net.pair_count() dirs
    double leb_ball = 0.0;
    double leb_polar = 0.0;
    double busemann_density = 0.0;        // omega_d / leb_ball
    double holmes_thompson_density = 0.0; // leb_polar / omega_d
};

TangentBall tangent_ball(const ConvexBody& body, const Vec& p, int n_dirs = 0);
TangentBall tangent_ball(const ConvexBody& body, const Vec& p, const DirectionNet& net);

// -------------------------------------------------------------------------
// Batched density machinery shared with the volume engine.

/// Chord hits along every net direction from a moving base point, with all
/// direction-dependent quantities precomputed once per (shape, net).
class ChordEvaluator {
public:
    ChordEvaluator(const ConvexBody& body, std::shared_ptr<const DirectionNet> net);

    const DirectionNet& net() const { return *net_; }

    /// t[i] = boundary hit time along net.dirs[i] from x (strictly interior).
    void hits(const Vec& x, std::vector<double>& t) const;

    struct Impl;

private:
    std::shared_ptr<const Impl> impl_;
    std::shared_ptr<const DirectionNet> net_;
};

struct DensityPair {
    double busemann = 0.0;
    double holmes_thompson = 0.0;
};

/// Evaluates both volume densities at interior points. Near-boundary
/// evaluations need care: the tangent ball degenerates into a needle whose
/// radial function no fixed net resolves, so two families get exact routes
/// derived from the chord oracle alone:
///   - 2D polytopes: F(p,.) is the support function of K = (A + -A)/2 with
///     A = conv{ n_i / margin_i }, so Leb[beta*] = area(K) and
///     Leb[beta] = area(K polar), both exact;
///   - ellipsoids (Riemannian case): F^2 is a quadratic form, reconstructed
///     by polarisation from d(d+1)/2 Finsler evaluations.
/// Everything else uses the sampled-net estimators (fine away from the
/// boundary). prefer_exact = false forces the net estimator.
class DensityEvaluator {
public:
    DensityEvaluator(const ConvexBody& body, std::shared_ptr<const DirectionNet> net,
                     bool prefer_exact = true);

    enum class Mode { net, exact_polygon, exact_riemannian };

    struct Workspace {
        std::vector<double> hits;
        std::vector<double> radial;
        std::vector<Vec> pts;
    };

    DensityPair operator()(const Vec& x, Workspace& ws) const;
    Mode mode() const { return mode_; }
    const DirectionNet& net() const { return chords_->net(); }

private:
    DensityPair eval_net(const Vec& x, Workspace& ws) const;
    DensityPair eval_polygon(const Vec& x, Workspace& ws) const;
    DensityPair eval_riemannian(const Vec& x) const;

    Mode mode_ = Mode::net;
    int dim_;
    std::optional<ChordEvaluator> chords_;
    // exact_polygon data
    std::vector<Vec> normals_;
    std::vector<double> offsets_;
    // exact_riemannian data
    Vec ell_center_, ell_axes_;
};

/// Leb[beta] = (1/d) * integral of r^d over the sphere (net quadrature).
double ball_volume_from_radial(const DirectionNet& net, const std::vector<double>& r);

/// Leb[beta*]: exact dual polygon in 2D, support-max inner approximation in
/// higher dimension, closed form in 1D.
double polar_volume_from_radial(const DirectionNet& net, const std::vector<double>& r);

} // namespace hilbert

#endif
