#include "hilbert/metric.hpp"

#include <cmath>
#include <limits>

#include "hilbert/errors.hpp"

namespace hilbert {
namespace {

// Relative guard against degenerate chords; cross ratios amplify boundary
// error logarithmically.
void require_interior(const ConvexBody& body, const Vec& x, const char* who) {
    double guard = 1e-12 * std::max(1.0, body.certificate().outer_radius);
    if (body.interior_margin(x) <= guard) throw PointNotInterior(who);
}

} // namespace

double hilbert_distance(const ConvexBody& body, const Vec& p, const Vec& q) {
    if (p.size() != body.dim() || q.size() != body.dim()) throw DimensionMismatch();
    require_interior(body, p, "hilbert_distance: p");
    require_interior(body, q, "hilbert_distance: q");
    // Canonical argument order makes the metric symmetric bit-for-bit.
    const Vec* a = &p;
    const Vec* b = &q;
    for (int i = 0; i < p.size(); ++i) {
        if ((*a)(i) == (*b)(i)) continue;
        if ((*a)(i) > (*b)(i)) std::swap(a, b);
        break;
    }
    Vec diff = *b - *a;
    double s = diff.norm();
    if (s == 0.0) return 0.0;
    Vec u = diff / s;
    double tp = body.ray_hit(*a, u);
    double tm = body.ray_hit(*a, -u);
    return 0.5 * std::log((s + tm) / tm * (tp / (tp - s)));
}

double funk_distance(const ConvexBody& body, const Vec& p, const Vec& q) {
    if (p.size() != body.dim() || q.size() != body.dim()) throw DimensionMismatch();
    require_interior(body, p, "funk_distance: p");
    require_interior(body, q, "funk_distance: q");
    Vec diff = q - p;
    double s = diff.norm();
    if (s == 0.0) return 0.0;
    double tp = body.ray_hit(p, diff / s);
    return std::log(tp / (tp - s));
}

double finsler_norm(const ConvexBody& body, const Vec& p, const Vec& v) {
    if (p.size() != body.dim() || v.size() != body.dim()) throw DimensionMismatch();
    require_interior(body, p, "finsler_norm: p");
    double nv = v.norm();
    if (nv == 0.0) return 0.0;
    Vec u = v / nv;
    double tp = body.ray_hit(p, u);
    double tm = body.ray_hit(p, -u);
    return nv * 0.5 * (1.0 / tp + 1.0 / tm);
}

double ball_radial_extent(const ConvexBody& body, const Vec& p, const Vec& u, double R) {
    if (R < 0) throw BadConfig("ball_radial_extent: negative radius");
    require_interior(body, p, "ball_radial_extent: p");
    if (R == 0) return 0.0;
    Vec un = u.normalized();
    double tp = body.ray_hit(p, un);
    double tm = body.ray_hit(p, -un);
    double e2 = std::exp(2.0 * R);
    // s = t+ t- (e^{2R}-1) / (t+ + e^{2R} t-), written as t+ minus the
    // boundary gap to stay stable for large R.
    double gap = tp * (tp + tm) / (tp + e2 * tm);
    return tp - gap;
}

std::optional<ConvexBody> asymptotic_ball(const ConvexBody& body, const Vec& y, double R) {
    if (R <= 0) return std::nullopt;
    require_interior(body, y, "asymptotic_ball: y");
    double factor = -std::expm1(-2.0 * R);
    return scale_about(body, y, factor);
}

ConvexBody macbeath_region(const ConvexBody& body, const Vec& x) {
    require_interior(body, x, "macbeath_region: x");
    const int d = body.dim();
    ConvexBody shrunk = scale_about(body, x, 0.2);
    Mat A = -0.2 * Mat::Identity(d, d);
    ConvexBody reflected = ConvexBody::affine_image(body, A, 1.2 * x);
    const Certificate& c = body.certificate();
    Certificate cert{x, body.interior_margin(x) / 5.0,
                     ((x - c.center).norm() + c.outer_radius) / 5.0};
    return ConvexBody::intersection(shrunk, reflected, cert);
}

double ray_distance(const ConvexBody& body, const Vec& o, const Vec& x) {
    require_interior(body, o, "ray_distance: o");
    if (body.shape().defining_margin(x) <= 0) throw PointNotInterior("ray_distance: x");
    Vec diff = x - o;
    double n = diff.norm();
    if (n <= 1e-14 * std::max(1.0, body.certificate().outer_radius))
        throw CoincidentPoints("ray_distance: x == o");
    double t = body.ray_hit(o, diff / n);
    return t - n;
}

// ---------------------------------------------------------------- density

double ball_volume_from_radial(const DirectionNet& net, const std::vector<double>& r) {
    const int d = net.dim;
    const int pairs = net.pair_count();
    double acc = 0;
    for (int j = 0; j < pairs; ++j) acc += std::pow(r[j], d);
    return 2.0 * net.weight * acc / d;
}

namespace {

double polar_area_dual_polygon(const DirectionNet& net, const std::vector<double>& r) {
    // beta_net = conv{ r_j u_j } over the full ring; its polar is the polygon
    // whose vertices are dual to consecutive edges. Shoelace on those gives
    // Leb[beta*_net] exactly.
    const int pairs = net.pair_count();
    const int n = net.size();
    auto vertex = [&](int i) -> Vec {
        double ri = r[i < pairs ? i : i - pairs];
        return ri * net.dirs[i];
    };
    double area = 0;
    Vec w_prev(2), w_first(2);
    for (int i = 0; i < n; ++i) {
        const Vec xi = vertex(i);
        const Vec xj = vertex((i + 1) % n);
        double det = xi(0) * xj(1) - xi(1) * xj(0);
        Vec w(2);
        w << (xj(1) - xi(1)) / det, (xi(0) - xj(0)) / det;
        if (i > 0) area += w_prev(0) * w(1) - w_prev(1) * w(0);
        else w_first = w;
        w_prev = w;
    }
    area += w_prev(0) * w_first(1) - w_prev(1) * w_first(0);
    return 0.5 * std::abs(area);
}

double polar_volume_support_max(const DirectionNet& net, const std::vector<double>& r) {
    // Spec'd inner approximation: h(u) = max_j r_j <u_j, u> on the same net,
    // then Leb[beta*] = (1/d) integral h^{-d}.
    const int d = net.dim;
    const int pairs = net.pair_count();
    double acc = 0;
    for (int i = 0; i < pairs; ++i) {
        double h = 0;
        const Vec& ui = net.dirs[i];
        for (int j = 0; j < pairs; ++j) {
            double dot = std::abs(net.dirs[j].dot(ui));
            double v = r[j] * dot;
            if (v > h) h = v;
        }
        acc += std::pow(h, -d);
    }
    return 2.0 * net.weight * acc / d;
}

} // namespace

double polar_volume_from_radial(const DirectionNet& net, const std::vector<double>& r) {
    if (net.dim == 1) return 2.0 / r[0];
    if (net.dim == 2) return polar_area_dual_polygon(net, r);
    return polar_volume_support_max(net, r);
}

// ---------------------------------------------------------- ChordEvaluator

struct ChordEvaluator::Impl {
    virtual ~Impl() = default;
    virtual void hits(const Vec& x, std::vector<double>& t) const = 0;
};

namespace {

struct GenericChords final : ChordEvaluator::Impl {
    std::shared_ptr<const Shape> shape;
    std::shared_ptr<const DirectionNet> net;
    void hits(const Vec& x, std::vector<double>& t) const override {
        const int n = net->size();
        t.resize(n);
        for (int i = 0; i < n; ++i) t[i] = shape->ray_hit(x, net->dirs[i]);
    }
};

struct PolytopeChords final : ChordEvaluator::Impl {
    std::shared_ptr<const Polytope> poly;
    std::shared_ptr<const DirectionNet> net;
    // den[i][j] = <n_i, u_j> for j < pairs
    std::vector<std::vector<double>> den;

    void init() {
        const int pairs = net->pair_count();
        den.resize(poly->facets().size());
        for (std::size_t i = 0; i < den.size(); ++i) {
            den[i].resize(pairs);
            for (int j = 0; j < pairs; ++j)
                den[i][j] = poly->facets()[i].normal.dot(net->dirs[j]);
        }
    }

    void hits(const Vec& x, std::vector<double>& t) const override {
        const int pairs = net->pair_count();
        const int n = net->size();
        constexpr double kInf = std::numeric_limits<double>::infinity();
        t.assign(n, kInf);
        const auto& facets = poly->facets();
        for (std::size_t i = 0; i < facets.size(); ++i) {
            const double m = facets[i].offset - facets[i].normal.dot(x);
            const double* drow = den[i].data();
            for (int j = 0; j < pairs; ++j) {
                double dj = drow[j];
                if (dj > 0) {
                    double v = m / dj;
                    if (v < t[j]) t[j] = v;
                } else if (dj < 0) {
                    double v = m / -dj;
                    if (v < t[j + pairs]) t[j + pairs] = v;
                }
            }
        }
    }
};

struct EllipsoidChords final : ChordEvaluator::Impl {
    Vec center, axes;
    std::shared_ptr<const DirectionNet> net;
    std::vector<double> A; // ||u_j ./ a||^2, j < pairs
    std::vector<Vec> w;    // u_j ./ a

    void init() {
        const int pairs = net->pair_count();
        A.resize(pairs);
        w.resize(pairs);
        for (int j = 0; j < pairs; ++j) {
            w[j] = net->dirs[j].cwiseQuotient(axes);
            A[j] = w[j].squaredNorm();
        }
    }

    void hits(const Vec& x, std::vector<double>& t) const override {
        const int pairs = net->pair_count();
        t.resize(2 * pairs);
        Vec z = (x - center).cwiseQuotient(axes);
        double C = z.squaredNorm() - 1.0;
        for (int j = 0; j < pairs; ++j) {
            double B = z.dot(w[j]);
            double sq = std::sqrt(std::max(B * B - A[j] * C, 0.0));
            t[j] = (B >= 0) ? -C / (B + sq) : (sq - B) / A[j];
            t[j + pairs] = (B >= 0) ? (B + sq) / A[j] : -C / (sq - B);
        }
    }
};

} // namespace

ChordEvaluator::ChordEvaluator(const ConvexBody& body, std::shared_ptr<const DirectionNet> net)
    : net_(std::move(net)) {
    if (auto poly = body.as_polytope()) {
        auto impl = std::make_shared<PolytopeChords>();
        impl->poly = poly;
        impl->net = net_;
        impl->init();
        impl_ = impl;
        return;
    }
    if (auto ell = body.as_ellipsoid()) {
        auto impl = std::make_shared<EllipsoidChords>();
        impl->center = ell->center;
        impl->axes = ell->axes;
        impl->net = net_;
        impl->init();
        impl_ = impl;
        return;
    }
    auto impl = std::make_shared<GenericChords>();
    impl->shape = body.shape_ptr();
    impl->net = net_;
    impl_ = impl;
}

void ChordEvaluator::hits(const Vec& x, std::vector<double>& t) const { impl_->hits(x, t); }

// -------------------------------------------------------- DensityEvaluator

DensityEvaluator::DensityEvaluator(const ConvexBody& body,
                                   std::shared_ptr<const DirectionNet> net,
                                   bool prefer_exact)
    : dim_(body.dim()) {
    if (prefer_exact) {
        if (auto ell = body.as_ellipsoid()) {
            mode_ = Mode::exact_riemannian;
            ell_center_ = ell->center;
            ell_axes_ = ell->axes;
            return;
        }
        if (dim_ == 2) {
            if (auto poly = body.as_polytope(); poly && poly->facets().size() <= 96) {
                mode_ = Mode::exact_polygon;
                for (const auto& f : poly->facets()) {
                    normals_.push_back(f.normal);
                    offsets_.push_back(f.offset);
                }
                return;
            }
        }
    }
    mode_ = Mode::net;
    chords_.emplace(body, std::move(net));
}

DensityPair DensityEvaluator::eval_net(const Vec& x, Workspace& ws) const {
    const DirectionNet& net = chords_->net();
    const int pairs = net.pair_count();
    chords_->hits(x, ws.hits);
    ws.radial.resize(pairs);
    for (int j = 0; j < pairs; ++j) {
        double tp = ws.hits[j];
        double tm = ws.hits[j + pairs];
        ws.radial[j] = 2.0 * tp * tm / (tp + tm);
    }
    double leb_ball = ball_volume_from_radial(net, ws.radial);
    double leb_polar = polar_volume_from_radial(net, ws.radial);
    double omega = unit_ball_volume(dim_);
    return {omega / leb_ball, leb_polar / omega};
}

DensityPair DensityEvaluator::eval_polygon(const Vec& x, Workspace& ws) const {
    const int m = static_cast<int>(normals_.size());
    ws.pts.clear();
    ws.radial.resize(m);
    for (int i = 0; i < m; ++i) ws.radial[i] = offsets_[i] - normals_[i].dot(x);
    // beta* = (A + -A)/2 with A = conv{ n_i / margin_i }
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            if (i == j) continue;
            ws.pts.push_back(0.5 * (normals_[i] / ws.radial[i] - normals_[j] / ws.radial[j]));
        }
    std::vector<Vec> ring = convex_hull_ring_2d(ws.pts);
    double leb_polar = polygon_area(ring);
    double leb_ball = polar_polygon_area(ring);
    const double omega = std::numbers::pi;
    return {omega / leb_ball, leb_polar / omega};
}

DensityPair DensityEvaluator::eval_riemannian(const Vec& x) const {
    // F(x,.)^2 is a quadratic form; recover it by polarisation.
    Vec z = (x - ell_center_).cwiseQuotient(ell_axes_);
    const double C = z.squaredNorm() - 1.0;
    auto finsler2 = [&](const Vec& u) {
        Vec w = u.cwiseQuotient(ell_axes_);
        double A = w.squaredNorm();
        double B = z.dot(w);
        double sq = std::sqrt(std::max(B * B - A * C, 0.0));
        // pick the cancellation-free expression per root
        double tp = (B >= 0) ? -C / (B + sq) : (sq - B) / A;
        double tm = (B >= 0) ? (B + sq) / A : -C / (sq - B);
        double f = 0.5 * (1.0 / tp + 1.0 / tm);
        return f * f;
    };
    Mat Q(dim_, dim_);
    for (int i = 0; i < dim_; ++i) {
        Vec e = Vec::Zero(dim_);
        e(i) = 1.0;
        Q(i, i) = finsler2(e);
    }
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < dim_; ++i)
        for (int j = i + 1; j < dim_; ++j) {
            Vec u = Vec::Zero(dim_);
            u(i) = inv_sqrt2;
            u(j) = inv_sqrt2;
            double qd = finsler2(u) - 0.5 * (Q(i, i) + Q(j, j));
            Q(i, j) = qd;
            Q(j, i) = qd;
        }
    double dens = std::sqrt(Q.determinant());
    return {dens, dens};
}

DensityPair DensityEvaluator::operator()(const Vec& x, Workspace& ws) const {
    switch (mode_) {
        case Mode::exact_polygon: return eval_polygon(x, ws);
        case Mode::exact_riemannian: return eval_riemannian(x);
        default: return eval_net(x, ws);
    }
}

TangentBall tangent_ball(const ConvexBody& body, const Vec& p, const DirectionNet& net) {
    require_interior(body, p, "tangent_ball: p");
    // The op contract is the sampled-net estimator; exact fast paths are an
    // engine-side concern.
    DensityEvaluator eval(body, std::make_shared<DirectionNet>(net), /*prefer_exact=*/false);
    DensityEvaluator::Workspace ws;
    DensityPair dp = eval(p, ws);
    TangentBall tb;
    tb.point = p;
    tb.radial = ws.radial;
    tb.leb_ball = unit_ball_volume(body.dim()) / dp.busemann;
    tb.leb_polar = dp.holmes_thompson * unit_ball_volume(body.dim());
    tb.busemann_density = dp.busemann;
    tb.holmes_thompson_density = dp.holmes_thompson;
    return tb;
}

TangentBall tangent_ball(const ConvexBody& body, const Vec& p, int n_dirs) {
    if (n_dirs != 0 && n_dirs < 16) throw BudgetTooSmall("tangent_ball needs n_dirs >= 16");
    return tangent_ball(body, p, DirectionNet::for_dim(body.dim(), n_dirs));
}

} // namespace hilbert
