#include "hilbert/convex_body.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hilbert/errors.hpp"
#include "hilbert/nets.hpp"
#include "hilbert/rng.hpp"

namespace hilbert {
namespace {

// ------------------------------------------------------------- ellipsoid

class EllipsoidShape final : public Shape {
public:
    EllipsoidShape(Vec center, Vec axes) : c_(std::move(center)), a_(std::move(axes)) {}

    int dim() const override { return static_cast<int>(c_.size()); }
    ShapeKind kind() const override { return ShapeKind::ellipsoid; }

    double defining_margin(const Vec& x) const override {
        return 1.0 - ((x - c_).cwiseQuotient(a_)).norm();
    }

    double ray_hit(const Vec& p, const Vec& u) const override {
        Vec z = (p - c_).cwiseQuotient(a_);
        Vec w = u.cwiseQuotient(a_);
        double A = w.squaredNorm();
        double B = z.dot(w);
        double C = z.squaredNorm() - 1.0;
        double sq = std::sqrt(std::max(B * B - A * C, 0.0));
        // cancellation-free root for points near the boundary
        return (B >= 0) ? -C / (B + sq) : (sq - B) / A;
    }

    double support(const Vec& u) const override { return c_.dot(u) + a_.cwiseProduct(u).norm(); }

    Vec support_point(const Vec& u) const override {
        Vec au = a_.cwiseProduct(u);
        return c_ + a_.cwiseProduct(au) / au.norm();
    }

    std::optional<Vec> exact_centroid() const override { return c_; }

    const Vec& center() const { return c_; }
    const Vec& axes() const { return a_; }

private:
    Vec c_, a_;
};

// ---------------------------------------------------------------- p-ball

class PNormShape final : public Shape {
public:
    PNormShape(Vec center, double scale, double p)
        : c_(std::move(center)), s_(scale), p_(p) {}

    int dim() const override { return static_cast<int>(c_.size()); }
    ShapeKind kind() const override { return ShapeKind::pnorm_ball; }

    double pnorm(const Vec& v) const {
        if (p_ == 1.0) return v.lpNorm<1>();
        if (p_ == 2.0) return v.norm();
        double acc = 0;
        for (int i = 0; i < v.size(); ++i) acc += std::pow(std::abs(v(i)), p_);
        return std::pow(acc, 1.0 / p_);
    }

    double defining_margin(const Vec& x) const override { return 1.0 - pnorm(x - c_) / s_; }

    double ray_hit(const Vec& p, const Vec& u) const override {
        Vec z = p - c_;
        if (p_ == 2.0) {
            double A = u.squaredNorm();
            double B = z.dot(u);
            double C = z.squaredNorm() - s_ * s_;
            double sq = std::sqrt(std::max(B * B - A * C, 0.0));
            return (B >= 0) ? -C / (B + sq) : (sq - B) / A;
        }
        // Safeguarded Newton on f(t) = sum |z_i + t u_i|^p - s^p; f is
        // convex with f(0) < 0.
        const double sp = std::pow(s_, p_);
        auto f = [&](double t, double& df) {
            double acc = 0;
            df = 0;
            for (int i = 0; i < z.size(); ++i) {
                double v = z(i) + t * u(i);
                double av = std::abs(v);
                double powp1 = std::pow(av, p_ - 1.0);
                acc += powp1 * av;
                df += p_ * powp1 * (v >= 0 ? 1.0 : -1.0) * u(i);
            }
            return acc - sp;
        };
        double lo = 0.0;
        double hi = z.norm() + s_ * std::sqrt(static_cast<double>(z.size())) + 1.0;
        double t = hi, df = 0;
        for (int it = 0; it < 200; ++it) {
            double val = f(t, df);
            if (val > 0) hi = t;
            else lo = t;
            double step = (df != 0.0) ? t - val / df : 0.5 * (lo + hi);
            t = (step > lo && step < hi) ? step : 0.5 * (lo + hi);
            if (hi - lo <= 1e-14 * hi) break;
        }
        return t;
    }

    double support(const Vec& u) const override {
        double q_norm;
        if (p_ == 1.0) {
            q_norm = u.lpNorm<Eigen::Infinity>();
        } else {
            double q = p_ / (p_ - 1.0);
            double acc = 0;
            for (int i = 0; i < u.size(); ++i) acc += std::pow(std::abs(u(i)), q);
            q_norm = std::pow(acc, 1.0 / q);
        }
        return c_.dot(u) + s_ * q_norm;
    }

    Vec support_point(const Vec& u) const override {
        const int d = dim();
        Vec z = Vec::Zero(d);
        if (p_ == 1.0) {
            int k = 0;
            for (int i = 1; i < d; ++i)
                if (std::abs(u(i)) > std::abs(u(k))) k = i;
            z(k) = u(k) >= 0 ? 1.0 : -1.0;
        } else {
            double q = p_ / (p_ - 1.0);
            double acc = 0;
            for (int i = 0; i < d; ++i) acc += std::pow(std::abs(u(i)), q);
            double qn = std::pow(acc, 1.0 / q);
            for (int i = 0; i < d; ++i) {
                double m = std::pow(std::abs(u(i)) / qn, q - 1.0);
                z(i) = (u(i) >= 0 ? m : -m);
            }
        }
        return c_ + s_ * z;
    }

    std::optional<Vec> exact_centroid() const override { return c_; }

    double exponent() const { return p_; }
    double ball_scale() const { return s_; }
    const Vec& center() const { return c_; }

private:
    Vec c_;
    double s_, p_;
};

// -------------------------------------------------------------- polytope

class PolytopeShape final : public Shape {
public:
    explicit PolytopeShape(std::shared_ptr<const Polytope> poly) : poly_(std::move(poly)) {}

    int dim() const override { return poly_->dim(); }
    ShapeKind kind() const override { return ShapeKind::polytope; }

    double defining_margin(const Vec& x) const override { return poly_->margin(x); }

    double ray_hit(const Vec& p, const Vec& u) const override {
        double t = std::numeric_limits<double>::infinity();
        for (const auto& f : poly_->facets()) {
            double den = f.normal.dot(u);
            if (den > 1e-300) t = std::min(t, (f.offset - f.normal.dot(p)) / den);
        }
        return t;
    }

    double support(const Vec& u) const override {
        double best = -std::numeric_limits<double>::infinity();
        for (const auto& v : poly_->vertices()) best = std::max(best, v.dot(u));
        return best;
    }

    Vec support_point(const Vec& u) const override {
        const auto& vs = poly_->vertices();
        int k = 0;
        for (int i = 1; i < static_cast<int>(vs.size()); ++i)
            if (vs[i].dot(u) > vs[k].dot(u)) k = i;
        return vs[k];
    }

    std::optional<Vec> exact_centroid() const override { return poly_->centroid(); }

    const std::shared_ptr<const Polytope>& poly() const { return poly_; }

private:
    std::shared_ptr<const Polytope> poly_;
};

// ---------------------------------------------------------- affine image

class AffineShape final : public Shape {
public:
    AffineShape(std::shared_ptr<const Shape> inner, Mat A, Vec b)
        : inner_(std::move(inner)), A_(std::move(A)), Ainv_(A_.inverse()), b_(std::move(b)) {}

    int dim() const override { return inner_->dim(); }
    ShapeKind kind() const override { return ShapeKind::affine_image; }

    double defining_margin(const Vec& x) const override {
        return inner_->defining_margin(Ainv_ * (x - b_));
    }

    double ray_hit(const Vec& p, const Vec& u) const override {
        Vec pp = Ainv_ * (p - b_);
        Vec w = Ainv_ * u;
        double nw = w.norm();
        return inner_->ray_hit(pp, w / nw) / nw;
    }

    double support(const Vec& u) const override {
        return b_.dot(u) + inner_->support(A_.transpose() * u);
    }

    Vec support_point(const Vec& u) const override {
        return A_ * inner_->support_point(A_.transpose() * u) + b_;
    }

    std::optional<Vec> exact_centroid() const override {
        if (auto c = inner_->exact_centroid()) return A_ * *c + b_;
        return std::nullopt;
    }

private:
    std::shared_ptr<const Shape> inner_;
    Mat A_, Ainv_;
    Vec b_;
};

// ---------------------------------------------------------- intersection

class IntersectionShape final : public Shape {
public:
    IntersectionShape(std::shared_ptr<const Shape> a, std::shared_ptr<const Shape> b,
                      Vec interior)
        : a_(std::move(a)), b_(std::move(b)), q_(std::move(interior)) {}

    int dim() const override { return a_->dim(); }
    ShapeKind kind() const override { return ShapeKind::intersection; }

    double defining_margin(const Vec& x) const override {
        return std::min(a_->defining_margin(x), b_->defining_margin(x));
    }

    double ray_hit(const Vec& p, const Vec& u) const override {
        return std::min(a_->ray_hit(p, u), b_->ray_hit(p, u));
    }

    // The support of an intersection has no closed form; a boundary-point
    // ascent from the interior witness converges because a linear functional
    // has no strict local maxima on the boundary of a convex body.
    double support(const Vec& u) const override { return u.dot(ascend(u)); }
    Vec support_point(const Vec& u) const override { return ascend(u); }

private:
    Vec boundary(const Vec& v) const { return q_ + ray_hit(q_, v) * v; }

    Vec ascend(const Vec& u) const {
        const int d = dim();
        Vec un = u.normalized();
        Vec best_dir = un;
        double best = un.dot(boundary(un));
        DirectionNet net = DirectionNet::for_dim(d, 128);
        for (const auto& v : net.dirs) {
            double val = un.dot(boundary(v));
            if (val > best) { best = val; best_dir = v; }
        }
        double step = 0.5;
        Rng rng(99);
        for (int round = 0; round < 40; ++round) {
            bool improved = false;
            for (int k = 0; k < 16; ++k) {
                Vec cand = (best_dir + step * random_unit_vector(d, rng)).normalized();
                double val = un.dot(boundary(cand));
                if (val > best) { best = val; best_dir = cand; improved = true; }
            }
            if (!improved) step *= 0.5;
            if (step < 1e-8) break;
        }
        return boundary(best_dir);
    }

    std::shared_ptr<const Shape> a_, b_;
    Vec q_;
};

double max_vertex_distance(const Polytope& poly, const Vec& y) {
    double best = 0;
    for (const auto& v : poly.vertices()) best = std::max(best, (v - y).norm());
    return best;
}

} // namespace

// -------------------------------------------------------------- factories

ConvexBody ConvexBody::ellipsoid(const Vec& center, const Vec& axes) {
    if (axes.minCoeff() <= 0) throw DegenerateBody("ellipsoid axes must be positive");
    Certificate cert{center, axes.minCoeff(), axes.maxCoeff()};
    return ConvexBody(std::make_shared<EllipsoidShape>(center, axes), cert);
}

ConvexBody ConvexBody::unit_ball(int d) {
    return ellipsoid(Vec::Zero(d), Vec::Ones(d));
}

ConvexBody ConvexBody::pnorm_ball(const Vec& center, double scale, double p) {
    if (p < 1.0) throw BadConfig("p-norm ball needs p >= 1");
    if (scale <= 0) throw DegenerateBody("p-norm ball needs positive scale");
    const int d = static_cast<int>(center.size());
    double f = std::pow(static_cast<double>(d), 0.5 - 1.0 / p);
    Certificate cert{center, p <= 2.0 ? scale * f : scale,
                     p <= 2.0 ? scale : scale * f};
    return ConvexBody(std::make_shared<PNormShape>(center, scale, p), cert);
}

ConvexBody ConvexBody::polytope_body(std::shared_ptr<const Polytope> poly) {
    Vec y = poly->base_point();
    double l = poly->margin(y);
    if (l <= 0) throw DegenerateBody("polytope base point is not interior");
    Certificate cert{y, l, max_vertex_distance(*poly, y)};
    return ConvexBody(std::make_shared<PolytopeShape>(std::move(poly)), cert);
}

ConvexBody ConvexBody::affine_image(const ConvexBody& inner, const Mat& A, const Vec& b) {
    Eigen::JacobiSVD<Mat> svd(A);
    double smax = svd.singularValues()(0);
    double smin = svd.singularValues()(A.cols() - 1);
    if (smin <= 1e-12 * smax) throw DegenerateBody("affine map is singular");
    if (auto poly = inner.as_polytope())
        return polytope_body(poly->affine_image(A, b));
    const Certificate& ic = inner.certificate();
    Certificate cert{A * ic.center + b, ic.inner_radius * smin, ic.outer_radius * smax};
    return ConvexBody(std::make_shared<AffineShape>(inner.shape_ptr(), A, b), cert);
}

ConvexBody ConvexBody::intersection(const ConvexBody& a, const ConvexBody& b,
                                    const Certificate& cert) {
    if (a.dim() != b.dim()) throw DimensionMismatch();
    if (a.shape().defining_margin(cert.center) <= 0 ||
        b.shape().defining_margin(cert.center) <= 0)
        throw PointNotInterior("intersection certificate center not interior");
    return ConvexBody(
        std::make_shared<IntersectionShape>(a.shape_ptr(), b.shape_ptr(), cert.center), cert);
}

std::shared_ptr<const Polytope> ConvexBody::as_polytope() const {
    if (auto* ps = dynamic_cast<const PolytopeShape*>(shape_.get())) return ps->poly();
    return nullptr;
}

std::optional<ConvexBody::EllipsoidData> ConvexBody::as_ellipsoid() const {
    if (auto* es = dynamic_cast<const EllipsoidShape*>(shape_.get()))
        return EllipsoidData{es->center(), es->axes()};
    return std::nullopt;
}

std::optional<ConvexBody::PNormData> ConvexBody::as_pnorm_ball() const {
    if (auto* ps = dynamic_cast<const PNormShape*>(shape_.get()))
        return PNormData{ps->center(), ps->ball_scale(), ps->exponent()};
    return std::nullopt;
}

double ConvexBody::interior_margin(const Vec& x) const {
    if (auto* ps = dynamic_cast<const PolytopeShape*>(shape_.get()))
        return ps->poly()->margin(x);
    double m = shape_->defining_margin(x);
    if (m <= 0) return m < 0 ? -1.0 : 0.0;
    const Vec& y = cert_.center;
    double dist = (x - y).norm();
    if (dist < 1e-300) return cert_.inner_radius;
    double t = shape_->ray_hit(y, (x - y) / dist);
    return (1.0 - dist / t) * cert_.inner_radius;
}

// ------------------------------------------------------------ operations

Chord chord_endpoints(const ConvexBody& body, const Vec& p, const Vec& u) {
    if (p.size() != body.dim() || u.size() != body.dim()) throw DimensionMismatch();
    double nu = u.norm();
    if (nu <= 0) throw Error("chord direction must be nonzero");
    if (body.shape().defining_margin(p) <= 0) throw PointNotInterior();
    Vec un = u / nu;
    return {body.ray_hit(p, -un), body.ray_hit(p, un)};
}

double support_value(const ConvexBody& body, const Vec& u) {
    double nu = u.norm();
    if (nu <= 0) throw Error("support direction must be nonzero");
    return body.shape().support(u / nu);
}

double hausdorff_distance(const ConvexBody& a, const ConvexBody& b, int n_dirs) {
    if (a.dim() != b.dim()) throw DimensionMismatch();
    DirectionNet net = DirectionNet::for_dim(a.dim(), n_dirs);
    double worst = 0;
    auto probe = [&](const Vec& u) {
        worst = std::max(worst, std::abs(a.shape().support(u) - b.shape().support(u)));
    };
    for (const auto& u : net.dirs) probe(u);
    // |h_a - h_b| peaks at support-function kinks, where uniform sampling
    // converges only linearly; probing facet normals catches those exactly.
    for (const ConvexBody* body : {&a, &b})
        if (auto poly = body->as_polytope())
            for (const auto& f : poly->facets()) probe(f.normal);
    return worst;
}

double hausdorff_distance_exact(const Polytope& a, const Polytope& b) {
    if (a.dim() != 2 || b.dim() != 2)
        throw DimensionMismatch("exact Hausdorff distance implemented for polygons");
    auto edge_normal_angles = [](const Polytope& p) {
        std::vector<double> out;
        for (const auto& f : p.facets()) out.push_back(std::atan2(f.normal(1), f.normal(0)));
        return out;
    };
    std::vector<double> events = edge_normal_angles(a);
    for (double t : edge_normal_angles(b)) events.push_back(t);
    std::sort(events.begin(), events.end());
    auto active_vertex = [](const Polytope& p, double th) {
        Vec u(2);
        u << std::cos(th), std::sin(th);
        const auto& vs = p.vertices();
        int k = 0;
        for (int i = 1; i < static_cast<int>(vs.size()); ++i)
            if (vs[i].dot(u) > vs[k].dot(u)) k = i;
        return vs[k];
    };
    double worst = 0;
    const int m = static_cast<int>(events.size());
    for (int i = 0; i < m; ++i) {
        double alpha = events[i];
        double beta = (i + 1 < m) ? events[i + 1] : events[0] + 2.0 * std::numbers::pi;
        if (beta - alpha < 1e-15) continue;
        double mid = 0.5 * (alpha + beta);
        Vec diff = active_vertex(a, mid) - active_vertex(b, mid);
        double r = diff.norm();
        if (r == 0) continue;
        double phi = std::atan2(diff(1), diff(0));
        auto val = [&](double th) { return std::abs(r * std::cos(th - phi)); };
        worst = std::max({worst, val(alpha), val(beta)});
        for (double peak : {phi, phi + std::numbers::pi}) {
            double t = peak;
            while (t < alpha) t += 2.0 * std::numbers::pi;
            while (t >= alpha + 2.0 * std::numbers::pi) t -= 2.0 * std::numbers::pi;
            if (t >= alpha && t <= beta) worst = std::max(worst, r);
        }
    }
    return worst;
}

ConvexBody scale_about(const ConvexBody& body, const Vec& y, double factor) {
    if (factor <= 0) throw NonpositiveFactor();
    const int d = body.dim();
    if (y.size() != d) throw DimensionMismatch();
    switch (body.kind()) {
        case ShapeKind::ellipsoid: {
            const auto& e = static_cast<const EllipsoidShape&>(body.shape());
            return ConvexBody::ellipsoid(y + factor * (e.center() - y), factor * e.axes());
        }
        case ShapeKind::pnorm_ball: {
            const auto& pb = static_cast<const PNormShape&>(body.shape());
            return ConvexBody::pnorm_ball(y + factor * (pb.center() - y),
                                          factor * pb.ball_scale(), pb.exponent());
        }
        default: {
            // Polytopes keep exact combinatorics through affine_image; other
            // shapes get a generic affine wrapper with the scaled certificate.
            Mat A = factor * Mat::Identity(d, d);
            return ConvexBody::affine_image(body, A, (1.0 - factor) * y);
        }
    }
}

Vec centroid(const ConvexBody& body, long mc_samples, std::uint64_t seed) {
    if (auto c = body.shape().exact_centroid()) return *c;
    const Certificate& cert = body.certificate();
    Rng rng(seed);
    Vec acc = Vec::Zero(body.dim());
    long hits = 0;
    for (long i = 0; i < mc_samples; ++i) {
        Vec x = random_in_ball(cert.center, cert.outer_radius, rng);
        if (body.contains(x)) {
            acc += x;
            ++hits;
        }
    }
    if (hits == 0) throw DegenerateBody("Monte Carlo centroid found no interior points");
    return acc / static_cast<double>(hits);
}

Cap make_cap(const ConvexBody& body, const Vec& u, double width, int slice_dirs) {
    const int d = body.dim();
    if (u.size() != d) throw DimensionMismatch();
    Vec un = u.normalized();
    double top = body.shape().support(un);
    double bottom = -body.shape().support(-un);
    if (!(width > 0) || width >= top - bottom) throw WidthOutOfRange();
    const double offset = top - width;
    Vec apex = body.shape().support_point(un);

    // Interior point of the slice: walk from an interior point strictly
    // below the base plane toward the apex.
    Vec y = body.certificate().center;
    if (un.dot(y) >= offset) {
        Vec w = body.shape().support_point(-un);
        double target = 0.5 * (offset + bottom);
        double s = (un.dot(y) - target) / (un.dot(y) - un.dot(w));
        y = y + s * (w - y);
    }
    double climb = (offset - un.dot(y)) / (un.dot(apex) - un.dot(y));
    Vec x0 = y + climb * (apex - y);

    Vec base_centroid;
    if (d == 1) {
        base_centroid = x0;
    } else if (d == 2) {
        Vec v(2);
        v << -un(1), un(0);
        double tp = body.ray_hit(x0, v);
        double tm = body.ray_hit(x0, -v);
        base_centroid = x0 + 0.5 * (tp - tm) * v;
    } else {
        Mat basis = hyperplane_basis(un);
        DirectionNet net = DirectionNet::for_dim(d - 1, slice_dirs);
        double measure = 0;
        Vec num = Vec::Zero(d);
        for (const auto& dir : net.dirs) {
            Vec v = basis * dir;
            double rho = body.ray_hit(x0, v);
            double rpow = std::pow(rho, d - 1);
            measure += net.weight * rpow / (d - 1);
            num += net.weight * rpow * rho / d * v;
        }
        base_centroid = x0 + num / measure;
    }
    return Cap{body, un, offset, apex, base_centroid, width};
}

bool verify_certificate(const ConvexBody& body, int n_dirs, double tol) {
    const Certificate& c = body.certificate();
    DirectionNet net = DirectionNet::for_dim(body.dim(), n_dirs);
    const double slack = tol * std::max(1.0, c.outer_radius);
    for (const auto& u : net.dirs) {
        double h = body.shape().support(u);
        double base = c.center.dot(u);
        if (h < base + c.inner_radius - slack) return false;
        if (h > base + c.outer_radius + slack) return false;
    }
    return true;
}

} // namespace hilbert
