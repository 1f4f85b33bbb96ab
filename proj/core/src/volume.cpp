#include "hilbert/volume.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hilbert/errors.hpp"
#include "hilbert/parallel.hpp"
#include "hilbert/rng.hpp"

namespace hilbert {

const char* to_string(VolumeKind k) {
    return k == VolumeKind::busemann ? "busemann" : "holmes-thompson";
}
const char* to_string(BallKind k) { return k == BallKind::metric ? "metric" : "asymptotic"; }

VolumeBudget VolumeBudget::defaults_for(int dim) {
    VolumeBudget b;
    if (dim <= 2) {
        b.directions = 1024;
        b.radial_nodes = 64;
        b.density_dirs = 512;
    } else if (dim == 3) {
        b.directions = 4096;
        b.radial_nodes = 48;
        b.density_dirs = 320;
    } else {
        b.directions = 4096;
        b.radial_nodes = 48;
        b.density_dirs = 256;
    }
    return b;
}

namespace {

VolumeBudget resolve(const VolumeBudget& in, int dim) {
    VolumeBudget def = VolumeBudget::defaults_for(dim);
    VolumeBudget b = in;
    if (b.directions <= 0) b.directions = def.directions;
    if (b.radial_nodes <= 0) b.radial_nodes = def.radial_nodes;
    if (b.density_dirs <= 0) b.density_dirs = def.density_dirs;
    if (b.gauss_order != 2 && b.gauss_order != 4) b.gauss_order = 4;
    if (b.directions < 8 && dim > 1) throw BudgetTooSmall("need at least 8 directions");
    if (b.radial_nodes < 8) throw BudgetTooSmall("need at least 8 radial nodes");
    if (b.density_dirs < 16) throw BudgetTooSmall("need at least 16 density directions");
    if (!(b.grading > 0.0 && b.grading < 1.0)) throw BudgetTooSmall("grading must be in (0,1)");
    return b;
}

// Gauss-Legendre rules mapped to [0, 1].
struct GaussRule {
    std::vector<double> x, w;
    static const GaussRule& order2() {
        static GaussRule r{{0.5 - 0.5 / std::sqrt(3.0), 0.5 + 0.5 / std::sqrt(3.0)},
                           {0.5, 0.5}};
        return r;
    }
    static const GaussRule& order4() {
        static GaussRule r{{(1.0 - 0.8611363115940526) / 2.0, (1.0 - 0.3399810435848563) / 2.0,
                            (1.0 + 0.3399810435848563) / 2.0, (1.0 + 0.8611363115940526) / 2.0},
                           {0.3478548451374538 / 2.0, 0.6521451548625461 / 2.0,
                            0.6521451548625461 / 2.0, 0.3478548451374538 / 2.0}};
        return r;
    }
    static const GaussRule& of(int g) { return g == 2 ? order2() : order4(); }
};

struct RegionIntegrator {
    ConvexBody body;
    Vec center;
    std::optional<ClipRegion> clip;
    VolumeBudget budget;
    int dim;

    std::vector<Vec> dirs;
    std::vector<double> weights;
    std::vector<double> tp, tm, exit;

    DensityEvaluator density;

    RegionIntegrator(const ConvexBody& b, const Vec& c, std::optional<ClipRegion> cl,
                     const VolumeBudget& bud)
        : body(b),
          center(c),
          clip(std::move(cl)),
          budget(resolve(bud, b.dim())),
          dim(b.dim()),
          density(b, std::make_shared<DirectionNet>(
                         DirectionNet::for_dim(b.dim(), budget.density_dirs))) {
        if (body.interior_margin(center) <= 0) throw PointNotInterior("ball center");
        if (clip) {
            if (clip->dim() != dim) throw InvalidSpec("clip dimension mismatch");
            double scale = std::max(1.0, body.certificate().outer_radius);
            if ((clip->apex() - center).norm() > 1e-9 * scale)
                throw InvalidSpec("clip apex must coincide with the ball center");
        }
        build_directions();
        const int n = static_cast<int>(dirs.size());
        tp.resize(n);
        tm.resize(n);
        exit.assign(n, std::numeric_limits<double>::infinity());
        for (int i = 0; i < n; ++i) {
            tp[i] = body.ray_hit(center, dirs[i]);
            tm[i] = body.ray_hit(center, -dirs[i]);
            if (clip) exit[i] = clip->exit_time(dirs[i]);
        }
    }

    void push_dir(double th, double w) {
        Vec u(2);
        u << std::cos(th), std::sin(th);
        dirs.push_back(u);
        weights.push_back(w);
    }

    // Polytope balls have integrable log-type angular layers at the vertex
    // directions (width ~ e^{-2R}); grade each arc geometrically toward both
    // endpoints, Gauss nodes per cell, mirroring the radial grading.
    void graded_arc(double alpha, double beta, double r_hint) {
        const GaussRule& rule = GaussRule::order4();
        const double hw = 0.5 * (beta - alpha);
        const int levels =
            static_cast<int>(std::ceil(2.0 * std::max(r_hint, 1.0) / std::log(2.0))) + 2;
        auto half = [&](double from, double sign) {
            double off_outer = hw;
            for (int j = 1; j <= levels; ++j) {
                double off_inner = (j == levels) ? 0.0 : hw * std::pow(0.5, j);
                double len = off_outer - off_inner;
                for (std::size_t q = 0; q < rule.x.size(); ++q)
                    push_dir(from + sign * (off_inner + rule.x[q] * len), rule.w[q] * len);
                off_outer = off_inner;
            }
        };
        half(alpha, +1.0); // grades toward alpha
        half(beta, -1.0);  // grades toward beta
    }

    // Angles of singular directions: polytope vertices as seen from the
    // center.
    std::vector<double> corner_angles(const Polytope& poly) const {
        std::vector<double> out;
        for (const auto& v : poly.vertices()) {
            Vec d = v - center;
            out.push_back(std::atan2(d(1), d(0)));
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    void build_directions() {
        auto poly2d = (dim == 2) ? body.as_polytope() : nullptr;
        if (dim == 2 && clip) {
            if (poly2d) {
                graded_arc(clip->arc_begin(), clip->arc_end(), budget.max_radius);
            } else {
                double arc = clip->arc_end() - clip->arc_begin();
                int n = std::max(64, static_cast<int>(std::lround(budget.directions * arc /
                                                                  (2.0 * std::numbers::pi))));
                for (double th : arc_angles(clip->arc_begin(), clip->arc_end(), n))
                    push_dir(th, arc / n);
            }
            return;
        }
        if (poly2d) {
            std::vector<double> corners = corner_angles(*poly2d);
            const int m = static_cast<int>(corners.size());
            for (int k = 0; k < m; ++k) {
                double a = corners[k];
                double b = (k + 1 < m) ? corners[k + 1] : corners[0] + 2.0 * std::numbers::pi;
                if (b - a > 1e-12) graded_arc(a, b, budget.max_radius);
            }
            return;
        }
        DirectionNet net = DirectionNet::for_dim(dim, budget.directions);
        if (!clip) {
            dirs = net.dirs;
            weights.assign(net.dirs.size(), net.weight);
            return;
        }
        // Cone boundary handling in d >= 3: supersample straddling patches.
        const double patch = 2.0 / std::sqrt(static_cast<double>(net.size()));
        Rng rng(0xC11Bu);
        for (int i = 0; i < net.size(); ++i) {
            const Vec& u = net.dirs[i];
            bool c0 = clip->contains_direction(u);
            int agree = c0 ? 1 : 0;
            const int probe = 8;
            for (int k = 0; k < probe; ++k) {
                Vec j = (u + patch * random_unit_vector(dim, rng)).normalized();
                if (clip->contains_direction(j)) ++agree;
            }
            if (agree == probe + 1) {
                dirs.push_back(u);
                weights.push_back(net.weight);
            } else if (agree > 0) {
                const int fine = 64;
                int in = 0;
                for (int k = 0; k < fine; ++k) {
                    Vec j = (u + patch * random_unit_vector(dim, rng)).normalized();
                    if (clip->contains_direction(j)) ++in;
                }
                if (in > 0) {
                    dirs.push_back(u);
                    weights.push_back(net.weight * in / fine);
                }
            }
        }
    }

    int segments_for(double R) const {
        int need = static_cast<int>(std::ceil(2.0 * std::max(R, 1.0) /
                                              std::log(1.0 / budget.grading))) + 6;
        int base = (budget.radial_nodes + budget.gauss_order - 1) / budget.gauss_order;
        return std::max(base, need);
    }

    double extent(int i, double R, BallKind ball) const {
        double s;
        if (ball == BallKind::metric) {
            double e2 = std::exp(2.0 * R);
            s = tp[i] - tp[i] * (tp[i] + tm[i]) / (tp[i] + e2 * tm[i]);
        } else {
            s = -std::expm1(-2.0 * R) * tp[i];
        }
        return std::min(s, exit[i]);
    }

    // Radial integral of density * r^{d-1} over [0, s].
    double radial_integral(const Vec& u, double s, int segs, const GaussRule& rule,
                           VolumeKind kind, DensityEvaluator::Workspace& ws,
                           long long& evals) const {
        double acc = 0;
        double b_prev = 0;
        for (int k = 1; k <= segs; ++k) {
            double b_k = (k == segs) ? s : s * (1.0 - std::pow(budget.grading, k));
            double len = b_k - b_prev;
            if (len > 0) {
                for (std::size_t q = 0; q < rule.x.size(); ++q) {
                    double r = b_prev + rule.x[q] * len;
                    if (r <= 0) continue;
                    DensityPair dp = density(center + r * u, ws);
                    double h = (kind == VolumeKind::busemann) ? dp.busemann
                                                              : dp.holmes_thompson;
                    acc += rule.w[q] * len * h * std::pow(r, dim - 1);
                    ++evals;
                }
            }
            b_prev = b_k;
        }
        return acc;
    }

    VolumeEstimate eval(double R, BallKind ball, VolumeKind kind) const {
        VolumeEstimate out;
        out.kind = kind;
        if (ball == BallKind::asymptotic && R <= 0) return out; // empty ball
        if (R < 0) throw InvalidSpec("negative radius");
        if (R == 0) return out;
        const int n = static_cast<int>(dirs.size());
        const int segs = segments_for(R);
        const GaussRule& rule = GaussRule::of(budget.gauss_order);
        const GaussRule& coarse = GaussRule::order2();

        std::vector<double> contrib(n, 0.0), contrib_coarse(n, 0.0);
        std::vector<long long> evals(n, 0);
        parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
            DensityEvaluator::Workspace ws;
            double s = extent(static_cast<int>(i), R, ball);
            if (s <= 0) return;
            contrib[i] = radial_integral(dirs[i], s, segs, rule, kind, ws, evals[i]);
            if (i % 8 == 0)
                contrib_coarse[i] =
                    radial_integral(dirs[i], s, segs, coarse, kind, ws, evals[i]);
        });

        double v = 0, v_half = 0, err_rad = 0;
        for (int i = 0; i < n; ++i) {
            v += weights[i] * contrib[i];
            if (i % 2 == 0) v_half += 2.0 * weights[i] * contrib[i];
            if (i % 8 == 0) err_rad += 8.0 * weights[i] * std::abs(contrib[i] - contrib_coarse[i]);
            out.evaluations += evals[i];
        }
        double err_dir = std::abs(v - v_half);
        out.value = v;
        out.std_error = std::sqrt(err_dir * err_dir + err_rad * err_rad);
        return out;
    }
};

} // namespace

// ----------------------------------------------------------------- clips

void ClipRegion::finish(const std::vector<std::pair<Vec, double>>& halfspaces,
                        const std::vector<Vec>& cone_rays) {
    const double tol = 1e-9;
    for (const auto& [n, c] : halfspaces) {
        if (std::abs(c - n.dot(apex_)) <= tol)
            through_apex_.emplace_back(n, c);
        else
            base_.emplace_back(n, c);
    }
    if (dim_ == 2) {
        // Exact angular interval spanned by the two cone edges.
        if (cone_rays.size() != 2) throw InvalidSpec("2D cone needs exactly two edge rays");
        double a = std::atan2(cone_rays[0](1), cone_rays[0](0));
        double b = std::atan2(cone_rays[1](1), cone_rays[1](0));
        double diff = b - a;
        while (diff < 0) diff += 2.0 * std::numbers::pi;
        if (diff > std::numbers::pi) {
            std::swap(a, b);
            diff = 2.0 * std::numbers::pi - diff;
        }
        theta0_ = a;
        theta1_ = a + diff;
    }
}

ClipRegion ClipRegion::from_flag_simplex(const FlagSimplex& s, const Vec& apex) {
    ClipRegion out;
    const int d = static_cast<int>(apex.size());
    out.dim_ = d;
    out.apex_ = apex;
    const auto& v = s.vertices;
    if (static_cast<int>(v.size()) != d + 1) throw InvalidSpec("flag simplex size");
    // Halfspaces: one per omitted vertex, oriented to contain it.
    std::vector<std::pair<Vec, double>> hs;
    for (int skip = 0; skip <= d; ++skip) {
        std::vector<Vec> face;
        for (int i = 0; i <= d; ++i)
            if (i != skip) face.push_back(v[i]);
        Mat m(d, d - 1);
        for (int i = 1; i < d; ++i) m.col(i - 1) = face[i] - face[0];
        Eigen::FullPivHouseholderQR<Mat> qr(m);
        Vec n = Mat(qr.matrixQ()).col(d - 1);
        double c = n.dot(face[0]);
        if (n.dot(v[skip]) > c) {
            n = -n;
            c = -c;
        }
        hs.emplace_back(n, c);
    }
    // Cone edge rays (2D): apex is the interior vertex; edges to the others.
    std::vector<Vec> rays;
    if (d == 2)
        for (int i = 0; i <= d; ++i)
            if ((v[i] - apex).norm() > 1e-12) rays.push_back(v[i] - apex);
    out.finish(hs, rays);
    return out;
}

ClipRegion ClipRegion::from_facet_cone(const Polytope& poly, int facet_id, const Vec& apex) {
    ClipRegion out;
    const int d = poly.dim();
    out.dim_ = d;
    out.apex_ = apex;
    const auto& facet = poly.facets()[facet_id];
    std::vector<std::pair<Vec, double>> hs;
    // Base halfspace is the facet's own plane.
    hs.emplace_back(facet.normal, facet.offset);
    Vec fbary = Vec::Zero(d);
    for (int vid : facet.vertices) fbary += poly.vertices()[vid];
    fbary /= static_cast<double>(facet.vertices.size());
    if (d == 1) {
        out.finish(hs, {});
        return out;
    }
    // Lateral halfspaces through each ridge of the facet and the apex.
    const auto& rank = poly.faces(d - 1);
    const Face* facet_face = nullptr;
    for (const auto& f : rank)
        if (f.vertices == facet.vertices) {
            facet_face = &f;
            break;
        }
    if (!facet_face) throw InvalidSpec("facet not found in lattice");
    std::vector<Vec> rays;
    for (int ridge_id : facet_face->subfaces) {
        const Face& ridge = poly.faces(d - 2)[ridge_id];
        std::vector<Vec> pts;
        pts.reserve(ridge.vertices.size() + 1);
        for (int vid : ridge.vertices) pts.push_back(poly.vertices()[vid]);
        pts.push_back(apex);
        Mat m(d, static_cast<int>(pts.size()) - 1);
        for (std::size_t i = 1; i < pts.size(); ++i)
            m.col(static_cast<int>(i) - 1) = pts[i] - pts[0];
        Eigen::FullPivHouseholderQR<Mat> qr(m);
        Vec n = Mat(qr.matrixQ()).col(d - 1);
        double c = n.dot(apex);
        if (n.dot(fbary) > c) {
            n = -n;
            c = -c;
        }
        hs.emplace_back(n, c);
        if (d == 2) rays.push_back(pts[0] - apex); // ridge = single vertex
    }
    out.finish(hs, rays);
    return out;
}

bool ClipRegion::contains_direction(const Vec& u, double tol) const {
    for (const auto& hs : through_apex_)
        if (hs.first.dot(u) > tol) return false;
    return true;
}

double ClipRegion::exit_time(const Vec& u) const {
    if (!contains_direction(u)) return 0.0;
    double t = std::numeric_limits<double>::infinity();
    for (const auto& [n, c] : base_) {
        double den = n.dot(u);
        if (den > 1e-300) t = std::min(t, (c - n.dot(apex_)) / den);
    }
    return t;
}

bool ClipRegion::contains_point(const Vec& x, double tol) const {
    for (const auto& [n, c] : through_apex_)
        if (n.dot(x) > c + tol) return false;
    for (const auto& [n, c] : base_)
        if (n.dot(x) > c + tol) return false;
    return true;
}

// ------------------------------------------------------------ public API

VolumeEstimate region_volume(const BallSpec& spec, VolumeKind kind, const VolumeBudget& budget) {
    RegionIntegrator integ(spec.body, spec.center, spec.clip, budget);
    return integ.eval(spec.radius, spec.kind, kind);
}

std::vector<std::pair<double, VolumeEstimate>> ball_growth_curve(
    const ConvexBody& body, const Vec& p, BallKind ball, VolumeKind kind,
    const std::vector<double>& ladder, const VolumeBudget& budget) {
    for (std::size_t i = 1; i < ladder.size(); ++i)
        if (ladder[i] <= ladder[i - 1]) throw BadConfig("radius ladder must increase");
    RegionIntegrator integ(body, p, std::nullopt, budget);
    std::vector<std::pair<double, VolumeEstimate>> out;
    out.reserve(ladder.size());
    for (double R : ladder) out.emplace_back(R, integ.eval(R, ball, kind));
    return out;
}

VolumeEstimate region_volume_mc(const BallSpec& spec, VolumeKind kind, long samples,
                                std::uint64_t seed) {
    const ConvexBody& body = spec.body;
    const int d = body.dim();
    if (body.interior_margin(spec.center) <= 0) throw PointNotInterior("ball center");
    const Certificate& cert = body.certificate();
    DensityEvaluator density(
        body, std::make_shared<DirectionNet>(
                  DirectionNet::for_dim(d, VolumeBudget::defaults_for(d).density_dirs)));
    DensityEvaluator::Workspace ws;
    Rng rng(seed);
    const double ball_vol = unit_ball_volume(d) * std::pow(cert.outer_radius, d);
    const double f = -std::expm1(-2.0 * spec.radius);

    auto in_region = [&](const Vec& x) {
        if (spec.clip && !spec.clip->contains_point(x)) return false;
        Vec diff = x - spec.center;
        double s = diff.norm();
        if (s == 0) return true;
        Vec u = diff / s;
        double tpp = body.ray_hit(spec.center, u);
        if (spec.kind == BallKind::asymptotic) return s <= f * tpp;
        if (s >= tpp) return false;
        double tmm = body.ray_hit(spec.center, -u);
        double dist = 0.5 * std::log((s + tmm) / tmm * (tpp / (tpp - s)));
        return dist <= spec.radius;
    };

    double acc = 0, acc2 = 0;
    long long used = 0;
    for (long i = 0; i < samples; ++i) {
        Vec x = random_in_ball(cert.center, cert.outer_radius, rng);
        double val = 0;
        if (body.contains(x) && in_region(x)) {
            DensityPair dp = density(x, ws);
            val = (kind == VolumeKind::busemann) ? dp.busemann : dp.holmes_thompson;
            ++used;
        }
        acc += val;
        acc2 += val * val;
    }
    VolumeEstimate out;
    out.kind = kind;
    out.method = "monte-carlo";
    out.evaluations = used;
    double mean = acc / samples;
    double var = std::max(0.0, acc2 / samples - mean * mean);
    out.value = ball_vol * mean;
    out.std_error = ball_vol * std::sqrt(var / samples);
    return out;
}

} // namespace hilbert
