#include "hilbert/estimators.hpp"

#include <algorithm>
#include <cmath>

#include "hilbert/errors.hpp"

namespace hilbert {

SlopeFit least_squares_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2) throw BadConfig("fit needs >= 2 points");
    const int n = static_cast<int>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    double det = n * sxx - sx * sx;
    if (std::abs(det) < 1e-300) throw BadConfig("degenerate abscissa");
    SlopeFit fit;
    fit.abscissa = xs;
    fit.ordinate = ys;
    fit.slope = (n * sxy - sx * sy) / det;
    fit.intercept = (sy - fit.slope * sx) / n;
    double rss = 0;
    for (int i = 0; i < n; ++i) {
        double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
        rss += r * r;
    }
    fit.residual_rms = std::sqrt(rss / n);
    return fit;
}

std::vector<double> default_radius_ladder(double r_max) {
    std::vector<double> out;
    for (double r = 1.0; r <= r_max + 1e-9; r += 0.5) out.push_back(r);
    return out;
}

std::vector<double> default_epsilon_ladder(int dim) {
    std::vector<double> out;
    const int last = (dim >= 3) ? 11 : 14;
    for (int k = 4; k <= last; ++k) out.push_back(std::pow(2.0, -k));
    return out;
}

namespace {

// Richardson tail fit of V/R^d against 1/R; returns the intercept.
double richardson_limit(const std::vector<std::pair<double, VolumeEstimate>>& curve, int d,
                        std::size_t window_begin) {
    std::vector<double> xs, ys;
    for (std::size_t i = window_begin; i < curve.size(); ++i) {
        xs.push_back(1.0 / curve[i].first);
        ys.push_back(curve[i].second.value / std::pow(curve[i].first, d));
    }
    return least_squares_fit(xs, ys).intercept;
}

std::size_t tail_begin(std::size_t n) { return (n < 6) ? 0 : n / 2; }

} // namespace

AsvolEstimate asvol_estimate(const ConvexBody& body, VolumeKind kind,
                             const std::vector<double>& ladder, const VolumeBudget& budget) {
    if (!body.as_polytope())
        throw NonPolytopeBody("asymptotic volume is finite only for polytopes");
    if (ladder.size() < 3) throw BadConfig("asvol ladder needs >= 3 radii");
    const int d = body.dim();
    const Vec o = body.certificate().center;
    VolumeBudget b = budget;
    if (b.max_radius < ladder.back()) b.max_radius = ladder.back() + 0.5;

    AsvolEstimate out;
    out.kind = kind;
    out.ladder = ladder;
    auto curve_as = ball_growth_curve(body, o, BallKind::asymptotic, kind, ladder, b);
    auto curve_m = ball_growth_curve(body, o, BallKind::metric, kind, ladder, b);
    for (const auto& [r, est] : curve_as) out.vol_asymptotic.push_back(est.value);
    for (const auto& [r, est] : curve_m) out.vol_metric.push_back(est.value);

    std::size_t w = tail_begin(ladder.size());
    out.from_asymptotic = richardson_limit(curve_as, d, w);
    out.from_metric = richardson_limit(curve_m, d, w);
    out.value = out.from_asymptotic;
    out.sandwich_gap =
        std::abs(out.from_asymptotic - out.from_metric) / std::max(out.value, 1e-300);
    return out;
}

SlopeFit entropy_estimate(const ConvexBody& body, VolumeKind kind,
                          const std::vector<double>& ladder, const VolumeBudget& budget,
                          double window_min, double residual_threshold) {
    if (ladder.size() < 4) throw BadConfig("entropy ladder needs >= 4 radii");
    const Vec o = body.certificate().center;
    VolumeBudget b = budget;
    if (b.max_radius < ladder.back()) b.max_radius = ladder.back() + 0.5;
    auto curve = ball_growth_curve(body, o, BallKind::metric, kind, ladder, b);

    // Local slopes of log V between consecutive radii, then extrapolation of
    // slope(1/R) to 1/R -> 0.
    std::vector<double> xs, ys;
    int window_begin = -1;
    for (std::size_t i = 1; i < curve.size(); ++i) {
        double r0 = curve[i - 1].first, r1 = curve[i].first;
        if (r0 < window_min) continue;
        if (window_begin < 0) window_begin = static_cast<int>(i - 1);
        double s = (std::log(curve[i].second.value) - std::log(curve[i - 1].second.value)) /
                   (r1 - r0);
        xs.push_back(2.0 / (r0 + r1));
        ys.push_back(s);
    }
    if (xs.size() < 3) throw BadConfig("entropy window too short; extend the ladder");
    SlopeFit fit = least_squares_fit(xs, ys);
    fit.window_begin = window_begin;
    fit.value = fit.intercept; // 1/R -> 0 limit
    fit.converged = fit.residual_rms <= residual_threshold;
    return fit;
}

std::shared_ptr<const Polytope> approximate_polytope(const ConvexBody& body, double eps,
                                                     long vertex_budget) {
    if (!(eps > 0)) throw BadConfig("approximation needs eps > 0");
    const int d = body.dim();
    if (d < 2 || d > 3)
        throw BadConfig("polytopal approximation implemented for d in {2, 3}");
    if (vertex_budget <= 0) vertex_budget = (d == 2) ? 100000 : 10000;
    const Certificate& cert = body.certificate();
    const Vec& y = cert.center;
    double theta = std::sqrt(8.0 * eps / cert.outer_radius);
    // Fibonacci nets have uneven gaps; start tighter in 3D so the first
    // net usually verifies.
    if (d == 3) theta *= 0.7;

    for (;;) {
        long n = (d == 2) ? static_cast<long>(std::ceil(2.0 * std::numbers::pi / theta))
                          : static_cast<long>(std::ceil(4.0 * std::numbers::pi /
                                                        (theta * theta)));
        n = std::max<long>(n, d + 2);
        if (n > vertex_budget) throw EpsilonTooSmall("boundary net exceeds the vertex budget");
        DirectionNet net = DirectionNet::for_dim(d, static_cast<int>(n));
        std::vector<Vec> pts;
        pts.reserve(net.size());
        for (const auto& u : net.dirs) pts.push_back(y + body.ray_hit(y, u) * u);
        auto poly = Polytope::convex_hull(pts, d);
        int check_dirs = std::max(4096, 4 * net.size());
        if (hausdorff_distance(body, ConvexBody::polytope_body(poly), check_dirs) <= eps)
            return poly;
        theta *= 0.5;
    }
}

long long flag_number(const ConvexBody& body, double eps) {
    return approximate_polytope(body, eps)->flag_count();
}

SlopeFit flag_approx_estimate(const ConvexBody& body, const std::vector<double>& eps_ladder,
                              double residual_threshold) {
    if (eps_ladder.size() < 3) throw BadConfig("flag-approx ladder needs >= 3 epsilons");
    for (std::size_t i = 1; i < eps_ladder.size(); ++i)
        if (eps_ladder[i] >= eps_ladder[i - 1])
            throw BadConfig("epsilon ladder must decrease");
    std::vector<double> xs, ys;
    for (double eps : eps_ladder) {
        xs.push_back(-std::log(eps));
        ys.push_back(std::log(static_cast<double>(flag_number(body, eps))));
    }
    std::size_t w = tail_begin(xs.size());
    std::vector<double> txs(xs.begin() + w, xs.end());
    std::vector<double> tys(ys.begin() + w, ys.end());
    SlopeFit fit = least_squares_fit(txs, tys);
    fit.abscissa = xs;
    fit.ordinate = ys;
    fit.window_begin = static_cast<int>(w);
    fit.value = fit.slope;
    fit.converged = fit.residual_rms <= residual_threshold;
    return fit;
}

FlagRatioReport verify_flag_ratio(const ConvexBody& body, VolumeKind kind, double r_max,
                                  const VolumeBudget& budget, bool per_cone) {
    auto poly = body.as_polytope();
    if (!poly) throw NonPolytopeBody("flag ratio needs a polytope");
    const int d = body.dim();
    double factorial = 1;
    for (int k = 2; k <= d + 1; ++k) factorial *= k;

    FlagRatioReport rep;
    rep.kind = kind;
    rep.r_max = r_max;
    rep.flags = poly->flag_count();
    rep.expected_ratio = static_cast<double>(rep.flags) / factorial;

    std::vector<double> ladder;
    for (double r = std::max(1.0, r_max / 2.0); r <= r_max + 1e-9; r += 0.5) ladder.push_back(r);

    auto simplex_body = ConvexBody::polytope_body(regular_simplex(d));
    rep.asvol_body = asvol_estimate(body, kind, ladder, budget).value;
    rep.asvol_simplex = asvol_estimate(simplex_body, kind, ladder, budget).value;
    rep.measured_ratio = rep.asvol_body / rep.asvol_simplex;
    rep.rel_discrepancy = rep.measured_ratio / rep.expected_ratio - 1.0;
    rep.cone_expected = rep.asvol_simplex / factorial;

    if (per_cone) {
        const Vec o = poly->centroid();
        VolumeBudget b = budget;
        if (b.max_radius < r_max) b.max_radius = r_max + 0.5;
        double worst = 0;
        for (const auto& s : poly->flag_decomposition()) {
            BallSpec spec{body, o, r_max, BallKind::asymptotic,
                          ClipRegion::from_flag_simplex(s, o)};
            double v = region_volume(spec, kind, b).value / std::pow(r_max, d);
            rep.cone_values.push_back(v);
            worst = std::max(worst, std::abs(v / rep.cone_expected - 1.0));
        }
        rep.cone_max_rel_dev = worst;
    }
    return rep;
}

EntropyIdentityReport verify_entropy_identity(const ConvexBody& body,
                                              const std::vector<double>& r_ladder,
                                              const std::vector<double>& eps_ladder,
                                              const VolumeBudget& budget, double window_min) {
    EntropyIdentityReport rep;
    rep.entropy = entropy_estimate(body, VolumeKind::holmes_thompson, r_ladder, budget,
                                   window_min);
    rep.flag_approx = flag_approx_estimate(body, eps_ladder);
    rep.ent = rep.entropy.value;
    rep.twice_flag_approx = 2.0 * rep.flag_approx.value;
    // Both sides vanish for polytopes; avoid 0/0 by comparing near zero.
    if (std::abs(rep.twice_flag_approx) > 0.05)
        rep.ratio = rep.ent / rep.twice_flag_approx;
    else
        rep.ratio = (std::abs(rep.ent) <= 0.05) ? 1.0 : rep.ent / 0.05;
    rep.uncertainty =
        rep.entropy.residual_rms + 2.0 * rep.flag_approx.residual_rms;
    rep.entropy_bound_ok = rep.ent <= body.dim() - 1 + 0.1;
    return rep;
}

} // namespace hilbert
