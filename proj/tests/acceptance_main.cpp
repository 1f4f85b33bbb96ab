// Acceptance suite: one criterion per section, each printing a PASS/FAIL
// line with the measured quantities and runtime. Exit code = number of
// failed criteria.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "hilbert/errors.hpp"
#include "hilbert/estimators.hpp"
#include "hilbert/metric.hpp"
#include "hilbert/rng.hpp"

using namespace hilbert;

namespace {

int g_failures = 0;

void report(int id, const char* title, bool pass, const std::string& detail, double seconds) {
    std::printf("[%s] criterion %d: %s (%s; %.1f s)\n", pass ? "PASS" : "FAIL", id, title,
                detail.c_str(), seconds);
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

double run_timed(const std::function<void()>& fn) {
    auto t0 = std::chrono::steady_clock::now();
    fn();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<double> ladder(double lo, double hi, double step = 0.5) {
    std::vector<double> out;
    for (double r = lo; r <= hi + 1e-9; r += step) out.push_back(r);
    return out;
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof(buf), f, ap);
    va_end(ap);
    return buf;
}

// ---------------------------------------------------------------- 1

void criterion1() {
    bool pass = false;
    double worst = 0;
    double secs = run_timed([&] {
        auto disk = ConvexBody::unit_ball(2);
        Rng rng(20240601);
        std::uniform_real_distribution<double> unif(0.0, 0.999);
        for (int i = 0; i < 1000; ++i) {
            double s = unif(rng);
            Vec x = s * random_unit_vector(2, rng);
            double err = std::abs(hilbert_distance(disk, Vec::Zero(2), x) - std::atanh(s));
            worst = std::max(worst, err);
        }
        pass = worst < 1e-10;
    });
    report(1, "Klein-model exactness", pass, fmt("max |d - artanh| = %.2e < 1e-10", worst),
           secs);
}

// ---------------------------------------------------------------- 2

void criterion2() {
    bool pass = true;
    double worst = 0;
    double secs = run_timed([&] {
        auto disk = ConvexBody::unit_ball(2);
        for (double R = 1.0; R <= 6.0; R += 1.0) {
            BallSpec spec{disk, Vec::Zero(2), R, BallKind::metric, std::nullopt};
            double v = region_volume(spec, VolumeKind::busemann).value;
            double expected = 2.0 * std::numbers::pi * (std::cosh(R) - 1.0);
            double rel = std::abs(v - expected) / expected;
            worst = std::max(worst, rel);
            if (rel >= 0.01) pass = false;
        }
    });
    report(2, "hyperbolic ball volumes (Busemann, R = 1..6)", pass,
           fmt("max rel err %.2e < 1%%", worst), secs);
}

// ---------------------------------------------------------------- 3

void criterion3() {
    double disk_ent = 0, tri_ent = 0;
    bool pass = false;
    double secs = run_timed([&] {
        VolumeBudget b;
        b.max_radius = 10.5;
        auto lad = ladder(6.0, 10.0);
        disk_ent = entropy_estimate(ConvexBody::unit_ball(2), VolumeKind::holmes_thompson,
                                    lad, b, 6.0)
                       .value;
        tri_ent = entropy_estimate(ConvexBody::polytope_body(regular_simplex(2)),
                                   VolumeKind::holmes_thompson, lad, b, 6.0)
                      .value;
        pass = disk_ent >= 0.9 && disk_ent <= 1.1 && std::abs(tri_ent) <= 0.05;
    });
    report(3, "entropy bound and value (disk, triangle)", pass,
           fmt("disk %.4f in [0.9,1.1], triangle %.4f in [-0.05,0.05]", disk_ent, tri_ent),
           secs);
}

// ---------------------------------------------------------------- 4

void criterion4() {
    bool pass = true;
    std::string detail;
    double secs = run_timed([&] {
        auto lad = ladder(4.5, 9.0);
        auto tri = ConvexBody::polytope_body(regular_simplex(2));
        auto sq = ConvexBody::polytope_body(hypercube(2));
        auto hex = ConvexBody::polytope_body(regular_polygon(6));
        for (auto kind : {VolumeKind::busemann, VolumeKind::holmes_thompson}) {
            double a_tri = asvol_estimate(tri, kind, lad).value;
            double a_sq = asvol_estimate(sq, kind, lad).value;
            double a_hex = asvol_estimate(hex, kind, lad).value;
            double r_sq = a_sq / a_tri;
            double r_hex = a_hex / a_tri;
            if (std::abs(r_sq - 4.0 / 3.0) / (4.0 / 3.0) >= 0.05) pass = false;
            if (std::abs(r_hex - 2.0) / 2.0 >= 0.05) pass = false;
            detail += fmt("%s sq/tri %.4f hex/tri %.4f; ", to_string(kind), r_sq, r_hex);
        }
    });
    report(4, "polytope asvol flag ratios at R_max = 9", pass,
           detail + "want 1.3333/2 within 5%", secs);
}

// ---------------------------------------------------------------- 5

void criterion5() {
    bool pass = true;
    std::string detail;
    double secs = run_timed([&] {
        long long fact = 1;
        for (int d = 1; d <= 4; ++d) {
            fact *= (d + 1);
            long long got = regular_simplex(d)->flag_count();
            if (got != fact) pass = false;
            detail += fmt("S%d:%lld ", d, got);
        }
        long long cube = hypercube(3)->flag_count();
        if (cube != 48) pass = false;
        detail += fmt("cube:%lld ", cube);
        Rng rng(555);
        int agree = 0;
        for (int t = 0; t < 50; ++t) {
            std::vector<Vec> pts;
            int n = 5 + static_cast<int>(rng() % 16);
            std::uniform_real_distribution<double> radius(0.6, 1.4);
            for (int i = 0; i < n; ++i) pts.push_back(radius(rng) * random_unit_vector(3, rng));
            std::shared_ptr<const Polytope> p;
            try {
                p = Polytope::convex_hull(pts, 3);
            } catch (const Error&) {
                --t;
                continue;
            }
            if (p->flag_count() == static_cast<long long>(p->enumerate_flags().size()))
                ++agree;
        }
        if (agree != 50) pass = false;
        detail += fmt("recursion==enumeration on %d/50 hulls", agree);
    });
    report(5, "flag combinatorics", pass, detail, secs);
}

// ---------------------------------------------------------------- 6

void criterion6() {
    bool pass = true;
    std::string detail;
    double secs = run_timed([&] {
        std::vector<std::pair<std::string, ConvexBody>> fixtures;
        fixtures.emplace_back("disk", ConvexBody::unit_ball(2));
        Vec axes(2);
        axes << 2.0, 1.0;
        fixtures.emplace_back("ellipse", ConvexBody::ellipsoid(Vec::Zero(2), axes));
        fixtures.emplace_back("pentagon", ConvexBody::polytope_body(regular_polygon(5)));
        fixtures.emplace_back("tetra", ConvexBody::polytope_body(regular_simplex(3)));
        Rng rng(77);
        long asb_viol = 0, mac_viol = 0;
        for (auto& [name, body] : fixtures) {
            const Certificate& cert = body.certificate();
            const Vec& y = cert.center;
            double c = 0.5 * std::log(1.0 + cert.outer_radius / cert.inner_radius);
            // asymptotic-ball sandwich, 10^4 samples per fixture
            int done = 0;
            while (done < 10000) {
                Vec x = random_in_ball(y, cert.outer_radius, rng);
                if (!body.contains(x) || body.interior_margin(x) <= 1e-10) continue;
                ++done;
                double R = 0.5 + (done % 3);
                double dist = hilbert_distance(body, y, x);
                if (R > c) {
                    auto inner = asymptotic_ball(body, y, R - c);
                    if (inner && inner->shape().defining_margin(x) >= 0 && dist > R + 1e-9)
                        ++asb_viol;
                }
                auto outer = asymptotic_ball(body, y, R);
                if (dist <= R && outer->shape().defining_margin(x) < -1e-9) ++asb_viol;
            }
            // Macbeath sandwich, 10^4 samples per fixture
            const double r_in = 0.5 * std::log(6.0 / 5.0);
            const double r_out = 0.5 * std::log(3.0 / 2.0);
            for (int center = 0; center < 4; ++center) {
                Vec x0;
                do {
                    x0 = random_in_ball(y, cert.outer_radius, rng);
                } while (body.interior_margin(x0) < 0.05 * cert.inner_radius);
                ConvexBody m = macbeath_region(body, x0);
                std::uniform_real_distribution<double> unif(0.0, 1.0);
                for (int s = 0; s < 2500; ++s) {
                    Vec u = random_unit_vector(body.dim(), rng);
                    double s_in = ball_radial_extent(body, x0, u, r_in);
                    Vec z = x0 + (unif(rng) * s_in) * u;
                    if (m.shape().defining_margin(z) < -1e-9) ++mac_viol;
                    double t = m.ray_hit(x0, u);
                    Vec w = x0 + (unif(rng) * t) * u;
                    if (hilbert_distance(body, x0, w) > r_out + 1e-9) ++mac_viol;
                }
            }
        }
        pass = (asb_viol == 0 && mac_viol == 0);
        detail = fmt("asymptotic-ball violations %ld, Macbeath violations %ld", asb_viol,
                     mac_viol);
    });
    report(6, "sandwich suites (4 fixtures, 10^4 samples each)", pass, detail, secs);
}

// ---------------------------------------------------------------- 7

void criterion7() {
    bool pass = true;
    std::string detail;
    double secs = run_timed([&] {
        auto disk = ConvexBody::unit_ball(2);
        SlopeFit fa2 = flag_approx_estimate(disk, default_epsilon_ladder(2));
        if (!(fa2.value >= 0.45 && fa2.value <= 0.55)) pass = false;
        detail += fmt("disk slope %.4f in [0.45,0.55]; ", fa2.value);

        auto ball3 = ConvexBody::unit_ball(3);
        std::vector<double> eps3;
        for (int k = 4; k <= 10; ++k) eps3.push_back(std::pow(2.0, -k));
        SlopeFit fa3 = flag_approx_estimate(ball3, eps3);
        if (!(fa3.value >= 0.85 && fa3.value <= 1.15)) pass = false;
        detail += fmt("3D ball slope %.4f in [0.85,1.15]; ", fa3.value);

        VolumeBudget b;
        b.max_radius = 10.5;
        double ent = entropy_estimate(disk, VolumeKind::holmes_thompson, ladder(6.0, 10.0),
                                      b, 6.0)
                         .value;
        double ratio = ent / (2.0 * fa2.value);
        if (!(ratio >= 0.9 && ratio <= 1.1)) pass = false;
        detail += fmt("identity ent/(2 flagapprox) = %.4f in [0.9,1.1]", ratio);
    });
    report(7, "flag approximability and the entropy identity", pass, detail, secs);
}

// ---------------------------------------------------------------- 8

void criterion8() {
    bool pass = true;
    std::string detail;
    double secs = run_timed([&] {
        Rng rng(88);
        // (a) Hausdorff scaling inclusion on 100 random polygon pairs
        long scaling_viol = 0;
        int pairs_done = 0;
        while (pairs_done < 100) {
            std::uniform_real_distribution<double> radius(0.55, 1.0);
            auto make = [&]() {
                std::vector<Vec> pts;
                std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
                for (int i = 0; i < 8; ++i) {
                    double th = angle(rng), r = radius(rng);
                    Vec p(2);
                    p << r * std::cos(th), r * std::sin(th);
                    pts.push_back(p);
                }
                return Polytope::convex_hull(pts, 2);
            };
            std::shared_ptr<const Polytope> p1, p2;
            try {
                p1 = make();
                p2 = make();
            } catch (const Error&) {
                continue;
            }
            double l = std::min(p1->margin(Vec::Zero(2)), p2->margin(Vec::Zero(2)));
            if (l <= 0.05) continue;
            ++pairs_done;
            double eps = hausdorff_distance_exact(*p1, *p2);
            double lambda = 1.0 + eps / l;
            auto shrunk =
                scale_about(ConvexBody::polytope_body(p2), Vec::Zero(2), 1.0 / lambda);
            for (const auto& v : shrunk.as_polytope()->vertices())
                if (p1->margin(v) < -1e-12) ++scaling_viol;
        }
        if (scaling_viol != 0) pass = false;
        detail += fmt("scaling violations %ld/100 pairs; ", scaling_viol);

        // (b) centroid bound on 10^3 random polytopes, d <= 4
        double worst_centroid = 1e300;
        for (int t = 0; t < 1000; ++t) {
            int d = 2 + (t % 3);
            std::uniform_real_distribution<double> radius(0.6, 1.4);
            std::vector<Vec> pts;
            int n = d + 2 + static_cast<int>(rng() % 4);
            for (int i = 0; i < n; ++i) pts.push_back(radius(rng) * random_unit_vector(d, rng));
            std::shared_ptr<const Polytope> poly;
            try {
                poly = Polytope::convex_hull(pts, d);
            } catch (const Error&) {
                --t;
                continue;
            }
            auto body = ConvexBody::polytope_body(poly);
            Vec x = poly->centroid();
            Vec u = random_unit_vector(d, rng);
            Chord c = chord_endpoints(body, x, u);
            worst_centroid =
                std::min(worst_centroid, c.t_plus - (c.t_plus + c.t_minus) / (d + 1));
        }
        if (worst_centroid < -1e-9) pass = false;
        detail += fmt("centroid slack %.2e >= -1e-9; ", worst_centroid);

        // (c) Funk symmetrisation to 1e-12
        double worst_funk = 0;
        {
            auto poly = regular_polygon(7);
            auto body = ConvexBody::polytope_body(poly);
            std::uniform_real_distribution<double> unif(0.0, 0.75);
            for (int i = 0; i < 500; ++i) {
                Vec p = unif(rng) * random_unit_vector(2, rng);
                Vec q = unif(rng) * random_unit_vector(2, rng);
                if (poly->margin(p) < 0.02 || poly->margin(q) < 0.02) continue;
                double sym = 0.5 * (funk_distance(body, p, q) + funk_distance(body, q, p));
                worst_funk = std::max(worst_funk,
                                      std::abs(sym - hilbert_distance(body, p, q)));
            }
            if (worst_funk > 1e-12) pass = false;
        }
        detail += fmt("funk gap %.1e <= 1e-12; ", worst_funk);

        // (d) radial extent closed form vs bisection on 10^3 instances
        double worst_extent = 0;
        {
            std::vector<ConvexBody> bodies;
            bodies.push_back(ConvexBody::unit_ball(2));
            Vec axes(2);
            axes << 1.6, 0.9;
            bodies.push_back(ConvexBody::ellipsoid(Vec::Zero(2), axes));
            bodies.push_back(ConvexBody::polytope_body(regular_polygon(6)));
            bodies.push_back(ConvexBody::pnorm_ball(Vec::Zero(2), 1.0, 3.0));
            std::uniform_real_distribution<double> radii(0.1, 3.0);
            int done = 0;
            while (done < 1000) {
                const ConvexBody& body = bodies[done % bodies.size()];
                Vec p = 0.4 * random_unit_vector(2, rng);
                if (body.interior_margin(p) < 0.05) continue;
                ++done;
                Vec u = random_unit_vector(2, rng);
                double R = radii(rng);
                double s = ball_radial_extent(body, p, u, R);
                double tp = body.ray_hit(p, u);
                double lo = 0, hi = tp * (1.0 - 1e-12);
                for (int it = 0; it < 200 && hi - lo > 1e-15 * tp; ++it) {
                    double mid = 0.5 * (lo + hi);
                    if (hilbert_distance(body, p, p + mid * u) < R) lo = mid;
                    else hi = mid;
                }
                worst_extent = std::max(worst_extent, std::abs(s - 0.5 * (lo + hi)));
            }
            if (worst_extent > 1e-10) pass = false;
        }
        detail += fmt("radial extent gap %.1e <= 1e-10", worst_extent);
    });
    report(8, "lemma suites (scaling, centroid, Funk, radial extent)", pass, detail, secs);
}

// ---------------------------------------------------------------- 9

void criterion9() {
    bool pass = false;
    double slope = 0;
    double secs = run_timed([&] {
        auto pent = ConvexBody::polytope_body(regular_polygon(5));
        VolumeBudget b;
        b.max_radius = 10.5;
        auto curve = ball_growth_curve(pent, pent.certificate().center, BallKind::metric,
                                       VolumeKind::holmes_thompson, ladder(6.0, 10.0), b);
        std::vector<double> xs, ys;
        for (auto& [r, est] : curve) {
            xs.push_back(std::log(r));
            ys.push_back(std::log(est.value));
        }
        slope = least_squares_fit(xs, ys).slope;
        pass = std::abs(slope - 2.0) <= 0.2;
    });
    report(9, "polynomial growth for polytopes (pentagon, HT)", pass,
           fmt("log-log slope %.4f = 2 +- 0.2", slope), secs);
}

} // namespace

int main() {
    std::printf("acceptance suite: Hilbert geometry toolkit\n");
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    if (g_failures == 0) std::printf("all criteria passed\n");
    else std::printf("%d criteria FAILED\n", g_failures);
    return g_failures;
}
