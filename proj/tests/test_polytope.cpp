#include "doctest.h"

#include <algorithm>
#include <set>
#include <sstream>

#include "hilbert/errors.hpp"
#include "hilbert/polytope.hpp"
#include "test_util.hpp"

using namespace hilbert;

namespace {

Vec v2(double x, double y) {
    Vec v(2);
    v << x, y;
    return v;
}

// Counts maximal chains straight from the vertex-set partial order, without
// touching the stored incidence lists. Only for small fixtures.
long long brute_chain_count(const Polytope& p) {
    const int d = p.dim();
    std::vector<std::vector<std::vector<int>>> sets(d + 1);
    for (int k = 0; k <= d; ++k)
        for (const auto& f : p.faces(k)) sets[k].push_back(f.vertices);
    std::function<long long(int, const std::vector<int>&)> extend =
        [&](int k, const std::vector<int>& below) -> long long {
        if (k > d) return 1;
        long long total = 0;
        for (const auto& cand : sets[k])
            if (std::includes(cand.begin(), cand.end(), below.begin(), below.end()) &&
                cand.size() > below.size())
                total += extend(k + 1, cand);
        return total;
    };
    long long total = 0;
    for (const auto& v : sets[0]) total += extend(1, v);
    return total;
}

long long factorial(int n) {
    long long f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

} // namespace

TEST_CASE("square: vertices, edges, lattice sizes, flags") {
    auto p = Polytope::convex_hull({v2(-1, -1), v2(1, -1), v2(1, 1), v2(-1, 1)}, 2);
    CHECK(p->vertices().size() == 4);
    CHECK(p->face_count(0) == 4);
    CHECK(p->face_count(1) == 4);
    CHECK(p->face_count(2) == 1);
    CHECK(p->flag_count() == 8);
    CHECK(static_cast<long long>(p->enumerate_flags().size()) == 8);
    CHECK(brute_chain_count(*p) == 8);
    CHECK(p->volume() == doctest::Approx(4.0));
    CHECK(p->centroid().norm() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("square corners plus center: interior point eliminated") {
    auto p = Polytope::convex_hull(
        {v2(-1, -1), v2(1, -1), v2(1, 1), v2(-1, 1), v2(0, 0)}, 2);
    CHECK(p->vertices().size() == 4);
}

TEST_CASE("collinear boundary points are not vertices") {
    auto p = Polytope::convex_hull(
        {v2(-1, -1), v2(1, -1), v2(1, 1), v2(-1, 1), v2(0, -1), v2(1, 0)}, 2);
    CHECK(p->vertices().size() == 4);
    CHECK(p->flag_count() == 8);
}

TEST_CASE("simplex flag counts are (d+1)! for d <= 4") {
    for (int d = 1; d <= 4; ++d) {
        auto s = regular_simplex(d);
        CAPTURE(d);
        CHECK(s->flag_count() == factorial(d + 1));
        CHECK(static_cast<long long>(s->enumerate_flags().size()) == factorial(d + 1));
    }
}

TEST_CASE("3-cube: 6 square facets, 48 flags, Euler relation") {
    auto c = hypercube(3);
    CHECK(c->vertices().size() == 8);
    CHECK(c->face_count(2) == 6);
    CHECK(c->face_count(1) == 12);
    CHECK(c->face_count(0) == 8);
    for (const auto& f : c->faces(2)) CHECK(f.vertices.size() == 4);
    CHECK(c->flag_count() == 48);
    CHECK(brute_chain_count(*c) == 48);
    CHECK(c->volume() == doctest::Approx(8.0));
}

TEST_CASE("4-cube lattice") {
    auto c = hypercube(4);
    CHECK(c->vertices().size() == 16);
    CHECK(c->face_count(3) == 8);
    CHECK(c->face_count(2) == 24);
    CHECK(c->face_count(1) == 32);
    // flags: 8 cubic facets, 48 each
    CHECK(c->flag_count() == 384);
    CHECK(c->volume() == doctest::Approx(16.0));
}

TEST_CASE("interval in d=1 has 2 flags") {
    Vec a(1), b(1);
    a << -0.3;
    b << 2.0;
    auto p = Polytope::convex_hull({a, b}, 1);
    CHECK(p->flag_count() == 2);
    CHECK(p->enumerate_flags().size() == 2);
    CHECK(p->volume() == doctest::Approx(2.3));
}

TEST_CASE("pentagon has 10 flags") {
    auto p = regular_polygon(5);
    CHECK(p->flag_count() == 10);
}

TEST_CASE("100 random points on the unit circle are all vertices") {
    Rng rng(7);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    std::set<double> used;
    std::vector<Vec> pts;
    while (pts.size() < 100) {
        double th = angle(rng);
        pts.push_back(v2(std::cos(th), std::sin(th)));
    }
    auto p = Polytope::convex_hull(pts, 2);
    CHECK(p->vertices().size() == 100);
    CHECK(p->flag_count() == 200);
}

TEST_CASE("flag recursion equals enumeration on random 3D hulls") {
    Rng rng(11);
    for (int trial = 0; trial < 25; ++trial) {
        auto p = testutil::random_polytope(3, 4 + static_cast<int>(rng() % 17), rng);
        CAPTURE(trial);
        CHECK(p->flag_count() ==
              static_cast<long long>(p->enumerate_flags().size()));
    }
}

TEST_CASE("Euler relation on proper faces") {
    Rng rng(13);
    for (int d = 2; d <= 4; ++d) {
        auto p = testutil::random_polytope(d, d + 4, rng);
        long long alt = 0;
        for (int k = 0; k < d; ++k)
            alt += (k % 2 ? -1 : 1) * static_cast<long long>(p->face_count(k));
        CAPTURE(d);
        CHECK(alt == 1 - ((d % 2) ? -1 : 1));
    }
}

TEST_CASE("non-simplex polytopes have more than (d+1)! flags") {
    Rng rng(17);
    for (int d = 2; d <= 3; ++d) {
        for (int trial = 0; trial < 10; ++trial) {
            auto p = testutil::random_polytope(d, d + 5, rng);
            if (static_cast<int>(p->vertices().size()) == d + 1) continue;
            CAPTURE(d);
            CHECK(p->flag_count() > factorial(d + 1));
        }
    }
}

TEST_CASE("triangle barycentric decomposition: 6 simplices of equal area") {
    auto t = regular_simplex(2);
    auto dec = t->flag_decomposition();
    REQUIRE(dec.size() == 6);
    double area = t->volume();
    for (const auto& s : dec) CHECK(s.volume() == doctest::Approx(area / 6.0).epsilon(1e-12));
}

TEST_CASE("square decomposition: 8 simplices summing to the area") {
    auto p = hypercube(2);
    auto dec = p->flag_decomposition();
    REQUIRE(dec.size() == 8);
    double sum = 0;
    for (const auto& s : dec) sum += s.volume();
    CHECK(sum == doctest::Approx(p->volume()).epsilon(1e-8));
}

TEST_CASE("tetrahedron decomposition has 24 simplices") {
    auto t = regular_simplex(3);
    CHECK(t->flag_decomposition().size() == 24);
}

TEST_CASE("decomposition volumes sum to polytope volume on random hulls") {
    Rng rng(23);
    for (int d = 2; d <= 4; ++d) {
        auto p = testutil::random_polytope(d, d + 5, rng);
        double sum = 0;
        for (const auto& s : p->flag_decomposition()) sum += s.volume();
        CAPTURE(d);
        CHECK(sum == doctest::Approx(p->volume()).epsilon(1e-8));
    }
}

TEST_CASE("decomposition partitions: disjoint interiors, full cover") {
    Rng rng(29);
    auto p = testutil::random_polytope(2, 7, rng);
    auto dec = p->flag_decomposition();
    auto inside_simplex = [&](const FlagSimplex& s, const Vec& x) {
        // Barycentric membership with a strict margin.
        Mat m(2, 2);
        m.col(0) = s.vertices[1] - s.vertices[0];
        m.col(1) = s.vertices[2] - s.vertices[0];
        Vec lam = m.partialPivLu().solve(x - s.vertices[0]);
        double l0 = 1.0 - lam.sum();
        return lam(0) > 1e-9 && lam(1) > 1e-9 && l0 > 1e-9;
    };
    std::uniform_real_distribution<double> unif(-1.5, 1.5);
    int tested = 0;
    while (tested < 300) {
        Vec x = v2(unif(rng), unif(rng));
        if (p->margin(x) < 1e-6) continue; // want clearly interior points
        ++tested;
        int hits = 0;
        for (const auto& s : dec) hits += inside_simplex(s, x) ? 1 : 0;
        CHECK(hits <= 1);
        // Points away from simplex boundaries must be covered.
        bool near_boundary = false;
        for (const auto& s : dec) {
            Mat m(2, 2);
            m.col(0) = s.vertices[1] - s.vertices[0];
            m.col(1) = s.vertices[2] - s.vertices[0];
            Vec lam = m.partialPivLu().solve(x - s.vertices[0]);
            double l0 = 1.0 - lam.sum();
            double closest = std::min({std::abs(lam(0)), std::abs(lam(1)), std::abs(l0)});
            if (closest < 1e-6) near_boundary = true;
        }
        if (!near_boundary) CHECK(hits == 1);
    }
}

TEST_CASE("custom picker is validated") {
    auto t = regular_simplex(2);
    FacePointPicker bad = [](const Polytope& poly, const Face& f) {
        Vec x = poly.face_barycenter(f);
        if (f.dim == 1) x += v2(10, 10); // push edge points far outside
        return x;
    };
    CHECK_THROWS_AS(t->flag_decomposition(bad), PickerPointNotInFace);
}

TEST_CASE("degenerate input raises") {
    CHECK_THROWS_AS(Polytope::convex_hull({v2(0, 0), v2(1, 1), v2(2, 2)}, 2), DegenerateInput);
    CHECK_THROWS_AS(Polytope::convex_hull({v2(0, 0), v2(1, 1)}, 2), DegenerateInput);
}

TEST_CASE("affine images keep combinatorics and scale volume") {
    Rng rng(31);
    auto p = testutil::random_polytope(3, 9, rng);
    Mat A(3, 3);
    A << 1.2, 0.3, 0.0,
        -0.1, 0.9, 0.2,
         0.0, 0.4, 1.1;
    Vec b(3);
    b << 0.5, -0.25, 1.0;
    auto q = p->affine_image(A, b);
    CHECK(q->flag_count() == p->flag_count());
    CHECK(q->volume() == doctest::Approx(p->volume() * std::abs(A.determinant())).epsilon(1e-9));
    // Facet planes must still support the image.
    for (const auto& f : q->facets())
        for (const auto& v : q->vertices())
            CHECK(f.normal.dot(v) <= f.offset + 1e-9);
    Vec img_centroid = A * p->centroid() + b;
    CHECK((q->centroid() - img_centroid).norm() < 1e-9);
}

TEST_CASE("flags come out in lexicographic face-id order") {
    auto c = hypercube(2);
    auto flags = c->enumerate_flags();
    std::vector<std::vector<int>> ids;
    ids.reserve(flags.size());
    for (const auto& f : flags) ids.push_back(f.faces);
    CHECK(std::is_sorted(ids.begin(), ids.end()));
}

TEST_CASE("lattice dump round-trips the face counts") {
    auto c = hypercube(2);
    std::ostringstream os;
    c->write_lattice(os);
    int lines = 0;
    std::string line;
    std::istringstream is(os.str());
    while (std::getline(is, line)) ++lines;
    CHECK(lines == 4 + 4 + 1);
}
