#include "hilbert/polytope.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <unordered_map>

#include "hilbert/errors.hpp"

namespace hilbert {
namespace {

struct LocalFacet {
    Vec normal;
    double offset = 0.0;
    std::vector<int> verts; // sorted indices into the local point array
};

double bbox_diag(const std::vector<Vec>& pts) {
    if (pts.empty()) return 1.0;
    Vec lo = pts[0], hi = pts[0];
    for (const auto& p : pts) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    double d = (hi - lo).norm();
    return d > 0 ? d : 1.0;
}

bool lex_less(const Vec& a, const Vec& b) {
    for (int i = 0; i < a.size(); ++i) {
        if (a(i) < b(i)) return true;
        if (a(i) > b(i)) return false;
    }
    return false;
}

std::vector<Vec> dedup_points(const std::vector<Vec>& pts, double tol) {
    std::vector<Vec> out;
    for (const auto& p : pts) {
        bool dup = false;
        for (const auto& q : out)
            if ((p - q).norm() <= tol) {
                dup = true;
                break;
            }
        if (!dup) out.push_back(p);
    }
    return out;
}

std::vector<LocalFacet> hull_facets(const std::vector<Vec>& pts, int k, double scale);

// ---------------------------------------------------------------- d = 1

std::vector<LocalFacet> hull_facets_1d(const std::vector<Vec>& pts) {
    int imin = 0, imax = 0;
    for (int i = 1; i < static_cast<int>(pts.size()); ++i) {
        if (pts[i](0) < pts[imin](0)) imin = i;
        if (pts[i](0) > pts[imax](0)) imax = i;
    }
    Vec plus(1), minus(1);
    plus << 1.0;
    minus << -1.0;
    return {{plus, pts[imax](0), {imax}}, {minus, -pts[imin](0), {imin}}};
}

// ---------------------------------------------------------------- d = 2

double cross2(const Vec& o, const Vec& a, const Vec& b) {
    return (a(0) - o(0)) * (b(1) - o(1)) - (a(1) - o(1)) * (b(0) - o(0));
}

// Andrew monotone chain; strict turns only, so collinear mid-edge points are
// dropped. Returns ccw-ordered indices.
std::vector<int> hull_chain_2d(const std::vector<Vec>& pts, double scale) {
    const double eps = 1e-9 * scale * scale;
    const int n = static_cast<int>(pts.size());
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return lex_less(pts[a], pts[b]); });
    std::vector<int> h(2 * n);
    int m = 0;
    for (int ii = 0; ii < n; ++ii) {
        int i = idx[ii];
        while (m >= 2 && cross2(pts[h[m - 2]], pts[h[m - 1]], pts[i]) <= eps) --m;
        h[m++] = i;
    }
    int lower = m + 1;
    for (int ii = n - 2; ii >= 0; --ii) {
        int i = idx[ii];
        while (m >= lower && cross2(pts[h[m - 2]], pts[h[m - 1]], pts[i]) <= eps) --m;
        h[m++] = i;
    }
    h.resize(m - 1);
    return h;
}

std::vector<LocalFacet> hull_facets_2d(const std::vector<Vec>& pts, double scale) {
    std::vector<int> ring = hull_chain_2d(pts, scale);
    const int m = static_cast<int>(ring.size());
    if (m < 3) throw DegenerateInput("2D hull collapsed to fewer than 3 vertices");
    std::vector<LocalFacet> out;
    out.reserve(m);
    for (int i = 0; i < m; ++i) {
        int a = ring[i], b = ring[(i + 1) % m];
        Vec t = pts[b] - pts[a];
        Vec n(2);
        n << t(1), -t(0); // outward for ccw order
        n.normalize();
        LocalFacet f;
        f.normal = n;
        f.offset = n.dot(pts[a]);
        f.verts = {a, b};
        std::sort(f.verts.begin(), f.verts.end());
        out.push_back(std::move(f));
    }
    return out;
}

// ---------------------------------------------------------------- d = 3

struct Tri {
    int a, b, c;
    Vec n;
    double off;
    bool alive = true;
    std::vector<int> conflicts;
};

std::int64_t edge_key(int u, int v, int n) {
    if (u > v) std::swap(u, v);
    return static_cast<std::int64_t>(u) * n + v;
}

Vec tri_normal(const Vec& a, const Vec& b, const Vec& c) {
    Vec u = b - a, v = c - a;
    Vec n(3);
    n << u(1) * v(2) - u(2) * v(1), u(2) * v(0) - u(0) * v(2), u(0) * v(1) - u(1) * v(0);
    return n;
}

class IncrementalHull3 {
public:
    IncrementalHull3(const std::vector<Vec>& pts, double scale)
        : pts_(pts), eps_(1e-9 * scale) {}

    std::vector<Tri> run() {
        init_tetra();
        for (;;) {
            int fi = -1;
            for (int i = 0; i < static_cast<int>(tris_.size()); ++i)
                if (tris_[i].alive && !tris_[i].conflicts.empty()) {
                    fi = i;
                    break;
                }
            if (fi < 0) break;
            insert_point(fi);
        }
        std::vector<Tri> out;
        for (auto& t : tris_)
            if (t.alive) out.push_back(t);
        return out;
    }

private:
    void init_tetra() {
        const int n = static_cast<int>(pts_.size());
        int i0 = 0;
        for (int i = 1; i < n; ++i)
            if (lex_less(pts_[i], pts_[i0])) i0 = i;
        int i1 = -1;
        double best = -1;
        for (int i = 0; i < n; ++i) {
            double d = (pts_[i] - pts_[i0]).norm();
            if (d > best) { best = d; i1 = i; }
        }
        if (best <= eps_) throw DegenerateInput("3D hull: all points coincide");
        Vec u = (pts_[i1] - pts_[i0]).normalized();
        int i2 = -1;
        best = -1;
        for (int i = 0; i < n; ++i) {
            Vec w = pts_[i] - pts_[i0];
            double d = (w - w.dot(u) * u).norm();
            if (d > best) { best = d; i2 = i; }
        }
        if (best <= eps_) throw DegenerateInput("3D hull: points are collinear");
        Vec nrm = tri_normal(pts_[i0], pts_[i1], pts_[i2]).normalized();
        int i3 = -1;
        best = -1;
        for (int i = 0; i < n; ++i) {
            double d = std::abs(nrm.dot(pts_[i] - pts_[i0]));
            if (d > best) { best = d; i3 = i; }
        }
        if (best <= eps_) throw DegenerateInput("3D hull: points are coplanar");
        interior_ = (pts_[i0] + pts_[i1] + pts_[i2] + pts_[i3]) / 4.0;
        add_tri(i0, i1, i2);
        add_tri(i0, i1, i3);
        add_tri(i0, i2, i3);
        add_tri(i1, i2, i3);
        std::vector<int> all(n);
        std::iota(all.begin(), all.end(), 0);
        distribute(all, {0, 1, 2, 3});
    }

    int add_tri(int a, int b, int c) {
        Tri t;
        t.a = a;
        t.b = b;
        t.c = c;
        Vec n = tri_normal(pts_[a], pts_[b], pts_[c]);
        double len = n.norm();
        if (len <= 0) throw DegenerateInput("3D hull: degenerate face");
        n /= len;
        double off = n.dot(pts_[a]);
        if (n.dot(interior_) > off) { n = -n; off = -off; }
        t.n = n;
        t.off = off;
        int id = static_cast<int>(tris_.size());
        tris_.push_back(std::move(t));
        link_edge(a, b, id);
        link_edge(b, c, id);
        link_edge(a, c, id);
        return id;
    }

    void link_edge(int u, int v, int tri) {
        auto [it, inserted] = edges_.try_emplace(edge_key(u, v, static_cast<int>(pts_.size())),
                                                 std::array<int, 2>{-1, -1});
        auto& slot = it->second;
        if (slot[0] < 0) slot[0] = tri;
        else slot[1] = tri;
    }

    void unlink_edge(int u, int v, int tri) {
        auto it = edges_.find(edge_key(u, v, static_cast<int>(pts_.size())));
        if (it == edges_.end()) return;
        if (it->second[0] == tri) it->second[0] = it->second[1];
        it->second[1] = -1;
        if (it->second[0] < 0) edges_.erase(it);
    }

    int neighbor(int u, int v, int self) const {
        auto it = edges_.find(edge_key(u, v, static_cast<int>(pts_.size())));
        if (it == edges_.end()) return -1;
        return it->second[0] == self ? it->second[1] : it->second[0];
    }

    void distribute(const std::vector<int>& candidates, const std::vector<int>& faces) {
        for (int p : candidates) {
            for (int f : faces) {
                if (!tris_[f].alive) continue;
                if (tris_[f].n.dot(pts_[p]) - tris_[f].off > eps_) {
                    tris_[f].conflicts.push_back(p);
                    break;
                }
            }
        }
    }

    void insert_point(int seed_face) {
        auto& seed = tris_[seed_face];
        int p = seed.conflicts[0];
        double best = -1;
        for (int q : seed.conflicts) {
            double d = seed.n.dot(pts_[q]) - seed.off;
            if (d > best) { best = d; p = q; }
        }
        // Visible set by BFS over the adjacency graph.
        std::vector<int> visible, stack{seed_face};
        std::unordered_map<int, bool> seen{{seed_face, true}};
        while (!stack.empty()) {
            int f = stack.back();
            stack.pop_back();
            visible.push_back(f);
            const Tri& t = tris_[f];
            const int vs[3][2] = {{t.a, t.b}, {t.b, t.c}, {t.a, t.c}};
            for (auto& e : vs) {
                int g = neighbor(e[0], e[1], f);
                if (g < 0 || seen.count(g) || !tris_[g].alive) continue;
                seen[g] = true;
                if (tris_[g].n.dot(pts_[p]) - tris_[g].off > eps_) stack.push_back(g);
            }
        }
        // Horizon edges and orphaned conflict points.
        std::vector<std::pair<int, int>> horizon;
        std::vector<int> orphans;
        std::unordered_map<std::int64_t, bool> orphan_seen;
        for (int f : visible) {
            const Tri& t = tris_[f];
            const int vs[3][2] = {{t.a, t.b}, {t.b, t.c}, {t.a, t.c}};
            for (auto& e : vs) {
                int g = neighbor(e[0], e[1], f);
                bool g_visible = g >= 0 && tris_[g].alive &&
                                 tris_[g].n.dot(pts_[p]) - tris_[g].off > eps_;
                if (!g_visible) horizon.emplace_back(e[0], e[1]);
            }
            for (int q : t.conflicts)
                if (q != p && !orphan_seen.count(q)) {
                    orphan_seen[q] = true;
                    orphans.push_back(q);
                }
        }
        for (int f : visible) {
            Tri& t = tris_[f];
            t.alive = false;
            t.conflicts.clear();
            unlink_edge(t.a, t.b, f);
            unlink_edge(t.b, t.c, f);
            unlink_edge(t.a, t.c, f);
        }
        std::vector<int> fresh;
        for (auto& e : horizon) fresh.push_back(add_tri(p, e.first, e.second));
        distribute(orphans, fresh);
    }

    const std::vector<Vec>& pts_;
    double eps_;
    Vec interior_;
    std::vector<Tri> tris_;
    std::unordered_map<std::int64_t, std::array<int, 2>> edges_;
};

// Merge coplanar adjacent triangles into polygon facets and reduce each
// facet's vertex set to its extreme points.
std::vector<LocalFacet> hull_facets_3d(const std::vector<Vec>& pts, double scale) {
    IncrementalHull3 hull(pts, scale);
    std::vector<Tri> tris = hull.run();
    const int m = static_cast<int>(tris.size());
    const double eps = 1e-9 * scale;

    // Union-find over triangles.
    std::vector<int> parent(m);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    std::unordered_map<std::int64_t, std::vector<int>> edge2tris;
    const int n = static_cast<int>(pts.size());
    for (int i = 0; i < m; ++i) {
        const Tri& t = tris[i];
        edge2tris[edge_key(t.a, t.b, n)].push_back(i);
        edge2tris[edge_key(t.b, t.c, n)].push_back(i);
        edge2tris[edge_key(t.a, t.c, n)].push_back(i);
    }
    auto coplanar = [&](const Tri& s, const Tri& t) {
        if (s.n.dot(t.n) < 1.0 - 1e-9) return false;
        const int vs[3] = {t.a, t.b, t.c};
        for (int v : vs)
            if (std::abs(s.n.dot(pts[v]) - s.off) > eps) return false;
        return true;
    };
    for (auto& [key, list] : edge2tris) {
        (void)key;
        if (list.size() != 2) continue;
        const Tri& s = tris[list[0]];
        const Tri& t = tris[list[1]];
        if (coplanar(s, t) && coplanar(t, s)) {
            int ra = find(list[0]), rb = find(list[1]);
            if (ra != rb) parent[ra] = rb;
        }
    }
    std::unordered_map<int, std::vector<int>> groups;
    for (int i = 0; i < m; ++i) groups[find(i)].push_back(i);

    std::vector<LocalFacet> out;
    out.reserve(groups.size());
    for (auto& [root, members] : groups) {
        (void)root;
        Vec nsum = Vec::Zero(3);
        std::vector<int> vset;
        for (int i : members) {
            const Tri& t = tris[i];
            nsum += t.n * tri_normal(pts[t.a], pts[t.b], pts[t.c]).norm();
            vset.push_back(t.a);
            vset.push_back(t.b);
            vset.push_back(t.c);
        }
        std::sort(vset.begin(), vset.end());
        vset.erase(std::unique(vset.begin(), vset.end()), vset.end());
        Vec nrm = nsum.normalized();
        double off = 0;
        for (int v : vset) off += nrm.dot(pts[v]);
        off /= static_cast<double>(vset.size());
        // Project onto the plane and keep only extreme points.
        Mat basis = hyperplane_basis(nrm);
        std::vector<Vec> local;
        local.reserve(vset.size());
        for (int v : vset) local.push_back(basis.transpose() * pts[v]);
        std::vector<int> ring = hull_chain_2d(local, scale);
        LocalFacet f;
        f.normal = nrm;
        f.offset = off;
        for (int r : ring) f.verts.push_back(vset[r]);
        std::sort(f.verts.begin(), f.verts.end());
        out.push_back(std::move(f));
    }
    return out;
}

// ---------------------------------------------------------------- d = 4

// Supporting-hyperplane search over vertex quadruples; O(n^4 * n), fine at
// desk-scale vertex counts.
std::vector<LocalFacet> hull_facets_4d(const std::vector<Vec>& pts, double scale) {
    const int n = static_cast<int>(pts.size());
    const double eps = 1e-9 * scale;
    std::map<std::vector<int>, LocalFacet> found;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = j + 1; k < n; ++k)
                for (int l = k + 1; l < n; ++l) {
                    Mat d(3, 4);
                    d.row(0) = (pts[j] - pts[i]).transpose();
                    d.row(1) = (pts[k] - pts[i]).transpose();
                    d.row(2) = (pts[l] - pts[i]).transpose();
                    // Generalized cross product via cofactor expansion.
                    Vec nrm(4);
                    for (int c = 0; c < 4; ++c) {
                        Mat minor(3, 3);
                        int cc = 0;
                        for (int c2 = 0; c2 < 4; ++c2) {
                            if (c2 == c) continue;
                            minor.col(cc++) = d.col(c2);
                        }
                        nrm(c) = ((c % 2) ? -1.0 : 1.0) * minor.determinant();
                    }
                    double len = nrm.norm();
                    if (len <= 1e-9 * scale * scale * scale) continue;
                    nrm /= len;
                    double off = nrm.dot(pts[i]);
                    double lo = 0, hi = 0;
                    for (int q = 0; q < n; ++q) {
                        double mgn = nrm.dot(pts[q]) - off;
                        lo = std::min(lo, mgn);
                        hi = std::max(hi, mgn);
                    }
                    double sgn;
                    if (hi <= eps) sgn = 1.0;
                    else if (lo >= -eps) sgn = -1.0;
                    else continue;
                    nrm *= sgn;
                    off *= sgn;
                    std::vector<int> onplane;
                    for (int q = 0; q < n; ++q)
                        if (std::abs(nrm.dot(pts[q]) - off) <= eps) onplane.push_back(q);
                    if (found.count(onplane)) continue;
                    // Reduce to extreme points within the facet hyperplane.
                    Mat basis = hyperplane_basis(nrm);
                    std::vector<Vec> local;
                    for (int q : onplane) local.push_back(basis.transpose() * pts[q]);
                    std::vector<LocalFacet> sub = hull_facets(local, 3, scale);
                    std::vector<int> keep;
                    for (const auto& sf : sub)
                        for (int v : sf.verts) keep.push_back(onplane[v]);
                    std::sort(keep.begin(), keep.end());
                    keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
                    LocalFacet f;
                    f.normal = nrm;
                    f.offset = off;
                    f.verts = keep;
                    found[onplane] = std::move(f);
                }
    std::vector<LocalFacet> out;
    out.reserve(found.size());
    for (auto& [key, f] : found) {
        (void)key;
        out.push_back(std::move(f));
    }
    if (out.size() < 5) throw DegenerateInput("4D hull: facet search failed");
    return out;
}

std::vector<LocalFacet> hull_facets(const std::vector<Vec>& pts, int k, double scale) {
    switch (k) {
        case 1: return hull_facets_1d(pts);
        case 2: return hull_facets_2d(pts, scale);
        case 3: return hull_facets_3d(pts, scale);
        case 4: return hull_facets_4d(pts, scale);
        default: throw DegenerateInput("exact lattices are limited to d <= 4");
    }
}

// Local orthonormal coordinates of a point subset within its affine hull.
std::vector<Vec> local_coords(const std::vector<Vec>& pts, int k) {
    const int m = static_cast<int>(pts.size());
    Mat d(pts[0].size(), m - 1);
    for (int i = 1; i < m; ++i) d.col(i - 1) = pts[i] - pts[0];
    Eigen::ColPivHouseholderQR<Mat> qr(d);
    Mat q = qr.householderQ();
    Mat basis = q.leftCols(k);
    std::vector<Vec> out(m);
    for (int i = 0; i < m; ++i) out[i] = basis.transpose() * (pts[i] - pts[0]);
    return out;
}

// Lebesgue measure of a convex point set of affine dimension k given in R^k
// coordinates, via the facet divergence formula. Used as the lattice-free
// volume route.
double measure_polytope(const std::vector<Vec>& pts, int k, double scale) {
    if (k == 1) {
        double lo = pts[0](0), hi = pts[0](0);
        for (const auto& p : pts) {
            lo = std::min(lo, p(0));
            hi = std::max(hi, p(0));
        }
        return hi - lo;
    }
    Vec o = Vec::Zero(k);
    for (const auto& p : pts) o += p;
    o /= static_cast<double>(pts.size());
    double vol = 0;
    for (const auto& f : hull_facets(pts, k, scale)) {
        std::vector<Vec> fpts;
        fpts.reserve(f.verts.size());
        for (int v : f.verts) fpts.push_back(pts[v]);
        double h = f.offset - f.normal.dot(o);
        vol += h * measure_polytope(local_coords(fpts, k - 1), k - 1, scale);
    }
    return vol / k;
}

} // namespace

// ------------------------------------------------------------------ class

std::shared_ptr<const Polytope> Polytope::convex_hull(const std::vector<Vec>& points, int d) {
    if (d < 1 || d > 4) throw DegenerateInput("exact lattices are limited to d in 1..4");
    if (points.empty()) throw DegenerateInput("empty point set");
    for (const auto& p : points)
        if (p.size() != d) throw DimensionMismatch("point dimension != d");
    double scale = bbox_diag(points);
    std::vector<Vec> pts = dedup_points(points, 1e-9 * scale);
    if (affine_rank(pts) < d) throw DegenerateInput("points do not affinely span dimension d");

    std::vector<LocalFacet> raw = hull_facets(pts, d, scale);

    // Global vertex set = union of facet extreme points, sorted for
    // reproducible ids.
    std::vector<int> used;
    for (const auto& f : raw)
        for (int v : f.verts) used.push_back(v);
    std::sort(used.begin(), used.end());
    used.erase(std::unique(used.begin(), used.end()), used.end());
    std::vector<int> order(used.begin(), used.end());
    std::sort(order.begin(), order.end(), [&](int a, int b) { return lex_less(pts[a], pts[b]); });
    std::unordered_map<int, int> remap;
    for (int i = 0; i < static_cast<int>(order.size()); ++i) remap[order[i]] = i;

    auto poly = std::shared_ptr<Polytope>(new Polytope());
    poly->dim_ = d;
    poly->scale_ = scale;
    poly->vertices_.reserve(order.size());
    for (int v : order) poly->vertices_.push_back(pts[v]);
    poly->facets_.reserve(raw.size());
    for (auto& f : raw) {
        PolytopeFacet pf;
        pf.normal = f.normal;
        pf.offset = f.offset;
        for (int v : f.verts) pf.vertices.push_back(remap[v]);
        std::sort(pf.vertices.begin(), pf.vertices.end());
        poly->facets_.push_back(std::move(pf));
    }
    // Deterministic facet order.
    std::sort(poly->facets_.begin(), poly->facets_.end(),
              [](const PolytopeFacet& a, const PolytopeFacet& b) { return a.vertices < b.vertices; });
    poly->build_lattice_and_geometry();
    return poly;
}

void Polytope::build_lattice_and_geometry() {
    const int d = dim_;
    lattice_.assign(d + 1, {});

    // Top face.
    Face top;
    top.dim = d;
    top.vertices.resize(vertices_.size());
    std::iota(top.vertices.begin(), top.vertices.end(), 0);
    lattice_[d].push_back(top);

    if (d >= 1) {
        auto& rank = lattice_[d - 1];
        for (const auto& f : facets_) {
            Face face;
            face.dim = d - 1;
            face.vertices = f.vertices;
            rank.push_back(std::move(face));
        }
        for (int i = 0; i < static_cast<int>(rank.size()); ++i)
            lattice_[d][0].subfaces.push_back(i);
    }

    // Recurse down the ranks; faces are deduplicated by vertex-id set.
    for (int k = d - 1; k >= 1; --k) {
        std::map<std::vector<int>, int> lookup;
        for (auto& face : lattice_[k]) {
            std::vector<Vec> fpts;
            fpts.reserve(face.vertices.size());
            for (int v : face.vertices) fpts.push_back(vertices_[v]);
            std::vector<LocalFacet> subs;
            if (k == 1) {
                // Edges carry exactly their two endpoints.
                subs.push_back({Vec(), 0.0, {0}});
                subs.push_back({Vec(), 0.0, {1}});
            } else {
                subs = hull_facets(local_coords(fpts, k), k, scale_);
            }
            for (const auto& sf : subs) {
                std::vector<int> global;
                global.reserve(sf.verts.size());
                for (int v : sf.verts) global.push_back(face.vertices[v]);
                std::sort(global.begin(), global.end());
                auto it = lookup.find(global);
                int id;
                if (it == lookup.end()) {
                    id = static_cast<int>(lattice_[k - 1].size());
                    lookup[global] = id;
                    Face nf;
                    nf.dim = k - 1;
                    nf.vertices = global;
                    lattice_[k - 1].push_back(std::move(nf));
                } else {
                    id = it->second;
                }
                face.subfaces.push_back(id);
            }
            std::sort(face.subfaces.begin(), face.subfaces.end());
            face.subfaces.erase(std::unique(face.subfaces.begin(), face.subfaces.end()),
                                face.subfaces.end());
        }
    }

    // Superface incidences.
    for (int k = 1; k <= d; ++k)
        for (int i = 0; i < static_cast<int>(lattice_[k].size()); ++i)
            for (int sub : lattice_[k][i].subfaces)
                lattice_[k - 1][sub].superfaces.push_back(i);
    for (auto& rank : lattice_)
        for (auto& f : rank) std::sort(f.superfaces.begin(), f.superfaces.end());

    // Volume by the divergence route, centroid by the barycentric route.
    volume_ = measure_polytope(vertices_, d, scale_);
    if (volume_ <= 0) throw DegenerateBody("hull volume vanished");

    double vsum = 0;
    Vec c = Vec::Zero(d);
    for (const auto& s : flag_decomposition()) {
        double v = s.volume();
        Vec mean = Vec::Zero(d);
        for (const auto& p : s.vertices) mean += p;
        mean /= static_cast<double>(s.vertices.size());
        c += v * mean;
        vsum += v;
    }
    centroid_ = c / vsum;
    base_point_ = centroid_;
}

long long Polytope::total_face_count() const {
    long long n = 0;
    for (const auto& rank : lattice_) n += static_cast<long long>(rank.size());
    return n;
}

long long Polytope::face_flag_count(int rank, int id,
                                    std::vector<std::vector<long long>>& memo) const {
    if (rank == 0) return 1;
    long long& slot = memo[rank][id];
    if (slot >= 0) return slot;
    long long total = 0;
    for (int sub : lattice_[rank][id].subfaces) total += face_flag_count(rank - 1, sub, memo);
    slot = total;
    return total;
}

long long Polytope::flag_count() const {
    std::vector<std::vector<long long>> memo(dim_ + 1);
    for (int k = 0; k <= dim_; ++k) memo[k].assign(lattice_[k].size(), -1);
    return face_flag_count(dim_, 0, memo);
}

std::vector<Flag> Polytope::enumerate_flags() const {
    std::vector<Flag> out;
    std::vector<int> chain(dim_ + 1, 0);
    std::function<void(int, int)> ascend = [&](int rank, int id) {
        chain[rank] = id;
        if (rank == dim_) {
            Flag f;
            f.faces = chain;
            out.push_back(std::move(f));
            return;
        }
        for (int up : lattice_[rank][id].superfaces) ascend(rank + 1, up);
    };
    for (int v = 0; v < static_cast<int>(lattice_[0].size()); ++v) ascend(0, v);
    return out;
}

Vec Polytope::face_barycenter(const Face& f) const {
    Vec c = Vec::Zero(dim_);
    for (int v : f.vertices) c += vertices_[v];
    return c / static_cast<double>(f.vertices.size());
}

bool Polytope::point_in_relative_interior(const Face& f, const Vec& x) const {
    const double on_tol = 1e-9 * scale_;
    const double strict_tol = 1e-12 * scale_;
    for (const auto& facet : facets_) {
        double m = facet.offset - facet.normal.dot(x);
        bool contains_face = std::includes(facet.vertices.begin(), facet.vertices.end(),
                                           f.vertices.begin(), f.vertices.end());
        if (contains_face) {
            if (std::abs(m) > on_tol) return false;
        } else {
            if (m < strict_tol) return false;
        }
    }
    return true;
}

std::vector<FlagSimplex> Polytope::flag_decomposition() const {
    // Barycenters are relative-interior by construction; skip validation.
    std::vector<std::vector<Vec>> picked(dim_ + 1);
    for (int k = 0; k <= dim_; ++k) {
        picked[k].reserve(lattice_[k].size());
        for (const auto& f : lattice_[k]) picked[k].push_back(face_barycenter(f));
    }
    std::vector<FlagSimplex> out;
    for (auto& flag : enumerate_flags()) {
        FlagSimplex s;
        s.vertices.reserve(dim_ + 1);
        for (int k = 0; k <= dim_; ++k) s.vertices.push_back(picked[k][flag.faces[k]]);
        s.flag = std::move(flag);
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<FlagSimplex> Polytope::flag_decomposition(const FacePointPicker& picker) const {
    std::vector<std::vector<Vec>> picked(dim_ + 1);
    for (int k = 0; k <= dim_; ++k) {
        picked[k].reserve(lattice_[k].size());
        for (const auto& f : lattice_[k]) {
            Vec x = picker(*this, f);
            if (!point_in_relative_interior(f, x))
                throw PickerPointNotInFace("picker point is outside its face (rank " +
                                           std::to_string(k) + ")");
            picked[k].push_back(std::move(x));
        }
    }
    std::vector<FlagSimplex> out;
    for (auto& flag : enumerate_flags()) {
        FlagSimplex s;
        s.vertices.reserve(dim_ + 1);
        for (int k = 0; k <= dim_; ++k) s.vertices.push_back(picked[k][flag.faces[k]]);
        s.flag = std::move(flag);
        out.push_back(std::move(s));
    }
    return out;
}

double Polytope::volume() const { return volume_; }

Vec Polytope::centroid() const {
    if (volume_ <= 1e-300) throw DegenerateBody();
    return centroid_;
}

bool Polytope::contains(const Vec& x, double tol) const { return margin(x) >= -tol; }

double Polytope::margin(const Vec& x) const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& f : facets_) m = std::min(m, f.offset - f.normal.dot(x));
    return m;
}

std::shared_ptr<const Polytope> Polytope::affine_image(const Mat& A, const Vec& b) const {
    auto out = std::shared_ptr<Polytope>(new Polytope());
    out->dim_ = dim_;
    out->vertices_.reserve(vertices_.size());
    for (const auto& v : vertices_) out->vertices_.push_back(A * v + b);
    out->scale_ = bbox_diag(out->vertices_);
    Mat AinvT = A.inverse().transpose();
    out->facets_.reserve(facets_.size());
    for (const auto& f : facets_) {
        PolytopeFacet nf;
        nf.normal = (AinvT * f.normal).normalized();
        nf.vertices = f.vertices;
        nf.offset = nf.normal.dot(out->vertices_[f.vertices[0]]);
        out->facets_.push_back(std::move(nf));
    }
    out->lattice_ = lattice_;
    out->volume_ = volume_ * std::abs(A.determinant());
    out->centroid_ = A * centroid_ + b;
    out->base_point_ = A * base_point_ + b;
    return out;
}

void Polytope::write_lattice(std::ostream& os) const {
    for (int k = 0; k <= dim_; ++k)
        for (int i = 0; i < static_cast<int>(lattice_[k].size()); ++i) {
            os << "rank " << k << " id " << i << " vertices";
            for (int v : lattice_[k][i].vertices) os << ' ' << v;
            os << '\n';
        }
}

// ------------------------------------------------------------- fixtures

std::shared_ptr<const Polytope> regular_simplex(int d) {
    // Vertices of the standard simplex in R^{d+1}, expressed in an
    // orthonormal basis of the sum-1 hyperplane, then scaled to unit
    // circumradius.
    std::vector<Vec> hi(d + 1, Vec::Zero(d + 1));
    for (int i = 0; i <= d; ++i) hi[i](i) = 1.0;
    Vec c = Vec::Constant(d + 1, 1.0 / (d + 1));
    Mat diffs(d + 1, d);
    for (int i = 1; i <= d; ++i) diffs.col(i - 1) = hi[i] - hi[0];
    Eigen::ColPivHouseholderQR<Mat> qr(diffs);
    Mat basis = Mat(qr.householderQ()).leftCols(d);
    std::vector<Vec> pts;
    pts.reserve(d + 1);
    for (int i = 0; i <= d; ++i) pts.push_back(basis.transpose() * (hi[i] - c));
    double r = pts[0].norm();
    for (auto& p : pts) p /= r;
    return Polytope::convex_hull(pts, d);
}

std::shared_ptr<const Polytope> regular_polygon(int n) {
    std::vector<Vec> pts;
    pts.reserve(n);
    for (int k = 0; k < n; ++k) {
        double th = 2.0 * std::numbers::pi * k / n;
        Vec p(2);
        p << std::cos(th), std::sin(th);
        pts.push_back(p);
    }
    return Polytope::convex_hull(pts, 2);
}

std::shared_ptr<const Polytope> hypercube(int d, double h) {
    std::vector<Vec> pts;
    pts.reserve(1 << d);
    for (int mask = 0; mask < (1 << d); ++mask) {
        Vec p(d);
        for (int i = 0; i < d; ++i) p(i) = (mask & (1 << i)) ? h : -h;
        pts.push_back(p);
    }
    return Polytope::convex_hull(pts, d);
}

} // namespace hilbert
