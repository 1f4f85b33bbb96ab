#ifndef HILBERT_GEOMETRY_HPP
#define HILBERT_GEOMETRY_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace hilbert {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Lebesgue volume of the d-dimensional Euclidean unit ball.
inline double unit_ball_volume(int d) {
    return std::pow(std::numbers::pi, d / 2.0) / std::tgamma(d / 2.0 + 1.0);
}

/// Surface measure of the (d-1)-sphere in R^d.
inline double unit_sphere_area(int d) {
    return d * unit_ball_volume(d);
}

/// Volume of the simplex spanned by verts (d+1 points in R^d).
inline double simplex_volume(const std::vector<Vec>& verts) {
    const int d = static_cast<int>(verts.size()) - 1;
    Mat m(d, d);
    for (int i = 0; i < d; ++i) m.col(i) = verts[i + 1] - verts[0];
    double factorial = 1.0;
    for (int k = 2; k <= d; ++k) factorial *= k;
    return std::abs(m.determinant()) / factorial;
}

/// Dimension of the affine span of a point set, with a relative tolerance.
inline int affine_rank(const std::vector<Vec>& pts, double tol = 1e-9) {
    if (pts.size() <= 1) return 0;
    const int d = static_cast<int>(pts[0].size());
    Mat m(d, static_cast<int>(pts.size()) - 1);
    for (std::size_t i = 1; i < pts.size(); ++i) m.col(static_cast<int>(i) - 1) = pts[i] - pts[0];
    Eigen::JacobiSVD<Mat> svd(m);
    const auto& s = svd.singularValues();
    if (s.size() == 0 || s(0) == 0.0) return 0;
    int r = 0;
    for (int i = 0; i < s.size(); ++i)
        if (s(i) > tol * s(0)) ++r;
    return r;
}

/// Orthonormal basis of the hyperplane with unit normal n (columns span n-perp).
inline Mat hyperplane_basis(const Vec& n) {
    const int d = static_cast<int>(n.size());
    Eigen::FullPivHouseholderQR<Mat> qr(n);
    Mat q = qr.matrixQ();
    Mat basis(d, d - 1);
    // First column of Q is +-n; the rest span the orthogonal complement.
    for (int j = 1; j < d; ++j) basis.col(j - 1) = q.col(j);
    return basis;
}

inline double inv_tanh(double s) { return std::atanh(s); }

/// Shoelace area of a ccw-ordered polygon.
inline double polygon_area(const std::vector<Vec>& v) {
    double acc = 0;
    const int n = static_cast<int>(v.size());
    for (int i = 0; i < n; ++i) {
        const Vec& a = v[i];
        const Vec& b = v[(i + 1) % n];
        acc += a(0) * b(1) - a(1) * b(0);
    }
    return 0.5 * std::abs(acc);
}

/// Area of the polar dual of a convex polygon with the origin in its
/// interior, given as a ccw vertex ring. Dual vertices correspond to edges.
inline double polar_polygon_area(const std::vector<Vec>& v) {
    const int n = static_cast<int>(v.size());
    std::vector<Vec> dual;
    dual.reserve(n);
    for (int i = 0; i < n; ++i) {
        const Vec& a = v[i];
        const Vec& b = v[(i + 1) % n];
        double det = a(0) * b(1) - a(1) * b(0);
        if (std::abs(det) < 1e-300) continue; // degenerate edge
        Vec z(2);
        z << (b(1) - a(1)) / det, (a(0) - b(0)) / det;
        dual.push_back(z);
    }
    return polygon_area(dual);
}

/// Monotone-chain hull of 2D points, ccw vertex ring (strict turns).
inline std::vector<Vec> convex_hull_ring_2d(const std::vector<Vec>& pts) {
    const int n = static_cast<int>(pts.size());
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
        return pts[a](0) < pts[b](0) ||
               (pts[a](0) == pts[b](0) && pts[a](1) < pts[b](1));
    });
    auto cross = [&](int o, int a, int b) {
        return (pts[a](0) - pts[o](0)) * (pts[b](1) - pts[o](1)) -
               (pts[a](1) - pts[o](1)) * (pts[b](0) - pts[o](0));
    };
    std::vector<int> h(2 * n);
    int m = 0;
    for (int ii = 0; ii < n; ++ii) {
        int i = idx[ii];
        while (m >= 2 && cross(h[m - 2], h[m - 1], i) <= 0) --m;
        h[m++] = i;
    }
    int lower = m + 1;
    for (int ii = n - 2; ii >= 0; --ii) {
        int i = idx[ii];
        while (m >= lower && cross(h[m - 2], h[m - 1], i) <= 0) --m;
        h[m++] = i;
    }
    std::vector<Vec> ring;
    ring.reserve(m - 1);
    for (int k = 0; k < m - 1; ++k) ring.push_back(pts[h[k]]);
    return ring;
}

} // namespace hilbert

#endif
