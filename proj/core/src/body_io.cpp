#include "hilbert/body_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "hilbert/errors.hpp"

namespace hilbert {
namespace {

Vec vec_from_json(const nlohmann::json& j) {
    Vec v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<int>(i)) = j[i].get<double>();
    return v;
}

nlohmann::json vec_to_json(const Vec& v) {
    nlohmann::json j = nlohmann::json::array();
    for (int i = 0; i < v.size(); ++i) j.push_back(v(i));
    return j;
}

} // namespace

ConvexBody body_from_json(const nlohmann::json& j) {
    if (!j.contains("kind") || !j.contains("dim"))
        throw BadConfig("body spec needs 'dim' and 'kind'");
    const int d = j["dim"].get<int>();
    const std::string kind = j["kind"].get<std::string>();
    const nlohmann::json& p = j.value("parameters", nlohmann::json::object());

    if (kind == "ellipsoid") {
        Vec center = p.contains("center") ? vec_from_json(p["center"]) : Vec::Zero(d);
        Vec axes = p.contains("axes") ? vec_from_json(p["axes"]) : Vec::Ones(d);
        if (center.size() != d || axes.size() != d) throw BadConfig("ellipsoid sizes");
        return ConvexBody::ellipsoid(center, axes);
    }
    if (kind == "pnorm") {
        Vec center = p.contains("center") ? vec_from_json(p["center"]) : Vec::Zero(d);
        double scale = p.value("scale", 1.0);
        double exponent = p.value("p", 2.0);
        if (center.size() != d) throw BadConfig("pnorm sizes");
        return ConvexBody::pnorm_ball(center, scale, exponent);
    }
    if (kind == "polytope") {
        if (!p.contains("vertices")) throw BadConfig("polytope spec needs vertices");
        std::vector<Vec> pts;
        for (const auto& row : p["vertices"]) {
            Vec v = vec_from_json(row);
            if (v.size() != d) throw BadConfig("polytope vertex dimension");
            pts.push_back(std::move(v));
        }
        return ConvexBody::polytope_body(Polytope::convex_hull(pts, d));
    }
    if (kind == "affine") {
        if (!p.contains("inner") || !p.contains("matrix")) throw BadConfig("affine spec");
        ConvexBody inner = body_from_json(p["inner"]);
        const auto& rows = p["matrix"];
        Mat A(d, d);
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c) A(r, c) = rows[r][c].get<double>();
        Vec b = p.contains("offset") ? vec_from_json(p["offset"]) : Vec::Zero(d);
        return ConvexBody::affine_image(inner, A, b);
    }
    throw BadConfig("unknown body kind: " + kind);
}

nlohmann::json body_to_json(const ConvexBody& body) {
    nlohmann::json j;
    j["dim"] = body.dim();
    if (auto e = body.as_ellipsoid()) {
        j["kind"] = "ellipsoid";
        j["parameters"] = {{"center", vec_to_json(e->center)}, {"axes", vec_to_json(e->axes)}};
        return j;
    }
    if (auto p = body.as_pnorm_ball()) {
        j["kind"] = "pnorm";
        j["parameters"] = {{"center", vec_to_json(p->center)},
                           {"scale", p->scale},
                           {"p", p->exponent}};
        return j;
    }
    if (auto poly = body.as_polytope()) {
        j["kind"] = "polytope";
        nlohmann::json verts = nlohmann::json::array();
        for (const auto& v : poly->vertices()) verts.push_back(vec_to_json(v));
        j["parameters"] = {{"vertices", verts}};
        return j;
    }
    throw BadConfig("body is not serialisable (affine wrapper or intersection)");
}

ConvexBody load_body(const std::string& path) {
    if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") {
        std::ifstream in(path);
        if (!in) throw BadConfig("cannot open body spec: " + path);
        nlohmann::json j;
        in >> j;
        return body_from_json(j);
    }
    return ConvexBody::polytope_body(load_vertex_list(path));
}

void save_body_json(const ConvexBody& body, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw BadConfig("cannot write body spec: " + path);
    out << body_to_json(body).dump(2) << '\n';
}

std::shared_ptr<const Polytope> load_vertex_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw BadConfig("cannot open vertex list: " + path);
    std::vector<Vec> pts;
    std::string line;
    int d = -1;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::vector<double> row;
        double x;
        while (ls >> x) row.push_back(x);
        if (row.empty()) continue;
        if (d < 0) d = static_cast<int>(row.size());
        if (static_cast<int>(row.size()) != d)
            throw BadConfig("inconsistent vertex dimensions in " + path);
        Vec v(d);
        for (int i = 0; i < d; ++i) v(i) = row[i];
        pts.push_back(std::move(v));
    }
    if (pts.empty()) throw BadConfig("empty vertex list: " + path);
    return Polytope::convex_hull(pts, d);
}

void save_vertex_list(const Polytope& poly, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw BadConfig("cannot write vertex list: " + path);
    for (const auto& v : poly.vertices()) {
        for (int i = 0; i < v.size(); ++i) out << (i ? " " : "") << format_number(v(i));
        out << '\n';
    }
}

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

} // namespace hilbert
