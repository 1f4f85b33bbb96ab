#ifndef HILBERT_BODY_IO_HPP
#define HILBERT_BODY_IO_HPP

#include <string>

#include <json.hpp>

#include "hilbert/convex_body.hpp"

namespace hilbert {

/// Body spec JSON: {"dim": d, "kind": k, "parameters": {...}} with kinds
///   ellipsoid  {center, axes}
///   pnorm      {center, scale, p}
///   polytope   {vertices: [[..], ..]}
///   affine     {matrix: [[row], ..], offset, inner: <body spec>}
ConvexBody body_from_json(const nlohmann::json& j);
nlohmann::json body_to_json(const ConvexBody& body);

/// Loads a body spec: .json files as above; anything else is read as a
/// plain-text vertex list, one point per line, whitespace-separated.
ConvexBody load_body(const std::string& path);
void save_body_json(const ConvexBody& body, const std::string& path);

std::shared_ptr<const Polytope> load_vertex_list(const std::string& path);
void save_vertex_list(const Polytope& poly, const std::string& path);

/// Deterministic number formatting used in all CSV output.
std::string format_number(double v);

} // namespace hilbert

#endif
