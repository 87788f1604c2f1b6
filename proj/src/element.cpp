#include "fricflow/element.hpp"

namespace fricflow {

TriangleGeometry triangle_geometry(const Mesh& mesh, int t) {
    TriangleGeometry g;
    const auto& v = mesh.triangles[t].v;
    for (int k = 0; k < 3; ++k) g.corners[k] = mesh.vertices[v[k]];
    const Vec2& a = g.corners[0];
    const Vec2& b = g.corners[1];
    const Vec2& c = g.corners[2];
    const double det = (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
    g.area = 0.5 * det;
    // grad(l_k) is the inward edge normal scaled by 1/(2 area).
    g.grad_bary[0] = {(b.y - c.y) / det, (c.x - b.x) / det};
    g.grad_bary[1] = {(c.y - a.y) / det, (a.x - c.x) / det};
    g.grad_bary[2] = {(a.y - b.y) / det, (b.x - a.x) / det};
    return g;
}

std::array<double, 6> p2_values(const std::array<double, 3>& l) {
    return {l[0] * (2.0 * l[0] - 1.0), l[1] * (2.0 * l[1] - 1.0), l[2] * (2.0 * l[2] - 1.0),
            4.0 * l[0] * l[1],         4.0 * l[1] * l[2],         4.0 * l[2] * l[0]};
}

std::array<Vec2, 6> p2_gradients(const std::array<double, 3>& l, const TriangleGeometry& geo) {
    const auto& g = geo.grad_bary;
    return {g[0] * (4.0 * l[0] - 1.0),
            g[1] * (4.0 * l[1] - 1.0),
            g[2] * (4.0 * l[2] - 1.0),
            (g[0] * l[1] + g[1] * l[0]) * 4.0,
            (g[1] * l[2] + g[2] * l[1]) * 4.0,
            (g[2] * l[0] + g[0] * l[2]) * 4.0};
}

std::array<double, 3> barycentric(const TriangleGeometry& geo, const Vec2& x) {
    const Vec2 d = x - geo.corners[0];
    const double l1 = dot(geo.grad_bary[1], d);
    const double l2 = dot(geo.grad_bary[2], d);
    return {1.0 - l1 - l2, l1, l2};
}

}  // namespace fricflow
