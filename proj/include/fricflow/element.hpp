#pragma once

#include <array>

#include "fricflow/mesh.hpp"
#include "fricflow/types.hpp"

namespace fricflow {

// Affine triangle data. Barycentric gradients are constant per triangle.
struct TriangleGeometry {
    std::array<Vec2, 3> corners;
    std::array<Vec2, 3> grad_bary;
    double area = 0.0;

    Vec2 point(const std::array<double, 3>& bary) const {
        return corners[0] * bary[0] + corners[1] * bary[1] + corners[2] * bary[2];
    }
};

TriangleGeometry triangle_geometry(const Mesh& mesh, int t);

// Quadratic Lagrange basis. Local nodes 0..2 are the corners, 3..5 the
// midpoints of edges (0,1), (1,2), (2,0).
std::array<double, 6> p2_values(const std::array<double, 3>& bary);
std::array<Vec2, 6> p2_gradients(const std::array<double, 3>& bary, const TriangleGeometry& geo);

// Barycentric coordinates of x with respect to the triangle.
std::array<double, 3> barycentric(const TriangleGeometry& geo, const Vec2& x);

}  // namespace fricflow
