#pragma once

#include <array>
#include <vector>

namespace fricflow {

// Point in barycentric coordinates with a weight normalised so that the
// weights of a rule sum to one (multiply by the triangle area).
struct TriangleQuadPoint {
    std::array<double, 3> bary;
    double weight;
};

// 6-point rule, exact for polynomials of degree 4. Used by all assemblers.
const std::vector<TriangleQuadPoint>& triangle_rule_degree4();

// Collapsed Gauss-Legendre rule with `points` nodes per direction, exact to
// degree 2*points - 2. Used for error norms and test oracles.
std::vector<TriangleQuadPoint> triangle_rule_collapsed(int points);

struct LineQuadPoint {
    double s;  // position on [0, 1]
    double weight;
};

// Gauss-Legendre on [0, 1] with weights summing to one.
std::vector<LineQuadPoint> gauss_legendre(int points);

}  // namespace fricflow
