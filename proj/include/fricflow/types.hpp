#pragma once

#include <array>
#include <cmath>
#include <cstddef>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace fricflow {

using Vector = Eigen::VectorXd;
using DenseMatrix = Eigen::MatrixXd;

// Compressed sparse row storage. Eigen keeps column indices sorted and
// deduplicated once makeCompressed() has run; every assembler returns a
// compressed operator.
using SparseOperator = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using Triplet = Eigen::Triplet<double>;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    constexpr Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
    constexpr bool operator==(const Vec2&) const = default;
};

constexpr double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double norm(const Vec2& a) { return std::hypot(a.x, a.y); }

// Row-major 2x2 matrix.
using Mat2 = std::array<double, 4>;

enum class Subdomain : int { In = 0, Out = 1 };

}  // namespace fricflow
