#include "fricflow/regularization.hpp"

#include <stdexcept>

namespace fricflow {

namespace {

void check_eps(double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("regularization: eps must be positive");
}

}  // namespace

double rho_eps(const Vec2& z, double eps) {
    check_eps(eps);
    const double r2 = dot(z, z);
    // sqrt(r2 + e2) - e without cancellation for small |z|.
    const double s = std::sqrt(r2 + eps * eps);
    return r2 / (s + eps);
}

Vec2 alpha_eps(const Vec2& z, double eps) {
    check_eps(eps);
    const double s = std::sqrt(dot(z, z) + eps * eps);
    return {z.x / s, z.y / s};
}

Mat2 beta_eps(const Vec2& z, double eps) {
    check_eps(eps);
    const double e2 = eps * eps;
    const double q = dot(z, z) + e2;
    const double s3 = q * std::sqrt(q);
    const double off = -z.x * z.y / s3;
    return {(z.y * z.y + e2) / s3, off, off, (z.x * z.x + e2) / s3};
}

double complementarity_defect(const Vec2& z, double g, double eps) {
    check_eps(eps);
    const double r = std::sqrt(dot(z, z));
    const double s = std::sqrt(dot(z, z) + eps * eps);
    return g * r * (1.0 - r / s);
}

}  // namespace fricflow
