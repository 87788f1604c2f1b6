#pragma once

#include "fricflow/types.hpp"

namespace fricflow {

// Smoothed Euclidean norm rho(z) = sqrt(|z|^2 + eps^2) - eps together with
// its gradient and Hessian. All three throw std::invalid_argument for
// eps <= 0.
//
//   0 <= |z| - rho(z) <= eps
//   |alpha(z)| < 1,  alpha(z).z >= 0
//   beta(z) symmetric positive semidefinite
double rho_eps(const Vec2& z, double eps);
Vec2 alpha_eps(const Vec2& z, double eps);
Mat2 beta_eps(const Vec2& z, double eps);

// g|z| - g alpha(z).z in a form that cannot round below zero.
double complementarity_defect(const Vec2& z, double g, double eps);

}  // namespace fricflow
