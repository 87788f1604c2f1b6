#pragma once

#include <functional>
#include <vector>

#include "fricflow/fields.hpp"
#include "fricflow/mesh.hpp"
#include "fricflow/spaces.hpp"
#include "fricflow/types.hpp"

namespace fricflow {

// 2 nu (e(u), e(v)). Unmasked; see mask_dirichlet.
SparseOperator assemble_viscous(const Mesh& mesh, const VelocityDofMap& vmap, double nu);

// (grad u, grad v); with the mass matrix it defines the H1 inner product.
SparseOperator assemble_stiffness(const Mesh& mesh, const VelocityDofMap& vmap);

// Rows are pressure dofs: entry (i, j) = -(div phi_j, psi_i).
SparseOperator assemble_divergence(const Mesh& mesh, const VelocityDofMap& vmap, const PressureDofMap& pmap);

SparseOperator assemble_mass(const Mesh& mesh, const VelocityDofMap& vmap);
SparseOperator assemble_pressure_mass(const Mesh& mesh, const PressureDofMap& pmap);

// Skew-symmetrised convection N(w): z^T N(w) v = 1/2 [a1(w, v, z) - a1(w, z, v)]
// with a1(w, v, z) = ((w . grad) v, z). N(w) is exactly antisymmetric.
SparseOperator assemble_convection_skew(const Mesh& mesh, const VelocityDofMap& vmap, const Vector& w);

// Derivative of N(w) u with respect to w, evaluated at fixed u.
SparseOperator assemble_convection_linearization(const Mesh& mesh, const VelocityDofMap& vmap, const Vector& u);

struct FrictionAssembly {
    Vector residual;          // (g alpha_eps(u), phi_i) on the interface
    SparseOperator jacobian;  // (g beta_eps(u) phi_j, phi_i) on the interface
};

FrictionAssembly assemble_friction(const TraceMap& trace, const Vector& u, const std::vector<double>& g, double eps);
FrictionAssembly assemble_friction(const TraceMap& trace, const Vector& u, const FrictionSpec& spec, double t,
                                   double eps);

Vector assemble_load(const Mesh& mesh, const VelocityDofMap& vmap, const std::function<Vec2(const Vec2&)>& f);
Vector assemble_load(const Mesh& mesh, const VelocityDofMap& vmap, const VectorFieldSpec& f, const FieldContext& ctx,
                     double t);

// j(u) = int g |u| and j_eps(u) = int g rho_eps(u) by interface quadrature.
double eval_j(const TraceMap& trace, const Vector& u, const std::vector<double>& g);
double eval_j_eps(const TraceMap& trace, const Vector& u, const std::vector<double>& g, double eps);
double eval_j(const TraceMap& trace, const Vector& u, const FrictionSpec& spec, double t);
double eval_j_eps(const TraceMap& trace, const Vector& u, const FrictionSpec& spec, double t, double eps);

// Masked rows and columns replaced by the identity.
SparseOperator mask_dirichlet(const SparseOperator& op, const std::vector<char>& mask);

// Interface normal functional: (n, phi_i) on the interface.
Vector assemble_interface_normal(const TraceMap& trace, int num_dofs);

// Row-sum lumped interface mass per interface node, indexed by node.
Vector lumped_interface_mass(const TraceMap& trace, int num_nodes);

}  // namespace fricflow
