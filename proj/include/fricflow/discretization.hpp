#pragma once

#include <vector>

#include "fricflow/assembly.hpp"
#include "fricflow/fields.hpp"
#include "fricflow/mesh.hpp"
#include "fricflow/spaces.hpp"
#include "fricflow/types.hpp"

namespace fricflow {

// Everything that depends only on the mesh and viscosity: spaces, the trace
// map and the time-independent operators. Immutable once built.
struct Discretization {
    Mesh mesh;
    VelocityDofMap vmap;
    PressureDofMap pmap;
    TraceMap trace;
    FieldContext ctx;
    double nu = 1.0;

    SparseOperator mass;           // velocity L2
    SparseOperator stiffness;      // velocity grad-grad
    SparseOperator viscous;        // a0
    SparseOperator divergence;     // b, pressure rows
    SparseOperator pressure_mass;
    std::vector<char> velocity_mask;  // Dirichlet dofs, optionally plus interface dofs

    static Discretization build(const MeshConfig& cfg, double nu,
                                PressureCoupling coupling = PressureCoupling::SplitAtInterface,
                                int trace_points = 3);

    // Same discretization with the interface velocity clamped to zero.
    Discretization with_clamped_interface() const;

    int num_velocity() const { return vmap.num_dofs(); }
    int num_pressure() const { return pmap.num_dofs(); }

    double l2_norm(const Vector& u) const;
    double h1_norm(const Vector& u) const;
    double pressure_l2_norm(const Vector& p) const;
    double interface_l2_norm(const Vector& u) const;
};

struct State {
    double t = 0.0;
    Vector u;
    Vector p;
    double mean_multiplier = 0.0;

    static State zero(const Discretization& disc, double t = 0.0);
};

}  // namespace fricflow
