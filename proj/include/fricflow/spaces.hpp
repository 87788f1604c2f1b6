#pragma once

#include <array>
#include <functional>
#include <vector>

#include "fricflow/mesh.hpp"
#include "fricflow/types.hpp"

namespace fricflow {

// Continuous piecewise-quadratic vector fields. Nodes are the mesh vertices
// followed by the edge midpoints; dofs interleave components,
// dof = 2 * node + component. Nodes on the interface are shared by the IN and
// OUT triangles, so the discrete velocity never jumps across it.
struct VelocityDofMap {
    int num_vertices = 0;
    std::vector<Vec2> node_coords;
    std::vector<std::array<int, 2>> edges;        // endpoints of edge node num_vertices + k
    std::vector<std::array<int, 6>> cell_nodes;   // per triangle, local P2 node order
    std::vector<char> dirichlet_mask;             // per dof
    std::vector<char> node_on_interface;          // per node
    std::vector<int> interface_dofs;              // sorted

    int num_nodes() const { return static_cast<int>(node_coords.size()); }
    int num_dofs() const { return 2 * num_nodes(); }
    static constexpr int dof(int node, int comp) { return 2 * node + comp; }
    std::array<int, 12> cell_dofs(int t) const;
};

VelocityDofMap build_velocity_space(const Mesh& mesh);

enum class PressureCoupling {
    SplitAtInterface,  // IN and OUT copies at interface vertices
    Continuous,        // single-valued; single-domain reference solves only
};

// Piecewise-linear pressure, continuous inside each subdomain.
struct PressureDofMap {
    PressureCoupling coupling = PressureCoupling::SplitAtInterface;
    std::vector<std::array<int, 3>> cell_dofs;
    std::vector<Vec2> dof_coords;
    std::vector<Subdomain> dof_side;  // side of the copy; interior dofs carry their triangle's label
    Vector mean_vector;               // q -> integral of q over the domain

    int num_dofs() const { return static_cast<int>(dof_coords.size()); }
};

PressureDofMap build_pressure_space(const Mesh& mesh,
                                    PressureCoupling coupling = PressureCoupling::SplitAtInterface);

// Per-edge data for integrating velocity traces along the interface.
struct TraceEdge {
    std::array<int, 3> nodes{};  // start vertex, end vertex, midpoint
    Vec2 tangent;
    Vec2 normal;
    double length = 0.0;
    std::vector<Vec2> points;
    std::vector<double> arclength;  // interface arclength of each point
    std::vector<double> weights;    // physical weights (sum to the edge length)
    std::vector<std::array<double, 3>> shape;  // trace basis at each point
};

struct TraceMap {
    std::vector<TraceEdge> edges;
    std::vector<int> interface_nodes;  // sorted
    int quad_points = 0;

    Vec2 evaluate(const Vector& u, int edge, int q) const;
    std::size_t num_points() const { return edges.size() * static_cast<std::size_t>(quad_points); }
};

// quad_points is the number of Gauss points per interface edge; three
// integrate products of quadratic traces exactly.
TraceMap build_trace_map(const Mesh& mesh, const VelocityDofMap& vmap, int quad_points = 3);

using VectorFieldFn = std::function<Vec2(const Vec2&)>;

// Nodal interpolant of a vector field.
Vector interpolate_velocity(const VelocityDofMap& vmap, const VectorFieldFn& field);

// Zeroes the Dirichlet dofs.
void apply_dirichlet_mask(const VelocityDofMap& vmap, Vector& u);

// Finite-element evaluation of u at barycentric position `bary` of triangle t.
Vec2 evaluate_velocity(const VelocityDofMap& vmap, const Vector& u, int t, const std::array<double, 3>& bary);

}  // namespace fricflow
