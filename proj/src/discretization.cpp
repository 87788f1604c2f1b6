#include "fricflow/discretization.hpp"

#include <cmath>

namespace fricflow {

Discretization Discretization::build(const MeshConfig& cfg, double nu, PressureCoupling coupling,
                                     int trace_points) {
    Discretization d;
    d.mesh = build_two_domain_mesh(cfg);
    d.vmap = build_velocity_space(d.mesh);
    d.pmap = build_pressure_space(d.mesh, coupling);
    d.trace = build_trace_map(d.mesh, d.vmap, trace_points);
    d.ctx = {cfg.outer_box, cfg.inner_box, nu};
    d.nu = nu;
    d.mass = assemble_mass(d.mesh, d.vmap);
    d.stiffness = assemble_stiffness(d.mesh, d.vmap);
    d.viscous = assemble_viscous(d.mesh, d.vmap, nu);
    d.divergence = assemble_divergence(d.mesh, d.vmap, d.pmap);
    d.pressure_mass = assemble_pressure_mass(d.mesh, d.pmap);
    d.velocity_mask = d.vmap.dirichlet_mask;
    return d;
}

Discretization Discretization::with_clamped_interface() const {
    Discretization d = *this;
    for (int dof : d.vmap.interface_dofs) d.velocity_mask[dof] = 1;
    return d;
}

double Discretization::l2_norm(const Vector& u) const { return std::sqrt(std::max(0.0, u.dot(mass * u))); }

double Discretization::h1_norm(const Vector& u) const {
    return std::sqrt(std::max(0.0, u.dot(mass * u) + u.dot(stiffness * u)));
}

double Discretization::pressure_l2_norm(const Vector& p) const {
    return std::sqrt(std::max(0.0, p.dot(pressure_mass * p)));
}

double Discretization::interface_l2_norm(const Vector& u) const {
    double s = 0.0;
    for (int e = 0; e < static_cast<int>(trace.edges.size()); ++e)
        for (int q = 0; q < trace.quad_points; ++q) {
            const Vec2 v = trace.evaluate(u, e, q);
            s += trace.edges[e].weights[q] * dot(v, v);
        }
    return std::sqrt(s);
}

State State::zero(const Discretization& disc, double t) {
    return {t, Vector::Zero(disc.num_velocity()), Vector::Zero(disc.num_pressure()), 0.0};
}

}  // namespace fricflow
