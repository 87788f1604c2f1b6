#include "fricflow/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fricflow/assembly.hpp"
#include "fricflow/regularization.hpp"

namespace fricflow {

namespace {

Vec2 node_value(const Vector& v, int node) {
    return {v[VelocityDofMap::dof(node, 0)], v[VelocityDofMap::dof(node, 1)]};
}

// Weighted mean and standard deviation of per-node samples
// (dv . N_i) / |N_i|^2 over the interface nodes.
std::pair<double, double> normal_average(const Discretization& disc, const Vector& dv, const Vector& nvec,
                                         const Vector& weights) {
    double sw = 0.0, s1 = 0.0, s2 = 0.0;
    for (int node : disc.trace.interface_nodes) {
        const Vec2 nn = node_value(nvec, node);
        const double nn2 = dot(nn, nn);
        if (nn2 == 0.0) continue;
        const double d = dot(node_value(dv, node), nn) / nn2;
        const double w = weights[node];
        sw += w;
        s1 += w * d;
        s2 += w * d * d;
    }
    if (sw == 0.0) return {0.0, 0.0};
    const double mean = s1 / sw;
    return {mean, std::sqrt(std::max(0.0, s2 / sw - mean * mean))};
}

}  // namespace

InterfaceStress recover_interface_stress(const Discretization& disc, const State& state, const Vector& explicit_terms,
                                         const std::vector<double>& g, double eps) {
    InterfaceStress out;
    const auto& trace = disc.trace;
    out.functional = explicit_terms - disc.viscous * state.u - disc.divergence.transpose() * state.p;
    out.friction_functional = assemble_friction(trace, state.u, g, eps).residual;
    const Vector w = lumped_interface_mass(trace, disc.vmap.num_nodes());

    out.min_defect = std::numeric_limits<double>::infinity();
    out.min_slack = std::numeric_limits<double>::infinity();
    double disc2 = 0.0;
    std::size_t idx = 0;
    for (int e = 0; e < static_cast<int>(trace.edges.size()); ++e) {
        const auto& edge = trace.edges[e];
        for (int q = 0; q < trace.quad_points; ++q, ++idx) {
            InterfaceStressPoint pt;
            pt.x = edge.points[q];
            pt.arclength = edge.arclength[q];
            pt.g = g[idx];
            pt.u = trace.evaluate(state.u, e, q);
            pt.lambda = alpha_eps(pt.u, eps) * pt.g;
            for (int k = 0; k < 3; ++k) {
                const int node = edge.nodes[k];
                pt.lambda_variational = pt.lambda_variational + node_value(out.functional, node) * (edge.shape[q][k] / w[node]);
            }
            const double s = std::sqrt(dot(pt.u, pt.u) + eps * eps);
            pt.defect = complementarity_defect(pt.u, pt.g, eps);
            pt.slack = pt.g - pt.g * (std::sqrt(dot(pt.u, pt.u)) / s);
            const Vec2 diff = pt.lambda_variational - pt.lambda;
            disc2 += edge.weights[q] * dot(diff, diff);
            out.max_defect = std::max(out.max_defect, pt.defect);
            out.min_defect = std::min(out.min_defect, pt.defect);
            out.min_slack = std::min(out.min_slack, pt.slack);
            out.points.push_back(pt);
        }
    }
    if (out.points.empty()) out.min_defect = out.min_slack = 0.0;
    out.discrepancy_l2 = std::sqrt(disc2);
    return out;
}

double subdomain_mean(const Discretization& disc, const Vector& p, Subdomain side) {
    double s = 0.0, area = 0.0;
    for (int i = 0; i < disc.num_pressure(); ++i)
        if (disc.pmap.dof_side[i] == side) {
            s += disc.pmap.mean_vector[i] * p[i];
            area += disc.pmap.mean_vector[i];
        }
    return area > 0.0 ? s / area : 0.0;
}

PressureConstants recover_pressure_constants(const Discretization& disc, const State& state,
                                             const Vector& explicit_terms, const InterfaceStress& stress) {
    PressureConstants pc;
    const auto& trace = disc.trace;

    double un2 = 0.0;
    for (int e = 0; e < static_cast<int>(trace.edges.size()); ++e)
        for (int q = 0; q < trace.quad_points; ++q) {
            const double un = dot(trace.evaluate(state.u, e, q), trace.edges[e].normal);
            un2 += trace.edges[e].weights[q] * un * un;
        }
    if (std::sqrt(un2) <= 1e-10 * disc.h1_norm(state.u)) {
        pc.non_unique = true;
        return pc;
    }

    // Per-subdomain zero-mean pressure.
    const double m_in = subdomain_mean(disc, state.p, Subdomain::In);
    const double m_out = subdomain_mean(disc, state.p, Subdomain::Out);
    Vector p0 = state.p;
    for (int i = 0; i < disc.num_pressure(); ++i) p0[i] -= (disc.pmap.dof_side[i] == Subdomain::In) ? m_in : m_out;
    const Vector functional0 = explicit_terms - disc.viscous * state.u - disc.divergence.transpose() * p0;

    const Vector nvec = assemble_interface_normal(trace, disc.num_velocity());
    const Vector w = lumped_interface_mass(trace, disc.vmap.num_nodes());
    pc.delta = normal_average(disc, functional0 - stress.functional, nvec, w).first;
    const auto [dd, spread] = normal_average(disc, functional0 - stress.friction_functional, nvec, w);
    pc.delta_direct = dd;
    pc.constancy_residual = spread;

    const double a_in = disc.mesh.subdomain_area(Subdomain::In);
    const double a_out = disc.mesh.subdomain_area(Subdomain::Out);
    pc.k_in = -pc.delta * a_out / (a_in + a_out);
    pc.k_out = pc.delta * a_in / (a_in + a_out);
    return pc;
}

Norms norms(const Discretization& disc, const State& state) {
    return {disc.l2_norm(state.u), disc.h1_norm(state.u), disc.interface_l2_norm(state.u),
            disc.pressure_l2_norm(state.p)};
}

double StepEnergy::identity_residual() const {
    const double scale = std::max(energy_old, energy_new);
    if (scale == 0.0) return 0.0;
    return std::abs(energy_new - energy_old + increment + viscous + friction - forcing) / scale;
}

EnergyReport energy_report(const std::vector<StepEnergy>& steps, double initial_energy, bool unforced) {
    EnergyReport rep;
    rep.sup_energy = initial_energy;
    double cumulative = 0.0;
    for (const auto& s : steps) {
        EnergyReportRow row;
        row.t = s.t;
        row.energy = s.energy_new;
        row.identity_residual = s.identity_residual();
        cumulative += s.increment + s.viscous + s.friction;
        row.cumulative_dissipation = cumulative;
        row.u_prime = s.u_prime;
        row.monotonicity_violation = unforced && s.energy_new > s.energy_old;
        if (row.monotonicity_violation) ++rep.violations;
        rep.max_identity_residual = std::max(rep.max_identity_residual, row.identity_residual);
        rep.sup_energy = std::max(rep.sup_energy, s.energy_new);
        rep.rows.push_back(row);
    }
    return rep;
}

DiagnosticsRow diagnose_state(const Discretization& disc, const State& state, const Vector& explicit_terms,
                              const std::vector<double>& g, double eps, int newton_iters) {
    DiagnosticsRow row;
    row.t = state.t;
    row.energy = 0.5 * state.u.dot(disc.mass * state.u);
    row.j = eval_j(disc.trace, state.u, g);
    row.j_eps = eval_j_eps(disc.trace, state.u, g, eps);
    const InterfaceStress stress = recover_interface_stress(disc, state, explicit_terms, g, eps);
    const PressureConstants pc = recover_pressure_constants(disc, state, explicit_terms, stress);
    row.max_defect = stress.max_defect;
    row.min_defect = stress.min_defect;
    row.min_slack = stress.min_slack;
    row.delta = pc.delta;
    row.k_in = pc.k_in;
    row.k_out = pc.k_out;
    row.non_unique = pc.non_unique;
    row.newton_iters = newton_iters;
    row.h1_norm = disc.h1_norm(state.u);
    row.max_g = g.empty() ? 0.0 : *std::max_element(g.begin(), g.end());
    return row;
}

}  // namespace fricflow
