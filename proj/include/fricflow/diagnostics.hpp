#pragma once

#include <vector>

#include "fricflow/discretization.hpp"
#include "fricflow/types.hpp"

namespace fricflow {

struct InterfaceStressPoint {
    Vec2 x;
    double arclength = 0.0;
    double g = 0.0;
    Vec2 u;
    Vec2 lambda;              // g alpha_eps(u), the regularized law
    Vec2 lambda_variational;  // momentum residual, lumped to interface nodes
    double defect = 0.0;      // g|u| - lambda.u, in [0, g eps]
    double slack = 0.0;       // g - |lambda|, nonnegative
};

struct InterfaceStress {
    std::vector<InterfaceStressPoint> points;  // edge-major, matches the trace map
    Vector functional;                         // variational traction functional on all velocity dofs
    Vector friction_functional;                // (g alpha_eps(u), phi_i)
    double discrepancy_l2 = 0.0;               // |lambda_variational - lambda|_L2(interface)
    double max_defect = 0.0;
    double min_defect = 0.0;
    double min_slack = 0.0;
};

// `explicit_terms` collects every momentum term except a0 and b:
// f - M (u - u_prev) / dt - N(w) u for a time step, the load h for a
// stationary problem.
InterfaceStress recover_interface_stress(const Discretization& disc, const State& state, const Vector& explicit_terms,
                                         const std::vector<double>& g, double eps);

struct PressureConstants {
    double delta = 0.0;
    double k_in = 0.0;
    double k_out = 0.0;
    double constancy_residual = 0.0;  // weighted std of pointwise samples against the direct law
    double delta_direct = 0.0;        // same average taken against the direct law
    bool non_unique = false;          // u.n vanishes on the interface; delta set to 0
};

// Splits p into per-subdomain zero-mean parts plus constants, recovers the
// traction functional against the zero-mean pressure and averages
// (lambda_0 - lambda).n over the interface.
PressureConstants recover_pressure_constants(const Discretization& disc, const State& state,
                                             const Vector& explicit_terms, const InterfaceStress& stress);

// Mean of p over one subdomain.
double subdomain_mean(const Discretization& disc, const Vector& p, Subdomain side);

struct Norms {
    double l2_velocity = 0.0;
    double h1_velocity = 0.0;
    double interface_l2 = 0.0;
    double l2_pressure = 0.0;
};

Norms norms(const Discretization& disc, const State& state);

// Energy bookkeeping of one backward-Euler step, tested with v = u_new:
// E_new - E_old + |u_new - u_old|^2/2 + dt a0 + dt (g alpha, u_new) - dt (f, u_new) = 0
// with E = |u|_M^2 / 2 (the skew convection term drops out exactly).
struct StepEnergy {
    double t = 0.0;
    double energy_old = 0.0;
    double energy_new = 0.0;
    double increment = 0.0;
    double viscous = 0.0;
    double friction = 0.0;
    double forcing = 0.0;
    double u_prime = 0.0;  // |(u_new - u_old) / dt|_M
    int newton_iterations = 0;

    double identity_residual() const;  // relative to max(E_old, E_new)
};

struct EnergyReportRow {
    double t = 0.0;
    double energy = 0.0;
    double identity_residual = 0.0;
    double cumulative_dissipation = 0.0;
    double u_prime = 0.0;
    bool monotonicity_violation = false;
};

struct EnergyReport {
    std::vector<EnergyReportRow> rows;
    int violations = 0;
    double max_identity_residual = 0.0;
    double sup_energy = 0.0;
};

// Monotonicity is only flagged when `unforced` (f = 0).
EnergyReport energy_report(const std::vector<StepEnergy>& steps, double initial_energy, bool unforced);

// One row of timeseries.csv.
struct DiagnosticsRow {
    double t = 0.0;
    double energy = 0.0;
    double j = 0.0;
    double j_eps = 0.0;
    double max_defect = 0.0;
    double delta = 0.0;
    int newton_iters = 0;
    double h1_norm = 0.0;

    // not written to the csv
    double min_defect = 0.0;
    double min_slack = 0.0;
    double max_g = 0.0;
    double k_in = 0.0;
    double k_out = 0.0;
    bool non_unique = false;
};

DiagnosticsRow diagnose_state(const Discretization& disc, const State& state, const Vector& explicit_terms,
                              const std::vector<double>& g, double eps, int newton_iters);

}  // namespace fricflow
