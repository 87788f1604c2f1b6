#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fricflow/discretization.hpp"
#include "fricflow/fields.hpp"
#include "fricflow/types.hpp"

namespace fricflow {

class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NewtonError : public SolverError {
public:
    NewtonError(const std::string& what, std::vector<double> history)
        : SolverError(what), residual_history(std::move(history)) {}
    std::vector<double> residual_history;
};

// [A  B^T 0] [u]   [rhs_u]
// [B  0   m] [p] = [rhs_p]
// [0  m^T 0] [mu]  [rhs_mean]
// The last row pins the mean pressure; masked velocity dofs are replaced by
// identity rows and held at zero.
struct SaddleSystem {
    SparseOperator velocity_block;
    SparseOperator divergence;
    Vector mean;
    Vector rhs_velocity;
    Vector rhs_pressure;
    std::vector<char> mask;
    double rhs_mean = 0.0;
};

struct SaddleSolution {
    Vector u;
    Vector p;
    double mean_multiplier = 0.0;
    double kkt_residual = 0.0;
};

SaddleSolution solve_saddle(const SaddleSystem& system);

struct NewtonSettings {
    double tol_abs = 1e-14;
    double tol_rel = 1e-12;
    int max_iter = 50;
    bool line_search = true;
};

struct NewtonReport {
    int iterations = 0;
    std::vector<double> residual_history;  // full KKT residual norm per iterate
};

// Velocity part of a nonlinear saddle problem: value r(u) (without B^T p)
// and its Jacobian.
struct VelocityResidual {
    Vector value;
    SparseOperator jacobian;
};
using VelocityResidualFn = std::function<VelocityResidual(const Vector& u)>;

// Newton on r(u) + B^T p = 0, B u + m mu = 0, m^T p = 0, starting from
// `guess`. Throws NewtonError carrying the residual history when max_iter is
// exhausted.
State newton_solve(const Discretization& disc, const VelocityResidualFn& residual, const State& guess,
                   const NewtonSettings& settings, NewtonReport* report = nullptr);

struct StationaryResult {
    State state;
    NewtonReport report;
};

// a0(u, v) + int g(0) alpha_eps(u).v + b(v, p) = (h, v), b(u, q) = 0.
StationaryResult solve_stationary_regularized(const Discretization& disc, const FrictionSpec& g, double eps,
                                              const Vector& h_load, const NewtonSettings& settings = {},
                                              const std::optional<State>& guess = std::nullopt);

struct ContinuationResult {
    State final_state;
    std::vector<State> stages;
    std::vector<double> h1_increments;  // |u_k - u_{k-1}|_H1, k >= 1
    std::vector<NewtonReport> reports;
};

// Limit eps -> 0 of the regularized stationary problem by continuation; each
// stage starts from the previous one.
ContinuationResult solve_stationary_vi(const Discretization& disc, const FrictionSpec& g, const Vector& h_load,
                                       const std::vector<double>& eps_schedule, const NewtonSettings& settings = {});

// Plain Stokes solve a0(u, v) + b(v, p) = (h, v) under the discretization's mask.
State solve_stokes(const Discretization& disc, const Vector& h_load);

}  // namespace fricflow
