#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "fricflow/diagnostics.hpp"
#include "fricflow/discretization.hpp"
#include "fricflow/fields.hpp"
#include "fricflow/solver.hpp"

namespace fricflow {

enum class ProblemKind { Stokes, NavierStokes };
enum class ConvectionTreatment { SemiImplicit, FullyImplicit };
enum class InitialMode { Projection, Stationary };

struct InitialSpec {
    InitialMode mode = InitialMode::Projection;
    // Projection: the field to project. Stationary: the load h.
    VectorFieldSpec field;
};

struct OutputSettings {
    std::string directory = "out";
    int snapshot_stride = 0;  // 0 writes no snapshots
};

struct RunConfig {
    MeshConfig mesh;
    double nu = 1.0;
    double T = 1.0;
    double dt = 1e-2;
    double eps = 1e-3;
    ProblemKind problem = ProblemKind::Stokes;
    ConvectionTreatment convection = ConvectionTreatment::SemiImplicit;
    FrictionSpec friction;
    VectorFieldSpec force;
    InitialSpec initial;
    NewtonSettings newton;
    OutputSettings output;

    // Throws std::invalid_argument listing every violated constraint.
    void validate() const;
    int num_steps() const;
};

// Nodal L2 projection onto discretely divergence-free velocities vanishing
// on the outer boundary (one mass-matrix saddle solve).
State project_initial(const Discretization& disc, const VectorFieldFn& field);

class TimeStepper {
public:
    explicit TimeStepper(RunConfig cfg);
    TimeStepper(std::shared_ptr<const Discretization> disc, RunConfig cfg);

    const Discretization& discretization() const { return *disc_; }
    const RunConfig& config() const { return cfg_; }

    State initial_state() const;

    // Backward-Euler step from `state` to state.t + dt.
    State step(const State& state, StepEnergy* energy = nullptr) const;

    // f(t_new) - M (u_new - u_old) / dt - N(w) u_new, the momentum terms the
    // stress recovery treats as given.
    Vector explicit_terms(const State& old_state, const State& new_state) const;

    std::vector<double> friction_samples(double t) const;
    Vector load(double t) const;

private:
    std::shared_ptr<const Discretization> disc_;
    RunConfig cfg_;
};

struct Trajectory {
    std::vector<State> states;
    std::vector<StepEnergy> energies;
    std::vector<DiagnosticsRow> rows;  // one per state, rows[0] for the initial state
};

using TrajectoryObserver = std::function<void(const State&, const DiagnosticsRow&)>;

// Steps from t = 0 to T. The observer sees every state as soon as it is
// available; step errors propagate after the observer has seen all earlier
// states.
Trajectory run(const TimeStepper& stepper, const TrajectoryObserver& observer = {});
Trajectory run(const RunConfig& cfg, const TrajectoryObserver& observer = {});

}  // namespace fricflow
