#include "fricflow/timestepper.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "fricflow/assembly.hpp"

namespace fricflow {

void RunConfig::validate() const {
    std::vector<std::string> errors;
    if (!(nu > 0.0)) errors.push_back("nu must be positive");
    if (!(dt > 0.0)) errors.push_back("dt must be positive");
    if (!(T >= dt)) errors.push_back("T must be at least dt");
    if (!(eps > 0.0)) errors.push_back("eps must be positive");
    if (mesh.n < 1) errors.push_back("mesh n must be a positive integer");
    if (!(newton.tol_abs > 0.0) || !(newton.tol_rel > 0.0)) errors.push_back("newton tolerances must be positive");
    if (newton.max_iter < 1) errors.push_back("newton max_iter must be at least 1");
    if (friction.kind == FrictionSpec::Kind::Constant && !(friction.value >= 0.0))
        errors.push_back("friction g must be nonnegative");
    if (!is_known_field_shape(force.shape)) errors.push_back("unknown force shape '" + force.shape + "'");
    if (!is_known_field_shape(initial.field.shape))
        errors.push_back("unknown initial field shape '" + initial.field.shape + "'");
    if (output.snapshot_stride < 0) errors.push_back("snapshot stride must be nonnegative");
    if (!errors.empty()) {
        std::ostringstream msg;
        msg << "invalid run configuration:";
        for (const auto& e : errors) msg << "\n  " << e;
        throw std::invalid_argument(msg.str());
    }
}

int RunConfig::num_steps() const { return std::max(1, static_cast<int>(std::llround(T / dt))); }

State project_initial(const Discretization& disc, const VectorFieldFn& field) {
    const Vector rhs = assemble_load(disc.mesh, disc.vmap, field);
    SaddleSystem sys{disc.mass, disc.divergence, disc.pmap.mean_vector, rhs, Vector::Zero(disc.num_pressure()),
                     disc.velocity_mask};
    const SaddleSolution s = solve_saddle(sys);
    State st = State::zero(disc);
    st.u = s.u;
    return st;
}

TimeStepper::TimeStepper(RunConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.validate();
    disc_ = std::make_shared<const Discretization>(Discretization::build(cfg_.mesh, cfg_.nu));
}

TimeStepper::TimeStepper(std::shared_ptr<const Discretization> disc, RunConfig cfg)
    : disc_(std::move(disc)), cfg_(std::move(cfg)) {
    cfg_.validate();
}

std::vector<double> TimeStepper::friction_samples(double t) const {
    return sample_friction(cfg_.friction, disc_->trace, t);
}

Vector TimeStepper::load(double t) const {
    return assemble_load(disc_->mesh, disc_->vmap, cfg_.force, disc_->ctx, t);
}

State TimeStepper::initial_state() const {
    const Discretization& d = *disc_;
    if (cfg_.initial.mode == InitialMode::Projection) {
        const VectorFieldSpec spec = cfg_.initial.field;
        if (spec.shape == "zero") return State::zero(d);
        return project_initial(d, [&](const Vec2& x) { return evaluate_field(spec, d.ctx, 0.0, x); });
    }
    const Vector h = assemble_load(d.mesh, d.vmap, cfg_.initial.field, d.ctx, 0.0);
    return solve_stationary_regularized(d, cfg_.friction, cfg_.eps, h, cfg_.newton).state;
}

State TimeStepper::step(const State& state, StepEnergy* energy) const {
    const Discretization& d = *disc_;
    const double dt = cfg_.dt;
    if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
    const double t_new = state.t + dt;
    const std::vector<double> g = friction_samples(t_new);
    const Vector rhs = load(t_new) + d.mass * state.u / dt;

    const bool navier = cfg_.problem == ProblemKind::NavierStokes;
    const bool fully = navier && cfg_.convection == ConvectionTreatment::FullyImplicit;
    SparseOperator linear = SparseOperator(d.mass / dt) + d.viscous;
    if (navier && !fully) linear += assemble_convection_skew(d.mesh, d.vmap, state.u);

    auto residual = [&](const Vector& v) {
        FrictionAssembly fr = assemble_friction(d.trace, v, g, cfg_.eps);
        VelocityResidual vr;
        vr.value = linear * v + fr.residual - rhs;
        vr.jacobian = linear + fr.jacobian;
        if (fully) {
            const SparseOperator nv = assemble_convection_skew(d.mesh, d.vmap, v);
            vr.value += nv * v;
            vr.jacobian += nv;
            vr.jacobian += assemble_convection_linearization(d.mesh, d.vmap, v);
        }
        return vr;
    };

    NewtonReport rep;
    State next = newton_solve(d, residual, state, cfg_.newton, &rep);
    next.t = t_new;

    if (energy) {
        const Vector du = next.u - state.u;
        const Vector fr = assemble_friction(d.trace, next.u, g, cfg_.eps).residual;
        energy->t = t_new;
        energy->energy_old = 0.5 * state.u.dot(d.mass * state.u);
        energy->energy_new = 0.5 * next.u.dot(d.mass * next.u);
        energy->increment = 0.5 * du.dot(d.mass * du);
        energy->viscous = dt * next.u.dot(d.viscous * next.u);
        energy->friction = dt * next.u.dot(fr);
        energy->forcing = dt * next.u.dot(load(t_new));
        energy->u_prime = std::sqrt(std::max(0.0, du.dot(d.mass * du))) / dt;
        energy->newton_iterations = rep.iterations;
    }
    return next;
}

Vector TimeStepper::explicit_terms(const State& old_state, const State& new_state) const {
    const Discretization& d = *disc_;
    Vector e = load(new_state.t) - d.mass * (new_state.u - old_state.u) / cfg_.dt;
    if (cfg_.problem == ProblemKind::NavierStokes) {
        const Vector& w = cfg_.convection == ConvectionTreatment::FullyImplicit ? new_state.u : old_state.u;
        e -= assemble_convection_skew(d.mesh, d.vmap, w) * new_state.u;
    }
    return e;
}

Trajectory run(const TimeStepper& stepper, const TrajectoryObserver& observer) {
    const RunConfig& cfg = stepper.config();
    const Discretization& d = stepper.discretization();
    Trajectory traj;

    State s = stepper.initial_state();
    const Vector e0 = cfg.initial.mode == InitialMode::Stationary
                          ? assemble_load(d.mesh, d.vmap, cfg.initial.field, d.ctx, 0.0)
                          : stepper.load(0.0);
    traj.rows.push_back(diagnose_state(d, s, e0, stepper.friction_samples(0.0), cfg.eps, 0));
    traj.states.push_back(s);
    if (observer) observer(s, traj.rows.back());

    const int n = cfg.num_steps();
    for (int k = 1; k <= n; ++k) {
        StepEnergy en;
        State next = stepper.step(s, &en);
        const Vector ex = stepper.explicit_terms(s, next);
        traj.rows.push_back(
            diagnose_state(d, next, ex, stepper.friction_samples(next.t), cfg.eps, en.newton_iterations));
        traj.energies.push_back(en);
        traj.states.push_back(next);
        if (observer) observer(next, traj.rows.back());
        s = std::move(next);
    }
    return traj;
}

Trajectory run(const RunConfig& cfg, const TrajectoryObserver& observer) {
    return run(TimeStepper(cfg), observer);
}

}  // namespace fricflow
