#include "fricflow/solver.hpp"

#include <Eigen/SparseLU>
#include <cmath>
#include <sstream>

#include "fricflow/assembly.hpp"

namespace fricflow {

namespace {

using ColMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor>;

ColMatrix build_kkt(const SaddleSystem& s) {
    const int nv = static_cast<int>(s.velocity_block.rows());
    const int np = static_cast<int>(s.divergence.rows());
    std::vector<Triplet> trips;
    trips.reserve(static_cast<std::size_t>(s.velocity_block.nonZeros() + 2 * s.divergence.nonZeros() + 2 * np + nv));
    for (int r = 0; r < nv; ++r) {
        if (s.mask[r]) {
            trips.emplace_back(r, r, 1.0);
            continue;
        }
        for (SparseOperator::InnerIterator it(s.velocity_block, r); it; ++it)
            if (!s.mask[it.col()]) trips.emplace_back(r, it.col(), it.value());
    }
    for (int i = 0; i < np; ++i) {
        for (SparseOperator::InnerIterator it(s.divergence, i); it; ++it) {
            if (s.mask[it.col()]) continue;
            trips.emplace_back(nv + i, it.col(), it.value());
            trips.emplace_back(it.col(), nv + i, it.value());
        }
        trips.emplace_back(nv + i, nv + np, s.mean[i]);
        trips.emplace_back(nv + np, nv + i, s.mean[i]);
    }
    ColMatrix kkt(nv + np + 1, nv + np + 1);
    kkt.setFromTriplets(trips.begin(), trips.end());
    kkt.makeCompressed();
    return kkt;
}

std::string diagnose_failure(const SaddleSystem& s) {
    ColMatrix a = mask_dirichlet(s.velocity_block, s.mask);
    Eigen::SparseLU<ColMatrix> lu;
    lu.compute(a);
    if (lu.info() != Eigen::Success)
        return "velocity block is singular after masking (check viscosity and Dirichlet mask)";
    return "divergence block is rank deficient (check the pressure space and inf-sup stability)";
}

}  // namespace

SaddleSolution solve_saddle(const SaddleSystem& s) {
    const int nv = static_cast<int>(s.velocity_block.rows());
    const int np = static_cast<int>(s.divergence.rows());
    if (s.velocity_block.cols() != nv || s.divergence.cols() != nv || s.mean.size() != np ||
        s.rhs_velocity.size() != nv || s.rhs_pressure.size() != np || static_cast<int>(s.mask.size()) != nv)
        throw std::invalid_argument("solve_saddle: inconsistent block sizes");

    const ColMatrix kkt = build_kkt(s);
    Vector rhs(nv + np + 1);
    rhs.head(nv) = s.rhs_velocity;
    for (int i = 0; i < nv; ++i)
        if (s.mask[i]) rhs[i] = 0.0;
    rhs.segment(nv, np) = s.rhs_pressure;
    rhs[nv + np] = s.rhs_mean;

    Eigen::SparseLU<ColMatrix> lu;
    lu.analyzePattern(kkt);
    lu.factorize(kkt);
    if (lu.info() != Eigen::Success) throw SolverError("solve_saddle: factorization failed: " + diagnose_failure(s));

    Vector x = lu.solve(rhs);
    const double tol = 1e-10 * (1.0 + rhs.norm());
    double res = (kkt * x - rhs).norm();
    for (int it = 0; it < 3 && res > 1e-3 * tol; ++it) {
        x += lu.solve(rhs - kkt * x);
        res = (kkt * x - rhs).norm();
    }
    if (!std::isfinite(res) || res > tol) {
        std::ostringstream msg;
        msg << "solve_saddle: KKT residual " << res << " above tolerance " << tol << ": " << diagnose_failure(s);
        throw SolverError(msg.str());
    }
    return {x.head(nv), x.segment(nv, np), x[nv + np], res};
}

State newton_solve(const Discretization& disc, const VelocityResidualFn& residual, const State& guess,
                   const NewtonSettings& settings, NewtonReport* report) {
    if (!(settings.tol_abs > 0.0) || !(settings.tol_rel > 0.0) || settings.max_iter < 1)
        throw std::invalid_argument("newton: tolerances must be positive and max_iter >= 1");
    const auto& B = disc.divergence;
    const auto& mean = disc.pmap.mean_vector;
    const auto& mask = disc.velocity_mask;

    struct Eval {
        VelocityResidual vr;
        Vector ru, rp;
        double rmu = 0.0;
        double norm = 0.0;
    };
    auto evaluate = [&](const State& x) {
        Eval e;
        e.vr = residual(x.u);
        e.ru = e.vr.value + B.transpose() * x.p;
        for (int i = 0; i < e.ru.size(); ++i)
            if (mask[i]) e.ru[i] = 0.0;
        e.rp = B * x.u + mean * x.mean_multiplier;
        e.rmu = mean.dot(x.p);
        e.norm = std::sqrt(e.ru.squaredNorm() + e.rp.squaredNorm() + e.rmu * e.rmu);
        return e;
    };

    State x = guess;
    for (int i = 0; i < x.u.size(); ++i)
        if (mask[i]) x.u[i] = 0.0;

    NewtonReport local;
    NewtonReport& rep = report ? *report : local;
    rep = {};

    Eval cur = evaluate(x);
    Vector r0 = residual(Vector::Zero(x.u.size())).value;
    for (int i = 0; i < r0.size(); ++i)
        if (mask[i]) r0[i] = 0.0;
    const double tol = settings.tol_abs + settings.tol_rel * std::max(cur.norm, r0.norm());
    const double floor_tol = 1e4 * tol;

    for (int k = 0;; ++k) {
        rep.residual_history.push_back(cur.norm);
        rep.iterations = k;
        if (cur.norm <= tol) return x;
        if (k >= settings.max_iter) {
            std::ostringstream msg;
            msg << "newton: no convergence after " << k << " iterations (residual " << cur.norm << ", target " << tol
                << ")";
            throw NewtonError(msg.str(), rep.residual_history);
        }

        SaddleSystem sys{cur.vr.jacobian, B, mean, -cur.ru, -cur.rp, mask, -cur.rmu};
        const SaddleSolution step = solve_saddle(sys);

        double t = 1.0;
        bool accepted = false;
        State trial;
        Eval next;
        const int halvings = settings.line_search ? 8 : 0;
        for (int ls = 0; ls <= halvings; ++ls) {
            trial = x;
            trial.u += t * step.u;
            trial.p += t * step.p;
            trial.mean_multiplier += t * step.mean_multiplier;
            next = evaluate(trial);
            if (!settings.line_search || next.norm < cur.norm) {
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted && cur.norm <= floor_tol) return x;  // rounding floor
        const double du = step.u.lpNorm<Eigen::Infinity>();
        if (du <= 1e-15 * std::max(1.0, x.u.lpNorm<Eigen::Infinity>()) && cur.norm <= floor_tol) return x;
        x = std::move(trial);
        cur = std::move(next);
    }
}

StationaryResult solve_stationary_regularized(const Discretization& disc, const FrictionSpec& g, double eps,
                                              const Vector& h_load, const NewtonSettings& settings,
                                              const std::optional<State>& guess) {
    if (!(eps > 0.0)) throw std::invalid_argument("stationary: eps must be positive");
    const std::vector<double> g0 = sample_friction(g, disc.trace, 0.0);
    auto residual = [&](const Vector& u) {
        FrictionAssembly fr = assemble_friction(disc.trace, u, g0, eps);
        VelocityResidual vr;
        vr.value = disc.viscous * u + fr.residual - h_load;
        vr.jacobian = disc.viscous + fr.jacobian;
        return vr;
    };
    StationaryResult res;
    try {
        res.state = newton_solve(disc, residual, guess.value_or(State::zero(disc)), settings, &res.report);
    } catch (const NewtonError&) {
        // cold starts at small eps can stall; walk eps down from a smoother problem
        if (guess || eps >= 1e-1) throw;
        std::optional<State> warm;
        for (double e = 1e-1; e > eps * 3.0; e /= 3.0) warm = solve_stationary_regularized(disc, g, e, h_load, settings, warm).state;
        res = solve_stationary_regularized(disc, g, eps, h_load, settings, warm);
    }
    res.state.t = 0.0;
    return res;
}

ContinuationResult solve_stationary_vi(const Discretization& disc, const FrictionSpec& g, const Vector& h_load,
                                       const std::vector<double>& eps_schedule, const NewtonSettings& settings) {
    if (eps_schedule.empty()) throw std::invalid_argument("continuation: empty eps schedule");
    for (std::size_t k = 0; k < eps_schedule.size(); ++k) {
        if (!(eps_schedule[k] > 0.0)) throw std::invalid_argument("continuation: eps values must be positive");
        if (k > 0 && !(eps_schedule[k] < eps_schedule[k - 1]))
            throw std::invalid_argument("continuation: eps schedule must be strictly decreasing");
    }
    ContinuationResult out;
    std::optional<State> guess;
    for (double eps : eps_schedule) {
        StationaryResult r = solve_stationary_regularized(disc, g, eps, h_load, settings, guess);
        if (!out.stages.empty()) out.h1_increments.push_back(disc.h1_norm(r.state.u - out.stages.back().u));
        guess = r.state;
        out.stages.push_back(r.state);
        out.reports.push_back(std::move(r.report));
    }
    out.final_state = out.stages.back();
    return out;
}

State solve_stokes(const Discretization& disc, const Vector& h_load) {
    SaddleSystem sys{disc.viscous, disc.divergence, disc.pmap.mean_vector, h_load,
                     Vector::Zero(disc.num_pressure()), disc.velocity_mask};
    const SaddleSolution s = solve_saddle(sys);
    return {0.0, s.u, s.p, s.mean_multiplier};
}

}  // namespace fricflow
