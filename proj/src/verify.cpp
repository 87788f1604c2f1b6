#include "fricflow/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <limits>
#include <random>

#include "fricflow/assembly.hpp"
#include "fricflow/element.hpp"
#include "fricflow/quadrature.hpp"
#include "fricflow/regularization.hpp"

namespace fricflow {

bool VerifyReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckLine& c) { return c.passed; });
}

void VerifyReport::add(const std::string& name, bool ok, const std::string& detail) {
    checks.push_back({name, ok, detail});
}

std::string strf(const char* fmt, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, ap);
    va_end(ap);
    return buf;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = std::min(x.size(), y.size());
    if (n < 2) return std::numeric_limits<double>::quiet_NaN();
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = std::log(x[i]) - mx;
        sxy += dx * (std::log(y[i]) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

std::vector<double> pairwise_rates(const std::vector<double>& h, const std::vector<double>& e) {
    std::vector<double> r;
    for (std::size_t k = 0; k + 1 < std::min(h.size(), e.size()); ++k)
        r.push_back(std::log(e[k] / e[k + 1]) / std::log(h[k] / h[k + 1]));
    return r;
}

FieldError velocity_error(const Discretization& disc, const Vector& u, const std::function<Vec2(const Vec2&)>& exact,
                          const std::function<Mat2(const Vec2&)>& exact_grad) {
    static const std::vector<TriangleQuadPoint> rule = triangle_rule_collapsed(8);
    double l2 = 0.0, semi = 0.0;
    for (int t = 0; t < static_cast<int>(disc.mesh.triangles.size()); ++t) {
        const TriangleGeometry geo = triangle_geometry(disc.mesh, t);
        const auto dofs = disc.vmap.cell_dofs(t);
        for (const auto& q : rule) {
            const auto phi = p2_values(q.bary);
            const auto dphi = p2_gradients(q.bary, geo);
            Vec2 uh;
            Mat2 gh{};
            for (int a = 0; a < 6; ++a) {
                const double ux = u[dofs[2 * a]], uy = u[dofs[2 * a + 1]];
                uh.x += phi[a] * ux;
                uh.y += phi[a] * uy;
                gh[0] += ux * dphi[a].x;
                gh[1] += ux * dphi[a].y;
                gh[2] += uy * dphi[a].x;
                gh[3] += uy * dphi[a].y;
            }
            const Vec2 x = geo.point(q.bary);
            const Vec2 ue = exact(x);
            const Mat2 ge = exact_grad(x);
            const double w = q.weight * geo.area;
            l2 += w * ((uh.x - ue.x) * (uh.x - ue.x) + (uh.y - ue.y) * (uh.y - ue.y));
            for (int k = 0; k < 4; ++k) semi += w * (gh[k] - ge[k]) * (gh[k] - ge[k]);
        }
    }
    return {std::sqrt(l2), std::sqrt(l2 + semi)};
}

RegularizationSampleReport sample_regularization(int samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    RegularizationSampleReport r;
    r.samples = samples;
    r.min_beta_quadratic = std::numeric_limits<double>::infinity();
    for (int i = 0; i < samples; ++i) {
        const double eps = std::pow(10.0, -6.0 + 6.0 * unit(rng));
        // |z| / eps in [1e-4, 1e6]; far beyond that the gaps in the strict
        // bounds drop below double resolution
        const double mag = eps * std::pow(10.0, -4.0 + 10.0 * unit(rng));
        const double ang = 2.0 * M_PI * unit(rng);
        const Vec2 z{mag * std::cos(ang), mag * std::sin(ang)};
        const double yang = 2.0 * M_PI * unit(rng);
        const Vec2 y{std::cos(yang), std::sin(yang)};

        const double rho = rho_eps(z, eps);
        const Vec2 a = alpha_eps(z, eps);
        const Mat2 b = beta_eps(z, eps);
        if (std::abs(rho - norm(z)) > eps) ++r.bound_violations;
        if (!(norm(a) < 1.0)) ++r.alpha_norm_violations;
        if (dot(a, z) < 0.0) ++r.alpha_sign_violations;
        const double q = y.x * (b[0] * y.x + b[1] * y.y) + y.y * (b[2] * y.x + b[3] * y.y);
        r.min_beta_quadratic = std::min(r.min_beta_quadratic, q);
        if (q < -1e-12) ++r.beta_violations;

        const double h = 1e-4 * std::sqrt(dot(z, z) + eps * eps);
        const double gx = (rho_eps({z.x + h, z.y}, eps) - rho_eps({z.x - h, z.y}, eps)) / (2 * h);
        const double gy = (rho_eps({z.x, z.y + h}, eps) - rho_eps({z.x, z.y - h}, eps)) / (2 * h);
        r.max_gradient_error = std::max(r.max_gradient_error, std::max(std::abs(gx - a.x), std::abs(gy - a.y)));
    }
    return r;
}

double sample_skew_ratio(const Discretization& disc, int samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    const int n = disc.num_velocity();
    double worst = 0.0;
    Vector w(n), v(n);
    for (int s = 0; s < samples; ++s) {
        for (int i = 0; i < n; ++i) w[i] = unit(rng);
        for (int i = 0; i < n; ++i) v[i] = unit(rng);
        apply_dirichlet_mask(disc.vmap, w);
        apply_dirichlet_mask(disc.vmap, v);
        const SparseOperator N = assemble_convection_skew(disc.mesh, disc.vmap, w);
        const double h1 = disc.h1_norm(v);
        worst = std::max(worst, std::abs(v.dot(N * v)) / (h1 * h1));
    }
    return worst;
}

VectorFieldSpec stationary_load_spec(const RunConfig& cfg) {
    if (cfg.initial.mode == InitialMode::Stationary) return cfg.initial.field;
    if (cfg.force.shape != "zero" && cfg.force.amplitude != 0.0) return cfg.force;
    VectorFieldSpec v;
    v.shape = "vortex";
    v.amplitude = 1.0;
    return v;
}

namespace {

bool unforced(const RunConfig& cfg) { return cfg.force.shape == "zero" || cfg.force.amplitude == 0.0; }

Vector stationary_load(const Discretization& d, const RunConfig& cfg) {
    VectorFieldSpec h = stationary_load_spec(cfg);
    h.time_mode = "steady";
    return assemble_load(d.mesh, d.vmap, h, d.ctx, 0.0);
}

}  // namespace

VerifyReport verify_energy(const ParsedConfig& pc, std::uint64_t seed) {
    const RunConfig& cfg = pc.run;
    VerifyReport rep;
    rep.title = "energy";
    const TimeStepper stepper(cfg);
    const Trajectory traj = run(stepper);
    const Discretization& d = stepper.discretization();
    const double e0 = 0.5 * traj.states.front().u.dot(d.mass * traj.states.front().u);
    const EnergyReport er = energy_report(traj.energies, e0, unforced(cfg));

    rep.notes.push_back(strf("%d steps, %s, E(0) = %.6e, E(T) = %.6e", cfg.num_steps(), to_string(cfg.problem), e0,
                             traj.rows.back().energy));
    rep.add("energy identity", er.max_identity_residual <= pc.verify.energy_identity_tol,
            strf("max relative residual %.3e (tol %.1e)", er.max_identity_residual, pc.verify.energy_identity_tol));

    if (unforced(cfg)) {
        const bool strict = cfg.problem == ProblemKind::Stokes;
        int bad = 0;
        for (std::size_t k = 1; k < traj.states.size(); ++k) {
            const double a = d.l2_norm(traj.states[k - 1].u), b = d.l2_norm(traj.states[k].u);
            if (strict ? !(b < a || (a == 0.0 && b == 0.0)) : !(b <= a)) ++bad;
        }
        rep.add(strict ? "|u|_M strictly decreasing" : "|u|_M nonincreasing", bad == 0,
                strf("%d violating steps of %d", bad, cfg.num_steps()));
    } else {
        rep.notes.push_back(strf("forced run: sup energy %.6e, monotonicity not required", er.sup_energy));
    }

    if (cfg.problem == ProblemKind::NavierStokes) {
        const int samples = std::min(pc.verify.random_samples, 200);
        const double ratio = sample_skew_ratio(d, samples, seed);
        rep.add("skew convection", ratio <= 1e-13,
                strf("max |a1(w;v,v)|/|v|_H1^2 = %.3e over %d random pairs", ratio, samples));
    }
    return rep;
}

VerifyReport verify_complementarity(const ParsedConfig& pc, std::uint64_t seed) {
    const RunConfig& cfg = pc.run;
    const VerifySettings& vs = pc.verify;
    VerifyReport rep;
    rep.title = "complementarity";

    const RegularizationSampleReport rs = sample_regularization(vs.random_samples, seed);
    const int rviol = rs.bound_violations + rs.alpha_norm_violations + rs.alpha_sign_violations + rs.beta_violations;
    rep.add("regularization bounds", rviol == 0 && rs.max_gradient_error <= 1e-7,
            strf("%d violations in %d samples, max |alpha - grad rho| %.2e", rviol, rs.samples,
                 rs.max_gradient_error));

    const TimeStepper stepper(cfg);
    const Discretization& d = stepper.discretization();
    const double area_in = d.mesh.subdomain_area(Subdomain::In), area_out = d.mesh.subdomain_area(Subdomain::Out);

    int slack_bad = 0, defect_bad = 0, ident_bad = 0, mean_bad = 0, delta_bad = 0, states = 0;
    double worst_slack = std::numeric_limits<double>::infinity(), worst_defect = 0.0, max_delta = 0.0;
    double max_ident = 0.0, max_mean = 0.0, max_g = 0.0;
    auto check_state = [&](const State& s, const Vector& explicit_terms, const DiagnosticsRow& row) {
        ++states;
        const std::vector<double> g = stepper.friction_samples(s.t);
        const InterfaceStress st = recover_interface_stress(d, s, explicit_terms, g, cfg.eps);
        bool sb = false, db = false;
        for (const auto& p : st.points) {
            worst_slack = std::min(worst_slack, p.slack);
            if (p.slack < 0.0) sb = true;
            const double excess = p.defect - p.g * cfg.eps;
            worst_defect = std::max(worst_defect, excess);
            if (p.defect < 0.0 || excess > vs.complementarity_tol) db = true;
        }
        slack_bad += sb;
        defect_bad += db;
        const double ident = std::abs(row.k_out - row.k_in - row.delta);
        const double mean = std::abs(area_in * row.k_in + area_out * row.k_out);
        max_ident = std::max(max_ident, ident);
        max_mean = std::max(max_mean, mean);
        ident_bad += ident > vs.pressure_identity_tol;
        mean_bad += mean > vs.pressure_identity_tol;
        max_g = std::max(max_g, row.max_g);
        max_delta = std::max(max_delta, std::abs(row.delta));
        delta_bad += std::abs(row.delta) > 2.0 * row.max_g + vs.delta_tol;
    };

    State s = stepper.initial_state();
    {
        const Vector e0 = cfg.initial.mode == InitialMode::Stationary ? stationary_load(d, cfg) : stepper.load(0.0);
        check_state(s, e0, diagnose_state(d, s, e0, stepper.friction_samples(0.0), cfg.eps, 0));
    }
    for (int k = 1; k <= cfg.num_steps(); ++k) {
        State next = stepper.step(s);
        const Vector ex = stepper.explicit_terms(s, next);
        check_state(next, ex, diagnose_state(d, next, ex, stepper.friction_samples(next.t), cfg.eps, 0));
        s = std::move(next);
    }

    rep.add("|lambda| <= g", slack_bad == 0,
            strf("%d of %d states violate, min g - |lambda| = %.3e", slack_bad, states, worst_slack));
    rep.add("0 <= g|u| - lambda.u <= g eps", defect_bad == 0,
            strf("%d of %d states violate, max excess over g eps = %.3e", defect_bad, states, worst_defect));
    rep.add("k_out - k_in = delta", ident_bad == 0, strf("max deviation %.3e", max_ident));
    rep.add("|in| k_in + |out| k_out = 0", mean_bad == 0, strf("max deviation %.3e", max_mean));
    rep.add("|delta| <= 2 max g", delta_bad == 0,
            strf("%d of %d states violate, max |delta| = %.6e, max g = %.6e", delta_bad, states, max_delta, max_g));
    return rep;
}

StationaryStudy stationary_study(const ParsedConfig& pc, int n) {
    StationaryStudy st;
    RunConfig cfg = pc.run;
    cfg.mesh.n = n;
    st.disc = std::make_shared<const Discretization>(Discretization::build(cfg.mesh, cfg.nu));
    st.eps = pc.verify.eps_values;
    st.eps.push_back(pc.verify.eps_reference);
    const Vector h = stationary_load(*st.disc, cfg);
    st.continuation = solve_stationary_vi(*st.disc, cfg.friction, h, st.eps, cfg.newton);
    st.report.title = "stationary";
    for (std::size_t k = 0; k < st.eps.size(); ++k) {
        const auto& r = st.continuation.reports[k];
        st.report.notes.push_back(strf("eps %.3e: %d Newton iterations, final residual %.3e, |u|_H1 %.6e", st.eps[k],
                                       r.iterations, r.residual_history.empty() ? 0.0 : r.residual_history.back(),
                                       st.disc->h1_norm(st.continuation.stages[k].u)));
    }
    for (std::size_t k = 0; k < st.continuation.h1_increments.size(); ++k)
        st.report.notes.push_back(strf("|u(%.3e) - u(%.3e)|_H1 = %.3e", st.eps[k], st.eps[k + 1],
                                       st.continuation.h1_increments[k]));
    return st;
}

VerifyReport verify_eps_rate(const ParsedConfig& pc) {
    const StationaryStudy st = stationary_study(pc, pc.verify.stationary_n);
    VerifyReport rep;
    rep.title = "eps-rate";
    const Vector& ref = st.continuation.final_state.u;
    std::vector<double> eps, err;
    for (std::size_t k = 0; k + 1 < st.eps.size(); ++k) {
        eps.push_back(st.eps[k]);
        err.push_back(st.disc->h1_norm(st.continuation.stages[k].u - ref));
        rep.notes.push_back(strf("eps %.3e  |u_eps - u_ref|_H1 = %.6e", eps.back(), err.back()));
    }
    const double slope = loglog_slope(eps, err);
    rep.notes.push_back(strf("n = %d, reference eps = %.1e, fitted slope %.4f", pc.verify.stationary_n,
                             pc.verify.eps_reference, slope));
    rep.add("sqrt(eps) rate", slope >= pc.verify.eps_rate_min_slope,
            strf("slope %.4f (min %.2f)", slope, pc.verify.eps_rate_min_slope));
    return rep;
}

VerifyReport verify_limits(const ParsedConfig& pc) {
    const RunConfig& cfg = pc.run;
    const VerifySettings& vs = pc.verify;
    VerifyReport rep;
    rep.title = "limits";
    const Discretization d = Discretization::build(cfg.mesh, cfg.nu);
    const Vector h = stationary_load(d, cfg);

    // Dirichlet: scale g from the stress a unit threshold produces
    const StationaryResult unit = solve_stationary_regularized(d, FrictionSpec::constant(1.0), cfg.eps, h, cfg.newton);
    const std::vector<double> g1(d.trace.num_points(), 1.0);
    const InterfaceStress s1 = recover_interface_stress(d, unit.state, h, g1, cfg.eps);
    double scale = 0.0;
    for (const auto& p : s1.points) scale = std::max(scale, norm(p.lambda_variational));
    const double g_big = vs.dirichlet_g_factor * scale;
    // ramp g up by decades; one jump to g_big stalls on fine meshes
    StationaryResult big = unit;
    for (double g = 10.0; ; g *= 10.0) {
        const double gk = std::min(g, g_big);
        big = solve_stationary_regularized(d, FrictionSpec::constant(gk), cfg.eps, h, cfg.newton, big.state);
        if (gk == g_big) break;
    }
    const Discretization clamped_disc = d.with_clamped_interface();
    const State clamped = solve_stokes(clamped_disc, h);
    const double trace = d.interface_l2_norm(big.state.u), h1 = d.h1_norm(big.state.u);
    const double dist = d.h1_norm(big.state.u - clamped.u) / d.h1_norm(clamped.u);
    rep.notes.push_back(strf("stress scale at g = 1: %.6e, Dirichlet-limit g = %.6e", scale, g_big));
    rep.add("Dirichlet limit: interface trace", trace <= vs.dirichlet_trace_ratio * h1,
            strf("|u|_L2(interface) / |u|_H1 = %.3e (max %.1e)", trace / h1, vs.dirichlet_trace_ratio));
    rep.add("Dirichlet limit: clamped solve", dist <= vs.dirichlet_h1_rel,
            strf("relative H1 distance %.3e (max %.1e)", dist, vs.dirichlet_h1_rel));

    // Neumann: g = 0 against the single-domain continuous-pressure solve
    const StationaryResult free = solve_stationary_regularized(d, FrictionSpec::constant(0.0), cfg.eps, h, cfg.newton);
    const Discretization single = Discretization::build(cfg.mesh, cfg.nu, PressureCoupling::Continuous);
    const State ref = solve_stokes(single, h);
    const double nd = d.h1_norm(free.state.u - ref.u) / d.h1_norm(ref.u);
    rep.add("Neumann limit: single-domain solve", nd <= vs.neumann_h1_rel,
            strf("relative H1 distance %.3e (max %.1e)", nd, vs.neumann_h1_rel));
    return rep;
}

VerifyReport verify_convergence(const ParsedConfig& pc) {
    const RunConfig& cfg = pc.run;
    const VerifySettings& vs = pc.verify;
    VerifyReport rep;
    rep.title = "convergence";
    std::vector<double> hs, l2, h1;
    for (int n : vs.convergence_meshes) {
        MeshConfig mc = cfg.mesh;
        mc.n = n;
        const Discretization d = Discretization::build(mc, cfg.nu);
        VectorFieldSpec f;
        f.shape = "mms_force";
        const Vector load = assemble_load(d.mesh, d.vmap, f, d.ctx, 0.0);
        const StationaryResult r =
            solve_stationary_regularized(d, FrictionSpec::constant(vs.convergence_g), cfg.eps, load, cfg.newton);
        const FieldError e = velocity_error(
            d, r.state.u, [&](const Vec2& x) { return manufactured::velocity(d.ctx, x); },
            [&](const Vec2& x) { return manufactured::velocity_gradient(d.ctx, x); });
        hs.push_back(1.0 / n);
        l2.push_back(e.l2);
        h1.push_back(e.h1);
        rep.notes.push_back(strf("n = %3d  L2 error %.6e  H1 error %.6e", n, e.l2, e.h1));
    }
    const auto rl2 = pairwise_rates(hs, l2), rh1 = pairwise_rates(hs, h1);
    const double ml2 = *std::min_element(rl2.begin(), rl2.end()), mh1 = *std::min_element(rh1.begin(), rh1.end());
    std::string sl2, sh1;
    for (double r : rl2) sl2 += strf(" %.3f", r);
    for (double r : rh1) sh1 += strf(" %.3f", r);
    rep.add("L2 rate", ml2 >= vs.convergence_l2_rate, strf("rates%s (min %.2f)", sl2.c_str(), vs.convergence_l2_rate));
    rep.add("H1 rate", mh1 >= vs.convergence_h1_rate, strf("rates%s (min %.2f)", sh1.c_str(), vs.convergence_h1_rate));
    return rep;
}

TemporalStudy temporal_convergence(const RunConfig& base, const std::vector<double>& dts, double dt_ref) {
    const auto disc = std::make_shared<const Discretization>(Discretization::build(base.mesh, base.nu));
    auto final_state = [&](double dt) {
        RunConfig c = base;
        c.dt = dt;
        const TimeStepper stepper(disc, c);
        State s = stepper.initial_state();
        for (int k = 0; k < c.num_steps(); ++k) s = stepper.step(s);
        return s.u;
    };
    const Vector ref = final_state(dt_ref);
    TemporalStudy st;
    st.dts = dts;
    for (double dt : dts) st.errors.push_back(disc->l2_norm(final_state(dt) - ref));
    st.order = loglog_slope(st.dts, st.errors);
    return st;
}

}  // namespace fricflow
