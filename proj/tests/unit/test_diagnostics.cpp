#include <doctest.h>

#include <cmath>

#include "fricflow/assembly.hpp"
#include "fricflow/diagnostics.hpp"
#include "fricflow/solver.hpp"
#include "helpers.hpp"

using namespace fricflow;
using testing::make_disc;

namespace {

struct Fixture {
    Discretization d = make_disc(8, 0.1);
    Vector h;
    State s;
    std::vector<double> g;
    double eps = 1e-3;

    explicit Fixture(double gval = 1.0, double amplitude = 3.0, const std::string& shape = "rotation") {
        VectorFieldSpec f;
        f.shape = shape;
        f.amplitude = amplitude;
        h = assemble_load(d.mesh, d.vmap, f, d.ctx, 0.0);
        s = solve_stationary_regularized(d, FrictionSpec::constant(gval), eps, h).state;
        g.assign(d.trace.num_points(), gval);
    }
};

}  // namespace

TEST_SUITE("diagnostics") {
    TEST_CASE("pointwise complementarity of a stationary solution") {
        Fixture fx;
        const InterfaceStress st = recover_interface_stress(fx.d, fx.s, fx.h, fx.g, fx.eps);
        CHECK(st.points.size() == fx.d.trace.num_points());
        for (const auto& p : st.points) {
            CHECK(norm(p.lambda) <= p.g);
            CHECK(p.slack >= 0.0);
            CHECK(p.defect >= 0.0);
            CHECK(p.defect <= p.g * fx.eps + 1e-12);
        }
        CHECK(st.max_defect > 0.0);
        // the variational traction approximates the direct law
        double l2 = 0.0;
        for (const auto& p : st.points) l2 = std::max(l2, norm(p.lambda));
        CHECK(st.discrepancy_l2 < 2.0 * l2);
    }

    TEST_CASE("pressure constants: identities and delta as the jump of subdomain means") {
        Fixture fx;
        const InterfaceStress st = recover_interface_stress(fx.d, fx.s, fx.h, fx.g, fx.eps);
        const PressureConstants pc = recover_pressure_constants(fx.d, fx.s, fx.h, st);
        REQUIRE_FALSE(pc.non_unique);
        const double a_in = fx.d.mesh.subdomain_area(Subdomain::In), a_out = fx.d.mesh.subdomain_area(Subdomain::Out);
        CHECK(std::abs(pc.k_out - pc.k_in - pc.delta) <= 1e-12);
        CHECK(std::abs(a_in * pc.k_in + a_out * pc.k_out) <= 1e-12);
        const double jump = subdomain_mean(fx.d, fx.s.p, Subdomain::Out) - subdomain_mean(fx.d, fx.s.p, Subdomain::In);
        CHECK(pc.delta == doctest::Approx(jump).epsilon(1e-8));
        MESSAGE("delta " << pc.delta << ", direct " << pc.delta_direct << ", spread " << pc.constancy_residual);
    }

    TEST_CASE("constant pressure shift moves delta by c (1 + |out|/|in|)") {
        Fixture fx;
        const double a_in = fx.d.mesh.subdomain_area(Subdomain::In), a_out = fx.d.mesh.subdomain_area(Subdomain::Out);
        const InterfaceStress st = recover_interface_stress(fx.d, fx.s, fx.h, fx.g, fx.eps);
        const double d0 = recover_pressure_constants(fx.d, fx.s, fx.h, st).delta;
        const double c = 0.7;
        State shifted = fx.s;
        for (int i = 0; i < fx.d.num_pressure(); ++i)
            shifted.p[i] += fx.d.pmap.dof_side[i] == Subdomain::Out ? c : -c * a_out / a_in;
        CHECK(std::abs(fx.d.pmap.mean_vector.dot(shifted.p)) < 1e-12);
        const InterfaceStress st2 = recover_interface_stress(fx.d, shifted, fx.h, fx.g, fx.eps);
        const double d1 = recover_pressure_constants(fx.d, shifted, fx.h, st2).delta;
        CHECK(d1 - d0 == doctest::Approx(c * (1.0 + a_out / a_in)).epsilon(1e-10));
    }

    TEST_CASE("delta stays inside [-2g, 2g] for a Stokes problem") {
        Fixture fx(0.5, 2.0, "vortex");
        const DiagnosticsRow row = diagnose_state(fx.d, fx.s, fx.h, fx.g, fx.eps, 3);
        CHECK(std::abs(row.delta) <= 2.0 * 0.5 + 1e-8);
        CHECK(row.newton_iters == 3);
        CHECK(row.max_g == 0.5);
        CHECK(row.j >= row.j_eps);
        CHECK(row.j - row.j_eps <= 0.5 * fx.eps * 2.0 + 1e-14);
    }

    TEST_CASE("vanishing normal velocity flags non-uniqueness") {
        const auto d = make_disc(4);
        const State z = State::zero(d);
        const std::vector<double> g(d.trace.num_points(), 1.0);
        const Vector h = Vector::Zero(d.num_velocity());
        const auto st = recover_interface_stress(d, z, h, g, 1e-3);
        const auto pc = recover_pressure_constants(d, z, h, st);
        CHECK(pc.non_unique);
        CHECK(pc.delta == 0.0);
    }

    TEST_CASE("energy report") {
        StepEnergy a;
        a.energy_old = 1.0;
        a.energy_new = 0.8;
        a.increment = 0.05;
        a.viscous = 0.1;
        a.friction = 0.05;
        CHECK(a.identity_residual() == doctest::Approx(0.0));
        StepEnergy b = a;
        b.energy_old = 0.8;
        b.energy_new = 0.9;
        b.forcing = 0.3;
        const EnergyReport forced = energy_report({a, b}, 1.0, false);
        CHECK(forced.violations == 0);
        CHECK(forced.sup_energy == doctest::Approx(1.0));
        const EnergyReport unforced = energy_report({a, b}, 1.0, true);
        CHECK(unforced.violations == 1);
        CHECK(unforced.rows[1].monotonicity_violation);
        CHECK(unforced.rows[1].cumulative_dissipation == doctest::Approx(0.4));
        StepEnergy zero;
        CHECK(zero.identity_residual() == 0.0);
    }

    TEST_CASE("norms") {
        const auto d = make_disc(4);
        State s = State::zero(d);
        s.u = interpolate_velocity(d.vmap, [](const Vec2& x) { return Vec2{x.x, 0.0}; });
        const Norms n = norms(d, s);
        CHECK(n.l2_velocity == doctest::Approx(std::sqrt(1.0 / 3.0)));
        CHECK(n.h1_velocity == doctest::Approx(std::sqrt(1.0 / 3.0 + 1.0)));
        CHECK(n.interface_l2 == doctest::Approx(std::sqrt(7.0 / 12.0)));
        CHECK(n.l2_pressure == 0.0);
    }
}
