#include <doctest.h>

#include <cmath>

#include "fricflow/quadrature.hpp"
#include "helpers.hpp"

using namespace fricflow;
using testing::make_disc;

TEST_SUITE("quadrature") {
    TEST_CASE("triangle rules integrate monomials exactly") {
        // int over the reference triangle of x^a y^b = a! b! / (a + b + 2)!
        auto exact = [](int a, int b) { return std::tgamma(a + 1) * std::tgamma(b + 1) / std::tgamma(a + b + 3); };
        auto integrate = [](const std::vector<TriangleQuadPoint>& rule, int a, int b) {
            double s = 0.0;
            for (const auto& q : rule) s += q.weight * 0.5 * std::pow(q.bary[1], a) * std::pow(q.bary[2], b);
            return s;
        };
        for (int a = 0; a <= 4; ++a)
            for (int b = 0; a + b <= 4; ++b)
                CHECK(integrate(triangle_rule_degree4(), a, b) == doctest::Approx(exact(a, b)).epsilon(1e-13));
        const auto high = triangle_rule_collapsed(6);
        for (int a = 0; a <= 10; ++a)
            for (int b = 0; a + b <= 10; ++b) CHECK(integrate(high, a, b) == doctest::Approx(exact(a, b)).epsilon(1e-12));
    }

    TEST_CASE("Gauss-Legendre on [0,1]") {
        for (int p = 1; p <= 6; ++p) {
            const auto rule = gauss_legendre(p);
            double w = 0.0;
            for (const auto& q : rule) w += q.weight;
            CHECK(w == doctest::Approx(1.0).epsilon(1e-14));
            for (int k = 0; k <= 2 * p - 1; ++k) {
                double s = 0.0;
                for (const auto& q : rule) s += q.weight * std::pow(q.s, k);
                CHECK(s == doctest::Approx(1.0 / (k + 1)).epsilon(1e-13));
            }
        }
    }
}

TEST_SUITE("spaces") {
    TEST_CASE("n = 4 dof counts") {
        const auto d = make_disc(4);
        CHECK(d.vmap.num_vertices == 25);
        CHECK(d.vmap.num_nodes() == 81);
        CHECK(d.num_velocity() == 162);
        CHECK(d.num_pressure() == 33);
        CHECK(make_disc(4, 1.0, PressureCoupling::Continuous).num_pressure() == 25);
        CHECK(d.trace.edges.size() == 8);
        CHECK(d.trace.interface_nodes.size() == 16);
    }

    TEST_CASE("P2 basis: partition of unity and nodal property") {
        const std::array<std::array<double, 3>, 6> nodes{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {.5, .5, 0}, {0, .5, .5}, {.5, 0, .5}}};
        for (int i = 0; i < 6; ++i) {
            const auto v = p2_values(nodes[i]);
            for (int j = 0; j < 6; ++j) CHECK(v[j] == doctest::Approx(i == j ? 1.0 : 0.0));
        }
        const auto v = p2_values({0.2, 0.3, 0.5});
        double s = 0.0;
        for (double x : v) s += x;
        CHECK(s == doctest::Approx(1.0));
    }

    TEST_CASE("interpolation reproduces quadratics") {
        const auto d = make_disc(4);
        auto f = [](const Vec2& x) { return Vec2{x.x * x.x - 2 * x.x * x.y, 1.0 + x.y * x.y}; };
        const Vector u = interpolate_velocity(d.vmap, f);
        for (const Vec2 x : {Vec2{0.1, 0.2}, Vec2{0.33, 0.71}, Vec2{0.9, 0.45}}) {
            const Vec2 a = testing::evaluate_at(d, u, x), b = f(x);
            CHECK(a.x == doctest::Approx(b.x).epsilon(1e-12));
            CHECK(a.y == doctest::Approx(b.y).epsilon(1e-12));
        }
    }

    TEST_CASE("Dirichlet mask covers exactly the outer boundary") {
        const auto d = make_disc(4);
        int masked = 0;
        for (int node = 0; node < d.vmap.num_nodes(); ++node) {
            const Vec2 x = d.vmap.node_coords[node];
            const bool boundary = x.x == 0.0 || x.y == 0.0 || x.x == 1.0 || x.y == 1.0;
            CHECK(bool(d.vmap.dirichlet_mask[2 * node]) == boundary);
            masked += boundary;
        }
        CHECK(masked == 32);  // 16 vertices + 16 edge midpoints
    }

    TEST_CASE("pressure split duplicates the interface vertices") {
        const auto d = make_disc(8);
        int in = 0, out = 0;
        for (auto s : d.pmap.dof_side) (s == Subdomain::In ? in : out)++;
        CHECK(in == 25);  // 5x5 inner vertices
        CHECK(out == 81 - 9);  // every vertex not strictly inside the inner box
        CHECK(in + out == d.num_pressure());
        double a_in = 0.0;
        for (int i = 0; i < d.num_pressure(); ++i)
            if (d.pmap.dof_side[i] == Subdomain::In) a_in += d.pmap.mean_vector[i];
        CHECK(a_in == doctest::Approx(0.25));
        CHECK(d.pmap.mean_vector.sum() == doctest::Approx(1.0));
    }

    TEST_CASE("trace map") {
        const auto d = make_disc(8);
        double len = 0.0;
        for (const auto& e : d.trace.edges)
            for (double w : e.weights) len += w;
        CHECK(len == doctest::Approx(2.0));
        CHECK(d.trace.num_points() == 16 * 3);
        const Vector u = interpolate_velocity(d.vmap, [](const Vec2& x) { return Vec2{x.y * x.y, x.x}; });
        for (int e = 0; e < static_cast<int>(d.trace.edges.size()); ++e)
            for (int q = 0; q < d.trace.quad_points; ++q) {
                const Vec2 x = d.trace.edges[e].points[q];
                const Vec2 v = d.trace.evaluate(u, e, q);
                CHECK(v.x == doctest::Approx(x.y * x.y));
                CHECK(v.y == doctest::Approx(x.x));
            }
        MeshConfig mc;
        mc.n = 4;
        const Mesh m = build_two_domain_mesh(mc);
        CHECK_THROWS_AS(build_trace_map(m, build_velocity_space(m), 0), std::invalid_argument);
    }
}
