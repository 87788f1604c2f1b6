#include <doctest.h>

#include <cmath>
#include <sstream>

#include "fricflow/mesh.hpp"

using namespace fricflow;

namespace {
Mesh mesh_n(int n) {
    MeshConfig c;
    c.n = n;
    return build_two_domain_mesh(c);
}
bool mentions(const ValidationReport& r, const std::string& what) {
    for (const auto& v : r.violations)
        if (v.find(what) != std::string::npos) return true;
    return false;
}
}  // namespace

TEST_SUITE("mesh") {
    TEST_CASE("n = 4 counts") {
        const Mesh m = mesh_n(4);
        CHECK(m.triangles.size() == 32);
        CHECK(m.vertices.size() == 25);
        CHECK(m.interface_edges.size() == 8);
        CHECK(m.dirichlet_vertices.size() == 16);
        CHECK(validate(m).ok());
    }

    TEST_CASE("counts scale with n") {
        for (int n : {4, 8, 16}) {
            const Mesh m = mesh_n(n);
            CHECK(m.triangles.size() == static_cast<std::size_t>(2 * n * n));
            CHECK(m.vertices.size() == static_cast<std::size_t>((n + 1) * (n + 1)));
            CHECK(m.interface_edges.size() == static_cast<std::size_t>(2 * n));
            CHECK(validate(m).ok());
        }
    }

    TEST_CASE("areas, labels and interface length") {
        const Mesh m = mesh_n(8);
        CHECK(m.subdomain_area(Subdomain::In) == doctest::Approx(0.25).epsilon(1e-14));
        CHECK(m.subdomain_area(Subdomain::Out) == doctest::Approx(0.75).epsilon(1e-14));
        CHECK(m.interface_length() == doctest::Approx(2.0).epsilon(1e-14));
        for (int t = 0; t < static_cast<int>(m.triangles.size()); ++t) CHECK(m.triangle_area(t) > 0.0);
    }

    TEST_CASE("interface edges are chained counterclockwise with outward normals") {
        const Mesh m = mesh_n(8);
        const Vec2 c{0.5, 0.5};
        double s = 0.0;
        for (std::size_t k = 0; k < m.interface_edges.size(); ++k) {
            const auto& e = m.interface_edges[k];
            const auto& next = m.interface_edges[(k + 1) % m.interface_edges.size()];
            CHECK(e.v[1] == next.v[0]);
            CHECK(e.arclength_start == doctest::Approx(s));
            const Vec2 a = m.vertices[e.v[0]], b = m.vertices[e.v[1]];
            s += norm(b - a);
            const Vec2 mid = (a + b) * 0.5;
            CHECK(dot(e.normal, mid - c) > 0.0);
            CHECK(norm(e.normal) == doctest::Approx(1.0));
            CHECK(m.triangles[e.in_triangle].label == Subdomain::In);
            CHECK(m.triangles[e.out_triangle].label == Subdomain::Out);
            // counterclockwise around the inner box
            const Vec2 t = b - a;
            CHECK((mid - c).x * t.y - (mid - c).y * t.x > 0.0);
        }
        CHECK(m.vertices[m.interface_edges.front().v[0]].x == doctest::Approx(0.25));
        CHECK(m.vertices[m.interface_edges.front().v[0]].y == doctest::Approx(0.25));
    }

    TEST_CASE("hash is deterministic and mesh dependent") {
        CHECK(mesh_n(4).hash() == mesh_n(4).hash());
        CHECK(mesh_n(4).hash() != mesh_n(8).hash());
    }

    TEST_CASE("invalid configurations") {
        MeshConfig c;
        c.n = 0;
        CHECK_THROWS_AS(build_two_domain_mesh(c), std::invalid_argument);
        c = MeshConfig{};
        c.n = 3;  // 0.25 is not a multiple of 1/3
        CHECK_THROWS_AS(build_two_domain_mesh(c), std::invalid_argument);
        c = MeshConfig{};
        c.inner_box = {0.0, 0.25, 0.75, 0.75};  // touches the outer boundary
        CHECK_THROWS_AS(build_two_domain_mesh(c), std::invalid_argument);
        c = MeshConfig{};
        c.n = 2;  // inner box would be a single cell wide ring
        CHECK_THROWS_AS(build_two_domain_mesh(c), std::invalid_argument);
    }

    TEST_CASE("non-unit boxes") {
        MeshConfig c;
        c.outer_box = {0.0, 0.0, 2.0, 1.0};
        c.inner_box = {0.5, 0.25, 1.5, 0.75};
        c.n = 4;
        const Mesh m = build_two_domain_mesh(c);
        CHECK(validate(m).ok());
        CHECK(m.triangles.size() == 64);
        CHECK(m.subdomain_area(Subdomain::In) == doctest::Approx(0.5));
        CHECK(m.interface_length() == doctest::Approx(3.0));
    }

    TEST_CASE("validation catches corruption") {
        Mesh m = mesh_n(4);
        std::swap(m.triangles[3].v[1], m.triangles[3].v[2]);
        const auto r = validate(m);
        CHECK_FALSE(r.ok());
        CHECK(mentions(r, "triangle 3: negative signed area"));

        Mesh m2 = mesh_n(4);
        m2.interface_edges.pop_back();
        CHECK(mentions(validate(m2), "interface not closed"));

        Mesh m3 = mesh_n(4);
        m3.interface_edges[0].normal = m3.interface_edges[0].normal * -1.0;
        CHECK_FALSE(validate(m3).ok());
    }

    TEST_CASE("text dump") {
        const Mesh m = mesh_n(4);
        std::ostringstream os;
        write_mesh(os, m);
        std::istringstream in(os.str());
        std::string line;
        int v = 0, t = 0, e = 0;
        while (std::getline(in, line)) {
            if (line.rfind("v ", 0) == 0) ++v;
            if (line.rfind("t ", 0) == 0) ++t;
            if (line.rfind("e ", 0) == 0) ++e;
        }
        CHECK(v == 25);
        CHECK(t == 32);
        CHECK(e == 8);
    }
}
