#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fricflow/types.hpp"

namespace fricflow {

struct Box {
    double xmin = 0.0;
    double ymin = 0.0;
    double xmax = 1.0;
    double ymax = 1.0;

    double width() const { return xmax - xmin; }
    double height() const { return ymax - ymin; }
    double area() const { return width() * height(); }
    double perimeter() const { return 2.0 * (width() + height()); }
};

struct MeshConfig {
    Box outer_box{0.0, 0.0, 1.0, 1.0};
    Box inner_box{0.25, 0.25, 0.75, 0.75};
    int n = 8;  // subdivisions per unit length
};

struct Triangle {
    std::array<int, 3> v{};
    Subdomain label = Subdomain::Out;
};

struct InterfaceEdge {
    std::array<int, 2> v{};  // ordered counterclockwise around the inner box
    Vec2 normal;             // unit normal pointing into the outer subdomain
    int in_triangle = -1;
    int out_triangle = -1;
    double arclength_start = 0.0;  // arclength of v[0] along the interface
};

// Two-subdomain triangulation. Plain aggregate: construct once with
// build_two_domain_mesh and share by const reference.
struct Mesh {
    std::vector<Vec2> vertices;
    std::vector<Triangle> triangles;
    std::vector<InterfaceEdge> interface_edges;
    std::vector<int> dirichlet_vertices;
    Box outer_box;
    Box inner_box;

    double triangle_area(int t) const;
    double subdomain_area(Subdomain s) const;
    double interface_length() const;
    // FNV-1a over vertex coordinates and triangle connectivity.
    std::uint64_t hash() const;
};

Mesh build_two_domain_mesh(const MeshConfig& cfg);

struct ValidationReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

ValidationReport validate(const Mesh& mesh);

// Text dump: `v x y`, `t i j k label`, `e i j nx ny`, one record per line.
void write_mesh(std::ostream& os, const Mesh& mesh);

}  // namespace fricflow
