#include "fricflow/spaces.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "fricflow/element.hpp"
#include "fricflow/quadrature.hpp"

namespace fricflow {

namespace {

bool on_box_boundary(const Box& b, const Vec2& p) {
    constexpr double tol = 1e-12;
    const bool in_x = p.x >= b.xmin - tol && p.x <= b.xmax + tol;
    const bool in_y = p.y >= b.ymin - tol && p.y <= b.ymax + tol;
    return (in_y && (std::abs(p.x - b.xmin) < tol || std::abs(p.x - b.xmax) < tol)) ||
           (in_x && (std::abs(p.y - b.ymin) < tol || std::abs(p.y - b.ymax) < tol));
}

}  // namespace

std::array<int, 12> VelocityDofMap::cell_dofs(int t) const {
    std::array<int, 12> d{};
    const auto& nodes = cell_nodes[t];
    for (int k = 0; k < 6; ++k) {
        d[2 * k] = dof(nodes[k], 0);
        d[2 * k + 1] = dof(nodes[k], 1);
    }
    return d;
}

VelocityDofMap build_velocity_space(const Mesh& mesh) {
    VelocityDofMap vmap;
    vmap.num_vertices = static_cast<int>(mesh.vertices.size());
    vmap.node_coords = mesh.vertices;

    std::map<std::pair<int, int>, int> edge_ids;
    vmap.cell_nodes.reserve(mesh.triangles.size());
    for (const auto& tri : mesh.triangles) {
        std::array<int, 6> nodes{tri.v[0], tri.v[1], tri.v[2], 0, 0, 0};
        for (int k = 0; k < 3; ++k) {
            const int a = tri.v[k];
            const int b = tri.v[(k + 1) % 3];
            const auto key = std::make_pair(std::min(a, b), std::max(a, b));
            auto [it, inserted] = edge_ids.try_emplace(key, vmap.num_vertices + static_cast<int>(vmap.edges.size()));
            if (inserted) {
                vmap.edges.push_back({key.first, key.second});
                vmap.node_coords.push_back((mesh.vertices[a] + mesh.vertices[b]) * 0.5);
            }
            nodes[3 + k] = it->second;
        }
        vmap.cell_nodes.push_back(nodes);
    }

    const int nn = vmap.num_nodes();
    vmap.dirichlet_mask.assign(static_cast<std::size_t>(2 * nn), 0);
    vmap.node_on_interface.assign(static_cast<std::size_t>(nn), 0);

    for (int node = 0; node < nn; ++node)
        if (on_box_boundary(mesh.outer_box, vmap.node_coords[node])) {
            vmap.dirichlet_mask[VelocityDofMap::dof(node, 0)] = 1;
            vmap.dirichlet_mask[VelocityDofMap::dof(node, 1)] = 1;
        }

    // Interface nodes: vertices and midpoints of interface edges. A diagonal
    // with both endpoints on the interface is not itself on it.
    for (const auto& e : mesh.interface_edges) {
        vmap.node_on_interface[e.v[0]] = 1;
        vmap.node_on_interface[e.v[1]] = 1;
        const auto key = std::make_pair(std::min(e.v[0], e.v[1]), std::max(e.v[0], e.v[1]));
        vmap.node_on_interface[edge_ids.at(key)] = 1;
    }
    for (int node = 0; node < nn; ++node)
        if (vmap.node_on_interface[node]) {
            vmap.interface_dofs.push_back(VelocityDofMap::dof(node, 0));
            vmap.interface_dofs.push_back(VelocityDofMap::dof(node, 1));
        }
    return vmap;
}

PressureDofMap build_pressure_space(const Mesh& mesh, PressureCoupling coupling) {
    PressureDofMap pmap;
    pmap.coupling = coupling;
    const int nv = static_cast<int>(mesh.vertices.size());
    pmap.dof_coords = mesh.vertices;
    pmap.dof_side.assign(static_cast<std::size_t>(nv), Subdomain::Out);
    for (const auto& tri : mesh.triangles)
        if (tri.label == Subdomain::In)
            for (int v : tri.v) pmap.dof_side[v] = Subdomain::In;

    std::map<int, int> out_copy;
    if (coupling == PressureCoupling::SplitAtInterface) {
        std::set<int> iface;
        for (const auto& e : mesh.interface_edges) iface.insert(e.v.begin(), e.v.end());
        for (int v : iface) {
            pmap.dof_side[v] = Subdomain::In;
            out_copy[v] = static_cast<int>(pmap.dof_coords.size());
            pmap.dof_coords.push_back(mesh.vertices[v]);
            pmap.dof_side.push_back(Subdomain::Out);
        }
    }

    pmap.mean_vector = Vector::Zero(pmap.num_dofs());
    pmap.cell_dofs.reserve(mesh.triangles.size());
    for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t) {
        const auto& tri = mesh.triangles[t];
        std::array<int, 3> d{};
        for (int k = 0; k < 3; ++k) {
            d[k] = tri.v[k];
            if (tri.label == Subdomain::Out) {
                auto it = out_copy.find(tri.v[k]);
                if (it != out_copy.end()) d[k] = it->second;
            }
        }
        const double area = mesh.triangle_area(t);
        for (int k = 0; k < 3; ++k) pmap.mean_vector[d[k]] += area / 3.0;
        pmap.cell_dofs.push_back(d);
    }
    return pmap;
}

Vec2 TraceMap::evaluate(const Vector& u, int edge, int q) const {
    const auto& e = edges[edge];
    Vec2 r;
    for (int k = 0; k < 3; ++k) {
        const double phi = e.shape[q][k];
        r.x += phi * u[VelocityDofMap::dof(e.nodes[k], 0)];
        r.y += phi * u[VelocityDofMap::dof(e.nodes[k], 1)];
    }
    return r;
}

TraceMap build_trace_map(const Mesh& mesh, const VelocityDofMap& vmap, int quad_points) {
    if (quad_points < 1) throw std::invalid_argument("trace map: quadrature order must be at least 1");
    TraceMap tm;
    tm.quad_points = quad_points;
    const auto rule = gauss_legendre(quad_points);
    std::set<int> nodes;
    for (const auto& ie : mesh.interface_edges) {
        TraceEdge e;
        const auto& cn = vmap.cell_nodes[ie.in_triangle];
        int mid = -1;
        for (int k = 0; k < 3; ++k) {
            const int a = cn[k], b = cn[(k + 1) % 3];
            if ((a == ie.v[0] && b == ie.v[1]) || (a == ie.v[1] && b == ie.v[0])) mid = cn[3 + k];
        }
        if (mid < 0) throw std::logic_error("trace map: interface edge not found in its IN triangle");
        e.nodes = {ie.v[0], ie.v[1], mid};
        const Vec2 a = mesh.vertices[ie.v[0]];
        const Vec2 b = mesh.vertices[ie.v[1]];
        e.length = norm(b - a);
        e.tangent = (b - a) * (1.0 / e.length);
        e.normal = ie.normal;
        for (const auto& q : rule) {
            const double s = q.s;
            e.points.push_back(a + (b - a) * s);
            e.arclength.push_back(ie.arclength_start + s * e.length);
            e.weights.push_back(q.weight * e.length);
            e.shape.push_back({(1.0 - s) * (1.0 - 2.0 * s), s * (2.0 * s - 1.0), 4.0 * s * (1.0 - s)});
        }
        nodes.insert(e.nodes.begin(), e.nodes.end());
        tm.edges.push_back(std::move(e));
    }
    tm.interface_nodes.assign(nodes.begin(), nodes.end());
    return tm;
}

Vector interpolate_velocity(const VelocityDofMap& vmap, const VectorFieldFn& field) {
    Vector u(vmap.num_dofs());
    for (int node = 0; node < vmap.num_nodes(); ++node) {
        const Vec2 v = field(vmap.node_coords[node]);
        u[VelocityDofMap::dof(node, 0)] = v.x;
        u[VelocityDofMap::dof(node, 1)] = v.y;
    }
    return u;
}

void apply_dirichlet_mask(const VelocityDofMap& vmap, Vector& u) {
    for (int d = 0; d < vmap.num_dofs(); ++d)
        if (vmap.dirichlet_mask[d]) u[d] = 0.0;
}

Vec2 evaluate_velocity(const VelocityDofMap& vmap, const Vector& u, int t, const std::array<double, 3>& bary) {
    const auto phi = p2_values(bary);
    const auto& nodes = vmap.cell_nodes[t];
    Vec2 r;
    for (int k = 0; k < 6; ++k) {
        r.x += phi[k] * u[VelocityDofMap::dof(nodes[k], 0)];
        r.y += phi[k] * u[VelocityDofMap::dof(nodes[k], 1)];
    }
    return r;
}

}  // namespace fricflow
