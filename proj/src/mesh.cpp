#include "fricflow/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace fricflow {

namespace {

constexpr double kGridTol = 1e-9;

// Number of grid cells covering `length` at resolution n, or -1 when the
// length is not a whole number of cells.
int cells_for(double length, int n) {
    const double c = length * n;
    const double r = std::round(c);
    if (std::abs(c - r) > kGridTol * std::max(1.0, std::abs(c))) return -1;
    return static_cast<int>(r);
}

bool strictly_inside(const Box& inner, const Box& outer) {
    return inner.xmin > outer.xmin && inner.ymin > outer.ymin && inner.xmax < outer.xmax &&
           inner.ymax < outer.ymax && inner.xmin < inner.xmax && inner.ymin < inner.ymax;
}

double signed_area(const Vec2& a, const Vec2& b, const Vec2& c) {
    return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

std::pair<int, int> edge_key(int a, int b) { return {std::min(a, b), std::max(a, b)}; }

struct EdgeSide {
    int triangle;
    int from;
    int to;
};

std::map<std::pair<int, int>, std::vector<EdgeSide>> edge_sides(const Mesh& mesh) {
    std::map<std::pair<int, int>, std::vector<EdgeSide>> sides;
    for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t) {
        const auto& v = mesh.triangles[t].v;
        for (int k = 0; k < 3; ++k) {
            const int a = v[k];
            const int b = v[(k + 1) % 3];
            sides[edge_key(a, b)].push_back({t, a, b});
        }
    }
    return sides;
}

void fnv1a(std::uint64_t& h, const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 1099511628211ULL;
    }
}

}  // namespace

double Mesh::triangle_area(int t) const {
    const auto& v = triangles[t].v;
    return signed_area(vertices[v[0]], vertices[v[1]], vertices[v[2]]);
}

double Mesh::subdomain_area(Subdomain s) const {
    double a = 0.0;
    for (int t = 0; t < static_cast<int>(triangles.size()); ++t)
        if (triangles[t].label == s) a += triangle_area(t);
    return a;
}

double Mesh::interface_length() const {
    double len = 0.0;
    for (const auto& e : interface_edges) len += norm(vertices[e.v[1]] - vertices[e.v[0]]);
    return len;
}

std::uint64_t Mesh::hash() const {
    std::uint64_t h = 14695981039346656037ULL;
    for (const auto& p : vertices) {
        fnv1a(h, &p.x, sizeof(double));
        fnv1a(h, &p.y, sizeof(double));
    }
    for (const auto& t : triangles) {
        fnv1a(h, t.v.data(), sizeof(int) * 3);
        const int label = static_cast<int>(t.label);
        fnv1a(h, &label, sizeof(int));
    }
    return h;
}

Mesh build_two_domain_mesh(const MeshConfig& cfg) {
    const Box& outer = cfg.outer_box;
    const Box& inner = cfg.inner_box;
    if (cfg.n <= 0) throw std::invalid_argument("mesh: n must be a positive integer");
    if (!strictly_inside(inner, outer))
        throw std::invalid_argument("mesh: inner_box must lie strictly inside outer_box");

    const int nx = cells_for(outer.width(), cfg.n);
    const int ny = cells_for(outer.height(), cfg.n);
    if (nx <= 0 || ny <= 0)
        throw std::invalid_argument("mesh: outer_box extents are not multiples of 1/n");

    const int i0 = cells_for(inner.xmin - outer.xmin, cfg.n);
    const int i1 = cells_for(inner.xmax - outer.xmin, cfg.n);
    const int j0 = cells_for(inner.ymin - outer.ymin, cfg.n);
    const int j1 = cells_for(inner.ymax - outer.ymin, cfg.n);
    if (i0 < 0 || i1 < 0 || j0 < 0 || j1 < 0) {
        std::ostringstream msg;
        msg << "mesh: inner_box corners are not on grid lines of the n=" << cfg.n
            << " subdivision (cell size " << 1.0 / cfg.n << "); the interface must be a union of mesh edges";
        throw std::invalid_argument(msg.str());
    }
    if (i1 - i0 < 2 || j1 - j0 < 2) {
        std::ostringstream msg;
        msg << "mesh: inner_box spans " << (i1 - i0) << "x" << (j1 - j0)
            << " cells at n=" << cfg.n << "; at least 2 cells per side are required";
        throw std::invalid_argument(msg.str());
    }

    Mesh mesh;
    mesh.outer_box = outer;
    mesh.inner_box = inner;
    const double h = 1.0 / cfg.n;
    const auto vid = [nx](int i, int j) { return j * (nx + 1) + i; };

    mesh.vertices.reserve(static_cast<std::size_t>((nx + 1) * (ny + 1)));
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i) {
            // Snap box boundaries so interface and boundary tests are exact.
            double x = (i == nx) ? outer.xmax : outer.xmin + i * h;
            double y = (j == ny) ? outer.ymax : outer.ymin + j * h;
            if (i == i0) x = inner.xmin;
            if (i == i1) x = inner.xmax;
            if (j == j0) y = inner.ymin;
            if (j == j1) y = inner.ymax;
            mesh.vertices.push_back({x, y});
            if (i == 0 || j == 0 || i == nx || j == ny) mesh.dirichlet_vertices.push_back(vid(i, j));
        }

    mesh.triangles.reserve(static_cast<std::size_t>(2 * nx * ny));
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const bool in = i >= i0 && i < i1 && j >= j0 && j < j1;
            const Subdomain label = in ? Subdomain::In : Subdomain::Out;
            const int v00 = vid(i, j), v10 = vid(i + 1, j), v01 = vid(i, j + 1), v11 = vid(i + 1, j + 1);
            mesh.triangles.push_back({{v00, v10, v11}, label});
            mesh.triangles.push_back({{v00, v11, v01}, label});
        }

    // Interface edges, oriented as in the adjacent IN triangle so that the
    // right-hand normal points into the outer subdomain.
    std::map<int, InterfaceEdge> by_start;
    for (const auto& [key, sides] : edge_sides(mesh)) {
        if (sides.size() != 2) continue;
        const auto& s0 = sides[0];
        const auto& s1 = sides[1];
        const Subdomain l0 = mesh.triangles[s0.triangle].label;
        const Subdomain l1 = mesh.triangles[s1.triangle].label;
        if (l0 == l1) continue;
        const EdgeSide& in_side = (l0 == Subdomain::In) ? s0 : s1;
        const EdgeSide& out_side = (l0 == Subdomain::In) ? s1 : s0;
        InterfaceEdge e;
        e.v = {in_side.from, in_side.to};
        const Vec2 d = mesh.vertices[e.v[1]] - mesh.vertices[e.v[0]];
        const double len = norm(d);
        e.normal = {d.y / len, -d.x / len};
        e.in_triangle = in_side.triangle;
        e.out_triangle = out_side.triangle;
        by_start[e.v[0]] = e;
    }

    // Walk the closed curve counterclockwise from the lower-left corner.
    const int start = vid(i0, j0);
    int cur = start;
    double s = 0.0;
    do {
        auto it = by_start.find(cur);
        if (it == by_start.end()) throw std::logic_error("mesh: interface curve is not closed");
        InterfaceEdge e = it->second;
        e.arclength_start = s;
        s += norm(mesh.vertices[e.v[1]] - mesh.vertices[e.v[0]]);
        mesh.interface_edges.push_back(e);
        cur = e.v[1];
    } while (cur != start && mesh.interface_edges.size() <= by_start.size());

    return mesh;
}

ValidationReport validate(const Mesh& mesh) {
    ValidationReport report;
    auto add = [&](const std::string& msg) { report.violations.push_back(msg); };
    const int nv = static_cast<int>(mesh.vertices.size());

    for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t) {
        for (int v : mesh.triangles[t].v)
            if (v < 0 || v >= nv) {
                add("triangle " + std::to_string(t) + ": vertex index out of range");
                return report;
            }
        if (mesh.triangle_area(t) <= 0.0) add("triangle " + std::to_string(t) + ": negative signed area");
    }

    const auto sides = edge_sides(mesh);
    std::set<int> dirichlet(mesh.dirichlet_vertices.begin(), mesh.dirichlet_vertices.end());
    std::map<int, int> degree;
    std::map<int, int> next;
    for (std::size_t k = 0; k < mesh.interface_edges.size(); ++k) {
        const auto& e = mesh.interface_edges[k];
        const std::string tag = "interface edge " + std::to_string(k);
        auto it = sides.find(edge_key(e.v[0], e.v[1]));
        if (it == sides.end() || it->second.size() != 2) {
            add(tag + ": not shared by exactly two triangles");
        } else {
            int n_in = 0, n_out = 0;
            for (const auto& sd : it->second)
                (mesh.triangles[sd.triangle].label == Subdomain::In ? n_in : n_out)++;
            if (n_in != 1 || n_out != 1) add(tag + ": needs exactly one IN and one OUT neighbour");
        }
        if (std::abs(norm(e.normal) - 1.0) > 1e-12) add(tag + ": normal is not unit length");
        if (e.out_triangle >= 0 && e.out_triangle < static_cast<int>(mesh.triangles.size())) {
            const auto& tv = mesh.triangles[e.out_triangle].v;
            const Vec2 c = (mesh.vertices[tv[0]] + mesh.vertices[tv[1]] + mesh.vertices[tv[2]]) * (1.0 / 3.0);
            const Vec2 m = (mesh.vertices[e.v[0]] + mesh.vertices[e.v[1]]) * 0.5;
            if (dot(e.normal, c - m) <= 0.0) add(tag + ": normal does not point into the outer subdomain");
        }
        for (int v : e.v) {
            ++degree[v];
            if (dirichlet.count(v)) add(tag + ": touches the Dirichlet boundary");
        }
        next[e.v[0]] = e.v[1];
    }

    bool closed = !mesh.interface_edges.empty();
    for (const auto& [v, d] : degree)
        if (d != 2) closed = false;
    if (closed) {
        // Single loop through every interface vertex.
        const int start = mesh.interface_edges.front().v[0];
        int cur = start;
        std::size_t steps = 0;
        do {
            auto it = next.find(cur);
            if (it == next.end()) {
                closed = false;
                break;
            }
            cur = it->second;
            ++steps;
        } while (cur != start && steps <= mesh.interface_edges.size());
        if (cur != start || steps != mesh.interface_edges.size()) closed = false;
    }
    if (!closed) add("interface not closed");

    // Every interface vertex must see both subdomains.
    std::map<int, std::pair<bool, bool>> seen;
    for (const auto& [v, d] : degree) seen[v] = {false, false};
    for (const auto& tri : mesh.triangles)
        for (int v : tri.v) {
            auto it = seen.find(v);
            if (it == seen.end()) continue;
            (tri.label == Subdomain::In ? it->second.first : it->second.second) = true;
        }
    for (const auto& [v, flags] : seen)
        if (!flags.first || !flags.second)
            add("interface vertex " + std::to_string(v) + ": not shared by IN and OUT triangles");

    return report;
}

void write_mesh(std::ostream& os, const Mesh& mesh) {
    char buf[128];
    for (const auto& p : mesh.vertices) {
        std::snprintf(buf, sizeof buf, "v %.17g %.17g\n", p.x, p.y);
        os << buf;
    }
    for (const auto& t : mesh.triangles)
        os << "t " << t.v[0] << ' ' << t.v[1] << ' ' << t.v[2] << ' '
           << (t.label == Subdomain::In ? "in" : "out") << '\n';
    for (const auto& e : mesh.interface_edges) {
        std::snprintf(buf, sizeof buf, "e %d %d %.17g %.17g\n", e.v[0], e.v[1], e.normal.x, e.normal.y);
        os << buf;
    }
}

}  // namespace fricflow
