#include "fricflow/assembly.hpp"

#include <stdexcept>

#include "fricflow/element.hpp"
#include "fricflow/quadrature.hpp"
#include "fricflow/regularization.hpp"

namespace fricflow {

namespace {

SparseOperator from_triplets(int rows, int cols, const std::vector<Triplet>& trips) {
    SparseOperator op(rows, cols);
    op.setFromTriplets(trips.begin(), trips.end());
    op.makeCompressed();
    return op;
}

// Values and gradients of the P2 basis at every assembly quadrature point.
struct CellBasis {
    TriangleGeometry geo;
    std::vector<std::array<double, 6>> phi;
    std::vector<std::array<Vec2, 6>> grad;
    std::vector<double> jxw;
};

CellBasis cell_basis(const Mesh& mesh, int t) {
    CellBasis cb;
    cb.geo = triangle_geometry(mesh, t);
    for (const auto& q : triangle_rule_degree4()) {
        cb.phi.push_back(p2_values(q.bary));
        cb.grad.push_back(p2_gradients(q.bary, cb.geo));
        cb.jxw.push_back(q.weight * cb.geo.area);
    }
    return cb;
}

double comp(const Vec2& v, int c) { return c == 0 ? v.x : v.y; }

template <class Kernel>
SparseOperator assemble_velocity_block(const Mesh& mesh, const VelocityDofMap& vmap, Kernel&& kernel) {
    std::vector<Triplet> trips;
    trips.reserve(mesh.triangles.size() * 144);
    double local[12][12];
    for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t) {
        const CellBasis cb = cell_basis(mesh, t);
        for (auto& row : local)
            for (double& v : row) v = 0.0;
        for (std::size_t q = 0; q < cb.jxw.size(); ++q) kernel(t, cb, q, local);
        const auto dofs = vmap.cell_dofs(t);
        for (int i = 0; i < 12; ++i)
            for (int j = 0; j < 12; ++j)
                if (local[i][j] != 0.0) trips.emplace_back(dofs[i], dofs[j], local[i][j]);
    }
    return from_triplets(vmap.num_dofs(), vmap.num_dofs(), trips);
}

}  // namespace

SparseOperator assemble_viscous(const Mesh& mesh, const VelocityDofMap& vmap, double nu) {
    if (!(nu > 0.0)) throw std::invalid_argument("assemble_viscous: nu must be positive");
    // 2 nu e(N_k e_c) : e(N_l e_d) = nu (delta_cd grad N_k . grad N_l + d_d N_k d_c N_l)
    return assemble_velocity_block(mesh, vmap, [nu](int, const CellBasis& cb, std::size_t q, double (&m)[12][12]) {
        const auto& g = cb.grad[q];
        for (int k = 0; k < 6; ++k)
            for (int l = 0; l < 6; ++l)
                for (int c = 0; c < 2; ++c)
                    for (int d = 0; d < 2; ++d) {
                        double v = comp(g[k], d) * comp(g[l], c);
                        if (c == d) v += dot(g[k], g[l]);
                        m[2 * k + c][2 * l + d] += nu * v * cb.jxw[q];
                    }
    });
}

SparseOperator assemble_stiffness(const Mesh& mesh, const VelocityDofMap& vmap) {
    return assemble_velocity_block(mesh, vmap, [](int, const CellBasis& cb, std::size_t q, double (&m)[12][12]) {
        const auto& g = cb.grad[q];
        for (int k = 0; k < 6; ++k)
            for (int l = 0; l < 6; ++l) {
                const double v = dot(g[k], g[l]) * cb.jxw[q];
                m[2 * k][2 * l] += v;
                m[2 * k + 1][2 * l + 1] += v;
            }
    });
}

SparseOperator assemble_mass(const Mesh& mesh, const VelocityDofMap& vmap) {
    return assemble_velocity_block(mesh, vmap, [](int, const CellBasis& cb, std::size_t q, double (&m)[12][12]) {
        const auto& p = cb.phi[q];
        for (int k = 0; k < 6; ++k)
            for (int l = 0; l < 6; ++l) {
                const double v = p[k] * p[l] * cb.jxw[q];
                m[2 * k][2 * l] += v;
                m[2 * k + 1][2 * l + 1] += v;
            }
    });
}

SparseOperator assemble_convection_skew(const Mesh& mesh, const VelocityDofMap& vmap, const Vector& w) {
    std::vector<Triplet> trips;
    trips.reserve(mesh.triangles.size() * 72);
    for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t) {
        const CellBasis cb = cell_basis(mesh, t);
        const auto& nodes = vmap.cell_nodes[t];
        // c[k][l] = ((w . grad N_l), N_k); the vector operator is c (x) I.
        double c[6][6] = {};
        for (std::size_t q = 0; q < cb.jxw.size(); ++q) {
            Vec2 wq;
            for (int k = 0; k < 6; ++k) {
                wq.x += cb.phi[q][k] * w[VelocityDofMap::dof(nodes[k], 0)];
                wq.y += cb.phi[q][k] * w[VelocityDofMap::dof(nodes[k], 1)];
            }
            for (int k = 0; k < 6; ++k)
                for (int l = 0; l < 6; ++l) c[k][l] += dot(wq, cb.grad[q][l]) * cb.phi[q][k] * cb.jxw[q];
        }
        const auto dofs = vmap.cell_dofs(t);
        for (int k = 0; k < 6; ++k)
            for (int l = 0; l < 6; ++l) {
                if (k == l) continue;
                const double v = 0.5 * (c[k][l] - c[l][k]);
                if (v == 0.0) continue;
                for (int d = 0; d < 2; ++d) trips.emplace_back(dofs[2 * k + d], dofs[2 * l + d], v);
            }
    }
    return from_triplets(vmap.num_dofs(), vmap.num_dofs(), trips);
}

SparseOperator assemble_convection_linearization(const Mesh& mesh, const VelocityDofMap& vmap, const Vector& u) {
    // G_(k,c),(l,d) = 1/2 (N_l (d_d u_c N_k - u_c d_d N_k))
    return assemble_velocity_block(mesh, vmap, [&vmap, &u](int t, const CellBasis& cb, std::size_t q,
                                                           double (&m)[12][12]) {
        const auto& nodes = vmap.cell_nodes[t];
        Vec2 uq;
        Mat2 du{};  // du[c*2+d] = d_d u_c
        for (int k = 0; k < 6; ++k) {
            const double ux = u[VelocityDofMap::dof(nodes[k], 0)];
            const double uy = u[VelocityDofMap::dof(nodes[k], 1)];
            uq.x += cb.phi[q][k] * ux;
            uq.y += cb.phi[q][k] * uy;
            du[0] += cb.grad[q][k].x * ux;
            du[1] += cb.grad[q][k].y * ux;
            du[2] += cb.grad[q][k].x * uy;
            du[3] += cb.grad[q][k].y * uy;
        }
        const auto& p = cb.phi[q];
        const auto& g = cb.grad[q];
        for (int k = 0; k < 6; ++k)
            for (int l = 0; l < 6; ++l)
                for (int c = 0; c < 2; ++c)
                    for (int d = 0; d < 2; ++d) {
                        const double v = du[2 * c + d] * p[k] - comp(uq, c) * comp(g[k], d);
                        m[2 * k + c][2 * l + d] += 0.5 * p[l] * v * cb.jxw[q];
                    }
    });
}

SparseOperator assemble_divergence(const Mesh& mesh, const VelocityDofMap& vmap, const PressureDofMap& pmap) {
    std::vector<Triplet> trips;
    trips.reserve(mesh.triangles.size() * 36);
    for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t) {
        const CellBasis cb = cell_basis(mesh, t);
        const auto vd = vmap.cell_dofs(t);
        const auto& pd = pmap.cell_dofs[t];
        const auto& rule = triangle_rule_degree4();
        double local[3][12] = {};
        for (std::size_t q = 0; q < rule.size(); ++q)
            for (int i = 0; i < 3; ++i) {
                const double psi = rule[q].bary[i];
                for (int k = 0; k < 6; ++k) {
                    local[i][2 * k] -= cb.grad[q][k].x * psi * cb.jxw[q];
                    local[i][2 * k + 1] -= cb.grad[q][k].y * psi * cb.jxw[q];
                }
            }
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 12; ++j)
                if (local[i][j] != 0.0) trips.emplace_back(pd[i], vd[j], local[i][j]);
    }
    return from_triplets(pmap.num_dofs(), vmap.num_dofs(), trips);
}

SparseOperator assemble_pressure_mass(const Mesh& mesh, const PressureDofMap& pmap) {
    std::vector<Triplet> trips;
    for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t) {
        const double area = mesh.triangle_area(t);
        const auto& pd = pmap.cell_dofs[t];
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) trips.emplace_back(pd[i], pd[j], area * (i == j ? 2.0 : 1.0) / 12.0);
    }
    return from_triplets(pmap.num_dofs(), pmap.num_dofs(), trips);
}

FrictionAssembly assemble_friction(const TraceMap& trace, const Vector& u, const std::vector<double>& g, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("assemble_friction: eps must be positive");
    if (g.size() != trace.num_points()) throw std::invalid_argument("assemble_friction: g sample count mismatch");
    const int n = static_cast<int>(u.size());
    FrictionAssembly fa;
    fa.residual = Vector::Zero(n);
    std::vector<Triplet> trips;
    trips.reserve(trace.num_points() * 36);
    std::size_t idx = 0;
    for (int e = 0; e < static_cast<int>(trace.edges.size()); ++e) {
        const auto& edge = trace.edges[e];
        for (int q = 0; q < static_cast<int>(edge.points.size()); ++q, ++idx) {
            const double gw = g[idx] * edge.weights[q];
            if (gw < 0.0) throw std::invalid_argument("assemble_friction: threshold g must be nonnegative");
            if (gw == 0.0) continue;
            const Vec2 uq = trace.evaluate(u, e, q);
            const Vec2 a = alpha_eps(uq, eps);
            const Mat2 b = beta_eps(uq, eps);
            const auto& sh = edge.shape[q];
            for (int k = 0; k < 3; ++k) {
                fa.residual[VelocityDofMap::dof(edge.nodes[k], 0)] += gw * a.x * sh[k];
                fa.residual[VelocityDofMap::dof(edge.nodes[k], 1)] += gw * a.y * sh[k];
                for (int l = 0; l < 3; ++l)
                    for (int c = 0; c < 2; ++c)
                        for (int d = 0; d < 2; ++d)
                            trips.emplace_back(VelocityDofMap::dof(edge.nodes[k], c),
                                               VelocityDofMap::dof(edge.nodes[l], d), gw * sh[k] * b[2 * c + d] * sh[l]);
            }
        }
    }
    fa.jacobian = from_triplets(n, n, trips);
    return fa;
}

FrictionAssembly assemble_friction(const TraceMap& trace, const Vector& u, const FrictionSpec& spec, double t,
                                   double eps) {
    return assemble_friction(trace, u, sample_friction(spec, trace, t), eps);
}

Vector assemble_load(const Mesh& mesh, const VelocityDofMap& vmap, const std::function<Vec2(const Vec2&)>& f) {
    Vector b = Vector::Zero(vmap.num_dofs());
    for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t) {
        const CellBasis cb = cell_basis(mesh, t);
        const auto dofs = vmap.cell_dofs(t);
        const auto& rule = triangle_rule_degree4();
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const Vec2 fq = f(cb.geo.point(rule[q].bary));
            for (int k = 0; k < 6; ++k) {
                b[dofs[2 * k]] += fq.x * cb.phi[q][k] * cb.jxw[q];
                b[dofs[2 * k + 1]] += fq.y * cb.phi[q][k] * cb.jxw[q];
            }
        }
    }
    return b;
}

Vector assemble_load(const Mesh& mesh, const VelocityDofMap& vmap, const VectorFieldSpec& f, const FieldContext& ctx,
                     double t) {
    if (f.shape == "zero") return Vector::Zero(vmap.num_dofs());
    return assemble_load(mesh, vmap, [&](const Vec2& x) { return evaluate_field(f, ctx, t, x); });
}

double eval_j(const TraceMap& trace, const Vector& u, const std::vector<double>& g) {
    double j = 0.0;
    std::size_t idx = 0;
    for (int e = 0; e < static_cast<int>(trace.edges.size()); ++e)
        for (int q = 0; q < static_cast<int>(trace.edges[e].points.size()); ++q, ++idx)
            j += g[idx] * trace.edges[e].weights[q] * norm(trace.evaluate(u, e, q));
    return j;
}

double eval_j_eps(const TraceMap& trace, const Vector& u, const std::vector<double>& g, double eps) {
    double j = 0.0;
    std::size_t idx = 0;
    for (int e = 0; e < static_cast<int>(trace.edges.size()); ++e)
        for (int q = 0; q < static_cast<int>(trace.edges[e].points.size()); ++q, ++idx)
            j += g[idx] * trace.edges[e].weights[q] * rho_eps(trace.evaluate(u, e, q), eps);
    return j;
}

double eval_j(const TraceMap& trace, const Vector& u, const FrictionSpec& spec, double t) {
    return eval_j(trace, u, sample_friction(spec, trace, t));
}

double eval_j_eps(const TraceMap& trace, const Vector& u, const FrictionSpec& spec, double t, double eps) {
    return eval_j_eps(trace, u, sample_friction(spec, trace, t), eps);
}

SparseOperator mask_dirichlet(const SparseOperator& op, const std::vector<char>& mask) {
    std::vector<Triplet> trips;
    trips.reserve(static_cast<std::size_t>(op.nonZeros()));
    for (int r = 0; r < op.outerSize(); ++r) {
        if (mask[r]) {
            trips.emplace_back(r, r, 1.0);
            continue;
        }
        for (SparseOperator::InnerIterator it(op, r); it; ++it)
            if (!mask[it.col()]) trips.emplace_back(r, it.col(), it.value());
    }
    return from_triplets(static_cast<int>(op.rows()), static_cast<int>(op.cols()), trips);
}

Vector assemble_interface_normal(const TraceMap& trace, int num_dofs) {
    Vector nvec = Vector::Zero(num_dofs);
    for (const auto& e : trace.edges)
        for (std::size_t q = 0; q < e.points.size(); ++q)
            for (int k = 0; k < 3; ++k) {
                nvec[VelocityDofMap::dof(e.nodes[k], 0)] += e.weights[q] * e.shape[q][k] * e.normal.x;
                nvec[VelocityDofMap::dof(e.nodes[k], 1)] += e.weights[q] * e.shape[q][k] * e.normal.y;
            }
    return nvec;
}

Vector lumped_interface_mass(const TraceMap& trace, int num_nodes) {
    Vector w = Vector::Zero(num_nodes);
    for (const auto& e : trace.edges)
        for (std::size_t q = 0; q < e.points.size(); ++q)
            for (int k = 0; k < 3; ++k) w[e.nodes[k]] += e.weights[q] * e.shape[q][k];
    return w;
}

}  // namespace fricflow
