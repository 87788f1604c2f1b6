#pragma once

#include <random>

#include "fricflow/discretization.hpp"
#include "fricflow/element.hpp"

namespace testing {

using namespace fricflow;

inline Discretization make_disc(int n, double nu = 1.0,
                                PressureCoupling coupling = PressureCoupling::SplitAtInterface) {
    MeshConfig mc;
    mc.n = n;
    return Discretization::build(mc, nu, coupling);
}

// Random coefficient vector with the Dirichlet dofs zeroed.
inline Vector random_velocity(const Discretization& d, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    Vector v(d.num_velocity());
    for (int i = 0; i < v.size(); ++i) v[i] = unit(rng);
    apply_dirichlet_mask(d.vmap, v);
    return v;
}

// Point evaluation of a discrete velocity by brute-force triangle search.
inline Vec2 evaluate_at(const Discretization& d, const Vector& u, const Vec2& x) {
    for (int t = 0; t < static_cast<int>(d.mesh.triangles.size()); ++t) {
        const auto geo = triangle_geometry(d.mesh, t);
        const auto b = barycentric(geo, x);
        if (b[0] >= -1e-12 && b[1] >= -1e-12 && b[2] >= -1e-12) return evaluate_velocity(d.vmap, u, t, b);
    }
    return {};
}

}  // namespace testing
