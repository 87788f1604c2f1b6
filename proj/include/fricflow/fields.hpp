#pragma once

#include <string>
#include <vector>

#include "fricflow/mesh.hpp"
#include "fricflow/types.hpp"

namespace fricflow {

struct TraceMap;

// Threshold g(t, s) on the interface, s the arclength from the lower-left
// inner corner. g = 0 is admitted (pure Neumann coupling).
struct FrictionSpec {
    enum class Kind { Constant, Expression, Table };
    Kind kind = Kind::Constant;
    double value = 1.0;
    // Expression tags:
    //   arclength_sine  value * (1 + amplitude * sin(2 pi frequency s / |interface|))
    //   time_sine       value * (1 + amplitude * sin(2 pi frequency t))
    //   time_ramp       value * (1 + amplitude * t)
    std::string expression;
    double amplitude = 0.0;
    double frequency = 1.0;
    // Table: one value per interface quadrature point, edge-major.
    std::vector<double> samples;

    static FrictionSpec constant(double g) { return {Kind::Constant, g, {}, 0.0, 1.0, {}}; }
};

// g at every interface quadrature point at time t (edge-major). Throws
// std::invalid_argument on negative samples, unknown tags, or a table of the
// wrong size.
std::vector<double> sample_friction(const FrictionSpec& spec, const TraceMap& trace, double t);

// Named vector fields used for body forces, initial data and loads.
struct VectorFieldSpec {
    // zero | constant | rotation | vortex | mms_velocity | mms_force
    std::string shape = "zero";
    double amplitude = 1.0;
    Vec2 direction{1.0, 0.0};  // constant fields
    // steady | cos: the field is multiplied by cos(omega t)
    std::string time_mode = "steady";
    double omega = 0.0;
};

// Geometry and viscosity needed by the manufactured fields.
struct FieldContext {
    Box outer_box;
    Box inner_box;
    double nu = 1.0;
};

Vec2 evaluate_field(const VectorFieldSpec& spec, const FieldContext& ctx, double t, const Vec2& x);
bool is_known_field_shape(const std::string& shape);

// Manufactured Stokes solution: the stream function ((x-a)(b-x)(y-c)(d-y))^2
// on the inner box, zero outside, so u = 0 on the interface and in the outer
// subdomain. The pressure jumps by one across the interface; any large g
// keeps the interface stuck.
namespace manufactured {
Vec2 velocity(const FieldContext& ctx, const Vec2& x);
Mat2 velocity_gradient(const FieldContext& ctx, const Vec2& x);  // d u_i / d x_j, row-major
double pressure(const FieldContext& ctx, const Vec2& x);
Vec2 force(const FieldContext& ctx, const Vec2& x);  // -nu lap u + grad p
}  // namespace manufactured

}  // namespace fricflow
