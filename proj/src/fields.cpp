#include "fricflow/fields.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fricflow/spaces.hpp"

namespace fricflow {

std::vector<double> sample_friction(const FrictionSpec& spec, const TraceMap& trace, double t) {
    std::vector<double> g;
    g.reserve(trace.num_points());
    double perimeter = 0.0;
    for (const auto& e : trace.edges) perimeter += e.length;

    if (spec.kind == FrictionSpec::Kind::Table) {
        if (spec.samples.size() != trace.num_points())
            throw std::invalid_argument("friction: table has " + std::to_string(spec.samples.size()) +
                                        " samples, interface has " + std::to_string(trace.num_points()) +
                                        " quadrature points");
        g = spec.samples;
    } else {
        for (const auto& e : trace.edges)
            for (std::size_t q = 0; q < e.points.size(); ++q) {
                double v = spec.value;
                if (spec.kind == FrictionSpec::Kind::Expression) {
                    constexpr double two_pi = 2.0 * std::numbers::pi;
                    if (spec.expression == "arclength_sine")
                        v *= 1.0 + spec.amplitude * std::sin(two_pi * spec.frequency * e.arclength[q] / perimeter);
                    else if (spec.expression == "time_sine")
                        v *= 1.0 + spec.amplitude * std::sin(two_pi * spec.frequency * t);
                    else if (spec.expression == "time_ramp")
                        v *= 1.0 + spec.amplitude * t;
                    else
                        throw std::invalid_argument("friction: unknown expression '" + spec.expression + "'");
                }
                g.push_back(v);
            }
    }
    for (double v : g)
        if (!(v >= 0.0)) throw std::invalid_argument("friction: threshold g must be nonnegative");
    return g;
}

namespace {

// Dense polynomial, coefficient k multiplies x^k.
struct Poly {
    std::vector<double> c;

    Poly operator*(const Poly& o) const {
        Poly r{std::vector<double>(c.size() + o.c.size() - 1, 0.0)};
        for (std::size_t i = 0; i < c.size(); ++i)
            for (std::size_t j = 0; j < o.c.size(); ++j) r.c[i + j] += c[i] * o.c[j];
        return r;
    }
    Poly derivative() const {
        if (c.size() <= 1) return {{0.0}};
        Poly r{std::vector<double>(c.size() - 1)};
        for (std::size_t k = 1; k < c.size(); ++k) r.c[k - 1] = c[k] * static_cast<double>(k);
        return r;
    }
    double operator()(double x) const {
        double r = 0.0;
        for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * x + *it;
        return r;
    }
};

// ((x - a) (b - x))^2 and its first three derivatives.
struct Profile {
    std::array<Poly, 4> d;

    Profile(double a, double b) {
        const Poly base = Poly{{-a, 1.0}} * Poly{{b, -1.0}};
        d[0] = base * base;
        for (int k = 1; k < 4; ++k) d[k] = d[k - 1].derivative();
    }
};

// Stream function P(x) Q(y) supported on the inner box, zero outside.
struct Manufactured {
    Profile px, py;
    Box inner;
    double scale = 1.0;

    explicit Manufactured(const FieldContext& ctx)
        : px(ctx.inner_box.xmin, ctx.inner_box.xmax), py(ctx.inner_box.ymin, ctx.inner_box.ymax), inner(ctx.inner_box) {
        // max |u_x| = 1
        double mp = 0.0, mq = 0.0;
        for (int i = 0; i <= 256; ++i) {
            const double s = i / 256.0;
            mp = std::max(mp, std::abs(px.d[0](inner.xmin + s * inner.width())));
            mq = std::max(mq, std::abs(py.d[1](inner.ymin + s * inner.height())));
        }
        scale = 1.0 / (mp * mq);
    }

    bool inside(const Vec2& x) const {
        return x.x >= inner.xmin && x.x <= inner.xmax && x.y >= inner.ymin && x.y <= inner.ymax;
    }

    // u = scale * (P Q', -P' Q)
    void eval(const Vec2& x, Vec2* u, Mat2* grad, Vec2* lap) const {
        if (!inside(x)) {
            if (u) *u = {};
            if (grad) *grad = {};
            if (lap) *lap = {};
            return;
        }
        double P[4], Q[4];
        for (int k = 0; k < 4; ++k) {
            P[k] = px.d[k](x.x);
            Q[k] = py.d[k](x.y);
        }
        if (u) *u = {scale * P[0] * Q[1], -scale * P[1] * Q[0]};
        if (grad) *grad = {scale * P[1] * Q[1], scale * P[0] * Q[2], -scale * P[2] * Q[0], -scale * P[1] * Q[1]};
        if (lap) *lap = {scale * (P[2] * Q[1] + P[0] * Q[3]), -scale * (P[3] * Q[0] + P[1] * Q[2])};
    }
};

double time_factor(const VectorFieldSpec& spec, double t) {
    if (spec.time_mode == "steady") return 1.0;
    if (spec.time_mode == "cos") return std::cos(spec.omega * t);
    throw std::invalid_argument("field: unknown time mode '" + spec.time_mode + "'");
}

}  // namespace

namespace manufactured {

Vec2 velocity(const FieldContext& ctx, const Vec2& x) {
    Vec2 u;
    Manufactured(ctx).eval(x, &u, nullptr, nullptr);
    return u;
}

Mat2 velocity_gradient(const FieldContext& ctx, const Vec2& x) {
    Mat2 g{};
    Manufactured(ctx).eval(x, nullptr, &g, nullptr);
    return g;
}

double pressure(const FieldContext& ctx, const Vec2& x) {
    const double xi = (x.x - ctx.outer_box.xmin) / ctx.outer_box.width();
    const double eta = (x.y - ctx.outer_box.ymin) / ctx.outer_box.height();
    const double jump = Manufactured(ctx).inside(x) ? 0.0 : 1.0;
    return std::cos(std::numbers::pi * xi) * std::cos(std::numbers::pi * eta) + jump;
}

Vec2 force(const FieldContext& ctx, const Vec2& x) {
    Vec2 lap;
    Manufactured(ctx).eval(x, nullptr, nullptr, &lap);
    const double xi = (x.x - ctx.outer_box.xmin) / ctx.outer_box.width();
    const double eta = (x.y - ctx.outer_box.ymin) / ctx.outer_box.height();
    const double pi = std::numbers::pi;
    const Vec2 grad_p{-pi / ctx.outer_box.width() * std::sin(pi * xi) * std::cos(pi * eta),
                      -pi / ctx.outer_box.height() * std::cos(pi * xi) * std::sin(pi * eta)};
    return Vec2{-ctx.nu * lap.x + grad_p.x, -ctx.nu * lap.y + grad_p.y};
}

}  // namespace manufactured

bool is_known_field_shape(const std::string& shape) {
    return shape == "zero" || shape == "constant" || shape == "rotation" || shape == "vortex" ||
           shape == "mms_velocity" || shape == "mms_force";
}

Vec2 evaluate_field(const VectorFieldSpec& spec, const FieldContext& ctx, double t, const Vec2& x) {
    const double a = spec.amplitude * time_factor(spec, t);
    const Box& b = ctx.outer_box;
    if (spec.shape == "zero") return {};
    if (spec.shape == "constant") return spec.direction * a;
    if (spec.shape == "rotation") {
        const Vec2 c{0.5 * (b.xmin + b.xmax), 0.5 * (b.ymin + b.ymax)};
        return Vec2{-(x.y - c.y), x.x - c.x} * a;
    }
    if (spec.shape == "vortex") {
        // curl of sin^2(pi xi) sin^2(pi eta); vanishes on the outer boundary
        const double pi = std::numbers::pi;
        const double xi = (x.x - b.xmin) / b.width();
        const double eta = (x.y - b.ymin) / b.height();
        const double sx = std::sin(pi * xi), sy = std::sin(pi * eta);
        return Vec2{pi / b.height() * sx * sx * std::sin(2.0 * pi * eta),
                    -pi / b.width() * std::sin(2.0 * pi * xi) * sy * sy} *
               a;
    }
    if (spec.shape == "mms_velocity") return manufactured::velocity(ctx, x) * a;
    if (spec.shape == "mms_force") return manufactured::force(ctx, x) * a;
    throw std::invalid_argument("field: unknown shape '" + spec.shape + "'");
}

}  // namespace fricflow
