#include <doctest.h>

#include <cmath>
#include <random>

#include "fricflow/regularization.hpp"
#include "fricflow/verify.hpp"

using namespace fricflow;

TEST_SUITE("regularization") {
    TEST_CASE("closed-form values") {
        CHECK(rho_eps({3, 4}, 1.0) == doctest::Approx(std::sqrt(26.0) - 1.0).epsilon(1e-15));
        const Mat2 b = beta_eps({0, 0}, 2.0);
        CHECK(b[0] == doctest::Approx(0.5));
        CHECK(b[1] == 0.0);
        CHECK(b[2] == 0.0);
        CHECK(b[3] == doctest::Approx(0.5));
        const Vec2 a = alpha_eps({0, 0}, 1e-3);
        CHECK(a.x == 0.0);
        CHECK(a.y == 0.0);
        CHECK(rho_eps({0, 0}, 0.3) == 0.0);
        const Vec2 a34 = alpha_eps({3, 4}, 1.0);
        CHECK(a34.x == doctest::Approx(3.0 / std::sqrt(26.0)));
        CHECK(a34.y == doctest::Approx(4.0 / std::sqrt(26.0)));
    }

    TEST_CASE("eps must be positive") {
        CHECK_THROWS_AS(rho_eps({1, 0}, 0.0), std::invalid_argument);
        CHECK_THROWS_AS(alpha_eps({1, 0}, -1.0), std::invalid_argument);
        CHECK_THROWS_AS(beta_eps({1, 0}, 0.0), std::invalid_argument);
        CHECK_THROWS_AS(complementarity_defect({1, 0}, 1.0, 0.0), std::invalid_argument);
    }

    TEST_CASE("no cancellation for tiny |z|") {
        // rho ~ |z|^2 / (2 eps)
        CHECK(rho_eps({1e-9, 0}, 1.0) == doctest::Approx(0.5e-18).epsilon(1e-12));
        CHECK(complementarity_defect({1e-9, 0}, 1.0, 1.0) >= 0.0);
    }

    TEST_CASE("rho tends to |z| as eps -> 0") {
        const Vec2 z{0.3, -0.4};
        double prev = 1.0;
        for (double eps : {1e-1, 1e-2, 1e-3, 1e-4}) {
            const double gap = std::abs(rho_eps(z, eps) - 0.5);
            CHECK(gap <= eps);
            CHECK(gap < prev);
            prev = gap;
        }
    }

    TEST_CASE("beta is the derivative of alpha") {
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (int i = 0; i < 200; ++i) {
            const Vec2 z{u(rng), u(rng)};
            const double eps = std::pow(10.0, -3.0 * (u(rng) + 1.0) / 2.0);
            const double h = 1e-6 * std::sqrt(dot(z, z) + eps * eps);
            const Mat2 b = beta_eps(z, eps);
            const Vec2 dx = (alpha_eps({z.x + h, z.y}, eps) - alpha_eps({z.x - h, z.y}, eps)) * (0.5 / h);
            const Vec2 dy = (alpha_eps({z.x, z.y + h}, eps) - alpha_eps({z.x, z.y - h}, eps)) * (0.5 / h);
            const double scale = 1.0 / std::sqrt(dot(z, z) + eps * eps);
            CHECK(std::abs(b[0] - dx.x) <= 1e-6 * scale);
            CHECK(std::abs(b[2] - dx.y) <= 1e-6 * scale);
            CHECK(std::abs(b[1] - dy.x) <= 1e-6 * scale);
            CHECK(std::abs(b[3] - dy.y) <= 1e-6 * scale);
            CHECK(b[1] == b[2]);
        }
    }

    TEST_CASE("complementarity defect lies in [0, g eps]") {
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int i = 0; i < 1000; ++i) {
            const double eps = std::pow(10.0, -5.0 * u(rng));
            const Vec2 z{eps * std::pow(10.0, 6.0 * u(rng) - 3.0), 0.0};
            const double g = 10.0 * u(rng);
            const double d = complementarity_defect(z, g, eps);
            CHECK(d >= 0.0);
            CHECK(d <= g * eps);
            // equals g|z| - lambda.z with lambda = g alpha
            const double direct = g * norm(z) - g * dot(alpha_eps(z, eps), z);
            CHECK(d == doctest::Approx(direct).epsilon(1e-9).scale(g * eps));
        }
    }

    TEST_CASE("random sample sweep") {
        const auto r = sample_regularization(10000, 42);
        CHECK(r.samples == 10000);
        CHECK(r.bound_violations == 0);
        CHECK(r.alpha_norm_violations == 0);
        CHECK(r.alpha_sign_violations == 0);
        CHECK(r.beta_violations == 0);
        CHECK(r.max_gradient_error <= 1e-7);
    }
}
