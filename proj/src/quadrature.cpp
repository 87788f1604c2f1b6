#include "fricflow/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fricflow {

const std::vector<TriangleQuadPoint>& triangle_rule_degree4() {
    static const std::vector<TriangleQuadPoint> rule = [] {
        constexpr double a = 0.44594849091596488632, b = 0.10810301816807022736;
        constexpr double wa = 0.22338158967801146570;
        constexpr double c = 0.09157621350977074346, d = 0.81684757298045851308;
        constexpr double wc = 0.10995174365532186764;
        return std::vector<TriangleQuadPoint>{
            {{b, a, a}, wa}, {{a, b, a}, wa}, {{a, a, b}, wa},
            {{d, c, c}, wc}, {{c, d, c}, wc}, {{c, c, d}, wc},
        };
    }();
    return rule;
}

std::vector<LineQuadPoint> gauss_legendre(int points) {
    if (points < 1) throw std::invalid_argument("gauss_legendre: need at least one point");
    std::vector<LineQuadPoint> rule(static_cast<std::size_t>(points));
    const int n = points;
    for (int i = 0; i < n; ++i) {
        // Newton on P_n starting from the Chebyshev-like guess.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule[static_cast<std::size_t>(n - 1 - i)] = {0.5 * (1.0 + x), 0.5 * w};
    }
    return rule;
}

std::vector<TriangleQuadPoint> triangle_rule_collapsed(int points) {
    const auto gl = gauss_legendre(points);
    std::vector<TriangleQuadPoint> rule;
    rule.reserve(gl.size() * gl.size());
    // Duffy map (s, r) -> (l1, l2) = (s (1 - r), r); jacobian (1 - r).
    for (const auto& qr : gl)
        for (const auto& qs : gl) {
            const double l2 = qr.s;
            const double l1 = qs.s * (1.0 - qr.s);
            rule.push_back({{1.0 - l1 - l2, l1, l2}, 2.0 * qs.weight * qr.weight * (1.0 - qr.s)});
        }
    return rule;
}

}  // namespace fricflow
