#include "smoothavg/quadrature.hpp"

#include <numbers>

namespace smoothavg::quad {

Rule gauss_legendre(int n) {
    if (n < 1) throw PreconditionError("gauss_legendre: n must be >= 1");
    Rule rule;
    rule.nodes.assign(n, 0.0);
    rule.weights.assign(n, 0.0);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
            }
            dp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        // recompute derivative at the converged node
        double p0 = 1.0, p1 = 0.0;
        for (int j = 1; j <= n; ++j) {
            const double p2 = p1;
            p1 = p0;
            p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
        }
        dp = n * (z * p0 - p1) / (z * z - 1.0);
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        rule.nodes[i] = -z;
        rule.nodes[n - 1 - i] = z;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

const Rule& default_rule() {
    static const Rule rule = gauss_legendre(10);
    return rule;
}

std::vector<double> oscillatory_breaks(double a, double b, double frequency) {
    const double width = std::abs(b - a);
    const double f = std::abs(frequency);
    const auto panels = static_cast<std::size_t>(std::max(1.0, std::ceil(8.0 * f * width)));
    std::vector<double> br(panels + 1);
    for (std::size_t i = 0; i <= panels; ++i)
        br[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(panels);
    br.back() = b;
    return br;
}

}  // namespace smoothavg::quad
