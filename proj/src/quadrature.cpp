#include "cansys/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace cansys {

namespace {

GaussLegendre compute_gauss_legendre(int n) {
    GaussLegendre rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    // Newton iteration on P_n from the Chebyshev-like initial guess; nodes are
    // symmetric so only half are computed.
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) {
                break;
            }
        }
        // Recompute derivative at the converged node.
        double p0 = 1.0;
        double p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = pk;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) {
        rule.nodes[n / 2] = 0.0;
    }
    return rule;
}

} // namespace

const GaussLegendre& gauss_legendre(int order) {
    if (order < 1) {
        throw std::invalid_argument("quadrature order must be >= 1");
    }
    static std::mutex mutex;
    static std::map<int, GaussLegendre> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(order);
    if (it == cache.end()) {
        it = cache.emplace(order, compute_gauss_legendre(order)).first;
    }
    return it->second;
}

void QuadratureRule::check() const {
    if (order < 1) {
        throw std::invalid_argument("quadrature order must be >= 1");
    }
    if (panels_per_cell < 1) {
        throw std::invalid_argument("panels per cell must be >= 1");
    }
}

void append_gauss_panel(double a, double b, int order,
                        std::vector<double>& nodes, std::vector<double>& weights) {
    const auto& gl = gauss_legendre(order);
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    for (int i = 0; i < order; ++i) {
        nodes.push_back(mid + half * gl.nodes[i]);
        weights.push_back(half * gl.weights[i]);
    }
}

} // namespace cansys
