#pragma once

#include <span>
#include <vector>

namespace cansys {

/// Gauss–Legendre nodes and weights on [-1, 1].
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Nodes/weights for the given order (>= 1). Results are cached per order.
const GaussLegendre& gauss_legendre(int order);

/// Composite rule settings. `order` points per panel, `panels_per_cell`
/// equal panels per Hamiltonian cell.
struct QuadratureRule {
    int order = 8;
    int panels_per_cell = 1;

    void check() const;
};

/// Appends the nodes/weights of `order`-point Gauss–Legendre on [a, b].
void append_gauss_panel(double a, double b, int order,
                        std::vector<double>& nodes, std::vector<double>& weights);

} // namespace cansys
