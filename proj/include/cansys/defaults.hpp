#pragma once

#include <array>

namespace cansys::defaults {

// Single table of numerical defaults; `cansys --show-defaults` prints it.

inline constexpr double psd_tolerance = 1e-12;          // relative to tr H
inline constexpr double exponential_series_threshold = 1e-4;
inline constexpr int quadrature_order = 8;              // Gauss–Legendre points per panel
inline constexpr double trace_normalized_tolerance = 1e-12;

inline constexpr double classify_rel_tol = 1e-6;
inline constexpr std::array<double, 4> schedule = {5.0, 10.0, 20.0, 40.0};
inline constexpr double growth_factor = 2.0;

inline constexpr int scan_grid_points = 2048;
inline constexpr double bisection_tol = 1e-12;
inline constexpr double eigen_residual_tol = 1e-8;      // relative boundary residual
inline constexpr double max_phase = 600.0;              // |λ| ∫‖H‖ overflow guard

inline constexpr int residual_mesh_panels = 1000;       // per cell, centered differences
inline constexpr double jacobi_offdiag_tol = 1e-12;
inline constexpr double hermitian_tol = 1e-10;
inline constexpr int hs_panels_per_cell = 8;            // with order 8: 64 nodes per cell

inline constexpr double rank_rel_threshold = 1e-9;
inline constexpr double projector_tol = 1e-10;

} // namespace cansys::defaults
