#pragma once

// Carmona-type spectral density approximants and the spectral-type
// diagnostics: Cesaro averages of ||T||^2, the Simon-Stolz integral,
// L^p energy norms of transfer matrices, and the short-range a.c. density.

#include <vector>

#include "h1spec/propagate.hpp"
#include "h1spec/prufer.hpp"

namespace h1spec {

enum class DensityVariant { Standard, SqrtWeighted };

// Standard: 1 / (pi (phi^2 + (phi^{[1]})^2)); sqrt-weighted (E > 0):
// sqrt(E) / (pi (E phi^2 + (phi^{[1]})^2)), phi = phi_{alpha,E}.
double carmona_density(const PotentialSpec& pot, BoundaryAngle alpha, double x, double E,
                       DensityVariant variant, double tol = 1e-10);

struct CesaroResult {
  double value = 0.0;     // (1/l) int_0^l ||T(E;x)||^2 dx
  double log_value = 0.0; // log of the same, always valid
  bool overflow = false;  // value exceeds 1e300; use log_value
};

CesaroResult cesaro_average(const PotentialSpec& pot, double E, double l,
                            double tol = 1e-10);
// one propagation, checkpoints at several l values (ascending)
std::vector<CesaroResult> cesaro_average_multi(const PotentialSpec& pot, double E,
                                               const std::vector<double>& ls,
                                               double tol = 1e-10);

// int_0^L dx / ||T(E;x)||^2; nondecreasing in L
double simon_stolz_integral(const PotentialSpec& pot, double E, double L,
                            double tol = 1e-10);

// int_{E1}^{E2} ||T(E;x)||^p dE by composite Simpson over n_grid panels
double transfer_lp_norm(const PotentialSpec& pot, double x, double p, double E1, double E2,
                        int n_grid, double tol = 1e-10);

struct ShortrangeResult {
  double w = 0.0;       // w_alpha(E)
  double x_stop = 0.0;
  bool converged = false;
};

// Integrates the Pruefer radius of phi_{alpha,E} until |delta logR| over a
// unit step drops below increment_tol (increment_tol <= 0: run to x_max).
ShortrangeResult shortrange_density(const PotentialSpec& pot, BoundaryAngle alpha, double E,
                                    double increment_tol, double x_max, double tol = 1e-10);

enum class SpectralTag { AcSupportCandidate, NotAc, Inconclusive };
const char* spectral_tag_name(SpectralTag t);

struct ClassifyParams {
  double l0 = 25.0;
  double blowup_threshold = 1e6;  // ||T(E; x_j, y_j)|| beyond this => not-ac
  double cesaro_ratio_cap = 4.0;
  double cesaro_value_cap = 1e6;
  std::vector<std::pair<double, double>> windows;  // (y_j, x_j); default derived from l0
  // L^p energy-window norm reported per row; half-width <= 0 disables it
  double lp_p = 4.0;
  double lp_halfwidth = 0.25;
  int lp_grid = 16;
  double tol = 1e-10;
};

struct DiagnosticRow {
  double E = 0.0;
  double cesaro[3] = {0, 0, 0};  // at l0, 2 l0, 4 l0
  bool cesaro_overflow = false;
  double simon_stolz = 0.0;
  double lp_norm = 0.0;  // int ||T(E'; l0)||^p dE' over the window around E
  SpectralTag tag = SpectralTag::Inconclusive;
};

struct DiagnosticReport {
  std::vector<DiagnosticRow> rows;
  ClassifyParams params;
};

DiagnosticReport classify_grid(const PotentialSpec& pot, const std::vector<double>& E_grid,
                               const ClassifyParams& params = {});

}  // namespace h1spec
