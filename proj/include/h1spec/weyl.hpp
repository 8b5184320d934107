#pragma once

// Weyl disks D_x^alpha(z) as Moebius images of the upper half-plane under
// R_alpha T(z;x,0)^{-1}, the m-function by nested-disk shrinkage, and
// subordinacy ratios ||phi||_x / ||theta||_x.

#include <complex>

#include "h1spec/propagate.hpp"

namespace h1spec {

struct WeylDisk {
  Complex center;
  double radius = 0.0;
  Complex z;
  double x = 0.0;
  BoundaryAngle alpha;
};

WeylDisk weyl_disk(const PotentialSpec& pot, Complex z, double x, BoundaryAngle alpha,
                   double tol = 1e-10);

struct MFunctionResult {
  Complex m;
  double x_used = 0.0;
  double radius_at_stop = 0.0;
  bool converged = false;
};

MFunctionResult m_function(const PotentialSpec& pot, Complex z, BoundaryAngle alpha,
                           double radius_tol = 1e-8, double x_max = 1e4,
                           double tol = 1e-10);

// ||phi_{alpha,E}||_x / ||theta_{alpha,E}||_x with ||f||_x^2 = int_0^x |f|^2
double subordinacy_ratio(const PotentialSpec& pot, double E, BoundaryAngle alpha, double x,
                         double tol = 1e-10);

}  // namespace h1spec
