#pragma once

// Transfer matrices T(z; x, y) for the first-order quasi-derivative system
//   d/dx (u^{[1]}, u)^T = A(z,x) (u^{[1]}, u)^T,
//   A = [[-sigma, (tau - sigma^2) - z], [1, sigma]].
// Exact matrix exponentials on constant pieces, embedded Dormand-Prince 5(4)
// elsewhere, mandatory breakpoints at segment edges / sigma jumps / profile
// knots, geometric clustering toward log singularities. Matrices are stored
// log-scaled (unit-normalized matrix + log amplitude); the determinant drift
// is accumulated per step in a well-conditioned form and reported, never
// renormalized away.

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <vector>

#include "h1spec/potential.hpp"

namespace h1spec {

using Complex = std::complex<double>;
using Matrix2c = Eigen::Matrix2cd;
using Vector2c = Eigen::Vector2cd;

double spectral_norm(const Matrix2c& m);

Matrix2c coefficient_matrix(const PotentialSpec& pot, Complex z, double x);

// exp(h A) for constant sigma, tau via cosh/sinh closed form (A^2 = (tau-z) I)
Matrix2c step_exact_constant(double sigma, double tau, Complex z, double h);

// exp(M) for a traceless 2x2 matrix (M^2 = -det(M) I)
Matrix2c expm_traceless(const Matrix2c& m);

struct TransferResult {
  Matrix2c unit = Matrix2c::Identity();  // T = e^{log_scale} * unit
  double log_scale = 0.0;
  Complex z;
  double x_from = 0.0, x_to = 0.0;
  double det_defect = 0.0;  // |det T - 1| accumulated estimate

  Matrix2c matrix() const { return std::exp(log_scale) * unit; }
  double log_norm() const { return std::log(spectral_norm(unit)) + log_scale; }
  TransferResult inverse() const;
};

struct PropagateOptions {
  double tol = 1e-10;       // per-unit-length local error target
  double det_tol = 1e-8;    // loud failure threshold for accumulated drift
  double max_step = 1e30;   // extra cap, used to densify trace sampling
};

// callback invoked after every accepted step with the running product
using SampleFn = std::function<void(double x, const Matrix2c& unit, double log_scale)>;

TransferResult propagate_forward(const PotentialSpec& pot, Complex z, double a, double b,
                                 const PropagateOptions& opt = {},
                                 const std::vector<double>& extra_stops = {},
                                 const SampleFn& sample = nullptr);

// T(z; x, y): propagates from y to x (either order)
TransferResult transfer(const PotentialSpec& pot, Complex z, double x, double y,
                        double tol = 1e-10);

struct SolutionSample {
  double x = 0.0;
  Complex u;
  Complex u_quasi;  // u^{[1]} = u' - sigma u
};

struct FundamentalPair {
  std::vector<SolutionSample> phi;    // (phi^{[1]}, phi)(0) = (cos a, -sin a)
  std::vector<SolutionSample> theta;  // (theta^{[1]}, theta)(0) = (sin a, cos a)
};

FundamentalPair fundamental_pair(const PotentialSpec& pot, Complex z, BoundaryAngle alpha,
                                 const std::vector<double>& grid, double tol = 1e-10);

}  // namespace h1spec
