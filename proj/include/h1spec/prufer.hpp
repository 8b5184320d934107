#pragma once

// Pruefer phase/radius flow for real energies E = k^2:
//   theta' =  k - (tau - sigma^2)/k sin^2(theta) + sigma sin(2 theta)
//   (log R)' = (tau - sigma^2)/(2k) sin(2 theta) - sigma cos(2 theta)
// with the variational systems for d(theta)/dk, d(log R)/dk, d^2(theta)/dk^2.
// The phase is carried unwrapped in compensated (double-double) form; free
// gaps advance exactly, with argument reduction against an extended 2 pi.

#include <cstdint>
#include <vector>

#include "h1spec/dd.hpp"
#include "h1spec/potential.hpp"

namespace h1spec {

// exact nonnegative length: integer part (possibly huge) plus a dyadic tail
struct ExactLength {
  __int128 int_part = 0;
  double frac = 0.0;
  double approx() const { return double(int_part) + frac; }
};

struct PruferState {
  double x = 0.0;
  double k = 1.0;
  DD theta;            // unwrapped phase
  double log_r = 0.0;
  bool has_derivs = false;
  double dtheta_dk = 0.0;
  double dlogr_dk = 0.0;
  double d2theta_dk2 = 0.0;

  double theta_unwrapped() const { return theta.value(); }
  double theta_reduced() const;  // in [0, 2 pi)
  // u = e^{log_r} sin(theta), u^{[1]} = k e^{log_r} cos(theta)
  void reconstruct(double& u_quasi, double& u) const;
};

// R = sqrt(u^2 + (u^{[1]}/k)^2), theta = atan2(u, u^{[1]}/k) lifted near hint
PruferState to_prufer(double u_quasi, double u, double k, double theta_hint = 0.0);

// advance an existing state to x_to over the potential's coefficients
PruferState prufer_advance(const PotentialSpec& pot, PruferState state, double x_to,
                           double tol = 1e-10);

std::vector<PruferState> prufer_flow(const PotentialSpec& pot, double k, double theta0,
                                     double x_from, double x_to, double tol = 1e-10);

std::vector<PruferState> prufer_flow_with_k_derivatives(const PotentialSpec& pot, double k,
                                                        double theta0, double x_from,
                                                        double x_to, double tol = 1e-10);

// exact free-region advancement: theta += k * gap (compensated), logR fixed,
// dtheta_dk += gap; the estimated reduction error is ~|theta| * 2^-106.
PruferState gap_advance(const PruferState& state, const ExactLength& gap);

}  // namespace h1spec
