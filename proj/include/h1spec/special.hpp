#pragma once

#include <complex>

namespace h1spec {

// Sine and cosine integrals Si(x), Ci(x) (power series below x=2, modified
// Lentz continued fraction above). Accuracy ~1e-15.
void cisi(double x, double& ci, double& si);

inline double sine_integral(double x) {
  double c, s;
  cisi(x, c, s);
  return s;
}

// tail integral \int_x^infty sin(2t)/t dt = pi/2 - Si(2x)
double sin2t_over_t_tail(double x);

// C^2 smoothstep on [0,1]: 6u^5 - 15u^4 + 10u^3, clamped outside.
double smoothstep(double u);
double smoothstep_deriv(double u);

// phi-functions for exact integrals of linear densities against e^{w y}:
//   phi_a(x) = (e^x - 1)/x            = \int_0^1 e^{x s} ds
//   phi_b(x) = (e^x (x - 1) + 1)/x^2  = \int_0^1 s e^{x s} ds
std::complex<double> phi_a(std::complex<double> x);
std::complex<double> phi_b(std::complex<double> x);

// expm1 for complex argument, accurate near 0
std::complex<double> expm1c(std::complex<double> z);

}  // namespace h1spec
