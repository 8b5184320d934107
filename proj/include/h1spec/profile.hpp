#pragma once

// Compactly supported profile pairs (S, T) on [-half_width, half_width]
// representing the distribution W = S' + T. All form variants reduce to a
// list of linear pieces, so L^1/L^2 norms, cumulative integrals and the
// Fourier transform \int e^{2iky} f(y) dy have closed forms per piece.

#include <complex>
#include <string>
#include <vector>

namespace h1spec {

enum class ProfileFormKind { Box, Triangle, PiecewiseLinear, SampledTable };

// f is linear on [a, b): f(a)=fa, f(b^-)=fb. Zero outside all pieces.
struct LinSeg {
  double a, b, fa, fb;
  double slope() const { return (fb - fa) / (b - a); }
};

class ProfileForm {
 public:
  ProfileForm() = default;
  static ProfileForm box(double a, double b, double height);
  static ProfileForm triangle(double a, double b, double fa, double fb);
  static ProfileForm piecewise_linear(std::vector<LinSeg> segs,
                                      ProfileFormKind kind = ProfileFormKind::PiecewiseLinear);
  // table interpolated piecewise-linearly (continuous), zero outside
  static ProfileForm sampled_table(const std::vector<double>& xs,
                                   const std::vector<double>& ys);
  static ProfileForm zero() { return ProfileForm(); }

  double eval(double y) const;
  double cumulative(double y) const;  // \int_{-inf}^{y} f
  double total_mass() const;
  double l1_norm() const;
  double l2_norm_sq() const;
  std::complex<double> fourier(double k) const;  // \int e^{2iky} f(y) dy
  std::vector<double> knots() const;
  const std::vector<LinSeg>& pieces() const { return segs_; }
  ProfileFormKind kind() const { return kind_; }
  ProfileForm scaled(double factor) const;  // f -> factor * f

 private:
  std::vector<LinSeg> segs_;  // sorted, non-overlapping
  ProfileFormKind kind_ = ProfileFormKind::PiecewiseLinear;
};

struct Profile {
  double half_width = 1.0;
  ProfileForm s_form;
  ProfileForm t_form;
  std::string label;

  double S(double y) const { return s_form.eval(y); }
  double T(double y) const { return t_form.eval(y); }
  double T_cumulative(double y) const { return t_form.cumulative(y); }
  std::vector<double> knots() const;
  void validate() const;  // support within [-hw, hw], norms finite
};

enum class ProfilePart { S, T };

std::complex<double> profile_fourier(const Profile& p, double k, ProfilePart which);

// Distributional pairing <S' + T, phi> = -\int S phi' + \int T phi for a
// polynomial test function with the given coefficients (phi = sum c_i y^i).
double profile_pairing_polynomial(const Profile& p, const std::vector<double>& coeffs);

// The decomposition of the Dirac delta at 0:
//   S(y) = (1 - y/hw) on [0, hw],  T(y) = 1/hw on (0, hw)
Profile delta_decomposition(double half_width);

}  // namespace h1spec
