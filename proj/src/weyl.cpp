#include "h1spec/weyl.hpp"

#include <algorithm>
#include <optional>
#include <cmath>

#include "h1spec/errors.hpp"
#include "h1spec/quadrature.hpp"

namespace h1spec {

namespace {

struct Mobius {
  Complex a, b, c, d;
  Complex apply(Complex w) const { return (a * w + b) / (c * w + d); }
  Complex apply_infinity() const { return a / c; }
};

Mobius boundary_mobius(const PotentialSpec& pot, Complex z, double x, BoundaryAngle alpha,
                       double tol) {
  TransferResult t = transfer(pot, z, x, 0.0, tol);
  TransferResult ti = t.inverse();
  // Moebius transforms are projective: the scalar e^{log_scale} drops out
  const Matrix2c& m = ti.unit;
  double ca = std::cos(alpha.alpha), sa = std::sin(alpha.alpha);
  Matrix2c ra;
  ra << ca, -sa, sa, ca;
  Matrix2c b = ra * m;
  return Mobius{b(0, 0), b(0, 1), b(1, 0), b(1, 1)};
}

// circumcircle through three points, computed about their centroid
void circumcircle(Complex p1, Complex p2, Complex p3, Complex& center, double& radius) {
  Complex g = (p1 + p2 + p3) / 3.0;
  Complex z1 = p1 - g, z2 = p2 - g, z3 = p3 - g;
  double scale = std::max({std::abs(z1), std::abs(z2), std::abs(z3), 1e-300});
  Complex num = std::norm(z1) * (z2 - z3) + std::norm(z2) * (z3 - z1) +
                std::norm(z3) * (z1 - z2);
  Complex den = std::conj(z1) * (z2 - z3) + std::conj(z2) * (z3 - z1) +
                std::conj(z3) * (z1 - z2);
  if (std::abs(den) < 1e-12 * scale * scale)
    throw Error(ErrorKind::DegenerateDisk, "boundary images collinear");
  center = g + num / den;
  radius = std::abs(p1 - center);
}

}  // namespace

WeylDisk weyl_disk(const PotentialSpec& pot, Complex z, double x, BoundaryAngle alpha,
                   double tol) {
  if (!(z.imag() > 0.0))
    throw Error(ErrorKind::NotUpperHalfPlane, "weyl_disk needs Im z > 0");
  if (!(x > 0.0)) throw Error(ErrorKind::InvalidParams, "weyl_disk needs x > 0");
  Mobius mob = boundary_mobius(pot, z, x, alpha, tol);

  // boundary circle through images of three real points (infinity included)
  Complex pts[3];
  int got = 0;
  const double probes[5] = {0.0, 1.0, -1.0, 2.0, 0.5};
  if (std::abs(mob.c) > 1e-14 * std::abs(mob.a) + 1e-300) pts[got++] = mob.apply_infinity();
  for (double w : probes) {
    if (got >= 3) break;
    Complex den = mob.c * w + mob.d;
    if (std::abs(den) < 1e-14 * (std::abs(mob.c) + std::abs(mob.d))) continue;
    pts[got++] = mob.apply(Complex(w, 0.0));
  }
  if (got < 3) throw Error(ErrorKind::DegenerateDisk, "could not place boundary points");

  WeylDisk disk;
  disk.z = z;
  disk.x = x;
  disk.alpha = alpha;
  circumcircle(pts[0], pts[1], pts[2], disk.center, disk.radius);

  // the interior side is fixed by the image of i (with an absolute noise
  // floor: at radii near machine precision the test is otherwise vacuous)
  Complex wi = mob.apply(Complex(0.0, 1.0));
  if (std::abs(wi - disk.center) >
      disk.radius * (1.0 + 1e-9) + 1e-12 * (1.0 + std::abs(disk.center)))
    throw Error(ErrorKind::NotUpperHalfPlane,
                "image of i falls outside the boundary circle");
  if (!(disk.center.imag() > 0.0))
    throw Error(ErrorKind::NotUpperHalfPlane, "disk center not in C+");
  return disk;
}

MFunctionResult m_function(const PotentialSpec& pot, Complex z, BoundaryAngle alpha,
                           double radius_tol, double x_max, double tol) {
  if (!(z.imag() > 0.0))
    throw Error(ErrorKind::NotUpperHalfPlane, "m_function needs Im z > 0");
  if (!(radius_tol > 0.0)) throw Error(ErrorKind::InvalidParams, "radius_tol must be > 0");
  double cap = std::min(x_max, pot.x_max());
  MFunctionResult res;
  double x = std::min(1.0, cap);
  std::optional<WeylDisk> last;
  double prev_x = 0.0, prev_logr = 0.0;
  while (true) {
    WeylDisk d;
    try {
      d = weyl_disk(pot, z, x, alpha, tol);
    } catch (const Error& e) {
      // disks can shrink past machine separation between probes; fall back
      // to the last resolvable disk when it was already deep in convergence
      if (last && (e.kind() == ErrorKind::DegenerateDisk ||
                   e.kind() == ErrorKind::NotUpperHalfPlane)) {
        res.converged = last->radius < 1e4 * radius_tol;
        break;
      }
      throw;
    }
    if (last) {
      prev_x = last->x;
      prev_logr = std::log(last->radius);
    }
    last = d;
    if (d.radius < radius_tol) {
      res.converged = true;
      break;
    }
    if (x >= cap - 1e-12) break;
    // geometric doubling, capped so the next radius lands near the target
    // rather than collapsing to machine zero
    double next = 2.0 * x;
    if (prev_x > 0.0) {
      double rate = (prev_logr - std::log(d.radius)) / (x - prev_x);
      if (rate > 0.0) {
        double needed = (std::log(d.radius) - std::log(0.2 * radius_tol)) / rate;
        next = std::min(next, x + std::max(1.0, needed));
      }
    }
    x = std::min(next, cap);
  }
  res.m = last->center;
  res.x_used = last->x;
  res.radius_at_stop = last->radius;
  return res;
}

double subordinacy_ratio(const PotentialSpec& pot, double E, BoundaryAngle alpha, double x,
                         double tol) {
  if (!(x > 0.0)) throw Error(ErrorKind::InvalidParams, "subordinacy needs x > 0");
  double k = std::sqrt(std::fabs(E)) + 1.0;
  int n = std::max(201, int(std::ceil(x * 16.0 * k)) | 1);
  std::vector<double> grid(n);
  for (int i = 0; i < n; ++i) grid[i] = x * double(i) / (n - 1);
  FundamentalPair fp = fundamental_pair(pot, Complex(E, 0.0), alpha, grid, tol);
  std::vector<double> xp(n), fphi(n), fth(n);
  for (int i = 0; i < n; ++i) {
    xp[i] = fp.phi[i].x;
    fphi[i] = std::norm(fp.phi[i].u);
    fth[i] = std::norm(fp.theta[i].u);
  }
  double np = trapezoid_samples(xp, fphi);
  double nt = trapezoid_samples(xp, fth);
  return std::sqrt(np / nt);
}

}  // namespace h1spec
