#include "h1spec/propagate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "h1spec/errors.hpp"
#include "h1spec/special.hpp"

namespace h1spec {

namespace {

constexpr double kRenormThreshold = 1e120;
constexpr double kSingularCore = 1e-12;  // half-width skipped at log singularities
constexpr double kChunkNormCap = 4.6;    // ~log(100): keeps per-step det well-conditioned

struct Accumulator {
  Matrix2c unit = Matrix2c::Identity();
  double log_scale = 0.0;
  Complex log_det{0.0, 0.0};  // sum over steps of log det(step matrix)

  void push(const Matrix2c& step) {
    Complex d = step(0, 0) * step(1, 1) - step(0, 1) * step(1, 0);
    log_det += std::log(d);
    unit = step * unit;
    double n = unit.norm();
    if (n > kRenormThreshold) {
      unit /= n;
      log_scale += std::log(n);
    }
  }

  // exact steps are unimodular by construction; skip the fp det estimate
  void push_exact(const Matrix2c& step) {
    unit = step * unit;
    double n = unit.norm();
    if (n > kRenormThreshold) {
      unit /= n;
      log_scale += std::log(n);
    }
  }

  double det_defect() const { return std::abs(expm1c(log_det)); }
};

struct RhsContext {
  const PotentialSpec* pot;
  Complex z;
  Matrix2c a_of(double x) const {
    double s = pot->sigma(x);
    double t = pot->tau(x);
    Matrix2c a;
    a << -s, (t - s * s) - z, 1.0, s;
    return a;
  }
};

using MatrixFn = std::function<Matrix2c(double)>;

// One embedded Dormand-Prince 5(4) step for S' = A(t) S, S(t0) = I.
// Returns the 5th-order step matrix and the error estimate.
void dopri_step(const MatrixFn& ctx, double x0, double h, Matrix2c& s5, double& err) {
  static const double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static const double a21 = 1.0 / 5;
  static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                      a54 = -212.0 / 729;
  static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                      a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                      b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static const double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                      e4 = 125.0 / 192 - 393.0 / 640,
                      e5 = -2187.0 / 6784 + 92097.0 / 339200, e6 = 11.0 / 84 - 187.0 / 2100,
                      e7 = -1.0 / 40;

  const Matrix2c i2 = Matrix2c::Identity();
  Matrix2c k1 = ctx(x0) * i2;
  Matrix2c k2 = ctx(x0 + c2 * h) * (i2 + h * a21 * k1);
  Matrix2c k3 = ctx(x0 + c3 * h) * (i2 + h * (a31 * k1 + a32 * k2));
  Matrix2c k4 = ctx(x0 + c4 * h) * (i2 + h * (a41 * k1 + a42 * k2 + a43 * k3));
  Matrix2c k5 =
      ctx(x0 + c5 * h) * (i2 + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
  Matrix2c k6 = ctx(x0 + h) *
                (i2 + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
  s5 = i2 + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
  Matrix2c k7 = ctx(x0 + h) * s5;
  Matrix2c ee = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
  err = ee.norm() / std::max(1.0, s5.norm());
}

void integrate_smooth_fn(const MatrixFn& ctx, double a, double b,
                         const PropagateOptions& opt, Accumulator& acc,
                         const SampleFn& sample) {
  if (b - a < 1e-15) return;
  double norm_a = ctx(a).norm();
  double h = std::min({b - a, opt.max_step, kChunkNormCap / (1.0 + norm_a)});
  double x = a;
  int rejects_in_row = 0;
  while (x < b - 1e-14 * (1.0 + std::fabs(b))) {
    h = std::min(h, b - x);
    Matrix2c s5;
    double err;
    dopri_step(ctx, x, h, s5, err);
    double tol_step = opt.tol * h + 4e-16;
    if (err <= tol_step || h <= 1e-14 * (1.0 + std::fabs(x))) {
      if (h <= 1e-14 * (1.0 + std::fabs(x)) && err > tol_step)
        throw Error(ErrorKind::ToleranceNotMet, "step size underflow at x=" + std::to_string(x));
      acc.push(s5);
      x += h;
      if (sample) sample(x, acc.unit, acc.log_scale);
      rejects_in_row = 0;
      double grow = (err > 0.0) ? 0.9 * std::pow(tol_step / err, 0.2) : 5.0;
      h *= std::clamp(grow, 0.2, 5.0);
      h = std::min(h, kChunkNormCap / (1.0 + ctx(std::min(x, b - 1e-300)).norm()));
      h = std::min(h, opt.max_step);
    } else {
      h *= std::clamp(0.9 * std::pow(tol_step / err, 0.2), 0.1, 0.9);
      if (++rejects_in_row > 200)
        throw Error(ErrorKind::ToleranceNotMet, "no acceptable step at x=" + std::to_string(x));
    }
  }
}

void exact_piece(const RhsContext& ctx, double a, double b, double sig, double tau,
                 const PropagateOptions& opt, Accumulator& acc, const SampleFn& sample) {
  double len = b - a;
  if (len < 1e-15) return;
  // chunk so that the factor norm stays bounded (overflow + trace density)
  double growth = std::sqrt(std::max(1e-300, std::abs(tau - ctx.z)));
  double hmax = std::min(opt.max_step, 200.0 / std::max(1.0, growth));
  int n = std::max(1, int(std::ceil(len / hmax)));
  double h = len / n;
  for (int i = 0; i < n; ++i) {
    acc.push_exact(step_exact_constant(sig, tau, ctx.z, h));
    if (sample) sample(a + (i + 1) * h, acc.unit, acc.log_scale);
  }
}

// Magnus midpoint across the tiny window around a log singularity: the
// coefficients are integrable, so exp(\int A) with closed-form log moments.
void singular_core(const RhsContext& ctx, double s, double eps_lo, double eps_hi,
                   Accumulator& acc, const SampleFn& sample) {
  double eps = eps_lo + eps_hi;
  if (eps <= 0.0) return;
  // additive smooth part of sigma at s (gauges; the log form itself has none)
  double g = 0.0;
  for (const auto& gg : ctx.pot->gauges()) g += gg.theta(s);
  auto ilog = [](double e) { return e > 0.0 ? e * (std::log(e) - 1.0) : 0.0; };
  auto ilog2 = [](double e) {
    if (e <= 0.0) return 0.0;
    double l = std::log(e);
    return e * (l * l - 2.0 * l + 2.0);
  };
  double int_log = ilog(eps_lo) + ilog(eps_hi);
  double int_log2 = ilog2(eps_lo) + ilog2(eps_hi);
  double int_sigma = int_log + g * eps;
  double int_sigma2 = int_log2 + 2.0 * g * int_log + g * g * eps;
  double tau_s = ctx.pot->tau(s + eps_hi * 0.5);  // tau is regular here
  Matrix2c m;
  m << -int_sigma, (tau_s * eps - int_sigma2) - ctx.z * eps, eps, int_sigma;
  acc.push_exact(expm_traceless(m));
  if (sample) sample(s + eps_hi, acc.unit, acc.log_scale);
}

void integrate_smooth(const RhsContext& ctx, double a, double b, const PropagateOptions& opt,
                      Accumulator& acc, const SampleFn& sample) {
  integrate_smooth_fn([&ctx](double x) { return ctx.a_of(x); }, a, b, opt, acc, sample);
}

// Steps uniform in log-distance cluster geometrically toward the singular
// end, down to the analytic core window of half-width kSingularCore.
void integrate_toward_singularity(const RhsContext& ctx, double a, double b, bool sing_at_b,
                                  const PropagateOptions& opt, Accumulator& acc,
                                  const SampleFn& sample) {
  double w = b - a;
  if (w <= 2.0 * kSingularCore) {
    singular_core(ctx, sing_at_b ? b : a, sing_at_b ? w : 0.0, sing_at_b ? 0.0 : w, acc,
                  sample);
    return;
  }
  const double d0 = w, dmin = kSingularCore;
  if (sing_at_b) {
    MatrixFn fn = [&ctx, b](double u) {
      double dist = std::exp(-u);
      return Matrix2c(dist * ctx.a_of(b - dist));
    };
    integrate_smooth_fn(fn, -std::log(d0), -std::log(dmin), opt, acc, nullptr);
    singular_core(ctx, b, dmin, 0.0, acc, sample);
  } else {
    singular_core(ctx, a, 0.0, dmin, acc, nullptr);
    MatrixFn fn = [&ctx, a](double v) {
      double dist = std::exp(v);
      return Matrix2c(dist * ctx.a_of(a + dist));
    };
    integrate_smooth_fn(fn, std::log(dmin), std::log(d0), opt, acc, nullptr);
    if (sample) sample(a + d0, acc.unit, acc.log_scale);
  }
}

}  // namespace

double spectral_norm(const Matrix2c& m) {
  double f = m.norm();  // Frobenius; scale out first so t^2 cannot overflow
  if (f == 0.0 || !std::isfinite(f)) return f;
  Matrix2c s = m / f;
  double t = s.squaredNorm();
  double d = std::abs(s(0, 0) * s(1, 1) - s(0, 1) * s(1, 0));
  double disc = std::max(0.0, t * t - 4.0 * d * d);
  return f * std::sqrt(0.5 * (t + std::sqrt(disc)));
}

Matrix2c coefficient_matrix(const PotentialSpec& pot, Complex z, double x) {
  pot.require_coverage(x, x);
  double s = pot.sigma(x);
  double t = pot.tau(x);
  Matrix2c a;
  a << -s, (t - s * s) - z, 1.0, s;
  return a;
}

Matrix2c step_exact_constant(double sigma, double tau, Complex z, double h) {
  Complex d = Complex(tau, 0.0) - z;
  Complex a = h * h * d;  // (h w)^2
  Complex ch, sho;        // cosh(h w), sinh(h w)/w
  if (std::abs(a) < 1e-6) {
    ch = 1.0 + a * (0.5 + a * (1.0 / 24.0));
    sho = h * (1.0 + a * (1.0 / 6.0 + a * (1.0 / 120.0)));
  } else {
    Complex w = std::sqrt(d);
    ch = std::cosh(h * w);
    sho = std::sinh(h * w) / w;
  }
  Matrix2c m;
  m << ch - sho * sigma, sho * ((tau - sigma * sigma) - z), sho, ch + sho * sigma;
  return m;
}

Matrix2c expm_traceless(const Matrix2c& m) {
  Complex det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  Complex a = -det;  // = (sqrt of M^2 scalar)^2
  Complex ch, sho;
  if (std::abs(a) < 1e-6) {
    ch = 1.0 + a * (0.5 + a * (1.0 / 24.0));
    sho = 1.0 + a * (1.0 / 6.0 + a * (1.0 / 120.0));
  } else {
    Complex w = std::sqrt(a);
    ch = std::cosh(w);
    sho = std::sinh(w) / w;
  }
  return ch * Matrix2c::Identity() + sho * m;
}

TransferResult TransferResult::inverse() const {
  Complex det_unit = unit(0, 0) * unit(1, 1) - unit(0, 1) * unit(1, 0);
  // det T = det_unit * e^{2 log_scale} ~ 1; invert through the adjugate
  Complex log_det_t = std::log(det_unit) + 2.0 * log_scale;
  Complex det_t = std::exp(log_det_t);
  Matrix2c adj;
  adj << unit(1, 1), -unit(0, 1), -unit(1, 0), unit(0, 0);
  TransferResult r;
  r.unit = adj / det_t;
  r.log_scale = log_scale;
  r.z = z;
  r.x_from = x_to;
  r.x_to = x_from;
  r.det_defect = det_defect;
  return r;
}

TransferResult propagate_forward(const PotentialSpec& pot, Complex z, double a, double b,
                                 const PropagateOptions& opt,
                                 const std::vector<double>& extra_stops,
                                 const SampleFn& sample) {
  if (b < a) throw Error(ErrorKind::InvalidParams, "propagate_forward needs a <= b");
  pot.require_coverage(a, b);
  RhsContext ctx{&pot, z};

  std::vector<double> pts = pot.breakpoints(a, b);
  auto sing = pot.singularities(a, b);
  for (double s : sing)
    if (s > a + 1e-14 && s < b - 1e-14) pts.push_back(s);
  for (double p : extra_stops)
    if (p > a + 1e-14 && p < b - 1e-14) pts.push_back(p);
  pts.push_back(a);
  pts.push_back(b);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](double u, double v) { return std::fabs(u - v) < 1e-13; }),
            pts.end());

  Accumulator acc;
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    double lo = pts[i], hi = pts[i + 1];
    if (hi - lo < 1e-15) continue;
    bool sing_lo = false, sing_hi = false;
    for (double s : sing) {
      if (std::fabs(s - lo) < 1e-13) sing_lo = true;
      if (std::fabs(s - hi) < 1e-13) sing_hi = true;
    }
    if (sing_lo && sing_hi) {
      // singularities at both ends: split in the middle
      double mid = 0.5 * (lo + hi);
      integrate_toward_singularity(ctx, lo, mid, false, opt, acc, sample);
      integrate_toward_singularity(ctx, mid, hi, true, opt, acc, sample);
    } else if (sing_lo || sing_hi) {
      integrate_toward_singularity(ctx, lo, hi, sing_hi, opt, acc, sample);
    } else if (auto cc = pot.constant_coeffs(lo, hi)) {
      exact_piece(ctx, lo, hi, cc->first, cc->second, opt, acc, sample);
    } else {
      integrate_smooth(ctx, lo, hi, opt, acc, sample);
    }
  }

  TransferResult r;
  r.unit = acc.unit;
  r.log_scale = acc.log_scale;
  r.z = z;
  r.x_from = a;
  r.x_to = b;
  r.det_defect = acc.det_defect();
  if (r.det_defect > opt.det_tol)
    throw Error(ErrorKind::ToleranceNotMet,
                "determinant drift " + std::to_string(r.det_defect) + " exceeds det_tol");
  return r;
}

TransferResult transfer(const PotentialSpec& pot, Complex z, double x, double y, double tol) {
  PropagateOptions opt;
  opt.tol = tol;
  if (x == y) {
    TransferResult r;
    r.z = z;
    r.x_from = y;
    r.x_to = x;
    return r;
  }
  if (x > y) return propagate_forward(pot, z, y, x, opt);
  return propagate_forward(pot, z, x, y, opt).inverse();
}

FundamentalPair fundamental_pair(const PotentialSpec& pot, Complex z, BoundaryAngle alpha,
                                 const std::vector<double>& grid, double tol) {
  FundamentalPair out;
  if (grid.empty()) return out;
  for (size_t i = 0; i + 1 < grid.size(); ++i)
    if (!(grid[i + 1] > grid[i]))
      throw Error(ErrorKind::InvalidParams, "grid must be strictly increasing");

  double ca = std::cos(alpha.alpha), sa = std::sin(alpha.alpha);
  Vector2c phi0(ca, -sa);   // (phi^{[1]}, phi)(0)
  Vector2c theta0(sa, ca);  // (theta^{[1]}, theta)(0)

  PropagateOptions opt;
  opt.tol = tol;
  double x_end = grid.back();

  std::vector<double> remaining(grid.begin(), grid.end());
  size_t next = 0;
  auto record = [&](double x, const Matrix2c& unit, double log_scale) {
    while (next < remaining.size() && remaining[next] <= x + 1e-12) {
      if (std::fabs(remaining[next] - x) < 1e-10) {
        double s = std::exp(log_scale);
        Vector2c vp = s * (unit * phi0);
        Vector2c vt = s * (unit * theta0);
        out.phi.push_back({remaining[next], vp(1), vp(0)});
        out.theta.push_back({remaining[next], vt(1), vt(0)});
      }
      if (remaining[next] <= x + 1e-12) ++next;
    }
  };
  // leading grid points at 0
  record(0.0, Matrix2c::Identity(), 0.0);
  if (x_end > 0.0)
    propagate_forward(pot, z, 0.0, x_end, opt, remaining, record);
  if (out.phi.size() != grid.size())
    throw Error(ErrorKind::ToleranceNotMet, "propagation missed grid samples");
  return out;
}

}  // namespace h1spec
