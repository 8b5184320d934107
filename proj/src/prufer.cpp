#include "h1spec/prufer.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "h1spec/errors.hpp"

namespace h1spec {

namespace {

constexpr double kTwoPi = 6.28318530717958647692528677;
constexpr double kSingularCore = 1e-12;

// state layout: y[0]=theta (relative to base), y[1]=logR, y[2]=dtheta/dk,
// y[3]=dlogR/dk, y[4]=d2theta/dk2
struct PruferRhs {
  const PotentialSpec* pot;
  double k;
  double theta_base;  // reduced base phase; total theta = base + y[0]
  bool with_derivs;

  void operator()(double x, const double* y, double* dy) const {
    double sg = pot->sigma(x);
    double tu = pot->tau(x);
    double th = theta_base + y[0];
    double s2 = std::sin(2.0 * th), c2 = std::cos(2.0 * th);
    double sin_sq = 0.5 * (1.0 - c2);
    double ts = tu - sg * sg;
    double q = ts / k;
    dy[0] = k - q * sin_sq + sg * s2;
    dy[1] = 0.5 * q * s2 - sg * c2;
    if (with_derivs) {
      double h = y[2];
      double f = 1.0 + ts / (k * k) * sin_sq;
      double g = 2.0 * sg * c2 - q * s2;
      dy[2] = f + g * h;
      dy[3] = -ts / (2.0 * k * k) * s2 + (q * c2 + 2.0 * sg * s2) * h;
      double bigF = -2.0 * ts / (k * k * k) * sin_sq + 2.0 * ts / (k * k) * s2 * h +
                    (-2.0 * q * c2 - 4.0 * sg * s2) * h * h;
      dy[4] = bigF + g * y[4];
    } else {
      dy[2] = dy[3] = dy[4] = 0.0;
    }
  }
};

using RhsFn = std::function<void(double, const double*, double*)>;

// Dormand-Prince 5(4) on a 5-component real state
void dopri_step5(const RhsFn& rhs, double x0, double h, const double* y, double* out,
                 double& err) {
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
  double k1[5], k2[5], k3[5], k4[5], k5[5], k6[5], k7[5], tmp[5];
  rhs(x0, y, k1);
  for (int i = 0; i < 5; ++i) tmp[i] = y[i] + h * a21 * k1[i];
  rhs(x0 + c2 * h, tmp, k2);
  for (int i = 0; i < 5; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
  rhs(x0 + c3 * h, tmp, k3);
  for (int i = 0; i < 5; ++i) tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
  rhs(x0 + c4 * h, tmp, k4);
  for (int i = 0; i < 5; ++i)
    tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
  rhs(x0 + c5 * h, tmp, k5);
  for (int i = 0; i < 5; ++i)
    tmp[i] =
        y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
  rhs(x0 + h, tmp, k6);
  for (int i = 0; i < 5; ++i)
    out[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
  rhs(x0 + h, out, k7);
  err = 0.0;
  for (int i = 0; i < 5; ++i) {
    double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                    e7 * k7[i]);
    double scale = 1.0 + std::fabs(out[i]);
    err = std::max(err, std::fabs(e) / scale);
  }
}

void integrate_piece_fn(const RhsFn& rhs, double a, double b, double tol, double h0,
                        double* y) {
  if (b - a < 1e-15) return;
  double h = std::min(b - a, h0);
  double x = a;
  int rejects = 0;
  while (x < b - 1e-14 * (1.0 + std::fabs(b))) {
    h = std::min(h, b - x);
    double out[5], err;
    dopri_step5(rhs, x, h, y, out, err);
    double tol_step = tol * h + 4e-16;
    if (err <= tol_step || h <= 1e-14 * (1.0 + std::fabs(x))) {
      if (h <= 1e-14 * (1.0 + std::fabs(x)) && err > tol_step)
        throw Error(ErrorKind::ToleranceNotMet,
                    "prufer step underflow at x=" + std::to_string(x));
      for (int i = 0; i < 5; ++i) y[i] = out[i];
      x += h;
      rejects = 0;
      double grow = (err > 0.0) ? 0.9 * std::pow(tol_step / err, 0.2) : 5.0;
      h *= std::clamp(grow, 0.2, 5.0);
    } else {
      h *= std::clamp(0.9 * std::pow(tol_step / err, 0.2), 0.1, 0.9);
      if (++rejects > 200)
        throw Error(ErrorKind::ToleranceNotMet,
                    "prufer: no acceptable step at x=" + std::to_string(x));
    }
  }
}

void integrate_piece(const PruferRhs& rhs, double a, double b, double tol, double* y) {
  integrate_piece_fn([&rhs](double t, const double* yy, double* dy) { rhs(t, yy, dy); }, a,
                     b, tol, 0.5 / (1.0 + rhs.k), y);
}

// first-order increments across the tiny core around a log singularity
void singular_core_prufer(const PruferRhs& rhs, double s, double eps_lo, double eps_hi,
                          double* y) {
  double eps = eps_lo + eps_hi;
  if (eps <= 0.0) return;
  double g = 0.0;
  for (const auto& gg : rhs.pot->gauges()) g += gg.theta(s);
  auto ilog = [](double e) { return e > 0.0 ? e * (std::log(e) - 1.0) : 0.0; };
  auto ilog2 = [](double e) {
    if (e <= 0.0) return 0.0;
    double l = std::log(e);
    return e * (l * l - 2.0 * l + 2.0);
  };
  double int_sigma = ilog(eps_lo) + ilog(eps_hi) + g * eps;
  double int_sigma2 = ilog2(eps_lo) + ilog2(eps_hi) + 2.0 * g * (ilog(eps_lo) + ilog(eps_hi)) +
                      g * g * eps;
  double tau_s = rhs.pot->tau(s + 2.0 * eps_hi);
  double th = rhs.theta_base + y[0];
  double s2 = std::sin(2.0 * th), c2 = std::cos(2.0 * th);
  double sin_sq = 0.5 * (1.0 - c2);
  double int_ts = tau_s * eps - int_sigma2;
  double k = rhs.k;
  y[0] += k * eps - int_ts / k * sin_sq + int_sigma * s2;
  y[1] += int_ts / (2.0 * k) * s2 - int_sigma * c2;
  if (rhs.with_derivs) {
    double h = y[2];
    y[2] += eps + int_ts / (k * k) * sin_sq +
            (2.0 * int_sigma * c2 - int_ts / k * s2) * h;
    y[3] += -int_ts / (2.0 * k * k) * s2 + (int_ts / k * c2 + 2.0 * int_sigma * s2) * h;
    y[4] += -2.0 * int_ts / (k * k * k) * sin_sq + 2.0 * int_ts / (k * k) * s2 * h +
            (-2.0 * int_ts / k * c2 - 4.0 * int_sigma * s2) * h * h;
  }
}

void advance_over(const PotentialSpec& pot, double a, double b, double tol, PruferState& st) {
  if (b - a < 1e-15) return;
  std::vector<double> pts = pot.breakpoints(a, b);
  auto sing = pot.singularities(a, b);
  for (double s : sing)
    if (s > a + 1e-14 && s < b - 1e-14) pts.push_back(s);
  pts.push_back(a);
  pts.push_back(b);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](double u, double v) { return std::fabs(u - v) < 1e-13; }),
            pts.end());

  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    double lo = pts[i], hi = pts[i + 1];
    if (hi - lo < 1e-15) continue;

    auto cc = pot.constant_coeffs(lo, hi);
    if (cc && cc->first == 0.0 && cc->second == 0.0) {
      // exact free advance
      double len = hi - lo;
      st.theta = dd_add(st.theta, dd_mul(st.k, len));
      if (st.has_derivs) st.dtheta_dk += len;
      continue;
    }

    PruferRhs rhs{&pot, st.k, 0.0, st.has_derivs};
    DD red = dd_reduce_angle(st.theta);
    rhs.theta_base = red.hi + red.lo;
    double y[5] = {0.0, st.log_r, st.dtheta_dk, st.dlogr_dk, st.d2theta_dk2};

    bool sing_lo = false, sing_hi = false;
    for (double s : sing) {
      if (std::fabs(s - lo) < 1e-13) sing_lo = true;
      if (std::fabs(s - hi) < 1e-13) sing_hi = true;
    }
    auto run_toward = [&](double u0, double u1, bool at_hi) {
      double w = u1 - u0;
      if (w <= 2.0 * kSingularCore) {
        singular_core_prufer(rhs, at_hi ? u1 : u0, at_hi ? w : 0.0, at_hi ? 0.0 : w, y);
        return;
      }
      // log-distance substitution: geometric clustering toward the singular end
      if (at_hi) {
        RhsFn fn = [&rhs, u1](double u, const double* yy, double* dy) {
          double dist = std::exp(-u);
          rhs(u1 - dist, yy, dy);
          for (int i = 0; i < 5; ++i) dy[i] *= dist;
        };
        integrate_piece_fn(fn, -std::log(w), -std::log(kSingularCore), tol, 0.1, y);
        singular_core_prufer(rhs, u1, kSingularCore, 0.0, y);
      } else {
        singular_core_prufer(rhs, u0, 0.0, kSingularCore, y);
        RhsFn fn = [&rhs, u0](double v, const double* yy, double* dy) {
          double dist = std::exp(v);
          rhs(u0 + dist, yy, dy);
          for (int i = 0; i < 5; ++i) dy[i] *= dist;
        };
        integrate_piece_fn(fn, std::log(kSingularCore), std::log(w), tol, 0.1, y);
      }
    };
    if (sing_lo && sing_hi) {
      double mid = 0.5 * (lo + hi);
      run_toward(lo, mid, false);
      run_toward(mid, hi, true);
    } else if (sing_lo || sing_hi) {
      run_toward(lo, hi, sing_hi);
    } else {
      integrate_piece(rhs, lo, hi, tol, y);
    }

    st.theta = dd_add(st.theta, y[0]);
    st.log_r = y[1];
    st.dtheta_dk = y[2];
    st.dlogr_dk = y[3];
    st.d2theta_dk2 = y[4];
  }
  st.x = b;
}

}  // namespace

double PruferState::theta_reduced() const {
  DD r = dd_reduce_angle(theta);
  double v = r.hi + r.lo;
  if (v < 0.0) v += kTwoPi;
  return v;
}

void PruferState::reconstruct(double& u_quasi, double& u) const {
  double r = std::exp(log_r);
  u = r * dd_sin(theta);
  u_quasi = k * r * dd_cos(theta);
}

PruferState to_prufer(double u_quasi, double u, double k, double theta_hint) {
  if (!(k > 0.0)) throw Error(ErrorKind::InvalidParams, "k must be positive");
  if (u == 0.0 && u_quasi == 0.0) throw Error(ErrorKind::ZeroVector, "zero initial vector");
  PruferState st;
  st.k = k;
  double c = u_quasi / k;
  st.log_r = 0.5 * std::log(u * u + c * c);
  double th = std::atan2(u, c);
  if (theta_hint == 0.0) {
    if (th < 0.0) th += kTwoPi;  // default branch [0, 2 pi)
  } else {
    th += kTwoPi * std::round((theta_hint - th) / kTwoPi);
  }
  st.theta = DD(th);
  return st;
}

PruferState prufer_advance(const PotentialSpec& pot, PruferState state, double x_to,
                           double tol) {
  if (x_to < state.x - 1e-12)
    throw Error(ErrorKind::InvalidParams, "prufer_advance only integrates forward");
  pot.require_coverage(state.x, x_to);
  advance_over(pot, state.x, x_to, tol, state);
  return state;
}

std::vector<PruferState> prufer_flow(const PotentialSpec& pot, double k, double theta0,
                                     double x_from, double x_to, double tol) {
  if (!(k > 0.0)) throw Error(ErrorKind::InvalidParams, "k must be positive");
  pot.require_coverage(x_from, x_to);
  std::vector<PruferState> out;
  PruferState st;
  st.k = k;
  st.theta = DD(theta0);
  st.x = x_from;
  out.push_back(st);
  std::vector<double> pts = pot.breakpoints(x_from, x_to);
  pts.push_back(x_to);
  for (double p : pts) {
    st = prufer_advance(pot, st, p, tol);
    out.push_back(st);
  }
  return out;
}

std::vector<PruferState> prufer_flow_with_k_derivatives(const PotentialSpec& pot, double k,
                                                        double theta0, double x_from,
                                                        double x_to, double tol) {
  if (!(k > 0.0)) throw Error(ErrorKind::InvalidParams, "k must be positive");
  pot.require_coverage(x_from, x_to);
  std::vector<PruferState> out;
  PruferState st;
  st.k = k;
  st.theta = DD(theta0);
  st.x = x_from;
  st.has_derivs = true;  // derivative fields start at zero at x_from
  out.push_back(st);
  std::vector<double> pts = pot.breakpoints(x_from, x_to);
  pts.push_back(x_to);
  for (double p : pts) {
    st = prufer_advance(pot, st, p, tol);
    out.push_back(st);
  }
  return out;
}

PruferState gap_advance(const PruferState& state, const ExactLength& gap) {
  if (gap.int_part < 0 || (gap.int_part == 0 && gap.frac < 0.0))
    throw Error(ErrorKind::InvalidParams, "gap must be nonnegative");
  PruferState st = state;
  // exact expansion of k * gap
  std::vector<double> comps;
  __int128 v = gap.int_part;
  while (v != 0) {
    double d = double(v);
    __int128 di = __int128(d);
    v -= di;
    DD p = two_prod(st.k, d);
    comps.push_back(p.hi);
    if (p.lo != 0.0) comps.push_back(p.lo);
  }
  if (gap.frac != 0.0) {
    DD p = two_prod(st.k, gap.frac);
    comps.push_back(p.hi);
    if (p.lo != 0.0) comps.push_back(p.lo);
  }
  DD inc = expansion_to_dd(comps);
  st.theta = dd_add(st.theta, inc);
  if (st.has_derivs) st.dtheta_dk += gap.approx();
  st.x = state.x + gap.approx();
  return st;
}

}  // namespace h1spec
