#include "h1spec/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "h1spec/errors.hpp"
#include "h1spec/quadrature.hpp"
#include "h1spec/runner.hpp"

namespace h1spec {

namespace {

std::complex<double> phi_function(const Profile& p, double k) {
  std::complex<double> that = p.t_form.fourier(k);
  std::complex<double> shat = p.s_form.fourier(k);
  return that / (2.0 * k) - std::complex<double>(0.0, 1.0) * shat;
}

double arg_or_zero(std::complex<double> v) { return v == 0.0 ? 0.0 : std::arg(v); }

// integral of f(y) * trig(2 theta_e + 2 k y) over profile knot intervals
template <class F>
double osc_integral(const Profile& p, F&& f, double k, double theta_e, bool use_sin) {
  double acc = 0.0;
  auto ks = p.knots();
  for (size_t i = 0; i + 1 < ks.size(); ++i) {
    double a = ks[i], b = ks[i + 1];
    if (b - a < 1e-14) continue;
    int panels = std::max(1, int(std::ceil((b - a) * std::max(1.0, k) / 1.5)));
    acc += gauss16_composite(
        [&](double y) {
          double ph = 2.0 * theta_e + 2.0 * k * y;
          return f(y) * (use_sin ? std::sin(ph) : std::cos(ph));
        },
        a, b, panels);
  }
  return acc;
}

std::shared_ptr<const Profile> perturbed_profile(const Profile& base, double perturb, int n) {
  if (perturb == 0.0) return std::make_shared<const Profile>(base);
  double f = 1.0 + perturb / double(n);
  Profile p = base;
  p.s_form = base.s_form.scaled(f);
  p.t_form = base.t_form.scaled(f);
  p.label = base.label + "+O(1/n)";
  return std::make_shared<const Profile>(p);
}

}  // namespace

DSeqRule DSeqRule::power_decay(double power, double scale) {
  DSeqRule r;
  r.kind = Kind::PowerDecay;
  r.power = power;
  r.scale = scale;
  return r;
}

DSeqRule DSeqRule::explicit_list(std::vector<double> values) {
  DSeqRule r;
  r.kind = Kind::Explicit;
  r.values = std::move(values);
  return r;
}

double DSeqRule::d(int n) const {
  if (kind == Kind::PowerDecay) return scale * std::pow(double(n), -power);
  if (n < 1 || n > int(values.size()))
    throw Error(ErrorKind::InvalidParams, "d_seq index out of range");
  return values[n - 1];
}

XSeqRule XSeqRule::factorial(long long c) {
  XSeqRule r;
  r.kind = Kind::FactorialTimesC;
  r.c = c;
  return r;
}

XSeqRule XSeqRule::superexp(long long c) {
  XSeqRule r;
  r.kind = Kind::SuperExpSquared;
  r.c = c;
  return r;
}

XSeqRule XSeqRule::explicit_list(std::vector<long long> values) {
  XSeqRule r;
  r.kind = Kind::Explicit;
  r.values = std::move(values);
  return r;
}

__int128 XSeqRule::x(int n) const {
  if (n < 1) throw Error(ErrorKind::InvalidParams, "x_seq index must be >= 1");
  switch (kind) {
    case Kind::FactorialTimesC: {
      __int128 f = 1;
      const __int128 lim = (__int128(1) << 126) / (c > 0 ? c : 1);
      for (int i = 2; i <= n; ++i) {
        if (f > lim / i)
          throw Error(ErrorKind::InvalidParams, "factorial position overflows 128 bits");
        f *= i;
      }
      return __int128(c) * f;
    }
    case Kind::SuperExpSquared: {
      long long e = (long long)n * n;
      if (e > 120)
        throw Error(ErrorKind::InvalidParams, "2^{n^2} position overflows 128 bits");
      return __int128(c) << e;
    }
    case Kind::Explicit:
      if (n > int(values.size()))
        throw Error(ErrorKind::InvalidParams, "x_seq index out of range");
      return __int128(values[n - 1]);
  }
  return 0;
}

SparsePlan build_sparse(const SparseConfig& config) {
  config.profile.validate();
  if (config.n_max < 1) throw Error(ErrorKind::InvalidParams, "n_max must be >= 1");
  const double delta = config.profile.half_width;

  SparsePlan plan;
  plan.delta = delta;

  __int128 prev = 0;
  double d_max = 0.0;
  for (int n = 1; n <= config.n_max; ++n) {
    BumpSpec b;
    b.n = n;
    b.d = config.d_seq.d(n);
    d_max = std::max(d_max, std::fabs(b.d));
    b.x_int = config.x_seq.x(n);
    b.profile = perturbed_profile(config.profile, config.profile_perturb, n);
    if (n == 1) {
      if (!(double(b.x_int) > delta))
        throw Error(ErrorKind::ValidationError, "x_1 > Delta is required");
      ExactLength g;
      g.int_part = b.x_int;
      g.frac = -delta;
      plan.gaps.push_back(g);
    } else {
      if (b.x_int <= prev)
        throw Error(ErrorKind::PositionsNotSparse, "positions must strictly increase");
      __int128 diff = b.x_int - prev;
      if (double(diff) <= 2.0 * delta)
        throw Error(ErrorKind::PositionsNotSparse, "x_{n+1} - x_n must exceed 2 Delta");
      ExactLength g;
      g.int_part = diff;
      g.frac = -2.0 * delta;
      plan.gaps.push_back(g);
    }
    prev = b.x_int;
    plan.bumps.push_back(b);
  }
  if (config.n_max >= 4 && std::fabs(config.d_seq.d(config.n_max)) > 0.8 * d_max &&
      d_max > 0.0)
    throw Error(ErrorKind::DecayViolated, "d_n does not decay over the requested range");

  // prefix potential for bumps whose centers are exactly representable
  std::vector<Segment> segs;
  double x_cov = 1.0;
  for (const auto& b : plan.bumps) {
    if (b.x_int > (__int128(1) << 52)) break;
    double xc = double(b.x_int);
    Segment s;
    s.a = xc - delta;
    s.b = xc + delta;
    s.sigma = CoeffForm::scaled_profile(b.profile, ProfilePart::S, xc, b.d);
    s.tau = CoeffForm::scaled_profile(b.profile, ProfilePart::T, xc, b.d);
    segs.push_back(s);
    x_cov = xc + delta + 1.0;
  }
  plan.prefix_potential = build_potential(std::move(segs), x_cov, "sparse-prefix");
  return plan;
}

double drift_predictor(const Profile& profile, double d, double k) {
  if (!(k > 0.0)) throw Error(ErrorKind::InvalidParams, "k must be positive");
  double a = std::abs(phi_function(profile, k));
  return 0.5 * d * d * a * a;
}

IncrementTriple increment_predictor(const Profile& profile, double d, double k,
                                    double theta_entry) {
  if (!(k > 0.0)) throw Error(ErrorKind::InvalidParams, "k must be positive");
  IncrementTriple out;
  if (d == 0.0) return out;
  const auto& S = profile.s_form;
  const auto& T = profile.t_form;

  auto sf = [&](double y) { return S.eval(y); };
  auto tf = [&](double y) { return T.eval(y); };
  auto ct = [&](double y) { return T.cumulative(y); };  // int_{-Delta}^y T

  double i_t_sin = osc_integral(profile, tf, k, theta_entry, true);
  double i_tct_cos =
      osc_integral(profile, [&](double y) { return tf(y) * ct(y); }, k, theta_entry, false);
  double i_sct_sin =
      osc_integral(profile, [&](double y) { return sf(y) * ct(y); }, k, theta_entry, true);
  double i_s_cos = osc_integral(profile, sf, k, theta_entry, false);
  double i_s2_sin =
      osc_integral(profile, [&](double y) { return sf(y) * sf(y); }, k, theta_entry, true);

  // the cumulative-coupling cross terms carry a factor 2 from the chain rule
  // of sin/cos(2 theta); the square of the first-order phase goes into
  // x_tilde and x_ring instead
  out.x = d / (2.0 * k) * i_t_sin - d * d / (2.0 * k * k) * i_tct_cos -
          d * d / k * i_sct_sin - d * i_s_cos - d * d / (2.0 * k) * i_s2_sin;

  std::complex<double> that = T.fourier(k), shat = S.fourier(k);
  double phi_t = 0.5 * arg_or_zero(that);
  double psi_s = 0.5 * arg_or_zero(shat);
  double at = std::abs(that), as = std::abs(shat);
  double th4 = 4.0 * theta_entry;
  out.x_tilde = d * d * at * at / (8.0 * k * k) * std::cos(th4 + 4.0 * phi_t) -
                d * d * as * as / 2.0 * std::cos(th4 + 4.0 * psi_s) +
                d * d / (2.0 * k) * as * at * std::sin(th4 + 2.0 * psi_s + 2.0 * phi_t);

  out.x_ring = drift_predictor(profile, d, k);
  return out;
}

std::vector<std::pair<double, double>> admissible_intervals(const Profile& profile,
                                                            double k1, double k2,
                                                            double margin) {
  if (!(0.0 < k1 && k1 < k2))
    throw Error(ErrorKind::InvalidParams, "need 0 < k1 < k2");
  auto mag = [&](int which, double k) {
    switch (which) {
      case 0: return std::abs(profile.s_form.fourier(k));
      case 1: return std::abs(profile.t_form.fourier(k));
      default: return std::abs(phi_function(profile, k));
    }
  };

  // zeros outside [k1, k2] matter when their margin reaches in: scan wider
  const double s1 = std::max(1e-9, k1 - margin);
  const double s2 = k2 + margin;
  std::vector<double> zeros;
  const int n_samples = 4096;
  for (int which = 0; which < 3; ++which) {
    std::vector<double> vals(n_samples + 1);
    double scale = 0.0;
    for (int i = 0; i <= n_samples; ++i) {
      double k = s1 + (s2 - s1) * i / n_samples;
      vals[i] = mag(which, k);
      scale = std::max(scale, vals[i]);
    }
    if (scale == 0.0) {
      // identically zero transform: the whole window is inadmissible
      zeros.push_back(0.5 * (k1 + k2));
      continue;
    }
    for (int i = 1; i < n_samples; ++i) {
      if (vals[i] <= vals[i - 1] && vals[i] <= vals[i + 1] && vals[i] < 0.05 * scale) {
        // golden-section refinement of the local minimum
        double a = s1 + (s2 - s1) * (i - 1) / n_samples;
        double b = s1 + (s2 - s1) * (i + 1) / n_samples;
        const double gr = 0.61803398874989484820;
        double c = b - gr * (b - a), dd = a + gr * (b - a);
        for (int it = 0; it < 80; ++it) {
          if (mag(which, c) < mag(which, dd)) b = dd; else a = c;
          c = b - gr * (b - a);
          dd = a + gr * (b - a);
        }
        double kmin = 0.5 * (a + b);
        if (mag(which, kmin) < 1e-7 * scale) zeros.push_back(kmin);
      }
    }
  }
  std::sort(zeros.begin(), zeros.end());

  std::vector<std::pair<double, double>> out;
  double lo = k1;
  for (double z : zeros) {
    double a = z - margin, b = z + margin;
    if (a > lo) out.emplace_back(lo, std::min(a, k2));
    lo = std::max(lo, b);
    if (lo >= k2) break;
  }
  if (lo < k2) out.emplace_back(lo, k2);
  out.erase(std::remove_if(out.begin(), out.end(),
                           [](const auto& iv) { return iv.second - iv.first < 1e-12; }),
            out.end());
  if (out.empty()) throw Error(ErrorKind::EmptyResult, "whole k-window inadmissible");
  return out;
}

TransitionTrace transition_experiment(const SparseConfig& config,
                                      const TransitionParams& params, int workers) {
  SparsePlan plan = build_sparse(config);
  const double delta = plan.delta;
  const int n_max = config.n_max;

  auto intervals = admissible_intervals(config.profile, config.k1, config.k2,
                                        config.admissible_margin);
  double total_len = 0.0;
  for (auto& iv : intervals) total_len += iv.second - iv.first;

  TransitionTrace trace;
  trace.params = params;
  // distribute k_grid points over the admissible intervals, uniform in length
  for (auto& iv : intervals) {
    int m = std::max(1, int(std::lround(config.k_grid * (iv.second - iv.first) / total_len)));
    for (int i = 0; i < m; ++i)
      trace.ks.push_back(iv.first + (iv.second - iv.first) * (i + 0.5) / m);
  }
  std::sort(trace.ks.begin(), trace.ks.end());
  const int nk = int(trace.ks.size());

  // local bump potentials on [0, 2 Delta], centered at Delta
  std::vector<PotentialSpec> bump_pots;
  bump_pots.reserve(n_max);
  for (const auto& b : plan.bumps) {
    Segment s;
    s.a = 0.0;
    s.b = 2.0 * delta;
    s.sigma = CoeffForm::scaled_profile(b.profile, ProfilePart::S, delta, b.d);
    s.tau = CoeffForm::scaled_profile(b.profile, ProfilePart::T, delta, b.d);
    PotentialSpec local = build_potential({s}, 2.0 * delta, "bump");
    bump_pots.push_back(std::move(local));
  }

  std::vector<std::vector<double>> y(n_max, std::vector<double>(nk));
  std::vector<std::vector<double>> drift(n_max, std::vector<double>(nk));
  double phase_err = 0.0;
  {
    double k_hi = config.k2;
    for (const auto& gap : plan.gaps)
      phase_err += k_hi * std::fabs(gap.approx()) * 2.5e-32;
  }
  trace.phase_error_bound = phase_err;
  if (phase_err > 1e-4)
    throw Error(ErrorKind::PhasePrecisionLoss,
                "gap reduction error estimate exceeds 1e-4 rad");

  parallel_for_ordered(workers, nk, [&](int ik) {
    double k = trace.ks[ik];
    double ca = std::cos(config.alpha), sa = std::sin(config.alpha);
    PruferState st = to_prufer(ca, -sa, k);
    double log_r0 = st.log_r;
    double drift_cum = 0.0;
    for (int n = 1; n <= n_max; ++n) {
      const ExactLength& gap = plan.gaps[n - 1];
      st = gap_advance(st, gap);
      st.x = 0.0;  // bump-local coordinates
      st = prufer_advance(bump_pots[n - 1], st, 2.0 * delta, config.tol);
      y[n - 1][ik] = st.log_r - log_r0;
      drift_cum += drift_predictor(*plan.bumps[n - 1].profile, plan.bumps[n - 1].d, k);
      drift[n - 1][ik] = drift_cum;
    }
  });

  double c_min = std::numeric_limits<double>::infinity(), c_max = 0.0;
  for (int n = 1; n <= n_max; ++n) {
    TransitionRow row;
    row.n = n;
    row.x_n = double(plan.bumps[n - 1].x_int);
    row.d_n = plan.bumps[n - 1].d;
    std::vector<double> ys = y[n - 1];
    row.y_mean = 0.0;
    double dsum = 0.0, csum = 0.0;
    for (int ik = 0; ik < nk; ++ik) {
      row.y_mean += ys[ik];
      dsum += drift[n - 1][ik];
      double prev = (n == 1) ? 0.0 : y[n - 2][ik];
      csum = std::max(csum, std::fabs(ys[ik] - prev));
    }
    row.y_mean /= nk;
    row.drift_cum = dsum / nk;
    row.residual = row.y_mean - row.drift_cum;
    row.per_bump_c = csum / std::max(std::fabs(row.d_n), 1e-300);
    c_min = std::min(c_min, row.per_bump_c);
    c_max = std::max(c_max, row.per_bump_c);
    std::sort(ys.begin(), ys.end());
    row.y_q10 = ys[size_t(0.1 * (nk - 1))];
    row.y_q90 = ys[size_t(0.9 * (nk - 1))];
    trace.rows.push_back(row);
  }
  trace.measured_c_max = c_max;
  trace.measured_c_spread = (c_min > 0.0) ? c_max / c_min : 0.0;
  if (n_max >= 2)
    trace.effective_beta = double(plan.bumps[1].x_int) / double(plan.bumps[0].x_int);
  for (int n = 2; n <= n_max - 1; ++n)
    trace.effective_beta = std::min(
        trace.effective_beta, double(plan.bumps[n].x_int) / double(plan.bumps[n - 1].x_int));

  // classification
  int half = std::max(1, n_max / 2);
  double y_end = trace.rows[n_max - 1].y_mean;
  double y_half = trace.rows[half - 1].y_mean;
  double drift_end = trace.rows[n_max - 1].drift_cum;
  double band_max = -std::numeric_limits<double>::infinity();
  double band_min = std::numeric_limits<double>::infinity();
  for (int n = half; n <= n_max; ++n) {
    band_max = std::max(band_max, trace.rows[n - 1].y_mean);
    band_min = std::min(band_min, trace.rows[n - 1].y_mean);
  }
  bool tracks = drift_end > 0.0 && y_end / drift_end >= params.track_lo &&
                y_end / drift_end <= params.track_hi;
  if (y_end >= params.growth_factor * y_half && y_half > 0.0 && tracks)
    trace.classification = "singular-side growth";
  else if (band_max - band_min <= params.bounded_band)
    trace.classification = "ac-side bounded";
  else
    trace.classification = "inconclusive";
  return trace;
}

}  // namespace h1spec
