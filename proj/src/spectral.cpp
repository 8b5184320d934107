#include "h1spec/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "h1spec/errors.hpp"
#include "h1spec/quadrature.hpp"

namespace h1spec {

namespace {

constexpr double kPi = 3.14159265358979323846264338;

// trapezoid accumulation of exp(2 * log ||T||) in log space
struct LogTrapezoid {
  double prev_x = 0.0;
  double prev_lw = 0.0;  // log of integrand at prev_x
  double log_sum = -std::numeric_limits<double>::infinity();
  bool started = false;

  void start(double x, double lw) {
    prev_x = x;
    prev_lw = lw;
    started = true;
  }
  void add(double x, double lw) {
    double dx = x - prev_x;
    if (dx > 0.0) {
      // log( dx/2 (e^{a} + e^{b}) )
      double m = std::max(prev_lw, lw);
      double piece = m + std::log1p(std::exp(std::min(prev_lw, lw) - m)) +
                     std::log(0.5 * dx);
      double hi = std::max(log_sum, piece);
      log_sum = hi + std::log1p(std::exp(std::min(log_sum, piece) - hi));
    }
    prev_x = x;
    prev_lw = lw;
  }
};

double record_step_for(double E) {
  double k = std::sqrt(std::fabs(E)) + 1.0;
  return 0.2 / k;
}

}  // namespace

double carmona_density(const PotentialSpec& pot, BoundaryAngle alpha, double x, double E,
                       DensityVariant variant, double tol) {
  if (variant == DensityVariant::SqrtWeighted && !(E > 0.0))
    throw Error(ErrorKind::InvalidParams, "sqrt-weighted variant requires E > 0");
  FundamentalPair fp = fundamental_pair(pot, Complex(E, 0.0), alpha, {x}, tol);
  double phi = fp.phi.back().u.real();
  double phi1 = fp.phi.back().u_quasi.real();
  if (variant == DensityVariant::Standard)
    return 1.0 / (kPi * (phi * phi + phi1 * phi1));
  return std::sqrt(E) / (kPi * (E * phi * phi + phi1 * phi1));
}

std::vector<CesaroResult> cesaro_average_multi(const PotentialSpec& pot, double E,
                                               const std::vector<double>& ls, double tol) {
  if (ls.empty()) return {};
  for (double l : ls)
    if (!(l > 0.0)) throw Error(ErrorKind::InvalidParams, "cesaro length must be > 0");
  double l_max = *std::max_element(ls.begin(), ls.end());

  PropagateOptions opt;
  opt.tol = tol;
  opt.max_step = record_step_for(E);

  LogTrapezoid acc;
  acc.start(0.0, 0.0);  // ||T(E;0)|| = 1
  std::vector<std::pair<double, double>> checkpoints;  // (l, log int)
  std::vector<double> sorted_ls = ls;
  std::sort(sorted_ls.begin(), sorted_ls.end());
  size_t next = 0;
  auto sample = [&](double x, const Matrix2c& unit, double log_scale) {
    double lw = 2.0 * (std::log(spectral_norm(unit)) + log_scale);
    acc.add(x, lw);
    while (next < sorted_ls.size() && x >= sorted_ls[next] - 1e-9) {
      checkpoints.emplace_back(sorted_ls[next], acc.log_sum);
      ++next;
    }
  };
  propagate_forward(pot, Complex(E, 0.0), 0.0, l_max, opt, sorted_ls, sample);
  while (next < sorted_ls.size()) {
    checkpoints.emplace_back(sorted_ls[next], acc.log_sum);
    ++next;
  }

  std::vector<CesaroResult> out;
  for (double l : ls) {
    auto it = std::find_if(checkpoints.begin(), checkpoints.end(),
                           [&](const auto& c) { return std::fabs(c.first - l) < 1e-9; });
    CesaroResult r;
    r.log_value = it->second - std::log(l);
    if (r.log_value < std::log(1e300)) {
      r.value = std::exp(r.log_value);
    } else {
      r.overflow = true;
      r.value = std::numeric_limits<double>::infinity();
    }
    out.push_back(r);
  }
  return out;
}

CesaroResult cesaro_average(const PotentialSpec& pot, double E, double l, double tol) {
  return cesaro_average_multi(pot, E, {l}, tol).front();
}

double simon_stolz_integral(const PotentialSpec& pot, double E, double L, double tol) {
  if (!(L > 0.0)) throw Error(ErrorKind::InvalidParams, "L must be > 0");
  PropagateOptions opt;
  opt.tol = tol;
  opt.max_step = record_step_for(E);
  double sum = 0.0, prev_x = 0.0, prev_f = 1.0;  // 1/||T||^2 = 1 at x=0
  auto sample = [&](double x, const Matrix2c& unit, double log_scale) {
    double f = std::exp(-2.0 * (std::log(spectral_norm(unit)) + log_scale));
    sum += 0.5 * (prev_f + f) * (x - prev_x);
    prev_x = x;
    prev_f = f;
  };
  propagate_forward(pot, Complex(E, 0.0), 0.0, L, opt, {}, sample);
  return sum;
}

double transfer_lp_norm(const PotentialSpec& pot, double x, double p, double E1, double E2,
                        int n_grid, double tol) {
  if (!(p >= 1.0)) throw Error(ErrorKind::InvalidParams, "p must be >= 1");
  if (!(E1 <= E2)) throw Error(ErrorKind::InvalidParams, "need E1 <= E2");
  if (E1 == E2) return 0.0;
  if (n_grid < 2) n_grid = 2;
  if (n_grid % 2) ++n_grid;  // Simpson needs an even panel count
  double h = (E2 - E1) / n_grid;
  double sum = 0.0;
  for (int i = 0; i <= n_grid; ++i) {
    double e = E1 + i * h;
    TransferResult t = transfer(pot, Complex(e, 0.0), x, 0.0, tol);
    double v = std::exp(p * t.log_norm());
    double w = (i == 0 || i == n_grid) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    sum += w * v;
  }
  return sum * h / 3.0;
}

ShortrangeResult shortrange_density(const PotentialSpec& pot, BoundaryAngle alpha, double E,
                                    double increment_tol, double x_max, double tol) {
  if (!(E > 0.0)) throw Error(ErrorKind::InvalidParams, "shortrange density needs E > 0");
  pot.require_coverage(0.0, x_max);
  double k = std::sqrt(E);
  double ca = std::cos(alpha.alpha), sa = std::sin(alpha.alpha);
  PruferState st = to_prufer(ca, -sa, k);  // (phi^{[1]}, phi)(0) = (cos a, -sin a)
  double x = 0.0;
  bool converged = false;
  while (x < x_max - 1e-9) {
    double nx = std::min(x + 1.0, x_max);
    double lr_before = st.log_r;
    st = prufer_advance(pot, st, nx, tol);
    x = nx;
    if (increment_tol > 0.0 && std::fabs(st.log_r - lr_before) < increment_tol) {
      converged = true;
      break;
    }
  }
  if (increment_tol > 0.0 && !converged)
    throw Error(ErrorKind::NoConvergence,
                "logR increments above tolerance at x_max (short-range hypothesis?)");
  ShortrangeResult res;
  // E phi^2 + (phi^{[1]})^2 = k^2 R^2; w = sqrt(E)/(pi k^2 R^2)
  res.w = std::sqrt(E) / (kPi * k * k * std::exp(2.0 * st.log_r));
  res.x_stop = x;
  res.converged = increment_tol <= 0.0 || converged;
  return res;
}

const char* spectral_tag_name(SpectralTag t) {
  switch (t) {
    case SpectralTag::AcSupportCandidate: return "ac-support-candidate";
    case SpectralTag::NotAc: return "not-ac";
    case SpectralTag::Inconclusive: return "inconclusive";
  }
  return "?";
}

DiagnosticReport classify_grid(const PotentialSpec& pot, const std::vector<double>& E_grid,
                               const ClassifyParams& params_in) {
  for (size_t i = 0; i + 1 < E_grid.size(); ++i)
    if (!(E_grid[i] <= E_grid[i + 1]))
      throw Error(ErrorKind::InvalidParams, "E grid must be sorted");
  DiagnosticReport rep;
  rep.params = params_in;
  ClassifyParams& prm = rep.params;
  if (prm.windows.empty())
    prm.windows = {{0.5 * prm.l0, prm.l0}, {prm.l0, 2.0 * prm.l0}, {2.0 * prm.l0, 4.0 * prm.l0}};

  for (double E : E_grid) {
    DiagnosticRow row;
    row.E = E;
    auto ces = cesaro_average_multi(pot, E, {prm.l0, 2.0 * prm.l0, 4.0 * prm.l0}, prm.tol);
    for (int i = 0; i < 3; ++i) {
      row.cesaro[i] = ces[i].overflow ? std::numeric_limits<double>::infinity() : ces[i].value;
      row.cesaro_overflow = row.cesaro_overflow || ces[i].overflow;
    }
    row.simon_stolz = simon_stolz_integral(pot, E, 4.0 * prm.l0, prm.tol);
    if (prm.lp_halfwidth > 0.0 && E + prm.lp_halfwidth > 0.0) {
      // the L^p criterion concerns windows inside (0, infinity)
      double lo = std::max(E - prm.lp_halfwidth, 1e-8);
      double hi = E + prm.lp_halfwidth;
      if (lo < hi)
        row.lp_norm = transfer_lp_norm(pot, prm.l0, prm.lp_p, lo, hi, prm.lp_grid, prm.tol);
    }

    bool blowup = false;
    double log_thresh = std::log(prm.blowup_threshold);
    for (const auto& w : prm.windows) {
      TransferResult t = transfer(pot, Complex(E, 0.0), w.second, w.first, prm.tol);
      if (t.log_norm() > log_thresh) {
        blowup = true;
        break;
      }
    }
    if (blowup) {
      row.tag = SpectralTag::NotAc;
    } else if (!row.cesaro_overflow) {
      double mx = std::max({row.cesaro[0], row.cesaro[1], row.cesaro[2]});
      double mn = std::min({row.cesaro[0], row.cesaro[1], row.cesaro[2]});
      if (mn > 0.0 && mx / mn < prm.cesaro_ratio_cap && mx < prm.cesaro_value_cap)
        row.tag = SpectralTag::AcSupportCandidate;
    }
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace h1spec
