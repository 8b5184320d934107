#include "h1spec/potential.hpp"

#include <algorithm>
#include <cmath>

#include "h1spec/errors.hpp"
#include "h1spec/quadrature.hpp"
#include "h1spec/special.hpp"

namespace h1spec {

namespace {

constexpr double kPi = 3.14159265358979323846264338;
constexpr double kCoreEps = 1e-12;  // innermost window half-width at a log singularity


// asymptotic tail \int_x^infty t^c sin(t^beta) dt, valid for x^beta large
double growing_osc_tail(double x, double c0, double beta) {
  double xb = std::pow(x, beta);
  double sn = std::sin(xb), cs = std::cos(xb);
  double total = 0.0, coef = 1.0, c = c0;
  bool sin_kind = true;
  double prev = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 60; ++it) {
    double bterm = coef / beta * std::pow(x, c - beta + 1.0);
    if (std::fabs(bterm) >= prev) break;  // series turned; truncate
    total += sin_kind ? bterm * cs : -bterm * sn;
    prev = std::fabs(bterm);
    if (prev < 1e-16 * (1.0 + std::fabs(total))) break;
    double factor = (c - beta + 1.0) / beta;
    coef = sin_kind ? coef * factor : -coef * factor;
    sin_kind = !sin_kind;
    c -= beta;
  }
  return total;
}

}  // namespace

struct GrowingOscData {
  double alpha = 0.0, beta = 3.0;
  double x_asym = 0.0;
  double tail_at_xasym = 0.0;          // \int_{x_asym}^infty V
  std::vector<double> node_x;          // ascending, node_x.front()=0, back()=x_asym
  std::vector<double> node_suffix;     // \int_{node}^{x_asym} V

  double V(double t) const { return std::pow(t, alpha) * std::sin(std::pow(t, beta)); }

  double sigma(double x) const {
    if (x >= x_asym) return -growing_osc_tail(x, alpha, beta);
    // sigma(x) = -( \int_x^{x_asym} V + tail )
    auto it = std::lower_bound(node_x.begin(), node_x.end(), x);
    size_t j = size_t(it - node_x.begin());
    double local = 0.0;
    if (j < node_x.size() && node_x[j] > x)
      local = gauss16([&](double t) { return V(t); }, x, node_x[j]);
    double suffix = (j < node_suffix.size()) ? node_suffix[j] : 0.0;
    return -(local + suffix + tail_at_xasym);
  }
};

namespace {

std::shared_ptr<const GrowingOscData> make_growing_osc(double alpha, double beta) {
  auto d = std::make_shared<GrowingOscData>();
  d->alpha = alpha;
  d->beta = beta;
  d->x_asym = std::pow(40.0 * (1.0 + alpha), 1.0 / beta);
  d->tail_at_xasym = growing_osc_tail(d->x_asym, alpha, beta);
  // phase-equidistant nodes: t_m = (m pi/2)^{1/beta}
  d->node_x.push_back(0.0);
  double xb_max = std::pow(d->x_asym, beta);
  for (int m = 1;; ++m) {
    double ph = m * kPi / 2.0;
    if (ph >= xb_max) break;
    d->node_x.push_back(std::pow(ph, 1.0 / beta));
  }
  d->node_x.push_back(d->x_asym);
  size_t n = d->node_x.size();
  d->node_suffix.assign(n, 0.0);
  for (size_t i = n - 1; i-- > 0;) {
    double piece = gauss16([&](double t) { return d->V(t); }, d->node_x[i], d->node_x[i + 1]);
    d->node_suffix[i] = d->node_suffix[i + 1] + piece;
  }
  return d;
}

double square_wave_sigma(double x) {
  if (x < 0.0) return 0.0;
  int n = int(std::floor(x)) + 1;
  double t = x - (n - 1);
  double h = 1.0 / (2.0 * n);
  int j = std::min(int(std::floor(t / h)), 2 * n - 1);
  return (j % 2 == 0) ? (t - j * h) : ((j + 1) * h - t);
}

double wvn_sigma(double x, double t0) {
  if (x >= t0) return 8.0 * sin2t_over_t_tail(x);
  auto integrand = [t0](double t) {
    double s = smoothstep((t - 0.5 * t0) / (0.5 * t0));
    return t > 0.0 ? 8.0 * std::sin(2.0 * t) * s / t : 0.0;
  };
  double lo = std::max(x, 0.0);
  return adaptive_simpson(integrand, lo, t0, 1e-13) + 8.0 * sin2t_over_t_tail(t0);
}

}  // namespace

CoeffForm CoeffForm::constant_value(double c) {
  CoeffForm f;
  f.kind = CoeffKind::Constant;
  f.constant = c;
  return f;
}

CoeffForm CoeffForm::log_singularity(double x0) {
  CoeffForm f;
  f.kind = CoeffKind::LogSingularity;
  f.x0 = x0;
  return f;
}

CoeffForm CoeffForm::scaled_profile(std::shared_ptr<const Profile> p, ProfilePart part,
                                    double center, double amplitude) {
  if (!p) throw Error(ErrorKind::InvalidParams, "null profile");
  p->validate();
  CoeffForm f;
  f.kind = CoeffKind::ScaledProfile;
  f.profile = std::move(p);
  f.part = part;
  f.center = center;
  f.amplitude = amplitude;
  return f;
}

CoeffForm CoeffForm::sampled_table(const std::vector<double>& xs,
                                   const std::vector<double>& ys) {
  CoeffForm f;
  f.kind = CoeffKind::SampledTable;
  f.table = ProfileForm::sampled_table(xs, ys);
  return f;
}

CoeffForm CoeffForm::closed_form(ClosedFormId id) {
  CoeffForm f;
  f.kind = CoeffKind::ClosedForm;
  f.cf_id = id;
  return f;
}

double CoeffForm::eval(double x, Side side) const {
  switch (kind) {
    case CoeffKind::Constant:
      return constant;
    case CoeffKind::LogSingularity: {
      double d = std::fabs(x - x0);
      return d > 0.0 ? std::log(d) : -745.0;
    }
    case CoeffKind::ScaledProfile: {
      const ProfileForm& form =
          (part == ProfilePart::S) ? profile->s_form : profile->t_form;
      double y = x - center;
      if (side == Side::Left) {
        for (const auto& s : form.pieces())
          if (y > s.a && y <= s.b) return amplitude * (s.fa + s.slope() * (y - s.a));
        return 0.0;
      }
      return amplitude * form.eval(y);
    }
    case CoeffKind::ClosedForm:
      switch (cf_id) {
        case ClosedFormId::ExpDecaySigma: return std::exp(-x);
        case ClosedFormId::WignerVonNeumannSigma: return wvn_sigma(x, cf_t0);
        case ClosedFormId::GrowingOscSigma: return cf_cache->sigma(x);
        case ClosedFormId::SquareWaveSigma: return square_wave_sigma(x);
      }
      return 0.0;
    case CoeffKind::SampledTable:
      if (side == Side::Left) {
        for (const auto& s : table.pieces())
          if (x > s.a && x <= s.b) return s.fa + s.slope() * (x - s.a);
        return 0.0;
      }
      return table.eval(x);
  }
  return 0.0;
}

std::vector<double> CoeffForm::knots(double a, double b) const {
  std::vector<double> ks;
  auto keep = [&](double p) {
    if (p > a + 1e-14 && p < b - 1e-14) ks.push_back(p);
  };
  switch (kind) {
    case CoeffKind::Constant:
    case CoeffKind::LogSingularity:
      break;
    case CoeffKind::ScaledProfile: {
      for (double p : profile->knots()) keep(p + center);
      break;
    }
    case CoeffKind::ClosedForm:
      if (cf_id == ClosedFormId::WignerVonNeumannSigma) {
        keep(0.5 * cf_t0);
        keep(cf_t0);
      } else if (cf_id == ClosedFormId::SquareWaveSigma) {
        int n_lo = std::max(1, int(std::floor(a)) + 1);
        int n_hi = int(std::floor(b)) + 1;
        for (int n = n_lo; n <= n_hi; ++n) {
          double h = 1.0 / (2.0 * n);
          for (int j = 0; j <= 2 * n; ++j) keep((n - 1) + j * h);
        }
      }
      break;
    case CoeffKind::SampledTable:
      for (double p : table.knots()) keep(p);
      break;
  }
  return ks;
}

std::optional<double> CoeffForm::singular_point() const {
  if (kind == CoeffKind::LogSingularity) return x0;
  return std::nullopt;
}

GaugeTheta GaugeTheta::constant_shift(double c) {
  GaugeTheta g;
  g.kind = Kind::Constant;
  g.constant = c;
  return g;
}

GaugeTheta GaugeTheta::sinusoid(double amp, double freq, double phase) {
  GaugeTheta g;
  g.kind = Kind::Sinusoid;
  g.amp = amp;
  g.freq = freq;
  g.phase = phase;
  return g;
}

GaugeTheta GaugeTheta::piecewise_linear(std::vector<double> xs, std::vector<double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw Error(ErrorKind::NonDifferentiableTheta, "theta table needs >= 2 samples");
  for (size_t i = 0; i + 1 < xs.size(); ++i)
    if (!(xs[i + 1] > xs[i]))
      throw Error(ErrorKind::NonDifferentiableTheta, "theta abscissas must increase");
  GaugeTheta g;
  g.kind = Kind::PiecewiseLinear;
  g.xs = std::move(xs);
  g.ys = std::move(ys);
  return g;
}

double GaugeTheta::theta(double x) const {
  switch (kind) {
    case Kind::Constant: return constant;
    case Kind::Sinusoid: return amp * std::sin(freq * x + phase);
    case Kind::PiecewiseLinear: {
      if (x <= xs.front()) return ys.front();
      if (x >= xs.back()) return ys.back();
      auto it = std::upper_bound(xs.begin(), xs.end(), x);
      size_t i = size_t(it - xs.begin()) - 1;
      double t = (x - xs[i]) / (xs[i + 1] - xs[i]);
      return ys[i] + t * (ys[i + 1] - ys[i]);
    }
  }
  return 0.0;
}

double GaugeTheta::dtheta(double x) const {
  switch (kind) {
    case Kind::Constant: return 0.0;
    case Kind::Sinusoid: return amp * freq * std::cos(freq * x + phase);
    case Kind::PiecewiseLinear: {
      if (x < xs.front() || x >= xs.back()) return 0.0;
      auto it = std::upper_bound(xs.begin(), xs.end(), x);
      size_t i = size_t(it - xs.begin());
      if (i == 0) return 0.0;
      --i;
      return (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]);
    }
  }
  return 0.0;
}

std::vector<double> GaugeTheta::knots(double a, double b) const {
  std::vector<double> ks;
  if (kind == Kind::PiecewiseLinear)
    for (double p : xs)
      if (p > a + 1e-14 && p < b - 1e-14) ks.push_back(p);
  return ks;
}

const Segment* PotentialSpec::find_segment(double x, CoeffForm::Side side) const {
  for (const auto& s : segments_) {
    bool inside = (side == CoeffForm::Side::Right) ? (x >= s.a && x < s.b)
                                                   : (x > s.a && x <= s.b);
    if (inside) return &s;
  }
  return nullptr;
}

double PotentialSpec::sigma(double x, CoeffForm::Side side) const {
  double v = 0.0;
  if (const Segment* s = find_segment(x, side)) v = s->sigma.eval(x, side);
  for (const auto& g : gauges_) v += g.theta(x);
  return v;
}

double PotentialSpec::tau(double x, CoeffForm::Side side) const {
  double v = 0.0;
  if (const Segment* s = find_segment(x, side)) v = s->tau.eval(x, side);
  for (const auto& g : gauges_) v -= g.dtheta(x);
  return v;
}

std::vector<double> PotentialSpec::breakpoints(double a, double b) const {
  std::vector<double> pts;
  auto keep = [&](double p) {
    if (p > a + 1e-14 && p < b - 1e-14) pts.push_back(p);
  };
  for (const auto& s : segments_) {
    keep(s.a);
    keep(s.b);
    for (double p : s.sigma.knots(std::max(a, s.a), std::min(b, s.b))) keep(p);
    for (double p : s.tau.knots(std::max(a, s.a), std::min(b, s.b))) keep(p);
  }
  for (const auto& j : sigma_jumps_) keep(j.x);
  for (const auto& g : gauges_)
    for (double p : g.knots(a, b)) keep(p);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](double u, double v) { return std::fabs(u - v) < 1e-13; }),
            pts.end());
  return pts;
}

std::optional<std::pair<double, double>> PotentialSpec::constant_coeffs(double a,
                                                                        double b) const {
  double shift = 0.0;
  for (const auto& g : gauges_) {
    if (!g.has_zero_derivative()) return std::nullopt;
    shift += g.constant;
  }
  const double mid = 0.5 * (a + b);
  const Segment* seg = find_segment(mid, CoeffForm::Side::Right);
  if (!seg) {
    // inside a gap: confirm no segment intrudes
    for (const auto& s : segments_)
      if (s.a < b - 1e-14 && s.b > a + 1e-14) return std::nullopt;
    return std::make_pair(shift, 0.0);
  }
  if (seg->a > a + 1e-14 || seg->b < b - 1e-14) return std::nullopt;
  if (!seg->sigma.is_constant() || !seg->tau.is_constant()) return std::nullopt;
  return std::make_pair(seg->sigma.constant + shift, seg->tau.constant);
}

std::vector<double> PotentialSpec::singularities(double a, double b) const {
  std::vector<double> out;
  for (const auto& s : segments_) {
    if (auto p = s.sigma.singular_point())
      if (*p >= a - 1e-14 && *p <= b + 1e-14 && *p >= s.a && *p <= s.b) out.push_back(*p);
    if (auto p = s.tau.singular_point())
      if (*p >= a - 1e-14 && *p <= b + 1e-14 && *p >= s.a && *p <= s.b) out.push_back(*p);
  }
  std::sort(out.begin(), out.end());
  return out;
}

void PotentialSpec::require_coverage(double a, double b) const {
  if (a < -1e-12 || b > x_max_ + 1e-12)
    throw Error(ErrorKind::OutOfRange,
                "[" + std::to_string(a) + ", " + std::to_string(b) +
                    ") outside covered range [0, " + std::to_string(x_max_) + ")");
}

void PotentialSpec::compute_jumps() {
  sigma_jumps_.clear();
  std::vector<double> cand;
  for (const auto& s : segments_) {
    if (s.a > 0.0) cand.push_back(s.a);
    if (s.b < x_max_) cand.push_back(s.b);
    for (double p : s.sigma.knots(s.a, s.b)) cand.push_back(p);
  }
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end(),
                         [](double u, double v) { return std::fabs(u - v) < 1e-13; }),
             cand.end());
  for (double p : cand) {
    double left = 0.0, right = 0.0;
    if (const Segment* s = find_segment(p, CoeffForm::Side::Left))
      left = s->sigma.eval(p, CoeffForm::Side::Left);
    if (const Segment* s = find_segment(p, CoeffForm::Side::Right))
      right = s->sigma.eval(p, CoeffForm::Side::Right);
    double jump = right - left;
    if (std::fabs(jump) > 1e-13 * (1.0 + std::fabs(left) + std::fabs(right)))
      sigma_jumps_.push_back({p, jump});
  }
}

namespace {

// Integrate g over [lo, hi] with geometric refinement toward singular points.
// core_fn(s, eps_lo, eps_hi) supplies the analytic value of the innermost
// window [s - eps_lo, s + eps_hi]; convergence of the shells is checked.
template <class G, class CoreFn>
double integrate_singular_window(G&& g, double lo, double hi,
                                 const std::vector<double>& stops,
                                 const std::vector<double>& sing, CoreFn&& core_fn,
                                 ErrorKind kind_on_fail, const char* what) {
  std::vector<double> pts = {lo, hi};
  for (double p : stops)
    if (p > lo + 1e-14 && p < hi - 1e-14) pts.push_back(p);
  for (double s : sing) {
    if (s > lo - 1e-14 && s < hi + 1e-14) {
      if (s > lo + 1e-14 && s < hi - 1e-14) pts.push_back(s);
    }
  }
  std::sort(pts.begin(), pts.end());
  double total = 0.0;
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    double a = pts[i], b = pts[i + 1];
    if (b - a < 1e-15) continue;
    // singular endpoint?
    bool sing_left = false, sing_right = false;
    for (double s : sing) {
      if (std::fabs(s - a) < 1e-13) sing_left = true;
      if (std::fabs(s - b) < 1e-13) sing_right = true;
    }
    if (!sing_left && !sing_right) {
      total += adaptive_simpson(g, a, b, 1e-11);
      continue;
    }
    double s = sing_left ? a : b;
    double w = b - a;
    // geometric shells toward s down to kCoreEps; an integrable singularity
    // has shell contributions that die out at small widths
    double dist = w;
    double inner_shell = 0.0;
    while (dist > kCoreEps) {
      double nxt = std::max(dist * 0.5, kCoreEps);
      double u0, u1;
      if (sing_left) {
        u0 = s + nxt;
        u1 = s + dist;
      } else {
        u0 = s - dist;
        u1 = s - nxt;
      }
      inner_shell = adaptive_simpson(g, u0, u1, 1e-12);
      total += inner_shell;
      dist = nxt;
    }
    if (std::fabs(inner_shell) > 1e-3 * std::fabs(total) + 1e-6)
      throw Error(kind_on_fail,
                  std::string(what) + " does not converge near x=" + std::to_string(s));
    total += core_fn(s, sing_left ? 0.0 : kCoreEps, sing_left ? kCoreEps : 0.0);
  }
  return total;
}

}  // namespace

void PotentialSpec::verify_local_integrability() const {
  // only unit windows meeting a segment can be non-constant; gaps are free
  for (const auto& seg : segments_) {
    double lo = std::max(0.0, std::floor(seg.a) - 1.0);
    double hi = std::min(x_max_ - 1.0, seg.b);
    if (hi < lo) continue;
    double span = hi - lo;
    std::vector<double> starts;
    if (span <= 256.0) {
      for (double a = lo; a <= hi + 1e-9; a += 1.0) starts.push_back(a);
    } else {
      // wide closed-form segments: spot-check log-spaced windows
      starts.push_back(lo);
      for (int i = 1; i < 255; ++i)
        starts.push_back(lo + span * (std::pow(1.03, i) - 1.0) / (std::pow(1.03, 255) - 1.0));
      starts.push_back(hi);
    }
    for (double a : starts) {
      if (a + 1.0 > x_max_ + 1e-9) continue;
      if (constant_coeffs(a, a + 1.0)) continue;
      (void)local_size(*this, a);  // throws on non-integrable coefficients
    }
  }
}

PotentialSpec build_potential(std::vector<Segment> segments, double x_max,
                              const std::string& description) {
  if (!(x_max > 0.0)) throw Error(ErrorKind::InvalidParams, "x_max must be positive");
  std::sort(segments.begin(), segments.end(),
            [](const Segment& u, const Segment& v) { return u.a < v.a; });
  for (size_t i = 0; i < segments.size(); ++i) {
    if (!(segments[i].b > segments[i].a))
      throw Error(ErrorKind::InvalidParams, "segment with nonpositive width");
    if (i + 1 < segments.size() && segments[i].b > segments[i + 1].a + 1e-13)
      throw Error(ErrorKind::OverlappingSegments,
                  "segments overlap near x=" + std::to_string(segments[i].b));
  }
  PotentialSpec pot;
  pot.x_max_ = x_max;
  pot.segments_ = std::move(segments);
  pot.description_ = description;
  pot.compute_jumps();
  pot.verify_local_integrability();
  return pot;
}

PotentialSpec preset_potential(PresetId id, const PresetParams& p) {
  std::vector<Segment> segs;
  std::string desc;
  switch (id) {
    case PresetId::Free:
      desc = "free";
      break;
    case PresetId::DeltaComb: {
      desc = "delta_comb";
      if (p.comb_count < 1 || !(p.comb_spacing > 0.0))
        throw Error(ErrorKind::InvalidParams, "delta_comb needs count >= 1, spacing > 0");
      double last = p.comb_start + (p.comb_count - 1) * p.comb_spacing;
      if (last >= p.x_max)
        throw Error(ErrorKind::InvalidParams, "delta_comb teeth exceed x_max");
      for (int i = 0; i < p.comb_count; ++i) {
        double a = p.comb_start + i * p.comb_spacing;
        double b = (i + 1 < p.comb_count) ? a + p.comb_spacing : p.x_max;
        Segment s;
        s.a = a;
        s.b = b;
        s.sigma = CoeffForm::constant_value((i + 1) * p.comb_strength);
        s.tau = CoeffForm::zero();
        segs.push_back(s);
      }
      break;
    }
    case PresetId::Coulomb: {
      desc = "coulomb";
      if (!(p.coulomb_x0 > 0.0) || p.coulomb_x0 >= p.x_max)
        throw Error(ErrorKind::InvalidParams, "coulomb center must lie in (0, x_max)");
      Segment s;
      s.a = 0.0;
      s.b = p.x_max;
      s.sigma = CoeffForm::log_singularity(p.coulomb_x0);
      s.tau = CoeffForm::zero();
      segs.push_back(s);
      break;
    }
    case PresetId::SquareWaveOsc: {
      desc = "square_wave_osc";
      Segment s;
      s.a = 0.0;
      s.b = p.x_max;
      s.sigma = CoeffForm::closed_form(ClosedFormId::SquareWaveSigma);
      s.tau = CoeffForm::zero();
      segs.push_back(s);
      break;
    }
    case PresetId::GrowingOsc: {
      desc = "growing_osc";
      if (!(p.osc_beta > p.osc_alpha + 1.0) || p.osc_alpha < 0.0)
        throw Error(ErrorKind::InvalidParams,
                    "growing_osc needs alpha >= 0 and beta > alpha + 1");
      Segment s;
      s.a = 0.0;
      s.b = p.x_max;
      s.sigma = CoeffForm::closed_form(ClosedFormId::GrowingOscSigma);
      s.sigma.cf_alpha = p.osc_alpha;
      s.sigma.cf_beta = p.osc_beta;
      s.sigma.cf_cache = make_growing_osc(p.osc_alpha, p.osc_beta);
      s.tau = CoeffForm::zero();
      segs.push_back(s);
      break;
    }
    case PresetId::WignerVonNeumann: {
      desc = "wigner_von_neumann";
      if (!(p.wvn_t0 > 0.0))
        throw Error(ErrorKind::InvalidParams, "wigner_von_neumann needs t0 > 0");
      Segment s;
      s.a = 0.0;
      s.b = p.x_max;
      s.sigma = CoeffForm::closed_form(ClosedFormId::WignerVonNeumannSigma);
      s.sigma.cf_t0 = p.wvn_t0;
      s.tau = CoeffForm::zero();
      segs.push_back(s);
      break;
    }
    case PresetId::ExpDecay: {
      desc = "exp_decay";
      Segment s;
      s.a = 0.0;
      s.b = p.x_max;
      s.sigma = CoeffForm::closed_form(ClosedFormId::ExpDecaySigma);
      s.tau = CoeffForm::zero();
      segs.push_back(s);
      break;
    }
  }
  return build_potential(std::move(segs), p.x_max, desc);
}

PresetId preset_from_name(const std::string& name) {
  if (name == "free") return PresetId::Free;
  if (name == "delta_comb") return PresetId::DeltaComb;
  if (name == "coulomb") return PresetId::Coulomb;
  if (name == "square_wave_osc") return PresetId::SquareWaveOsc;
  if (name == "growing_osc") return PresetId::GrowingOsc;
  if (name == "wigner_von_neumann") return PresetId::WignerVonNeumann;
  if (name == "exp_decay") return PresetId::ExpDecay;
  throw Error(ErrorKind::InvalidParams, "unknown preset '" + name + "'");
}

PotentialSpec gauge_transform(const PotentialSpec& pot, const GaugeTheta& theta) {
  PotentialSpec out = pot;
  out.gauges_.push_back(theta);
  out.description_ = pot.description().empty() ? "gauged" : pot.description() + "+gauge";
  return out;
}

BoundaryAngle::BoundaryAngle(double a) : alpha(a) {
  if (!(a >= 0.0 && a < kPi))
    throw Error(ErrorKind::InvalidParams, "boundary angle must lie in [0, pi)");
}

BoundaryAngle relabel_boundary(BoundaryAngle alpha1, double theta0) {
  if (alpha1.alpha == 0.0) return alpha1;  // Dirichlet fixed point (cot = inf)
  double c = 1.0 / std::tan(alpha1.alpha) - theta0;
  return BoundaryAngle(std::atan2(1.0, c));  // atan2(1, c) lies in (0, pi)
}

double local_size(const PotentialSpec& pot, double x) {
  pot.require_coverage(x, x + 1.0);
  double a = x, b = x + 1.0;
  auto stops = pot.breakpoints(a, b);
  auto sing = pot.singularities(a, b);

  auto gauge_sum = [&](double s) {  // additive smooth part at a singularity

    double v = 0.0;
    for (const auto& g : pot.gauges()) v += g.theta(s);
    return v;
  };

  // \int sigma^2 with analytic log^2 core
  auto sig_sq = [&](double t) {
    double v = pot.sigma(t);
    return v * v;
  };
  auto core_sigma = [&](double s, double eps_lo, double eps_hi) {
    // sigma = log|t-s| + g(s) + O(eps): per-side closed forms
    double g = gauge_sum(s);
    auto one_side = [&](double eps) {
      if (eps <= 0.0) return 0.0;
      double le = std::log(eps);
      double i_log2 = eps * (le * le - 2.0 * le + 2.0);
      double i_log = eps * (le - 1.0);
      return i_log2 + 2.0 * g * i_log + g * g * eps;
    };
    return one_side(eps_lo) + one_side(eps_hi);
  };
  double s2 = integrate_singular_window(sig_sq, a, b, stops, sing, core_sigma,
                                        ErrorKind::SigmaNotLocallyL2, "int sigma^2");

  auto abs_tau = [&](double t) { return std::fabs(pot.tau(t)); };
  auto core_tau = [&](double, double eps_lo, double eps_hi) {
    // tau forms carry no singular variants; the core contributes O(eps)
    return 0.0 * (eps_lo + eps_hi);
  };
  double t1 = integrate_singular_window(abs_tau, a, b, stops, sing, core_tau,
                                        ErrorKind::NonIntegrableTau, "int |tau|");
  if (!std::isfinite(s2) || !std::isfinite(t1))
    throw Error(ErrorKind::SigmaNotLocallyL2, "local size not finite");
  return std::sqrt(s2) + t1;
}

}  // namespace h1spec
