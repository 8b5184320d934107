#include "h1spec/profile.hpp"

#include <algorithm>
#include <cmath>

#include "h1spec/errors.hpp"
#include "h1spec/special.hpp"

namespace h1spec {

ProfileForm ProfileForm::box(double a, double b, double height) {
  ProfileForm f;
  if (!(b > a)) throw Error(ErrorKind::InvalidParams, "box needs b > a");
  f.segs_ = {{a, b, height, height}};
  f.kind_ = ProfileFormKind::Box;
  return f;
}

ProfileForm ProfileForm::triangle(double a, double b, double fa, double fb) {
  ProfileForm f;
  if (!(b > a)) throw Error(ErrorKind::InvalidParams, "triangle needs b > a");
  f.segs_ = {{a, b, fa, fb}};
  f.kind_ = ProfileFormKind::Triangle;
  return f;
}

ProfileForm ProfileForm::piecewise_linear(std::vector<LinSeg> segs, ProfileFormKind kind) {
  ProfileForm f;
  std::sort(segs.begin(), segs.end(), [](const LinSeg& u, const LinSeg& v) { return u.a < v.a; });
  for (size_t i = 0; i < segs.size(); ++i) {
    if (!(segs[i].b > segs[i].a))
      throw Error(ErrorKind::InvalidParams, "piece with nonpositive width");
    if (i + 1 < segs.size() && segs[i].b > segs[i + 1].a + 1e-15)
      throw Error(ErrorKind::InvalidParams, "overlapping pieces");
  }
  f.segs_ = std::move(segs);
  f.kind_ = kind;
  return f;
}

ProfileForm ProfileForm::sampled_table(const std::vector<double>& xs,
                                       const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw Error(ErrorKind::InvalidParams, "table needs >= 2 samples");
  std::vector<LinSeg> segs;
  for (size_t i = 0; i + 1 < xs.size(); ++i) {
    if (!(xs[i + 1] > xs[i]))
      throw Error(ErrorKind::InvalidParams, "table abscissas must increase");
    if (!std::isfinite(ys[i]) || !std::isfinite(ys[i + 1]))
      throw Error(ErrorKind::InvalidParams, "table values must be finite");
    segs.push_back({xs[i], xs[i + 1], ys[i], ys[i + 1]});
  }
  return piecewise_linear(std::move(segs), ProfileFormKind::SampledTable);
}

double ProfileForm::eval(double y) const {
  for (const auto& s : segs_) {
    if (y >= s.a && y < s.b) return s.fa + s.slope() * (y - s.a);
  }
  return 0.0;
}

double ProfileForm::cumulative(double y) const {
  double acc = 0.0;
  for (const auto& s : segs_) {
    if (y <= s.a) break;
    double up = std::min(y, s.b);
    double h = up - s.a;
    double f_up = s.fa + s.slope() * h;
    acc += 0.5 * (s.fa + f_up) * h;
  }
  return acc;
}

double ProfileForm::total_mass() const {
  double acc = 0.0;
  for (const auto& s : segs_) acc += 0.5 * (s.fa + s.fb) * (s.b - s.a);
  return acc;
}

double ProfileForm::l1_norm() const {
  double acc = 0.0;
  for (const auto& s : segs_) {
    double h = s.b - s.a;
    if (s.fa * s.fb >= 0.0) {
      acc += 0.5 * std::fabs(s.fa + s.fb) * h;
    } else {
      // sign change inside the piece
      double t = s.fa / (s.fa - s.fb);  // zero crossing fraction
      acc += 0.5 * std::fabs(s.fa) * t * h + 0.5 * std::fabs(s.fb) * (1.0 - t) * h;
    }
  }
  return acc;
}

double ProfileForm::l2_norm_sq() const {
  double acc = 0.0;
  for (const auto& s : segs_) {
    double h = s.b - s.a;
    // \int (fa + m t)^2 dt over [0,h] = h (fa^2 + fa fb + fb^2) / 3
    acc += h * (s.fa * s.fa + s.fa * s.fb + s.fb * s.fb) / 3.0;
  }
  return acc;
}

std::complex<double> ProfileForm::fourier(double k) const {
  const std::complex<double> w(0.0, 2.0 * k);
  std::complex<double> acc(0.0, 0.0);
  for (const auto& s : segs_) {
    double h = s.b - s.a;
    std::complex<double> wh = w * h;
    std::complex<double> base = std::exp(w * s.a);
    // \int_a^b (fa + m (y-a)) e^{wy} dy = e^{wa} h (fa phi_a(wh) + m h phi_b(wh))
    acc += base * h * (s.fa * phi_a(wh) + s.slope() * h * phi_b(wh));
  }
  return acc;
}

std::vector<double> ProfileForm::knots() const {
  std::vector<double> ks;
  for (const auto& s : segs_) {
    ks.push_back(s.a);
    ks.push_back(s.b);
  }
  return ks;
}

ProfileForm ProfileForm::scaled(double factor) const {
  ProfileForm f = *this;
  for (auto& s : f.segs_) {
    s.fa *= factor;
    s.fb *= factor;
  }
  return f;
}

std::vector<double> Profile::knots() const {
  std::vector<double> ks = s_form.knots();
  auto kt = t_form.knots();
  ks.insert(ks.end(), kt.begin(), kt.end());
  ks.push_back(-half_width);
  ks.push_back(half_width);
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end(),
                       [](double a, double b) { return std::fabs(a - b) < 1e-14; }),
           ks.end());
  return ks;
}

void Profile::validate() const {
  if (!(half_width > 0.0))
    throw Error(ErrorKind::InvalidParams, "profile half_width must be positive");
  for (const ProfileForm* f : {&s_form, &t_form}) {
    for (const auto& s : f->pieces()) {
      if (s.a < -half_width - 1e-12 || s.b > half_width + 1e-12)
        throw Error(ErrorKind::InvalidParams,
                    "profile support exceeds [-half_width, half_width]");
      if (!std::isfinite(s.fa) || !std::isfinite(s.fb))
        throw Error(ErrorKind::InvalidParams, "profile values must be finite");
    }
  }
}

std::complex<double> profile_fourier(const Profile& p, double k, ProfilePart which) {
  return which == ProfilePart::S ? p.s_form.fourier(k) : p.t_form.fourier(k);
}

double profile_pairing_polynomial(const Profile& p, const std::vector<double>& coeffs) {
  auto poly = [&](double y) {
    double v = 0.0;
    for (size_t i = coeffs.size(); i-- > 0;) v = v * y + coeffs[i];
    return v;
  };
  auto dpoly = [&](double y) {
    double v = 0.0;
    for (size_t i = coeffs.size(); i-- > 1;) v = v * y + coeffs[i] * double(i);
    return v;
  };
  // both S*phi' and T*phi are piecewise polynomial; exact with a few GL points
  double acc = 0.0;
  for (const auto& s : p.s_form.pieces()) {
    double h = s.b - s.a, m = s.slope();
    // 4-point GL is exact for degree <= 7
    static const double gx[4] = {-0.86113631159405258, -0.33998104358485626,
                                 0.33998104358485626, 0.86113631159405258};
    static const double gw[4] = {0.34785484513745386, 0.65214515486254614,
                                 0.65214515486254614, 0.34785484513745386};
    for (int i = 0; i < 4; ++i) {
      double y = s.a + 0.5 * h * (gx[i] + 1.0);
      acc -= 0.5 * h * gw[i] * (s.fa + m * (y - s.a)) * dpoly(y);
    }
  }
  for (const auto& s : p.t_form.pieces()) {
    double h = s.b - s.a, m = s.slope();
    static const double gx[4] = {-0.86113631159405258, -0.33998104358485626,
                                 0.33998104358485626, 0.86113631159405258};
    static const double gw[4] = {0.34785484513745386, 0.65214515486254614,
                                 0.65214515486254614, 0.34785484513745386};
    for (int i = 0; i < 4; ++i) {
      double y = s.a + 0.5 * h * (gx[i] + 1.0);
      acc += 0.5 * h * gw[i] * (s.fa + m * (y - s.a)) * poly(y);
    }
  }
  return acc;
}

Profile delta_decomposition(double half_width) {
  if (!(half_width > 0.0))
    throw Error(ErrorKind::InvalidParams, "half_width must be positive");
  Profile p;
  p.half_width = half_width;
  p.s_form = ProfileForm::triangle(0.0, half_width, 1.0, 0.0);
  p.t_form = ProfileForm::box(0.0, half_width, 1.0 / half_width);
  p.label = "delta_decomposition";
  return p;
}

}  // namespace h1spec
