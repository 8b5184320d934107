#include <doctest.h>

#include <cmath>

#include "h1spec/errors.hpp"
#include "h1spec/spectral.hpp"

using namespace h1spec;

namespace {

PotentialSpec free_pot(double x_max = 200.0) { return build_potential({}, x_max, "free"); }

PotentialSpec exp_decay_pot(double x_max = 200.0) {
  PresetParams p;
  p.x_max = x_max;
  return preset_potential(PresetId::ExpDecay, p);
}

}  // namespace

TEST_CASE("free sqrt-weighted carmona density is sqrt(E)/pi for every x") {
  PotentialSpec pot = free_pot();
  for (double E : {0.5, 1.0, 2.0, 4.0}) {
    for (double x : {5.0, 20.0}) {
      double v = carmona_density(pot, BoundaryAngle(0.0), x, E, DensityVariant::SqrtWeighted);
      CHECK(std::fabs(v - std::sqrt(E) / M_PI) < 1e-8 * std::sqrt(E) / M_PI);
    }
  }
}

TEST_CASE("free standard carmona density at E=1, x=pi/2") {
  double v = carmona_density(free_pot(), BoundaryAngle(0.0), M_PI / 2.0, 1.0,
                             DensityVariant::Standard);
  CHECK(v == doctest::Approx(1.0 / M_PI).epsilon(1e-10));
}

TEST_CASE("carmona density positivity") {
  PotentialSpec pot = exp_decay_pot();
  for (double E : {0.3, 1.7}) {
    for (double a : {0.0, 1.0, 2.5}) {
      double v = carmona_density(pot, BoundaryAngle(a), 15.0, E, DensityVariant::Standard);
      CHECK(v > 0.0);
      CHECK(std::isfinite(v));
    }
  }
  CHECK_THROWS_AS(
      carmona_density(pot, BoundaryAngle(0.0), 5.0, -1.0, DensityVariant::SqrtWeighted),
      Error);
}

TEST_CASE("cesaro averages") {
  PotentialSpec pot = free_pot();
  // E=1: ||T|| = 1 for k = 1, so the average is exactly 1
  CesaroResult c = cesaro_average(pot, 1.0, 100.0);
  CHECK(!c.overflow);
  CHECK(c.value >= 1.0 - 1e-9);
  CHECK(c.value <= 2.0);

  // E=-1: hyperbolic growth ~ e^{2l}/(2l)
  CesaroResult h = cesaro_average(pot, -1.0, 20.0);
  CHECK(!h.overflow);
  CHECK(h.value > 1e10);
  CHECK(h.log_value == doctest::Approx(2.0 * 20.0 - std::log(2.0 * 20.0)).epsilon(0.05));

  // l -> 0+: T ~ I
  CesaroResult tiny = cesaro_average(pot, 1.0, 1e-4);
  CHECK(tiny.value == doctest::Approx(1.0).epsilon(1e-3));

  // overflow handling far below the spectrum
  CesaroResult big = cesaro_average(pot, -4.0, 200.0);
  CHECK(big.overflow);
  CHECK(big.log_value == doctest::Approx(2.0 * 2.0 * 200.0 - std::log(4.0 * 200.0)).epsilon(0.05));
}

TEST_CASE("simon-stolz integral") {
  PotentialSpec pot = free_pot();
  double v100 = simon_stolz_integral(pot, 1.0, 100.0);
  CHECK(v100 == doctest::Approx(100.0).epsilon(1e-8));
  CHECK(v100 >= 50.0);

  // E = -1: converges, bounded by ~1
  double v20 = simon_stolz_integral(pot, -1.0, 20.0);
  double v40 = simon_stolz_integral(pot, -1.0, 40.0);
  CHECK(v40 >= v20);               // monotone in L
  CHECK(v40 <= 1.0);
  CHECK(v40 - v20 < 1e-10);        // tail already negligible

  double v_small = simon_stolz_integral(pot, 1.0, 1e-6);
  CHECK(v_small == doctest::Approx(1e-6).epsilon(1e-6));
}

TEST_CASE("monotonicity of simon-stolz in L on a nontrivial potential") {
  PresetParams pp;
  pp.x_max = 120.0;
  pp.comb_strength = 0.6;
  PotentialSpec pot = preset_potential(PresetId::DeltaComb, pp);
  double prev = 0.0;
  for (double L : {5.0, 10.0, 20.0, 40.0, 80.0}) {
    double v = simon_stolz_integral(pot, 1.3, L);
    CHECK(v >= prev - 1e-12);
    prev = v;
  }
}

TEST_CASE("transfer L^p norms over energy windows") {
  PotentialSpec pot = free_pot();
  for (double x : {3.0, 7.0}) {
    double v = transfer_lp_norm(pot, x, 4.0, 1.0, 2.0, 64);
    CHECK(std::isfinite(v));
    // ||T(E;x)|| <= max(k, 1/k) * basis factor; loose cap
    CHECK(v < 20.0);
  }
  CHECK(transfer_lp_norm(pot, 5.0, 4.0, 1.5, 1.5, 64) == 0.0);

  PotentialSpec ed = exp_decay_pot();
  std::vector<double> vals;
  for (double x : {10.0, 20.0, 40.0})
    vals.push_back(transfer_lp_norm(ed, x, 4.0, 1.0, 2.0, 64));
  double worst_ratio = 0.0;
  for (double v : vals)
    for (double w : vals) worst_ratio = std::max(worst_ratio, v / w);
  CHECK(worst_ratio < 2.0);  // bounded sequence (short-range potential)
}

TEST_CASE("short-range density") {
  // free potential: w = sqrt(E)/pi exactly, stop at the first unit step
  PotentialSpec fp = free_pot();
  ShortrangeResult r = shortrange_density(fp, BoundaryAngle(0.0), 2.0, 1e-8, 100.0);
  CHECK(r.converged);
  CHECK(r.x_stop == doctest::Approx(1.0));
  CHECK(r.w == doctest::Approx(std::sqrt(2.0) / M_PI).epsilon(1e-12));

  PotentialSpec ed = exp_decay_pot();
  for (double E : {0.5, 1.0, 2.0}) {
    ShortrangeResult w30 = shortrange_density(ed, BoundaryAngle(0.0), E, 0.0, 30.0);
    ShortrangeResult w60 = shortrange_density(ed, BoundaryAngle(0.0), E, 0.0, 60.0);
    CHECK(w30.w > 0.0);
    CHECK(std::fabs(w60.w - w30.w) <= 1e-8);
    ShortrangeResult wn = shortrange_density(ed, BoundaryAngle(M_PI / 2.0), E, 0.0, 30.0);
    CHECK(wn.w > 0.0);
  }
}

TEST_CASE("classification of the free potential") {
  PotentialSpec pot = free_pot();
  DiagnosticReport rep = classify_grid(pot, {0.5, 1.0, 2.0});
  REQUIRE(rep.rows.size() == 3);
  for (const auto& row : rep.rows) {
    CHECK(row.tag == SpectralTag::AcSupportCandidate);
    CHECK(row.simon_stolz > 0.0);
  }

  DiagnosticReport neg = classify_grid(pot, {-1.0});
  CHECK(neg.rows.front().tag == SpectralTag::NotAc);

  DiagnosticReport empty = classify_grid(pot, {});
  CHECK(empty.rows.empty());

  // determinism: identical inputs give identical tags and values
  DiagnosticReport again = classify_grid(pot, {0.5, 1.0, 2.0});
  for (size_t i = 0; i < rep.rows.size(); ++i) {
    CHECK(rep.rows[i].tag == again.rows[i].tag);
    CHECK(rep.rows[i].cesaro[0] == again.rows[i].cesaro[0]);
    CHECK(rep.rows[i].simon_stolz == again.rows[i].simon_stolz);
  }
}

TEST_CASE("vague convergence of the sqrt-weighted measures at desk scale") {
  // int h dnu_x stabilizes under x-doubling for a short-range potential
  PotentialSpec ed = exp_decay_pot();
  auto window = [](double E) {  // compactly supported in (0, infinity)
    if (E <= 0.6 || E >= 2.4) return 0.0;
    double t = (E - 0.6) / 1.8;
    double s = std::sin(M_PI * t);
    return s * s;
  };
  auto integral_at = [&](double x) {
    int n = 48;  // Simpson panels over [0.6, 2.4]
    double h = 1.8 / n, sum = 0.0;
    for (int i = 0; i <= n; ++i) {
      double E = 0.6 + i * h;
      double wgt = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      sum += wgt * window(E) *
             carmona_density(ed, BoundaryAngle(0.0), x, E, DensityVariant::SqrtWeighted);
    }
    return sum * h / 3.0;
  };
  double i20 = integral_at(20.0);
  double i40 = integral_at(40.0);
  CHECK(std::fabs(i40 - i20) < 1e-4);
}

TEST_CASE("gauge-changed densities integrate to the same vague limits") {
  // the pointwise approximants differ between gauges wherever theta != 0,
  // but their integrals against a fixed window agree increasingly well as
  // x grows (stationary-phase averaging of the oscillatory discrepancy)
  PotentialSpec pot = exp_decay_pot();
  PotentialSpec g = gauge_transform(pot, GaugeTheta::sinusoid(0.3, 1.0));
  auto window = [](double E) {
    if (E <= 0.6 || E >= 2.4) return 0.0;
    double t = (E - 0.6) / 1.8, s = std::sin(M_PI * t);
    return s * s;
  };
  auto integral = [&](const PotentialSpec& p, double x) {
    int n = std::max(64, int(8 * x));  // resolve the E-oscillation at scale x
    double h = 1.8 / n, sum = 0.0;
    for (int i = 0; i <= n; ++i) {
      double E = 0.6 + i * h;
      double wgt = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      sum += wgt * window(E) *
             carmona_density(p, BoundaryAngle(0.0), x, E, DensityVariant::Standard);
    }
    return sum * h / 3.0;
  };
  double d10 = std::fabs(integral(pot, 10.0) - integral(g, 10.0));
  double d20 = std::fabs(integral(pot, 20.0) - integral(g, 20.0));
  double d40 = std::fabs(integral(pot, 40.0) - integral(g, 40.0));
  CHECK(d20 < d10);
  CHECK(d40 < d20);
  CHECK(d40 < 1e-4);
}

TEST_CASE("classification rows carry the L^p energy-window norm") {
  PotentialSpec pot = free_pot(150.0);
  ClassifyParams prm;
  prm.l0 = 10.0;
  DiagnosticReport rep = classify_grid(pot, {1.0}, prm);
  double direct = transfer_lp_norm(pot, 10.0, 4.0, 0.75, 1.25, 16);
  CHECK(rep.rows.front().lp_norm == doctest::Approx(direct).epsilon(1e-12));
  CHECK(rep.rows.front().lp_norm > 0.0);
  prm.lp_halfwidth = 0.0;  // disabled
  DiagnosticReport off = classify_grid(pot, {1.0}, prm);
  CHECK(off.rows.front().lp_norm == 0.0);
}
