#include <doctest.h>

#include <cmath>
#include <random>

#include "h1spec/errors.hpp"
#include "h1spec/propagate.hpp"
#include "h1spec/prufer.hpp"
#include "h1spec/profile.hpp"

using namespace h1spec;

namespace {

PotentialSpec one_bump(double center, double amplitude, double x_max, double hw = 1.0) {
  auto prof = std::make_shared<const Profile>(delta_decomposition(hw));
  Segment s;
  s.a = center - hw;
  s.b = center + hw;
  s.sigma = CoeffForm::scaled_profile(prof, ProfilePart::S, center, amplitude);
  s.tau = CoeffForm::scaled_profile(prof, ProfilePart::T, center, amplitude);
  return build_potential({s}, x_max, "one-bump");
}

}  // namespace

TEST_CASE("to_prufer examples") {
  PruferState a = to_prufer(2.0, 0.0, 2.0);
  CHECK(std::exp(a.log_r) == doctest::Approx(1.0));
  CHECK(a.theta_unwrapped() == doctest::Approx(0.0));

  PruferState b = to_prufer(0.0, 1.0, 3.7);
  CHECK(std::exp(b.log_r) == doctest::Approx(1.0));
  CHECK(b.theta_unwrapped() == doctest::Approx(M_PI / 2.0));

  PruferState c = to_prufer(1.0, 1.0, 1.0);
  CHECK(std::exp(c.log_r) == doctest::Approx(std::sqrt(2.0)));
  CHECK(c.theta_unwrapped() == doctest::Approx(M_PI / 4.0));

  CHECK_THROWS_AS(to_prufer(0.0, 0.0, 1.0), Error);

  // hint lifts to the nearest branch
  PruferState d = to_prufer(0.0, 1.0, 1.0, 6.0 * M_PI);
  CHECK(d.theta_unwrapped() == doctest::Approx(6.0 * M_PI + M_PI / 2.0));
}

TEST_CASE("free flow: theta = theta0 + k x, logR = 0") {
  PotentialSpec free_pot = build_potential({}, 100.0);
  auto states = prufer_flow(free_pot, 1.7, 0.3, 0.0, 50.0, 1e-12);
  const PruferState& last = states.back();
  CHECK(last.theta_unwrapped() == doctest::Approx(0.3 + 1.7 * 50.0).epsilon(1e-14));
  CHECK(last.log_r == 0.0);
}

TEST_CASE("constant sigma: initial logR slope is -sigma at theta0 = 0") {
  Segment s;
  s.a = 0.0;
  s.b = 10.0;
  s.sigma = CoeffForm::constant_value(0.7);
  PotentialSpec pot = build_potential({s}, 10.0);
  double h = 1e-3;
  auto states = prufer_flow(pot, 1.0, 0.0, 0.0, h, 1e-13);
  CHECK(states.back().log_r / h == doctest::Approx(-0.7).epsilon(1e-2));
}

TEST_CASE("reconstruction matches transfer-propagated vectors") {
  std::vector<PotentialSpec> suite;
  suite.push_back(one_bump(5.0, 0.4, 20.0));
  PresetParams pe;
  pe.x_max = 20.0;
  suite.push_back(preset_potential(PresetId::ExpDecay, pe));
  PresetParams pc;
  pc.x_max = 20.0;
  pc.coulomb_x0 = 3.0;
  suite.push_back(preset_potential(PresetId::Coulomb, pc));
  PresetParams pd;
  pd.x_max = 20.0;
  pd.comb_strength = 0.5;
  suite.push_back(preset_potential(PresetId::DeltaComb, pd));

  for (const auto& pot : suite) {
    for (double k : {0.8, 1.0, 1.9}) {
      double theta0 = 0.6;
      double x_end = 14.0;
      auto states = prufer_flow(pot, k, theta0, 0.0, x_end, 1e-11);
      double uq, u;
      states.back().reconstruct(uq, u);
      // same initial vector, propagated as a linear system
      Vector2c v0(k * std::cos(theta0), std::sin(theta0));
      TransferResult t = transfer(pot, Complex(k * k, 0.0), x_end, 0.0, 1e-12);
      Vector2c v = t.matrix() * v0;
      double scale = std::max(1.0, v.norm());
      CHECK(std::abs(v(0).real() - uq) / scale < 1e-7);
      CHECK(std::abs(v(1).real() - u) / scale < 1e-7);
    }
  }
}

TEST_CASE("phase is strictly increasing with slope k on free gaps") {
  PotentialSpec pot = one_bump(5.0, 0.4, 30.0);
  auto states = prufer_flow(pot, 1.2, 0.0, 0.0, 3.0, 1e-12);  // fully inside the gap
  CHECK(states.back().theta_unwrapped() == doctest::Approx(1.2 * 3.0).epsilon(1e-14));
}

TEST_CASE("k-derivatives: free case and finite-difference oracle") {
  PotentialSpec free_pot = build_potential({}, 40.0);
  auto states = prufer_flow_with_k_derivatives(free_pot, 1.1, 0.2, 0.0, 30.0, 1e-12);
  CHECK(states.back().dtheta_dk == doctest::Approx(30.0).epsilon(1e-12));
  CHECK(states.back().d2theta_dk2 == doctest::Approx(0.0));
  CHECK(states.back().dlogr_dk == doctest::Approx(0.0));

  PotentialSpec pot = one_bump(5.0, 0.3, 20.0);
  double k = 1.0, x_end = 12.0, theta0 = 0.4;
  auto with = prufer_flow_with_k_derivatives(pot, k, theta0, 0.0, x_end, 1e-12);
  double delta = 1e-4;
  auto up = prufer_flow(pot, k + delta, theta0, 0.0, x_end, 1e-12);
  auto dn = prufer_flow(pot, k - delta, theta0, 0.0, x_end, 1e-12);
  double fd_theta = (up.back().theta_unwrapped() - dn.back().theta_unwrapped()) / (2 * delta);
  double fd_logr = (up.back().log_r - dn.back().log_r) / (2 * delta);
  CHECK(with.back().dtheta_dk == doctest::Approx(fd_theta).epsilon(1e-5));
  CHECK(std::fabs(with.back().dlogr_dk - fd_logr) < 1e-5);

  // second derivative against a wider central stencil
  double d2 = 1e-3;
  auto up2 = prufer_flow(pot, k + d2, theta0, 0.0, x_end, 1e-12);
  auto dn2 = prufer_flow(pot, k - d2, theta0, 0.0, x_end, 1e-12);
  auto mid = prufer_flow(pot, k, theta0, 0.0, x_end, 1e-12);
  double fd2 = (up2.back().theta_unwrapped() - 2.0 * mid.back().theta_unwrapped() +
                dn2.back().theta_unwrapped()) /
               (d2 * d2);
  CHECK(std::fabs(with.back().d2theta_dk2 - fd2) < 1e-3 * (1.0 + std::fabs(fd2)));
}

TEST_CASE("gap advance is exact") {
  // gap = 0 is the identity
  PruferState st = to_prufer(1.0, 0.5, 1.0);
  ExactLength zero;
  PruferState same = gap_advance(st, zero);
  CHECK(same.theta_unwrapped() == st.theta_unwrapped());
  CHECK(same.log_r == st.log_r);

  // moderate dyadic gap: agrees with long double arithmetic
  {
    PruferState s0 = to_prufer(0.37 * std::cos(0.0) * 0.37, 0.0, 0.37);
    ExactLength gap;
    gap.int_part = (1 << 20);
    gap.frac = 0.5;
    PruferState s1 = gap_advance(s0, gap);
    long double ref = 0.37L * ((long double)(1 << 20) + 0.5L);
    long double got = (long double)s1.theta.hi + (long double)s1.theta.lo;
    CHECK(std::fabs(double(got - ref)) < 1e-9);
  }

  // k=1, gap = 1e16: reduced phase against the frozen 60-digit reference
  {
    PruferState s0 = to_prufer(1.0, 0.0, 1.0);
    s0.theta = DD(0.3);
    ExactLength gap;
    gap.int_part = 10000000000000000ll;
    PruferState s1 = gap_advance(s0, gap);
    // sin(0.3 + 1e16 mod 2pi), 60-digit value
    CHECK(dd_sin(s1.theta) == doctest::Approx(0.5598190475282051382).epsilon(1e-9));
    CHECK(s1.log_r == s0.log_r);
  }

  // sin(theta) is consistent before/after adding an exact multiple of 2pi-free gap
  {
    PruferState s0 = to_prufer(2.0 * std::cos(1.1), std::sin(1.1) / 1.0, 2.0, 1.1);
    ExactLength gap;
    gap.int_part = 1;  // k * 1 advance
    PruferState s1 = gap_advance(s0, gap);
    CHECK(s1.theta_unwrapped() == doctest::Approx(s0.theta_unwrapped() + 2.0).epsilon(1e-14));
  }

  // derivative bookkeeping: dtheta/dk advances by the gap length
  {
    PruferState s0 = to_prufer(1.0, 0.0, 1.3);
    s0.has_derivs = true;
    s0.dtheta_dk = 2.0;
    ExactLength gap;
    gap.int_part = 7;
    PruferState s1 = gap_advance(s0, gap);
    CHECK(s1.dtheta_dk == doctest::Approx(9.0));
    CHECK(s1.d2theta_dk2 == 0.0);
  }

  CHECK_THROWS_AS(gap_advance(st, ExactLength{-1, 0.0}), Error);
}

TEST_CASE("prufer flow across a log singularity stays finite") {
  PresetParams pc;
  pc.x_max = 10.0;
  pc.coulomb_x0 = 3.0;
  PotentialSpec pot = preset_potential(PresetId::Coulomb, pc);
  auto states = prufer_flow(pot, 1.0, 0.1, 0.0, 6.0, 1e-10);
  for (const auto& s : states) {
    CHECK(std::isfinite(s.log_r));
    CHECK(std::isfinite(s.theta_unwrapped()));
  }
}

TEST_CASE("prufer radii are comparable to transfer-matrix norms") {
  // with theta1 = 0, theta2 = pi/2 and c(k) = 2(max(k,1/k)+1):
  //   (1/c) max(R1, R2) <= ||T(k^2; x)|| <= c max(R1, R2)
  PresetParams pp;
  pp.x_max = 40.0;
  pp.comb_strength = 0.6;
  PotentialSpec pot = preset_potential(PresetId::DeltaComb, pp);
  for (double k : {0.5, 1.0, 2.0}) {
    double c = 2.0 * (std::max(k, 1.0 / k) + 1.0);
    for (double x : {5.0, 13.0, 27.0}) {
      auto s1 = prufer_flow(pot, k, 0.0, 0.0, x, 1e-11);
      auto s2 = prufer_flow(pot, k, M_PI / 2.0, 0.0, x, 1e-11);
      double rmax = std::exp(std::max(s1.back().log_r, s2.back().log_r));
      TransferResult t = transfer(pot, Complex(k * k, 0.0), x, 0.0, 1e-11);
      double tn = std::exp(t.log_norm());
      CHECK(tn <= c * rmax * (1.0 + 1e-9));
      CHECK(tn >= rmax / c * (1.0 - 1e-9));
    }
  }
}

TEST_CASE("dtheta/dk at a far bump grows like the bump position") {
  // free region: dtheta/dk = x exactly; a single far bump perturbs it by O(1),
  // so the measured ratio |dtheta/dk| / x_n stays near 1
  double xn = 100.0;
  PotentialSpec pot = one_bump(xn, 0.3, 110.0);
  auto states = prufer_flow_with_k_derivatives(pot, 1.0, 0.4, 0.0, xn + 1.0, 1e-11);
  double h = states.back().dtheta_dk;
  double measured_c = std::fabs(h) / xn;
  CHECK(measured_c > 0.5);
  CHECK(measured_c < 2.0);
}

TEST_CASE("property: prufer reconstruction agrees with transfer on random potentials") {
  std::mt19937 rng(77);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int rep = 0; rep < 6; ++rep) {
    Segment s;
    s.a = 2.0 + 3.0 * u01(rng);
    s.b = s.a + 3.0 + 4.0 * u01(rng);
    s.sigma = CoeffForm::constant_value(1.2 * (u01(rng) - 0.5));
    s.tau = CoeffForm::constant_value(1.2 * (u01(rng) - 0.5));
    PotentialSpec pot = build_potential({s}, 20.0, "random");
    double k = 0.5 + 1.5 * u01(rng);
    double theta0 = 2.0 * M_PI * u01(rng);
    double x_end = 12.0 + 6.0 * u01(rng);
    auto states = prufer_flow(pot, k, theta0, 0.0, x_end, 1e-11);
    double uq, uu;
    states.back().reconstruct(uq, uu);
    Vector2c v0(k * std::cos(theta0), std::sin(theta0));
    Vector2c v = transfer(pot, Complex(k * k, 0.0), x_end, 0.0, 1e-12).matrix() * v0;
    double scale = std::max(1.0, v.norm());
    CHECK(std::abs(v(0).real() - uq) / scale < 1e-7);
    CHECK(std::abs(v(1).real() - uu) / scale < 1e-7);
    // theta never wraps and stays monotone within free stretches
    CHECK(states.back().theta_unwrapped() > theta0);
  }
}
