#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "h1spec/errors.hpp"
#include "h1spec/profile.hpp"
#include "h1spec/quadrature.hpp"

using namespace h1spec;
using std::complex;

TEST_CASE("delta decomposition basics") {
  Profile p = delta_decomposition(1.0);
  CHECK(p.S(0.0) == doctest::Approx(1.0));
  CHECK(p.S(0.999999) == doctest::Approx(0.0).epsilon(1e-4));
  CHECK(p.t_form.total_mass() == doctest::Approx(1.0));

  // pairing <S' + T, phi> = phi(0) for polynomial test functions
  CHECK(profile_pairing_polynomial(p, {1.0}) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(profile_pairing_polynomial(p, {0.0, 1.0}) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(profile_pairing_polynomial(p, {2.0, -3.0, 0.5, 1.0}) ==
        doctest::Approx(2.0).epsilon(1e-12));

  // ||S||_2^2 = Delta/3
  Profile p2 = delta_decomposition(0.5);
  CHECK(p2.s_form.l2_norm_sq() == doctest::Approx(0.5 / 3.0).epsilon(1e-14));
}

TEST_CASE("distributional pairing: closed form vs quadrature") {
  Profile p = delta_decomposition(1.0);
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int rep = 0; rep < 10; ++rep) {
    std::vector<double> coeffs = {u(rng), u(rng), u(rng), u(rng)};
    auto poly = [&](double y) {
      return coeffs[0] + y * (coeffs[1] + y * (coeffs[2] + y * coeffs[3]));
    };
    auto dpoly = [&](double y) {
      return coeffs[1] + y * (2.0 * coeffs[2] + y * 3.0 * coeffs[3]);
    };
    double quad = -adaptive_simpson([&](double y) { return p.S(y) * dpoly(y); }, -1.0, 1.0,
                                    1e-13) +
                  adaptive_simpson([&](double y) { return p.T(y) * poly(y); }, -1.0, 1.0,
                                   1e-13);
    double closed = profile_pairing_polynomial(p, coeffs);
    CHECK(quad == doctest::Approx(closed).epsilon(1e-10));
    CHECK(closed == doctest::Approx(coeffs[0]).epsilon(1e-10));  // <delta, phi> = phi(0)
  }
}

TEST_CASE("profile fourier closed forms") {
  // box of height 1 on (0,1), k = pi/2: (e^{i pi} - 1)/(i pi) = 2i/pi
  ProfileForm box = ProfileForm::box(0.0, 1.0, 1.0);
  complex<double> v = box.fourier(M_PI / 2.0);
  CHECK(v.real() == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(v.imag() == doctest::Approx(2.0 / M_PI).epsilon(1e-14));

  // k = 0 gives the total mass
  CHECK(box.fourier(0.0).real() == doctest::Approx(1.0));
  CHECK(box.fourier(0.0).imag() == doctest::Approx(0.0));

  // triangle (1 - y) on [0, 1]: k -> 0 limit is the area 1/2
  ProfileForm tri = ProfileForm::triangle(0.0, 1.0, 1.0, 0.0);
  CHECK(tri.fourier(0.0).real() == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(tri.fourier(1e-9).real() == doctest::Approx(0.5).epsilon(1e-7));

  // against direct quadrature at several k
  for (double k : {0.3, 1.0, 2.7, -1.4}) {
    auto direct_re = adaptive_simpson(
        [&](double y) { return tri.eval(y) * std::cos(2.0 * k * y); }, 0.0, 1.0, 1e-13);
    auto direct_im = adaptive_simpson(
        [&](double y) { return tri.eval(y) * std::sin(2.0 * k * y); }, 0.0, 1.0, 1e-13);
    complex<double> got = tri.fourier(k);
    CHECK(got.real() == doctest::Approx(direct_re).epsilon(1e-11));
    CHECK(got.imag() == doctest::Approx(direct_im).epsilon(1e-11));
  }
}

TEST_CASE("fourier conjugate symmetry for real profiles") {
  Profile p = delta_decomposition(1.0);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(0.01, 8.0);
  for (int i = 0; i < 50; ++i) {
    double k = u(rng);
    for (ProfilePart part : {ProfilePart::S, ProfilePart::T}) {
      complex<double> plus = profile_fourier(p, k, part);
      complex<double> minus = profile_fourier(p, -k, part);
      CHECK(std::abs(minus - std::conj(plus)) < 1e-13 * (1.0 + std::abs(plus)));
    }
  }
}

TEST_CASE("sampled tables interpolate piecewise-linearly") {
  ProfileForm t = ProfileForm::sampled_table({-1.0, 0.0, 1.0}, {0.0, 2.0, 0.0});
  CHECK(t.eval(-0.5) == doctest::Approx(1.0));
  CHECK(t.eval(0.5) == doctest::Approx(1.0));
  CHECK(t.eval(1.5) == 0.0);
  CHECK(t.total_mass() == doctest::Approx(2.0));
  CHECK(t.l1_norm() == doctest::Approx(2.0));
  CHECK_THROWS_AS(ProfileForm::sampled_table({0.0, 0.0}, {1.0, 1.0}), Error);
}

TEST_CASE("profile validation") {
  Profile p = delta_decomposition(1.0);
  p.half_width = 0.25;  // support now exceeds the declared half-width
  CHECK_THROWS_AS(p.validate(), Error);
  CHECK_THROWS_AS(delta_decomposition(-1.0), Error);
}
