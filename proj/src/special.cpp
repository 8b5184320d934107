#include "h1spec/special.hpp"

#include <cmath>
#include <limits>

namespace h1spec {

namespace {
constexpr double kEuler = 0.57721566490153286060651209;
constexpr double kPiHalf = 1.57079632679489661923132169;
}  // namespace

void cisi(double x, double& ci, double& si) {
  const double ax = std::fabs(x);
  if (ax == 0.0) {
    si = 0.0;
    ci = -std::numeric_limits<double>::infinity();
    return;
  }
  if (ax <= 2.0) {
    // power series: Si = sum (-1)^k x^{2k+1} / ((2k+1)(2k+1)!)
    //               Cin = sum (-1)^{k+1} x^{2k} / (2k (2k)!), Ci = gamma + ln x - Cin...
    double sums = 0.0, sumc = 0.0, term = ax;
    for (int k = 0; k < 40; ++k) {
      int n = 2 * k + 1;
      sums += ((k % 2) ? -1.0 : 1.0) * term / n;
      term *= ax / (n + 1);  // now x^{2k+2}/(2k+2)!
      sumc += ((k % 2) ? -1.0 : 1.0) * term / (n + 1);
      term *= ax / (n + 2);  // x^{2k+3}/(2k+3)!
      if (term < 1e-20) break;
    }
    si = sums;
    ci = kEuler + std::log(ax) - sumc;
  } else {
    // modified Lentz continued fraction for the exponential integral of i*x
    std::complex<double> b(1.0, ax), c(1e308, 0.0);
    std::complex<double> d = 1.0 / b, h = d;
    for (int i = 2; i <= 200; ++i) {
      double a = -(i - 1.0) * (i - 1.0);
      b += 2.0;
      d = 1.0 / (a * d + b);
      c = b + a / c;
      std::complex<double> del = c * d;
      h *= del;
      if (std::fabs(del.real() - 1.0) + std::fabs(del.imag()) < 1e-17) break;
    }
    h *= std::complex<double>(std::cos(ax), -std::sin(ax));
    ci = -h.real();
    si = kPiHalf + h.imag();
  }
  if (x < 0.0) si = -si;
}

double sin2t_over_t_tail(double x) {
  double c, s;
  cisi(2.0 * x, c, s);
  return kPiHalf - s;
}

double smoothstep(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  return u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
}

double smoothstep_deriv(double u) {
  if (u <= 0.0 || u >= 1.0) return 0.0;
  return 30.0 * u * u * (1.0 + u * (-2.0 + u));
}

std::complex<double> phi_a(std::complex<double> x) {
  if (std::abs(x) < 0.5) {
    std::complex<double> term(1.0, 0.0), sum(1.0, 0.0);
    for (int n = 1; n < 24; ++n) {
      term *= x / double(n + 1);
      sum += term;
      if (std::abs(term) < 1e-20) break;
    }
    return sum;
  }
  return (std::exp(x) - 1.0) / x;
}

std::complex<double> phi_b(std::complex<double> x) {
  if (std::abs(x) < 0.5) {
    // sum x^n / (n! (n+2))
    std::complex<double> term(1.0, 0.0), sum(0.5, 0.0);
    for (int n = 1; n < 24; ++n) {
      term *= x / double(n);
      sum += term / double(n + 2);
      if (std::abs(term) < 1e-20) break;
    }
    return sum;
  }
  return (std::exp(x) * (x - 1.0) + 1.0) / (x * x);
}

std::complex<double> expm1c(std::complex<double> z) {
  if (std::abs(z) < 0.5) {
    std::complex<double> term = z, sum = z;
    for (int n = 2; n < 24; ++n) {
      term *= z / double(n);
      sum += term;
      if (std::abs(term) < 1e-22) break;
    }
    return sum;
  }
  return std::exp(z) - 1.0;
}

}  // namespace h1spec
