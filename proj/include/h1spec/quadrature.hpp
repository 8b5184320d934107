#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace h1spec {

// Composite trapezoid over sample pairs (x_i, f_i), x sorted.
inline double trapezoid_samples(const std::vector<double>& x,
                                const std::vector<double>& f) {
  double s = 0.0;
  for (size_t i = 0; i + 1 < x.size(); ++i)
    s += 0.5 * (f[i] + f[i + 1]) * (x[i + 1] - x[i]);
  return s;
}

namespace detail {

template <class F>
double adaptive_simpson_rec(F&& f, double a, double b, double fa, double fm,
                            double fb, double whole, double eps, int depth) {
  double m = 0.5 * (a + b);
  if (!(a < m && m < b)) return whole;  // interval below ulp resolution
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  if (!(a < lm && rm < b)) return whole;
  double flm = f(lm), frm = f(rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  double diff = (left + right) - whole;
  if (depth <= 0 || std::fabs(diff) <= 15.0 * eps)
    return left + right + diff / 15.0;
  return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
         adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
}

}  // namespace detail

template <class F>
double adaptive_simpson(F&& f, double a, double b, double tol = 1e-10,
                        int max_depth = 40) {
  if (a == b) return 0.0;
  if (b < a) return -adaptive_simpson(f, b, a, tol, max_depth);
  double fa = f(a), fb = f(b), m = 0.5 * (a + b), fm = f(m);
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

// 16-point Gauss-Legendre nodes/weights on [-1, 1] (symmetric halves).
struct GL16 {
  static const double* nodes();
  static const double* weights();
};

template <class F>
double gauss16(F&& f, double a, double b) {
  const double* xn = GL16::nodes();
  const double* wn = GL16::weights();
  double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < 8; ++i) {
    s += wn[i] * (f(c - h * xn[i]) + f(c + h * xn[i]));
  }
  return s * h;
}

// composite GL16 over n panels
template <class F>
double gauss16_composite(F&& f, double a, double b, int panels) {
  double s = 0.0, h = (b - a) / panels;
  for (int i = 0; i < panels; ++i) s += gauss16(f, a + i * h, a + (i + 1) * h);
  return s;
}

}  // namespace h1spec
