#pragma once

// Compensated (double-double) arithmetic for phase accumulation, plus a small
// set of Shewchuk expansion primitives used for argument reduction of very
// large phases (k * gap with gaps up to ~2^75).

#include <cmath>
#include <cstdint>
#include <vector>

namespace h1spec {

struct DD {
  double hi = 0.0;
  double lo = 0.0;
  DD() = default;
  DD(double h) : hi(h), lo(0.0) {}
  DD(double h, double l) : hi(h), lo(l) {}
  double value() const { return hi + lo; }
};

// error-free transformations
inline DD two_sum(double a, double b) {
  double s = a + b;
  double bb = s - a;
  double err = (a - (s - bb)) + (b - bb);
  return DD(s, err);
}

inline DD quick_two_sum(double a, double b) {  // requires |a| >= |b|
  double s = a + b;
  double err = b - (s - a);
  return DD(s, err);
}

inline DD two_prod(double a, double b) {
  double p = a * b;
  double err = std::fma(a, b, -p);
  return DD(p, err);
}

inline DD dd_add(const DD& a, const DD& b) {
  DD s = two_sum(a.hi, b.hi);
  double lo = s.lo + a.lo + b.lo;
  return quick_two_sum(s.hi, lo);
}

inline DD dd_add(const DD& a, double b) {
  DD s = two_sum(a.hi, b);
  double lo = s.lo + a.lo;
  return quick_two_sum(s.hi, lo);
}

inline DD dd_sub(const DD& a, const DD& b) { return dd_add(a, DD(-b.hi, -b.lo)); }

inline DD dd_mul(const DD& a, double b) {
  DD p = two_prod(a.hi, b);
  double lo = p.lo + a.lo * b;
  return quick_two_sum(p.hi, lo);
}

inline DD dd_mul(double a, double b) { return two_prod(a, b); }

// 2*pi to ~210 bits, descending magnitude, exact doubles.
inline const double* two_pi_expansion() {
  static const double tp[4] = {
      6.283185307179586232e+00, 2.449293598294706414e-16,
      -5.989539619436679332e-33, 2.224908441726730563e-49};
  return tp;
}

inline DD dd_two_pi() {
  const double* tp = two_pi_expansion();
  return DD(tp[0], tp[1]);
}

// sums all components with error-free transformations; returns DD of the total.
inline DD expansion_to_dd(std::vector<double> comps) {
  // distillation: repeatedly two_sum through the list
  DD acc(0.0, 0.0);
  // sort by increasing magnitude for stability
  for (size_t pass = 0; pass < comps.size(); ++pass) {
    for (size_t i = 0; i + 1 < comps.size(); ++i) {
      if (std::fabs(comps[i]) > std::fabs(comps[i + 1])) std::swap(comps[i], comps[i + 1]);
    }
  }
  for (double c : comps) acc = dd_add(acc, c);
  return acc;
}

// Reduce the exact value k*g (g supplied as an exact expansion) modulo 2*pi
// into [-pi, pi], using the 210-bit value of 2*pi. The quotient may be as
// large as ~2^63; it is split into exact 32-bit chunks so every product in
// the reduction is error-free.
DD reduce_mod_two_pi(const std::vector<double>& value_expansion);

// Convenience: reduce a DD angle into [-pi, pi].
inline DD dd_reduce_angle(const DD& th) {
  std::vector<double> e;
  if (th.lo != 0.0) e.push_back(th.lo);
  e.push_back(th.hi);
  return reduce_mod_two_pi(e);
}

// sin/cos of a DD angle, evaluated after reduction; accuracy ~1e-15 absolute.
inline double dd_sin(const DD& th) {
  DD r = dd_reduce_angle(th);
  return std::sin(r.hi) + r.lo * std::cos(r.hi);
}
inline double dd_cos(const DD& th) {
  DD r = dd_reduce_angle(th);
  return std::cos(r.hi) - r.lo * std::sin(r.hi);
}

}  // namespace h1spec
