#include "h1spec/dd.hpp"

#include <algorithm>
#include <cmath>

namespace h1spec {

namespace {

// subtract q * 2pi from the expansion, with q split into exact <=2^32 chunks
void subtract_q_two_pi(std::vector<double>& comps, long double q) {
  if (q == 0.0L) return;
  const double* tp = two_pi_expansion();
  long double qa = std::floor(std::fabs(q) / 4294967296.0L);
  double sign = q < 0 ? -1.0 : 1.0;
  double q_hi = static_cast<double>(qa);                                  // <= 2^31
  double q_lo = static_cast<double>(std::fabs(q) - qa * 4294967296.0L);   // < 2^32
  for (int i = 0; i < 4; ++i) {
    if (q_hi != 0.0) {
      DD p = two_prod(tp[i] * 4294967296.0, sign * q_hi);  // power-of-two scale is exact
      comps.push_back(-p.hi);
      if (p.lo != 0.0) comps.push_back(-p.lo);
    }
    DD p2 = two_prod(tp[i], sign * q_lo);
    comps.push_back(-p2.hi);
    if (p2.lo != 0.0) comps.push_back(-p2.lo);
  }
}

long double expansion_value_ld(const std::vector<double>& comps) {
  // ascending-magnitude sum in long double
  std::vector<double> s = comps;
  std::sort(s.begin(), s.end(),
            [](double a, double b) { return std::fabs(a) < std::fabs(b); });
  long double acc = 0.0L;
  for (double c : s) acc += static_cast<long double>(c);
  return acc;
}

}  // namespace

DD reduce_mod_two_pi(const std::vector<double>& value_expansion) {
  const long double two_pi_ld = 6.28318530717958647692528676655900577L;
  std::vector<double> comps = value_expansion;
  // A first pass leaves a residual bounded by the quotient rounding error
  // (large when the input is ~2^75); iterate until inside [-pi, pi].
  for (int pass = 0; pass < 4; ++pass) {
    long double v = expansion_value_ld(comps);
    long double q = std::floor(v / two_pi_ld + 0.5L);
    if (q == 0.0L) break;
    subtract_q_two_pi(comps, q);
  }
  DD r = expansion_to_dd(comps);
  const DD tp = dd_two_pi();
  while (r.hi > 3.14159265358979324) r = dd_sub(r, tp);
  while (r.hi < -3.14159265358979324) r = dd_add(r, tp);
  return r;
}

}  // namespace h1spec
