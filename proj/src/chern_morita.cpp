#include "nctorus/chern_morita.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace nct {

long long gcd_ll(long long a, long long b) { return std::gcd(a, b); }

namespace {
long long floor_mod(long long x, long long m) {
  long long r = x % m;
  return r < 0 ? r + m : r;
}

// x with a*x = 1 mod m, m > 0
long long mod_inverse(long long a, long long m) {
  long long g = m, x = 0, x1 = 1, a1 = floor_mod(a, m);
  while (a1 != 0) {
    long long q = g / a1;
    long long t = g - q * a1;
    g = a1;
    a1 = t;
    t = x - q * x1;
    x = x1;
    x1 = t;
  }
  if (g != 1) throw std::invalid_argument("mod_inverse: not invertible");
  return floor_mod(x, m);
}
}  // namespace

SL2 complete_sl2(long long c, long long d) {
  if (gcd_ll(c, d) != 1) throw std::invalid_argument("complete_sl2: gcd(c,d) != 1");
  if (c == 0) return {d, 0};
  const long long C = std::llabs(c);
  const long long a = (C == 1) ? 0 : mod_inverse(d, C);
  const long long num = a * d - 1;
  if (num % c != 0) throw std::logic_error("complete_sl2: inconsistent completion");
  return {a, num / c};
}

double theta_prime(long long c, long long d, double theta) {
  const double r = static_cast<double>(c) * theta + static_cast<double>(d);
  if (!(r > 0.0)) throw std::invalid_argument("theta_prime: c*theta+d must be > 0");
  const SL2 s = complete_sl2(c, d);
  return (static_cast<double>(s.a) * theta + static_cast<double>(s.b)) / r;
}

double theta_from_prime(long long c, long long d, double tp) {
  const SL2 s = complete_sl2(c, d);
  // inverse matrix (d -b; -c a)
  return (static_cast<double>(d) * tp - static_cast<double>(s.b)) / (-static_cast<double>(c) * tp + static_cast<double>(s.a));
}

double rank_of(const ChernPair& e, double theta) { return static_cast<double>(e.c) * theta + static_cast<double>(e.d); }

double slope_of(const ChernPair& e, double theta) { return static_cast<double>(e.c) / rank_of(e, theta); }

bool rank_positive(const ChernPair& e, const ThetaRef& th) { return require_sign(e.d, e.c, th, "rank_positive") > 0; }

long long euler_form(const ChernPair& e1, const ChernPair& e2) {
  return static_cast<long long>(e1.copies) * e2.copies * (e1.d * e2.c - e2.d * e1.c);
}

bool slope_less(const ChernPair& e1, const ChernPair& e2) { return e1.d * e2.c - e2.d * e1.c > 0; }

HomBundle hom_bundle(const ChernPair& e0, const ChernPair& e, double theta) {
  const double r0 = rank_of(e0, theta), r = rank_of(e, theta);
  if (gcd_ll(e0.c, e0.d) != 1 || !(r0 > 0.0)) throw std::invalid_argument("hom_bundle: E0 must be standard");
  if (!(r > 0.0)) throw std::invalid_argument("hom_bundle: rk(E) must be > 0");
  const SL2 s0 = complete_sl2(e0.c, e0.d);
  HomBundle h;
  h.c = e.c * e0.d - e0.c * e.d;
  h.d = s0.a * e.d - s0.b * e.c;
  h.theta = theta_prime(e0.c, e0.d, theta);
  h.copies = e.copies;
  h.rk_ratio = r / r0;
  h.mu_prime = r0 * r0 * (slope_of(e, theta) - slope_of(e0, theta));
  h.deg_numeric = r * r0 * (slope_of(e, theta) - slope_of(e0, theta));
  h.deg = h.c;
  const double scale = 1.0 + std::abs(static_cast<double>(e.c) * r0) + std::abs(static_cast<double>(e0.c) * r);
  if (std::abs(h.deg_numeric - static_cast<double>(h.deg)) > 1e-9 * scale)
    throw std::runtime_error("hom_bundle: deg(E') not integral within tolerance: " + std::to_string(h.deg_numeric));
  return h;
}

DualSpec dual_spec(long long c, long long d, double theta) {
  const SL2 s = complete_sl2(c, d);
  DualSpec ds{-c, s.a, theta_prime(c, d, theta)};
  if (!(static_cast<double>(ds.c) * ds.theta + static_cast<double>(ds.d) > 0.0))
    throw std::logic_error("dual_spec: dual rank not positive");
  return ds;
}

FmChern fm_chern(const ChernPair& e) { return {e.d, -e.c}; }

bool stability(const FmChern& k, const ThetaRef& th) { return require_sign(k.deg, -k.rk, th, "stability") > 0; }

std::optional<double> fm_slope(const ChernPair& e, double theta) {
  if (e.c == 0) return std::nullopt;
  return theta - 1.0 / slope_of(e, theta);
}

}  // namespace nct
