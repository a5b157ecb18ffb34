#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace nct {

// Closed interval with outward rounding (one ulp per operation).
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  Interval() = default;
  Interval(double x) : lo(x), hi(x) {}
  Interval(double l, double h);

  static Interval around(double x, double radius);
  double mid() const { return 0.5 * (lo + hi); }
  double width() const { return hi - lo; }
  bool contains(double x) const { return lo <= x && x <= hi; }
  // +1, -1, or nullopt when 0 is inside
  std::optional<int> sign() const;
};

Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a, const Interval& b);
Interval operator*(const Interval& a, const Interval& b);
Interval operator/(const Interval& a, const Interval& b);
Interval operator-(const Interval& a);

// (p + q*sqrt(D)) / r with r > 0 and D not a perfect square
struct QuadraticSurd {
  std::int64_t p = 0, q = 0, D = 2, r = 1;
  double value() const;
};

// sign of x + y*sqrt(D), exact
int surd_sign(__int128 x, __int128 y, std::int64_t D);

// The ambient theta: a double plus either an exact surd or an enclosure radius.
struct ThetaRef {
  double value = 0.0;
  std::optional<QuadraticSurd> exact;
  double radius = 0.0;

  static ThetaRef from_double(double theta);  // recognises sqrt2-1 and (sqrt5-1)/2
  static ThetaRef sqrt2_minus_1();
  static ThetaRef golden();
  Interval enclosure() const;
  std::string describe() const;
};

// sign of A + B*theta; nullopt only in enclosure mode when the interval straddles 0
std::optional<int> certified_sign(std::int64_t A, std::int64_t B, const ThetaRef& th);
// throws std::runtime_error when the sign cannot be certified
int require_sign(std::int64_t A, std::int64_t B, const ThetaRef& th, const char* what);

}  // namespace nct
