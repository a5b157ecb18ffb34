#include "nctorus/interval.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace nct {

namespace {
double down(double x) { return std::nextafter(x, -std::numeric_limits<double>::infinity()); }
double up(double x) { return std::nextafter(x, std::numeric_limits<double>::infinity()); }
}  // namespace

Interval::Interval(double l, double h) : lo(l), hi(h) {
  if (!(l <= h)) throw std::invalid_argument("Interval: lo > hi");
}

Interval Interval::around(double x, double radius) { return Interval(down(x - radius), up(x + radius)); }

std::optional<int> Interval::sign() const {
  if (lo > 0.0) return 1;
  if (hi < 0.0) return -1;
  return std::nullopt;
}

Interval operator+(const Interval& a, const Interval& b) { return {down(a.lo + b.lo), up(a.hi + b.hi)}; }
Interval operator-(const Interval& a, const Interval& b) { return {down(a.lo - b.hi), up(a.hi - b.lo)}; }
Interval operator-(const Interval& a) { return {-a.hi, -a.lo}; }

Interval operator*(const Interval& a, const Interval& b) {
  const double c[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  double lo = c[0], hi = c[0];
  for (double v : c) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return {down(lo), up(hi)};
}

Interval operator/(const Interval& a, const Interval& b) {
  if (b.lo <= 0.0 && b.hi >= 0.0) throw std::domain_error("Interval: division by interval containing 0");
  return a * Interval(down(1.0 / b.hi), up(1.0 / b.lo));
}

double QuadraticSurd::value() const {
  return (static_cast<double>(p) + static_cast<double>(q) * std::sqrt(static_cast<double>(D))) / static_cast<double>(r);
}

int surd_sign(__int128 x, __int128 y, std::int64_t D) {
  const int sx = (x > 0) - (x < 0);
  const int sy = (y > 0) - (y < 0);
  if (sy == 0) return sx;
  if (sx == 0 || sx == sy) return sy;
  const __int128 lim = static_cast<__int128>(1) << 60;
  if (x > lim || -x > lim || y > lim || -y > lim) throw std::overflow_error("surd_sign: operands too large");
  const __int128 lhs = x * x;
  const __int128 rhs = y * y * static_cast<__int128>(D);
  if (lhs == rhs) return 0;
  return (lhs > rhs) ? sx : sy;
}

ThetaRef ThetaRef::sqrt2_minus_1() {
  ThetaRef t;
  t.exact = QuadraticSurd{-1, 1, 2, 1};
  t.value = std::sqrt(2.0) - 1.0;
  return t;
}

ThetaRef ThetaRef::golden() {
  ThetaRef t;
  t.exact = QuadraticSurd{-1, 1, 5, 2};
  t.value = (std::sqrt(5.0) - 1.0) / 2.0;
  return t;
}

ThetaRef ThetaRef::from_double(double theta) {
  for (ThetaRef t : {sqrt2_minus_1(), golden()})
    if (std::abs(theta - t.value) <= 4.0 * std::numeric_limits<double>::epsilon()) return t;
  ThetaRef t;
  t.value = theta;
  t.radius = 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(theta));
  return t;
}

Interval ThetaRef::enclosure() const {
  if (exact) return Interval::around(value, 4.0 * std::numeric_limits<double>::epsilon());
  return Interval::around(value, radius);
}

std::string ThetaRef::describe() const {
  std::ostringstream os;
  os.precision(17);
  if (exact) os << "exact (" << exact->p << "+" << exact->q << "*sqrt(" << exact->D << "))/" << exact->r;
  else os << "enclosure " << value << " +- " << radius;
  return os.str();
}

std::optional<int> certified_sign(std::int64_t A, std::int64_t B, const ThetaRef& th) {
  if (B == 0) return (A > 0) - (A < 0);
  if (th.exact) {
    const auto& s = *th.exact;
    const __int128 x = static_cast<__int128>(A) * s.r + static_cast<__int128>(B) * s.p;
    const __int128 y = static_cast<__int128>(B) * s.q;
    const int sg = surd_sign(x, y, s.D);
    return sg;
  }
  const Interval v = Interval(static_cast<double>(A)) + Interval(static_cast<double>(B)) * th.enclosure();
  return v.sign();
}

int require_sign(std::int64_t A, std::int64_t B, const ThetaRef& th, const char* what) {
  auto s = certified_sign(A, B, th);
  if (!s) throw std::runtime_error(std::string(what) + ": sign not certified for " + th.describe());
  return *s;
}

}  // namespace nct
