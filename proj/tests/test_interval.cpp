#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nctorus/interval.hpp"

using namespace nct;

TEST_CASE("outward rounding keeps the true value") {
  const Interval a(0.1), b(0.2);
  const Interval s = a + b;
  CHECK(s.lo < 0.30000000000000004);
  CHECK(s.contains(0.3));
  const Interval p = Interval(1.0) / Interval(3.0);
  CHECK(p.lo < 1.0 / 3.0);
  CHECK(p.hi > 1.0 / 3.0);
  CHECK_FALSE(Interval(-1e-300, 1e-300).sign().has_value());
  CHECK(*Interval(1e-300, 2e-300).sign() == 1);
  CHECK(*(-Interval(1.0, 2.0)).sign() == -1);
}

TEST_CASE("exact surd signs") {
  CHECK(surd_sign(-1, 1, 2) == 1);   // sqrt2 - 1
  CHECK(surd_sign(3, -2, 2) == 1);   // 3 - 2 sqrt2 > 0
  CHECK(surd_sign(-3, 2, 2) == -1);
  CHECK(surd_sign(-17, 12, 2) == -1);  // 12 sqrt2 = 16.97...
  CHECK(surd_sign(0, 0, 5) == 0);
  // 99^2 - 2*70^2 = 1
  CHECK(surd_sign(99, -70, 2) == 1);
  CHECK(surd_sign(-99, 70, 2) == -1);
}

TEST_CASE("theta recognition and certified signs") {
  const ThetaRef s = ThetaRef::from_double(std::sqrt(2.0) - 1.0);
  REQUIRE(s.exact.has_value());
  const ThetaRef g = ThetaRef::from_double((std::sqrt(5.0) - 1.0) / 2.0);
  REQUIRE(g.exact.has_value());
  const ThetaRef p = ThetaRef::from_double(M_PI - 3.0);
  CHECK_FALSE(p.exact.has_value());
  CHECK(p.enclosure().contains(M_PI - 3.0));
  // 70 theta - 29 with theta = sqrt2 - 1: 70 sqrt2 - 99 < 0 by ~ 0.0036
  CHECK(*certified_sign(-29, 70, s) == -1);
  // large Pell convergent 5741/13860: 13860 sqrt2 - 19601 about -2.6e-5
  CHECK(*certified_sign(-5741, 13860, s) == -1);
  CHECK(*certified_sign(2, -3, g) == 1);
  CHECK(*certified_sign(-1, 7, p) == -1);  // 7 * 0.14159 - 1 = -0.0088
  ThetaRef loose;
  loose.value = 0.5;
  loose.radius = 0.1;
  CHECK_THROWS_AS(require_sign(-1, 2, loose, "straddle"), std::runtime_error);
  CHECK(require_sign(-1, 3, loose, "clear") == 1);
  CHECK(s.describe().find("sqrt") != std::string::npos);
}
