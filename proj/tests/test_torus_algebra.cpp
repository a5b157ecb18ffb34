#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nctorus/torus_algebra.hpp"

using namespace nct;

namespace {
const double th = std::sqrt(2.0) - 1.0;
const TorusElement U1 = TorusElement::monomial(1, 0);
const TorusElement U2 = TorusElement::monomial(0, 1);
}  // namespace

TEST_CASE("commutation U1 U2 = e^{2 pi i theta} U2 U1") {
  const TorusElement lhs = mul(U1, U2, th);
  const TorusElement rhs = std::exp(2.0 * kPi * kI * th) * mul(U2, U1, th);
  CHECK(max_diff(lhs, rhs) < 1e-14);
  CHECK(std::abs(lhs(1, 1) - cd(1.0)) < 1e-15);
}

TEST_CASE("mul reference values") {
  // brute-force convolution values
  const TorusElement p = mul(U1 + U2, U1 - U2, th);
  CHECK(std::abs(p(1, 1) - cd(-1.8582161856688177, -0.5132883971570613)) < 1e-12);
  CHECK(std::abs(p(2, 0) - cd(1.0)) < 1e-15);
  CHECK(std::abs(p(0, 2) - cd(-1.0)) < 1e-15);
  const TorusElement q = mul(U2, U1, th);
  CHECK(std::abs(q(1, 1) - cd(-0.8582161856688179, -0.5132883971570613)) < 1e-12);
}

TEST_CASE("associativity and unit on random elements") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 20; ++t) {
    const TorusElement a = random_element(3, 1, 1.0, rng), b = random_element(3, 1, 1.0, rng), c = random_element(2, 1, 1.0, rng);
    const TorusElement l = mul(mul(a, b, th), c, th), r = mul(a, mul(b, c, th), th);
    CHECK(max_diff(l, r) < 1e-12 * (1.0 + l2_norm(l)));
    CHECK(max_diff(mul(TorusElement::unit(), a, th), a) < 1e-15);
  }
}

TEST_CASE("matrix coefficients multiply as blocks") {
  std::mt19937_64 rng(5);
  const TorusElement a = random_element(2, 2, 1.0, rng), b = random_element(2, 2, 1.0, rng), c = random_element(1, 2, 1.0, rng);
  CHECK(max_diff(mul(mul(a, b, th), c, th), mul(a, mul(b, c, th), th)) < 1e-12);
}

TEST_CASE("star is an antilinear anti-involution and trace is positive") {
  std::mt19937_64 rng(9);
  const TorusElement s = star(mul(U1, U2, th), th);
  CHECK(std::abs(s(-1, -1) - cd(-0.8582161856688179, -0.5132883971570613)) < 1e-12);
  for (int t = 0; t < 20; ++t) {
    const TorusElement a = random_element(3, 1, 1.0, rng), b = random_element(3, 1, 1.0, rng);
    CHECK(max_diff(star(star(a, th), th), a) < 1e-14);
    CHECK(max_diff(star(mul(a, b, th), th), mul(star(b, th), star(a, th), th)) < 1e-12);
    const cd n = trace(mul(star(a, th), a, th));
    CHECK(std::abs(n.imag()) < 1e-12);
    CHECK(std::abs(n.real() - l2_norm(a) * l2_norm(a)) < 1e-12 * n.real());
    CHECK(std::abs(trace(mul(a, b, th)) - trace(mul(b, a, th))) < 1e-12);
  }
}

TEST_CASE("delta_tau is a derivation") {
  std::mt19937_64 rng(11);
  const cd tau(0.3, -1.1);
  CHECK(std::abs(delta_tau(U1, tau)(1, 0) - 2.0 * kPi * kI * tau) < 1e-14);
  CHECK(std::abs(delta_tau(U2, tau)(0, 1) - 2.0 * kPi * kI) < 1e-14);
  for (int t = 0; t < 100; ++t) {
    const TorusElement a = random_element(3, 1, 1.0, rng), b = random_element(3, 1, 1.0, rng);
    const TorusElement lhs = delta_tau(mul(a, b, th), tau);
    const TorusElement rhs = mul(delta_tau(a, tau), b, th) + mul(a, delta_tau(b, tau), th);
    CHECK(max_diff(lhs, rhs) <= 1e-8 * l2_norm(lhs));
    CHECK(std::abs(trace(delta_tau(a, tau))) < 1e-15);
  }
}

TEST_CASE("coefficient norms agree between SVD and power iteration") {
  std::mt19937_64 rng(13);
  const TorusElement a = random_element(2, 3, 1.0, rng);
  CHECK(std::abs(coeff_norm(a) - coeff_norm_power(a)) < 1e-9 * coeff_norm(a));
  const TorusElement b = random_element_with_norm(2, 2, 0.1, rng);
  CHECK(std::abs(coeff_norm(b) - 0.1) < 1e-12);
}

TEST_CASE("band handling") {
  const TorusElement a = TorusElement::monomial(2, -1, cd(2.0, 1.0));
  CHECK(a.band() == 2);
  CHECK(a(5, 5) == cd(0.0));
  CHECK(truncate(a, 1).is_zero());
  CHECK(a.widened(4)(2, -1) == cd(2.0, 1.0));
  CHECK(mul(a, a, th).band() == 4);
  TorusParams p{th, cd(0.0, 1.0)};
  CHECK_NOTHROW(p.validate(false));
  CHECK_THROWS_AS(p.validate(true), std::invalid_argument);
}
