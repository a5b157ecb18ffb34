#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nctorus/heisenberg.hpp"

using namespace nct;

namespace {
const double th = std::sqrt(2.0) - 1.0;

double rel(const SectionGrid& a, const SectionGrid& b) { return (a - b).norm() / b.norm(); }

SectionGrid packet(const BundleSpec& s, const GridSpec& g, unsigned seed) {
  std::mt19937_64 rng(seed);
  return random_section(s, g, 0.8, 2.0, rng);
}

const std::vector<std::pair<long long, long long>> kSpecs = {{1, 1}, {2, 1}, {3, 2}, {-1, 2}, {-3, 2}, {3, -1}, {1, 0}};
}  // namespace

TEST_CASE("bundle spec invariants") {
  CHECK_THROWS_AS(BundleSpec(2, 4, th), std::invalid_argument);
  CHECK_THROWS_AS(BundleSpec(-3, 1, th), std::invalid_argument);
  CHECK_THROWS_AS(BundleSpec(0, 2, th), std::invalid_argument);
  const BundleSpec s(3, 2, th, 2);
  CHECK(s.sectors() == 3);
  CHECK(s.mu() == doctest::Approx(3.0 / s.rank()));
  const BundleSpec d = s.dual();
  CHECK(d.c == -3);
  CHECK(d.d == 2);
  CHECK(d.theta == doctest::Approx(s.theta_prime()));
  CHECK(d.copies == 2);
}

TEST_CASE("displacement algebra") {
  const BundleSpec s(3, 2, th);
  const Displacement w = word(s, Side::Right, 2, -1);
  const Displacement id = compose(w, inverse(w));
  CHECK(std::abs(id.omega) < 1e-14);
  CHECK(std::abs(id.delta) < 1e-14);
  CHECK(id.sigma % 3 == 0);
  for (double p : id.phase) CHECK(std::abs(std::remainder(p, 2.0 * kPi)) < 1e-12);
}

TEST_CASE("right action relation U1 U2 = e^{2 pi i theta} U2 U1") {
  for (auto [c, d] : kSpecs) {
    const BundleSpec s(c, d, th);
    const GridSpec g{16.0, 1024};
    const SectionGrid f = packet(s, g, 1);
    const SectionGrid a = act_U2(act_U1(f));
    const SectionGrid b = std::exp(2.0 * kPi * kI * th) * act_U1(act_U2(f));
    INFO(s.label());
    CHECK(rel(a, b) < 1e-8);
  }
}

TEST_CASE("left action relation with theta' and commuting actions") {
  for (auto [c, d] : kSpecs) {
    const BundleSpec s(c, d, th);
    const GridSpec g{16.0, 1024};
    const SectionGrid f = packet(s, g, 2);
    const SectionGrid a = act_left(act_left(f, Gen::U2), Gen::U1);
    const SectionGrid b = std::exp(2.0 * kPi * kI * s.theta_prime()) * act_left(act_left(f, Gen::U1), Gen::U2);
    INFO(s.label());
    CHECK(rel(a, b) < 1e-8);
    for (Gen gl : {Gen::U1, Gen::U2}) {
      CHECK(rel(act_left(act_U1(f), gl), act_U1(act_left(f, gl))) < 1e-8);
      CHECK(rel(act_left(act_U2(f), gl), act_U2(act_left(f, gl))) < 1e-8);
    }
  }
}

TEST_CASE("algebra sections (c = 0)") {
  const BundleSpec s(0, 1, th, 2);
  std::mt19937_64 rng(4);
  AlgebraSection f(s, 3);
  for (auto& e : f.comps) e = random_element(3, 1, 1.0, rng);
  const AlgebraSection a = act_U2(act_U1(f));
  const AlgebraSection b = act_U1(act_U2(f));
  for (size_t i = 0; i < a.comps.size(); ++i) CHECK(max_diff(a.comps[i], std::exp(2.0 * kPi * kI * th) * b.comps[i]) < 1e-12);
  const AlgebraSection l = act_left(act_left(f, Gen::U1), Gen::U2);
  const AlgebraSection r = act_left(act_left(f, Gen::U2), Gen::U1);
  for (size_t i = 0; i < l.comps.size(); ++i) CHECK(max_diff(r.comps[i], std::exp(2.0 * kPi * kI * th) * l.comps[i]) < 1e-12);
}

TEST_CASE("torus elements act as module maps") {
  std::mt19937_64 rng(6);
  for (int copies : {1, 2}) {
    const BundleSpec s(2, 1, th, copies);
    const GridSpec g{20.0, 2048};
    const SectionGrid f = packet(s, g, 3);
    const TorusElement a = random_element(1, copies, 0.5, rng), b = random_element(1, copies, 0.5, rng);
    const SectionGrid r1 = apply_torus_element(apply_torus_element(f, a, Side::Right), b, Side::Right);
    const SectionGrid r2 = apply_torus_element(f, mul(a, b, th), Side::Right);
    CHECK(rel(r1, r2) < 1e-8);
    const SectionGrid l1 = apply_torus_element(apply_torus_element(f, b, Side::Left), a, Side::Left);
    const SectionGrid l2 = apply_torus_element(f, mul(a, b, s.theta_prime()), Side::Left);
    CHECK(rel(l1, l2) < 1e-8);
    const SectionGrid h = packet(s, g, 8);
    for (Side side : {Side::Left, Side::Right}) {
      const cd x = grid_inner(apply_torus_element(f, a, side), h);
      const cd y = grid_inner(f, apply_torus_element_adjoint(h, a, side));
      CHECK(std::abs(x - y) < 1e-10 * f.norm() * h.norm());
    }
  }
}

TEST_CASE("Hermite transform round trip and tails") {
  const BundleSpec s(1, 1, th);
  const double lam = 2.0 * kPi * s.mu();
  const HermiteFrame fr{0.3, -0.2, 0.4};
  SectionHermite h(s, lam, 40, fr);
  std::mt19937_64 rng(10);
  std::normal_distribution<double> nd;
  for (int n = 0; n < 40; ++n) h.at(0, 0)(n) = cd(nd(rng), nd(rng)) / (1.0 + n);
  const GridSpec g{14.0, 1024};
  const SectionGrid f = to_grid(h, g);
  const SectionHermite back = to_hermite(f, 40, lam, fr);
  CHECK((back.flat() - h.flat()).norm() < 1e-10 * h.norm());
  CHECK(f.norm() == doctest::Approx(h.norm()).epsilon(1e-10));
  CHECK_THROWS_AS(to_hermite(f, 40, lam, fr, 50), std::invalid_argument);
  SectionHermite g0(s, lam, 1);
  g0.at(0, 0)(0) = 1.0;
  const TailReport t = tail_report(to_grid(g0, g));
  CHECK(t.ok());
  CHECK(t.edge_max < 1e-12);
  const TailReport bad = tail_report(to_grid(g0, GridSpec{1.0, 64}));
  CHECK_FALSE(bad.ok());
}
